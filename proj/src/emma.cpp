#include "creyes/emma.hpp"

#include <cmath>
#include <stdexcept>

namespace creyes {

void EmmaParams::validate() const {
  if (!(K > 0.0)) throw std::invalid_argument("emma.K must be > 0");
  if (!(k >= 0.0)) throw std::invalid_argument("emma.k must be >= 0");
  if (!(t_prep >= 0.0)) throw std::invalid_argument("emma.t_prep must be >= 0");
  if (!(t_exec_base >= 0.0)) throw std::invalid_argument("emma.t_exec_base must be >= 0");
  if (!(t_exec_per_deg >= 0.0)) throw std::invalid_argument("emma.t_exec_per_deg must be >= 0");
  if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("emma.f must be in (0, 1]");
  if (!(px_per_deg > 0.0)) throw std::invalid_argument("emma.px_per_deg must be > 0");
}

double eccentricity_deg(GazePoint from, GazePoint to, const EmmaParams& p) {
  const double dx = static_cast<double>(to.x - from.x);
  const double dy = static_cast<double>(to.y - from.y);
  return std::sqrt(dx * dx + dy * dy) / p.px_per_deg;
}

double encoding_time(double f, double ecc_deg, const EmmaParams& p) {
  if (!(f > 0.0) || f > 1.0) throw std::domain_error("encoding frequency must be in (0, 1]");
  return p.K * -std::log(f) * std::exp(p.k * ecc_deg);
}

double saccade_time(double ecc_deg, const EmmaParams& p) {
  if (ecc_deg <= 0.0) return 0.0;
  return p.t_prep + p.t_exec_base + p.t_exec_per_deg * ecc_deg;
}

double gaze_shift_time(GazePoint from, GazePoint to, const EmmaParams& p) {
  const double ecc = eccentricity_deg(from, to, p);
  // Landing is followed by a foveal (zero-eccentricity) encoding of the new
  // content; holding the gaze pays only that encoding.
  return saccade_time(ecc, p) + encoding_time(p.f, 0.0, p);
}

}  // namespace creyes
