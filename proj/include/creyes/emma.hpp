#pragma once

#include "creyes/fovea.hpp"

namespace creyes {

// Gaze-shift timing model. Times are seconds, eccentricities degrees of
// visual angle.
struct EmmaParams {
  double K = 0.006;            // encoding scale
  double k = 0.4;              // eccentricity slope inside the exponent
  double t_prep = 0.135;       // saccade preparation
  double t_exec_base = 0.070;  // fixed execution cost
  double t_exec_per_deg = 0.002;
  double f = 0.1;              // object frequency, in (0, 1]
  double px_per_deg = 3.0;

  void validate() const;  // throws std::invalid_argument
};

// Euclidean pixel distance converted to degrees.
double eccentricity_deg(GazePoint from, GazePoint to, const EmmaParams& p);

// K * (-ln f) * e^(k * ecc). Throws std::domain_error if f is outside (0, 1].
double encoding_time(double f, double ecc_deg, const EmmaParams& p);

// t_prep + t_exec_base + t_exec_per_deg * ecc for a real shift; 0 when the
// eye does not move.
double saccade_time(double ecc_deg, const EmmaParams& p);

// Full cost of a shift: saccade plus one post-landing foveal encoding. A
// zero-length shift still pays the foveal encoding.
double gaze_shift_time(GazePoint from, GazePoint to, const EmmaParams& p);

}  // namespace creyes
