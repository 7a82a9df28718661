#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "creyes/core.hpp"
#include "creyes/fovea.hpp"
#include "creyes/rng.hpp"

namespace creyes {

enum class NetVariant { Linear, Deep };

std::string to_string(NetVariant v);
NetVariant net_variant_from_string(const std::string& s);

struct QNetworkSpec {
  NetVariant variant = NetVariant::Linear;
  int memory_depth = 4;
  int motor_out = kMotorActionCount;
  int sensory_out = kSensoryCellCount;

  void validate() const;
  bool operator==(const QNetworkSpec&) const = default;
};

struct TensorDesc {
  std::string name;
  std::vector<int> dims;
  std::size_t offset = 0;
  std::size_t size = 0;
};

struct HeadValues {
  std::array<double, kMotorActionCount> motor{};
  std::array<double, kSensoryCellCount> sensory{};
};

// Post-rectification activations captured during a forward pass, consumed by
// backward(). The conv/fc stages are populated for the deep variant only.
struct ForwardCache {
  std::vector<double> input;
  std::vector<double> conv1;
  std::vector<double> conv2;
  std::vector<double> conv3;
  std::vector<double> fc;
};

// Dual-head Q-network over the observation canvas. Parameters live in one
// flat vector described by a named tensor table, which keeps the optimizer,
// the gradient checks, and the checkpoint format in exact agreement.
class QNetwork {
 public:
  explicit QNetwork(QNetworkSpec spec);

  const QNetworkSpec& spec() const { return spec_; }
  const std::vector<TensorDesc>& tensors() const { return tensors_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }
  std::size_t input_size() const;

  // Linear nets start at zero; deep nets draw scaled Gaussians per weight
  // tensor (variance 2 / fan-in) with zero biases.
  void init_params(SplitMix64& rng);

  // Flattens a canvas into this net's input layout: per-cell mean
  // intensities for the linear variant, raw pixel planes for the deep one.
  std::vector<double> encode(const ObservationCanvas& canvas) const;

  HeadValues forward(const std::vector<double>& input) const;
  HeadValues forward(const std::vector<double>& input, ForwardCache& cache) const;

  // Accumulates d(loss)/d(params) into grad, given d(loss)/d(head outputs).
  // grad must already be sized param_count(); existing values are added to.
  void backward(const ForwardCache& cache,
                const std::array<double, kMotorActionCount>& dmotor,
                const std::array<double, kSensoryCellCount>& dsensory,
                std::vector<double>& grad) const;

  void save(const std::string& path) const;
  static QNetwork load(const std::string& path);

 private:
  const double* tensor_data(std::size_t idx) const { return params_.data() + tensors_[idx].offset; }
  void build_layout();

  QNetworkSpec spec_;
  std::vector<TensorDesc> tensors_;
  std::vector<double> params_;
};

}  // namespace creyes
