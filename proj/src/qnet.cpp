#include "creyes/qnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>

#include "creyes/features.hpp"
#include "creyes/io_util.hpp"

namespace creyes {

namespace {

constexpr char kMagic[8] = {'C', 'R', 'E', 'Y', 'E', 'S', 'Q', '1'};
constexpr std::uint32_t kCheckpointVersion = 1;

struct ConvShape {
  int in_c;
  int in_s;
  int out_c;
  int kernel;
  int stride;
  int out_s() const { return (in_s - kernel) / stride + 1; }
};

ConvShape conv1_shape(int depth) { return {depth, kFrameDim, 32, 8, 4}; }
ConvShape conv2_shape(int depth) { return {conv1_shape(depth).out_c, conv1_shape(depth).out_s(), 64, 4, 2}; }
ConvShape conv3_shape(int depth) { return {conv2_shape(depth).out_c, conv2_shape(depth).out_s(), 64, 3, 1}; }
constexpr int kFcWidth = 512;

int conv_flat_size(const ConvShape& s) { return s.out_c * s.out_s() * s.out_s(); }

void conv_forward(const double* w, const double* b, const double* in, double* out,
                  const ConvShape& s) {
  const int os = s.out_s();
  for (int oc = 0; oc < s.out_c; ++oc) {
    for (int oy = 0; oy < os; ++oy) {
      for (int ox = 0; ox < os; ++ox) {
        double acc = b[oc];
        for (int ic = 0; ic < s.in_c; ++ic) {
          const double* in_ch = in + static_cast<std::size_t>(ic) * s.in_s * s.in_s;
          const double* w_ch =
              w + (static_cast<std::size_t>(oc) * s.in_c + ic) * s.kernel * s.kernel;
          for (int ky = 0; ky < s.kernel; ++ky) {
            const double* in_row = in_ch + static_cast<std::size_t>(oy * s.stride + ky) * s.in_s +
                                   ox * s.stride;
            const double* w_row = w_ch + static_cast<std::size_t>(ky) * s.kernel;
            for (int kx = 0; kx < s.kernel; ++kx) acc += w_row[kx] * in_row[kx];
          }
        }
        out[(static_cast<std::size_t>(oc) * os + oy) * os + ox] = acc > 0.0 ? acc : 0.0;
      }
    }
  }
}

// post holds the rectified outputs of this layer; dpost is d(loss)/d(post).
// din may be null when the input gradient is not needed.
void conv_backward(const double* w, const double* in, const double* post, const double* dpost,
                   double* dw, double* db, double* din, const ConvShape& s) {
  const int os = s.out_s();
  for (int oc = 0; oc < s.out_c; ++oc) {
    for (int oy = 0; oy < os; ++oy) {
      for (int ox = 0; ox < os; ++ox) {
        const std::size_t oi = (static_cast<std::size_t>(oc) * os + oy) * os + ox;
        if (post[oi] <= 0.0) continue;
        const double g = dpost[oi];
        if (g == 0.0) continue;
        db[oc] += g;
        for (int ic = 0; ic < s.in_c; ++ic) {
          const double* in_ch = in + static_cast<std::size_t>(ic) * s.in_s * s.in_s;
          double* din_ch =
              din ? din + static_cast<std::size_t>(ic) * s.in_s * s.in_s : nullptr;
          const std::size_t wc = (static_cast<std::size_t>(oc) * s.in_c + ic) *
                                 s.kernel * s.kernel;
          for (int ky = 0; ky < s.kernel; ++ky) {
            const std::size_t ir =
                static_cast<std::size_t>(oy * s.stride + ky) * s.in_s + ox * s.stride;
            const std::size_t wr = wc + static_cast<std::size_t>(ky) * s.kernel;
            for (int kx = 0; kx < s.kernel; ++kx) {
              dw[wr + kx] += g * in_ch[ir + kx];
              if (din_ch) din_ch[ir + kx] += w[wr + kx] * g;
            }
          }
        }
      }
    }
  }
}

void fc_forward(const double* w, const double* b, const double* in, double* out, int out_n,
                int in_n, bool rectify) {
  for (int o = 0; o < out_n; ++o) {
    double acc = b[o];
    const double* row = w + static_cast<std::size_t>(o) * in_n;
    for (int i = 0; i < in_n; ++i) acc += row[i] * in[i];
    out[o] = rectify && acc < 0.0 ? 0.0 : acc;
  }
}

void fc_backward(const double* w, const double* in, const double* post, const double* dpost,
                 double* dw, double* db, double* din, int out_n, int in_n, bool rectified) {
  for (int o = 0; o < out_n; ++o) {
    if (rectified && post[o] <= 0.0) continue;
    const double g = dpost[o];
    if (g == 0.0) continue;
    db[o] += g;
    double* dw_row = dw + static_cast<std::size_t>(o) * in_n;
    const double* w_row = w + static_cast<std::size_t>(o) * in_n;
    for (int i = 0; i < in_n; ++i) {
      dw_row[i] += g * in[i];
      if (din) din[i] += w_row[i] * g;
    }
  }
}

std::size_t dims_product(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& buf, float v) { put_u32(buf, std::bit_cast<std::uint32_t>(v)); }

struct ByteCursor {
  const std::string& buf;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > buf.size()) throw std::runtime_error("checkpoint: truncated file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
};

}  // namespace

std::string to_string(NetVariant v) {
  return v == NetVariant::Linear ? "LINEAR" : "DEEP";
}

NetVariant net_variant_from_string(const std::string& s) {
  if (s == "LINEAR") return NetVariant::Linear;
  if (s == "DEEP") return NetVariant::Deep;
  throw std::invalid_argument("unknown network variant: " + s);
}

void QNetworkSpec::validate() const {
  if (memory_depth < 1) throw std::invalid_argument("fovea.memory_depth must be >= 1");
  if (motor_out != kMotorActionCount || sensory_out != kSensoryCellCount)
    throw std::invalid_argument("network head widths must be 7 and 25");
}

QNetwork::QNetwork(QNetworkSpec spec) : spec_(spec) {
  spec_.validate();
  build_layout();
  params_.assign(tensors_.empty() ? 0 : tensors_.back().offset + tensors_.back().size, 0.0);
}

void QNetwork::build_layout() {
  tensors_.clear();
  auto add = [&](std::string name, std::vector<int> dims) {
    TensorDesc d;
    d.name = std::move(name);
    d.size = dims_product(dims);
    d.dims = std::move(dims);
    d.offset = tensors_.empty() ? 0 : tensors_.back().offset + tensors_.back().size;
    tensors_.push_back(std::move(d));
  };
  if (spec_.variant == NetVariant::Linear) {
    const int in = spec_.memory_depth * kSensoryCellCount;
    add("motor_w", {spec_.motor_out, in});
    add("motor_b", {spec_.motor_out});
    add("sensory_w", {spec_.sensory_out, in});
    add("sensory_b", {spec_.sensory_out});
    return;
  }
  const ConvShape c1 = conv1_shape(spec_.memory_depth);
  const ConvShape c2 = conv2_shape(spec_.memory_depth);
  const ConvShape c3 = conv3_shape(spec_.memory_depth);
  add("conv1_w", {c1.out_c, c1.in_c, c1.kernel, c1.kernel});
  add("conv1_b", {c1.out_c});
  add("conv2_w", {c2.out_c, c2.in_c, c2.kernel, c2.kernel});
  add("conv2_b", {c2.out_c});
  add("conv3_w", {c3.out_c, c3.in_c, c3.kernel, c3.kernel});
  add("conv3_b", {c3.out_c});
  add("fc_w", {kFcWidth, conv_flat_size(c3)});
  add("fc_b", {kFcWidth});
  add("motor_w", {spec_.motor_out, kFcWidth});
  add("motor_b", {spec_.motor_out});
  add("sensory_w", {spec_.sensory_out, kFcWidth});
  add("sensory_b", {spec_.sensory_out});
}

std::size_t QNetwork::input_size() const {
  if (spec_.variant == NetVariant::Linear)
    return static_cast<std::size_t>(spec_.memory_depth) * kSensoryCellCount;
  return static_cast<std::size_t>(spec_.memory_depth) * kFramePixels;
}

void QNetwork::init_params(SplitMix64& rng) {
  std::fill(params_.begin(), params_.end(), 0.0);
  if (spec_.variant == NetVariant::Linear) return;
  for (const TensorDesc& t : tensors_) {
    if (t.dims.size() < 2) continue;
    std::size_t fan_in = 1;
    for (std::size_t i = 1; i < t.dims.size(); ++i)
      fan_in *= static_cast<std::size_t>(t.dims[i]);
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    double* p = params_.data() + t.offset;
    for (std::size_t i = 0; i < t.size; ++i) p[i] = stddev * next_gaussian(rng);
  }
}

std::vector<double> QNetwork::encode(const ObservationCanvas& canvas) const {
  if (static_cast<int>(canvas.layers.size()) != spec_.memory_depth ||
      canvas.frame_size != kFrameDim)
    throw std::invalid_argument("encode: canvas shape does not match the network spec");
  if (spec_.variant == NetVariant::Linear) return linear_features(canvas);
  std::vector<double> out;
  out.reserve(input_size());
  for (const CanvasLayer& layer : canvas.layers)
    for (float v : layer.v) out.push_back(static_cast<double>(v));
  return out;
}

HeadValues QNetwork::forward(const std::vector<double>& input) const {
  ForwardCache cache;
  return forward(input, cache);
}

HeadValues QNetwork::forward(const std::vector<double>& input, ForwardCache& cache) const {
  if (input.size() != input_size())
    throw std::invalid_argument("q_forward: input size does not match the network spec");
  cache.input = input;
  HeadValues out;
  if (spec_.variant == NetVariant::Linear) {
    const int in = static_cast<int>(input_size());
    fc_forward(tensor_data(0), tensor_data(1), input.data(), out.motor.data(),
               spec_.motor_out, in, false);
    fc_forward(tensor_data(2), tensor_data(3), input.data(), out.sensory.data(),
               spec_.sensory_out, in, false);
    return out;
  }
  const ConvShape c1 = conv1_shape(spec_.memory_depth);
  const ConvShape c2 = conv2_shape(spec_.memory_depth);
  const ConvShape c3 = conv3_shape(spec_.memory_depth);
  cache.conv1.assign(conv_flat_size(c1), 0.0);
  cache.conv2.assign(conv_flat_size(c2), 0.0);
  cache.conv3.assign(conv_flat_size(c3), 0.0);
  cache.fc.assign(kFcWidth, 0.0);
  conv_forward(tensor_data(0), tensor_data(1), input.data(), cache.conv1.data(), c1);
  conv_forward(tensor_data(2), tensor_data(3), cache.conv1.data(), cache.conv2.data(), c2);
  conv_forward(tensor_data(4), tensor_data(5), cache.conv2.data(), cache.conv3.data(), c3);
  fc_forward(tensor_data(6), tensor_data(7), cache.conv3.data(), cache.fc.data(), kFcWidth,
             conv_flat_size(c3), true);
  fc_forward(tensor_data(8), tensor_data(9), cache.fc.data(), out.motor.data(),
             spec_.motor_out, kFcWidth, false);
  fc_forward(tensor_data(10), tensor_data(11), cache.fc.data(), out.sensory.data(),
             spec_.sensory_out, kFcWidth, false);
  return out;
}

void QNetwork::backward(const ForwardCache& cache,
                        const std::array<double, kMotorActionCount>& dmotor,
                        const std::array<double, kSensoryCellCount>& dsensory,
                        std::vector<double>& grad) const {
  if (grad.size() != params_.size())
    throw std::invalid_argument("backward: gradient buffer size mismatch");
  if (cache.input.size() != input_size())
    throw std::invalid_argument("backward: cache does not match the network spec");
  auto g = [&](std::size_t idx) { return grad.data() + tensors_[idx].offset; };
  if (spec_.variant == NetVariant::Linear) {
    const int in = static_cast<int>(input_size());
    fc_backward(tensor_data(0), cache.input.data(), nullptr, dmotor.data(), g(0), g(1),
                nullptr, spec_.motor_out, in, false);
    fc_backward(tensor_data(2), cache.input.data(), nullptr, dsensory.data(), g(2), g(3),
                nullptr, spec_.sensory_out, in, false);
    return;
  }
  const ConvShape c1 = conv1_shape(spec_.memory_depth);
  const ConvShape c2 = conv2_shape(spec_.memory_depth);
  const ConvShape c3 = conv3_shape(spec_.memory_depth);
  std::vector<double> dfc(kFcWidth, 0.0);
  fc_backward(tensor_data(8), cache.fc.data(), nullptr, dmotor.data(), g(8), g(9), dfc.data(),
              spec_.motor_out, kFcWidth, false);
  fc_backward(tensor_data(10), cache.fc.data(), nullptr, dsensory.data(), g(10), g(11),
              dfc.data(), spec_.sensory_out, kFcWidth, false);
  std::vector<double> dconv3(conv_flat_size(c3), 0.0);
  fc_backward(tensor_data(6), cache.conv3.data(), cache.fc.data(), dfc.data(), g(6), g(7),
              dconv3.data(), kFcWidth, conv_flat_size(c3), true);
  std::vector<double> dconv2(conv_flat_size(c2), 0.0);
  conv_backward(tensor_data(4), cache.conv2.data(), cache.conv3.data(), dconv3.data(), g(4),
                g(5), dconv2.data(), c3);
  std::vector<double> dconv1(conv_flat_size(c1), 0.0);
  conv_backward(tensor_data(2), cache.conv1.data(), cache.conv2.data(), dconv2.data(), g(2),
                g(3), dconv1.data(), c2);
  conv_backward(tensor_data(0), cache.input.data(), cache.conv1.data(), dconv1.data(), g(0),
                g(1), nullptr, c1);
}

void QNetwork::save(const std::string& path) const {
  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  put_u32(buf, kCheckpointVersion);
  put_u32(buf, spec_.variant == NetVariant::Linear ? 0u : 1u);
  put_u32(buf, static_cast<std::uint32_t>(spec_.memory_depth));
  put_u32(buf, static_cast<std::uint32_t>(spec_.motor_out));
  put_u32(buf, static_cast<std::uint32_t>(spec_.sensory_out));
  put_u32(buf, static_cast<std::uint32_t>(tensors_.size()));
  for (const TensorDesc& t : tensors_) {
    put_u32(buf, static_cast<std::uint32_t>(t.name.size()));
    buf.append(t.name);
    put_u32(buf, static_cast<std::uint32_t>(t.dims.size()));
    for (int d : t.dims) put_u32(buf, static_cast<std::uint32_t>(d));
  }
  put_u64(buf, params_.size());
  for (double p : params_) put_f32(buf, static_cast<float>(p));
  write_text_file(path, buf);
}

QNetwork QNetwork::load(const std::string& path) {
  const std::string buf = read_text_file(path);
  ByteCursor cur{buf};
  if (cur.bytes(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic)))
    throw std::runtime_error("checkpoint: bad magic header in " + path);
  if (cur.u32() != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version in " + path);
  QNetworkSpec spec;
  const std::uint32_t variant = cur.u32();
  if (variant > 1) throw std::runtime_error("checkpoint: unknown variant in " + path);
  spec.variant = variant == 0 ? NetVariant::Linear : NetVariant::Deep;
  spec.memory_depth = static_cast<int>(cur.u32());
  spec.motor_out = static_cast<int>(cur.u32());
  spec.sensory_out = static_cast<int>(cur.u32());
  QNetwork net(spec);
  const std::uint32_t tensor_count = cur.u32();
  if (tensor_count != net.tensors_.size())
    throw std::runtime_error("checkpoint: tensor table mismatch in " + path);
  for (const TensorDesc& expect : net.tensors_) {
    const std::string name = cur.bytes(cur.u32());
    if (name != expect.name)
      throw std::runtime_error("checkpoint: unexpected tensor " + name + " in " + path);
    const std::uint32_t ndim = cur.u32();
    if (ndim != expect.dims.size())
      throw std::runtime_error("checkpoint: tensor rank mismatch for " + name);
    for (int d : expect.dims)
      if (cur.u32() != static_cast<std::uint32_t>(d))
        throw std::runtime_error("checkpoint: tensor shape mismatch for " + name);
  }
  const std::uint64_t count = cur.u64();
  if (count != net.params_.size())
    throw std::runtime_error("checkpoint: parameter count mismatch in " + path);
  for (double& p : net.params_) p = static_cast<double>(cur.f32());
  if (cur.pos != buf.size())
    throw std::runtime_error("checkpoint: trailing bytes in " + path);
  return net;
}

}  // namespace creyes
