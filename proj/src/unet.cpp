// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "tcdiff/unet.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace tcdiff {

namespace arch {
int level_width(int level) { return kBaseWidth << level; }
}  // namespace arch

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using std::to_string;
using u32 = std::uint32_t;

std::string res_name(const std::string& stage, int block, int j) {
  return stage + "." + to_string(block) + ".res." + to_string(j);
}

std::vector<TensorSpec> build_manifest() {
  std::vector<TensorSpec> specs;
  auto conv = [&](const std::string& name, int in, int out, int k) {
    specs.push_back({name + ".weight", {u32(out), u32(in), u32(k), u32(k)}});
    specs.push_back({name + ".bias", {u32(out)}});
  };
  auto linear = [&](const std::string& name, int in, int out) {
    specs.push_back({name + ".weight", {u32(out), u32(in)}});
    specs.push_back({name + ".bias", {u32(out)}});
  };
  auto norm = [&](const std::string& name, int ch) {
    specs.push_back({name + ".weight", {u32(ch)}});
    specs.push_back({name + ".bias", {u32(ch)}});
  };
  auto res = [&](const std::string& name, int in, int out) {
    norm(name + ".norm1", in);
    conv(name + ".conv1", in, out, 3);
    linear(name + ".temb", arch::kTimeDim, out);
    norm(name + ".norm2", out);
    conv(name + ".conv2", out, out, 3);
    if (in != out) conv(name + ".skip", in, out, 1);
  };

  linear("time.lin1", arch::kTimeDim, arch::kTimeDim);
  linear("time.lin2", arch::kTimeDim, arch::kTimeDim);
  conv("conv_in", arch::kInChannels, arch::kBaseWidth, 3);

  int ch = arch::kBaseWidth;
  for (int l = 0; l < arch::kLevels; ++l) {
    const int width = arch::level_width(l);
    for (int j = 0; j < arch::kResBlocks; ++j) {
      res(res_name("enc", l, j), ch, width);
      ch = width;
    }
    if (l + 1 < arch::kLevels) conv("enc." + to_string(l) + ".down", ch, ch, 3);
  }

  res("mid.res.0", ch, ch);
  norm("mid.attn.norm", ch);
  conv("mid.attn.qkv", ch, 3 * ch, 1);
  conv("mid.attn.proj", ch, ch, 1);
  res("mid.res.1", ch, ch);

  for (int b = 0; b < arch::kDecoderBlocks; ++b) {
    const int level = arch::kLevels - 1 - b;
    const int width = arch::level_width(level);
    int in = ch + width;  // backbone + skip
    for (int j = 0; j < arch::kResBlocks; ++j) {
      res(res_name("dec", b, j), in, width);
      in = width;
    }
    ch = width;
    if (level > 0) conv("dec." + to_string(b) + ".up", ch, ch, 3);
  }

  norm("out.norm", ch);
  conv("out.conv", ch, arch::kInChannels, 3);
  return specs;
}

// Activation of one batch item: channels x (H*W).
struct Act {
  int h = 0;
  int w = 0;
  Matrix m;
  int channels() const { return static_cast<int>(m.rows()); }
};

Matrix to_matrix(const Tensor& t, Eigen::Index rows) {
  const Eigen::Index cols = static_cast<Eigen::Index>(t.numel()) / rows;
  return Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
             t.data.data(), rows, cols)
      .cast<double>();
}

Vector to_vector(const Tensor& t) {
  return Eigen::Map<const Eigen::VectorXf>(t.data.data(), static_cast<Eigen::Index>(t.numel()))
      .cast<double>();
}

struct Conv {
  Matrix weight;  // out x (in * k * k)
  Vector bias;
  int in = 0;
  int k = 1;
  int stride = 1;

  Conv() = default;
  Conv(const WeightSet& ws, const std::string& name, int stride_ = 1) : stride(stride_) {
    const Tensor& t = ws.at(name + ".weight");
    in = static_cast<int>(t.dims[1]);
    k = static_cast<int>(t.dims[2]);
    weight = to_matrix(t, t.dims[0]);
    bias = to_vector(ws.at(name + ".bias"));
  }

  Act operator()(const Act& x) const {
    if (k == 1 && stride == 1) {
      Act y{x.h, x.w, weight * x.m};
      y.m.colwise() += bias;
      return y;
    }
    const int pad = k / 2;
    const int ho = (x.h + 2 * pad - k) / stride + 1;
    const int wo = (x.w + 2 * pad - k) / stride + 1;
    Matrix cols = Matrix::Zero(static_cast<Eigen::Index>(in) * k * k, ho * wo);
    for (int oy = 0; oy < ho; ++oy) {
      for (int ox = 0; ox < wo; ++ox) {
        const int col = oy * wo + ox;
        for (int ky = 0; ky < k; ++ky) {
          const int iy = oy * stride + ky - pad;
          if (iy < 0 || iy >= x.h) continue;
          for (int kx = 0; kx < k; ++kx) {
            const int ix = ox * stride + kx - pad;
            if (ix < 0 || ix >= x.w) continue;
            const int pixel = iy * x.w + ix;
            for (int ci = 0; ci < in; ++ci) cols((ci * k + ky) * k + kx, col) = x.m(ci, pixel);
          }
        }
      }
    }
    Act y{ho, wo, weight * cols};
    y.m.colwise() += bias;
    return y;
  }
};

struct Linear {
  Matrix weight;
  Vector bias;
  Linear() = default;
  Linear(const WeightSet& ws, const std::string& name)
      : weight(to_matrix(ws.at(name + ".weight"), ws.at(name + ".weight").dims[0])),
        bias(to_vector(ws.at(name + ".bias"))) {}
  Vector operator()(const Vector& x) const { return weight * x + bias; }
};

struct GroupNorm {
  Vector gamma;
  Vector beta;
  GroupNorm() = default;
  GroupNorm(const WeightSet& ws, const std::string& name)
      : gamma(to_vector(ws.at(name + ".weight"))), beta(to_vector(ws.at(name + ".bias"))) {}

  Act operator()(const Act& x) const {
    constexpr double kEps = 1e-5;
    Act y{x.h, x.w, Matrix(x.m.rows(), x.m.cols())};
    const Eigen::Index per_group = x.m.rows() / arch::kGroups;
    for (int g = 0; g < arch::kGroups; ++g) {
      const auto block = x.m.middleRows(g * per_group, per_group);
      const double n = static_cast<double>(block.size());
      const double mean = block.sum() / n;
      const double var = (block.array() - mean).square().sum() / n;
      const double inv = 1.0 / std::sqrt(var + kEps);
      for (Eigen::Index r = 0; r < per_group; ++r) {
        const Eigen::Index c = g * per_group + r;
        y.m.row(c) = ((x.m.row(c).array() - mean) * (inv * gamma[c]) + beta[c]).matrix();
      }
    }
    return y;
  }
};

Act silu(Act x) {
  x.m = x.m.array() / (1.0 + (-x.m.array()).exp());
  return x;
}

Vector silu(const Vector& v) { return (v.array() / (1.0 + (-v.array()).exp())).matrix(); }

struct ResBlock {
  GroupNorm norm1, norm2;
  Conv conv1, conv2, skip;
  Linear temb;
  bool has_skip = false;

  ResBlock() = default;
  ResBlock(const WeightSet& ws, const std::string& name)
      : norm1(ws, name + ".norm1"),
        norm2(ws, name + ".norm2"),
        conv1(ws, name + ".conv1"),
        conv2(ws, name + ".conv2"),
        temb(ws, name + ".temb"),
        has_skip(ws.contains(name + ".skip.weight")) {
    if (has_skip) skip = Conv(ws, name + ".skip");
  }

  Act operator()(const Act& x, const Vector& emb) const {
    Act h = conv1(silu(norm1(x)));
    h.m.colwise() += temb(emb);
    h = conv2(silu(norm2(h)));
    if (has_skip) {
      h.m += skip(x).m;
    } else {
      h.m += x.m;
    }
    return h;
  }
};

struct Attention {
  GroupNorm norm;
  Conv qkv, proj;

  Attention() = default;
  Attention(const WeightSet& ws, const std::string& name)
      : norm(ws, name + ".norm"), qkv(ws, name + ".qkv"), proj(ws, name + ".proj") {}

  Act operator()(const Act& x) const {
    const Act packed = qkv(norm(x));
    const Eigen::Index c = x.m.rows();
    const Eigen::Index d = c / arch::kHeads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Act heads{x.h, x.w, Matrix(c, x.m.cols())};
    for (int head = 0; head < arch::kHeads; ++head) {
      const auto q = packed.m.middleRows(head * d, d);
      const auto k = packed.m.middleRows(c + head * d, d);
      const auto v = packed.m.middleRows(2 * c + head * d, d);
      Matrix scores = (q.transpose() * k) * scale;  // queries x keys
      for (Eigen::Index r = 0; r < scores.rows(); ++r) {
        const double mx = scores.row(r).maxCoeff();
        scores.row(r) = (scores.row(r).array() - mx).exp().matrix();
        scores.row(r) /= scores.row(r).sum();
      }
      heads.m.middleRows(head * d, d) = v * scores.transpose();
    }
    Act y = proj(heads);
    y.m += x.m;
    return y;
  }
};

Act upsample_nearest(const Act& x) {
  Act y{2 * x.h, 2 * x.w, Matrix(x.m.rows(), 4 * x.m.cols())};
  for (int oy = 0; oy < y.h; ++oy)
    for (int ox = 0; ox < y.w; ++ox) y.m.col(oy * y.w + ox) = x.m.col((oy / 2) * x.w + ox / 2);
  return y;
}

FeatureMap act_to_feature(const Act& x) {
  FeatureMap fm(1, static_cast<std::size_t>(x.channels()), static_cast<std::size_t>(x.h),
                static_cast<std::size_t>(x.w));
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      fm.values.data(), x.m.rows(), x.m.cols()) = x.m;
  return fm;
}

Act feature_to_act(const FeatureMap& fm) {
  Act x{static_cast<int>(fm.height), static_cast<int>(fm.width), Matrix()};
  x.m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      fm.values.data(), static_cast<Eigen::Index>(fm.channels),
      static_cast<Eigen::Index>(fm.plane()));
  return x;
}

Vector timestep_embedding(double t) {
  const int half = arch::kTimeDim / 2;
  Vector emb(arch::kTimeDim);
  for (int i = 0; i < half; ++i) {
    const double freq = std::exp(-std::log(10000.0) * i / half);
    emb[i] = std::sin(t * freq);
    emb[half + i] = std::cos(t * freq);
  }
  return emb;
}

}  // namespace

const std::vector<TensorSpec>& architecture_manifest() {
  static const std::vector<TensorSpec> manifest = build_manifest();
  return manifest;
}

struct MfUNet::Impl {
  Linear time1, time2;
  Conv conv_in;
  std::vector<std::vector<ResBlock>> enc_res;
  std::vector<Conv> enc_down;
  ResBlock mid0, mid1;
  Attention attn;
  std::vector<std::vector<ResBlock>> dec_res;
  std::vector<Conv> dec_up;
  GroupNorm out_norm;
  Conv out_conv;

  Act run(const Act& input, double t, const ModulationConfig* modulation) const {
    const Vector emb = silu(time2(silu(time1(timestep_embedding(t)))));

    Act x = conv_in(input);
    std::vector<Act> skips;
    for (int l = 0; l < arch::kLevels; ++l) {
      for (const auto& block : enc_res[l]) x = block(x, emb);
      skips.push_back(x);
      if (l + 1 < arch::kLevels) x = enc_down[l](x);
    }

    x = mid1(attn(mid0(x, emb)), emb);

    for (int b = 0; b < arch::kDecoderBlocks; ++b) {
      Act skip = std::move(skips.back());
      skips.pop_back();
      if (modulation && modulation->applies_to(b)) {
        const auto& m = modulation->blocks[static_cast<std::size_t>(b)];
        const FeatureMap backbone = act_to_feature(x);
        x = feature_to_act(scale_backbone(backbone, backbone_factor(backbone, m.backbone)));
        skip = feature_to_act(spectral_modulate_skip(act_to_feature(skip), m.skip, m.radius));
      }
      Act cat{x.h, x.w, Matrix(x.m.rows() + skip.m.rows(), x.m.cols())};
      cat.m << x.m, skip.m;
      x = std::move(cat);
      for (const auto& block : dec_res[b]) x = block(x, emb);
      if (b < static_cast<int>(dec_up.size())) x = dec_up[b](upsample_nearest(x));
    }

    return out_conv(silu(out_norm(x)));
  }
};

MfUNet::MfUNet(const WeightSet& weights) : impl_(std::make_unique<Impl>()) {
  for (const auto& spec : architecture_manifest()) {
    const Tensor& t = weights.at(spec.name);
    if (t.dims != spec.dims)
      throw FormatError("MfUNet: tensor '" + spec.name + "' does not match the architecture");
  }
  auto& m = *impl_;
  m.time1 = Linear(weights, "time.lin1");
  m.time2 = Linear(weights, "time.lin2");
  m.conv_in = Conv(weights, "conv_in");
  for (int l = 0; l < arch::kLevels; ++l) {
    m.enc_res.emplace_back();
    for (int j = 0; j < arch::kResBlocks; ++j)
      m.enc_res.back().emplace_back(weights, res_name("enc", l, j));
    if (l + 1 < arch::kLevels) m.enc_down.emplace_back(weights, "enc." + to_string(l) + ".down", 2);
  }
  m.mid0 = ResBlock(weights, "mid.res.0");
  m.attn = Attention(weights, "mid.attn");
  m.mid1 = ResBlock(weights, "mid.res.1");
  for (int b = 0; b < arch::kDecoderBlocks; ++b) {
    m.dec_res.emplace_back();
    for (int j = 0; j < arch::kResBlocks; ++j)
      m.dec_res.back().emplace_back(weights, res_name("dec", b, j));
    if (arch::kLevels - 1 - b > 0) m.dec_up.emplace_back(weights, "dec." + to_string(b) + ".up");
  }
  m.out_norm = GroupNorm(weights, "out.norm");
  m.out_conv = Conv(weights, "out.conv");
}

MfUNet::~MfUNet() = default;
MfUNet::MfUNet(MfUNet&&) noexcept = default;
MfUNet& MfUNet::operator=(MfUNet&&) noexcept = default;

FeatureMap MfUNet::forward(const FeatureMap& input, double t,
                           const ModulationConfig* modulation) const {
  constexpr std::size_t kFactor = std::size_t{1} << (arch::kLevels - 1);
  if (input.channels != static_cast<std::size_t>(arch::kInChannels))
    throw ArgumentError("MfUNet: expected " + to_string(arch::kInChannels) + " input channels");
  if (input.height == 0 || input.width == 0 || input.height % kFactor || input.width % kFactor)
    throw ArgumentError("MfUNet: spatial size must be a positive multiple of " +
                        to_string(kFactor));
  if (modulation) modulation->validate(arch::kDecoderBlocks);

  FeatureMap out(input.batch, input.channels, input.height, input.width);
  const std::size_t item = input.channels * input.plane();
  for (std::size_t n = 0; n < input.batch; ++n) {
    FeatureMap one(1, input.channels, input.height, input.width);
    std::copy_n(input.values.begin() + static_cast<std::ptrdiff_t>(n * item), item,
                one.values.begin());
    const FeatureMap y = act_to_feature(impl_->run(feature_to_act(one), t, modulation));
    std::copy(y.values.begin(), y.values.end(),
              out.values.begin() + static_cast<std::ptrdiff_t>(n * item));
  }
  return out;
}

FeatureMap unet_forward(const FeatureMap& input, double t, const WeightSet& weights,
                        const ModulationConfig* modulation) {
  return MfUNet(weights).forward(input, t, modulation);
}

UNetDenoiser::UNetDenoiser(const WeightSet& weights, std::optional<ModulationConfig> modulation)
    : net_(weights), modulation_(std::move(modulation)) {
  if (modulation_) modulation_->validate(arch::kDecoderBlocks);
}

ComplexImage UNetDenoiser::predict_noise(const ComplexImage& y_t, int t) const {
  const FeatureMap eps =
      net_.forward(to_channels(y_t), static_cast<double>(t), modulation_ ? &*modulation_ : nullptr);
  return from_channels(eps);
}

}  // namespace tcdiff
