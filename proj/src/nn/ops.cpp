// SPDX-License-Identifier: Apache-2.0
#include "uniscene/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace uniscene::nn {
namespace {

using Values = std::shared_ptr<const std::vector<double>>;

Values share(std::span<const double> v) { return std::make_shared<const std::vector<double>>(v.begin(), v.end()); }

/// Geometry of a same-padded stride-1 convolution over up to three spatial
/// axes (2D convolutions use depth = 1 and kernel depth = 1).
struct ConvGeometry {
  std::size_t cin, cout, d, h, w, kd, kh, kw;

  std::size_t spatial() const { return d * h * w; }
  std::size_t kernel() const { return kd * kh * kw; }
};

/// Visits every (output row segment, input row segment) pair for one kernel tap.
/// f(out_offset, in_offset, length) with offsets relative to a channel plane.
template <typename F>
void for_each_tap_segment(const ConvGeometry& g, std::size_t a, std::size_t b, std::size_t c, F&& f) {
  const long od = static_cast<long>(a) - static_cast<long>(g.kd / 2);
  const long oh = static_cast<long>(b) - static_cast<long>(g.kh / 2);
  const long ow = static_cast<long>(c) - static_cast<long>(g.kw / 2);
  const long D = static_cast<long>(g.d), H = static_cast<long>(g.h), W = static_cast<long>(g.w);
  const long x0 = std::max(0L, -ow), x1 = std::min(W, W - ow);
  if (x0 >= x1) return;
  for (long z = std::max(0L, -od); z < std::min(D, D - od); ++z) {
    for (long y = std::max(0L, -oh); y < std::min(H, H - oh); ++y) {
      const auto out_off = static_cast<std::size_t>((z * H + y) * W + x0);
      const auto in_off = static_cast<std::size_t>(((z + od) * H + (y + oh)) * W + x0 + ow);
      f(out_off, in_off, static_cast<std::size_t>(x1 - x0));
    }
  }
}

// Column matrix of a same-padded convolution: row (ci * K + tap) holds the
// input plane of channel ci shifted by that tap, zero where it falls outside.
std::vector<double> im2col(const ConvGeometry& g, const double* x) {
  const std::size_t S = g.spatial(), K = g.kernel();
  std::vector<double> col(g.cin * K * S, 0.0);
  for (std::size_t ci = 0; ci < g.cin; ++ci) {
    const double* xin = x + ci * S;
    std::size_t tap = 0;
    for (std::size_t a = 0; a < g.kd; ++a) {
      for (std::size_t b = 0; b < g.kh; ++b) {
        for (std::size_t c = 0; c < g.kw; ++c, ++tap) {
          double* row = col.data() + (ci * K + tap) * S;
          for_each_tap_segment(g, a, b, c, [&](std::size_t oo, std::size_t io, std::size_t n) {
            std::copy(xin + io, xin + io + n, row + oo);
          });
        }
      }
    }
  }
  return col;
}

Tensor conv_same(std::string_view name, const Tensor& x, const Tensor& weight, const Tensor& bias,
                 const ConvGeometry& g, Shape out_shape) {
  const std::size_t S = g.spatial(), R = g.cin * g.kernel();
  auto col = std::make_shared<const std::vector<double>>(im2col(g, x.values().data()));
  std::vector<double> out(g.cout * S);
  const double* wv = weight.values().data();
  const double* bv = bias.values().data();
  for (std::size_t co = 0; co < g.cout; ++co) {
    double* o = out.data() + co * S;
    std::fill(o, o + S, bv[co]);
    for (std::size_t r = 0; r < R; ++r) {
      const double wt = wv[co * R + r];
      const double* cr = col->data() + r * S;
      for (std::size_t i = 0; i < S; ++i) o[i] += wt * cr[i];
    }
  }

  auto ws = share(weight.values());
  return Tensor::from_op(
      name, std::move(out_shape), std::move(out), {x, weight, bias},
      [g, col, ws](std::span<const double> go, std::span<std::vector<double>* const> slots) {
        const std::size_t S = g.spatial(), K = g.kernel(), R = g.cin * K;
        if (slots[2]) {
          auto& gb = *slots[2];
          for (std::size_t co = 0; co < g.cout; ++co) {
            double s = 0.0;
            for (std::size_t i = 0; i < S; ++i) s += go[co * S + i];
            gb[co] += s;
          }
        }
        if (slots[1]) {
          auto& gw = *slots[1];
          for (std::size_t co = 0; co < g.cout; ++co) {
            const double* gout = go.data() + co * S;
            for (std::size_t r = 0; r < R; ++r) {
              const double* cr = col->data() + r * S;
              double acc = 0.0;
              for (std::size_t i = 0; i < S; ++i) acc += gout[i] * cr[i];
              gw[co * R + r] += acc;
            }
          }
        }
        if (slots[0]) {
          std::vector<double> gcol(R * S, 0.0);
          for (std::size_t co = 0; co < g.cout; ++co) {
            const double* gout = go.data() + co * S;
            for (std::size_t r = 0; r < R; ++r) {
              const double wt = (*ws)[co * R + r];
              double* gr = gcol.data() + r * S;
              for (std::size_t i = 0; i < S; ++i) gr[i] += wt * gout[i];
            }
          }
          double* gx = slots[0]->data();
          for (std::size_t ci = 0; ci < g.cin; ++ci) {
            double* gxi = gx + ci * S;
            std::size_t tap = 0;
            for (std::size_t a = 0; a < g.kd; ++a) {
              for (std::size_t b = 0; b < g.kh; ++b) {
                for (std::size_t c = 0; c < g.kw; ++c, ++tap) {
                  const double* gr = gcol.data() + (ci * K + tap) * S;
                  for_each_tap_segment(g, a, b, c, [&](std::size_t oo, std::size_t io, std::size_t n) {
                    for (std::size_t i = 0; i < n; ++i) gxi[io + i] += gr[oo + i];
                  });
                }
              }
            }
          }
        }
      });
}

void require_rank(std::string_view op, const Tensor& t, std::size_t rank, std::string_view what) {
  if (t.shape().size() != rank) {
    throw ShapeError(std::string(op) + ": " + std::string(what) + " must have rank " + std::to_string(rank) +
                     ", got " + to_string(t.shape()));
  }
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  require_rank("conv2d", x, 3, "input");
  require_rank("conv2d", weight, 4, "weight");
  require_rank("conv2d", bias, 1, "bias");
  const auto& xs = x.shape();
  const auto& ws = weight.shape();
  if (ws[1] != xs[0] || bias.shape()[0] != ws[0] || ws[2] != ws[3] || ws[2] % 2 == 0) {
    throw ShapeError("conv2d: incompatible shapes " + to_string(xs) + " * " + to_string(ws));
  }
  const ConvGeometry g{xs[0], ws[0], 1, xs[1], xs[2], 1, ws[2], ws[3]};
  return conv_same("conv2d", x, weight, bias, g, Shape{ws[0], xs[1], xs[2]});
}

Tensor conv3d(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  require_rank("conv3d", x, 4, "input");
  require_rank("conv3d", weight, 5, "weight");
  require_rank("conv3d", bias, 1, "bias");
  const auto& xs = x.shape();
  const auto& ws = weight.shape();
  if (ws[1] != xs[0] || bias.shape()[0] != ws[0] || ws[2] != ws[3] || ws[3] != ws[4] || ws[2] % 2 == 0) {
    throw ShapeError("conv3d: incompatible shapes " + to_string(xs) + " * " + to_string(ws));
  }
  const ConvGeometry g{xs[0], ws[0], xs[1], xs[2], xs[3], ws[2], ws[3], ws[4]};
  return conv_same("conv3d", x, weight, bias, g, Shape{ws[0], xs[1], xs[2], xs[3]});
}

Tensor relu(const Tensor& x) {
  auto xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = xv[i] > 0.0 ? xv[i] : 0.0;
  auto xs = share(xv);
  return Tensor::from_op("relu", x.shape(), std::move(out), {x},
                         [xs](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           auto& gx = *slots[0];
                           for (std::size_t i = 0; i < go.size(); ++i) {
                             if ((*xs)[i] > 0.0) gx[i] += go[i];
                           }
                         });
}

Tensor sigmoid(const Tensor& x) {
  auto xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) {
    const double v = xv[i];
    if (v >= 0.0) {
      out[i] = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      out[i] = e / (1.0 + e);
    }
  }
  auto ys = share(out);
  return Tensor::from_op("sigmoid", x.shape(), std::move(out), {x},
                         [ys](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           auto& gx = *slots[0];
                           for (std::size_t i = 0; i < go.size(); ++i) {
                             const double y = (*ys)[i];
                             gx[i] += go[i] * y * (1.0 - y);
                           }
                         });
}

Tensor softmax_over_depth(const Tensor& x) {
  if (x.shape().empty()) throw ShapeError("softmax_over_depth: scalar input");
  const std::size_t K = x.shape()[0];
  const std::size_t P = x.numel() / K;
  auto xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t p = 0; p < P; ++p) {
    double mx = xv[p];
    for (std::size_t k = 1; k < K; ++k) mx = std::max(mx, xv[k * P + p]);
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double e = std::exp(xv[k * P + p] - mx);
      out[k * P + p] = e;
      sum += e;
    }
    for (std::size_t k = 0; k < K; ++k) out[k * P + p] /= sum;
  }
  auto ys = share(out);
  return Tensor::from_op("softmax_over_depth", x.shape(), std::move(out), {x},
                         [ys, K, P](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           auto& gx = *slots[0];
                           const auto& y = *ys;
                           for (std::size_t p = 0; p < P; ++p) {
                             double dot = 0.0;
                             for (std::size_t k = 0; k < K; ++k) dot += go[k * P + p] * y[k * P + p];
                             for (std::size_t k = 0; k < K; ++k) {
                               gx[k * P + p] += y[k * P + p] * (go[k * P + p] - dot);
                             }
                           }
                         });
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (numel(shape) != x.numel()) {
    throw ShapeError("reshape: cannot view " + to_string(x.shape()) + " as " + to_string(shape));
  }
  auto xv = x.values();
  return Tensor::from_op("reshape", std::move(shape), std::vector<double>(xv.begin(), xv.end()), {x},
                         [](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           auto& gx = *slots[0];
                           for (std::size_t i = 0; i < go.size(); ++i) gx[i] += go[i];
                         });
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("add: shape mismatch " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
  auto av = a.values(), bv = b.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] + bv[i];
  return Tensor::from_op("add", a.shape(), std::move(out), {a, b},
                         [](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           for (auto* slot : slots) {
                             if (!slot) continue;
                             for (std::size_t i = 0; i < go.size(); ++i) (*slot)[i] += go[i];
                           }
                         });
}

Tensor scale(const Tensor& x, double factor) {
  auto xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = xv[i] * factor;
  return Tensor::from_op("scale", x.shape(), std::move(out), {x},
                         [factor](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           auto& gx = *slots[0];
                           for (std::size_t i = 0; i < go.size(); ++i) gx[i] += go[i] * factor;
                         });
}

Tensor weighted_sum(const Tensor& x, std::span<const double> weights) {
  if (weights.size() != x.numel()) throw ShapeError("weighted_sum: weight count does not match tensor size");
  auto xv = x.values();
  double s = 0.0;
  for (std::size_t i = 0; i < xv.size(); ++i) s += weights[i] * xv[i];
  auto ws = share(weights);
  return Tensor::from_op("weighted_sum", Shape{}, {s}, {x},
                         [ws](std::span<const double> go, std::span<std::vector<double>* const> slots) {
                           auto& gx = *slots[0];
                           for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += go[0] * (*ws)[i];
                         });
}

}  // namespace uniscene::nn
