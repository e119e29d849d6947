#include "rfnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace rfnet {

namespace {
// Keep BLAS-backed code single threaded; batch items are the parallel unit.
[[maybe_unused]] const bool blas_env_init = [] {
    setenv("OPENBLAS_NUM_THREADS", "1", 0);
    return true;
}();
}  // namespace

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
    int64_t n = 1;
    for (int d : shape) {
        if (d < 0) throw std::domain_error("Tensor: negative dimension");
        n *= d;
    }
    data.assign(static_cast<size_t>(n), 0.0);
}

int64_t Tensor::numel() const {
    int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

Tensor correlate2d(const Tensor& input, const Kernel2D& kernel) {
    if (input.rank() != 3) throw std::domain_error("correlate2d: input must be [C,H,W]");
    const int C = input.dim(0), H = input.dim(1), W = input.dim(2);
    const int r = kernel.radius;
    if (r >= H || r >= W)
        throw std::domain_error("correlate2d: kernel radius " + std::to_string(r) +
                                " too large for " + std::to_string(H) + "x" + std::to_string(W) + " input");
    Tensor out({C, H, W});
    for (int c = 0; c < C; ++c) {
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                double acc = 0.0;
                const int dy0 = std::max(-r, -y), dy1 = std::min(r, H - 1 - y);
                const int dx0 = std::max(-r, -x), dx1 = std::min(r, W - 1 - x);
                for (int dy = dy0; dy <= dy1; ++dy)
                    for (int dx = dx0; dx <= dx1; ++dx)
                        acc += input.at(c, y + dy, x + dx) * kernel.tap(dy, dx);
                out.at(c, y, x) = acc;
            }
        }
    }
    return out;
}

void horizontal_pass(std::span<const double> in, int height, int width, const Kernel1D& kx,
                     std::span<double> out) {
    const int r = kx.radius;
    for (int y = 0; y < height; ++y) {
        const double* row = in.data() + static_cast<size_t>(y) * width;
        double* orow = out.data() + static_cast<size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            const int d0 = std::max(-r, -x), d1 = std::min(r, width - 1 - x);
            double acc = 0.0;
            for (int d = d0; d <= d1; ++d) acc += row[x + d] * kx.tap(d);
            orow[x] = acc;
        }
    }
}

void vertical_pass(std::span<const double> filtered, int height, int width, const Kernel1D& ky,
                   std::span<double> out, bool accumulate) {
    const int ry = ky.radius;
    for (int y = 0; y < height; ++y) {
        const int d0 = std::max(-ry, -y), d1 = std::min(ry, height - 1 - y);
        double* orow = out.data() + static_cast<size_t>(y) * width;
        if (!accumulate) std::fill(orow, orow + width, 0.0);
        for (int d = d0; d <= d1; ++d) {
            const double t = ky.tap(d);
            const double* srow = filtered.data() + static_cast<size_t>(y + d) * width;
            for (int x = 0; x < width; ++x) orow[x] += t * srow[x];
        }
    }
}

void correlate2d_separable(std::span<const double> in, int height, int width,
                           const Kernel1D& ky, const Kernel1D& kx,
                           std::span<double> out, std::span<double> scratch, bool accumulate) {
    horizontal_pass(in, height, width, kx, scratch);
    vertical_pass(scratch, height, width, ky, out, accumulate);
}

PoolResult maxpool2x2(const Tensor& input) {
    if (input.rank() != 3) throw std::domain_error("maxpool2x2: input must be [C,H,W]");
    const int C = input.dim(0), H = input.dim(1), W = input.dim(2);
    const int OH = (H + 1) / 2, OW = (W + 1) / 2;
    PoolResult res;
    res.output = Tensor({C, OH, OW});
    res.argmax.assign(static_cast<size_t>(C) * OH * OW, 0);
    res.in_height = H;
    res.in_width = W;
    size_t oi = 0;
    for (int c = 0; c < C; ++c) {
        for (int oy = 0; oy < OH; ++oy) {
            for (int ox = 0; ox < OW; ++ox, ++oi) {
                const int y0 = 2 * oy, x0 = 2 * ox;
                const int y1 = std::min(y0 + 1, H - 1), x1 = std::min(x0 + 1, W - 1);
                double best = input.at(c, y0, x0);
                int by = y0, bx = x0;
                for (int y = y0; y <= y1; ++y)
                    for (int x = x0; x <= x1; ++x)
                        if (input.at(c, y, x) > best) {
                            best = input.at(c, y, x);
                            by = y;
                            bx = x;
                        }
                res.output.at(c, oy, ox) = best;
                res.argmax[oi] = static_cast<int32_t>((static_cast<int64_t>(c) * H + by) * W + bx);
            }
        }
    }
    return res;
}

Tensor maxpool2x2_backward(const PoolResult& pooled, const Tensor& upstream) {
    const int C = pooled.output.dim(0);
    Tensor grad({C, pooled.in_height, pooled.in_width});
    for (size_t i = 0; i < pooled.argmax.size(); ++i)
        grad.data[static_cast<size_t>(pooled.argmax[i])] += upstream.data[i];
    return grad;
}

Tensor relu(const Tensor& input) {
    Tensor out = input;
    for (double& v : out.data) v = std::max(0.0, v);
    return out;
}

Tensor relu_backward(const Tensor& upstream, const Tensor& input) {
    Tensor grad = upstream;
    for (size_t i = 0; i < grad.data.size(); ++i)
        if (input.data[i] <= 0.0) grad.data[i] = 0.0;
    return grad;
}

std::vector<double> global_avg_pool(const Tensor& input) {
    const int C = input.dim(0);
    const double hw = static_cast<double>(input.dim(1)) * input.dim(2);
    std::vector<double> out(static_cast<size_t>(C), 0.0);
    for (int c = 0; c < C; ++c) {
        double s = 0.0;
        for (double v : input.channel(c)) s += v;
        out[static_cast<size_t>(c)] = s / hw;
    }
    return out;
}

Tensor global_avg_pool_backward(std::span<const double> upstream, int channels, int height, int width) {
    Tensor grad({channels, height, width});
    const double inv = 1.0 / (static_cast<double>(height) * width);
    for (int c = 0; c < channels; ++c) {
        const double g = upstream[static_cast<size_t>(c)] * inv;
        for (double& v : grad.channel(c)) v = g;
    }
    return grad;
}

XentResult softmax_xent(std::span<const double> logits, int label) {
    const int K = static_cast<int>(logits.size());
    if (K < 2) throw std::domain_error("softmax_xent: need at least 2 classes");
    if (label < 0 || label >= K) throw std::domain_error("softmax_xent: label out of range");
    double maxv = logits[0];
    for (double v : logits) maxv = std::max(maxv, v);
    double denom = 0.0;
    for (double v : logits) denom += std::exp(v - maxv);
    XentResult res;
    res.loss = std::log(denom) - (logits[static_cast<size_t>(label)] - maxv);
    res.grad.resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) res.grad[static_cast<size_t>(k)] = std::exp(logits[static_cast<size_t>(k)] - maxv) / denom;
    res.grad[static_cast<size_t>(label)] -= 1.0;
    return res;
}

}  // namespace rfnet
