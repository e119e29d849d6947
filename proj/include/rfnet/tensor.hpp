#ifndef RFNET_TENSOR_HPP
#define RFNET_TENSOR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rfnet/scalespace.hpp"

namespace rfnet {

/// Dense row-major double tensor. The network uses rank 3 [channels, height,
/// width] for feature maps and rank 2 [batch, classes] for logits.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s);

    static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }

    int64_t numel() const;
    int dim(int i) const { return shape[static_cast<size_t>(i)]; }
    int rank() const { return static_cast<int>(shape.size()); }

    double& operator[](int64_t i) { return data[static_cast<size_t>(i)]; }
    double operator[](int64_t i) const { return data[static_cast<size_t>(i)]; }

    // rank-3 accessors
    double& at(int c, int y, int x) {
        return data[(static_cast<size_t>(c) * dim(1) + y) * dim(2) + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<size_t>(c) * dim(1) + y) * dim(2) + x];
    }
    std::span<double> channel(int c) {
        const size_t hw = static_cast<size_t>(dim(1)) * dim(2);
        return {data.data() + c * hw, hw};
    }
    std::span<const double> channel(int c) const {
        const size_t hw = static_cast<size_t>(dim(1)) * dim(2);
        return {data.data() + c * hw, hw};
    }
};

bool all_finite(std::span<const double> v);

/// Per-channel 2D cross-correlation with zero "same" padding:
/// out[c,y,x] = sum_{dy,dx} in[c, y+dy, x+dx] * k[dy, dx].
Tensor correlate2d(const Tensor& input, const Kernel2D& kernel);

/// Same operation through the kernel's separable factors (two 1D passes).
/// Writes (or accumulates into) the result for one input channel.
void correlate2d_separable(std::span<const double> in, int height, int width,
                           const Kernel1D& ky, const Kernel1D& kx,
                           std::span<double> out, std::span<double> scratch,
                           bool accumulate = false);

/// The two 1D passes, exposed so callers can share a horizontal pass across
/// kernels with a common x factor.
void horizontal_pass(std::span<const double> in, int height, int width, const Kernel1D& kx,
                     std::span<double> out);
void vertical_pass(std::span<const double> filtered, int height, int width, const Kernel1D& ky,
                   std::span<double> out, bool accumulate = false);

struct PoolResult {
    Tensor output;                 // [C, ceil(H/2), ceil(W/2)]
    std::vector<int32_t> argmax;   // flat input index per output element
    int in_height = 0;
    int in_width = 0;
};

/// Non-overlapping 2x2 max pooling; odd trailing rows/columns pool over
/// 1-wide windows. Argmax indices drive the backward routing.
PoolResult maxpool2x2(const Tensor& input);
Tensor maxpool2x2_backward(const PoolResult& pooled, const Tensor& upstream);

Tensor relu(const Tensor& input);
Tensor relu_backward(const Tensor& upstream, const Tensor& input);

/// Per-channel spatial mean, [C,H,W] -> [C].
std::vector<double> global_avg_pool(const Tensor& input);
Tensor global_avg_pool_backward(std::span<const double> upstream, int channels, int height, int width);

struct XentResult {
    double loss = 0.0;
    std::vector<double> grad;  // softmax(logits) - onehot(label)
};

/// Numerically stabilized softmax cross-entropy.
XentResult softmax_xent(std::span<const double> logits, int label);

}  // namespace rfnet

#endif
