#ifndef RFNET_SCALESPACE_HPP
#define RFNET_SCALESPACE_HPP

#include <array>
#include <span>
#include <vector>

namespace rfnet {

/// Physicists' Hermite polynomial H_m(x) via the recurrence
/// H_{m+1}(x) = 2x H_m(x) - 2m H_{m-1}(x), H_0 = 1, H_1 = 2x.
/// Supported for m in [0, 8].
double hermite_eval(int m, double x);

/// A discretized 1D Gaussian derivative filter. Taps span [-radius, radius];
/// tap(k) addresses offset k. Order 0 kernels are normalized to unit sum,
/// higher orders sample the analytic derivative directly, so convolving an
/// increasing ramp with the order-1 kernel gives +1 at interior samples.
struct Kernel1D {
    int order = 0;
    double sigma = 1.0;
    int radius = 1;
    std::vector<double> taps;

    double tap(int k) const { return taps[static_cast<size_t>(k + radius)]; }
    double sum() const;
    /// Mirror image (k -> -k); for a derivative of order m this equals
    /// multiplying the taps by (-1)^m.
    Kernel1D flipped() const;
};

Kernel1D gauss_1d(double sigma, int radius);
Kernel1D gauss_deriv_1d(int order, double sigma, int radius);

/// Continuous 1D Gaussian derivative d^m/dx^m G(x; sigma), unit-integral
/// Gaussian. Used for kernel generation and by rotated-grid test oracles.
double gauss_deriv_value(int order, double sigma, double x);

/// A separable 2D Gaussian derivative filter, stored in correlation
/// orientation: cross-correlating an image with the taps equals convolving
/// it with the analytic derivative d^a_x d^b_y G, so a first-derivative
/// response to an increasing ramp is positive. Taps are row-major over
/// (dy, dx) in [-radius, radius]^2.
struct Kernel2D {
    int order_x = 0;
    int order_y = 0;
    double sigma = 1.0;
    int radius = 1;
    bool l2_normalized = false;
    std::vector<double> taps;

    int side() const { return 2 * radius + 1; }
    double tap(int dy, int dx) const {
        return taps[static_cast<size_t>(dy + radius) * side() + static_cast<size_t>(dx + radius)];
    }
    double& tap(int dy, int dx) {
        return taps[static_cast<size_t>(dy + radius) * side() + static_cast<size_t>(dx + radius)];
    }
    double frobenius_norm() const;
    /// 180-degree rotation of the taps.
    Kernel2D flipped() const;
    /// The two generating 1D kernels (y factor, x factor), correlation
    /// oriented; the taps equal their outer product before normalization.
    Kernel1D factor_y() const;
    Kernel1D factor_x() const;
};

Kernel2D make_kernel_2d(int order_x, int order_y, double sigma, int radius, bool normalize);

/// Parameters of a Gaussian derivative basis.
struct BasisSpec {
    int max_order = 3;                   // M, orders a+b <= M; M <= 4
    std::vector<double> scales = {1.0};  // strictly increasing sigmas
    double truncation_factor = 4.0;      // radius = ceil(truncation_factor * sigma)
    bool normalize = true;               // unit Frobenius norm per 2D kernel

    int radius_for(double sigma) const;
    void validate() const;
};

/// Ordered set of 2D basis kernels for one layer. Ordering: ascending scale,
/// then ascending total order, then ascending order_y. With multiple scales
/// the zero-order kernel appears only at the smallest scale.
struct FilterBasis {
    BasisSpec spec;
    std::vector<Kernel2D> kernels;

    int size() const { return static_cast<int>(kernels.size()); }
    int max_radius() const;
    /// Position of the kernel with the given orders and scale, or -1.
    int index_of(int order_x, int order_y, double sigma) const;
};

FilterBasis basis_2d(const BasisSpec& spec, const std::vector<double>& layer_scales);
FilterBasis basis_2d(const BasisSpec& spec);

/// Number of 2D filters in a network whose layer l applies a basis of order
/// max_order on scales_per_layer[l] scales: derivative kernels are counted
/// per scale, the zero-order kernel once per layer.
long basis_count(int max_order, const std::vector<int>& scales_per_layer);

/// Scale dilation: convolve with a zero-order Gaussian of scale n, enlarging
/// the support; the result has sigma = sqrt(j^2 + n^2) for an input at scale
/// j. n = 0 returns the kernel unchanged.
Kernel2D dilate(const Kernel2D& kernel, double n, double truncation_factor = 4.0);

/// Steering coefficients over (G_xx, G_xy, G_yy) for a second-order
/// derivative rotated by theta.
std::array<double, 3> steer_second_order(double theta);
/// Steering coefficients over (G_xxx, G_xxy, G_xyy, G_yyy).
std::array<double, 4> steer_third_order(double theta);

/// Linear combination of same-size kernels. Zero coefficients select nothing:
/// a one-hot coefficient vector returns the selected kernel's taps
/// bit-identically.
Kernel2D combine_kernels(std::span<const Kernel2D> kernels, std::span<const double> coeffs);

}  // namespace rfnet

#endif
