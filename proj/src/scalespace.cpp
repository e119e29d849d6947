#include "rfnet/scalespace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfnet {

namespace {

constexpr int kMaxHermiteOrder = 8;
constexpr int kMaxDerivOrder = 4;

// Snap values that should be exact at axis angles (cos(pi/2) evaluates to
// ~6e-17) so steering at axis angles degenerates to pure kernel selection.
double snap_trig(double v) {
    if (std::abs(v) < 4e-16) return 0.0;
    if (std::abs(v - 1.0) < 4e-16) return 1.0;
    if (std::abs(v + 1.0) < 4e-16) return -1.0;
    return v;
}

}  // namespace

double hermite_eval(int m, double x) {
    if (m < 0 || m > kMaxHermiteOrder)
        throw std::domain_error("hermite_eval: order must be in [0, 8], got " + std::to_string(m));
    if (m == 0) return 1.0;
    double prev = 1.0;       // H_0
    double cur = 2.0 * x;    // H_1
    for (int k = 1; k < m; ++k) {
        double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double gauss_deriv_value(int order, double sigma, double x) {
    const double u = x / (sigma * std::numbers::sqrt2);
    const double envelope = std::exp(-u * u) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(sigma * std::numbers::sqrt2, -order) * hermite_eval(order, u) * envelope;
}

double Kernel1D::sum() const {
    double s = 0.0;
    for (double t : taps) s += t;
    return s;
}

Kernel1D Kernel1D::flipped() const {
    Kernel1D out = *this;
    std::reverse(out.taps.begin(), out.taps.end());
    return out;
}

Kernel1D gauss_1d(double sigma, int radius) {
    if (sigma <= 0.0) throw std::domain_error("gauss_1d: sigma must be positive");
    if (radius < 1) throw std::domain_error("gauss_1d: radius must be >= 1");
    Kernel1D k{0, sigma, radius, std::vector<double>(2 * radius + 1)};
    double s = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-0.5 * i * i / (sigma * sigma));
        k.taps[static_cast<size_t>(i + radius)] = v;
        s += v;
    }
    for (double& t : k.taps) t /= s;
    return k;
}

Kernel1D gauss_deriv_1d(int order, double sigma, int radius) {
    if (order < 0 || order > kMaxDerivOrder)
        throw std::domain_error("gauss_deriv_1d: order must be in [0, 4]");
    if (sigma <= 0.0) throw std::domain_error("gauss_deriv_1d: sigma must be positive");
    if (radius < 1) throw std::domain_error("gauss_deriv_1d: radius must be >= 1");
    if (order == 0) return gauss_1d(sigma, radius);
    Kernel1D k{order, sigma, radius, std::vector<double>(2 * radius + 1)};
    for (int i = -radius; i <= radius; ++i)
        k.taps[static_cast<size_t>(i + radius)] = gauss_deriv_value(order, sigma, i);
    // Derivative kernels must respond zero to constants; odd orders cancel by
    // antisymmetry, even orders carry a small truncation residual that is
    // removed here.
    const double residual = k.sum() / static_cast<double>(k.taps.size());
    for (double& t : k.taps) t -= residual;
    return k;
}

double Kernel2D::frobenius_norm() const {
    double s = 0.0;
    for (double t : taps) s += t * t;
    return std::sqrt(s);
}

Kernel2D Kernel2D::flipped() const {
    Kernel2D out = *this;
    std::reverse(out.taps.begin(), out.taps.end());
    return out;
}

Kernel1D Kernel2D::factor_y() const { return gauss_deriv_1d(order_y, sigma, radius).flipped(); }
Kernel1D Kernel2D::factor_x() const { return gauss_deriv_1d(order_x, sigma, radius).flipped(); }

Kernel2D make_kernel_2d(int order_x, int order_y, double sigma, int radius, bool normalize) {
    if (order_x < 0 || order_y < 0 || order_x + order_y > kMaxDerivOrder)
        throw std::domain_error("make_kernel_2d: total order must be in [0, 4]");
    // Correlation orientation: flip each 1D factor, so correlating an image
    // with the assembled taps applies the analytic derivative by convolution.
    const Kernel1D ky = gauss_deriv_1d(order_y, sigma, radius).flipped();
    const Kernel1D kx = gauss_deriv_1d(order_x, sigma, radius).flipped();
    Kernel2D k{order_x, order_y, sigma, radius, false, std::vector<double>()};
    const int side = 2 * radius + 1;
    k.taps.resize(static_cast<size_t>(side) * side);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            k.taps[static_cast<size_t>(y) * side + x] = ky.taps[static_cast<size_t>(y)] * kx.taps[static_cast<size_t>(x)];
    if (normalize) {
        const double norm = k.frobenius_norm();
        for (double& t : k.taps) t /= norm;
        k.l2_normalized = true;
    }
    return k;
}

int BasisSpec::radius_for(double sigma) const {
    return static_cast<int>(std::ceil(truncation_factor * sigma));
}

void BasisSpec::validate() const {
    if (max_order < 0 || max_order > kMaxDerivOrder)
        throw std::domain_error("BasisSpec: max_order must be in [0, 4]");
    if (scales.empty()) throw std::domain_error("BasisSpec: scale list must be nonempty");
    for (size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] <= 0.0) throw std::domain_error("BasisSpec: scales must be positive");
        if (i > 0 && scales[i] <= scales[i - 1])
            throw std::domain_error("BasisSpec: scales must be strictly increasing");
    }
    if (truncation_factor <= 0.0)
        throw std::domain_error("BasisSpec: truncation_factor must be positive");
}

int FilterBasis::max_radius() const {
    int r = 0;
    for (const auto& k : kernels) r = std::max(r, k.radius);
    return r;
}

int FilterBasis::index_of(int order_x, int order_y, double sigma) const {
    for (size_t i = 0; i < kernels.size(); ++i) {
        const auto& k = kernels[i];
        if (k.order_x == order_x && k.order_y == order_y && k.sigma == sigma)
            return static_cast<int>(i);
    }
    return -1;
}

FilterBasis basis_2d(const BasisSpec& spec, const std::vector<double>& layer_scales) {
    spec.validate();
    if (layer_scales.empty()) throw std::domain_error("basis_2d: layer scale list must be nonempty");
    std::vector<double> scales = layer_scales;
    std::sort(scales.begin(), scales.end());
    const double smallest = scales.front();

    FilterBasis basis;
    basis.spec = spec;
    for (double sigma : scales) {
        const int radius = spec.radius_for(sigma);
        for (int total = 0; total <= spec.max_order; ++total) {
            if (total == 0 && sigma != smallest) continue;  // zero order once per layer
            for (int oy = 0; oy <= total; ++oy) {
                const int ox = total - oy;
                basis.kernels.push_back(make_kernel_2d(ox, oy, sigma, radius, spec.normalize));
            }
        }
    }
    return basis;
}

FilterBasis basis_2d(const BasisSpec& spec) { return basis_2d(spec, spec.scales); }

long basis_count(int max_order, const std::vector<int>& scales_per_layer) {
    if (max_order < 1 || max_order > kMaxDerivOrder)
        throw std::domain_error("basis_count: max_order must be in [1, 4]");
    if (scales_per_layer.empty())
        throw std::domain_error("basis_count: scales_per_layer must be nonempty");
    const long derivatives = static_cast<long>(max_order + 1) * (max_order + 2) / 2 - 1;
    long total = 0;
    for (int s : scales_per_layer) {
        if (s < 1) throw std::domain_error("basis_count: scale counts must be >= 1");
        total += derivatives * s + 1;
    }
    return total;
}

Kernel2D dilate(const Kernel2D& kernel, double n, double truncation_factor) {
    if (n < 0.0) throw std::domain_error("dilate: n must be non-negative");
    if (n == 0.0) return kernel;
    const int gr = static_cast<int>(std::ceil(truncation_factor * n));
    const Kernel1D g = gauss_1d(n, gr);
    Kernel2D out;
    out.order_x = kernel.order_x;
    out.order_y = kernel.order_y;
    out.sigma = std::sqrt(kernel.sigma * kernel.sigma + n * n);
    out.radius = kernel.radius + gr;
    out.l2_normalized = false;
    const int side = 2 * out.radius + 1;
    out.taps.assign(static_cast<size_t>(side) * side, 0.0);
    // Full 2D convolution with the separable Gaussian, rows then columns.
    const int kside = kernel.side();
    std::vector<double> rows(static_cast<size_t>(kside) * side, 0.0);
    for (int y = 0; y < kside; ++y)
        for (int x = 0; x < kside; ++x) {
            const double v = kernel.taps[static_cast<size_t>(y) * kside + x];
            for (int t = 0; t < 2 * gr + 1; ++t)
                rows[static_cast<size_t>(y) * side + x + t] += v * g.taps[static_cast<size_t>(t)];
        }
    for (int y = 0; y < kside; ++y)
        for (int x = 0; x < side; ++x) {
            const double v = rows[static_cast<size_t>(y) * side + x];
            for (int t = 0; t < 2 * gr + 1; ++t)
                out.taps[static_cast<size_t>(y + t) * side + x] += v * g.taps[static_cast<size_t>(t)];
        }
    return out;
}

std::array<double, 3> steer_second_order(double theta) {
    const double c = snap_trig(std::cos(theta));
    const double s = snap_trig(std::sin(theta));
    return {c * c, -2.0 * c * s + 0.0, s * s};
}

std::array<double, 4> steer_third_order(double theta) {
    const double c = snap_trig(std::cos(theta));
    const double s = snap_trig(std::sin(theta));
    return {c * c * c, -3.0 * c * c * s + 0.0, 3.0 * c * s * s + 0.0, -s * s * s + 0.0};
}

Kernel2D combine_kernels(std::span<const Kernel2D> kernels, std::span<const double> coeffs) {
    if (kernels.empty()) throw std::domain_error("combine_kernels: empty kernel list");
    if (kernels.size() != coeffs.size())
        throw std::domain_error("combine_kernels: kernel/coefficient count mismatch");
    const int radius = kernels[0].radius;
    for (const auto& k : kernels)
        if (k.radius != radius) throw std::domain_error("combine_kernels: mismatched kernel sizes");

    Kernel2D out = kernels[0];
    out.l2_normalized = false;
    std::fill(out.taps.begin(), out.taps.end(), 0.0);
    bool first = true;
    for (size_t i = 0; i < kernels.size(); ++i) {
        if (coeffs[i] == 0.0) continue;  // pure selection stays bit-exact
        if (first) {
            out.order_x = kernels[i].order_x;
            out.order_y = kernels[i].order_y;
            out.sigma = kernels[i].sigma;
            for (size_t t = 0; t < out.taps.size(); ++t) out.taps[t] = coeffs[i] * kernels[i].taps[t];
            first = false;
        } else {
            for (size_t t = 0; t < out.taps.size(); ++t) out.taps[t] += coeffs[i] * kernels[i].taps[t];
        }
    }
    return out;
}

}  // namespace rfnet
