#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "oracles.hpp"
#include "rfnet/errors.hpp"
#include "rfnet/kernel_io.hpp"
#include "rfnet/scalespace.hpp"

#include <sstream>

using namespace rfnet;

TEST_CASE("hermite_eval matches closed forms and pinned values") {
    CHECK(hermite_eval(0, 7.3) == 1.0);
    CHECK(hermite_eval(1, 2.0) == 4.0);
    CHECK(hermite_eval(3, 1.0) == doctest::Approx(-4.0).epsilon(1e-14));  // 8 - 12

    std::mt19937 rng(42);
    for (int m = 0; m <= 4; ++m)
        for (int i = 0; i < 25; ++i) {
            const double x = -4.0 + 8.0 * (rng() / 4294967296.0);
            CHECK(hermite_eval(m, x) == doctest::Approx(oracles::hermite_closed_form(m, x)).epsilon(1e-12));
        }
    CHECK_THROWS_AS(hermite_eval(9, 0.0), std::domain_error);
    CHECK_THROWS_AS(hermite_eval(-1, 0.0), std::domain_error);
}

TEST_CASE("hermite recurrence consistency up to order 4") {
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        const double x = -4.0 + 8.0 * (rng() / 4294967296.0);
        for (int m = 1; m <= 4; ++m) {
            const double lhs = hermite_eval(m + 1, x);
            const double rhs = 2.0 * x * hermite_eval(m, x) - 2.0 * m * hermite_eval(m - 1, x);
            const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
            CHECK(std::abs(lhs - rhs) / scale < 1e-9);
        }
    }
}

TEST_CASE("gauss_1d normalization, symmetry, center value") {
    const Kernel1D k = gauss_1d(1.0, 4);
    CHECK(k.taps.size() == 9);
    CHECK(k.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i <= 4; ++i) CHECK(k.tap(i) == k.tap(-i));

    // unnormalized center value is 1/sqrt(2*pi)
    double raw_center = std::exp(0.0);
    double raw_sum = 0.0;
    for (int i = -4; i <= 4; ++i) raw_sum += std::exp(-0.5 * i * i);
    CHECK(raw_center / raw_sum * k.sum() == doctest::Approx(k.tap(0)).epsilon(1e-12));
    CHECK(oracles::gauss_density(1.0, 0.0) == doctest::Approx(0.398942).epsilon(1e-5));

    CHECK_THROWS_AS(gauss_1d(0.0, 4), std::domain_error);
    CHECK_THROWS_AS(gauss_1d(-1.0, 4), std::domain_error);
}

TEST_CASE("gauss_deriv_1d order 0 equals gauss_1d") {
    const Kernel1D a = gauss_deriv_1d(0, 2.0, 8);
    const Kernel1D b = gauss_1d(2.0, 8);
    REQUIRE(a.taps.size() == b.taps.size());
    for (size_t i = 0; i < a.taps.size(); ++i) CHECK(a.taps[i] == b.taps[i]);
}

TEST_CASE("gauss_deriv_1d parity and zero sum") {
    for (int m = 1; m <= 4; ++m) {
        const Kernel1D k = gauss_deriv_1d(m, 1.5, 7);
        for (int i = 1; i <= k.radius; ++i) {
            if (m % 2 == 0)
                CHECK(k.tap(i) == doctest::Approx(k.tap(-i)).epsilon(1e-12));
            else
                CHECK(k.tap(i) == doctest::Approx(-k.tap(-i)).epsilon(1e-12));
        }
        if (m >= 1) CHECK(std::abs(k.sum()) < 1e-10);
    }
}

TEST_CASE("first derivative kernel convolved with a ramp gives +1") {
    const Kernel1D k = gauss_deriv_1d(1, 1.0, 6);
    // convolution: (f * k)(x) = sum_t f(x - t) k(t), f(t) = t
    const int x = 10;
    double acc = 0.0;
    for (int t = -k.radius; t <= k.radius; ++t) acc += static_cast<double>(x - t) * k.tap(t);
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-6));

    // agreement with the analytic derivative sampled by the oracle
    for (int t = -4; t <= 4; ++t)
        CHECK(k.tap(t) == doctest::Approx(oracles::gauss_d1(1.0, t)).epsilon(1e-12));
}

TEST_CASE("semigroup: composing two Gaussians equals one of combined scale") {
    for (double s1 : {1.0, 2.0})
        for (double s2 : {1.0, 2.0}) {
            const double s = std::sqrt(s1 * s1 + s2 * s2);
            const Kernel1D a = gauss_1d(s1, static_cast<int>(std::ceil(4 * s1)));
            const Kernel1D b = gauss_1d(s2, static_cast<int>(std::ceil(4 * s2)));
            const int radius = a.radius + b.radius;
            std::vector<double> conv(2 * radius + 1, 0.0);
            for (int i = -a.radius; i <= a.radius; ++i)
                for (int j = -b.radius; j <= b.radius; ++j)
                    conv[static_cast<size_t>(i + j + radius)] += a.tap(i) * b.tap(j);
            const Kernel1D direct = gauss_1d(s, radius);
            double err = 0.0;
            for (int i = -radius; i <= radius; ++i)
                err = std::max(err, std::abs(conv[static_cast<size_t>(i + radius)] - direct.tap(i)));
            CHECK(err < 1e-4);
        }
}

TEST_CASE("basis_2d enumeration and ordering") {
    BasisSpec spec;
    spec.max_order = 3;
    spec.scales = {1.0};
    const FilterBasis b3 = basis_2d(spec);
    CHECK(b3.size() == 10);

    spec.max_order = 1;
    const FilterBasis b1 = basis_2d(spec);
    CHECK(b1.size() == 3);
    CHECK(b1.kernels[0].order_x == 0);
    CHECK(b1.kernels[0].order_y == 0);
    CHECK(b1.kernels[1].order_x == 1);  // ascending order_y within an order
    CHECK(b1.kernels[1].order_y == 0);
    CHECK(b1.kernels[2].order_y == 1);

    spec.max_order = 3;
    spec.scales = {1.0, 2.0, 4.0, 8.0};
    const FilterBasis bs = basis_2d(spec);
    CHECK(bs.size() == 37);  // 9 per scale + one zero-order
    CHECK(bs.index_of(0, 0, 1.0) == 0);
    CHECK(bs.index_of(0, 0, 2.0) == -1);  // zero order only at the smallest scale
    // ascending scale ordering
    for (int i = 1; i < bs.size(); ++i)
        CHECK(bs.kernels[static_cast<size_t>(i)].sigma >= bs.kernels[static_cast<size_t>(i - 1)].sigma);

    CHECK_THROWS_AS(basis_2d(spec, {}), std::domain_error);
}

TEST_CASE("basis_count reproduces every published filter total") {
    CHECK(basis_count(1, {1, 1, 1, 1}) == 12);
    CHECK(basis_count(2, {1, 1, 1, 1}) == 24);
    CHECK(basis_count(3, {1, 1, 1, 1}) == 40);
    CHECK(basis_count(4, {1, 1, 1, 1}) == 60);
    CHECK(basis_count(1, {4, 3, 2, 1}) == 24);
    CHECK(basis_count(2, {4, 3, 2, 1}) == 54);
    CHECK(basis_count(3, {4, 3, 2, 1}) == 94);
    CHECK(basis_count(4, {4, 3, 2, 1}) == 144);
}

TEST_CASE("kernel separability: taps equal the outer product of the factors") {
    for (auto [ox, oy] : {std::pair{1, 0}, {2, 1}, {0, 3}, {2, 2}}) {
        const Kernel2D k = make_kernel_2d(ox, oy, 1.5, 6, /*normalize=*/false);
        const Kernel1D fy = k.factor_y();
        const Kernel1D fx = k.factor_x();
        for (int dy = -k.radius; dy <= k.radius; ++dy)
            for (int dx = -k.radius; dx <= k.radius; ++dx) {
                const double expect = fy.tap(dy) * fx.tap(dx);
                CHECK(std::abs(k.tap(dy, dx) - expect) < 1e-14);
            }
    }
}

TEST_CASE("normalized 2D kernels have unit Frobenius norm") {
    const Kernel2D k = make_kernel_2d(2, 1, 2.0, 8, /*normalize=*/true);
    CHECK(k.l2_normalized);
    CHECK(k.frobenius_norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dilate: identity at n = 0, scale composition, zero sum preserved") {
    const Kernel2D k = make_kernel_2d(1, 0, 1.0, 4, /*normalize=*/false);
    const Kernel2D same = dilate(k, 0.0);
    CHECK(same.taps == k.taps);

    const Kernel2D d = dilate(k, 1.0);
    CHECK(d.sigma == doctest::Approx(std::sqrt(2.0)));
    const Kernel2D direct = make_kernel_2d(1, 0, std::sqrt(2.0), d.radius, /*normalize=*/false);
    CHECK(oracles::max_abs_diff(d, direct) < 1e-3);

    double sum = 0.0;
    for (double t : d.taps) sum += t;
    CHECK(std::abs(sum) < 1e-10);
}

TEST_CASE("dilation identity holds across orders and scale pairs") {
    for (auto [j, n] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 2.0}}) {
        BasisSpec spec;
        spec.max_order = 3;
        spec.scales = {j};
        spec.normalize = false;
        const FilterBasis basis = basis_2d(spec);
        for (const Kernel2D& k : basis.kernels) {
            const Kernel2D d = dilate(k, n);
            const Kernel2D direct =
                make_kernel_2d(k.order_x, k.order_y, std::sqrt(j * j + n * n), d.radius, false);
            CHECK(oracles::max_abs_diff(d, direct) < 1e-3);
        }
    }
}

TEST_CASE("steering coefficients at pinned angles") {
    {
        const auto c = steer_second_order(0.0);
        CHECK(c[0] == 1.0);
        CHECK(c[1] == 0.0);
        CHECK(c[2] == 0.0);
    }
    {
        const auto c = steer_second_order(M_PI / 2);
        CHECK(c[0] == 0.0);
        CHECK(c[1] == 0.0);
        CHECK(c[2] == 1.0);
    }
    {
        const auto c = steer_second_order(M_PI / 4);
        CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(c[1] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-12));
    }
    {
        const auto c = steer_third_order(0.0);
        CHECK(c == std::array<double, 4>{1.0, 0.0, 0.0, 0.0});
    }
    {
        const auto c = steer_third_order(M_PI / 2);
        CHECK(c[0] == 0.0);
        CHECK(c[1] == 0.0);
        CHECK(c[2] == 0.0);
        CHECK(c[3] == -1.0);
    }
}

namespace {
std::vector<Kernel2D> second_order_set(double sigma, int radius) {
    return {make_kernel_2d(2, 0, sigma, radius, false), make_kernel_2d(1, 1, sigma, radius, false),
            make_kernel_2d(0, 2, sigma, radius, false)};
}
std::vector<Kernel2D> third_order_set(double sigma, int radius) {
    return {make_kernel_2d(3, 0, sigma, radius, false), make_kernel_2d(2, 1, sigma, radius, false),
            make_kernel_2d(1, 2, sigma, radius, false), make_kernel_2d(0, 3, sigma, radius, false)};
}
}  // namespace

TEST_CASE("steering at an axis angle is bit-exact kernel selection") {
    const auto set = second_order_set(2.0, 8);
    const auto coeffs = steer_second_order(M_PI / 2);
    const Kernel2D steered = combine_kernels(set, coeffs);
    CHECK(steered.taps == set[2].taps);  // G_yy, no arithmetic applied
}

TEST_CASE("steered kernels match rotated-grid sampling at generic angles") {
    const double sigma = 2.0;
    const int radius = 8;
    for (double theta : {M_PI / 6, M_PI / 4, M_PI / 3}) {
        {
            const auto set = second_order_set(sigma, radius);
            const Kernel2D steered = combine_kernels(set, steer_second_order(theta));
            const Kernel2D expect = oracles::rotated_grid_sample(2, 0, sigma, theta, radius);
            CHECK(oracles::max_abs_diff(steered, expect) < 1e-3);
        }
        {
            const auto set = third_order_set(sigma, radius);
            const Kernel2D steered = combine_kernels(set, steer_third_order(theta));
            const Kernel2D expect = oracles::rotated_grid_sample(3, 0, sigma, theta, radius);
            CHECK(oracles::max_abs_diff(steered, expect) < 1e-3);
        }
    }
}

TEST_CASE("combine_kernels edge cases") {
    const auto set = second_order_set(1.0, 4);
    const double zeros[3] = {0.0, 0.0, 0.0};
    const Kernel2D z = combine_kernels(set, zeros);
    for (double t : z.taps) CHECK(t == 0.0);

    const double two_three[3] = {2.0, 3.0, 0.0};
    const Kernel2D mix = combine_kernels(set, two_three);
    for (size_t i = 0; i < mix.taps.size(); ++i)
        CHECK(mix.taps[i] == doctest::Approx(2.0 * set[0].taps[i] + 3.0 * set[1].taps[i]).epsilon(1e-12));
}

TEST_CASE("RFK1 text format round-trips kernels exactly") {
    const Kernel2D k = make_kernel_2d(2, 1, 1.5, 6, true);
    std::stringstream ss;
    write_kernel(ss, k);
    const Kernel2D r = read_kernel(ss);
    CHECK(r.order_x == k.order_x);
    CHECK(r.order_y == k.order_y);
    CHECK(r.sigma == k.sigma);
    CHECK(r.radius == k.radius);
    CHECK(r.l2_normalized == k.l2_normalized);
    CHECK(r.taps == k.taps);

    std::stringstream bad("RFKX 0 0 1 1 0\n");
    CHECK_THROWS_AS(read_kernel(bad), DataError);
}
