#include "rfnet/jet.hpp"

#include <stdexcept>

namespace rfnet {

NJet njet(const Tensor& image, int center_x, int center_y, const BasisSpec& spec) {
    spec.validate();
    if (spec.scales.size() != 1) throw std::domain_error("njet: spec must hold a single scale");
    if (image.rank() != 3 || image.dim(0) != 1)
        throw std::domain_error("njet: image must be single channel [1,H,W]");
    const double sigma = spec.scales[0];
    const int radius = spec.radius_for(sigma);
    const int H = image.dim(1), W = image.dim(2);
    if (center_x < radius || center_y < radius || center_x >= W - radius || center_y >= H - radius)
        throw std::domain_error("njet: center closer than the kernel radius to a border");

    NJet jet;
    jet.center_x = center_x;
    jet.center_y = center_y;
    jet.sigma = sigma;
    jet.max_order = spec.max_order;
    for (int total = 0; total <= spec.max_order; ++total) {
        for (int oy = 0; oy <= total; ++oy) {
            const int ox = total - oy;
            const Kernel2D k = make_kernel_2d(ox, oy, sigma, radius, /*normalize=*/false);
            double acc = 0.0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    acc += image.at(0, center_y + dy, center_x + dx) * k.tap(dy, dx);
            jet.responses[{ox, oy}] = acc;
        }
    }
    return jet;
}

std::vector<double> taylor_reconstruct(const NJet& jet,
                                       std::span<const std::pair<double, double>> offsets) {
    static const double factorial[5] = {1, 1, 2, 6, 24};
    std::vector<double> values;
    values.reserve(offsets.size());
    for (const auto& [dx, dy] : offsets) {
        double acc = 0.0;
        for (const auto& [orders, resp] : jet.responses) {
            const auto [a, b] = orders;
            double term = resp / (factorial[a] * factorial[b]);
            for (int i = 0; i < a; ++i) term *= dx;
            for (int i = 0; i < b; ++i) term *= dy;
            acc += term;
        }
        values.push_back(acc);
    }
    return values;
}

}  // namespace rfnet
