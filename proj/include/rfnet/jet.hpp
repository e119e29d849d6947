#ifndef RFNET_JET_HPP
#define RFNET_JET_HPP

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "rfnet/scalespace.hpp"
#include "rfnet/tensor.hpp"

namespace rfnet {

/// Gaussian derivative responses of one image location at one scale, all
/// orders a+b <= max_order: (M+1)(M+2)/2 entries.
struct NJet {
    int center_x = 0;
    int center_y = 0;
    double sigma = 1.0;
    int max_order = 0;
    std::map<std::pair<int, int>, double> responses;  // (order_x, order_y) -> value

    double at(int order_x, int order_y) const { return responses.at({order_x, order_y}); }
};

/// Derivative responses of a single-channel image at `center`, computed with
/// unnormalized kernels so the values are true derivatives of the smoothed
/// image. The spec must hold a single scale; the center must be at least a
/// kernel radius away from every border.
NJet njet(const Tensor& image, int center_x, int center_y, const BasisSpec& spec);

/// Taylor evaluation of the smoothed image at center + offset:
/// sum over a+b <= M of responses[(a,b)] / (a! b!) * dx^a * dy^b.
std::vector<double> taylor_reconstruct(const NJet& jet,
                                       std::span<const std::pair<double, double>> offsets);

}  // namespace rfnet

#endif
