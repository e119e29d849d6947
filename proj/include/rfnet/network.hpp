#ifndef RFNET_NETWORK_HPP
#define RFNET_NETWORK_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rfnet/scalespace.hpp"
#include "rfnet/tensor.hpp"

namespace rfnet {

enum class BasisVariant { gaussian, free_filters };

/// Architecture description. Every block applies a fixed filter stage
/// (Gaussian derivative basis, or learnable-support patches for the matched
/// free-filter control), a learnable 1x1 recombination, a rectifier, and
/// optionally 2x2 max pooling. A final 1x1 recombination onto the class maps
/// feeds global average pooling.
struct NetworkConfig {
    int basis_order = 3;
    int num_scales = 1;   // scales in the first block; later blocks drop one
    int blocks = 3;
    std::vector<int> widths = {64, 64, 64};  // recombination units per block
    int classes = 10;
    std::vector<int> pool_after = {1, 2, 3};  // 1-based blocks followed by pooling
    double truncation = 4.0;
    bool normalize_basis = true;
    bool bias = true;
    BasisVariant variant = BasisVariant::gaussian;
    int input_channels = 1;
    int input_height = 28;
    int input_width = 28;
    uint64_t seed = 1;

    /// Scale list per block, expressed at the block's own resolution:
    /// sigma_s = 2^s with one scale fewer in each subsequent block.
    std::vector<std::vector<double>> layer_scales() const;
    void validate() const;

    std::string serialize() const;
    static NetworkConfig deserialize(const std::string& text);
};

/// Fixed (non-learnable) filter stage of one block.
struct BasisStage {
    FilterBasis basis;      // gaussian variant
    int patch_radius = -1;  // >= 0 selects the free-filter patch variant
    int in_maps = 0;

    int basis_size() const;
};

/// Learnable 1x1 recombination: out[j] = sum_{i,b} alpha[j,i,b] zeta[i,b] + bias[j].
/// Alpha and bias live in the network's flat parameter vector.
struct RecombineStage {
    int out_maps = 0;  // J
    int in_maps = 0;   // I
    int basis = 0;     // B
    size_t alpha_offset = 0;
    size_t bias_offset = 0;
    bool has_bias = true;

    size_t alpha_count() const { return static_cast<size_t>(out_maps) * in_maps * basis; }
};

/// Basis responses zeta[i*B+b] = correlation of input channel i with fixed
/// filter b; [I,H,W] -> [I*B,H,W].
Tensor basis_forward(const BasisStage& stage, const Tensor& input);

/// Gradient through the fixed stage: correlation of each response gradient
/// with the 180-degree flipped filter, summed over b; [I*B,H,W] -> [I,H,W].
Tensor basis_backward(const BasisStage& stage, const Tensor& grad_zeta);

Tensor recombine_forward(const RecombineStage& stage, std::span<const double> params,
                         const Tensor& zeta);

/// Writes alpha/bias gradients into `param_grad` (accumulating) and returns
/// the gradient with respect to zeta.
Tensor recombine_backward(const RecombineStage& stage, std::span<const double> params,
                          const Tensor& zeta, const Tensor& upstream,
                          std::span<double> param_grad);

struct BlockTrace {
    Tensor input;    // [I,H,W]
    Tensor zeta;     // [I*B,H,W]
    Tensor preact;   // [J,H,W]
    bool pooled = false;
    PoolResult pool;       // valid when pooled
    Tensor block_output;   // pooled (or rectified) output
};

struct Trace {
    std::vector<BlockTrace> blocks;
    Tensor final_pre;  // [K,h,w]
    std::vector<double> logits;
};

class Network {
public:
    explicit Network(const NetworkConfig& cfg);

    const NetworkConfig& config() const { return cfg_; }

    size_t parameter_count() const { return params_.size(); }
    std::span<double> parameters() { return params_; }
    std::span<const double> parameters() const { return params_; }
    std::span<double> velocity() { return velocity_; }
    std::span<const double> velocity() const { return velocity_; }
    /// 1 where weight decay applies (alpha entries), 0 for biases.
    std::span<const uint8_t> decay_mask() const { return decay_mask_; }

    int num_blocks() const { return cfg_.blocks; }
    const BasisStage& basis_stage(int block) const { return basis_stages_[static_cast<size_t>(block)]; }
    /// Recombination stages; index cfg.blocks is the final class projection.
    const RecombineStage& recombine_stage(int index) const {
        return recombine_stages_[static_cast<size_t>(index)];
    }
    /// Learnable weights of one stage as a [J,I,B] tensor copy.
    Tensor alpha_tensor(int stage) const;

    std::vector<double> forward(const Tensor& input, Trace* trace = nullptr) const;
    void backward(const Trace& trace, std::span<const double> logit_grad,
                  std::span<double> param_grad, Tensor* input_grad = nullptr) const;
    /// Forward over [N,C,H,W], returning logits [N,K]. Deterministic for any
    /// thread count.
    Tensor forward_batch(const Tensor& batch, int threads = 1) const;

    /// FNV-1a hash over every fixed filter tap; fixed stages must never move
    /// during training.
    uint64_t basis_checksum() const;

    /// The kernel implicitly applied from input map i to output map j of a
    /// block: sum_b alpha[j,i,b] * phi_b. Diagnostic path only.
    Kernel2D effective_filter(int block, int out_map, int in_map) const;

    int64_t epoch() const { return epoch_; }
    void set_epoch(int64_t e) { epoch_ = e; }
    std::mt19937& rng() { return rng_; }

    void save_checkpoint(const std::string& path) const;
    static Network load_checkpoint(const std::string& path);

private:
    Network() = default;
    void build_stages();

    NetworkConfig cfg_;
    std::vector<BasisStage> basis_stages_;
    std::vector<RecombineStage> recombine_stages_;
    std::vector<double> params_;
    std::vector<double> velocity_;
    std::vector<uint8_t> decay_mask_;
    int64_t epoch_ = 0;
    std::mt19937 rng_;
};

/// 53-bit uniform in [0,1) drawn from two engine words; keeps parameter
/// initialization and shuffling reproducible across standard libraries.
double next_uniform01(std::mt19937& rng);

}  // namespace rfnet

#endif
