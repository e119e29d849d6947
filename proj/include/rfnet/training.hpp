#ifndef RFNET_TRAINING_HPP
#define RFNET_TRAINING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rfnet/mnist.hpp"
#include "rfnet/network.hpp"

namespace rfnet {

struct TrainConfig {
    double lr = 0.05;
    double momentum = 0.9;
    double weight_decay = 0.0005;
    int batch_size = 64;
    int epochs = 60;
    std::vector<int> lr_drop_epochs = {30, 45};
    double lr_drop_factor = 10.0;
    uint64_t seed = 1;
    int threads = 0;     // 0 = hardware concurrency
    int eval_every = 1;  // test-set evaluation period in epochs; 0 = final only

    void validate() const;
};

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;  // negative when not evaluated this epoch
    double seconds = 0.0;
};

struct RunMetrics {
    std::vector<EpochMetrics> epochs;

    /// CSV with header epoch,train_loss,train_acc,test_acc,seconds.
    std::string to_csv() const;
};

/// One SGD update over the flat parameter vector:
/// g = grad + weight_decay * param (alpha only), v = momentum * v + g,
/// param -= lr * v. `grad` must already be the batch mean.
void sgd_step(std::span<double> params, std::span<const double> grad, std::span<double> velocity,
              std::span<const uint8_t> decay_mask, double lr, double momentum,
              double weight_decay);

struct EvalResult {
    double accuracy = 0.0;
    double mean_loss = 0.0;
};

EvalResult evaluate(const Network& net, const Dataset& data, int threads = 0);

/// Mini-batch SGD over the train split; per-sample gradients are computed in
/// parallel and reduced in sample order, so results do not depend on the
/// thread count. Resumes from net.epoch() when it is nonzero.
RunMetrics train(Network& net, const Dataset& train_data, const Dataset& test_data,
                 const TrainConfig& cfg);

struct SweepRow {
    int size = 0;
    std::string variant;
    int repeat = 0;
    double test_acc = 0.0;
};

/// Trains the Gaussian-basis network and the matched free-filter control on
/// class-balanced subsets of the training pool, `repeats` seeds per size.
/// Both variants see identical subsets and training settings.
std::vector<SweepRow> subset_sweep(const NetworkConfig& arch, const TrainConfig& train_cfg,
                                   const Dataset& pool, const Dataset& test,
                                   const std::vector<int>& sizes,
                                   const std::vector<int>& epochs_per_size, int repeats);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace rfnet

#endif
