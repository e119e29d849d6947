#ifndef RFNET_MNIST_HPP
#define RFNET_MNIST_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rfnet/tensor.hpp"

namespace rfnet {

/// Raw contents of an IDX image file (big-endian container used by the MNIST
/// distribution; magic 2051).
struct RawImages {
    int count = 0;
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> pixels;  // count * rows * cols bytes
};

/// Raw contents of an IDX label file (magic 2049).
struct RawLabels {
    std::vector<uint8_t> labels;
};

/// Readers accept plain files and, when the name ends in ".gz", gzip
/// compressed ones.
RawImages read_idx_images(const std::string& path);
RawLabels read_idx_labels(const std::string& path);
void write_idx_images(const RawImages& images, const std::string& path);
void write_idx_labels(const RawLabels& labels, const std::string& path);

struct Dataset {
    Tensor images;            // [N,1,rows,cols], scaled to [0,1] minus the train mean
    std::vector<int> labels;  // class per sample
    double mean = 0.0;        // scalar train-split mean used for normalization

    int size() const { return static_cast<int>(labels.size()); }
    /// Copy of the first n samples, in order.
    Dataset take_first(int n) const;
    Tensor sample(int index) const;  // [1,rows,cols]
};

/// Scales to [0,1] and subtracts the scalar mean of the training split from
/// both splits; the mean is stored in both returned datasets.
std::pair<Dataset, Dataset> normalize(const RawImages& train_images, const RawLabels& train_labels,
                                      const RawImages& test_images, const RawLabels& test_labels);

/// Class-balanced subset of n samples, without replacement, deterministic in
/// (n, seed). A remainder not divisible by the class count is assigned
/// round-robin over ascending class labels.
Dataset take_subset(const Dataset& data, int n, uint64_t seed);

}  // namespace rfnet

#endif
