#include "rfnet/mnist.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>

#include "rfnet/errors.hpp"
#include "rfnet/network.hpp"  // next_uniform01

namespace rfnet {

namespace {

constexpr uint32_t kImageMagic = 2051;
constexpr uint32_t kLabelMagic = 2049;

bool has_gz_suffix(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::vector<uint8_t> read_file_bytes(const std::string& path) {
    if (has_gz_suffix(path)) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw DataError("cannot open: " + path);
        std::vector<uint8_t> out;
        uint8_t buf[1 << 16];
        int n;
        while ((n = gzread(f, buf, sizeof buf)) > 0) out.insert(out.end(), buf, buf + n);
        const bool bad = n < 0;
        gzclose(f);
        if (bad) throw DataError("gzip decompression failed: " + path);
        return out;
    }
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open: " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

uint32_t read_be32(const std::vector<uint8_t>& bytes, size_t offset) {
    return (static_cast<uint32_t>(bytes[offset]) << 24) |
           (static_cast<uint32_t>(bytes[offset + 1]) << 16) |
           (static_cast<uint32_t>(bytes[offset + 2]) << 8) | static_cast<uint32_t>(bytes[offset + 3]);
}

void append_be32(std::vector<uint8_t>& bytes, uint32_t v) {
    bytes.push_back(static_cast<uint8_t>(v >> 24));
    bytes.push_back(static_cast<uint8_t>(v >> 16));
    bytes.push_back(static_cast<uint8_t>(v >> 8));
    bytes.push_back(static_cast<uint8_t>(v));
}

}  // namespace

RawImages read_idx_images(const std::string& path) {
    const std::vector<uint8_t> bytes = read_file_bytes(path);
    if (bytes.size() < 16) throw DataError(path + ": too short for an IDX image header");
    const uint32_t magic = read_be32(bytes, 0);
    if (magic != kImageMagic)
        throw DataError(path + ": IDX image magic mismatch (got " + std::to_string(magic) +
                        ", want 2051)");
    RawImages img;
    img.count = static_cast<int>(read_be32(bytes, 4));
    img.rows = static_cast<int>(read_be32(bytes, 8));
    img.cols = static_cast<int>(read_be32(bytes, 12));
    const size_t expected = static_cast<size_t>(img.count) * img.rows * img.cols;
    const size_t actual = bytes.size() - 16;
    if (actual != expected)
        throw DataError(path + ": truncated image data, expected " + std::to_string(expected) +
                        " bytes after the header, got " + std::to_string(actual));
    img.pixels.assign(bytes.begin() + 16, bytes.end());
    return img;
}

RawLabels read_idx_labels(const std::string& path) {
    const std::vector<uint8_t> bytes = read_file_bytes(path);
    if (bytes.size() < 8) throw DataError(path + ": too short for an IDX label header");
    const uint32_t magic = read_be32(bytes, 0);
    if (magic != kLabelMagic)
        throw DataError(path + ": IDX label magic mismatch (got " + std::to_string(magic) +
                        ", want 2049)");
    const size_t count = read_be32(bytes, 4);
    const size_t actual = bytes.size() - 8;
    if (actual != count)
        throw DataError(path + ": truncated label data, expected " + std::to_string(count) +
                        " bytes after the header, got " + std::to_string(actual));
    RawLabels lab;
    lab.labels.assign(bytes.begin() + 8, bytes.end());
    return lab;
}

void write_idx_images(const RawImages& images, const std::string& path) {
    std::vector<uint8_t> bytes;
    bytes.reserve(16 + images.pixels.size());
    append_be32(bytes, kImageMagic);
    append_be32(bytes, static_cast<uint32_t>(images.count));
    append_be32(bytes, static_cast<uint32_t>(images.rows));
    append_be32(bytes, static_cast<uint32_t>(images.cols));
    bytes.insert(bytes.end(), images.pixels.begin(), images.pixels.end());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
    if (!os) throw DataError("write failed: " + path);
}

void write_idx_labels(const RawLabels& labels, const std::string& path) {
    std::vector<uint8_t> bytes;
    append_be32(bytes, kLabelMagic);
    append_be32(bytes, static_cast<uint32_t>(labels.labels.size()));
    bytes.insert(bytes.end(), labels.labels.begin(), labels.labels.end());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
    if (!os) throw DataError("write failed: " + path);
}

Dataset Dataset::take_first(int n) const {
    if (n > size()) throw std::domain_error("take_first: not enough samples");
    Dataset out;
    out.mean = mean;
    out.labels.assign(labels.begin(), labels.begin() + n);
    out.images = Tensor({n, 1, images.dim(2), images.dim(3)});
    const size_t per = static_cast<size_t>(images.dim(2)) * images.dim(3);
    std::copy_n(images.data.begin(), per * static_cast<size_t>(n), out.images.data.begin());
    return out;
}

Tensor Dataset::sample(int index) const {
    Tensor t({1, images.dim(2), images.dim(3)});
    const size_t per = static_cast<size_t>(images.dim(2)) * images.dim(3);
    std::copy_n(images.data.begin() + static_cast<long>(per * static_cast<size_t>(index)), per,
                t.data.begin());
    return t;
}

namespace {

Dataset to_dataset(const RawImages& images, const RawLabels& labels, double mean) {
    if (images.count != static_cast<int>(labels.labels.size()))
        throw DataError("image/label count mismatch: " + std::to_string(images.count) + " vs " +
                        std::to_string(labels.labels.size()));
    Dataset d;
    d.mean = mean;
    d.images = Tensor({images.count, 1, images.rows, images.cols});
    for (size_t i = 0; i < images.pixels.size(); ++i)
        d.images.data[i] = images.pixels[i] / 255.0 - mean;
    d.labels.assign(labels.labels.begin(), labels.labels.end());
    return d;
}

}  // namespace

std::pair<Dataset, Dataset> normalize(const RawImages& train_images, const RawLabels& train_labels,
                                      const RawImages& test_images, const RawLabels& test_labels) {
    if (train_images.count == 0) throw std::domain_error("normalize: empty training split");
    double sum = 0.0;
    for (uint8_t p : train_images.pixels) sum += p / 255.0;
    const double mean = sum / static_cast<double>(train_images.pixels.size());
    return {to_dataset(train_images, train_labels, mean),
            to_dataset(test_images, test_labels, mean)};
}

Dataset take_subset(const Dataset& data, int n, uint64_t seed) {
    if (n > data.size()) throw std::domain_error("take_subset: subset larger than the dataset");
    std::map<int, std::vector<int>> by_class;
    for (int i = 0; i < data.size(); ++i) by_class[data.labels[static_cast<size_t>(i)]].push_back(i);
    const int num_classes = static_cast<int>(by_class.size());
    if (n < num_classes)
        throw std::domain_error("take_subset: need at least one sample per class (" +
                                std::to_string(num_classes) + " classes)");

    std::mt19937 rng(static_cast<uint32_t>(seed ^ (seed >> 32)));
    const int base = n / num_classes;
    int remainder = n % num_classes;
    std::vector<int> chosen;
    chosen.reserve(static_cast<size_t>(n));
    for (auto& [label, indices] : by_class) {
        int want = base + (remainder > 0 ? 1 : 0);  // round-robin over ascending labels
        if (remainder > 0) --remainder;
        if (want > static_cast<int>(indices.size()))
            throw std::domain_error("take_subset: class " + std::to_string(label) +
                                    " has only " + std::to_string(indices.size()) + " samples");
        // seeded Fisher-Yates prefix
        for (int k = 0; k < want; ++k) {
            const int remaining = static_cast<int>(indices.size()) - k;
            const int pick = k + static_cast<int>(next_uniform01(rng) * remaining);
            std::swap(indices[static_cast<size_t>(k)], indices[static_cast<size_t>(pick)]);
            chosen.push_back(indices[static_cast<size_t>(k)]);
        }
    }

    Dataset out;
    out.mean = data.mean;
    out.images = Tensor({n, 1, data.images.dim(2), data.images.dim(3)});
    out.labels.resize(static_cast<size_t>(n));
    const size_t per = static_cast<size_t>(data.images.dim(2)) * data.images.dim(3);
    for (int i = 0; i < n; ++i) {
        const int src = chosen[static_cast<size_t>(i)];
        std::copy_n(data.images.data.begin() + static_cast<long>(per * static_cast<size_t>(src)),
                    per, out.images.data.begin() + static_cast<long>(per * static_cast<size_t>(i)));
        out.labels[static_cast<size_t>(i)] = data.labels[static_cast<size_t>(src)];
    }
    return out;
}

}  // namespace rfnet
