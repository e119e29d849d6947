#include "rfnet/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gemm.hpp"
#include "parallel.hpp"
#include "rfnet/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace rfnet {

namespace {

constexpr char kCheckpointMagic[4] = {'R', 'F', 'N', 'N'};
constexpr uint32_t kCheckpointVersion = 1;

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

}  // namespace

double next_uniform01(std::mt19937& rng) {
    const uint64_t hi = rng() >> 5;  // 27 bits
    const uint64_t lo = rng() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

std::vector<std::vector<double>> NetworkConfig::layer_scales() const {
    std::vector<std::vector<double>> per_block;
    for (int l = 0; l < blocks; ++l) {
        const int count = std::max(num_scales - l, 1);
        std::vector<double> scales;
        for (int s = 0; s < count; ++s) scales.push_back(std::pow(2.0, s));
        per_block.push_back(std::move(scales));
    }
    return per_block;
}

void NetworkConfig::validate() const {
    if (basis_order < 0 || basis_order > 4) throw ConfigError("arch: basis order must be in [0, 4]");
    if (num_scales < 1) throw ConfigError("arch: num_scales must be >= 1");
    if (blocks < 1) throw ConfigError("arch: need at least one block");
    if (static_cast<int>(widths.size()) != blocks)
        throw ConfigError("arch: widths list must have one entry per block");
    for (int w : widths)
        if (w < 1) throw ConfigError("arch: widths must be positive");
    if (classes < 2) throw ConfigError("arch: need at least two classes");
    for (int p : pool_after)
        if (p < 1 || p > blocks) throw ConfigError("arch: pool positions must name a block");
    if (truncation <= 0) throw ConfigError("arch: truncation must be positive");
    if (input_channels < 1 || input_height < 1 || input_width < 1)
        throw ConfigError("arch: bad input dimensions");
}

std::string NetworkConfig::serialize() const {
    std::ostringstream os;
    os << "order=" << basis_order << '\n'
       << "num_scales=" << num_scales << '\n'
       << "blocks=" << blocks << '\n'
       << "widths=" << join_ints(widths) << '\n'
       << "classes=" << classes << '\n'
       << "pool=" << join_ints(pool_after) << '\n';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", truncation);
    os << "truncation=" << buf << '\n'
       << "normalize=" << (normalize_basis ? 1 : 0) << '\n'
       << "bias=" << (bias ? 1 : 0) << '\n'
       << "variant=" << (variant == BasisVariant::gaussian ? "gaussian" : "free") << '\n'
       << "input=" << input_channels << ',' << input_height << ',' << input_width << '\n'
       << "seed=" << seed << '\n';
    return os.str();
}

NetworkConfig NetworkConfig::deserialize(const std::string& text) {
    NetworkConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw DataError("network config: malformed line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw DataError(std::string("network config: missing key ") + key);
        return it->second;
    };
    cfg.basis_order = std::stoi(need("order"));
    cfg.num_scales = std::stoi(need("num_scales"));
    cfg.blocks = std::stoi(need("blocks"));
    cfg.widths = split_ints(need("widths"));
    cfg.classes = std::stoi(need("classes"));
    cfg.pool_after = split_ints(need("pool"));
    cfg.truncation = std::stod(need("truncation"));
    cfg.normalize_basis = need("normalize") == "1";
    cfg.bias = need("bias") == "1";
    const std::string& var = need("variant");
    if (var == "gaussian")
        cfg.variant = BasisVariant::gaussian;
    else if (var == "free")
        cfg.variant = BasisVariant::free_filters;
    else
        throw DataError("network config: unknown variant '" + var + "'");
    const std::vector<int> in = split_ints(need("input"));
    if (in.size() != 3) throw DataError("network config: input must be C,H,W");
    cfg.input_channels = in[0];
    cfg.input_height = in[1];
    cfg.input_width = in[2];
    cfg.seed = std::stoull(need("seed"));
    cfg.validate();
    return cfg;
}

int BasisStage::basis_size() const {
    if (patch_radius >= 0) {
        const int side = 2 * patch_radius + 1;
        return side * side;
    }
    return basis.size();
}

Tensor basis_forward(const BasisStage& stage, const Tensor& input) {
    if (input.rank() != 3 || input.dim(0) != stage.in_maps)
        throw std::domain_error("basis_forward: input shape mismatch");
    const int I = input.dim(0), H = input.dim(1), W = input.dim(2);
    const int B = stage.basis_size();
    Tensor out({I * B, H, W});

    if (stage.patch_radius >= 0) {
        // Free-filter control: responses are zero-padded shifted copies, so a
        // subsequent 1x1 recombination implements a dense convolution whose
        // kernel support matches the Gaussian basis it replaces.
        const int r = stage.patch_radius;
        for (int i = 0; i < I; ++i) {
            int b = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx, ++b) {
                    std::span<double> dst = out.channel(i * B + b);
                    const int y0 = std::max(0, -dy), y1 = std::min(H, H - dy);
                    for (int y = y0; y < y1; ++y) {
                        const int x0 = std::max(0, -dx), x1 = std::min(W, W - dx);
                        const double* src = input.channel(i).data() + static_cast<size_t>(y + dy) * W;
                        double* row = dst.data() + static_cast<size_t>(y) * W;
                        for (int x = x0; x < x1; ++x) row[x] = src[x + dx];
                    }
                }
        }
        return out;
    }

    const int max_r = stage.basis.max_radius();
    if (max_r >= H || max_r >= W) throw std::domain_error("basis_forward: kernel exceeds input");
    // Kernels sharing (sigma, order_x) reuse one horizontal pass.
    std::vector<double> scratch(static_cast<size_t>(H) * W);
    std::map<std::pair<double, int>, std::vector<double>> hpass;
    for (int i = 0; i < I; ++i) {
        hpass.clear();
        for (int b = 0; b < B; ++b) {
            const Kernel2D& k = stage.basis.kernels[static_cast<size_t>(b)];
            const auto key = std::make_pair(k.sigma, k.order_x);
            auto it = hpass.find(key);
            if (it == hpass.end()) {
                it = hpass.emplace(key, std::vector<double>(static_cast<size_t>(H) * W)).first;
                horizontal_pass(input.channel(i), H, W, k.factor_x(), it->second);
            }
            Kernel1D ky = k.factor_y();
            if (k.l2_normalized) {
                // fold the Frobenius normalization into the vertical factor
                double ny = 0.0, nx = 0.0;
                const Kernel1D kx = k.factor_x();
                for (double t : ky.taps) ny += t * t;
                for (double t : kx.taps) nx += t * t;
                const double scale = 1.0 / std::sqrt(ny * nx);
                for (double& t : ky.taps) t *= scale;
            }
            vertical_pass(it->second, H, W, ky, out.channel(i * B + b));
        }
    }
    return out;
}

Tensor basis_backward(const BasisStage& stage, const Tensor& grad_zeta) {
    const int B = stage.basis_size();
    if (grad_zeta.rank() != 3 || grad_zeta.dim(0) != stage.in_maps * B)
        throw std::domain_error("basis_backward: response gradient shape mismatch");
    const int I = stage.in_maps, H = grad_zeta.dim(1), W = grad_zeta.dim(2);
    Tensor out({I, H, W});

    if (stage.patch_radius >= 0) {
        const int r = stage.patch_radius;
        for (int i = 0; i < I; ++i) {
            std::span<double> dst = out.channel(i);
            int b = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx, ++b) {
                    std::span<const double> src = grad_zeta.channel(i * B + b);
                    const int y0 = std::max(0, -dy), y1 = std::min(H, H - dy);
                    for (int y = y0; y < y1; ++y) {
                        const int x0 = std::max(0, -dx), x1 = std::min(W, W - dx);
                        const double* srow = src.data() + static_cast<size_t>(y) * W;
                        double* drow = dst.data() + static_cast<size_t>(y + dy) * W;
                        for (int x = x0; x < x1; ++x) drow[x + dx] += srow[x];
                    }
                }
        }
        return out;
    }

    std::vector<double> scratch(static_cast<size_t>(H) * W);
    for (int i = 0; i < I; ++i) {
        std::span<double> dst = out.channel(i);
        for (int b = 0; b < B; ++b) {
            const Kernel2D& k = stage.basis.kernels[static_cast<size_t>(b)];
            // correlation with the flipped kernel, i.e. convolution with it
            Kernel1D ky = k.factor_y().flipped();
            Kernel1D kx = k.factor_x().flipped();
            if (k.l2_normalized) {
                double ny = 0.0, nx = 0.0;
                for (double t : ky.taps) ny += t * t;
                for (double t : kx.taps) nx += t * t;
                const double scale = 1.0 / std::sqrt(ny * nx);
                for (double& t : ky.taps) t *= scale;
            }
            correlate2d_separable(grad_zeta.channel(i * B + b), H, W, ky, kx, dst, scratch,
                                  /*accumulate=*/b != 0);
        }
    }
    return out;
}

Tensor recombine_forward(const RecombineStage& stage, std::span<const double> params,
                         const Tensor& zeta) {
    const int cin = stage.in_maps * stage.basis;
    if (zeta.rank() != 3 || zeta.dim(0) != cin)
        throw std::domain_error("recombine_forward: response shape mismatch");
    const int H = zeta.dim(1), W = zeta.dim(2);
    const int hw = H * W;
    Tensor out({stage.out_maps, H, W});
    detail::gemm(false, false, stage.out_maps, hw, cin, 1.0, params.data() + stage.alpha_offset,
                 cin, zeta.data.data(), hw, 0.0, out.data.data(), hw);
    if (stage.has_bias) {
        for (int j = 0; j < stage.out_maps; ++j) {
            const double b = params[stage.bias_offset + static_cast<size_t>(j)];
            for (double& v : out.channel(j)) v += b;
        }
    }
    return out;
}

Tensor recombine_backward(const RecombineStage& stage, std::span<const double> params,
                          const Tensor& zeta, const Tensor& upstream,
                          std::span<double> param_grad) {
    if (zeta.numel() == 0) throw std::logic_error("recombine_backward: no cached responses");
    const int cin = stage.in_maps * stage.basis;
    if (zeta.dim(0) != cin || upstream.dim(0) != stage.out_maps ||
        zeta.dim(1) != upstream.dim(1) || zeta.dim(2) != upstream.dim(2))
        throw std::domain_error("recombine_backward: shape mismatch");
    const int hw = zeta.dim(1) * zeta.dim(2);

    // dE/dalpha[j,i,b] = sum_pixels upstream[j] * zeta[i,b]
    detail::gemm(false, true, stage.out_maps, cin, hw, 1.0, upstream.data.data(), hw,
                 zeta.data.data(), hw, 1.0, param_grad.data() + stage.alpha_offset, cin);
    if (stage.has_bias) {
        for (int j = 0; j < stage.out_maps; ++j) {
            double s = 0.0;
            for (double v : upstream.channel(j)) s += v;
            param_grad[stage.bias_offset + static_cast<size_t>(j)] += s;
        }
    }
    // dE/dzeta[i,b] = sum_j alpha[j,i,b] * upstream[j]
    Tensor grad_zeta({cin, zeta.dim(1), zeta.dim(2)});
    detail::gemm(true, false, cin, hw, stage.out_maps, 1.0, params.data() + stage.alpha_offset,
                 cin, upstream.data.data(), hw, 0.0, grad_zeta.data.data(), hw);
    return grad_zeta;
}

Network::Network(const NetworkConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    build_stages();
    rng_.seed(static_cast<uint32_t>(cfg_.seed ^ (cfg_.seed >> 32)));
    // fan-in scaled uniform init for every recombination stage, biases zero
    for (const RecombineStage& st : recombine_stages_) {
        const double half_width = std::sqrt(3.0 / (static_cast<double>(st.in_maps) * st.basis));
        for (size_t p = 0; p < st.alpha_count(); ++p)
            params_[st.alpha_offset + p] = half_width * (2.0 * next_uniform01(rng_) - 1.0);
    }
}

void Network::build_stages() {
    const auto scales = cfg_.layer_scales();
    int channels = cfg_.input_channels;
    int h = cfg_.input_height, w = cfg_.input_width;
    size_t offset = 0;

    auto add_recombine = [&](int J, int I, int B) {
        RecombineStage st;
        st.out_maps = J;
        st.in_maps = I;
        st.basis = B;
        st.alpha_offset = offset;
        offset += st.alpha_count();
        st.has_bias = cfg_.bias;
        if (st.has_bias) {
            st.bias_offset = offset;
            offset += static_cast<size_t>(J);
        }
        recombine_stages_.push_back(st);
    };

    for (int l = 0; l < cfg_.blocks; ++l) {
        BasisStage stage;
        stage.in_maps = channels;
        BasisSpec spec;
        spec.max_order = cfg_.basis_order;
        spec.scales = scales[static_cast<size_t>(l)];
        spec.truncation_factor = cfg_.truncation;
        spec.normalize = cfg_.normalize_basis;
        if (cfg_.variant == BasisVariant::gaussian) {
            stage.basis = basis_2d(spec);
            if (stage.basis.max_radius() >= std::min(h, w))
                throw ConfigError("arch: basis kernels of block " + std::to_string(l + 1) +
                                  " exceed the " + std::to_string(h) + "x" + std::to_string(w) +
                                  " feature maps");
        } else {
            stage.patch_radius = spec.radius_for(spec.scales.back());
            if (stage.patch_radius >= std::min(h, w))
                throw ConfigError("arch: free-filter support exceeds the feature maps");
        }
        basis_stages_.push_back(std::move(stage));

        add_recombine(cfg_.widths[static_cast<size_t>(l)], channels,
                      basis_stages_.back().basis_size());
        channels = cfg_.widths[static_cast<size_t>(l)];
        if (std::find(cfg_.pool_after.begin(), cfg_.pool_after.end(), l + 1) != cfg_.pool_after.end()) {
            h = (h + 1) / 2;
            w = (w + 1) / 2;
        }
    }
    add_recombine(cfg_.classes, channels, 1);

    params_.assign(offset, 0.0);
    velocity_.assign(offset, 0.0);
    decay_mask_.assign(offset, 1);
    for (const RecombineStage& st : recombine_stages_)
        if (st.has_bias)
            std::fill_n(decay_mask_.begin() + static_cast<long>(st.bias_offset), st.out_maps, 0);
}

Tensor Network::alpha_tensor(int stage) const {
    const RecombineStage& st = recombine_stages_[static_cast<size_t>(stage)];
    Tensor t({st.out_maps, st.in_maps, st.basis});
    std::copy_n(params_.begin() + static_cast<long>(st.alpha_offset), st.alpha_count(),
                t.data.begin());
    return t;
}

std::vector<double> Network::forward(const Tensor& input, Trace* trace) const {
    if (input.rank() != 3 || input.dim(0) != cfg_.input_channels ||
        input.dim(1) != cfg_.input_height || input.dim(2) != cfg_.input_width)
        throw std::domain_error("network forward: input shape mismatch");
    if (trace) {
        trace->blocks.clear();
        trace->blocks.resize(static_cast<size_t>(cfg_.blocks));
    }

    Tensor cur = input;
    for (int l = 0; l < cfg_.blocks; ++l) {
        Tensor zeta = basis_forward(basis_stages_[static_cast<size_t>(l)], cur);
        Tensor pre = recombine_forward(recombine_stages_[static_cast<size_t>(l)], params_, zeta);
        Tensor act = relu(pre);
        const bool pooled = std::find(cfg_.pool_after.begin(), cfg_.pool_after.end(), l + 1) !=
                            cfg_.pool_after.end();
        PoolResult pool;
        Tensor next = pooled ? (pool = maxpool2x2(act), pool.output) : act;
        if (trace) {
            BlockTrace& bt = trace->blocks[static_cast<size_t>(l)];
            bt.input = std::move(cur);
            bt.zeta = std::move(zeta);
            bt.preact = std::move(pre);
            bt.pooled = pooled;
            if (pooled) bt.pool = std::move(pool);
            bt.block_output = next;
        }
        cur = std::move(next);
    }
    Tensor final_pre = recombine_forward(recombine_stages_.back(), params_, cur);
    std::vector<double> logits = global_avg_pool(final_pre);
    if (trace) {
        trace->final_pre = std::move(final_pre);
        trace->logits = logits;
    }
    return logits;
}

void Network::backward(const Trace& trace, std::span<const double> logit_grad,
                       std::span<double> param_grad, Tensor* input_grad) const {
    if (trace.blocks.empty() || trace.final_pre.numel() == 0)
        throw std::logic_error("network backward: forward trace missing");
    if (param_grad.size() != params_.size())
        throw std::domain_error("network backward: gradient buffer size mismatch");

    const Tensor& fp = trace.final_pre;
    Tensor up = global_avg_pool_backward(logit_grad, fp.dim(0), fp.dim(1), fp.dim(2));
    const Tensor& final_in = trace.blocks.back().block_output;
    up = recombine_backward(recombine_stages_.back(), params_, final_in, up, param_grad);

    for (int l = cfg_.blocks - 1; l >= 0; --l) {
        const BlockTrace& bt = trace.blocks[static_cast<size_t>(l)];
        Tensor d_act = bt.pooled ? maxpool2x2_backward(bt.pool, up) : std::move(up);
        Tensor d_pre = relu_backward(d_act, bt.preact);
        Tensor d_zeta = recombine_backward(recombine_stages_[static_cast<size_t>(l)], params_,
                                           bt.zeta, d_pre, param_grad);
        if (l > 0 || input_grad)
            up = basis_backward(basis_stages_[static_cast<size_t>(l)], d_zeta);
    }
    if (input_grad) *input_grad = std::move(up);
}

Tensor Network::forward_batch(const Tensor& batch, int threads) const {
    if (batch.rank() != 4) throw std::domain_error("forward_batch: expected [N,C,H,W]");
    const int N = batch.dim(0);
    Tensor logits({N, cfg_.classes});
    const size_t sample_size =
        static_cast<size_t>(batch.dim(1)) * batch.dim(2) * batch.dim(3);
    detail::parallel_for(N, threads, [&](int n) {
        Tensor x({batch.dim(1), batch.dim(2), batch.dim(3)});
        std::copy_n(batch.data.begin() + static_cast<long>(n * sample_size), sample_size,
                    x.data.begin());
        const std::vector<double> out = forward(x);
        std::copy(out.begin(), out.end(),
                  logits.data.begin() + static_cast<long>(n) * cfg_.classes);
    });
    return logits;
}

uint64_t Network::basis_checksum() const {
    uint64_t hash = 1469598103934665603ull;  // FNV-1a
    auto mix = [&hash](const void* p, size_t n) {
        const unsigned char* bytes = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            hash ^= bytes[i];
            hash *= 1099511628211ull;
        }
    };
    for (const BasisStage& st : basis_stages_) {
        mix(&st.patch_radius, sizeof st.patch_radius);
        for (const Kernel2D& k : st.basis.kernels)
            mix(k.taps.data(), k.taps.size() * sizeof(double));
    }
    return hash;
}

Kernel2D Network::effective_filter(int block, int out_map, int in_map) const {
    const BasisStage& bs = basis_stages_[static_cast<size_t>(block)];
    const RecombineStage& rs = recombine_stages_[static_cast<size_t>(block)];
    if (out_map < 0 || out_map >= rs.out_maps || in_map < 0 || in_map >= rs.in_maps)
        throw std::domain_error("effective_filter: map index out of range");
    const double* alpha =
        params_.data() + rs.alpha_offset +
        (static_cast<size_t>(out_map) * rs.in_maps + static_cast<size_t>(in_map)) * rs.basis;

    Kernel2D out;
    if (bs.patch_radius >= 0) {
        out.radius = bs.patch_radius;
        out.sigma = 0.0;
        out.taps.assign(static_cast<size_t>(out.side()) * out.side(), 0.0);
        for (int b = 0; b < rs.basis; ++b) out.taps[static_cast<size_t>(b)] = alpha[b];
        return out;
    }
    out.radius = bs.basis.max_radius();
    out.sigma = bs.basis.kernels.front().sigma;
    out.taps.assign(static_cast<size_t>(out.side()) * out.side(), 0.0);
    for (int b = 0; b < rs.basis; ++b) {
        const Kernel2D& k = bs.basis.kernels[static_cast<size_t>(b)];
        if (alpha[b] == 0.0) continue;
        for (int dy = -k.radius; dy <= k.radius; ++dy)
            for (int dx = -k.radius; dx <= k.radius; ++dx)
                out.tap(dy, dx) += alpha[b] * k.tap(dy, dx);
    }
    return out;
}

namespace {

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

uint64_t read_u64(std::istream& is, const char* what) {
    uint64_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 8))
        throw DataError(std::string("checkpoint truncated while reading ") + what);
    return v;
}

}  // namespace

void Network::save_checkpoint(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open checkpoint for writing: " + path);
    os.write(kCheckpointMagic, 4);
    write_u32(os, kCheckpointVersion);
    const std::string cfg_text = cfg_.serialize();
    write_u64(os, cfg_text.size());
    os.write(cfg_text.data(), static_cast<long>(cfg_text.size()));
    write_u64(os, params_.size());
    os.write(reinterpret_cast<const char*>(params_.data()),
             static_cast<long>(params_.size() * sizeof(double)));
    write_u64(os, velocity_.size());
    os.write(reinterpret_cast<const char*>(velocity_.data()),
             static_cast<long>(velocity_.size() * sizeof(double)));
    write_u64(os, static_cast<uint64_t>(epoch_));
    std::ostringstream rng_text;
    rng_text << rng_;
    const std::string rng_str = rng_text.str();
    write_u64(os, rng_str.size());
    os.write(rng_str.data(), static_cast<long>(rng_str.size()));
    if (!os) throw DataError("checkpoint write failed: " + path);
}

Network Network::load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open checkpoint: " + path);
    char magic[4] = {};
    if (!is.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0)
        throw DataError("checkpoint magic mismatch: not an RFNN checkpoint");
    uint32_t version = 0;
    if (!is.read(reinterpret_cast<char*>(&version), 4))
        throw DataError("checkpoint truncated while reading version");
    if (version != kCheckpointVersion)
        throw DataError("unsupported checkpoint version " + std::to_string(version) +
                        " (expected " + std::to_string(kCheckpointVersion) + ")");

    const uint64_t cfg_len = read_u64(is, "config length");
    std::string cfg_text(cfg_len, '\0');
    if (!is.read(cfg_text.data(), static_cast<long>(cfg_len)))
        throw DataError("checkpoint truncated: expected " + std::to_string(cfg_len) +
                        " config bytes, got " + std::to_string(is.gcount()));

    Network net;
    net.cfg_ = NetworkConfig::deserialize(cfg_text);
    net.build_stages();

    const uint64_t n_params = read_u64(is, "parameter count");
    if (n_params != net.params_.size())
        throw DataError("checkpoint parameter count " + std::to_string(n_params) +
                        " does not match architecture (" + std::to_string(net.params_.size()) + ")");
    if (!is.read(reinterpret_cast<char*>(net.params_.data()),
                 static_cast<long>(n_params * sizeof(double))))
        throw DataError("checkpoint truncated: expected " + std::to_string(n_params * 8) +
                        " parameter bytes, got " + std::to_string(is.gcount()));
    const uint64_t n_vel = read_u64(is, "velocity count");
    if (n_vel != net.velocity_.size())
        throw DataError("checkpoint velocity count does not match architecture");
    if (!is.read(reinterpret_cast<char*>(net.velocity_.data()),
                 static_cast<long>(n_vel * sizeof(double))))
        throw DataError("checkpoint truncated: expected " + std::to_string(n_vel * 8) +
                        " velocity bytes, got " + std::to_string(is.gcount()));
    net.epoch_ = static_cast<int64_t>(read_u64(is, "epoch counter"));
    const uint64_t rng_len = read_u64(is, "rng state length");
    std::string rng_str(rng_len, '\0');
    if (!is.read(rng_str.data(), static_cast<long>(rng_len)))
        throw DataError("checkpoint truncated while reading rng state");
    std::istringstream rng_in(rng_str);
    rng_in >> net.rng_;
    if (!rng_in) throw DataError("checkpoint rng state malformed");
    return net;
}

}  // namespace rfnet
