#pragma once

#include <array>
#include <span>
#include <vector>

#include "vitalbeam/keypoints.hpp"
#include "vitalbeam/posture/projection.hpp"
#include "vitalbeam/rng.hpp"

namespace vitalbeam::posture {

// Three 3x3 same-padded conv+ReLU+2x2-maxpool stages, flatten, dropout,
// FC hidden + ReLU, dropout, linear output head.
struct NetConfig {
    std::size_t input_hw = kGrid;       // square input, must be divisible by 8
    std::size_t in_channels = 2;
    std::array<std::size_t, 3> conv_depths{32, 64, 128};
    std::size_t fc_hidden = 128;
    std::size_t outputs = 3 * kNumKeypoints;
    double dropout_rate = 0.2;

    void validate() const {
        if (input_hw % 8 != 0 || input_hw == 0)
            throw ConfigError("net config: input size must be a positive multiple of 8");
        if (in_channels == 0 || fc_hidden == 0 || outputs == 0)
            throw ConfigError("net config: zero-sized layer");
        for (std::size_t d : conv_depths)
            if (d == 0) throw ConfigError("net config: zero conv depth");
        if (dropout_rate < 0.0 || dropout_rate >= 1.0)
            throw ConfigError("net config: dropout rate must be in [0, 1)");
    }

    std::size_t conv_in_channels(std::size_t layer) const {
        return layer == 0 ? in_channels : conv_depths[layer - 1];
    }
    std::size_t conv_hw(std::size_t layer) const { return input_hw >> layer; }
    std::size_t flat_size() const { return conv_depths[2] * (input_hw / 8) * (input_hw / 8); }
};

template <typename T>
struct NetParams {
    NetConfig cfg;
    std::array<std::vector<T>, 3> conv_w;  // [out][in][3][3] row-major
    std::array<std::vector<T>, 3> conv_b;
    std::vector<T> fc1_w;  // [hidden][flat]
    std::vector<T> fc1_b;
    std::vector<T> fc2_w;  // [outputs][hidden]
    std::vector<T> fc2_b;
    std::vector<T> output_offset;  // added to the linear head (label centering)

    static NetParams zeros(const NetConfig& cfg) {
        cfg.validate();
        NetParams p;
        p.cfg = cfg;
        for (std::size_t l = 0; l < 3; ++l) {
            p.conv_w[l].assign(cfg.conv_depths[l] * cfg.conv_in_channels(l) * 9, T(0));
            p.conv_b[l].assign(cfg.conv_depths[l], T(0));
        }
        p.fc1_w.assign(cfg.fc_hidden * cfg.flat_size(), T(0));
        p.fc1_b.assign(cfg.fc_hidden, T(0));
        p.fc2_w.assign(cfg.outputs * cfg.fc_hidden, T(0));
        p.fc2_b.assign(cfg.outputs, T(0));
        p.output_offset.assign(cfg.outputs, T(0));
        return p;
    }

    // He-uniform weights, zero biases.
    static NetParams he_init(const NetConfig& cfg, std::uint64_t seed) {
        NetParams p = zeros(cfg);
        Rng rng(derive_seed(seed, 0x1217ULL));
        auto fill = [&rng](std::vector<T>& w, std::size_t fan_in) {
            const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
            for (auto& v : w) v = static_cast<T>(rng.uniform(-limit, limit));
        };
        for (std::size_t l = 0; l < 3; ++l) fill(p.conv_w[l], cfg.conv_in_channels(l) * 9);
        fill(p.fc1_w, cfg.flat_size());
        fill(p.fc2_w, cfg.fc_hidden);
        return p;
    }

    template <typename F>
    void for_each_tensor(F&& f) {
        for (std::size_t l = 0; l < 3; ++l) {
            f(conv_w[l]);
            f(conv_b[l]);
        }
        f(fc1_w);
        f(fc1_b);
        f(fc2_w);
        f(fc2_b);
    }

    void accumulate(const NetParams& other, T scale) {
        auto* o = &other;
        std::size_t idx = 0;
        std::vector<T>* mine[10] = {&conv_w[0], &conv_b[0], &conv_w[1], &conv_b[1], &conv_w[2],
                                    &conv_b[2], &fc1_w,     &fc1_b,     &fc2_w,     &fc2_b};
        const std::vector<T>* theirs[10] = {&o->conv_w[0], &o->conv_b[0], &o->conv_w[1],
                                            &o->conv_b[1], &o->conv_w[2], &o->conv_b[2],
                                            &o->fc1_w,     &o->fc1_b,     &o->fc2_w,     &o->fc2_b};
        for (; idx < 10; ++idx) {
            auto& m = *mine[idx];
            const auto& t = *theirs[idx];
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += scale * t[i];
        }
    }
};

template <typename T>
struct ForwardCache {
    std::vector<T> input;
    std::array<std::vector<T>, 3> col;     // im2col of each conv input
    std::array<std::vector<T>, 3> pre;     // conv outputs before ReLU
    std::array<std::vector<T>, 3> pooled;  // after ReLU + 2x2 max pool
    std::array<std::vector<int>, 3> argmax;
    std::vector<T> flat_dropped, fc1_pre, fc1_dropped, out;
    std::vector<std::uint8_t> mask1, mask2;
    bool train_mode = false;
};

namespace cnn_detail {

template <typename T>
void im2col_3x3(const T* in, std::size_t channels, std::size_t hw, std::vector<T>& col) {
    const long h = static_cast<long>(hw), w = static_cast<long>(hw);
    col.assign(channels * 9 * hw * hw, T(0));
    for (std::size_t c = 0; c < channels; ++c)
        for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
                T* dst = col.data() + ((c * 3 + ky) * 3 + kx) * hw * hw;
                const T* src = in + c * hw * hw;
                for (long y = 0; y < h; ++y) {
                    const long sy = y + ky - 1;
                    if (sy < 0 || sy >= h) continue;
                    const long x0 = std::max(0L, 1L - kx);
                    const long x1 = std::min(static_cast<long>(w), w + 1 - kx);
                    for (long x = x0; x < x1; ++x) dst[y * w + x] = src[sy * w + (x + kx - 1)];
                }
            }
}

template <typename T>
void col2im_3x3(const T* col, std::size_t channels, std::size_t hw, T* din) {
    const long h = static_cast<long>(hw), w = static_cast<long>(hw);
    std::fill(din, din + channels * hw * hw, T(0));
    for (std::size_t c = 0; c < channels; ++c)
        for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
                const T* src = col + ((c * 3 + ky) * 3 + kx) * hw * hw;
                T* dst = din + c * hw * hw;
                for (long y = 0; y < h; ++y) {
                    const long sy = y + ky - 1;
                    if (sy < 0 || sy >= h) continue;
                    const long x0 = std::max(0L, 1L - kx);
                    const long x1 = std::min(static_cast<long>(w), w + 1 - kx);
                    for (long x = x0; x < x1; ++x) dst[sy * w + (x + kx - 1)] += src[y * w + x];
                }
            }
}

// out[co][pos] = b[co] + sum_k w[co][k] * col[k][pos]
template <typename T>
void conv_gemm(const std::vector<T>& w, const std::vector<T>& b, const std::vector<T>& col,
               std::size_t k_count, std::size_t positions, std::vector<T>& out) {
    const std::size_t co_count = b.size();
    out.assign(co_count * positions, T(0));
    for (std::size_t co = 0; co < co_count; ++co) {
        T* dst = out.data() + co * positions;
        for (std::size_t p = 0; p < positions; ++p) dst[p] = b[co];
        const T* wrow = w.data() + co * k_count;
        for (std::size_t k = 0; k < k_count; ++k) {
            const T wk = wrow[k];
            const T* src = col.data() + k * positions;
            for (std::size_t p = 0; p < positions; ++p) dst[p] += wk * src[p];
        }
    }
}

template <typename T>
void relu_maxpool(const std::vector<T>& pre, std::size_t channels, std::size_t hw,
                  std::vector<T>& pooled, std::vector<int>& argmax) {
    const std::size_t oh = hw / 2;
    pooled.assign(channels * oh * oh, T(0));
    argmax.assign(channels * oh * oh, 0);
    for (std::size_t c = 0; c < channels; ++c) {
        const T* src = pre.data() + c * hw * hw;
        for (std::size_t y = 0; y < oh; ++y)
            for (std::size_t x = 0; x < oh; ++x) {
                int best_idx = static_cast<int>((2 * y) * hw + 2 * x);
                T best = src[best_idx];
                const int cand[3] = {static_cast<int>((2 * y) * hw + 2 * x + 1),
                                     static_cast<int>((2 * y + 1) * hw + 2 * x),
                                     static_cast<int>((2 * y + 1) * hw + 2 * x + 1)};
                for (int idx : cand)
                    if (src[idx] > best) {
                        best = src[idx];
                        best_idx = idx;
                    }
                const std::size_t o = c * oh * oh + y * oh + x;
                pooled[o] = best > T(0) ? best : T(0);  // ReLU folded into the pool
                argmax[o] = best_idx;
            }
    }
}

template <typename T>
void dropout(std::vector<T>& v, double rate, Rng& rng, std::vector<std::uint8_t>& mask,
             bool train_mode) {
    mask.assign(v.size(), 1);
    if (!train_mode || rate <= 0.0) return;
    const T scale = static_cast<T>(1.0 / (1.0 - rate));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (rng.next_double() < rate) {
            mask[i] = 0;
            v[i] = T(0);
        } else {
            v[i] *= scale;
        }
    }
}

}  // namespace cnn_detail

// Forward pass; the cache keeps everything backpropagation needs. Dropout is
// active only in train mode and fully determined by `seed`.
template <typename T>
std::vector<T> cnn_forward(const NetParams<T>& params, std::span<const float> input,
                           bool train_mode, std::uint64_t seed, ForwardCache<T>* cache = nullptr) {
    const NetConfig& cfg = params.cfg;
    cfg.validate();
    if (input.size() != cfg.in_channels * cfg.input_hw * cfg.input_hw)
        throw ConfigError("cnn_forward: input tensor does not match the net config");
    ForwardCache<T> local;
    ForwardCache<T>& c = cache ? *cache : local;
    c.train_mode = train_mode;
    c.input.assign(input.begin(), input.end());

    Rng rng(derive_seed(seed, 0xD0ULL));
    std::vector<T> act = c.input;
    for (std::size_t l = 0; l < 3; ++l) {
        const std::size_t hw = cfg.conv_hw(l);
        const std::size_t cin = cfg.conv_in_channels(l);
        cnn_detail::im2col_3x3(act.data(), cin, hw, c.col[l]);
        cnn_detail::conv_gemm(params.conv_w[l], params.conv_b[l], c.col[l], cin * 9, hw * hw,
                              c.pre[l]);
        cnn_detail::relu_maxpool(c.pre[l], cfg.conv_depths[l], hw, c.pooled[l], c.argmax[l]);
        act = c.pooled[l];
    }

    c.flat_dropped = act;
    cnn_detail::dropout(c.flat_dropped, cfg.dropout_rate, rng, c.mask1, train_mode);

    c.fc1_pre.assign(cfg.fc_hidden, T(0));
    for (std::size_t j = 0; j < cfg.fc_hidden; ++j) {
        T acc = params.fc1_b[j];
        const T* row = params.fc1_w.data() + j * cfg.flat_size();
        for (std::size_t i = 0; i < cfg.flat_size(); ++i) acc += row[i] * c.flat_dropped[i];
        c.fc1_pre[j] = acc;
    }
    c.fc1_dropped.resize(cfg.fc_hidden);
    for (std::size_t j = 0; j < cfg.fc_hidden; ++j)
        c.fc1_dropped[j] = c.fc1_pre[j] > T(0) ? c.fc1_pre[j] : T(0);
    cnn_detail::dropout(c.fc1_dropped, cfg.dropout_rate, rng, c.mask2, train_mode);

    c.out.assign(cfg.outputs, T(0));
    for (std::size_t j = 0; j < cfg.outputs; ++j) {
        T acc = params.fc2_b[j] + params.output_offset[j];
        const T* row = params.fc2_w.data() + j * cfg.fc_hidden;
        for (std::size_t i = 0; i < cfg.fc_hidden; ++i) acc += row[i] * c.fc1_dropped[i];
        c.out[j] = acc;
    }
    return c.out;
}

// Mean over keypoints of half the squared l2 distance, plus per-point errors.
struct LossResult {
    double loss = 0.0;
    std::array<double, kNumKeypoints> per_point{};
};

template <typename T>
LossResult cnn_loss(const std::vector<T>& pred, const Keypoints& truth) {
    if (pred.size() != 3 * kNumKeypoints)
        throw std::invalid_argument("cnn_loss: prediction must have 51 values");
    LossResult r;
    for (std::size_t i = 0; i < kNumKeypoints; ++i) {
        const double dx = static_cast<double>(pred[3 * i + 0]) - truth[i].x;
        const double dy = static_cast<double>(pred[3 * i + 1]) - truth[i].y;
        const double dz = static_cast<double>(pred[3 * i + 2]) - truth[i].z;
        r.per_point[i] = 0.5 * (dx * dx + dy * dy + dz * dz);
        r.loss += r.per_point[i];
    }
    r.loss /= static_cast<double>(kNumKeypoints);
    return r;
}

// Exact backpropagation of the keypoint loss through the cached forward pass.
// Returns gradients in a params-shaped container (output_offset is a frozen
// centering constant and gets no gradient).
template <typename T>
NetParams<T> cnn_backward(const NetParams<T>& params, const ForwardCache<T>& c,
                          const Keypoints& truth) {
    const NetConfig& cfg = params.cfg;
    NetParams<T> g = NetParams<T>::zeros(cfg);

    std::vector<T> dout(cfg.outputs);
    for (std::size_t i = 0; i < kNumKeypoints; ++i) {
        dout[3 * i + 0] = (c.out[3 * i + 0] - static_cast<T>(truth[i].x)) / T(kNumKeypoints);
        dout[3 * i + 1] = (c.out[3 * i + 1] - static_cast<T>(truth[i].y)) / T(kNumKeypoints);
        dout[3 * i + 2] = (c.out[3 * i + 2] - static_cast<T>(truth[i].z)) / T(kNumKeypoints);
    }

    // output head
    std::vector<T> dfc1_dropped(cfg.fc_hidden, T(0));
    for (std::size_t j = 0; j < cfg.outputs; ++j) {
        g.fc2_b[j] = dout[j];
        T* grow = g.fc2_w.data() + j * cfg.fc_hidden;
        const T* wrow = params.fc2_w.data() + j * cfg.fc_hidden;
        for (std::size_t i = 0; i < cfg.fc_hidden; ++i) {
            grow[i] = dout[j] * c.fc1_dropped[i];
            dfc1_dropped[i] += wrow[i] * dout[j];
        }
    }

    const T drop_scale =
        (c.train_mode && cfg.dropout_rate > 0.0) ? static_cast<T>(1.0 / (1.0 - cfg.dropout_rate))
                                                 : T(1);
    std::vector<T> dfc1_pre(cfg.fc_hidden);
    for (std::size_t j = 0; j < cfg.fc_hidden; ++j) {
        const T through = c.mask2[j] ? dfc1_dropped[j] * drop_scale : T(0);
        dfc1_pre[j] = c.fc1_pre[j] > T(0) ? through : T(0);
    }

    std::vector<T> dflat_dropped(cfg.flat_size(), T(0));
    for (std::size_t j = 0; j < cfg.fc_hidden; ++j) {
        g.fc1_b[j] = dfc1_pre[j];
        T* grow = g.fc1_w.data() + j * cfg.flat_size();
        const T* wrow = params.fc1_w.data() + j * cfg.flat_size();
        const T dj = dfc1_pre[j];
        for (std::size_t i = 0; i < cfg.flat_size(); ++i) {
            grow[i] = dj * c.flat_dropped[i];
            dflat_dropped[i] += wrow[i] * dj;
        }
    }

    std::vector<T> dact(cfg.flat_size());
    for (std::size_t i = 0; i < cfg.flat_size(); ++i)
        dact[i] = c.mask1[i] ? dflat_dropped[i] * drop_scale : T(0);

    // conv stack, top down
    for (int l = 2; l >= 0; --l) {
        const std::size_t hw = cfg.conv_hw(l);
        const std::size_t cin = cfg.conv_in_channels(l);
        const std::size_t positions = hw * hw;
        const std::size_t depth = cfg.conv_depths[l];

        // pool backward: route pooled gradients to the argmax cells where the
        // pre-activation was positive (ReLU folded into the pool)
        std::vector<T> dpre(depth * positions, T(0));
        const std::size_t oh = hw / 2;
        for (std::size_t ch = 0; ch < depth; ++ch)
            for (std::size_t o = 0; o < oh * oh; ++o) {
                const std::size_t oidx = ch * oh * oh + o;
                const int src_idx = c.argmax[l][oidx];
                if (c.pre[l][ch * positions + src_idx] > T(0))
                    dpre[ch * positions + src_idx] = dact[oidx];
            }

        std::vector<T> dcol(cin * 9 * positions, T(0));
        for (std::size_t co = 0; co < depth; ++co) {
            const T* dy = dpre.data() + co * positions;
            T acc_b = T(0);
            for (std::size_t p = 0; p < positions; ++p) acc_b += dy[p];
            g.conv_b[l][co] = acc_b;
            T* gw = g.conv_w[l].data() + co * cin * 9;
            const T* w = params.conv_w[l].data() + co * cin * 9;
            for (std::size_t k = 0; k < cin * 9; ++k) {
                const T* src = c.col[l].data() + k * positions;
                T acc = T(0);
                T* dc = dcol.data() + k * positions;
                const T wk = w[k];
                for (std::size_t p = 0; p < positions; ++p) {
                    acc += dy[p] * src[p];
                    dc[p] += wk * dy[p];
                }
                gw[k] = acc;
            }
        }
        if (l > 0) {
            dact.assign(cin * positions, T(0));
            cnn_detail::col2im_3x3(dcol.data(), cin, hw, dact.data());
        }
    }
    return g;
}

}  // namespace vitalbeam::posture
