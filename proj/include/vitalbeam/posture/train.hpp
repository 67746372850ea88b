#pragma once

#include <cstdio>
#include <cstring>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "vitalbeam/parallel.hpp"
#include "vitalbeam/posture/cnn.hpp"

namespace vitalbeam::posture {

struct TrainConfig {
    double learning_rate = 0.001;
    std::size_t batch_size = 100;
    std::size_t epochs = 200;
    std::uint64_t seed = 0;
    double dropout_rate = 0.2;
    bool center_outputs = true;  // regress residuals around the label mean
    unsigned threads = 0;

    void validate() const {
        if (learning_rate < 0.0) throw ConfigError("train config: negative learning rate");
        if (batch_size < 1) throw ConfigError("train config: batch_size must be >= 1");
    }
};

struct TrainSample {
    std::vector<float> input;  // in_channels * hw * hw, matching the net config
    Keypoints truth;

    TrainSample() = default;
    TrainSample(const InputTensor& t, const Keypoints& kp)
        : input(t.data.begin(), t.data.end()), truth(kp) {}
};

struct TrainResult {
    NetParams<float> params;
    std::vector<double> loss_history;  // mean sample loss per epoch
};

// Plain mini-batch gradient descent on the keypoint loss. Batch members are
// evaluated in parallel in fixed blocks and reduced in block order, so results
// are bit-identical for a given seed regardless of thread count.
inline TrainResult train(const std::vector<TrainSample>& dataset, const TrainConfig& cfg,
                         NetConfig net_cfg = {}) {
    cfg.validate();
    if (dataset.empty()) throw std::invalid_argument("train: dataset must not be empty");
    net_cfg.dropout_rate = cfg.dropout_rate;

    NetParams<float> params = NetParams<float>::he_init(net_cfg, cfg.seed);
    if (cfg.center_outputs) {
        std::vector<double> mean(net_cfg.outputs, 0.0);
        for (const auto& s : dataset)
            for (std::size_t i = 0; i < kNumKeypoints; ++i) {
                mean[3 * i + 0] += s.truth[i].x;
                mean[3 * i + 1] += s.truth[i].y;
                mean[3 * i + 2] += s.truth[i].z;
            }
        for (std::size_t j = 0; j < net_cfg.outputs; ++j)
            params.output_offset[j] = static_cast<float>(mean[j] / static_cast<double>(dataset.size()));
    }

    constexpr std::size_t kBlock = 25;  // reduction granularity
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(cfg.seed, 0x5A0FULL));

    std::vector<double> history;
    history.reserve(cfg.epochs);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.next_below(i)]);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, order.size() - start);
            const std::size_t n_blocks = (count + kBlock - 1) / kBlock;

            std::vector<NetParams<float>> block_grads(n_blocks);
            std::vector<double> block_loss(n_blocks, 0.0);
            parallel_for(n_blocks, [&](std::size_t blk) {
                NetParams<float> grad = NetParams<float>::zeros(net_cfg);
                ForwardCache<float> cache;
                double loss = 0.0;
                const std::size_t lo = blk * kBlock;
                const std::size_t hi = std::min(count, lo + kBlock);
                for (std::size_t i = lo; i < hi; ++i) {
                    const TrainSample& s = dataset[order[start + i]];
                    const std::uint64_t drop_seed =
                        derive_seed(cfg.seed, (epoch << 20) ^ (start + i), 0xD80BULL);
                    cnn_forward(params, std::span<const float>(s.input), true, drop_seed, &cache);
                    loss += cnn_loss(cache.out, s.truth).loss;
                    NetParams<float> g = cnn_backward(params, cache, s.truth);
                    grad.accumulate(g, 1.0f);
                }
                block_grads[blk] = std::move(grad);
                block_loss[blk] = loss;
            }, cfg.threads);

            NetParams<float>& total = block_grads[0];
            for (std::size_t b = 1; b < n_blocks; ++b) total.accumulate(block_grads[b], 1.0f);
            double batch_loss = 0.0;
            for (double l : block_loss) batch_loss += l;
            epoch_loss += batch_loss;

            const float step = static_cast<float>(-cfg.learning_rate / static_cast<double>(count));
            params.accumulate(total, step);
        }
        epoch_loss /= static_cast<double>(order.size());
        history.push_back(epoch_loss);
        if (!std::isfinite(epoch_loss))
            throw TrainingError("train: loss diverged at epoch " + std::to_string(epoch), history);
    }
    return {std::move(params), std::move(history)};
}

inline std::vector<float> predict(const NetParams<float>& params, const InputTensor& input) {
    return cnn_forward(params, std::span<const float>(input.data), false, 0);
}

// --- VBNN parameter file: magic, u64 config hash, shape table, float32 data.

namespace detail {

struct NnFileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

}  // namespace detail

inline void save_network(const std::string& path, const NetParams<float>& params,
                         std::uint64_t config_hash) {
    std::unique_ptr<std::FILE, detail::NnFileCloser> f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    std::fwrite("VBNN", 1, 4, f.get());
    const std::uint32_t version = 1;
    std::fwrite(&version, sizeof version, 1, f.get());
    std::fwrite(&config_hash, sizeof config_hash, 1, f.get());

    const NetConfig& cfg = params.cfg;
    const std::uint32_t meta[8] = {static_cast<std::uint32_t>(cfg.input_hw),
                                   static_cast<std::uint32_t>(cfg.in_channels),
                                   static_cast<std::uint32_t>(cfg.conv_depths[0]),
                                   static_cast<std::uint32_t>(cfg.conv_depths[1]),
                                   static_cast<std::uint32_t>(cfg.conv_depths[2]),
                                   static_cast<std::uint32_t>(cfg.fc_hidden),
                                   static_cast<std::uint32_t>(cfg.outputs),
                                   static_cast<std::uint32_t>(cfg.dropout_rate * 1e6)};
    std::fwrite(meta, sizeof(std::uint32_t), 8, f.get());

    auto write_tensor = [&](const std::vector<float>& t) {
        const std::uint32_t n = static_cast<std::uint32_t>(t.size());
        std::fwrite(&n, sizeof n, 1, f.get());
        std::fwrite(t.data(), sizeof(float), t.size(), f.get());
    };
    for (std::size_t l = 0; l < 3; ++l) {
        write_tensor(params.conv_w[l]);
        write_tensor(params.conv_b[l]);
    }
    write_tensor(params.fc1_w);
    write_tensor(params.fc1_b);
    write_tensor(params.fc2_w);
    write_tensor(params.fc2_b);
    write_tensor(params.output_offset);
}

inline NetParams<float> load_network(const std::string& path, std::uint64_t* config_hash = nullptr) {
    std::unique_ptr<std::FILE, detail::NnFileCloser> f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    char magic[4];
    if (std::fread(magic, 1, 4, f.get()) != 4 || std::memcmp(magic, "VBNN", 4) != 0)
        throw std::runtime_error("not a VBNN network file: " + path);
    std::uint32_t version = 0;
    std::uint64_t hash = 0;
    if (std::fread(&version, sizeof version, 1, f.get()) != 1 || version != 1)
        throw std::runtime_error("unsupported VBNN version: " + path);
    if (std::fread(&hash, sizeof hash, 1, f.get()) != 1)
        throw std::runtime_error("truncated VBNN header: " + path);
    if (config_hash) *config_hash = hash;

    std::uint32_t meta[8];
    if (std::fread(meta, sizeof(std::uint32_t), 8, f.get()) != 8)
        throw std::runtime_error("truncated VBNN header: " + path);
    NetConfig cfg;
    cfg.input_hw = meta[0];
    cfg.in_channels = meta[1];
    cfg.conv_depths = {meta[2], meta[3], meta[4]};
    cfg.fc_hidden = meta[5];
    cfg.outputs = meta[6];
    cfg.dropout_rate = static_cast<double>(meta[7]) / 1e6;

    NetParams<float> params = NetParams<float>::zeros(cfg);
    auto read_tensor = [&](std::vector<float>& t) {
        std::uint32_t n = 0;
        if (std::fread(&n, sizeof n, 1, f.get()) != 1 || n != t.size())
            throw std::runtime_error("VBNN shape table does not chain with the config: " + path);
        if (std::fread(t.data(), sizeof(float), t.size(), f.get()) != t.size())
            throw std::runtime_error("truncated VBNN payload: " + path);
    };
    for (std::size_t l = 0; l < 3; ++l) {
        read_tensor(params.conv_w[l]);
        read_tensor(params.conv_b[l]);
    }
    read_tensor(params.fc1_w);
    read_tensor(params.fc1_b);
    read_tensor(params.fc2_w);
    read_tensor(params.fc2_b);
    read_tensor(params.output_offset);
    return params;
}

}  // namespace vitalbeam::posture
