#pragma once

#include <array>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "vitalbeam/core.hpp"
#include "vitalbeam/radar_config.hpp"

namespace vitalbeam {

// Raw complex baseband samples, indexed (frame, chirp, virtual channel, ADC
// sample), stored contiguously in that order.
class DataCube {
public:
    DataCube() = default;
    DataCube(std::size_t n_frames, std::size_t n_chirps, std::size_t n_channels, std::size_t n_samples)
        : dims_{n_frames, n_chirps, n_channels, n_samples},
          data_(n_frames * n_chirps * n_channels * n_samples, cfloat{0.0f, 0.0f}) {}

    static DataCube for_config(const RadarConfig& cfg, std::size_t n_frames) {
        DataCube cube(n_frames, cfg.chirps_per_frame, cfg.n_channels(), cfg.adc_samples_per_chirp);
        cube.set_config_echo(cfg);
        return cube;
    }

    std::size_t n_frames() const { return dims_[0]; }
    std::size_t n_chirps() const { return dims_[1]; }
    std::size_t n_channels() const { return dims_[2]; }
    std::size_t n_samples() const { return dims_[3]; }
    std::size_t size() const { return data_.size(); }

    cfloat& at(std::size_t f, std::size_t c, std::size_t ch, std::size_t s) {
        return data_[((f * dims_[1] + c) * dims_[2] + ch) * dims_[3] + s];
    }
    const cfloat& at(std::size_t f, std::size_t c, std::size_t ch, std::size_t s) const {
        return data_[((f * dims_[1] + c) * dims_[2] + ch) * dims_[3] + s];
    }

    cfloat* frame_data(std::size_t f) { return data_.data() + f * dims_[1] * dims_[2] * dims_[3]; }
    const cfloat* frame_data(std::size_t f) const {
        return data_.data() + f * dims_[1] * dims_[2] * dims_[3];
    }
    // One chirp of one channel, n_samples() long.
    const cfloat* chirp_data(std::size_t f, std::size_t c, std::size_t ch) const {
        return data_.data() + ((f * dims_[1] + c) * dims_[2] + ch) * dims_[3];
    }

    std::vector<cfloat>& raw() { return data_; }
    const std::vector<cfloat>& raw() const { return data_; }

    bool all_finite() const {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    void set_config_echo(const RadarConfig& cfg) {
        echo_ = {cfg.carrier_frequency,
                 cfg.chirp_slope,
                 cfg.idle_time,
                 cfg.adc_start_time,
                 cfg.ramp_end_time,
                 cfg.adc_sample_rate,
                 static_cast<double>(cfg.adc_samples_per_chirp),
                 static_cast<double>(cfg.chirps_per_frame),
                 cfg.frame_duration,
                 static_cast<double>(cfg.n_tx),
                 static_cast<double>(cfg.n_rx)};
    }
    const std::array<double, 11>& config_echo() const { return echo_; }

    std::uint64_t config_hash = 0;

    void save(const std::string& path) const;
    static DataCube load(const std::string& path);

private:
    std::array<std::size_t, 4> dims_{0, 0, 0, 0};
    std::vector<cfloat> data_;
    std::array<double, 11> echo_{};
};

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

}  // namespace detail

// Little-endian binary layout: "VBC1", u32 dims x4, u32 echo count, f64 echo
// fields, u64 config hash, then interleaved float32 (re, im) samples.
inline void DataCube::save(const std::string& path) const {
    std::unique_ptr<std::FILE, detail::FileCloser> f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    std::fwrite("VBC1", 1, 4, f.get());
    for (std::size_t d : dims_) {
        const std::uint32_t v = static_cast<std::uint32_t>(d);
        std::fwrite(&v, sizeof(v), 1, f.get());
    }
    const std::uint32_t n_echo = static_cast<std::uint32_t>(echo_.size());
    std::fwrite(&n_echo, sizeof(n_echo), 1, f.get());
    std::fwrite(echo_.data(), sizeof(double), echo_.size(), f.get());
    std::fwrite(&config_hash, sizeof(config_hash), 1, f.get());
    if (!data_.empty() &&
        std::fwrite(data_.data(), sizeof(cfloat), data_.size(), f.get()) != data_.size())
        throw std::runtime_error("short write: " + path);
}

inline DataCube DataCube::load(const std::string& path) {
    std::unique_ptr<std::FILE, detail::FileCloser> f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    char magic[4];
    if (std::fread(magic, 1, 4, f.get()) != 4 || std::memcmp(magic, "VBC1", 4) != 0)
        throw std::runtime_error("not a VBC1 data cube: " + path);
    std::uint32_t dims[4];
    if (std::fread(dims, sizeof(std::uint32_t), 4, f.get()) != 4)
        throw std::runtime_error("truncated VBC1 header: " + path);
    DataCube cube(dims[0], dims[1], dims[2], dims[3]);
    std::uint32_t n_echo = 0;
    if (std::fread(&n_echo, sizeof(n_echo), 1, f.get()) != 1 || n_echo != cube.echo_.size())
        throw std::runtime_error("unexpected VBC1 echo block: " + path);
    if (std::fread(cube.echo_.data(), sizeof(double), n_echo, f.get()) != n_echo)
        throw std::runtime_error("truncated VBC1 echo block: " + path);
    if (std::fread(&cube.config_hash, sizeof(cube.config_hash), 1, f.get()) != 1)
        throw std::runtime_error("truncated VBC1 header: " + path);
    if (!cube.data_.empty() &&
        std::fread(cube.data_.data(), sizeof(cfloat), cube.data_.size(), f.get()) != cube.data_.size())
        throw std::runtime_error("truncated VBC1 payload: " + path);
    return cube;
}

}  // namespace vitalbeam
