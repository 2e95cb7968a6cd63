#pragma once

// Counter-based random numbers: Philox4x32-10 keyed by the 64-bit master
// seed, with a 128-bit counter split into a 64-bit stream id and a 64-bit
// block index. Distinct streams are independent by construction, so trials,
// slots, and users can be partitioned across workers with no shared state
// and bit-identical results for any worker count.

#include <array>
#include <cmath>
#include <cstdint>

namespace aoi_mimo {

struct RngSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

// splitmix64; used to decorrelate caller-chosen stream ids from loop indices.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

// Derive the stream for substream `index` of a spec (per trial, per slot, ...).
inline RngSpec substream(const RngSpec& spec, std::uint64_t index) {
    return {spec.master_seed, detail::mix64(spec.stream_id * 0x100000001B3ull + index)};
}

class StreamRng {
public:
    explicit StreamRng(const RngSpec& spec)
        : key_{static_cast<std::uint32_t>(spec.master_seed),
               static_cast<std::uint32_t>(spec.master_seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(spec.stream_id)),
          stream_hi_(static_cast<std::uint32_t>(spec.stream_id >> 32)) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on [0,1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

    // Uniform on (0,1]; safe as a log argument.
    double next_double_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    // Box-Muller pair of independent standard normals.
    void next_normal_pair(double& z0, double& z1) {
        const double u1 = next_double_pos();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586477 * u2;
        z0 = r * std::cos(t);
        z1 = r * std::sin(t);
    }

private:
    void refill() {
        buf_ = detail::philox4x32_10({static_cast<std::uint32_t>(block_),
                                      static_cast<std::uint32_t>(block_ >> 32),
                                      stream_lo_, stream_hi_},
                                     key_);
        ++block_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace aoi_mimo
