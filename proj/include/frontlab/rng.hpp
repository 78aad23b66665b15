#pragma once

// Counter-based deterministic random streams (Philox 4x32-10).
//
// Every stream is keyed by (global seed, stream id); the generator state is a
// 128-bit block counter, so a draw is a pure function of
// (seed, stream id, draw index).  Replicas and sweep points own disjoint
// stream ids, which makes results independent of thread count and scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace frontlab {

namespace detail {

inline constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
inline constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM4x32A) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM4x32B) * ctr[2];
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t r0 = hi1 ^ ctr[1] ^ key[0];
    const std::uint32_t r2 = hi0 ^ ctr[3] ^ key[1];
    ctr[0] = r0;
    ctr[1] = lo1;
    ctr[2] = r2;
    ctr[3] = lo0;
}

inline void philox_4x32_10(const std::uint32_t ctr_in[4], const std::uint32_t key_in[2],
                           std::uint32_t out[4]) {
    std::uint32_t key[2] = {key_in[0], key_in[1]};
    for (int i = 0; i < 4; ++i) out[i] = ctr_in[i];
    for (int round = 0; round < 10; ++round) {
        philox_round(out, key);
        if (round < 9) {
            key[0] += kPhiloxW32A;
            key[1] += kPhiloxW32B;
        }
    }
}

// 64-bit finalizer used to derive child stream ids.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Derives a fresh stream id from a parent id and an index (replica number,
/// sweep point, ...).  Nesting derive calls keeps ids collision-free in
/// practice across the id space actually used by a run.
inline std::uint64_t derive_stream_id(std::uint64_t parent, std::uint64_t index) {
    return detail::splitmix64(detail::splitmix64(parent) ^ (index + 0x632BE59BD9B4E019ull));
}

/// One logical random stream.  Cheap to construct; owned by exactly one task.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : stream_lo_(static_cast<std::uint32_t>(stream_id)),
          stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)),
          key_lo_(static_cast<std::uint32_t>(seed)),
          key_hi_(static_cast<std::uint32_t>(seed >> 32)) {}

    std::uint64_t seed() const noexcept {
        return key_lo_ | (static_cast<std::uint64_t>(key_hi_) << 32);
    }
    std::uint64_t stream_id() const noexcept {
        return stream_lo_ | (static_cast<std::uint64_t>(stream_hi_) << 32);
    }

    /// Next 64 uniform random bits.
    std::uint64_t next_u64() {
        if (have_spare_u64_) {
            have_spare_u64_ = false;
            return spare_u64_;
        }
        std::uint32_t ctr[4] = {static_cast<std::uint32_t>(block_),
                                static_cast<std::uint32_t>(block_ >> 32), stream_lo_, stream_hi_};
        const std::uint32_t key[2] = {key_lo_, key_hi_};
        std::uint32_t out[4];
        detail::philox_4x32_10(ctr, key, out);
        ++block_;
        spare_u64_ = out[2] | (static_cast<std::uint64_t>(out[3]) << 32);
        have_spare_u64_ = true;
        return out[0] | (static_cast<std::uint64_t>(out[1]) << 32);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pair cached, rejection-free).
    double gaussian() {
        if (have_spare_normal_) {
            have_spare_normal_ = false;
            return spare_normal_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_normal_ = r * std::sin(a);
        have_spare_normal_ = true;
        return r * std::cos(a);
    }

    /// Positions the stream at an absolute 128-bit-block index (test hook).
    void seek_block(std::uint64_t block) noexcept {
        block_ = block;
        have_spare_u64_ = false;
        have_spare_normal_ = false;
    }

private:
    std::uint32_t stream_lo_, stream_hi_;
    std::uint32_t key_lo_, key_hi_;
    std::uint64_t block_ = 0;
    std::uint64_t spare_u64_ = 0;
    double spare_normal_ = 0.0;
    bool have_spare_u64_ = false;
    bool have_spare_normal_ = false;
};

}  // namespace frontlab
