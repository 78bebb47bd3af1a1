// rng.hpp — counter-based random streams.
//
// Philox4x32-10 keyed by the user seed; the 128-bit counter carries a stream
// id in its upper half and a block index in its lower half. Every Monte Carlo
// trial draws from its own stream, so results depend only on (seed, trial)
// and never on how trials are scheduled across threads.

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qdetlim {

// One Philox4x32-10 block.
constexpr std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                                     std::array<std::uint32_t, 2> k) noexcept {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
    }
    return c;
}

class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == 2) {
            refill();
            pos_ = 0;
        }
        const std::uint64_t hi = block_[2 * pos_];
        const std::uint64_t lo = block_[2 * pos_ + 1];
        ++pos_;
        return (hi << 32) | lo;
    }

    std::uint64_t stream() const noexcept { return stream_; }

private:
    void refill() noexcept {
        const std::array<std::uint32_t, 4> c = philox4x32_10(
            {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            key_);
        block_ = c;
        ++counter_;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 2;
};

}  // namespace qdetlim
