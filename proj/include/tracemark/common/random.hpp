#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <span>

namespace tracemark {

/// Process-wide random source. Draws from OpenSSL's CSPRNG unless test mode
/// pinned a seed, in which case a deterministic generator is used so that
/// erasure guesses and nonces are reproducible. All members are thread-safe.
class Csprng {
public:
    static Csprng& instance();

    void seed_for_testing(std::uint64_t seed);
    void reseed_from_system();
    bool deterministic() const;

    void fill(std::span<std::uint8_t> out);
    std::uint64_t next_u64();
    std::uint8_t next_u8();
    unsigned next_bit();

private:
    Csprng() = default;

    mutable std::mutex mutex_;
    std::optional<std::mt19937_64> test_engine_;
};

} // namespace tracemark
