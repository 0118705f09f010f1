#include "tracemark/common/random.hpp"

#include <openssl/rand.h>

#include "tracemark/common/error.hpp"

namespace tracemark {

Csprng& Csprng::instance() {
    static Csprng rng;
    return rng;
}

void Csprng::seed_for_testing(std::uint64_t seed) {
    std::lock_guard lock(mutex_);
    test_engine_.emplace(seed);
}

void Csprng::reseed_from_system() {
    std::lock_guard lock(mutex_);
    test_engine_.reset();
}

bool Csprng::deterministic() const {
    std::lock_guard lock(mutex_);
    return test_engine_.has_value();
}

void Csprng::fill(std::span<std::uint8_t> out) {
    std::lock_guard lock(mutex_);
    if (test_engine_) {
        for (auto& b : out) {
            b = static_cast<std::uint8_t>((*test_engine_)() & 0xFFU);
        }
        return;
    }
    if (!out.empty() && RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw Error("system CSPRNG failure");
    }
}

std::uint64_t Csprng::next_u64() {
    std::uint8_t buf[8];
    fill(buf);
    std::uint64_t v = 0;
    for (std::uint8_t b : buf) v = (v << 8) | b;
    return v;
}

std::uint8_t Csprng::next_u8() {
    std::uint8_t b = 0;
    fill(std::span<std::uint8_t>(&b, 1));
    return b;
}

unsigned Csprng::next_bit() { return next_u8() & 1U; }

} // namespace tracemark
