#include "tracemark/payload/reed_solomon.hpp"

#include <algorithm>
#include <array>

#include "tracemark/common/error.hpp"

namespace tracemark::payload::rs {

namespace {

struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<int, 256> log{};

    Tables() {
        unsigned x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
            log[x] = i;
            x <<= 1;
            if (x & 0x100U) x ^= 0x11dU;
        }
        for (std::size_t i = 255; i < exp.size(); ++i) exp[i] = exp[i - 255];
        log[0] = -1;
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

// Polynomials below are stored lowest degree first.
using Poly = std::vector<std::uint8_t>;

std::uint8_t eval(const Poly& p, std::uint8_t x) {
    std::uint8_t y = 0;
    for (std::size_t i = p.size(); i-- > 0;) y = static_cast<std::uint8_t>(gf_mul(y, x) ^ p[i]);
    return y;
}

Poly mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= gf_mul(a[i], b[j]);
    }
    return out;
}

std::size_t degree(const Poly& p) {
    std::size_t d = p.size();
    while (d > 1 && p[d - 1] == 0) --d;
    return d - 1;
}

std::uint8_t inverse(std::uint8_t a) { return gf_div(1, a); }

std::vector<std::uint8_t> syndromes(std::span<const std::uint8_t> codeword, unsigned nsym) {
    // Codeword index k holds the coefficient of x^(n-1-k).
    std::vector<std::uint8_t> s(nsym, 0);
    for (unsigned j = 0; j < nsym; ++j) {
        const std::uint8_t a = gf_pow2(static_cast<int>(j));
        std::uint8_t y = 0;
        for (std::uint8_t c : codeword) y = static_cast<std::uint8_t>(gf_mul(y, a) ^ c);
        s[j] = y;
    }
    return s;
}

} // namespace

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const auto& t = tables();
    return t.exp[static_cast<std::size_t>(t.log[a] + t.log[b])];
}

std::uint8_t gf_div(std::uint8_t a, std::uint8_t b) {
    if (b == 0) throw Error("division by zero in GF(256)");
    if (a == 0) return 0;
    const auto& t = tables();
    return t.exp[static_cast<std::size_t>((t.log[a] - t.log[b] + 255) % 255)];
}

std::uint8_t gf_pow2(int exponent) {
    int e = exponent % 255;
    if (e < 0) e += 255;
    return tables().exp[static_cast<std::size_t>(e)];
}

std::vector<std::uint8_t> encode(std::span<const std::uint8_t> message, unsigned nsym) {
    if (message.size() + nsym > 255) throw Error("Reed-Solomon block longer than 255 symbols");
    if (nsym == 0) return {};
    // Generator, highest degree first: prod (x - 2^j).
    std::vector<std::uint8_t> gen = {1};
    for (unsigned j = 0; j < nsym; ++j) {
        std::vector<std::uint8_t> next(gen.size() + 1, 0);
        const std::uint8_t root = gf_pow2(static_cast<int>(j));
        for (std::size_t i = 0; i < gen.size(); ++i) {
            next[i] ^= gen[i];
            next[i + 1] ^= gf_mul(gen[i], root);
        }
        gen = std::move(next);
    }
    std::vector<std::uint8_t> work(message.begin(), message.end());
    work.resize(message.size() + nsym, 0);
    for (std::size_t i = 0; i < message.size(); ++i) {
        const std::uint8_t coef = work[i];
        if (coef == 0) continue;
        for (std::size_t j = 1; j < gen.size(); ++j) work[i + j] ^= gf_mul(gen[j], coef);
    }
    return {work.begin() + static_cast<std::ptrdiff_t>(message.size()), work.end()};
}

std::optional<DecodeResult> decode(std::span<const std::uint8_t> codeword, unsigned nsym,
                                   std::span<const std::size_t> erasures) {
    const std::size_t n = codeword.size();
    if (n > 255 || n < nsym) throw Error("invalid Reed-Solomon codeword length");
    std::vector<std::size_t> erased(erasures.begin(), erasures.end());
    std::sort(erased.begin(), erased.end());
    erased.erase(std::unique(erased.begin(), erased.end()), erased.end());
    for (std::size_t k : erased) {
        if (k >= n) throw Error("erasure index outside codeword");
    }
    if (erased.size() > nsym) return std::nullopt;

    const auto synd = syndromes(codeword, nsym);
    DecodeResult result;
    result.message.assign(codeword.begin(), codeword.end() - nsym);
    if (std::all_of(synd.begin(), synd.end(), [](std::uint8_t s) { return s == 0; })) {
        return result;
    }

    // Erasure locator prod (1 - X x), X = 2^(n-1-k).
    Poly gamma = {1};
    for (std::size_t k : erased) {
        gamma = mul(gamma, Poly{1, gf_pow2(static_cast<int>(n - 1 - k))});
    }

    // Berlekamp-Massey seeded with the erasure locator.
    const std::size_t f = erased.size();
    Poly lambda = gamma;
    Poly prev = gamma;
    std::size_t len = f;
    std::size_t shift = 1;
    std::uint8_t prev_disc = 1;
    for (std::size_t k = f; k < nsym; ++k) {
        std::uint8_t delta = 0;
        for (std::size_t i = 0; i <= len && i < lambda.size() && i <= k; ++i) {
            delta ^= gf_mul(lambda[i], synd[k - i]);
        }
        if (delta == 0) {
            ++shift;
            continue;
        }
        const std::uint8_t coef = gf_div(delta, prev_disc);
        Poly next = lambda;
        next.resize(std::max(lambda.size(), prev.size() + shift), 0);
        for (std::size_t i = 0; i < prev.size(); ++i) next[i + shift] ^= gf_mul(coef, prev[i]);
        if (2 * len <= k + f) {
            prev = lambda;
            prev_disc = delta;
            len = k + 1 + f - len;
            shift = 1;
        } else {
            ++shift;
        }
        lambda = std::move(next);
    }
    lambda.resize(degree(lambda) + 1);
    if (degree(lambda) != len || len < f || 2 * (len - f) + f > nsym) return std::nullopt;

    // Chien search over the positions of the shortened code.
    std::vector<std::size_t> positions;
    for (std::size_t p = 0; p < n; ++p) {
        if (eval(lambda, gf_pow2(-static_cast<int>(p))) == 0) positions.push_back(p);
    }
    if (positions.size() != len) return std::nullopt;

    Poly omega = mul(Poly(synd.begin(), synd.end()), lambda);
    omega.resize(nsym);
    Poly deriv(lambda.size() > 1 ? lambda.size() - 1 : 1, 0);
    for (std::size_t i = 1; i < lambda.size(); i += 2) deriv[i - 1] = lambda[i];

    std::vector<std::uint8_t> fixed(codeword.begin(), codeword.end());
    for (std::size_t p : positions) {
        const std::uint8_t x = gf_pow2(static_cast<int>(p));
        const std::uint8_t xinv = inverse(x);
        const std::uint8_t denom = eval(deriv, xinv);
        if (denom == 0) return std::nullopt;
        const std::uint8_t magnitude = gf_mul(x, gf_div(eval(omega, xinv), denom));
        fixed[n - 1 - p] ^= magnitude;
    }
    const auto check = syndromes(fixed, nsym);
    if (!std::all_of(check.begin(), check.end(), [](std::uint8_t s) { return s == 0; })) {
        return std::nullopt;
    }
    result.message.assign(fixed.begin(), fixed.end() - nsym);
    result.erasures = f;
    result.errors = 0;
    for (std::size_t p : positions) {
        if (!std::binary_search(erased.begin(), erased.end(), n - 1 - p)) ++result.errors;
    }
    return result;
}

} // namespace tracemark::payload::rs
