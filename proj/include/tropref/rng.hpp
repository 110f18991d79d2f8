#pragma once

#include <cstdint>
#include <string>

namespace tropref {

// splitmix64; fully deterministic across platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform-ish in [0, n); bias is irrelevant here, determinism is not.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    long long int_in(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

inline std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag) {
    std::uint64_t h = seed ^ 0x51afd5ull;
    for (char c : tag) h = (h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c))) * 0x100000001b3ull;
    return h;
}

}  // namespace tropref
