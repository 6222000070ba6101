#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Deterministic hashing and seeded randomness. Everything downstream
// (embeddings, signatures, seed mixing, sampled policies) routes through these
// functions so that runs are reproducible across builds and platforms;
// std::hash and std::uniform_* distributions are deliberately avoided because
// their outputs are implementation-defined.

namespace pprobe {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::string_view text,
                                std::uint64_t seed = kFnvOffset) {
    std::uint64_t h = seed;
    for (unsigned char c : text) {
        h ^= static_cast<std::uint64_t>(c);
        h *= kFnvPrime;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds a label into a seed; order-sensitive so mix(mix(s,a),b) != mix(mix(s,b),a).
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view label) {
    return splitmix64(seed ^ fnv1a64(label));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) {
    return splitmix64(seed ^ splitmix64(value));
}

// Small deterministic generator (splitmix64 stream).
class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, bound) via rejection sampling (unbiased, portable).
    std::uint64_t bounded(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

    // Weighted index draw; weights must be non-negative with a positive sum.
    std::size_t weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) return 0;
        // 53-bit uniform in [0,1).
        const double u =
            static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
        double cut = u * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            cut -= weights[i];
            if (cut < 0.0) return i;
        }
        return weights.size() - 1;
    }

  private:
    std::uint64_t state_;
};

// Whitespace tokenizer used by embeddings and signatures.
std::vector<std::string> whitespace_tokens(std::string_view text);

}  // namespace pprobe
