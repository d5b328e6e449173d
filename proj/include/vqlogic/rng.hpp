#pragma once

#include <cstdint>
#include <vector>

namespace vqlogic {

// Deterministic RNG helpers. std::mt19937_64 has a portable output sequence,
// but the standard <random> distributions do not, so uniform draws and
// shuffles are implemented here directly. Everything downstream that takes a
// seed must be byte-reproducible across platforms and thread schedules.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Hash-combine a seed with any number of 64-bit parts. Used to derive
// per-sample seeds from stable record ids so generation order (and worker
// scheduling) cannot influence output.
inline std::uint64_t mix_seed(std::uint64_t seed) { return splitmix64(seed); }

template <typename... Rest>
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t part, Rest... rest) {
    return mix_seed(splitmix64(seed ^ splitmix64(part)), rest...);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {}

    std::uint64_t next_u64() {
        state_ = splitmix64(state_ ^ 0xa0761d6478bd642fULL);
        return state_;
    }

    // Uniform in [0, n). Bias from the modulo is negligible for the tiny n
    // used here (candidate lists, operand pools) and keeps the mapping fixed.
    std::size_t next_index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    bool next_bool() { return (next_u64() & 1u) != 0; }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace vqlogic
