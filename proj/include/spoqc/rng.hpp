#pragma once

#include <cstdint>
#include <random>

namespace spoqc {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Counter-based stream splitting: the seed of substream `index` depends only on
/// (root, tag, index), never on scheduling or on how many streams exist.
inline uint64_t derive_seed(uint64_t root, uint64_t tag, uint64_t index) {
    return splitmix64(splitmix64(root ^ splitmix64(tag)) ^ index);
}

namespace stream_tag {
inline constexpr uint64_t kInstance = 0x1A57;
inline constexpr uint64_t kShots = 0x5407;
inline constexpr uint64_t kTableau = 0x7AB1;
inline constexpr uint64_t kBootstrap = 0xB007;
}  // namespace stream_tag

class Rng {
  public:
    using result_type = uint64_t;
    explicit Rng(uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~uint64_t{0}; }
    result_type operator()() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool coin(double p) { return uniform() < p; }
    bool bit() { return engine_() >> 63; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace spoqc
