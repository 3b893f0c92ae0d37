#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spoqc/circuit.hpp"
#include "spoqc/rng.hpp"

namespace spoqc {

/// Bit matrix with one row per detector (or observable) and one bit per shot.
struct BitTable {
    std::size_t rows = 0;
    std::size_t shots = 0;
    std::size_t words_per_row = 0;
    std::vector<uint64_t> bits;

    BitTable() = default;
    BitTable(std::size_t rows, std::size_t shots);
    bool get(std::size_t row, std::size_t shot) const {
        return (bits[row * words_per_row + (shot >> 6)] >> (shot & 63)) & 1;
    }
    uint64_t& word(std::size_t row, std::size_t w) { return bits[row * words_per_row + w]; }
    uint64_t word(std::size_t row, std::size_t w) const { return bits[row * words_per_row + w]; }
    bool operator==(const BitTable&) const = default;
};

struct SampleResult {
    BitTable detectors;
    BitTable observables;
};

/// Reference-frame sampler: the noiseless reference is computed once with the
/// tableau engine, then error frames are propagated 64 shots per machine word.
/// Shots 64k..64k+63 always come from the substream derived from (seed, k), so
/// any shot count yields a prefix of the same stream.
class FrameSampler {
  public:
    /// Throws std::invalid_argument if a detector or observable is not
    /// deterministic in the noiseless circuit.
    explicit FrameSampler(const Circuit& c);

    std::size_t num_detectors() const { return detectors_.size(); }
    std::size_t num_observables() const { return observables_.size(); }

    SampleResult sample(std::size_t shots, uint64_t seed) const;

    /// Same propagation with only `shots_per_word` live lanes per word (for
    /// measuring the benefit of bit packing). Results use a different stream.
    SampleResult sample_packed(std::size_t shots, uint64_t seed, unsigned shots_per_word) const;

    /// Noiseless observable values.
    const std::vector<uint8_t>& observable_reference() const { return obs_reference_; }

  private:
    struct Step {
        Op op;
        double p;
        std::vector<uint32_t> targets;
    };
    void run_word(uint64_t seed_word, uint64_t lane_mask, std::vector<uint64_t>& x, std::vector<uint64_t>& z,
                  std::vector<uint64_t>& rec) const;

    std::size_t num_qubits_;
    std::size_t num_measurements_;
    std::vector<Step> steps_;
    std::vector<std::vector<std::size_t>> detectors_;
    std::vector<std::vector<std::size_t>> observables_;
    std::vector<uint8_t> obs_reference_;
};

/// Convenience wrapper around FrameSampler.
SampleResult sample(const Circuit& c, std::size_t shots, uint64_t seed);

/// Shots per second for `shots` shots (best of a few repetitions).
double throughput_report(const Circuit& c, std::size_t shots, unsigned shots_per_word = 64);

/// Draws a 64-bit word whose bits are independent Bernoulli(p).
uint64_t bernoulli_word(Rng& rng, double p);

}  // namespace spoqc
