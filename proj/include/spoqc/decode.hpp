#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <tuple>
#include <stdexcept>
#include <string>
#include <vector>

#include "spoqc/bits.hpp"
#include "spoqc/circuit.hpp"
#include "spoqc/frames.hpp"
#include "spoqc/noise.hpp"

namespace spoqc {

/// Detectors and observables flipped by one error component.
struct Symptom {
    std::vector<uint32_t> detectors;
    uint64_t observables = 0;

    bool empty() const { return detectors.empty() && observables == 0; }
    bool operator==(const Symptom&) const = default;
    bool operator<(const Symptom& o) const {
        return detectors != o.detectors ? detectors < o.detectors : observables < o.observables;
    }
};

/// XOR of symptoms.
Symptom combine(const Symptom& a, const Symptom& b);

struct ErrorMechanism {
    double probability = 0;
    /// Graphlike parts (at most two detectors each) whose XOR is the full symptom.
    std::vector<Symptom> parts;

    Symptom symptom() const;
};

class DecompositionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct DetectorErrorModel {
    std::size_t num_detectors = 0;
    std::size_t num_observables = 0;
    std::vector<ErrorMechanism> errors;

    /// One `error(p) D.. L..` line per mechanism, parts separated by `^`.
    std::string str() const;
};

DetectorErrorModel parse_dem(const std::string& text);

/// Raw per-component symptoms of every error channel in an Instance circuit,
/// in circuit order. DPH2 contributes its ZI, IZ and ZZ components.
struct ErrorComponent {
    std::size_t instruction;
    /// Target offset within the instruction (pair offset for DPH2).
    std::size_t target;
    char kind;  // 'X', 'Y', 'Z' single-qubit; 'a', 'b', 'c' for DPH2 ZI, IZ, ZZ
    double probability;
    Symptom symptom;
};
std::vector<ErrorComponent> error_components(const Circuit& c);

/// Splits `s` into graphlike parts drawn from `known` (symptoms with at most
/// two detectors). Throws DecompositionError when impossible.
std::vector<Symptom> decompose(const Symptom& s, const std::vector<Symptom>& known);

/// Probability of each independent component of DPH2(p): ZI, IZ and ZZ each
/// with this probability reproduce the channel exactly.
double dph2_component_probability(double p);

DetectorErrorModel build_dem(const Circuit& c);

class MatchingGraph {
  public:
    struct Edge {
        uint32_t a;
        uint32_t b;  // == boundary() for a boundary edge
        double probability;
        double weight;
        uint64_t observables;
    };

    MatchingGraph() = default;
    explicit MatchingGraph(std::size_t num_detectors) : num_detectors_(num_detectors), adj_(num_detectors + 1) {}
    static MatchingGraph from_dem(const DetectorErrorModel& dem);

    /// Adds or merges (same endpoints and observables) an edge of probability p.
    void add_edge(uint32_t a, uint32_t b, double p, uint64_t observables);

    std::size_t num_detectors() const { return num_detectors_; }
    uint32_t boundary() const { return static_cast<uint32_t>(num_detectors_); }
    bool has_boundary_edges() const { return has_boundary_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::vector<uint32_t>>& adjacency() const { return adj_; }
    bool has_zero_weight_edges() const { return has_zero_; }

  private:
    std::size_t num_detectors_ = 0;
    bool has_boundary_ = false;
    bool has_zero_ = false;
    std::vector<Edge> edges_;
    std::vector<std::vector<uint32_t>> adj_;
    std::map<std::tuple<uint32_t, uint32_t, uint64_t>, uint32_t> merge_keys_;
};

double edge_weight(double p);

struct Decoding {
    std::vector<uint32_t> correction_edges;
    uint64_t observables = 0;
    double weight = 0;
};

/// Minimum-weight perfect matching of the flipped detectors. Defects joined by
/// zero-weight paths are paired first (this never increases the total weight);
/// the rest are matched exactly with a weighted blossom algorithm over
/// shortest-path distances. Deterministic: ties go to lower edge indices.
/// Throws std::runtime_error if a component has odd parity and no boundary.
Decoding mwpm_decode(const MatchingGraph& g, const std::vector<uint32_t>& defects);

/// Minimum-weight perfect matching on a complete graph given as a symmetric
/// integer weight matrix (n even). Returns mate[i].
std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<int64_t>>& w);

/// Exact erasure classification: 0.5 iff some combination of the given
/// mechanisms flips no detector but flips an observable, else 0.
double classify_symptoms(const std::vector<Symptom>& mechanisms, std::size_t num_detectors);
double classify_erasure_instance(const ErasureInstance& inst);

/// Fewest graphlike mechanisms whose detector flips cancel while flipping
/// observable 0 an odd number of times. Returns 0 if no such set exists.
std::size_t estimate_graph_distance(const DetectorErrorModel& dem);

/// Precomputed symptoms of both erasure components of every RUS pair of an
/// annotated HighLevel circuit; decodes erasure-only instances without
/// rebuilding anything per instance.
class ErasureDecoder {
  public:
    explicit ErasureDecoder(const Circuit& base);

    std::size_t num_rus() const { return components_.size(); }
    std::size_t num_detectors() const { return num_detectors_; }
    /// Symptoms of the two components (one per target qubit) of RUS pair k.
    const std::array<Symptom, 2>& components(std::size_t k) const { return components_[k]; }
    const std::array<std::vector<Symptom>, 2>& parts(std::size_t k) const { return parts_[k]; }

    struct InstanceResult {
        double classified;  // GF(2) oracle: 0 or 0.5
        std::size_t shots;
        std::size_t mismatches;
    };
    /// Samples `shots` erasure realizations (each component fires with
    /// probability 1/2) and decodes them with zero-weight matching.
    InstanceResult run(const std::vector<uint8_t>& coins, std::size_t shots, uint64_t seed) const;

    /// The matching graph of an instance: one zero-weight edge per part of
    /// every erased component.
    MatchingGraph instance_graph(const std::vector<uint8_t>& coins) const;

  private:
    std::size_t num_detectors_ = 0;
    std::vector<std::array<Symptom, 2>> components_;
    std::vector<std::array<std::vector<Symptom>, 2>> parts_;
};

}  // namespace spoqc
