#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spoqc/circuit.hpp"
#include "spoqc/lattice.hpp"
#include "spoqc/noise.hpp"
#include "spoqc/pauli.hpp"

namespace spoqc {

enum class Family : uint8_t { Honeycomb, SurfaceCZ };
std::string family_name(Family f);
Family family_from_name(const std::string& s);

/// Memory experiment in the X basis. `size` is L for the honeycomb code and
/// d for the surface code; `rounds` counts sub-rounds (honeycomb) or
/// stabilizer rounds (surface); 0 picks the default.
struct CodeSpec {
    Family family = Family::Honeycomb;
    int size = 2;
    int rounds = 0;
    Flavor flavor = Flavor::SPOQC2;
};

int default_rounds(Family f, int size);

class CertificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A record subset proposed as a detector, with plotting coordinates.
struct DetectorCandidate {
    std::vector<std::size_t> records;
    std::vector<double> coords;
};

/// Keeps the candidates whose parity is deterministic and zero in the
/// noiseless circuit (duplicates dropped), places each DETECTOR right after
/// its last record and appends OBSERVABLE_INCLUDE(0) for `initial_logical`.
/// An empty `initial_logical` (no qubits) picks the first logical the
/// readout exposes.
Circuit discover_detectors(const Circuit& bare, const std::vector<DetectorCandidate>& candidates,
                           const PauliString& initial_logical);

/// Honeycomb schedule red, green, blue, red, blue, green.
Color honeycomb_schedule(int sub_round);

Circuit build_honeycomb(const CodeSpec& spec);
Circuit build_surface_cz(const CodeSpec& spec);
Circuit build_code(const CodeSpec& spec);

struct ResourceCount {
    std::size_t spins;
    std::size_t modules;
};
ResourceCount resource_count(const CodeSpec& spec);

}  // namespace spoqc
