#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "spoqc/circuit.hpp"
#include "spoqc/pauli.hpp"

namespace spoqc {

enum class Flavor : uint8_t { SPOQC, SPOQC2 };
std::string flavor_name(Flavor f);
Flavor flavor_from_name(const std::string& s);

struct NoiseModel {
    enum class ErasureInput : uint8_t { PRus, Epsilon };
    ErasureInput erasure_input = ErasureInput::PRus;
    /// p_RUS or the photon loss rate, per `erasure_input`.
    double erasure = 0;
    /// Distinguishability D = 1 - M.
    double distinguishability = 0;
    /// t_RUS / T2.
    double decoherence_ratio = 0;
    Flavor flavor = Flavor::SPOQC2;

    double p_rus() const;
    double p_z() const;
    bool has_pauli_noise() const { return distinguishability > 0 || decoherence_ratio > 0; }
    void validate() const;
};

/// Where a lowered erasure put its Pauli errors.
struct ErasureSite {
    /// Index of the error instruction in the lowered circuit.
    std::size_t instruction;
    uint32_t qubit_a;
    uint32_t qubit_b;
    char pauli;
};

struct LoweredCircuit {
    Circuit circuit;
    /// One entry per erased RUS pair, in RUS order.
    std::vector<ErasureSite> sites;
    std::vector<std::size_t> site_coin;
};

/// Replaces every RUS operation: success -> the bare operation; erasure ->
/// {X,Y,Z}_ERROR(0.5) on both targets before MXX/MYY/MZZ, or after CZ.
/// `coins` has one entry per RUS pair (1 = erased).
LoweredCircuit lower(const Circuit& c, const std::vector<uint8_t>& coins);
Circuit lower_ideal(const Circuit& c);

/// Independent erasure coins, one per RUS pair.
std::vector<uint8_t> sample_coins(std::size_t num_rus, double p_rus, uint64_t seed);

struct ErasureInstance {
    std::shared_ptr<const Circuit> base;
    std::vector<uint8_t> coins;
    Circuit lowered;
    /// RUS pair ordinals (coin indices) that were erased.
    std::vector<std::size_t> erased_ids;
    std::vector<ErasureSite> sites;
};

ErasureInstance sample_instance(std::shared_ptr<const Circuit> c, const NoiseModel& nm, uint64_t seed);

/// DPH2(D) after every RUS operation (or every bare two-qubit operation of an
/// Instance circuit) and Z_ERROR(p_Z) on all qubits after every TICK.
Circuit apply_pauli_noise(const Circuit& c, const NoiseModel& nm);

/// rho -> ideal(sum_k p_k P_k rho P_k) on two qubits.
struct EffectiveChannel {
    std::vector<std::pair<double, PauliString>> paulis;
    Op ideal;
};

enum class LoweringCase : uint8_t { CzSuccess, CzErased, MzzSuccess, MzzErased, MxxErased, MyyErased };
EffectiveChannel effective_channel(LoweringCase c);

}  // namespace spoqc
