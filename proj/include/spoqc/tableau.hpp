#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spoqc/bits.hpp"
#include "spoqc/circuit.hpp"
#include "spoqc/pauli.hpp"

namespace spoqc {

/// GF(2) affine form over sign variables: bit 0 is the constant term and bit
/// k >= 1 is the coefficient of variable k - 1. A concrete simulation uses no
/// variables, in which case a form is a single bit.
using AffineForm = BitVector;

/// Aaronson-Gottesman stabilizer tableau whose stabilizer signs are affine
/// forms instead of bits, so that one engine serves both seeded sampling and
/// exact symbolic determinism analysis.
class Tableau {
  public:
    /// |0...0> on `num_qubits` qubits, with room for `num_vars` sign variables.
    explicit Tableau(std::size_t num_qubits, std::size_t num_vars = 0);

    std::size_t num_qubits() const { return n_; }
    std::size_t num_vars() const { return num_vars_; }

    AffineForm constant(bool value) const;
    AffineForm variable(std::size_t k) const;

    void h(std::size_t q);
    void h_yz(std::size_t q);
    void s(std::size_t q);
    void s_dag(std::size_t q);
    void cz(std::size_t a, std::size_t b);
    /// Applies `p` when the form evaluates to 1 (flips the affected stabilizer signs).
    void apply_pauli(const PauliString& p, const AffineForm& when);
    void apply_pauli(const PauliString& p) { apply_pauli(p, constant(true)); }

    struct Outcome {
        AffineForm value;
        bool deterministic;
    };
    /// Measures Hermitian `p`. A random outcome takes the value `random_value`.
    Outcome measure(const PauliString& p, const AffineForm& random_value);
    /// Measures qubit q in `basis` ('Z' or 'X') then flips it so the outcome
    /// would read `target`.
    void reset(std::size_t q, char basis, const AffineForm& target);

    /// Stabilizer row i with its sign (only meaningful without variables).
    PauliString stabilizer(std::size_t i) const;
    PauliString destabilizer(std::size_t i) const;
    const AffineForm& stabilizer_sign(std::size_t i) const { return sign_[i]; }

    /// Checks stabilizer commutation and the symplectic pairing with destabilizers.
    bool invariants_hold() const;

  private:
    void row_mul_stab(std::size_t target, std::size_t source);
    void row_mul_destab(std::size_t target, std::size_t source_stab);
    bool anticommutes_stab(std::size_t i, const PauliString& p) const;
    bool anticommutes_destab(std::size_t i, const PauliString& p) const;

    std::size_t n_;
    std::size_t num_vars_;
    std::vector<BitVector> sx_, sz_;  // stabilizers
    std::vector<BitVector> dx_, dz_;  // destabilizers
    std::vector<AffineForm> sign_;
};

struct MeasurementRecord {
    std::vector<uint8_t> outcomes;
    /// deterministic[m] is true iff outcome m was forced by the state.
    std::vector<uint8_t> deterministic;
};

/// Seeded reference simulation of an Instance circuit (error channels sampled).
/// `debug_checks` verifies tableau invariants after every instruction.
MeasurementRecord run(const Circuit& c, uint64_t seed, bool debug_checks = false);

/// Measures `p` on the tableau using a seeded coin for random outcomes.
Tableau::Outcome measure_pauli(Tableau& t, const PauliString& p, bool coin);

/// Affine expression of every measurement outcome of a noiseless circuit in
/// terms of sign variables: one per random measurement and, when
/// `symbolic_initial_resets` is set, one per leading-layer reset of a qubit that
/// is read out at the end (standing in for the unknown initial data values).
/// Error channels are ignored.
struct DeterminismTrace {
    enum class VarKind : uint8_t { InitialReset, RandomMeasurement };
    struct VarOrigin {
        VarKind kind;
        std::size_t index;  // qubit for InitialReset, record index otherwise
    };
    std::vector<AffineForm> forms;
    std::vector<VarOrigin> vars;
    /// Leading-layer reset per qubit: 'X' for RX, 'Z' for R, 0 if none.
    std::vector<char> initial_basis;

    /// XOR of the forms of the given records.
    AffineForm parity(const std::vector<std::size_t>& records) const;
    /// True iff the parity involves no random-measurement variable.
    bool is_deterministic(const AffineForm& f) const;
};

DeterminismTrace trace_determinism(const Circuit& c, bool symbolic_initial_resets = true);

/// Measurement indices of the trailing block of single-qubit readouts.
std::vector<std::size_t> final_readout_records(const Circuit& c);

/// Products of initial data stabilizers whose value the final readout reveals
/// but no mid-circuit parity ever exposes: one representative per independent
/// logical operator of the memory's basis.
std::vector<PauliString> find_initial_logicals(const Circuit& c, const DeterminismTrace& trace);

struct ObservableFrame {
    /// Mid-circuit records in the observable (absolute indices).
    std::vector<std::size_t> records;
    /// Final data readout records in the observable (absolute indices) and their qubits.
    std::vector<std::size_t> final_readout_records;
    std::vector<uint32_t> final_readout_qubits;
    /// Noiseless value of the observable parity.
    bool reference_value = false;

    std::vector<std::size_t> all_records() const;
};

class ObservableError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Finds a set of measurement records whose parity equals the initial value of
/// `initial_logical` in every noiseless execution. `initial_logical` must be a
/// product of the stabilizers prepared by the leading reset layer. Final data
/// readouts are preferred over mid-circuit records.
ObservableFrame derive_observable_frame(const Circuit& c, const PauliString& initial_logical);
ObservableFrame derive_observable_frame(const Circuit& c, const DeterminismTrace& trace,
                                        const PauliString& initial_logical);

}  // namespace spoqc
