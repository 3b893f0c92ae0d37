#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spoqc {

enum class Op : uint8_t {
    QUBIT_COORDS,
    R,
    RX,
    H,
    H_YZ,
    S,
    S_DAG,
    CZ,
    M,
    MX,
    MZZ,
    MXX,
    MYY,
    X_ERROR,
    Y_ERROR,
    Z_ERROR,
    DPH2,
    RUS_CZ,
    RUS_MZZ,
    RUS_MXX,
    RUS_MYY,
    DETECTOR,
    OBSERVABLE_INCLUDE,
    TICK,
    SHIFT_COORDS,
};

std::string_view op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);

bool is_two_qubit(Op op);
bool is_rus(Op op);
bool is_noise(Op op);
bool is_reset(Op op);
/// Whether the opcode appends to the measurement record.
bool is_measurement(Op op);
bool is_annotation(Op op);

/// A qubit index or a back-reference `rec[-k]` into the measurement history.
struct Target {
    uint32_t value = 0;
    bool is_record = false;

    static Target qubit(uint32_t q) { return {q, false}; }
    /// `rec[-lookback]`, lookback >= 1.
    static Target record(uint32_t lookback) { return {lookback, true}; }

    bool operator==(const Target&) const = default;
};

struct Instruction {
    Op op = Op::TICK;
    std::vector<double> args;
    std::vector<Target> targets;

    /// Number of records this instruction appends.
    std::size_t measurement_count() const;

    bool operator==(const Instruction&) const = default;
};

enum class CircuitLevel : uint8_t { HighLevel, Instance };

/// Flat instruction list. Immutable once built and freely shareable between threads.
class Circuit {
  public:
    Circuit() = default;

    /// Appends after canonicalizing (error-channel targets sorted); throws
    /// std::invalid_argument on arity or probability violations.
    void append(Instruction inst);
    void append(Op op, std::vector<uint32_t> qubits, std::vector<double> args = {});
    /// DETECTOR / OBSERVABLE_INCLUDE over absolute measurement indices; converted
    /// to back-references relative to the current record length.
    void append_record_annotation(Op op, const std::vector<std::size_t>& absolute_records,
                                  std::vector<double> args = {});

    const std::vector<Instruction>& instructions() const { return instructions_; }
    uint32_t qubit_count() const { return qubit_count_; }
    /// Raises qubit_count to at least n (for circuits with idle qubits).
    void reserve_qubits(uint32_t n) {
        if (n > qubit_count_) {
            qubit_count_ = n;
        }
    }
    CircuitLevel level() const { return rus_count_ > 0 ? CircuitLevel::HighLevel : CircuitLevel::Instance; }

    std::size_t measurement_count() const { return measurement_count_; }
    std::size_t detector_count() const { return detector_count_; }
    std::size_t observable_count() const { return observable_count_; }
    /// Number of RUS_* instructions counted per qubit pair (the RUS module uses).
    std::size_t rus_count() const { return rus_count_; }

    /// Plane coordinates from QUBIT_COORDS instructions (plotting only).
    std::map<uint32_t, std::pair<double, double>> coordinates() const;

    bool operator==(const Circuit& other) const { return instructions_ == other.instructions_ && qubit_count_ == other.qubit_count_; }

  private:
    std::vector<Instruction> instructions_;
    uint32_t qubit_count_ = 0;
    std::size_t measurement_count_ = 0;
    std::size_t detector_count_ = 0;
    std::size_t observable_count_ = 0;
    std::size_t rus_count_ = 0;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

Circuit parse_circuit(std::string_view text);
std::string print_circuit(const Circuit& c);
std::string print_instruction(const Instruction& inst);

struct Diagnostic {
    std::size_t instruction_index;
    std::string message;
};

std::vector<Diagnostic> validate(const Circuit& c, std::optional<CircuitLevel> expected_level = std::nullopt);

/// Absolute measurement indices of every DETECTOR (outer index = detector id)
/// and every observable (outer index = observable id).
struct Annotations {
    std::vector<std::vector<std::size_t>> detectors;
    std::vector<std::vector<std::size_t>> observables;
    std::vector<std::vector<double>> detector_coords;
};
Annotations collect_annotations(const Circuit& c);

/// Copy of the circuit with DETECTOR/OBSERVABLE_INCLUDE removed.
Circuit strip_annotations(const Circuit& c);

Circuit load_circuit_file(const std::string& path);
void save_circuit_file(const Circuit& c, const std::string& path);

}  // namespace spoqc
