#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "spoqc/bits.hpp"

namespace spoqc {

/// Pauli operator i^phase * P_0 (x) P_1 (x) ... with P_k in {I, X, Y, Z}.
///
/// Each qubit is encoded by an (x, z) bit pair: (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z,
/// with Y the Hermitian matrix (not XZ).
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::size_t num_qubits) : xs(num_qubits), zs(num_qubits) {}

    /// Parses strings like "+XYZ_", "-ZZ", "iX", "-iIY". '_' and 'I' are identity.
    static PauliString from_string(std::string_view text);
    /// Single-type operator ('X', 'Y' or 'Z') on the listed qubits.
    static PauliString on(std::size_t num_qubits, char pauli, std::initializer_list<std::size_t> qubits);

    std::size_t num_qubits() const { return xs.size(); }

    char at(std::size_t q) const;
    void set(std::size_t q, char pauli);

    /// this <- this * rhs; returns nothing, phase is folded into `phase`.
    PauliString& operator*=(const PauliString& rhs);
    PauliString operator*(const PauliString& rhs) const {
        PauliString r = *this;
        r *= rhs;
        return r;
    }

    bool commutes(const PauliString& other) const;
    bool is_hermitian() const { return (phase & 1) == 0; }
    bool is_identity() const { return xs.none() && zs.none(); }
    /// Support size.
    std::size_t weight() const;

    std::string str() const;

    bool operator==(const PauliString&) const = default;

    BitVector xs;
    BitVector zs;
    /// Exponent of i in the overall scalar, mod 4.
    uint8_t phase = 0;
};

/// Multiplies two Hermitian-encoded Pauli strings in place on raw words and
/// returns the exponent of i (mod 4) picked up, i.e. P1*P2 = i^k * P3 where P3
/// is stored back into (x1, z1).
uint8_t mul_words_log_i(uint64_t* x1, uint64_t* z1, const uint64_t* x2, const uint64_t* z2, std::size_t num_words);

}  // namespace spoqc
