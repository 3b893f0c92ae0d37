#include "spoqc/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace spoqc {

uint8_t mul_words_log_i(uint64_t* x1, uint64_t* z1, const uint64_t* x2, const uint64_t* z2, std::size_t num_words) {
    // Per-bit-position mod-4 counters of the +-i factors from anticommuting sites.
    uint64_t cnt1 = 0;
    uint64_t cnt2 = 0;
    for (std::size_t k = 0; k < num_words; k++) {
        uint64_t old_x1 = x1[k];
        uint64_t old_z1 = z1[k];
        x1[k] ^= x2[k];
        z1[k] ^= z2[k];
        uint64_t x1z2 = old_x1 & z2[k];
        uint64_t anti_commutes = (x2[k] & old_z1) ^ x1z2;
        cnt2 ^= (cnt1 ^ x1[k] ^ z1[k] ^ x1z2) & anti_commutes;
        cnt1 ^= anti_commutes;
    }
    uint8_t s = static_cast<uint8_t>(std::popcount(cnt1));
    s ^= static_cast<uint8_t>(std::popcount(cnt2) << 1);
    return s & 3;
}

PauliString PauliString::from_string(std::string_view text) {
    uint8_t phase = 0;
    std::size_t k = 0;
    if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
        if (text[k] == '-') {
            phase = 2;
        }
        k++;
    }
    if (k < text.size() && text[k] == 'i') {
        phase = (phase + 1) & 3;
        k++;
    }
    PauliString p(text.size() - k);
    p.phase = phase;
    for (std::size_t q = 0; k < text.size(); k++, q++) {
        p.set(q, text[k]);
    }
    return p;
}

PauliString PauliString::on(std::size_t num_qubits, char pauli, std::initializer_list<std::size_t> qubits) {
    PauliString p(num_qubits);
    for (std::size_t q : qubits) {
        p.set(q, pauli);
    }
    return p;
}

char PauliString::at(std::size_t q) const {
    bool x = xs.get(q);
    bool z = zs.get(q);
    if (x && z) {
        return 'Y';
    }
    if (x) {
        return 'X';
    }
    if (z) {
        return 'Z';
    }
    return '_';
}

void PauliString::set(std::size_t q, char pauli) {
    switch (pauli) {
        case '_':
        case 'I':
            xs.set(q, false);
            zs.set(q, false);
            break;
        case 'X':
            xs.set(q, true);
            zs.set(q, false);
            break;
        case 'Y':
            xs.set(q, true);
            zs.set(q, true);
            break;
        case 'Z':
            xs.set(q, false);
            zs.set(q, true);
            break;
        default:
            throw std::invalid_argument(std::string("not a Pauli: ") + pauli);
    }
}

PauliString& PauliString::operator*=(const PauliString& rhs) {
    if (rhs.num_qubits() != num_qubits()) {
        throw std::invalid_argument("Pauli size mismatch");
    }
    uint8_t log_i = mul_words_log_i(xs.data(), zs.data(), rhs.xs.data(), rhs.zs.data(), xs.num_words());
    phase = static_cast<uint8_t>((phase + rhs.phase + log_i) & 3);
    return *this;
}

bool PauliString::commutes(const PauliString& other) const {
    uint64_t acc = 0;
    for (std::size_t k = 0; k < xs.num_words(); k++) {
        acc ^= (xs.word(k) & other.zs.word(k)) ^ (zs.word(k) & other.xs.word(k));
    }
    return (std::popcount(acc) & 1) == 0;
}

std::size_t PauliString::weight() const {
    std::size_t w = 0;
    for (std::size_t k = 0; k < xs.num_words(); k++) {
        w += std::popcount(xs.word(k) | zs.word(k));
    }
    return w;
}

std::string PauliString::str() const {
    static const char* kPrefix[4] = {"+", "+i", "-", "-i"};
    std::string out = kPrefix[phase & 3];
    for (std::size_t q = 0; q < num_qubits(); q++) {
        out += at(q);
    }
    return out;
}

}  // namespace spoqc
