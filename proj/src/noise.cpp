#include "spoqc/noise.hpp"

#include <stdexcept>

#include "spoqc/optics.hpp"
#include "spoqc/rng.hpp"

namespace spoqc {

std::string flavor_name(Flavor f) { return f == Flavor::SPOQC ? "spoqc" : "spoqc2"; }

Flavor flavor_from_name(const std::string& s) {
    if (s == "spoqc") {
        return Flavor::SPOQC;
    }
    if (s == "spoqc2" || s == "spoqc-2") {
        return Flavor::SPOQC2;
    }
    throw std::invalid_argument("unknown flavor: " + s);
}

double NoiseModel::p_rus() const {
    return erasure_input == ErasureInput::PRus ? erasure : optics::rus_probabilities(erasure).p_rus;
}

double NoiseModel::p_z() const { return optics::decoherence_pz(decoherence_ratio); }

void NoiseModel::validate() const {
    if (!(erasure >= 0 && erasure <= 1)) {
        throw std::invalid_argument("erasure parameter must lie in [0,1]");
    }
    if (!(distinguishability >= 0 && distinguishability <= 1)) {
        throw std::invalid_argument("D must lie in [0,1]");
    }
    if (!(decoherence_ratio >= 0)) {
        throw std::invalid_argument("t_RUS/T2 must be non-negative");
    }
}

namespace {

Op bare_op(Op op) {
    switch (op) {
        case Op::RUS_CZ:
            return Op::CZ;
        case Op::RUS_MZZ:
            return Op::MZZ;
        case Op::RUS_MXX:
            return Op::MXX;
        case Op::RUS_MYY:
            return Op::MYY;
        default:
            return op;
    }
}

char erasure_pauli(Op op) {
    switch (op) {
        case Op::RUS_MXX:
            return 'X';
        case Op::RUS_MYY:
            return 'Y';
        default:
            return 'Z';
    }
}

Op error_op(char pauli) { return pauli == 'X' ? Op::X_ERROR : pauli == 'Y' ? Op::Y_ERROR : Op::Z_ERROR; }

}  // namespace

LoweredCircuit lower(const Circuit& c, const std::vector<uint8_t>& coins) {
    if (coins.size() != c.rus_count()) {
        throw std::invalid_argument("need one coin per RUS operation");
    }
    LoweredCircuit out;
    out.circuit.reserve_qubits(c.qubit_count());
    std::size_t k = 0;
    for (const Instruction& inst : c.instructions()) {
        if (!is_rus(inst.op)) {
            out.circuit.append(inst);
            continue;
        }
        Instruction bare{bare_op(inst.op), {}, inst.targets};
        Instruction err{error_op(erasure_pauli(inst.op)), {0.5}, {}};
        std::vector<std::pair<uint32_t, uint32_t>> erased;
        std::vector<std::size_t> erased_coin;
        for (std::size_t t = 0; t + 1 < inst.targets.size(); t += 2, k++) {
            if (coins[k]) {
                erased.push_back({inst.targets[t].value, inst.targets[t + 1].value});
                erased_coin.push_back(k);
                err.targets.push_back(inst.targets[t]);
                err.targets.push_back(inst.targets[t + 1]);
            }
        }
        const bool gate = inst.op == Op::RUS_CZ;
        if (gate) {
            out.circuit.append(bare);
        }
        if (!erased.empty()) {
            std::size_t at = out.circuit.instructions().size();
            for (std::size_t e = 0; e < erased.size(); e++) {
                out.sites.push_back({at, erased[e].first, erased[e].second, erasure_pauli(inst.op)});
                out.site_coin.push_back(erased_coin[e]);
            }
            out.circuit.append(err);
        }
        if (!gate) {
            out.circuit.append(bare);
        }
    }
    return out;
}

Circuit lower_ideal(const Circuit& c) { return lower(c, std::vector<uint8_t>(c.rus_count(), 0)).circuit; }

std::vector<uint8_t> sample_coins(std::size_t num_rus, double p_rus, uint64_t seed) {
    Rng rng(seed);
    std::vector<uint8_t> coins(num_rus);
    for (auto& b : coins) {
        b = rng.coin(p_rus);
    }
    return coins;
}

ErasureInstance sample_instance(std::shared_ptr<const Circuit> c, const NoiseModel& nm, uint64_t seed) {
    nm.validate();
    ErasureInstance inst;
    inst.base = c;
    inst.coins = sample_coins(c->rus_count(), nm.p_rus(), seed);
    LoweredCircuit low = lower(*c, inst.coins);
    inst.lowered = std::move(low.circuit);
    inst.sites = std::move(low.sites);
    for (std::size_t k = 0; k < inst.coins.size(); k++) {
        if (inst.coins[k]) {
            inst.erased_ids.push_back(k);
        }
    }
    return inst;
}

Circuit apply_pauli_noise(const Circuit& c, const NoiseModel& nm) {
    nm.validate();
    const double d = nm.distinguishability;
    const double pz = nm.p_z();
    const bool high = c.level() == CircuitLevel::HighLevel;
    Circuit out;
    out.reserve_qubits(c.qubit_count());
    std::vector<uint32_t> all(c.qubit_count());
    for (uint32_t q = 0; q < all.size(); q++) {
        all[q] = q;
    }
    for (const Instruction& inst : c.instructions()) {
        out.append(inst);
        bool site = high ? is_rus(inst.op)
                         : (inst.op == Op::CZ || inst.op == Op::MZZ || inst.op == Op::MXX || inst.op == Op::MYY);
        if (site && d > 0) {
            out.append(Instruction{Op::DPH2, {d}, inst.targets});
        }
        if (inst.op == Op::TICK && pz > 0 && !all.empty()) {
            out.append(Op::Z_ERROR, all, {pz});
        }
    }
    return out;
}

EffectiveChannel effective_channel(LoweringCase c) {
    auto full = [](char p) {
        std::vector<std::pair<double, PauliString>> v;
        const char* s[4] = {"__", "P_", "_P", "PP"};
        for (const char* t : s) {
            std::string str = t;
            for (char& ch : str) {
                if (ch == 'P') {
                    ch = p;
                }
            }
            v.push_back({0.25, PauliString::from_string(str)});
        }
        return v;
    };
    std::vector<std::pair<double, PauliString>> id = {{1.0, PauliString::from_string("__")}};
    switch (c) {
        case LoweringCase::CzSuccess:
            return {id, Op::CZ};
        case LoweringCase::CzErased:
            return {full('Z'), Op::CZ};
        case LoweringCase::MzzSuccess:
            return {id, Op::MZZ};
        case LoweringCase::MzzErased:
            return {full('Z'), Op::MZZ};
        case LoweringCase::MxxErased:
            return {full('X'), Op::MXX};
        case LoweringCase::MyyErased:
            return {full('Y'), Op::MYY};
    }
    throw std::invalid_argument("unknown lowering case");
}

}  // namespace spoqc
