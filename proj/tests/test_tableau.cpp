#include <gtest/gtest.h>

#include <random>

#include "oracle/statevec.hpp"
#include "spoqc/circuit.hpp"
#include "spoqc/tableau.hpp"

using namespace spoqc;

TEST(Tableau, EigenstateMeasurement) {
    MeasurementRecord r = run(parse_circuit("RX 0\nMX 0"), 1);
    ASSERT_EQ(r.outcomes.size(), 1u);
    EXPECT_EQ(r.outcomes[0], 0);
    EXPECT_TRUE(r.deterministic[0]);

    r = run(parse_circuit("R 0\nR 1\nMZZ 0 1"), 1);
    EXPECT_EQ(r.outcomes[0], 0);
    EXPECT_TRUE(r.deterministic[0]);
}

TEST(Tableau, RepeatedPairMeasurement) {
    Circuit c = parse_circuit("RX 0\nRX 1\nMZZ 0 1\nMZZ 0 1");
    int ones = 0;
    for (uint64_t seed = 0; seed < 200; seed++) {
        MeasurementRecord r = run(c, seed);
        EXPECT_FALSE(r.deterministic[0]);
        EXPECT_TRUE(r.deterministic[1]);
        EXPECT_EQ(r.outcomes[0], r.outcomes[1]);
        ones += r.outcomes[0];
    }
    EXPECT_GT(ones, 50);
    EXPECT_LT(ones, 150);
}

TEST(Tableau, MeasureXXOnPlusPlus) {
    Tableau t(2);
    t.h(0);
    t.h(1);
    Tableau::Outcome o = measure_pauli(t, PauliString::from_string("XX"), true);
    EXPECT_TRUE(o.deterministic);
    EXPECT_FALSE(o.value.get(0));
}

TEST(Tableau, ConjugatedPairMeasurementMatchesMYY) {
    // MYY realized as H_YZ conjugation of MZZ gives the same statistics.
    Circuit direct = parse_circuit("RX 0\nR 1\nS 0\nH 1\nMYY 0 1\nMYY 0 1\nMX 0");
    Circuit conj = parse_circuit("RX 0\nR 1\nS 0\nH 1\nH_YZ 0 1\nMZZ 0 1\nH_YZ 0 1\nH_YZ 0 1\nMZZ 0 1\nH_YZ 0 1\nMX 0");
    std::array<int, 8> hist_a{};
    std::array<int, 8> hist_b{};
    for (uint64_t seed = 0; seed < 1000; seed++) {
        MeasurementRecord a = run(direct, seed);
        MeasurementRecord b = run(conj, seed);
        hist_a[a.outcomes[0] | a.outcomes[1] << 1 | a.outcomes[2] << 2]++;
        hist_b[b.outcomes[0] | b.outcomes[1] << 1 | b.outcomes[2] << 2]++;
        EXPECT_EQ(a.deterministic, b.deterministic);
    }
    for (int k = 0; k < 8; k++) {
        // Identical support, and frequencies within binomial noise.
        EXPECT_EQ(hist_a[k] == 0, hist_b[k] == 0) << k;
        EXPECT_NEAR(hist_a[k], hist_b[k], 110) << k;
    }
}

namespace {

Circuit random_small_circuit(std::mt19937_64& rng, std::size_t n) {
    Circuit c;
    c.reserve_qubits(static_cast<uint32_t>(n));
    const Op ops[] = {Op::R,  Op::RX,  Op::H,   Op::H_YZ, Op::S,       Op::S_DAG,   Op::CZ,      Op::M,
                      Op::MX, Op::MZZ, Op::MXX, Op::MYY,  Op::X_ERROR, Op::Y_ERROR, Op::Z_ERROR, Op::DPH2};
    int len = 1 + static_cast<int>(rng() % 30);
    for (int k = 0; k < len; k++) {
        Op op = ops[rng() % std::size(ops)];
        uint32_t a = static_cast<uint32_t>(rng() % n);
        if (is_two_qubit(op)) {
            uint32_t b = static_cast<uint32_t>((a + 1 + rng() % (n - 1)) % n);
            std::vector<double> args;
            if (op == Op::DPH2) {
                args = {1.0};
            }
            c.append(op, {a, b}, args);
        } else if (is_noise(op)) {
            c.append(op, {a}, {static_cast<double>(rng() % 2)});
        } else {
            c.append(op, {a});
        }
    }
    return c;
}

// Replays a circuit on the state vector using the tableau's outcomes and
// checks every outcome's probability. DPH2(1) is replayed via the same coin
// stream the tableau uses, so it is excluded from the comparison circuit.
void check_against_oracle(const Circuit& c, uint64_t seed) {
    MeasurementRecord rec = run(c, seed, true);
    oracle::StateVector sv(c.qubit_count());
    std::size_t m = 0;
    const std::size_t n = c.qubit_count();
    for (const Instruction& inst : c.instructions()) {
        auto q = [&](std::size_t k) { return inst.targets[k].value; };
        switch (inst.op) {
            case Op::H:
                sv.h(q(0));
                break;
            case Op::H_YZ:
                sv.h_yz(q(0));
                break;
            case Op::S:
                sv.s(q(0));
                break;
            case Op::S_DAG:
                sv.s_dag(q(0));
                break;
            case Op::CZ:
                sv.cz(q(0), q(1));
                break;
            case Op::X_ERROR:
                if (inst.args[0] == 1) {
                    sv.x(q(0));
                }
                break;
            case Op::Y_ERROR:
                if (inst.args[0] == 1) {
                    sv.y(q(0));
                }
                break;
            case Op::Z_ERROR:
                if (inst.args[0] == 1) {
                    sv.z(q(0));
                }
                break;
            case Op::R:
            case Op::RX: {
                PauliString p(n);
                p.set(q(0), inst.op == Op::R ? 'Z' : 'X');
                double p1 = sv.prob_one(p);
                bool bit = p1 > 0.5;
                sv.project(p, bit);
                if (bit) {
                    if (inst.op == Op::R) {
                        sv.x(q(0));
                    } else {
                        sv.z(q(0));
                    }
                }
                break;
            }
            case Op::M:
            case Op::MX:
            case Op::MZZ:
            case Op::MXX:
            case Op::MYY: {
                PauliString p(n);
                char b = inst.op == Op::M || inst.op == Op::MZZ ? 'Z' : inst.op == Op::MYY ? 'Y' : 'X';
                p.set(q(0), b);
                if (is_two_qubit(inst.op)) {
                    p.set(q(1), b);
                }
                double p1 = sv.prob_one(p);
                bool bit = rec.outcomes[m];
                if (rec.deterministic[m]) {
                    ASSERT_NEAR(p1, bit ? 1.0 : 0.0, 1e-9);
                } else {
                    ASSERT_NEAR(p1, 0.5, 1e-9);
                }
                sv.project(p, bit);
                m++;
                break;
            }
            default:
                break;
        }
    }
    ASSERT_EQ(m, rec.outcomes.size());
}

}  // namespace

TEST(Tableau, AgreesWithStateVectorOracle) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; i++) {
        std::size_t n = 2 + rng() % 5;
        Circuit c = random_small_circuit(rng, n);
        // DPH2 draws random bits the oracle cannot mirror; drop it here.
        Circuit filtered;
        filtered.reserve_qubits(c.qubit_count());
        for (const Instruction& inst : c.instructions()) {
            if (inst.op != Op::DPH2) {
                filtered.append(inst);
            }
        }
        check_against_oracle(filtered, static_cast<uint64_t>(i));
        if (HasFatalFailure()) {
            FAIL() << print_circuit(filtered);
        }
    }
}

TEST(Tableau, InvariantsAfterEveryInstruction) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; i++) {
        Circuit c = random_small_circuit(rng, 2 + rng() % 5);
        EXPECT_NO_THROW(run(c, static_cast<uint64_t>(i), true));
    }
}

TEST(Tableau, SymbolicTraceMatchesConcreteRuns) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; i++) {
        Circuit c = random_small_circuit(rng, 2 + rng() % 5);
        Circuit noiseless;
        noiseless.reserve_qubits(c.qubit_count());
        for (const Instruction& inst : c.instructions()) {
            if (!is_noise(inst.op)) {
                noiseless.append(inst);
            }
        }
        DeterminismTrace tr = trace_determinism(noiseless, false);
        std::vector<int> random_at(noiseless.measurement_count(), -1);
        for (std::size_t k = 0; k < tr.vars.size(); k++) {
            random_at[tr.vars[k].index] = static_cast<int>(k);
        }
        for (uint64_t seed = 0; seed < 5; seed++) {
            MeasurementRecord r = run(noiseless, seed);
            for (std::size_t m = 0; m < r.outcomes.size(); m++) {
                EXPECT_EQ(random_at[m] < 0, static_cast<bool>(r.deterministic[m]));
                // Evaluate the affine form at the coins this run drew.
                bool v = tr.forms[m].get(0);
                for (std::size_t k = 0; k < tr.vars.size(); k++) {
                    if (tr.forms[m].get(1 + k)) {
                        v ^= static_cast<bool>(r.outcomes[tr.vars[k].index]);
                    }
                }
                EXPECT_EQ(v, static_cast<bool>(r.outcomes[m]));
            }
        }
    }
}

TEST(Tableau, ObservableFrameOnRepetitionMemory) {
    // Three-qubit X memory with XX checks: the logical X0 is read out directly.
    Circuit c = parse_circuit(
        "RX 0 1 2\n"
        "MXX 0 1 1 2\n"
        "MZZ 0 1\n"
        "MXX 0 1\n"
        "MX 0 1 2\n");
    ObservableFrame f = derive_observable_frame(c, PauliString::from_string("XXX"));
    EXPECT_FALSE(f.reference_value);
    DeterminismTrace tr = trace_determinism(c, false);
    EXPECT_TRUE(tr.is_deterministic(tr.parity(f.all_records())));
    EXPECT_FALSE(f.final_readout_records.empty());

    // A Z on the initial support anticommutes with X and is rejected.
    EXPECT_THROW(derive_observable_frame(c, PauliString::from_string("ZII")), ObservableError);
}

TEST(Tableau, ObservableNeedsRecordCompensation) {
    // After MZZ the logical X0 X1 survives only as itself; after the final Z readout
    // of qubit 1 it can only be recovered through the recorded MXX outcome.
    Circuit c = parse_circuit(
        "RX 0 1\n"
        "MXX 0 1\n"
        "M 1\n"
        "MX 0\n");
    ObservableFrame f = derive_observable_frame(c, PauliString::from_string("XX"));
    ASSERT_EQ(f.records.size(), 1u);
    EXPECT_EQ(f.records[0], 0u);
    EXPECT_TRUE(f.final_readout_records.empty());
}
