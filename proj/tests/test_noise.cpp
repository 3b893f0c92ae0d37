#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "spoqc/noise.hpp"
#include "spoqc/rng.hpp"

using namespace spoqc;
using Mat4 = Eigen::Matrix4cd;
using cd = std::complex<double>;

namespace {

// Basis index = bit(qubit 0) + 2 * bit(qubit 1).
Mat4 pauli2(const PauliString& p) {
    Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd X, Y, Z;
    X << 0, 1, 1, 0;
    Y << 0, cd(0, -1), cd(0, 1), 0;
    Z << 1, 0, 0, -1;
    auto one = [&](char c) -> Eigen::Matrix2cd { return c == 'X' ? X : c == 'Y' ? Y : c == 'Z' ? Z : I; };
    Eigen::Matrix2cd a = one(p.at(0));
    Eigen::Matrix2cd b = one(p.at(1));
    Mat4 m;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            m(i, j) = a(i & 1, j & 1) * b(i >> 1, j >> 1);
        }
    }
    return m;
}

Mat4 cz_matrix() {
    Mat4 m = Mat4::Identity();
    m(3, 3) = -1;
    return m;
}

Mat4 random_density(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat4 a;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            a(i, j) = cd(g(rng), g(rng));
        }
    }
    Mat4 rho = a * a.adjoint();
    return rho / rho.trace();
}

Mat4 apply_paulis(const std::vector<std::pair<double, PauliString>>& ch, const Mat4& rho) {
    Mat4 out = Mat4::Zero();
    for (const auto& [p, P] : ch) {
        Mat4 m = pauli2(P);
        out += p * m * rho * m.adjoint();
    }
    return out;
}

double trace_distance(const Mat4& a, const Mat4& b) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(a - b);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST(Noise, ErasedCzChannelDropsTheGate) {
    std::mt19937_64 rng(11);
    EffectiveChannel ch = effective_channel(LoweringCase::CzErased);
    ASSERT_EQ(ch.ideal, Op::CZ);
    Mat4 cz = cz_matrix();
    for (int t = 0; t < 100; t++) {
        Mat4 rho = random_density(rng);
        Mat4 dephased = apply_paulis(ch.paulis, rho);
        Mat4 with_cz = cz * dephased * cz.adjoint();
        EXPECT_LT(trace_distance(with_cz, dephased), 1e-12);
        // The dephased state is diagonal.
        for (int i = 0; i < 4; i++) {
            for (int j = 0; j < 4; j++) {
                if (i != j) {
                    EXPECT_LT(std::abs(dephased(i, j)), 1e-12);
                }
            }
        }
    }
}

TEST(Noise, SuccessCasesAreIdeal) {
    for (LoweringCase c : {LoweringCase::CzSuccess, LoweringCase::MzzSuccess}) {
        EffectiveChannel ch = effective_channel(c);
        ASSERT_EQ(ch.paulis.size(), 1u);
        EXPECT_EQ(ch.paulis[0].second.weight(), 0u);
    }
}

TEST(Noise, ErasedPairMeasurementKeepsStatistics) {
    std::mt19937_64 rng(12);
    struct Case {
        LoweringCase lc;
        const char* op;
    };
    for (Case c : {Case{LoweringCase::MzzErased, "ZZ"}, Case{LoweringCase::MxxErased, "XX"},
                   Case{LoweringCase::MyyErased, "YY"}}) {
        EffectiveChannel ch = effective_channel(c.lc);
        Mat4 P = pauli2(PauliString::from_string(c.op));
        Mat4 proj = (Mat4::Identity() + P) / 2.0;
        for (int t = 0; t < 100; t++) {
            Mat4 rho = random_density(rng);
            double before = (proj * rho).trace().real();
            double after = (proj * apply_paulis(ch.paulis, rho)).trace().real();
            EXPECT_NEAR(before, after, 1e-12);
        }
    }
}

TEST(Noise, LoweringRules) {
    Circuit c = parse_circuit("RX 0 1 2 3\nRUS_CZ 0 1 2 3\nRUS_MZZ 0 1\nRUS_MXX 2 3\nRUS_MYY 0 3\n");
    ASSERT_EQ(c.rus_count(), 5u);
    EXPECT_EQ(print_circuit(lower_ideal(c)), "RX 0 1 2 3\nCZ 0 1 2 3\nMZZ 0 1\nMXX 2 3\nMYY 0 3\n");
    LoweredCircuit all = lower(c, {1, 0, 1, 1, 1});
    EXPECT_EQ(print_circuit(all.circuit),
              "RX 0 1 2 3\nCZ 0 1 2 3\nZ_ERROR(0.5) 0 1\nZ_ERROR(0.5) 0 1\nMZZ 0 1\nX_ERROR(0.5) 2 3\nMXX 2 3\n"
              "Y_ERROR(0.5) 0 3\nMYY 0 3\n");
    ASSERT_EQ(all.sites.size(), 4u);
    EXPECT_EQ(all.site_coin, (std::vector<std::size_t>{0, 2, 3, 4}));
    EXPECT_EQ(all.sites[3].pauli, 'Y');
    EXPECT_EQ(all.circuit.level(), CircuitLevel::Instance);
    EXPECT_THROW(lower(c, {1, 0}), std::invalid_argument);
}

TEST(Noise, InstanceSamplingIsSeededAndUnbiased) {
    std::string text = "RX 0 1\n";
    for (int k = 0; k < 10000; k++) {
        text += "RUS_MZZ 0 1\n";
    }
    auto c = std::make_shared<const Circuit>(parse_circuit(text));
    NoiseModel nm;
    nm.erasure = 0.22;
    ErasureInstance a = sample_instance(c, nm, 99);
    ErasureInstance b = sample_instance(c, nm, 99);
    EXPECT_EQ(a.coins, b.coins);
    EXPECT_EQ(a.lowered, b.lowered);
    double frac = static_cast<double>(a.erased_ids.size()) / 10000;
    EXPECT_LT(std::abs(frac - 0.22), 3 * std::sqrt(0.22 * 0.78 / 10000));
    nm.erasure = 0;
    ErasureInstance z = sample_instance(c, nm, 99);
    EXPECT_TRUE(z.erased_ids.empty());
    EXPECT_EQ(z.lowered, lower_ideal(*c));
}

TEST(Noise, EpsilonInputConvertsToPRus) {
    NoiseModel nm;
    nm.erasure_input = NoiseModel::ErasureInput::Epsilon;
    nm.erasure = 0.064;
    EXPECT_NEAR(nm.p_rus(), 0.2205, 5e-4);
}

TEST(Noise, CzCheckSurvivalProbability) {
    // Two RUS_CZ per SPOQC edge check: both succeed with probability (1 - p)^2.
    const double p = 0.2;
    const int trials = 100000;
    int ok = 0;
    for (int t = 0; t < trials; t++) {
        std::vector<uint8_t> coins = sample_coins(2, p, derive_seed(5, stream_tag::kInstance, t));
        ok += !coins[0] && !coins[1];
    }
    double q = (1 - p) * (1 - p);
    EXPECT_LT(std::abs(static_cast<double>(ok) / trials - q), 3 * std::sqrt(q * (1 - q) / trials));
}

TEST(Noise, PauliNoiseInsertion) {
    Circuit c = parse_circuit("RX 0 1 2 3 4\nRUS_MZZ 0 1 2 3\nTICK\nMX 0 1 2 3 4\n");
    NoiseModel nm;
    EXPECT_EQ(apply_pauli_noise(c, nm), c);
    nm.decoherence_ratio = 0.023;
    Circuit dec = apply_pauli_noise(c, nm);
    int z_inserts = 0;
    for (const auto& inst : dec.instructions()) {
        if (inst.op == Op::Z_ERROR) {
            z_inserts += static_cast<int>(inst.targets.size());
            EXPECT_NEAR(inst.args[0], 0.011369, 5e-7);
        }
    }
    EXPECT_EQ(z_inserts, 5);
    nm.decoherence_ratio = 0;
    nm.distinguishability = 0.02;
    Circuit dph = apply_pauli_noise(c, nm);
    EXPECT_EQ(print_circuit(dph), "RX 0 1 2 3 4\nRUS_MZZ 0 1 2 3\nDPH2(0.02) 0 1 2 3\nTICK\nMX 0 1 2 3 4\n");
    Circuit inst = apply_pauli_noise(lower_ideal(c), nm);
    EXPECT_NE(print_circuit(inst).find("MZZ 0 1 2 3\nDPH2(0.02) 0 1 2 3\n"), std::string::npos);
}

TEST(Noise, Dph2MarginalChannel) {
    // Activation D then uniform over {II, ZI, IZ, ZZ}.
    const double D = 0.1;
    Rng rng(3);
    int counts[4] = {0, 0, 0, 0};
    const int trials = 200000;
    for (int t = 0; t < trials; t++) {
        int k = 0;
        if (rng.coin(D)) {
            k = rng.bit() + 2 * rng.bit();
        }
        counts[k]++;
    }
    const double expect[4] = {1 - 3 * D / 4, D / 4, D / 4, D / 4};
    for (int k = 0; k < 4; k++) {
        double f = static_cast<double>(counts[k]) / trials;
        EXPECT_LT(std::abs(f - expect[k]), 4 * std::sqrt(expect[k] * (1 - expect[k]) / trials));
    }
}

TEST(Noise, ValidationAndFlavors) {
    NoiseModel nm;
    nm.erasure = 1.5;
    EXPECT_THROW(nm.validate(), std::invalid_argument);
    EXPECT_EQ(flavor_from_name("spoqc"), Flavor::SPOQC);
    EXPECT_EQ(flavor_from_name("spoqc2"), Flavor::SPOQC2);
    EXPECT_EQ(flavor_name(Flavor::SPOQC2), "spoqc2");
    EXPECT_THROW(flavor_from_name("fbqc"), std::invalid_argument);
}
