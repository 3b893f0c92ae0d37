#include <gtest/gtest.h>

#include <chrono>
#include <numbers>
#include <random>

#include "spoqc/optics.hpp"

using namespace spoqc::optics;

namespace {

const double kPi = std::numbers::pi;

// Frozen reference rows of the amplitude table (columns |00>,|01>,|10>,|11>),
// in the order of two_photon_patterns().
std::vector<std::array<cd, 4>> reference_table(double phi) {
    cd e = std::polar(1.0, phi);
    return {
        {1.0, -1.0, 1.0, -1.0},
        {-1.0, 1.0, -1.0, 1.0},
        {e, e, -e, -e},
        {-e, -e, e, e},
        {0.0, 0.0, 0.0, 0.0},
        {0.0, 0.0, 0.0, 0.0},
        {1.0 + e, 1.0 - e, 1.0 - e, 1.0 + e},
        {1.0 - e, 1.0 + e, 1.0 + e, 1.0 - e},
        {1.0 - e, 1.0 + e, 1.0 + e, 1.0 - e},
        {1.0 + e, 1.0 - e, 1.0 - e, 1.0 + e},
    };
}

// Max entrywise deviation after the best single complex rescaling of `ref`.
double deviation_up_to_scale(const std::array<cd, 4>& got, const std::array<cd, 4>& ref) {
    cd num = 0;
    double den = 0;
    for (int k = 0; k < 4; k++) {
        num += std::conj(ref[k]) * got[k];
        den += std::norm(ref[k]);
    }
    cd scale = den > 0 ? num / den : 0.0;
    double dev = 0;
    for (int k = 0; k < 4; k++) {
        dev = std::max(dev, std::abs(got[k] - scale * ref[k]));
    }
    return dev;
}

bool proportional(const std::array<cd, 4>& a, const std::array<cd, 4>& b, double tol = 1e-12) {
    cd inner = 0;
    double na = 0;
    double nb = 0;
    for (int k = 0; k < 4; k++) {
        inner += std::conj(a[k]) * b[k];
        na += std::norm(a[k]);
        nb += std::norm(b[k]);
    }
    return std::abs(std::abs(inner) - std::sqrt(na * nb)) < tol;
}

SpinPairState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0, 1);
    SpinPairState s{{n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}};
    double a = std::sqrt(std::norm(s.alpha) + std::norm(s.beta));
    double b = std::sqrt(std::norm(s.gamma) + std::norm(s.delta));
    s.alpha /= a;
    s.beta /= a;
    s.gamma /= b;
    s.delta /= b;
    return s;
}

}  // namespace

TEST(Optics, InterferometerEntries) {
    Interferometer u0 = build_interferometer(0);
    EXPECT_NEAR(std::abs(u0.matrix(2, 0) - 0.5), 0, 1e-15);
    EXPECT_NEAR(std::abs(u0.matrix(2, 1) + 0.5), 0, 1e-15);
    EXPECT_NEAR(std::abs(u0.matrix(2, 2) - 0.5), 0, 1e-15);
    Interferometer u1 = build_interferometer(kPi / 2);
    EXPECT_NEAR(std::abs(u1.matrix(2, 0) - cd(0, 0.5)), 0, 1e-15);
    for (double phi : {0.0, 0.3, kPi / 2, 2.0, kPi}) {
        Interferometer u = build_interferometer(phi);
        EXPECT_LT((u.matrix * u.matrix.adjoint() - Eigen::Matrix4cd::Identity()).norm(), 1e-12);
    }
}

TEST(Optics, TableMatchesReferenceRows) {
    auto start = std::chrono::steady_clock::now();
    for (double phi : {0.0, kPi / 2, 0.7, 1.9}) {
        Interferometer u = build_interferometer(phi);
        auto ref = reference_table(phi);
        const auto& patterns = two_photon_patterns();
        for (std::size_t i = 0; i < patterns.size(); i++) {
            std::array<cd, 4> got = pattern_coefficients(u, patterns[i]);
            EXPECT_LT(deviation_up_to_scale(got, ref[i]), 1e-9) << patterns[i].str() << " phi=" << phi;
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(secs, 1.0);
}

TEST(Optics, ProbabilitiesSumToOne) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; i++) {
        SpinPairState s = random_state(rng);
        ASSERT_TRUE(s.normalized());
        double phi = std::uniform_real_distribution<double>(0, 2 * kPi)(rng);
        double total = 0;
        double success = 0;
        for (const AmplitudeRow& r : amplitude_table(s, phi)) {
            total += r.probability();
            if (!r.pattern.bunched()) {
                success += r.probability();
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_NEAR(success, 0.5, 1e-12);
    }
}

TEST(Optics, ImpossiblePatternsVanish) {
    for (double phi : {0.0, kPi / 2}) {
        EXPECT_EQ(classify_pattern({0, 1}, phi).kind, PatternKind::Impossible);
        EXPECT_EQ(classify_pattern({2, 3}, phi).kind, PatternKind::Impossible);
    }
}

TEST(Optics, ClassificationExamples) {
    PatternVerdict v = classify_pattern({0, 0}, 0);
    EXPECT_EQ(v.kind, PatternKind::Repeat);
    EXPECT_EQ(v.correction_str(), "Z_b");
    EXPECT_EQ(classify_pattern({1, 1}, 0).correction_str(), "Z_b");
    EXPECT_EQ(classify_pattern({2, 2}, kPi / 2).correction_str(), "Z_a");
    EXPECT_EQ(classify_pattern({3, 3}, kPi / 2).correction_str(), "Z_a");

    v = classify_pattern({0, 3}, 0);
    EXPECT_EQ(v.kind, PatternKind::Success);
    EXPECT_EQ(v.zz_eigenvalue, -1);
    EXPECT_EQ(classify_pattern({1, 3}, 0).zz_eigenvalue, +1);

    v = classify_pattern({1, 2}, kPi / 2);
    EXPECT_EQ(v.kind, PatternKind::Success);
    EXPECT_EQ(v.correction_str(), "S_DAG_a S_DAG_b");
    EXPECT_EQ(classify_pattern({0, 3}, kPi / 2).correction_str(), "S_DAG_a S_DAG_b");
    EXPECT_EQ(classify_pattern({0, 2}, kPi / 2).correction_str(), "S_a S_b");
    EXPECT_EQ(classify_pattern({1, 3}, kPi / 2).correction_str(), "S_a S_b");

    EXPECT_EQ(classify_pattern(Pattern::lost(), 0).kind, PatternKind::Erasure);
    EXPECT_THROW(classify_pattern({0, 2}, 1.0), std::invalid_argument);
}

TEST(Optics, CorrectionsYieldTargetOperation) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; i++) {
        SpinPairState s = random_state(rng);
        std::array<cd, 4> in = s.product();
        std::array<cd, 4> cz = in;
        cz[3] = -cz[3];
        std::array<cd, 4> phi_plus = {in[0], 0.0, 0.0, in[3]};
        std::array<cd, 4> psi_plus = {0.0, in[1], in[2], 0.0};
        for (double phi : {0.0, kPi / 2}) {
            for (const AmplitudeRow& row : amplitude_table(s, phi)) {
                PatternVerdict v = classify_pattern(row.pattern, phi);
                if (v.kind == PatternKind::Impossible) {
                    continue;
                }
                std::array<cd, 4> out = apply_correction(v, row.amplitudes);
                if (v.kind == PatternKind::Repeat) {
                    EXPECT_TRUE(proportional(out, in)) << row.pattern.str();
                } else if (phi == 0) {
                    EXPECT_TRUE(proportional(out, v.zz_eigenvalue > 0 ? phi_plus : psi_plus)) << row.pattern.str();
                } else {
                    EXPECT_TRUE(proportional(out, cz)) << row.pattern.str();
                }
            }
        }
    }
}

TEST(Optics, RusProbabilityValues) {
    RusProbabilities r0 = rus_probabilities(0);
    EXPECT_EQ(r0.p_rus, 0);
    EXPECT_EQ(r0.p_s, 0.5);
    EXPECT_EQ(r0.p_r, 0.5);
    EXPECT_NEAR(rus_probabilities(0.064).p_rus, 0.2205, 5e-5);
    EXPECT_NEAR(rus_probabilities(0.028).p_rus, 0.1047, 5e-5);
    EXPECT_EQ(rus_probabilities(1).p_rus, 1);
    for (double eps : {0.0, 0.02, 0.064, 0.3, 0.9}) {
        RusProbabilities r = rus_probabilities(eps);
        EXPECT_NEAR(r.p_s + r.p_r + r.p_e, 1, 1e-15);
        double series = 0;
        double pow = 1;
        for (int n = 0; n < 200; n++) {
            series += r.p_e * pow;
            pow *= r.p_r;
        }
        EXPECT_NEAR(series, r.p_rus, 1e-12);
        EXPECT_NEAR(epsilon_for_prus(r.p_rus), eps, 1e-12);
    }
}

TEST(Optics, RusMonteCarloMachine) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 1);
    for (double eps : {0.02, 0.064, 0.2}) {
        const int trials = 100000;
        int failures = 0;
        for (int t = 0; t < trials; t++) {
            SpinPairState s = random_state(rng);
            double phi = (t % 2) ? kPi / 2 : 0.0;
            for (;;) {
                if (u(rng) < eps || u(rng) < eps) {
                    failures++;
                    break;
                }
                std::vector<AmplitudeRow> rows = amplitude_table(s, phi);
                double x = u(rng);
                PatternKind kind = PatternKind::Impossible;
                for (const AmplitudeRow& r : rows) {
                    x -= r.probability();
                    if (x < 0) {
                        kind = classify_pattern(r.pattern, phi).kind;
                        break;
                    }
                }
                if (kind == PatternKind::Success) {
                    break;
                }
                ASSERT_NE(kind, PatternKind::Impossible);
            }
        }
        double p = rus_probabilities(eps).p_rus;
        double sigma = std::sqrt(p * (1 - p) / trials);
        EXPECT_NEAR(static_cast<double>(failures) / trials, p, 3 * sigma) << eps;
    }
}

TEST(Optics, DecoherenceFlipProbability) {
    EXPECT_EQ(decoherence_pz(0), 0);
    EXPECT_GT(decoherence_pz(50), 0.499999);
    EXPECT_NEAR(decoherence_pz(0.023), 0.011369, 5e-7);
    EXPECT_THROW(decoherence_pz(-1), std::invalid_argument);
}

TEST(Optics, CsvHasOneRowPerPattern) {
    std::string csv = amplitude_table_csv(kPi / 2);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
    EXPECT_NE(csv.find("S_a S_b"), std::string::npos);
}
