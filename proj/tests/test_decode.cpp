#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "spoqc/codes.hpp"
#include "spoqc/decode.hpp"
#include "spoqc/frames.hpp"

using namespace spoqc;

namespace {

// Exact minimum total weight by subset DP over all-pairs shortest paths.
double brute_force_weight(const MatchingGraph& g, const std::vector<uint32_t>& defects) {
    const std::size_t nn = g.num_detectors() + 1;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(nn, std::vector<double>(nn, inf));
    for (std::size_t v = 0; v < nn; v++) {
        d[v][v] = 0;
    }
    for (const auto& e : g.edges()) {
        d[e.a][e.b] = std::min(d[e.a][e.b], e.weight);
        d[e.b][e.a] = std::min(d[e.b][e.a], e.weight);
    }
    // Paths may not pass through the boundary node.
    for (std::size_t k = 0; k + 1 < nn; k++) {
        for (std::size_t i = 0; i < nn; i++) {
            for (std::size_t j = 0; j < nn; j++) {
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
            }
        }
    }
    const std::size_t n = defects.size();
    std::vector<double> best(std::size_t{1} << n, inf);
    best[0] = 0;
    for (std::size_t mask = 1; mask < best.size(); mask++) {
        std::size_t i = static_cast<std::size_t>(std::countr_zero(mask));
        std::size_t rest = mask & ~(std::size_t{1} << i);
        best[mask] = std::min(best[mask], best[rest] + d[defects[i]][g.boundary()]);
        for (std::size_t j = i + 1; j < n; j++) {
            if ((rest >> j) & 1) {
                best[mask] = std::min(best[mask], best[rest & ~(std::size_t{1} << j)] + d[defects[i]][defects[j]]);
            }
        }
    }
    return best.back();
}

Circuit noisy_instance(const CodeSpec& spec, double dist, double ratio) {
    NoiseModel nm;
    nm.distinguishability = dist;
    nm.decoherence_ratio = ratio;
    nm.flavor = spec.flavor;
    return apply_pauli_noise(lower_ideal(build_code(spec)), nm);
}

}  // namespace

TEST(Matching, BlossomMatchesBruteForce) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; trial++) {
        const std::size_t n = 2 * (1 + rng() % 6);
        std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, -1));
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = i + 1; j < n; j++) {
                w[i][j] = w[j][i] = static_cast<int64_t>(rng() % 20);
            }
        }
        std::vector<int> mate = min_weight_perfect_matching(w);
        int64_t got = 0;
        for (std::size_t i = 0; i < n; i++) {
            ASSERT_EQ(mate[mate[i]], static_cast<int>(i));
            if (static_cast<std::size_t>(mate[i]) > i) {
                got += w[i][mate[i]];
            }
        }
        std::vector<int64_t> best(std::size_t{1} << n, std::numeric_limits<int64_t>::max() / 2);
        best[0] = 0;
        for (std::size_t mask = 1; mask < best.size(); mask++) {
            if (std::popcount(mask) % 2) {
                continue;
            }
            std::size_t i = static_cast<std::size_t>(std::countr_zero(mask));
            for (std::size_t j = i + 1; j < n; j++) {
                if ((mask >> j) & 1) {
                    best[mask] = std::min(best[mask], best[mask & ~(std::size_t{1} << i) & ~(std::size_t{1} << j)] + w[i][j]);
                }
            }
        }
        ASSERT_EQ(got, best.back()) << "trial " << trial;
    }
}

TEST(Matching, DecoderIsMinimumWeightOnRandomGraphs) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; trial++) {
        const uint32_t nd = 6 + rng() % 10;
        MatchingGraph g(nd);
        for (uint32_t v = 0; v + 1 < nd; v++) {
            g.add_edge(v, v + 1, 0.01 + 0.3 * (rng() % 100) / 100.0, rng() % 2);
        }
        for (int k = 0; k < 8; k++) {
            uint32_t a = rng() % nd;
            uint32_t b = rng() % (nd + 1);
            if (a != b) {
                double p = (rng() % 5 == 0) ? 0.5 : 0.01 + 0.3 * (rng() % 100) / 100.0;
                g.add_edge(a, b, p, rng() % 2);
            }
        }
        g.add_edge(0, g.boundary(), 0.1, 0);
        std::vector<uint32_t> all(nd);
        for (uint32_t v = 0; v < nd; v++) {
            all[v] = v;
        }
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<uint32_t> defects(all.begin(), all.begin() + std::min<std::size_t>(nd, 1 + rng() % 12));
        std::sort(defects.begin(), defects.end());
        Decoding dec = mwpm_decode(g, defects);
        ASSERT_NEAR(dec.weight, brute_force_weight(g, defects), 1e-4) << "trial " << trial;

        // The correction reproduces exactly the defect set.
        std::vector<int> deg(nd + 1, 0);
        uint64_t obs = 0;
        double w = 0;
        for (uint32_t e : dec.correction_edges) {
            deg[g.edges()[e].a] ^= 1;
            deg[g.edges()[e].b] ^= 1;
            obs ^= g.edges()[e].observables;
            w += g.edges()[e].weight;
        }
        for (uint32_t v = 0; v < nd; v++) {
            ASSERT_EQ(deg[v], std::binary_search(defects.begin(), defects.end(), v) ? 1 : 0);
        }
        ASSERT_EQ(obs, dec.observables);
        ASSERT_LE(w, dec.weight + 1e-9);
    }
}

TEST(Matching, OddDefectsWithoutBoundaryThrow) {
    MatchingGraph g(3);
    g.add_edge(0, 1, 0.1, 0);
    g.add_edge(1, 2, 0.1, 0);
    EXPECT_THROW(mwpm_decode(g, {0, 1, 2}), std::runtime_error);
    EXPECT_EQ(mwpm_decode(g, {0, 2}).correction_edges.size(), 2u);
}

TEST(Matching, EdgeWeights) {
    EXPECT_NEAR(edge_weight(0.1), std::log(9.0), 1e-12);
    EXPECT_EQ(edge_weight(0.5), 0.0);
    EXPECT_EQ(edge_weight(0.7), 0.0);
}

TEST(Dem, SimpleRepetition) {
    Circuit c = parse_circuit(
        "R 0 1 2\n"
        "X_ERROR(0.1) 0 1 2\n"
        "M 0 1 2\n"
        "DETECTOR rec[-3] rec[-2]\n"
        "DETECTOR rec[-2] rec[-1]\n"
        "OBSERVABLE_INCLUDE(0) rec[-1]\n");
    DetectorErrorModel dem = build_dem(c);
    EXPECT_EQ(dem.str(), "error(0.1) D0\nerror(0.1) D0 D1\nerror(0.1) D1 L0\n");
    DetectorErrorModel back = parse_dem(dem.str());
    EXPECT_EQ(back.str(), dem.str());
    EXPECT_EQ(back.num_detectors, 2u);
    EXPECT_EQ(back.num_observables, 1u);
}

TEST(Dem, MergesEquivalentErrors) {
    Circuit c = parse_circuit("R 0\nX_ERROR(0.1) 0\nX_ERROR(0.2) 0\nM 0\nDETECTOR rec[-1]\n");
    DetectorErrorModel dem = build_dem(c);
    ASSERT_EQ(dem.errors.size(), 1u);
    EXPECT_NEAR(dem.errors[0].probability, 0.1 * 0.8 + 0.2 * 0.9, 1e-15);
}

TEST(Dem, NoiselessIsEmpty) {
    Circuit c = lower_ideal(build_code({Family::SurfaceCZ, 3, 0, Flavor::SPOQC}));
    EXPECT_TRUE(build_dem(c).errors.empty());
}

TEST(Dem, DephasingPairComponents) {
    for (double p : {0.01, 0.2, 1.0}) {
        double r = dph2_component_probability(p);
        // Net ZI: exactly one of {ZI, ZZ} fires and IZ matches ZZ.
        double zi = 0;
        for (int mask = 0; mask < 8; mask++) {
            int a = mask & 1, b = (mask >> 1) & 1, cc = (mask >> 2) & 1;
            double pr = (a ? r : 1 - r) * (b ? r : 1 - r) * (cc ? r : 1 - r);
            if ((a ^ cc) == 1 && (b ^ cc) == 0) {
                zi += pr;
            }
        }
        EXPECT_NEAR(zi, p / 4, 1e-12);
    }
    Circuit c = parse_circuit("RX 0 1\nDPH2(0.2) 0 1\nMX 0 1\nDETECTOR rec[-2]\nDETECTOR rec[-1]\n");
    DetectorErrorModel dem = build_dem(c);
    ASSERT_EQ(dem.errors.size(), 3u);
    for (const auto& e : dem.errors) {
        EXPECT_NEAR(e.probability, dph2_component_probability(0.2), 1e-15);
    }
}

TEST(Dem, DecomposesIntoKnownParts) {
    std::vector<Symptom> known = {{{0, 1}, 0}, {{2, 3}, 1}, {{2}, 0}};
    std::vector<Symptom> parts = decompose({{0, 1, 2, 3}, 1}, known);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0], (Symptom{{0, 1}, 0}));
    EXPECT_EQ(parts[1], (Symptom{{2, 3}, 1}));
    EXPECT_THROW(decompose({{0, 4, 5}, 0}, known), DecompositionError);
}

TEST(Dem, CodeModelsAreGraphlike) {
    for (CodeSpec spec : {CodeSpec{Family::SurfaceCZ, 3, 0, Flavor::SPOQC}, CodeSpec{Family::Honeycomb, 2, 0, Flavor::SPOQC},
                          CodeSpec{Family::Honeycomb, 2, 0, Flavor::SPOQC2}}) {
        DetectorErrorModel dem = build_dem(noisy_instance(spec, 0.01, 0.001));
        for (const auto& e : dem.errors) {
            for (const Symptom& s : e.parts) {
                EXPECT_LE(s.detectors.size(), 2u);
            }
        }
    }
}

TEST(Dem, GraphDistance) {
    EXPECT_EQ(estimate_graph_distance(build_dem(noisy_instance({Family::SurfaceCZ, 3, 0, Flavor::SPOQC}, 0.01, 0.001))), 3u);
    EXPECT_EQ(estimate_graph_distance(build_dem(noisy_instance({Family::SurfaceCZ, 5, 0, Flavor::SPOQC}, 0.01, 0.001))), 5u);
    std::size_t prev = 0;
    for (int L : {2, 3, 4}) {
        std::size_t d = estimate_graph_distance(build_dem(noisy_instance({Family::Honeycomb, L, 0, Flavor::SPOQC2}, 0.01, 0.001)));
        EXPECT_GT(d, prev);
        prev = d;
    }
}

TEST(Erasure, ClassifierExamples) {
    // Observable-only combination is undetectable.
    EXPECT_EQ(classify_symptoms({{{0, 1}, 1}, {{0, 1}, 0}}, 2), 0.5);
    EXPECT_EQ(classify_symptoms({{{}, 1}}, 2), 0.5);
    EXPECT_EQ(classify_symptoms({{{0, 1}, 1}, {{1}, 0}}, 2), 0.0);
    EXPECT_EQ(classify_symptoms({}, 2), 0.0);
    // A loop of three edges carrying odd total observable parity.
    EXPECT_EQ(classify_symptoms({{{0, 1}, 1}, {{1, 2}, 0}, {{0, 2}, 0}}, 3), 0.5);
}

TEST(Erasure, FastPathMatchesLoweredInstances) {
    for (CodeSpec spec : {CodeSpec{Family::SurfaceCZ, 3, 0, Flavor::SPOQC}, CodeSpec{Family::Honeycomb, 2, 0, Flavor::SPOQC2},
                          CodeSpec{Family::Honeycomb, 2, 0, Flavor::SPOQC}}) {
        auto base = std::make_shared<const Circuit>(build_code(spec));
        ErasureDecoder ed(*base);
        NoiseModel nm;
        nm.erasure = 0.06;
        nm.flavor = spec.flavor;
        for (uint64_t seed = 0; seed < 12; seed++) {
            ErasureInstance inst = sample_instance(base, nm, seed);
            double cls = classify_erasure_instance(inst);
            ErasureDecoder::InstanceResult fast = ed.run(inst.coins, 640, seed);
            ASSERT_EQ(fast.classified, cls);

            // Slow path: frames on the lowered instance, zero-weight matching.
            MatchingGraph g = ed.instance_graph(inst.coins);
            SampleResult s = sample(inst.lowered, 640, seed);
            std::size_t wrong = 0;
            for (std::size_t shot = 0; shot < 640; shot++) {
                std::vector<uint32_t> defects;
                for (uint32_t d = 0; d < s.detectors.rows; d++) {
                    if (s.detectors.get(d, shot)) {
                        defects.push_back(d);
                    }
                }
                wrong += mwpm_decode(g, defects).observables != static_cast<uint64_t>(s.observables.get(0, shot));
            }
            if (cls == 0) {
                EXPECT_EQ(wrong, 0u);
                EXPECT_EQ(fast.mismatches, 0u);
            } else {
                EXPECT_NEAR(wrong / 640.0, 0.5, 0.1);
                EXPECT_NEAR(fast.mismatches / 640.0, 0.5, 0.1);
            }
        }
    }
}
