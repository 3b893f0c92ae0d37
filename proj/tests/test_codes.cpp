#include <gtest/gtest.h>

#include <set>

#include "spoqc/codes.hpp"
#include "spoqc/tableau.hpp"

using namespace spoqc;

namespace {

std::vector<uint8_t> parities(const std::vector<std::vector<std::size_t>>& sets, const MeasurementRecord& r) {
    std::vector<uint8_t> out;
    for (const auto& s : sets) {
        uint8_t v = 0;
        for (std::size_t m : s) {
            v ^= r.outcomes[m];
        }
        out.push_back(v);
    }
    return out;
}

std::vector<CodeSpec> all_specs() {
    std::vector<CodeSpec> out;
    for (int L : {2, 3}) {
        for (Flavor f : {Flavor::SPOQC2, Flavor::SPOQC}) {
            out.push_back({Family::Honeycomb, L, 0, f});
        }
    }
    out.push_back({Family::SurfaceCZ, 3, 0, Flavor::SPOQC});
    out.push_back({Family::SurfaceCZ, 5, 0, Flavor::SPOQC});
    return out;
}

}  // namespace

TEST(Codes, NoiselessDetectorsAreZero) {
    for (const CodeSpec& spec : all_specs()) {
        Circuit c = build_code(spec);
        Circuit ideal = lower_ideal(c);
        Annotations ann = collect_annotations(ideal);
        ASSERT_FALSE(ann.detectors.empty());
        ASSERT_EQ(ann.observables.size(), 1u);
        std::vector<uint8_t> first_obs;
        for (uint64_t seed = 0; seed < 40; seed++) {
            MeasurementRecord r = run(ideal, seed);
            for (uint8_t d : parities(ann.detectors, r)) {
                ASSERT_EQ(d, 0) << family_name(spec.family) << " " << spec.size;
            }
            std::vector<uint8_t> obs = parities(ann.observables, r);
            if (seed == 0) {
                first_obs = obs;
            }
            ASSERT_EQ(obs, first_obs);
        }
    }
}

TEST(Codes, SurfaceDetectorCount) {
    // d^2-1 checks per round; the first-round Z checks are random and the
    // final readout completes only the X checks.
    for (int d : {3, 5}) {
        Circuit c = build_code({Family::SurfaceCZ, d, 0, Flavor::SPOQC});
        int half = (d * d - 1) / 2;
        EXPECT_EQ(c.detector_count(), static_cast<std::size_t>(half + (d - 1) * (d * d - 1) + half));
        EXPECT_EQ(c.qubit_count(), static_cast<uint32_t>(2 * d * d - 1));
    }
}

TEST(Codes, HoneycombFlavorsShareDetectorStructure) {
    for (int L : {2, 3}) {
        Circuit a = build_code({Family::Honeycomb, L, 0, Flavor::SPOQC2});
        Circuit b = build_code({Family::Honeycomb, L, 0, Flavor::SPOQC});
        Annotations aa = collect_annotations(a);
        Annotations bb = collect_annotations(b);
        EXPECT_EQ(aa.detector_coords, bb.detector_coords);
        EXPECT_EQ(a.rus_count() * 2, b.rus_count());
    }
}

TEST(Codes, EachDataQubitInOneCheckPerSubRound) {
    HoneycombLattice lat = make_honeycomb_lattice(3);
    Circuit c = build_code({Family::Honeycomb, 3, 0, Flavor::SPOQC2});
    int sub_rounds = 0;
    for (const Instruction& inst : c.instructions()) {
        if (inst.op != Op::RUS_MZZ) {
            continue;
        }
        sub_rounds++;
        std::set<uint32_t> seen;
        for (const Target& t : inst.targets) {
            EXPECT_TRUE(seen.insert(t.value).second);
        }
        EXPECT_EQ(seen.size(), lat.num_vertices);
    }
    EXPECT_EQ(sub_rounds, default_rounds(Family::Honeycomb, 3));
}

TEST(Codes, SingleErrorsAreDetected) {
    Circuit c = build_code({Family::Honeycomb, 2, 0, Flavor::SPOQC2});
    Circuit ideal = lower_ideal(c);
    Annotations ann = collect_annotations(ideal);
    // Z error on every data qubit right after preparation.
    std::size_t tick = 0;
    while (ideal.instructions()[tick].op != Op::RX) {
        tick++;
    }
    for (uint32_t q = 0; q < 24; q++) {
        Circuit e;
        e.reserve_qubits(ideal.qubit_count());
        for (std::size_t k = 0; k < ideal.instructions().size(); k++) {
            e.append(ideal.instructions()[k]);
            if (k == tick) {
                e.append(Op::Z_ERROR, {q}, {1.0});
            }
        }
        MeasurementRecord r = run(e, 3);
        std::vector<uint8_t> d = parities(ann.detectors, r);
        EXPECT_NE(std::count(d.begin(), d.end(), 1), 0) << q;
    }
}

TEST(Codes, ResourceCounts) {
    for (int L = 2; L <= 10; L++) {
        ResourceCount a = resource_count({Family::Honeycomb, L, 0, Flavor::SPOQC});
        ResourceCount b = resource_count({Family::Honeycomb, L, 0, Flavor::SPOQC2});
        EXPECT_EQ(a.spins * 2, b.spins * 5);
        EXPECT_EQ(a.modules, b.modules * 2);
        EXPECT_EQ(b.spins, static_cast<std::size_t>(6 * L * L));
        EXPECT_EQ(b.modules, static_cast<std::size_t>(9 * L * L));
    }
}

TEST(Codes, DefaultRoundsEndOnXChecks) {
    for (int L = 2; L <= 6; L++) {
        EXPECT_EQ(honeycomb_schedule(default_rounds(Family::Honeycomb, L) - 1), Color::Red);
    }
    EXPECT_EQ(default_rounds(Family::SurfaceCZ, 7), 7);
}

TEST(Codes, RejectsBadSpecs) {
    EXPECT_THROW(build_code({Family::Honeycomb, 2, 4, Flavor::SPOQC2}), std::invalid_argument);
    EXPECT_THROW(build_code({Family::SurfaceCZ, 2, 0, Flavor::SPOQC}), std::invalid_argument);
    EXPECT_THROW(family_from_name("toric"), std::invalid_argument);
}

TEST(Codes, RoundTripThroughText) {
    Circuit c = build_code({Family::SurfaceCZ, 3, 0, Flavor::SPOQC});
    EXPECT_EQ(parse_circuit(print_circuit(c)), c);
}
