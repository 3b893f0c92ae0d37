#include "spoqc/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "spoqc/codes.hpp"
#include "spoqc/decode.hpp"
#include "spoqc/frames.hpp"
#include "spoqc/noise.hpp"
#include "spoqc/rng.hpp"

namespace spoqc {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kBenchRepetitions = 3;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Circuit noisy_circuit(const CodeSpec& spec, double decoherence) {
    NoiseModel nm;
    nm.flavor = spec.flavor;
    nm.decoherence_ratio = decoherence;
    return apply_pauli_noise(lower_ideal(build_code(spec)), nm);
}

std::vector<std::vector<uint32_t>> defect_lists(const SampleResult& s) {
    std::vector<std::vector<uint32_t>> out(s.detectors.shots);
    for (std::size_t d = 0; d < s.detectors.rows; d++) {
        for (std::size_t k = 0; k < s.detectors.shots; k++) {
            if (s.detectors.get(d, k)) {
                out[k].push_back(static_cast<uint32_t>(d));
            }
        }
    }
    return out;
}

// Each case returns the number of items it processed.
struct Case {
    std::string name;
    std::function<std::size_t()> body;
};

std::size_t bench_sample_honeycomb() {
    FrameSampler fs(noisy_circuit({Family::Honeycomb, 4, 0, Flavor::SPOQC2}, 0.01));
    constexpr std::size_t kShots = 100000;
    SampleResult r = fs.sample(kShots, 7);
    return r.detectors.shots;
}

// Square grid with one boundary column on each side; about 1000 defects per
// syndrome at this size and rate.
std::size_t bench_mwpm_large() {
    constexpr uint32_t W = 80;
    constexpr double p = 0.05;
    MatchingGraph g(W * W);
    for (uint32_t i = 0; i < W; i++) {
        for (uint32_t j = 0; j < W; j++) {
            uint32_t v = i * W + j;
            if (j + 1 < W) {
                g.add_edge(v, v + 1, p, 0);
            } else {
                g.add_edge(v, g.boundary(), p, 1);
            }
            if (j == 0) {
                g.add_edge(v, g.boundary(), p, 0);
            }
            if (i + 1 < W) {
                g.add_edge(v, v + W, p, 0);
            }
        }
    }
    Rng rng(11);
    std::size_t defects = 0;
    for (int shot = 0; shot < 2; shot++) {
        std::vector<uint8_t> flips(W * W + 1, 0);
        for (const MatchingGraph::Edge& e : g.edges()) {
            if (rng.coin(p)) {
                flips[e.a] ^= 1;
                flips[e.b] ^= 1;
            }
        }
        std::vector<uint32_t> d;
        for (uint32_t v = 0; v < W * W; v++) {
            if (flips[v]) {
                d.push_back(v);
            }
        }
        mwpm_decode(g, d);
        defects += d.size();
    }
    return defects;
}

std::size_t bench_mwpm_surface() {
    Circuit c = noisy_circuit({Family::SurfaceCZ, 7, 0, Flavor::SPOQC}, 0.01);
    MatchingGraph g = MatchingGraph::from_dem(build_dem(c));
    SampleResult s = FrameSampler(c).sample(2000, 3);
    std::vector<std::vector<uint32_t>> defects = defect_lists(s);
    for (const auto& d : defects) {
        mwpm_decode(g, d);
    }
    return defects.size();
}

std::size_t bench_dem_build() {
    Circuit c = noisy_circuit({Family::Honeycomb, 4, 0, Flavor::SPOQC2}, 0.01);
    DetectorErrorModel dem = build_dem(c);
    return dem.errors.size();
}

std::size_t bench_erasure_decode() {
    auto base = std::make_shared<const Circuit>(build_code({Family::Honeycomb, 3, 0, Flavor::SPOQC2}));
    NoiseModel nm;
    nm.erasure = 0.15;
    constexpr std::size_t kInstances = 200;
    for (std::size_t i = 0; i < kInstances; i++) {
        classify_erasure_instance(sample_instance(base, nm, derive_seed(5, stream_tag::kInstance, i)));
    }
    return kInstances;
}

const std::vector<Case>& cases() {
    static const std::vector<Case> all = {
        {"sample_honeycomb_l4", bench_sample_honeycomb},
        {"mwpm_large_syndrome", bench_mwpm_large},
        {"mwpm_surface_d7", bench_mwpm_surface},
        {"dem_build_honeycomb_l4", bench_dem_build},
        {"erasure_classify_l3", bench_erasure_decode},
    };
    return all;
}

}  // namespace

std::string host_class() {
    std::string arch = "unknown";
    utsname u{};
    if (uname(&u) == 0) {
        arch = u.machine;
    }
    return arch + "-" + std::to_string(std::max(1u, std::thread::hardware_concurrency())) + "c";
}

std::vector<std::string> benchmark_names() {
    std::vector<std::string> out;
    for (const Case& c : cases()) {
        out.push_back(c.name);
    }
    return out;
}

Baselines parse_baselines(const std::string& json_text) {
    Baselines out;
    nlohmann::json j = nlohmann::json::parse(json_text);
    for (auto& [host, entries] : j.items()) {
        for (auto& [name, rate] : entries.items()) {
            out[host][name] = rate.get<double>();
        }
    }
    return out;
}

std::string baselines_to_json(const Baselines& b) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [host, entries] : b) {
        for (const auto& [name, rate] : entries) {
            j[host][name] = rate;
        }
    }
    return j.dump(2) + "\n";
}

std::vector<BenchResult> run_benchmarks(const std::vector<std::string>& selection, const Baselines& baselines) {
    std::vector<BenchResult> out;
    const std::string host = host_class();
    auto stored = baselines.find(host);
    for (const std::string& name : selection) {
        auto it = std::find_if(cases().begin(), cases().end(), [&](const Case& c) { return c.name == name; });
        if (it == cases().end()) {
            throw std::invalid_argument("unknown benchmark: " + name);
        }
        // Best of a few repetitions.
        std::size_t items = 0;
        double best = 0;
        for (int rep = 0; rep < kBenchRepetitions; rep++) {
            auto t0 = Clock::now();
            items = it->body();
            double dt = seconds_since(t0);
            best = rep == 0 ? dt : std::min(best, dt);
        }
        BenchResult r;
        r.name = name;
        r.wall_seconds = std::max(best, 1e-9);
        r.items = std::max<std::size_t>(items, 1);
        r.items_per_second = static_cast<double>(r.items) / r.wall_seconds;
        r.host = host;
        if (stored != baselines.end()) {
            auto b = stored->second.find(name);
            if (b != stored->second.end()) {
                r.baseline = b->second;
                r.within_tolerance = r.items_per_second * kBenchTolerance >= b->second;
            }
        }
        out.push_back(r);
    }
    return out;
}

uint64_t decode_digest() {
    Circuit c = noisy_circuit({Family::SurfaceCZ, 3, 0, Flavor::SPOQC}, 0.02);
    MatchingGraph g = MatchingGraph::from_dem(build_dem(c));
    SampleResult s = FrameSampler(c).sample(1024, 99);
    uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& d : defect_lists(s)) {
        h = (h ^ (mwpm_decode(g, d).observables + 1)) * 0x100000001b3ull;
    }
    return h;
}

bool BenchReport::ok() const {
    if (digest_before != digest_after) {
        return false;
    }
    return std::all_of(results.begin(), results.end(), [](const BenchResult& r) { return r.within_tolerance; });
}

BenchReport run_bench_suite(const std::string& filter, const Baselines& baselines) {
    std::vector<std::string> names;
    for (const std::string& n : benchmark_names()) {
        if (filter.empty() || n.find(filter) != std::string::npos) {
            names.push_back(n);
        }
    }
    BenchReport rep;
    rep.digest_before = decode_digest();
    rep.results = run_benchmarks(names, baselines);
    rep.digest_after = decode_digest();
    return rep;
}

std::string bench_json(const BenchReport& report) {
    nlohmann::json j;
    j["host"] = host_class();
    j["tolerance"] = kBenchTolerance;
    j["digest_before"] = report.digest_before;
    j["digest_after"] = report.digest_after;
    j["ok"] = report.ok();
    j["results"] = nlohmann::json::array();
    for (const BenchResult& r : report.results) {
        nlohmann::json e;
        e["name"] = r.name;
        e["items"] = r.items;
        e["items_per_second"] = r.items_per_second;
        e["wall_seconds"] = r.wall_seconds;
        e["host"] = r.host;
        e["baseline"] = r.baseline ? nlohmann::json(*r.baseline) : nlohmann::json(nullptr);
        e["within_tolerance"] = r.within_tolerance;
        j["results"].push_back(e);
    }
    return j.dump(2) + "\n";
}

}  // namespace spoqc
