#include "spoqc/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spoqc/decode.hpp"
#include "spoqc/frames.hpp"
#include "spoqc/rng.hpp"

namespace spoqc {

unsigned worker_count() {
    if (const char* env = std::getenv("SPOQC_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
    workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; i++) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto loop = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; w++) {
        pool.emplace_back(loop);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::string axis_name(NoiseAxis a) {
    switch (a) {
        case NoiseAxis::PRus:
            return "p_rus";
        case NoiseAxis::Epsilon:
            return "epsilon";
        case NoiseAxis::Distinguishability:
            return "distinguishability";
        case NoiseAxis::Decoherence:
            return "decoherence";
    }
    return "?";
}

NoiseAxis axis_from_name(const std::string& s) {
    for (NoiseAxis a : {NoiseAxis::PRus, NoiseAxis::Epsilon, NoiseAxis::Distinguishability, NoiseAxis::Decoherence}) {
        if (axis_name(a) == s) {
            return a;
        }
    }
    throw ConfigError("unknown noise axis: " + s);
}

NoiseModel noise_at(NoiseAxis axis, double p, Flavor flavor) {
    NoiseModel nm;
    nm.flavor = flavor;
    switch (axis) {
        case NoiseAxis::PRus:
            nm.erasure_input = NoiseModel::ErasureInput::PRus;
            nm.erasure = p;
            break;
        case NoiseAxis::Epsilon:
            nm.erasure_input = NoiseModel::ErasureInput::Epsilon;
            nm.erasure = p;
            break;
        case NoiseAxis::Distinguishability:
            nm.distinguishability = p;
            break;
        case NoiseAxis::Decoherence:
            nm.decoherence_ratio = p;
            break;
    }
    return nm;
}

namespace {

void attach_interval(PointEstimate& pe, double cap) {
    double n = static_cast<double>(pe.trials());
    double half = n > 0 ? kTFactor * std::sqrt(pe.variance / n) : 0;
    pe.ci_lo = std::max(0.0, pe.eps - half);
    pe.ci_hi = std::min(cap, pe.eps + half);
}

}  // namespace

PointEstimate erasure_estimate(const std::vector<InstanceEstimate>& inst) {
    PointEstimate pe;
    pe.erasure = true;
    pe.instances = inst.size();
    pe.shots = inst.empty() ? 0 : inst[0].shots;
    double sum = 0;
    for (const InstanceEstimate& e : inst) {
        sum += e.eps;
    }
    const double M = static_cast<double>(inst.size());
    pe.eps = inst.empty() ? 0 : sum / M;
    pe.variance = inst.size() > 1 ? M / (M - 1) * pe.eps * (0.5 - pe.eps) : 0;
    attach_interval(pe, 0.5);
    return pe;
}

PointEstimate pauli_estimate(std::size_t failures, std::size_t shots) {
    PointEstimate pe;
    pe.erasure = false;
    pe.instances = 1;
    pe.shots = shots;
    const double N = static_cast<double>(shots);
    pe.eps = shots ? static_cast<double>(failures) / N : 0;
    pe.variance = shots > 1 ? N / (N - 1) * pe.eps * (1 - pe.eps) : 0;
    attach_interval(pe, 1.0);
    return pe;
}

PointEstimate run_erasure_point(const ErasureDecoder& dec, const NoiseModel& nm, std::size_t M, std::size_t N,
                                uint64_t seed, unsigned workers) {
    nm.validate();
    if (nm.has_pauli_noise()) {
        throw ConfigError("erasure points take erasure-only noise");
    }
    const double p = nm.p_rus();
    std::vector<InstanceEstimate> out(M);
    parallel_for(M, workers, [&](std::size_t i) {
        // Coins depend on the instance index only, so sweeps over p reuse the
        // same uniforms and erasure sets grow monotonically with p.
        std::vector<uint8_t> coins = sample_coins(dec.num_rus(), p, derive_seed(seed, stream_tag::kInstance, i));
        ErasureDecoder::InstanceResult r = dec.run(coins, N, derive_seed(seed, stream_tag::kShots, i));
        out[i] = {i, r.mismatches > 0 ? 0.5 : 0.0, N, r.mismatches};
    });
    return erasure_estimate(out);
}

PointEstimate run_erasure_point(const CodeSpec& spec, const NoiseModel& nm, std::size_t M, std::size_t N, uint64_t seed,
                                unsigned workers) {
    ErasureDecoder dec(build_code(spec));
    PointEstimate pe = run_erasure_point(dec, nm, M, N, seed, workers);
    pe.size = spec.size;
    pe.p = nm.erasure;
    return pe;
}

PointEstimate run_pauli_point(const CodeSpec& spec, const NoiseModel& nm, std::size_t N, uint64_t seed,
                              unsigned workers) {
    nm.validate();
    if (nm.erasure > 0) {
        throw ConfigError("Pauli points take erasure-free noise");
    }
    Circuit circuit = apply_pauli_noise(lower_ideal(build_code(spec)), nm);
    MatchingGraph graph = MatchingGraph::from_dem(build_dem(circuit));
    FrameSampler sampler(circuit);
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (N + kChunk - 1) / kChunk;
    std::vector<std::size_t> failures(chunks, 0);
    parallel_for(chunks, workers, [&](std::size_t c) {
        std::size_t shots = std::min(kChunk, N - c * kChunk);
        SampleResult s = sampler.sample(shots, derive_seed(seed, stream_tag::kShots, c));
        std::vector<std::vector<uint32_t>> defects(shots);
        for (std::size_t d = 0; d < s.detectors.rows; d++) {
            for (std::size_t w = 0; w < s.detectors.words_per_row; w++) {
                uint64_t bits = s.detectors.word(d, w);
                while (bits) {
                    std::size_t shot = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                    defects[shot].push_back(static_cast<uint32_t>(d));
                    bits &= bits - 1;
                }
            }
        }
        std::size_t wrong = 0;
        for (std::size_t k = 0; k < shots; k++) {
            uint64_t predicted = mwpm_decode(graph, defects[k]).observables & 1;
            // Frames report flips relative to the noiseless run.
            uint64_t actual = s.observables.get(0, k);
            wrong += predicted != actual;
        }
        failures[c] = wrong;
    });
    std::size_t total = 0;
    for (std::size_t f : failures) {
        total += f;
    }
    PointEstimate pe = pauli_estimate(total, N);
    pe.size = spec.size;
    pe.p = nm.distinguishability > 0 ? nm.distinguishability : nm.decoherence_ratio;
    return pe;
}

double ThresholdFit::stddev() const { return std::sqrt(std::max(0.0, variance)); }

namespace {

double standard_error(const PointEstimate& pe) {
    double se = pe.half_width() / kTFactor;
    if (se <= 0 && pe.trials() > 0) {
        // Zero observed failures: one trial's worth of resolution.
        se = (pe.erasure ? 0.5 : 1.0) / static_cast<double>(pe.trials());
    }
    return se;
}

double eval_quartic(const std::vector<double>& a, double p) {
    return a[0] + p * (a[1] + p * (a[2] + p * (a[3] + p * a[4])));
}

}  // namespace

QuarticFit fit_quartic(const std::vector<PointEstimate>& points) {
    if (points.size() < 5) {
        throw ConfigError("a quartic fit needs at least 5 points per size");
    }
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd X(n, 5);
    Eigen::VectorXd y(n);
    Eigen::VectorXd w(n);
    bool weighted = false;
    for (int i = 0; i < n; i++) {
        double p = points[i].p;
        double v = 1;
        for (int k = 0; k < 5; k++) {
            X(i, k) = v;
            v *= p;
        }
        y(i) = points[i].eps;
        double se = standard_error(points[i]);
        weighted = weighted || se > 0;
        w(i) = se > 0 ? 1.0 / (se * se) : 1.0;
    }
    if (!weighted) {
        w.setOnes();
    }
    Eigen::MatrixXd XtW = X.transpose() * w.asDiagonal();
    Eigen::MatrixXd normal = XtW * X;
    Eigen::MatrixXd inv = normal.ldlt().solve(Eigen::MatrixXd::Identity(5, 5));
    Eigen::VectorXd a = inv * (XtW * y);
    QuarticFit fit;
    fit.size = points[0].size;
    fit.coeffs.assign(a.data(), a.data() + 5);
    fit.cov.assign(5, std::vector<double>(5, 0));
    if (weighted) {
        for (int i = 0; i < 5; i++) {
            for (int j = 0; j < 5; j++) {
                fit.cov[i][j] = inv(i, j);
            }
        }
    }
    return fit;
}

std::vector<double> crossings(const std::vector<double>& a, const std::vector<double>& b, double lo, double hi) {
    auto f = [&](double p) { return eval_quartic(a, p) - eval_quartic(b, p); };
    constexpr int kGrid = 10000;
    std::vector<double> roots;
    double x0 = lo;
    double f0 = f(x0);
    for (int k = 1; k <= kGrid; k++) {
        double x1 = lo + (hi - lo) * k / kGrid;
        double f1 = f(x1);
        if ((f0 > 0) != (f1 > 0)) {
            double l = x0, r = x1, fl = f0;
            while (r - l > 1e-10) {
                double m = 0.5 * (l + r);
                double fm = f(m);
                if ((fm > 0) == (fl > 0)) {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            roots.push_back(0.5 * (l + r));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

ThresholdFit fit_threshold(const std::vector<PointEstimate>& points, std::size_t K, uint64_t seed) {
    std::map<int, std::vector<PointEstimate>> by_size;
    for (const PointEstimate& pe : points) {
        by_size[pe.size].push_back(pe);
    }
    if (by_size.size() < 2) {
        throw ConfigError("threshold fitting needs at least two code sizes");
    }
    ThresholdFit out;
    std::vector<double> grid;
    for (auto& [size, pts] : by_size) {
        std::sort(pts.begin(), pts.end(), [](const PointEstimate& x, const PointEstimate& y) { return x.p < y.p; });
        std::vector<double> ps;
        for (const PointEstimate& pe : pts) {
            ps.push_back(pe.p);
        }
        if (grid.empty()) {
            grid = ps;
        } else if (ps != grid) {
            throw ConfigError("every size must use the same p grid");
        }
        out.fits.push_back(fit_quartic(pts));
    }
    if (grid.size() < 5) {
        throw ConfigError("threshold fitting needs at least 5 p values");
    }
    const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    for (std::size_t k = 0; k < grid.size(); k++) {
        if (std::abs(grid[k] - (grid.front() + step * static_cast<double>(k))) > 1e-6 * std::max(1.0, std::abs(step))) {
            throw ConfigError("p grid must be evenly spaced");
        }
    }
    out.p_lo = grid.front();
    out.p_hi = grid.back();
    const QuarticFit& small = out.fits[out.fits.size() - 2];
    const QuarticFit& large = out.fits.back();
    out.size_small = small.size;
    out.size_large = large.size;
    out.draws = K;

    auto sqrt_cov = [](const QuarticFit& f) {
        Eigen::Matrix<double, 5, 5> c;
        for (int i = 0; i < 5; i++) {
            for (int j = 0; j < 5; j++) {
                c(i, j) = f.cov[i][j];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(c);
        Eigen::Matrix<double, 5, 1> ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return Eigen::Matrix<double, 5, 5>(es.eigenvectors() * ev.asDiagonal());
    };
    const Eigen::Matrix<double, 5, 5> As = sqrt_cov(small);
    const Eigen::Matrix<double, 5, 5> Al = sqrt_cov(large);

    std::vector<double> root(K, std::nan(""));
    parallel_for(K, worker_count(), [&](std::size_t k) {
        Rng rng(derive_seed(seed, stream_tag::kBootstrap, k));
        std::normal_distribution<double> g;
        Eigen::Matrix<double, 5, 1> zs, zl;
        for (int i = 0; i < 5; i++) {
            zs(i) = g(rng);
        }
        for (int i = 0; i < 5; i++) {
            zl(i) = g(rng);
        }
        Eigen::Matrix<double, 5, 1> ds = As * zs;
        Eigen::Matrix<double, 5, 1> dl = Al * zl;
        std::vector<double> a(5), b(5);
        for (int i = 0; i < 5; i++) {
            a[i] = large.coeffs[i] + dl(i);
            b[i] = small.coeffs[i] + ds(i);
        }
        std::vector<double> r = crossings(a, b, out.p_lo, out.p_hi);
        if (r.size() == 1) {
            root[k] = r[0];
        }
    });
    double sum = 0;
    for (double r : root) {
        if (!std::isnan(r)) {
            out.kept++;
            sum += r;
        }
    }
    if (out.kept < 100) {
        throw FitError("only " + std::to_string(out.kept) + " of " + std::to_string(K) +
                       " bootstrap draws cross once in range; widen or move the p grid");
    }
    out.estimate = sum / static_cast<double>(out.kept);
    double ss = 0;
    for (double r : root) {
        if (!std::isnan(r)) {
            ss += (r - out.estimate) * (r - out.estimate);
        }
    }
    out.variance = ss / static_cast<double>(out.kept - 1);
    return out;
}

namespace {

using nlohmann::json;

template <typename T>
T get_field(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

std::string fmt(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

SweepConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const char* kKnown[] = {"family", "flavor", "sizes", "rounds", "noise_axis", "p_grid", "M", "N", "K", "seed", "out_dir"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
            throw ConfigError("unknown config field: " + key);
        }
    }
    SweepConfig cfg;
    try {
        cfg.family = family_from_name(get_field<std::string>(j, "family", "honeycomb"));
        cfg.flavor = flavor_from_name(get_field<std::string>(j, "flavor", "spoqc2"));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    cfg.axis = axis_from_name(get_field<std::string>(j, "noise_axis", "p_rus"));
    cfg.sizes = get_field<std::vector<int>>(j, "sizes", {});
    cfg.rounds = get_field<int>(j, "rounds", 0);
    cfg.M = get_field<std::size_t>(j, "M", cfg.M);
    cfg.N = get_field<std::size_t>(j, "N", cfg.N);
    cfg.K = get_field<std::size_t>(j, "K", cfg.K);
    cfg.seed = get_field<uint64_t>(j, "seed", cfg.seed);
    cfg.out_dir = get_field<std::string>(j, "out_dir", cfg.out_dir);
    if (!j.contains("p_grid")) {
        throw ConfigError("config needs a p_grid");
    }
    const json& g = j.at("p_grid");
    if (g.is_array()) {
        cfg.p_grid = get_field<std::vector<double>>(j, "p_grid", {});
    } else if (g.is_object()) {
        double start = get_field<double>(g, "start", 0);
        double stop = get_field<double>(g, "stop", 0);
        int count = get_field<int>(g, "count", 0);
        if (count < 2) {
            throw ConfigError("p_grid.count must be at least 2");
        }
        for (int k = 0; k < count; k++) {
            cfg.p_grid.push_back(start + (stop - start) * k / (count - 1));
        }
    } else {
        throw ConfigError("p_grid must be a list or {start, stop, count}");
    }

    if (cfg.sizes.empty()) {
        throw ConfigError("config needs at least one size");
    }
    for (int s : cfg.sizes) {
        bool ok = cfg.family == Family::Honeycomb ? s >= 2 : (s >= 3 && s % 2 == 1);
        if (!ok) {
            throw ConfigError("invalid code size " + std::to_string(s));
        }
    }
    if (cfg.p_grid.empty()) {
        throw ConfigError("p_grid is empty");
    }
    for (double p : cfg.p_grid) {
        if (!(p >= 0 && p <= 1)) {
            throw ConfigError("p_grid value out of range: " + fmt(p));
        }
    }
    if (cfg.N == 0 || cfg.M == 0) {
        throw ConfigError("M and N must be positive");
    }
    if (is_erasure_axis(cfg.axis) && cfg.N < 64) {
        throw ConfigError("erasure sweeps need N >= 64 shots per instance");
    }
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const SweepConfig& cfg) {
    json j;
    j["family"] = family_name(cfg.family);
    j["flavor"] = flavor_name(cfg.flavor);
    j["sizes"] = cfg.sizes;
    j["rounds"] = cfg.rounds;
    j["noise_axis"] = axis_name(cfg.axis);
    j["p_grid"] = cfg.p_grid;
    j["M"] = cfg.M;
    j["N"] = cfg.N;
    j["K"] = cfg.K;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    return j.dump(2) + "\n";
}

std::vector<PointEstimate> run_sweep(const SweepConfig& cfg, unsigned workers,
                                     const std::function<void(const PointEstimate&)>& progress) {
    std::vector<PointEstimate> out;
    for (std::size_t si = 0; si < cfg.sizes.size(); si++) {
        CodeSpec spec{cfg.family, cfg.sizes[si], cfg.rounds, cfg.flavor};
        const uint64_t size_seed = derive_seed(cfg.seed, stream_tag::kInstance, static_cast<uint64_t>(cfg.sizes[si]));
        if (is_erasure_axis(cfg.axis)) {
            ErasureDecoder dec(build_code(spec));
            for (double p : cfg.p_grid) {
                PointEstimate pe = run_erasure_point(dec, noise_at(cfg.axis, p, cfg.flavor), cfg.M, cfg.N, size_seed, workers);
                pe.size = spec.size;
                pe.p = p;
                out.push_back(pe);
                if (progress) {
                    progress(pe);
                }
            }
        } else {
            for (std::size_t pi = 0; pi < cfg.p_grid.size(); pi++) {
                double p = cfg.p_grid[pi];
                PointEstimate pe = run_pauli_point(spec, noise_at(cfg.axis, p, cfg.flavor), cfg.N,
                                                   derive_seed(size_seed, stream_tag::kShots, pi), workers);
                pe.p = p;
                out.push_back(pe);
                if (progress) {
                    progress(pe);
                }
            }
        }
    }
    return out;
}

std::string points_csv(const std::vector<PointEstimate>& points) {
    std::string out = "p,size,eps,ci_lo,ci_hi,variance,instances,shots,kind\n";
    for (const PointEstimate& pe : points) {
        out += fmt(pe.p) + "," + std::to_string(pe.size) + "," + fmt(pe.eps) + "," + fmt(pe.ci_lo) + "," + fmt(pe.ci_hi) +
               "," + fmt(pe.variance) + "," + std::to_string(pe.instances) + "," + std::to_string(pe.shots) + "," +
               (pe.erasure ? "erasure" : "pauli") + "\n";
    }
    return out;
}

std::vector<PointEstimate> parse_points_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<PointEstimate> out;
    if (!std::getline(in, line) || line.rfind("p,size,eps", 0) != 0) {
        throw ConfigError("points file lacks the expected header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 9) {
            throw ConfigError("points line " + std::to_string(lineno) + ": expected 9 fields");
        }
        try {
            PointEstimate pe;
            pe.p = std::stod(f[0]);
            pe.size = std::stoi(f[1]);
            pe.eps = std::stod(f[2]);
            pe.ci_lo = std::stod(f[3]);
            pe.ci_hi = std::stod(f[4]);
            pe.variance = std::stod(f[5]);
            pe.instances = std::stoul(f[6]);
            pe.shots = std::stoul(f[7]);
            pe.erasure = f[8] == "erasure";
            out.push_back(pe);
        } catch (const std::logic_error&) {
            throw ConfigError("points line " + std::to_string(lineno) + ": bad number");
        }
    }
    return out;
}

std::string fit_json(const ThresholdFit& fit) {
    json j;
    j["threshold"] = fit.estimate;
    j["stddev"] = fit.stddev();
    j["variance"] = fit.variance;
    j["draws"] = fit.draws;
    j["kept"] = fit.kept;
    j["kept_fraction"] = fit.kept_fraction();
    j["p_range"] = {fit.p_lo, fit.p_hi};
    j["sizes_compared"] = {fit.size_small, fit.size_large};
    j["t_factor"] = kTFactor;
    j["weighting"] = "inverse squared standard error (CI half-width / t); zero-width points use one trial of resolution";
    j["instances_per_point"] = "uniform";
    json fits = json::array();
    for (const QuarticFit& f : fit.fits) {
        fits.push_back({{"size", f.size}, {"coeffs", f.coeffs}, {"cov", f.cov}});
    }
    j["fits"] = fits;
    return j.dump(2) + "\n";
}

ThresholdFit parse_fit_json(const std::string& text) {
    ThresholdFit fit;
    try {
        json j = json::parse(text);
        fit.estimate = j.at("threshold").get<double>();
        fit.variance = j.at("variance").get<double>();
        fit.draws = j.at("draws").get<std::size_t>();
        fit.kept = j.at("kept").get<std::size_t>();
        fit.p_lo = j.at("p_range").at(0).get<double>();
        fit.p_hi = j.at("p_range").at(1).get<double>();
        fit.size_small = j.at("sizes_compared").at(0).get<int>();
        fit.size_large = j.at("sizes_compared").at(1).get<int>();
        for (const json& f : j.at("fits")) {
            QuarticFit q;
            q.size = f.at("size").get<int>();
            q.coeffs = f.at("coeffs").get<std::vector<double>>();
            q.cov = f.at("cov").get<std::vector<std::vector<double>>>();
            fit.fits.push_back(q);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad fit file: ") + e.what());
    }
    return fit;
}

std::string plot_svg(const std::vector<PointEstimate>& points, const ThresholdFit* fit) {
    if (points.empty()) {
        throw ConfigError("nothing to plot");
    }
    const double W = 640, H = 420, L = 70, R = 20, T = 20, B = 50;
    double pmin = points[0].p, pmax = points[0].p, ymin = 1, ymax = 0;
    for (const PointEstimate& pe : points) {
        pmin = std::min(pmin, pe.p);
        pmax = std::max(pmax, pe.p);
        if (pe.eps > 0) {
            ymin = std::min(ymin, pe.eps);
        }
        ymax = std::max(ymax, pe.ci_hi);
    }
    if (pmax <= pmin) {
        pmax = pmin + 1e-3;
    }
    if (ymin > ymax || ymin <= 0) {
        ymin = 1e-4;
    }
    ymax = std::max(ymax, ymin * 10);
    const double lymin = std::floor(std::log10(ymin) - 0.2);
    const double lymax = std::ceil(std::log10(ymax));
    auto X = [&](double p) { return L + (p - pmin) / (pmax - pmin) * (W - L - R); };
    auto Y = [&](double v) {
        double lv = std::log10(std::max(v, std::pow(10.0, lymin)));
        return T + (lymax - lv) / (lymax - lymin) * (H - T - B);
    };
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    if (fit) {
        double lo = std::max(pmin, fit->estimate - fit->stddev());
        double hi = std::min(pmax, fit->estimate + fit->stddev());
        s << "<rect class=\"threshold-band\" x=\"" << X(lo) << "\" y=\"" << T << "\" width=\"" << std::max(1.0, X(hi) - X(lo))
          << "\" height=\"" << H - T - B << "\" fill=\"#999999\" fill-opacity=\"0.3\"/>\n";
        s << "<line x1=\"" << X(fit->estimate) << "\" x2=\"" << X(fit->estimate) << "\" y1=\"" << T << "\" y2=\"" << H - B
          << "\" stroke=\"#666666\" stroke-dasharray=\"3,3\"/>\n";
    }
    s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(lymin); e <= static_cast<int>(lymax); e++) {
        double y = Y(std::pow(10.0, e));
        s << "<text x=\"" << L - 6 << "\" y=\"" << y + 4 << "\" font-size=\"11\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    for (int k = 0; k <= 4; k++) {
        double p = pmin + (pmax - pmin) * k / 4;
        s << "<text x=\"" << X(p) << "\" y=\"" << H - B + 16 << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(std::round(p * 1e4) / 1e4)
          << "</text>\n";
    }
    s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" font-size=\"12\" text-anchor=\"middle\">physical error parameter</text>\n";
    s << "<text x=\"14\" y=\"" << (T + H - B) / 2 << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << (T + H - B) / 2 << ")\">logical error rate</text>\n";
    std::map<int, std::vector<PointEstimate>> by_size;
    for (const PointEstimate& pe : points) {
        by_size[pe.size].push_back(pe);
    }
    int ci = 0;
    for (auto& [size, pts] : by_size) {
        std::sort(pts.begin(), pts.end(), [](const PointEstimate& a, const PointEstimate& b) { return a.p < b.p; });
        const char* col = kColors[ci++ % 6];
        s << "<polyline class=\"curve\" data-size=\"" << size << "\" fill=\"none\" stroke=\"" << col << "\" points=\"";
        for (const PointEstimate& pe : pts) {
            s << X(pe.p) << "," << Y(pe.eps) << " ";
        }
        s << "\"/>\n";
        for (const PointEstimate& pe : pts) {
            s << "<line x1=\"" << X(pe.p) << "\" x2=\"" << X(pe.p) << "\" y1=\"" << Y(pe.ci_lo) << "\" y2=\"" << Y(pe.ci_hi)
              << "\" stroke=\"" << col << "\"/>\n";
        }
        s << "<text x=\"" << W - R - 60 << "\" y=\"" << T + 14 * ci << "\" font-size=\"11\" fill=\"" << col << "\">size " << size
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void write_report(const std::string& dir, const std::vector<PointEstimate>& points, const ThresholdFit* fit) {
    if (points.empty()) {
        throw ConfigError("no points to report");
    }
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + (std::filesystem::path(dir) / name).string());
        }
        out << body;
    };
    write("points.csv", points_csv(points));
    if (fit) {
        write("fit.json", fit_json(*fit));
    }
    write("plot.svg", plot_svg(points, fit));
}

}  // namespace spoqc
