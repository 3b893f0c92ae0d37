#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spoqc/codes.hpp"
#include "spoqc/noise.hpp"

namespace spoqc {

/// Two-sided t factor for reported intervals.
inline constexpr double kTFactor = 3.291;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Threads used by sweeps: SPOQC_WORKERS if set, else the hardware concurrency.
unsigned worker_count();

/// Runs body(0..n-1) on `workers` threads. Each index runs exactly once;
/// callers store results by index so output never depends on scheduling.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

enum class NoiseAxis : uint8_t { PRus, Epsilon, Distinguishability, Decoherence };
std::string axis_name(NoiseAxis a);
NoiseAxis axis_from_name(const std::string& s);
inline bool is_erasure_axis(NoiseAxis a) { return a == NoiseAxis::PRus || a == NoiseAxis::Epsilon; }

/// Noise model with parameter `p` placed on `axis` and everything else zero.
NoiseModel noise_at(NoiseAxis axis, double p, Flavor flavor);

struct InstanceEstimate {
    std::size_t id = 0;
    double eps = 0;  // 0 or 1/2
    std::size_t shots = 0;
    std::size_t mismatches = 0;
};

struct PointEstimate {
    double p = 0;
    int size = 0;
    bool erasure = true;
    /// Instances M (erasure) or 1 (Pauli).
    std::size_t instances = 0;
    /// Shots per instance.
    std::size_t shots = 0;
    double eps = 0;
    double variance = 0;
    double ci_lo = 0;
    double ci_hi = 0;

    /// Number of independent trials behind the mean: M or N.
    std::size_t trials() const { return erasure ? instances : shots; }
    double half_width() const { return 0.5 * (ci_hi - ci_lo); }
};

/// Mean, unbiased variance and t-interval of per-instance estimates in {0, 1/2}.
PointEstimate erasure_estimate(const std::vector<InstanceEstimate>& inst);
/// Bernoulli estimate from `failures` out of `shots`.
PointEstimate pauli_estimate(std::size_t failures, std::size_t shots);

/// Erasure-only point: M instances of N shots, each decoded with zero-weight
/// matching and scored 0 if every shot is right, 1/2 otherwise.
PointEstimate run_erasure_point(const CodeSpec& spec, const NoiseModel& nm, std::size_t M, std::size_t N, uint64_t seed,
                                unsigned workers = 1);
/// Same with a prebuilt decoder (reused across a sweep).
class ErasureDecoder;
PointEstimate run_erasure_point(const ErasureDecoder& dec, const NoiseModel& nm, std::size_t M, std::size_t N,
                                uint64_t seed, unsigned workers = 1);

/// Pauli-noise point: one circuit, one DEM, N shots decoded with MWPM.
PointEstimate run_pauli_point(const CodeSpec& spec, const NoiseModel& nm, std::size_t N, uint64_t seed,
                              unsigned workers = 1);

struct QuarticFit {
    int size = 0;
    std::vector<double> coeffs;               // a0..a4
    std::vector<std::vector<double>> cov;     // 5x5
};

struct ThresholdFit {
    std::vector<QuarticFit> fits;
    std::size_t draws = 0;
    std::size_t kept = 0;
    double estimate = 0;
    double variance = 0;
    double p_lo = 0;
    double p_hi = 0;
    int size_small = 0;
    int size_large = 0;

    double kept_fraction() const { return draws ? static_cast<double>(kept) / static_cast<double>(draws) : 0; }
    double stddev() const;
};

/// Least-squares quartic in p, weighted by inverse squared standard error.
QuarticFit fit_quartic(const std::vector<PointEstimate>& points);
/// Roots of q_large - q_small on [lo, hi]: grid bracketing then bisection.
std::vector<double> crossings(const std::vector<double>& a, const std::vector<double>& b, double lo, double hi);

/// Bootstrap crossing of the two largest sizes. Throws FitError if fewer than
/// 100 draws cross exactly once in range, ConfigError on a malformed grid.
ThresholdFit fit_threshold(const std::vector<PointEstimate>& points, std::size_t K, uint64_t seed);

struct SweepConfig {
    Family family = Family::Honeycomb;
    Flavor flavor = Flavor::SPOQC2;
    std::vector<int> sizes;
    int rounds = 0;
    NoiseAxis axis = NoiseAxis::PRus;
    std::vector<double> p_grid;
    std::size_t M = 2000;
    std::size_t N = 64;
    std::size_t K = 10000;
    uint64_t seed = 1;
    std::string out_dir = "out";
};

/// Parses and validates a JSON run config; throws ConfigError.
SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::string& path);
std::string config_to_json(const SweepConfig& cfg);

/// All points, ordered by size then p. `progress` (optional) is called after each point.
std::vector<PointEstimate> run_sweep(const SweepConfig& cfg, unsigned workers,
                                     const std::function<void(const PointEstimate&)>& progress = {});

std::string points_csv(const std::vector<PointEstimate>& points);
std::vector<PointEstimate> parse_points_csv(const std::string& text);
std::string fit_json(const ThresholdFit& fit);
ThresholdFit parse_fit_json(const std::string& text);
std::string plot_svg(const std::vector<PointEstimate>& points, const ThresholdFit* fit);

/// Writes points.csv, fit.json (if given) and plot.svg into `dir`.
void write_report(const std::string& dir, const std::vector<PointEstimate>& points, const ThresholdFit* fit);

}  // namespace spoqc
