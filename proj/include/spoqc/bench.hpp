#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spoqc {

struct BenchResult {
    std::string name;
    double items_per_second = 0;
    /// Best of three repetitions.
    double wall_seconds = 0;
    std::size_t items = 0;
    std::string host;
    /// Stored rate for this host class, if any.
    std::optional<double> baseline;
    /// False when the rate fell below baseline / 1.25.
    bool within_tolerance = true;
};

/// Relative slack allowed against a stored baseline.
inline constexpr double kBenchTolerance = 1.25;

/// "<arch>-<n>c": the key baselines are stored under.
std::string host_class();

std::vector<std::string> benchmark_names();

/// Rates keyed by host class, then by case name.
using Baselines = std::map<std::string, std::map<std::string, double>>;
Baselines parse_baselines(const std::string& json_text);
std::string baselines_to_json(const Baselines& b);

struct BenchReport {
    std::vector<BenchResult> results;
    /// Digest of a fixed-seed decode taken before and after the cases ran.
    uint64_t digest_before = 0;
    uint64_t digest_after = 0;

    bool ok() const;
};

/// Runs every case whose name contains `filter` (all if empty), serially.
/// An empty `selection` list runs nothing.
std::vector<BenchResult> run_benchmarks(const std::vector<std::string>& selection, const Baselines& baselines = {});
BenchReport run_bench_suite(const std::string& filter, const Baselines& baselines);

/// Fixed-seed surface-code decode hashed over its predictions.
uint64_t decode_digest();

std::string bench_json(const BenchReport& report);

}  // namespace spoqc
