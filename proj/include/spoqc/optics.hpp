#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

namespace spoqc::optics {

using cd = std::complex<double>;

/// Four-mode interferometer acting on creation operators: a_k,out^dag = sum_j U(j,k) a_j^dag.
struct Interferometer {
    double phi = 0;
    Eigen::Matrix4cd matrix;
};

Interferometer build_interferometer(double phi);

/// |phi_a> = alpha|0> + beta|1>, |phi_b> = gamma|0> + delta|1>.
struct SpinPairState {
    cd alpha{1, 0};
    cd beta{0, 0};
    cd gamma{1, 0};
    cd delta{0, 0};

    bool normalized(double tol = 1e-12) const;
    /// Amplitudes of |00>, |01>, |10>, |11> (spin a is the high bit).
    std::array<cd, 4> product() const;
};

/// Detection pattern: output modes of the two photons (first <= second), or a
/// photon-loss event.
struct Pattern {
    int first = -1;
    int second = -1;

    static Pattern lost() { return {}; }
    bool is_loss() const { return first < 0; }
    bool bunched() const { return !is_loss() && first == second; }
    std::string str() const;
    bool operator==(const Pattern&) const = default;
};

/// The ten two-photon patterns in a fixed order: (0,0) (1,1) (2,2) (3,3) (0,1)
/// (2,3) (0,2) (0,3) (1,2) (1,3).
const std::vector<Pattern>& two_photon_patterns();

/// Coefficients multiplying (alpha*gamma, alpha*delta, beta*gamma, beta*delta) in
/// the output-state component for `pattern`, including the Fock factor sqrt(2)
/// for bunched photons so that squared moduli are probabilities.
std::array<cd, 4> pattern_coefficients(const Interferometer& u, const Pattern& pattern);

struct AmplitudeRow {
    Pattern pattern;
    /// Unnormalized spin amplitudes of |00>, |01>, |10>, |11>.
    std::array<cd, 4> amplitudes;
    double probability() const;
};

std::vector<AmplitudeRow> amplitude_table(const SpinPairState& s, double phi);

enum class PatternKind { Success, Repeat, Erasure, Impossible };
std::string kind_name(PatternKind k);

/// Single-spin gate on spin a (0) or b (1).
struct SpinGate {
    enum class Gate { Z, S, S_DAG } gate;
    int spin;
};

struct PatternVerdict {
    Pattern pattern;
    PatternKind kind = PatternKind::Impossible;
    std::vector<SpinGate> correction;
    /// For phi = 0 successes, the ZZ eigenvalue the spins are projected onto (+1 or -1); 0 otherwise.
    int zz_eigenvalue = 0;
    std::string correction_str() const;
};

/// Classification for phi in {0, pi/2}; throws std::invalid_argument otherwise.
PatternVerdict classify_pattern(const Pattern& pattern, double phi);

/// Applies the verdict's correction to a two-spin state vector (|00>,|01>,|10>,|11>).
std::array<cd, 4> apply_correction(const PatternVerdict& v, std::array<cd, 4> state);

struct RusProbabilities {
    double epsilon = 0;
    double p_s = 0;
    double p_r = 0;
    double p_e = 0;
    double p_rus = 0;
    double expected_trials_cz = 0;
    double expected_trials_mzz = 0;
};

RusProbabilities rus_probabilities(double epsilon);

/// Loss rate that yields the given overall RUS failure probability.
double epsilon_for_prus(double p_rus);

/// Z-flip probability of a spin idling for time t_RUS with coherence time T2.
double decoherence_pz(double ratio);

/// CSV: pattern, kind, correction, then real/imaginary parts of the four coefficients.
std::string amplitude_table_csv(double phi);

}  // namespace spoqc::optics
