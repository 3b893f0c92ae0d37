#include "spoqc/optics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spoqc::optics {

Interferometer build_interferometer(double phi) {
    const cd e = std::polar(1.0, phi);
    Interferometer u;
    u.phi = phi;
    u.matrix << 1.0, 1.0, 1.0, -1.0,
                1.0, 1.0, -1.0, 1.0,
                e, -e, 1.0, 1.0,
                -e, e, 1.0, 1.0;
    u.matrix *= 0.5;
    return u;
}

bool SpinPairState::normalized(double tol) const {
    return std::abs(std::norm(alpha) + std::norm(beta) - 1) < tol &&
           std::abs(std::norm(gamma) + std::norm(delta) - 1) < tol;
}

std::array<cd, 4> SpinPairState::product() const {
    return {alpha * gamma, alpha * delta, beta * gamma, beta * delta};
}

std::string Pattern::str() const {
    if (is_loss()) {
        return "loss";
    }
    return "(" + std::to_string(first) + "," + std::to_string(second) + ")";
}

const std::vector<Pattern>& two_photon_patterns() {
    static const std::vector<Pattern> kPatterns = {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 1},
                                                   {2, 3}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};
    return kPatterns;
}

std::array<cd, 4> pattern_coefficients(const Interferometer& u, const Pattern& pattern) {
    if (pattern.is_loss()) {
        return {};
    }
    // Spin basis state |s_a s_b> emits photons in input modes s_a and 2 + s_b.
    std::array<cd, 4> out{};
    const int j = pattern.first;
    const int k = pattern.second;
    for (int sa = 0; sa < 2; sa++) {
        for (int sb = 0; sb < 2; sb++) {
            int ma = sa;
            int mb = 2 + sb;
            cd c;
            if (j == k) {
                c = u.matrix(j, ma) * u.matrix(j, mb) * std::sqrt(2.0);
            } else {
                c = u.matrix(j, ma) * u.matrix(k, mb) + u.matrix(k, ma) * u.matrix(j, mb);
            }
            out[2 * sa + sb] = c;
        }
    }
    return out;
}

double AmplitudeRow::probability() const {
    double p = 0;
    for (const cd& a : amplitudes) {
        p += std::norm(a);
    }
    return p;
}

std::vector<AmplitudeRow> amplitude_table(const SpinPairState& s, double phi) {
    Interferometer u = build_interferometer(phi);
    std::array<cd, 4> prod = s.product();
    std::vector<AmplitudeRow> rows;
    for (const Pattern& p : two_photon_patterns()) {
        AmplitudeRow row{p, pattern_coefficients(u, p)};
        for (int b = 0; b < 4; b++) {
            row.amplitudes[b] *= prod[b];
        }
        rows.push_back(row);
    }
    return rows;
}

std::string kind_name(PatternKind k) {
    switch (k) {
        case PatternKind::Success:
            return "success";
        case PatternKind::Repeat:
            return "repeat";
        case PatternKind::Erasure:
            return "erasure";
        case PatternKind::Impossible:
            return "impossible";
    }
    return "?";
}

std::string PatternVerdict::correction_str() const {
    std::string out;
    for (const SpinGate& g : correction) {
        if (!out.empty()) {
            out += " ";
        }
        out += g.gate == SpinGate::Gate::Z ? "Z" : g.gate == SpinGate::Gate::S ? "S" : "S_DAG";
        out += g.spin == 0 ? "_a" : "_b";
    }
    return out;
}

namespace {

bool is_phase(double phi, double target) { return std::abs(std::remainder(phi - target, 2 * std::numbers::pi)) < 1e-12; }

}  // namespace

PatternVerdict classify_pattern(const Pattern& pattern, double phi) {
    const bool zz = is_phase(phi, 0);
    const bool cz = is_phase(phi, std::numbers::pi / 2);
    if (!zz && !cz) {
        throw std::invalid_argument("classification is defined for phi = 0 or pi/2 only");
    }
    PatternVerdict v;
    v.pattern = pattern;
    if (pattern.is_loss()) {
        v.kind = PatternKind::Erasure;
        return v;
    }
    std::array<cd, 4> coeff = pattern_coefficients(build_interferometer(phi), pattern);
    double norm = 0;
    for (const cd& c : coeff) {
        norm += std::norm(c);
    }
    if (norm < 1e-24) {
        v.kind = PatternKind::Impossible;
        return v;
    }
    if (pattern.bunched()) {
        // Coefficients are a diagonal sign pattern: find which spin picked up a Z.
        v.kind = PatternKind::Repeat;
        bool flips_b = std::real(coeff[1] / coeff[0]) < 0;
        bool flips_a = std::real(coeff[2] / coeff[0]) < 0;
        if (flips_a) {
            v.correction.push_back({SpinGate::Gate::Z, 0});
        }
        if (flips_b) {
            v.correction.push_back({SpinGate::Gate::Z, 1});
        }
        return v;
    }
    v.kind = PatternKind::Success;
    const bool same_parity = (pattern.first % 2) == (pattern.second % 2);
    if (zz) {
        v.zz_eigenvalue = same_parity ? +1 : -1;
    } else {
        // Coefficients read c * (1, r, r, 1) with r = +-i; S^dag S^dag undoes r = +i.
        cd r = coeff[1] / coeff[0];
        SpinGate::Gate g = r.imag() > 0 ? SpinGate::Gate::S_DAG : SpinGate::Gate::S;
        v.correction = {{g, 0}, {g, 1}};
    }
    return v;
}

std::array<cd, 4> apply_correction(const PatternVerdict& v, std::array<cd, 4> state) {
    for (const SpinGate& g : v.correction) {
        cd phase = g.gate == SpinGate::Gate::Z ? cd(-1, 0) : g.gate == SpinGate::Gate::S ? cd(0, 1) : cd(0, -1);
        for (int b = 0; b < 4; b++) {
            int bit = g.spin == 0 ? (b >> 1) & 1 : b & 1;
            if (bit) {
                state[b] *= phase;
            }
        }
    }
    return state;
}

RusProbabilities rus_probabilities(double epsilon) {
    if (!(epsilon >= 0 && epsilon <= 1)) {
        throw std::invalid_argument("loss rate must lie in [0,1]");
    }
    RusProbabilities r;
    r.epsilon = epsilon;
    const double both = (1 - epsilon) * (1 - epsilon);
    r.p_s = both / 2;
    r.p_r = both / 2;
    r.p_e = 1 - both;
    r.p_rus = r.p_e / (1 - r.p_r);
    r.expected_trials_cz = 1 / (1 - r.p_r);
    r.expected_trials_mzz = r.expected_trials_cz;
    return r;
}

double epsilon_for_prus(double p_rus) {
    if (!(p_rus >= 0 && p_rus <= 1)) {
        throw std::invalid_argument("p_RUS must lie in [0,1]");
    }
    // p_RUS = (1 - x) / (1 - x/2) with x = (1 - eps)^2.
    double x = (1 - p_rus) / (1 - p_rus / 2);
    return 1 - std::sqrt(x);
}

double decoherence_pz(double ratio) {
    if (!(ratio >= 0)) {
        throw std::invalid_argument("t_RUS/T2 must be non-negative");
    }
    return -std::expm1(-ratio) / 2;
}

std::string amplitude_table_csv(double phi) {
    Interferometer u = build_interferometer(phi);
    std::ostringstream out;
    out.precision(17);
    out << "pattern,kind,correction,zz,re00,im00,re01,im01,re10,im10,re11,im11\n";
    bool classifiable = is_phase(phi, 0) || is_phase(phi, std::numbers::pi / 2);
    for (const Pattern& p : two_photon_patterns()) {
        std::array<cd, 4> c = pattern_coefficients(u, p);
        std::string kind = "";
        std::string corr = "";
        int zz = 0;
        if (classifiable) {
            PatternVerdict v = classify_pattern(p, phi);
            kind = kind_name(v.kind);
            corr = v.correction_str();
            zz = v.zz_eigenvalue;
        }
        out << '"' << p.str() << "\"," << kind << ',' << corr << ',' << zz;
        for (const cd& x : c) {
            out << ',' << (std::abs(x.real()) < 1e-15 ? 0.0 : x.real()) << ','
                << (std::abs(x.imag()) < 1e-15 ? 0.0 : x.imag());
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace spoqc::optics
