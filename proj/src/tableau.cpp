#include "spoqc/tableau.hpp"

#include <algorithm>
#include <bit>

#include "spoqc/rng.hpp"

namespace spoqc {

namespace {

bool anticommutes_rows(const BitVector& x, const BitVector& z, const PauliString& p) {
    uint64_t acc = 0;
    for (std::size_t k = 0; k < x.num_words(); k++) {
        acc ^= (x.word(k) & p.zs.word(k)) ^ (z.word(k) & p.xs.word(k));
    }
    return std::popcount(acc) & 1;
}

PauliString single(std::size_t n, std::size_t q, char pauli) {
    PauliString p(n);
    p.set(q, pauli);
    return p;
}

PauliString pair(std::size_t n, std::size_t a, std::size_t b, char pauli) {
    PauliString p(n);
    p.set(a, pauli);
    if (b == a) {
        throw std::invalid_argument("two-qubit operation on a single qubit");
    }
    p.set(b, pauli);
    return p;
}

}  // namespace

Tableau::Tableau(std::size_t num_qubits, std::size_t num_vars)
    : n_(num_qubits), num_vars_(num_vars) {
    sx_.assign(n_, BitVector(n_));
    sz_.assign(n_, BitVector(n_));
    dx_.assign(n_, BitVector(n_));
    dz_.assign(n_, BitVector(n_));
    sign_.assign(n_, AffineForm(1 + num_vars_));
    for (std::size_t q = 0; q < n_; q++) {
        sz_[q].set(q, true);
        dx_[q].set(q, true);
    }
}

AffineForm Tableau::constant(bool value) const {
    AffineForm f(1 + num_vars_);
    f.set(0, value);
    return f;
}

AffineForm Tableau::variable(std::size_t k) const {
    AffineForm f(1 + num_vars_);
    f.set(1 + k, true);
    return f;
}

void Tableau::h(std::size_t q) {
    for (std::size_t i = 0; i < n_; i++) {
        bool x = sx_[i].get(q);
        bool z = sz_[i].get(q);
        if (x && z) {
            sign_[i].flip(0);
        }
        sx_[i].set(q, z);
        sz_[i].set(q, x);
        x = dx_[i].get(q);
        z = dz_[i].get(q);
        dx_[i].set(q, z);
        dz_[i].set(q, x);
    }
}

void Tableau::h_yz(std::size_t q) {
    // X -> -X, Y <-> Z.
    for (std::size_t i = 0; i < n_; i++) {
        bool x = sx_[i].get(q);
        bool z = sz_[i].get(q);
        if (x && !z) {
            sign_[i].flip(0);
        }
        if (z) {
            sx_[i].flip(q);
        }
        if (dz_[i].get(q)) {
            dx_[i].flip(q);
        }
    }
}

void Tableau::s(std::size_t q) {
    // X -> Y, Y -> -X.
    for (std::size_t i = 0; i < n_; i++) {
        bool x = sx_[i].get(q);
        bool z = sz_[i].get(q);
        if (x && z) {
            sign_[i].flip(0);
        }
        if (x) {
            sz_[i].flip(q);
        }
        if (dx_[i].get(q)) {
            dz_[i].flip(q);
        }
    }
}

void Tableau::s_dag(std::size_t q) {
    // X -> -Y, Y -> X.
    for (std::size_t i = 0; i < n_; i++) {
        bool x = sx_[i].get(q);
        bool z = sz_[i].get(q);
        if (x && !z) {
            sign_[i].flip(0);
        }
        if (x) {
            sz_[i].flip(q);
        }
        if (dx_[i].get(q)) {
            dz_[i].flip(q);
        }
    }
}

void Tableau::cz(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < n_; i++) {
        bool xa = sx_[i].get(a);
        bool xb = sx_[i].get(b);
        if (xa && xb && (sz_[i].get(a) != sz_[i].get(b))) {
            sign_[i].flip(0);
        }
        if (xb) {
            sz_[i].flip(a);
        }
        if (xa) {
            sz_[i].flip(b);
        }
        xa = dx_[i].get(a);
        xb = dx_[i].get(b);
        if (xb) {
            dz_[i].flip(a);
        }
        if (xa) {
            dz_[i].flip(b);
        }
    }
}

void Tableau::apply_pauli(const PauliString& p, const AffineForm& when) {
    for (std::size_t i = 0; i < n_; i++) {
        if (anticommutes_stab(i, p)) {
            sign_[i] ^= when;
        }
    }
}

bool Tableau::anticommutes_stab(std::size_t i, const PauliString& p) const {
    return anticommutes_rows(sx_[i], sz_[i], p);
}

bool Tableau::anticommutes_destab(std::size_t i, const PauliString& p) const {
    return anticommutes_rows(dx_[i], dz_[i], p);
}

void Tableau::row_mul_stab(std::size_t target, std::size_t source) {
    uint8_t log_i = mul_words_log_i(sx_[target].data(), sz_[target].data(), sx_[source].data(),
                                    sz_[source].data(), sx_[target].num_words());
    sign_[target] ^= sign_[source];
    if (log_i & 2) {
        sign_[target].flip(0);
    }
}

void Tableau::row_mul_destab(std::size_t target, std::size_t source_stab) {
    mul_words_log_i(dx_[target].data(), dz_[target].data(), sx_[source_stab].data(), sz_[source_stab].data(),
                    dx_[target].num_words());
}

Tableau::Outcome Tableau::measure(const PauliString& p, const AffineForm& random_value) {
    if (!p.is_hermitian()) {
        throw std::invalid_argument("measured Pauli must be Hermitian");
    }
    std::size_t pivot = n_;
    for (std::size_t i = 0; i < n_; i++) {
        if (anticommutes_stab(i, p)) {
            pivot = i;
            break;
        }
    }
    if (pivot == n_) {
        // p is (up to sign) the product of the stabilizers paired with anticommuting destabilizers.
        BitVector ax(n_);
        BitVector az(n_);
        AffineForm sign(1 + num_vars_);
        unsigned log_i = 0;
        for (std::size_t i = 0; i < n_; i++) {
            if (anticommutes_destab(i, p)) {
                log_i += mul_words_log_i(ax.data(), az.data(), sx_[i].data(), sz_[i].data(), ax.num_words());
                sign ^= sign_[i];
            }
        }
        unsigned rel = (p.phase + 4 - (log_i & 3)) & 3;
        if (rel & 2) {
            sign.flip(0);
        }
        return {std::move(sign), true};
    }
    for (std::size_t i = pivot + 1; i < n_; i++) {
        if (anticommutes_stab(i, p)) {
            row_mul_stab(i, pivot);
        }
    }
    for (std::size_t i = 0; i < n_; i++) {
        if (i != pivot && anticommutes_destab(i, p)) {
            row_mul_destab(i, pivot);
        }
    }
    dx_[pivot] = sx_[pivot];
    dz_[pivot] = sz_[pivot];
    sx_[pivot] = p.xs;
    sz_[pivot] = p.zs;
    sign_[pivot] = random_value;
    if (p.phase & 2) {
        sign_[pivot].flip(0);
    }
    return {random_value, false};
}

void Tableau::reset(std::size_t q, char basis, const AffineForm& target) {
    char flip_basis = basis == 'X' ? 'Z' : 'X';
    Outcome out = measure(single(n_, q, basis), constant(false));
    out.value ^= target;
    apply_pauli(single(n_, q, flip_basis), out.value);
}

PauliString Tableau::stabilizer(std::size_t i) const {
    PauliString p(n_);
    p.xs = sx_[i];
    p.zs = sz_[i];
    p.phase = sign_[i].get(0) ? 2 : 0;
    return p;
}

PauliString Tableau::destabilizer(std::size_t i) const {
    PauliString p(n_);
    p.xs = dx_[i];
    p.zs = dz_[i];
    return p;
}

bool Tableau::invariants_hold() const {
    std::vector<PauliString> st;
    std::vector<PauliString> de;
    for (std::size_t i = 0; i < n_; i++) {
        st.push_back(stabilizer(i));
        de.push_back(destabilizer(i));
    }
    for (std::size_t i = 0; i < n_; i++) {
        for (std::size_t j = 0; j < n_; j++) {
            if (!st[i].commutes(st[j]) || !de[i].commutes(de[j])) {
                return false;
            }
            if (st[i].commutes(de[j]) != (i != j)) {
                return false;
            }
        }
    }
    return true;
}

Tableau::Outcome measure_pauli(Tableau& t, const PauliString& p, bool coin) {
    return t.measure(p, t.constant(coin));
}

namespace {

PauliString measured_pauli(Op op, std::size_t n, const std::vector<Target>& targets, std::size_t k,
                           std::size_t* advance) {
    switch (op) {
        case Op::M:
            *advance = 1;
            return single(n, targets[k].value, 'Z');
        case Op::MX:
            *advance = 1;
            return single(n, targets[k].value, 'X');
        case Op::MZZ:
            *advance = 2;
            return pair(n, targets[k].value, targets[k + 1].value, 'Z');
        case Op::MXX:
            *advance = 2;
            return pair(n, targets[k].value, targets[k + 1].value, 'X');
        case Op::MYY:
            *advance = 2;
            return pair(n, targets[k].value, targets[k + 1].value, 'Y');
        default:
            throw std::invalid_argument("not a measurement");
    }
}

// Applies a unitary gate instruction. Returns false for non-gate opcodes.
bool apply_gate(Tableau& t, const Instruction& inst) {
    switch (inst.op) {
        case Op::H:
            for (const Target& q : inst.targets) {
                t.h(q.value);
            }
            return true;
        case Op::H_YZ:
            for (const Target& q : inst.targets) {
                t.h_yz(q.value);
            }
            return true;
        case Op::S:
            for (const Target& q : inst.targets) {
                t.s(q.value);
            }
            return true;
        case Op::S_DAG:
            for (const Target& q : inst.targets) {
                t.s_dag(q.value);
            }
            return true;
        case Op::CZ:
            for (std::size_t k = 0; k + 1 < inst.targets.size(); k += 2) {
                t.cz(inst.targets[k].value, inst.targets[k + 1].value);
            }
            return true;
        default:
            return false;
    }
}

void check_instance(const Circuit& c) {
    if (c.level() != CircuitLevel::Instance) {
        throw std::invalid_argument("tableau simulation requires an Instance circuit (no RUS_* operations)");
    }
}

}  // namespace

MeasurementRecord run(const Circuit& c, uint64_t seed, bool debug_checks) {
    check_instance(c);
    const std::size_t n = c.qubit_count();
    Tableau t(n);
    Rng rng(seed);
    MeasurementRecord rec;
    rec.outcomes.reserve(c.measurement_count());
    rec.deterministic.reserve(c.measurement_count());
    const AffineForm zero = t.constant(false);
    const AffineForm one = t.constant(true);
    for (const Instruction& inst : c.instructions()) {
        if (apply_gate(t, inst)) {
        } else if (is_measurement(inst.op)) {
            std::size_t advance = 1;
            for (std::size_t k = 0; k < inst.targets.size(); k += advance) {
                PauliString p = measured_pauli(inst.op, n, inst.targets, k, &advance);
                Tableau::Outcome out = measure_pauli(t, p, rng.bit());
                rec.outcomes.push_back(out.value.get(0));
                rec.deterministic.push_back(out.deterministic);
            }
        } else if (is_reset(inst.op)) {
            char basis = inst.op == Op::RX ? 'X' : 'Z';
            for (const Target& q : inst.targets) {
                t.reset(q.value, basis, zero);
            }
        } else if (inst.op == Op::X_ERROR || inst.op == Op::Y_ERROR || inst.op == Op::Z_ERROR) {
            char pauli = inst.op == Op::X_ERROR ? 'X' : inst.op == Op::Y_ERROR ? 'Y' : 'Z';
            for (const Target& q : inst.targets) {
                if (rng.coin(inst.args[0])) {
                    t.apply_pauli(single(n, q.value, pauli), one);
                }
            }
        } else if (inst.op == Op::DPH2) {
            for (std::size_t k = 0; k + 1 < inst.targets.size(); k += 2) {
                if (rng.coin(inst.args[0])) {
                    // Uniform over {II, ZI, IZ, ZZ}.
                    bool za = rng.bit();
                    bool zb = rng.bit();
                    PauliString p(n);
                    if (za) {
                        p.set(inst.targets[k].value, 'Z');
                    }
                    if (zb) {
                        p.set(inst.targets[k + 1].value, 'Z');
                    }
                    t.apply_pauli(p, one);
                }
            }
        }
        if (debug_checks && !t.invariants_hold()) {
            throw std::logic_error("tableau invariants violated after " + print_instruction(inst));
        }
    }
    return rec;
}

AffineForm DeterminismTrace::parity(const std::vector<std::size_t>& records) const {
    AffineForm f(forms.empty() ? 1 : forms[0].size());
    for (std::size_t r : records) {
        f ^= forms.at(r);
    }
    return f;
}

bool DeterminismTrace::is_deterministic(const AffineForm& f) const {
    for (std::size_t k = 0; k < vars.size(); k++) {
        if (vars[k].kind == VarKind::RandomMeasurement && f.get(1 + k)) {
            return false;
        }
    }
    return true;
}

DeterminismTrace trace_determinism(const Circuit& c, bool symbolic_initial_resets) {
    check_instance(c);
    const std::size_t n = c.qubit_count();
    const auto& insts = c.instructions();

    // The leading layer: resets interleaved only with annotations.
    std::size_t prefix_end = 0;
    std::size_t prefix_resets = 0;
    while (prefix_end < insts.size() && (is_reset(insts[prefix_end].op) || is_annotation(insts[prefix_end].op))) {
        if (is_reset(insts[prefix_end].op)) {
            prefix_resets += insts[prefix_end].targets.size();
        }
        prefix_end++;
    }

    std::vector<uint8_t> read_at_end(n, 0);
    if (symbolic_initial_resets) {
        std::vector<std::size_t> fin = final_readout_records(c);
        std::size_t m = 0;
        std::size_t next = 0;
        for (const Instruction& inst : insts) {
            if (!is_measurement(inst.op)) {
                continue;
            }
            for (std::size_t k = 0; k < inst.targets.size(); k++) {
                if (next < fin.size() && fin[next] == m) {
                    read_at_end[inst.targets[k].value] = 1;
                    next++;
                }
                m += is_two_qubit(inst.op) ? (k % 2) : 1;
            }
        }
    }

    DeterminismTrace tr;
    tr.initial_basis.assign(n, 0);
    std::size_t capacity = c.measurement_count() + (symbolic_initial_resets ? prefix_resets : 0);
    Tableau t(n, capacity);
    const AffineForm zero = t.constant(false);
    tr.forms.reserve(c.measurement_count());

    for (std::size_t idx = 0; idx < insts.size(); idx++) {
        const Instruction& inst = insts[idx];
        if (apply_gate(t, inst)) {
        } else if (is_measurement(inst.op)) {
            std::size_t advance = 1;
            for (std::size_t k = 0; k < inst.targets.size(); k += advance) {
                PauliString p = measured_pauli(inst.op, n, inst.targets, k, &advance);
                std::size_t var = tr.vars.size();
                Tableau::Outcome out = t.measure(p, t.variable(var));
                if (!out.deterministic) {
                    tr.vars.push_back({DeterminismTrace::VarKind::RandomMeasurement, tr.forms.size()});
                }
                tr.forms.push_back(std::move(out.value));
            }
        } else if (is_reset(inst.op)) {
            char basis = inst.op == Op::RX ? 'X' : 'Z';
            for (const Target& q : inst.targets) {
                if (idx < prefix_end) {
                    tr.initial_basis[q.value] = basis;
                }
                if (idx < prefix_end && read_at_end[q.value]) {
                    std::size_t var = tr.vars.size();
                    tr.vars.push_back({DeterminismTrace::VarKind::InitialReset, q.value});
                    t.reset(q.value, basis, t.variable(var));
                } else {
                    t.reset(q.value, basis, zero);
                }
            }
        }
    }
    for (AffineForm& f : tr.forms) {
        f.resize(1 + tr.vars.size());
    }
    return tr;
}

namespace {

// First target qubit of the instruction producing each record.
std::vector<uint32_t> record_qubits(const Circuit& c) {
    std::vector<uint32_t> out;
    out.reserve(c.measurement_count());
    for (const Instruction& inst : c.instructions()) {
        if (!is_measurement(inst.op)) {
            continue;
        }
        std::size_t step = is_two_qubit(inst.op) ? 2 : 1;
        for (std::size_t k = 0; k < inst.targets.size(); k += step) {
            out.push_back(inst.targets[k].value);
        }
    }
    return out;
}

// Incremental GF(2) basis keyed by leading bit, with a payload tracking which
// inputs were combined.
struct XorBasis {
    struct Row {
        BitVector v;
        BitVector payload;
    };
    std::vector<Row> rows;
    std::vector<std::size_t> by_pivot;
    std::size_t lo;  // bits below `lo` are ignored when choosing pivots

    XorBasis(std::size_t width, std::size_t ignore_below) : by_pivot(width, SIZE_MAX), lo(ignore_below) {}

    std::size_t leading(const BitVector& v) const {
        for (std::size_t w = 0; w < v.num_words(); w++) {
            uint64_t word = v.word(w);
            if (w == lo / 64) {
                word &= ~((uint64_t{1} << (lo % 64)) - 1);
            } else if (w < lo / 64) {
                word = 0;
            }
            if (word) {
                return w * 64 + std::countr_zero(word);
            }
        }
        return v.size();
    }
    /// Reduces in place; returns the leading bit of the residual (size() if zero).
    std::size_t reduce(BitVector& v, BitVector& payload) const {
        for (;;) {
            std::size_t piv = leading(v);
            if (piv >= v.size() || by_pivot[piv] == SIZE_MAX) {
                return piv;
            }
            v ^= rows[by_pivot[piv]].v;
            payload ^= rows[by_pivot[piv]].payload;
        }
    }
    /// Returns true if v was independent and added.
    bool insert(BitVector v, BitVector payload) {
        std::size_t piv = reduce(v, payload);
        if (piv >= v.size()) {
            return false;
        }
        by_pivot[piv] = rows.size();
        rows.push_back({std::move(v), std::move(payload)});
        return true;
    }
};

}  // namespace

std::vector<std::size_t> final_readout_records(const Circuit& c) {
    std::vector<std::size_t> out;
    const auto& insts = c.instructions();
    std::size_t m = c.measurement_count();
    for (std::size_t i = insts.size(); i-- > 0;) {
        const Instruction& inst = insts[i];
        if (is_annotation(inst.op)) {
            continue;
        }
        if (inst.op != Op::M && inst.op != Op::MX) {
            break;
        }
        m -= inst.targets.size();
        for (std::size_t k = inst.targets.size(); k-- > 0;) {
            out.push_back(m + k);
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<PauliString> find_initial_logicals(const Circuit& c, const DeterminismTrace& trace) {
    const std::size_t nv = trace.vars.size();
    const std::size_t nm = trace.forms.size();
    std::vector<uint8_t> is_final(nm, 0);
    for (std::size_t m : final_readout_records(c)) {
        is_final[m] = 1;
    }
    // Variables are reordered so coins come first: eliminating them leaves
    // coin-free combinations whose remaining bits are initial-reset variables.
    std::vector<std::size_t> coin_vars;
    std::vector<std::size_t> init_vars;
    for (std::size_t k = 0; k < nv; k++) {
        (trace.vars[k].kind == DeterminismTrace::VarKind::RandomMeasurement ? coin_vars : init_vars).push_back(k);
    }
    const std::size_t nc = coin_vars.size();
    auto permuted = [&](const AffineForm& f) {
        BitVector v(nc + init_vars.size());
        for (std::size_t i = 0; i < nc; i++) {
            v.set(i, f.get(1 + coin_vars[i]));
        }
        for (std::size_t i = 0; i < init_vars.size(); i++) {
            v.set(nc + i, f.get(1 + init_vars[i]));
        }
        return v;
    };
    auto coin_free_span = [&](bool include_final) {
        XorBasis coins(nc + init_vars.size(), 0);
        XorBasis inits(nc + init_vars.size(), nc);
        for (std::size_t m = 0; m < nm; m++) {
            if (is_final[m] && !include_final) {
                continue;
            }
            BitVector v = permuted(trace.forms[m]);
            BitVector none;
            std::size_t piv = coins.reduce(v, none);
            if (piv < nc) {
                coins.by_pivot[piv] = coins.rows.size();
                coins.rows.push_back({std::move(v), {}});
            } else if (piv < v.size()) {
                inits.insert(std::move(v), {});
            }
        }
        return inits;
    };
    XorBasis mid = coin_free_span(false);
    XorBasis all = coin_free_span(true);
    std::vector<PauliString> out;
    XorBasis quotient = mid;
    for (const auto& row : all.rows) {
        BitVector v = row.v;
        BitVector none;
        if (quotient.reduce(v, none) < v.size()) {
            PauliString p(c.qubit_count());
            for (std::size_t i = 0; i < init_vars.size(); i++) {
                if (row.v.get(nc + i)) {
                    std::size_t q = trace.vars[init_vars[i]].index;
                    p.set(q, trace.initial_basis[q]);
                }
            }
            out.push_back(std::move(p));
            quotient.insert(row.v, {});
        }
    }
    return out;
}

std::vector<std::size_t> ObservableFrame::all_records() const {
    std::vector<std::size_t> out = records;
    out.insert(out.end(), final_readout_records.begin(), final_readout_records.end());
    std::sort(out.begin(), out.end());
    return out;
}

ObservableFrame derive_observable_frame(const Circuit& c, const PauliString& initial_logical) {
    return derive_observable_frame(c, trace_determinism(c, true), initial_logical);
}

ObservableFrame derive_observable_frame(const Circuit& c, const DeterminismTrace& trace,
                                        const PauliString& initial_logical) {
    const std::size_t nv = trace.vars.size();
    const std::size_t nm = trace.forms.size();

    // Target: the initial-reset variables whose product is the logical.
    AffineForm target(1 + nv);
    std::vector<std::size_t> init_var_of(c.qubit_count(), nv);
    for (std::size_t k = 0; k < nv; k++) {
        if (trace.vars[k].kind == DeterminismTrace::VarKind::InitialReset) {
            init_var_of[trace.vars[k].index] = k;
        }
    }
    for (std::size_t q = 0; q < initial_logical.num_qubits(); q++) {
        char p = initial_logical.at(q);
        if (p == '_') {
            continue;
        }
        if (q >= c.qubit_count() || init_var_of[q] == nv || trace.initial_basis[q] != p) {
            throw ObservableError("initial logical is not a product of the initially reset stabilizers (qubit " +
                                  std::to_string(q) + ")");
        }
        target.flip(1 + init_var_of[q]);
    }

    // Trailing single-qubit readouts count as the final data readout.
    std::vector<uint8_t> is_final(nm, 0);
    std::vector<uint32_t> qubit_of = record_qubits(c);
    for (std::size_t m : final_readout_records(c)) {
        is_final[m] = 1;
    }

    // Gaussian elimination over the variable part; final readouts are offered first.
    std::vector<std::size_t> order;
    for (std::size_t m = 0; m < nm; m++) {
        if (is_final[m]) {
            order.push_back(m);
        }
    }
    for (std::size_t m = nm; m-- > 0;) {
        if (!is_final[m]) {
            order.push_back(m);
        }
    }
    struct Row {
        AffineForm form;
        BitVector combo;
        std::size_t pivot;
    };
    std::vector<Row> basis;
    std::vector<std::size_t> basis_by_pivot(1 + nv, SIZE_MAX);
    auto reduce = [&](AffineForm& f, BitVector& combo) {
        for (;;) {
            AffineForm v = f;
            v.set(0, false);
            std::size_t piv = v.first_one();
            if (piv >= v.size() || basis_by_pivot[piv] == SIZE_MAX) {
                return piv;
            }
            const Row& r = basis[basis_by_pivot[piv]];
            f ^= r.form;
            combo ^= r.combo;
        }
    };
    // Reduce against pivots in ascending order so that each basis row has a unique leading bit.
    for (std::size_t m : order) {
        AffineForm f = trace.forms[m];
        BitVector combo(nm);
        combo.set(m, true);
        std::size_t piv = reduce(f, combo);
        if (piv < f.size()) {
            basis_by_pivot[piv] = basis.size();
            basis.push_back({std::move(f), std::move(combo), piv});
        }
    }
    AffineForm residual = target;
    BitVector combo(nm);
    std::size_t piv = reduce(residual, combo);
    if (piv < residual.size()) {
        throw ObservableError("no measurement-record combination reproduces the initial logical");
    }

    ObservableFrame frame;
    combo.for_each_one([&](std::size_t m) {
        if (is_final[m]) {
            frame.final_readout_records.push_back(m);
            frame.final_readout_qubits.push_back(qubit_of[m]);
        } else {
            frame.records.push_back(m);
        }
    });
    AffineForm total = trace.parity(frame.all_records());
    frame.reference_value = total.get(0);
    return frame;
}

}  // namespace spoqc
