#include "spoqc/codes.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "spoqc/tableau.hpp"

namespace spoqc {

std::string family_name(Family f) { return f == Family::Honeycomb ? "honeycomb" : "surface"; }

Family family_from_name(const std::string& s) {
    if (s == "honeycomb" || s == "hc") {
        return Family::Honeycomb;
    }
    if (s == "surface" || s == "surface_cz" || s == "sc") {
        return Family::SurfaceCZ;
    }
    throw std::invalid_argument("unknown code family: " + s);
}

int default_rounds(Family f, int size) {
    if (f == Family::SurfaceCZ) {
        return size;
    }
    // Ends right after an X-check sub-round so the final X readout is protected.
    return 6 * std::max(2, size) + 1;
}

Color honeycomb_schedule(int sub_round) {
    static const Color kOrder[6] = {Color::Red, Color::Green, Color::Blue, Color::Red, Color::Blue, Color::Green};
    return kOrder[sub_round % 6];
}

namespace {

// Symmetric difference: records listed twice cancel.
std::vector<std::size_t> normalized(std::vector<std::size_t> r) {
    std::sort(r.begin(), r.end());
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < r.size();) {
        std::size_t j = k;
        while (j < r.size() && r[j] == r[k]) {
            j++;
        }
        if ((j - k) & 1) {
            out.push_back(r[k]);
        }
        k = j;
    }
    return out;
}

void append_conjugation(Circuit& c, char pauli, const std::vector<uint32_t>& qubits) {
    if (qubits.empty() || pauli == 'Z') {
        return;
    }
    c.append(pauli == 'X' ? Op::H : Op::H_YZ, qubits);
}

// Y checks: S_DAG,H on the `u` end and S,H on the `v` end maps Y(u)Y(v) to
// -Z(u)Z(v), so a Y-check outcome bit is 1 for YY = +1. Three such checks
// around each X-type plaquette make its inferred value +X^6 rather than -X^6.
void append_y_conjugation(Circuit& c, const std::vector<uint32_t>& u_side, const std::vector<uint32_t>& v_side,
                          bool undo) {
    if (!undo) {
        c.append(Op::S_DAG, u_side);
        c.append(Op::S, v_side);
        c.append(Op::H, u_side);
        c.append(Op::H, v_side);
    } else {
        c.append(Op::H, u_side);
        c.append(Op::H, v_side);
        c.append(Op::S, u_side);
        c.append(Op::S_DAG, v_side);
    }
}

}  // namespace

Circuit discover_detectors(const Circuit& bare, const std::vector<DetectorCandidate>& candidates,
                           const PauliString& initial_logical) {
    Circuit ideal = lower_ideal(bare);
    DeterminismTrace concrete = trace_determinism(ideal, false);

    std::set<std::vector<std::size_t>> seen;
    std::vector<DetectorCandidate> kept;
    for (const DetectorCandidate& cand : candidates) {
        std::vector<std::size_t> recs = normalized(cand.records);
        if (recs.empty() || seen.count(recs)) {
            continue;
        }
        if (!concrete.parity(recs).none()) {
            continue;
        }
        seen.insert(recs);
        kept.push_back({std::move(recs), cand.coords});
    }
    if (kept.empty()) {
        throw CertificationError("no candidate detector is deterministic");
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const DetectorCandidate& a, const DetectorCandidate& b) { return a.records.back() < b.records.back(); });

    DeterminismTrace symbolic = trace_determinism(ideal, true);
    PauliString logical = initial_logical;
    if (logical.num_qubits() == 0) {
        std::vector<PauliString> found = find_initial_logicals(ideal, symbolic);
        if (found.empty()) {
            throw CertificationError("memory circuit exposes no logical operator");
        }
        logical = found.front();
    }
    ObservableFrame frame;
    try {
        frame = derive_observable_frame(ideal, symbolic, logical);
    } catch (const ObservableError& e) {
        throw CertificationError(e.what());
    }
    if (frame.reference_value) {
        throw CertificationError("observable has a nonzero reference value");
    }

    Circuit out;
    out.reserve_qubits(bare.qubit_count());
    std::size_t measured = 0;
    std::size_t next = 0;
    for (const Instruction& inst : bare.instructions()) {
        out.append(inst);
        measured += inst.measurement_count();
        while (next < kept.size() && kept[next].records.back() < measured) {
            out.append_record_annotation(Op::DETECTOR, kept[next].records, kept[next].coords);
            next++;
        }
    }
    out.append_record_annotation(Op::OBSERVABLE_INCLUDE, frame.all_records(), {0});
    return out;
}

Circuit build_honeycomb(const CodeSpec& spec) {
    if (spec.family != Family::Honeycomb) {
        throw std::invalid_argument("spec is not a honeycomb code");
    }
    const int rounds = spec.rounds > 0 ? spec.rounds : default_rounds(spec.family, spec.size);
    if (rounds < 6) {
        throw std::invalid_argument("honeycomb memory needs at least one full 6-step period");
    }
    HoneycombLattice lat = make_honeycomb_lattice(spec.size);
    const uint32_t V = static_cast<uint32_t>(lat.num_vertices);
    const bool ancillas = spec.flavor == Flavor::SPOQC;

    Circuit c;
    c.reserve_qubits(ancillas ? V + static_cast<uint32_t>(lat.edges.size()) : V);
    for (uint32_t q = 0; q < V; q++) {
        c.append(Op::QUBIT_COORDS, {q}, {lat.vertex_xy[q].first, lat.vertex_xy[q].second});
    }
    if (ancillas) {
        for (uint32_t e = 0; e < lat.edges.size(); e++) {
            const auto& a = lat.vertex_xy[lat.edges[e].u];
            const auto& b = lat.vertex_xy[lat.edges[e].v];
            c.append(Op::QUBIT_COORDS, {V + e}, {(a.first + b.first) / 2, (a.second + b.second) / 2});
        }
    }
    std::vector<uint32_t> data(V);
    for (uint32_t q = 0; q < V; q++) {
        data[q] = q;
    }
    c.append(Op::RX, data);

    // rec[t][e]: record of edge e in sub-round t (only edges of that sub-round's color).
    std::vector<std::vector<std::size_t>> rec(rounds, std::vector<std::size_t>(lat.edges.size(), SIZE_MAX));
    std::size_t m = 0;
    for (int t = 0; t < rounds; t++) {
        Color col = honeycomb_schedule(t);
        char pauli = check_pauli(col);
        std::vector<uint32_t> es = lat.edges_of_color(col);
        std::vector<uint32_t> u_side;
        std::vector<uint32_t> v_side;
        for (uint32_t e : es) {
            u_side.push_back(lat.edges[e].u);
            v_side.push_back(lat.edges[e].v);
        }
        auto conjugate = [&](bool undo) {
            if (pauli == 'Y') {
                append_y_conjugation(c, u_side, v_side, undo);
            } else {
                append_conjugation(c, pauli, data);
            }
        };
        if (ancillas) {
            std::vector<uint32_t> anc;
            std::vector<uint32_t> first;
            std::vector<uint32_t> second;
            for (uint32_t e : es) {
                anc.push_back(V + e);
                first.insert(first.end(), {V + e, lat.edges[e].u});
                second.insert(second.end(), {V + e, lat.edges[e].v});
            }
            c.append(Op::RX, anc);
            conjugate(false);
            c.append(Op::RUS_CZ, first);
            c.append(Op::TICK, {});
            c.append(Op::RUS_CZ, second);
            c.append(Op::TICK, {});
            conjugate(true);
            c.append(Op::MX, anc);
        } else {
            std::vector<uint32_t> pairs;
            for (uint32_t e : es) {
                pairs.insert(pairs.end(), {lat.edges[e].u, lat.edges[e].v});
            }
            conjugate(false);
            c.append(Op::RUS_MZZ, pairs);
            c.append(Op::TICK, {});
            conjugate(true);
        }
        for (uint32_t e : es) {
            rec[t][e] = m++;
        }
    }
    c.append(Op::MX, data);
    std::vector<std::size_t> fin(V);
    for (uint32_t q = 0; q < V; q++) {
        fin[q] = m++;
    }

    std::vector<DetectorCandidate> cands;
    auto plaquette_window = [&](const HoneycombLattice::Plaquette& p, int t) {
        std::vector<std::size_t> r;
        for (uint32_t e : p.edges) {
            Color ec = lat.edges[e].color;
            r.push_back(honeycomb_schedule(t) == ec ? rec[t][e] : rec[t + 1][e]);
        }
        return r;
    };
    // Single checks and consecutive comparisons of the same check.
    for (uint32_t e = 0; e < lat.edges.size(); e++) {
        const auto& a = lat.vertex_xy[lat.edges[e].u];
        const auto& b = lat.vertex_xy[lat.edges[e].v];
        double ex = (a.first + b.first) / 2;
        double ey = (a.second + b.second) / 2;
        int prev = -1;
        for (int t = 0; t < rounds; t++) {
            if (rec[t][e] == SIZE_MAX) {
                continue;
            }
            if (prev < 0) {
                cands.push_back({{rec[t][e]}, {ex, ey, static_cast<double>(t)}});
            } else {
                cands.push_back({{rec[prev][e], rec[t][e]}, {ex, ey, static_cast<double>(t)}});
            }
            prev = t;
        }
        if (prev >= 0 && check_pauli(lat.edges[e].color) == 'X') {
            cands.push_back({{rec[prev][e], fin[lat.edges[e].u], fin[lat.edges[e].v]}, {ex, ey, static_cast<double>(rounds)}});
        }
    }
    // Plaquette inferences: two consecutive sub-rounds whose colors are the
    // plaquette's boundary colors.
    for (const auto& p : lat.plaquettes) {
        std::vector<int> windows;
        for (int t = 0; t + 1 < rounds; t++) {
            Color a = honeycomb_schedule(t);
            Color b = honeycomb_schedule(t + 1);
            if (a != p.color && b != p.color && a != b) {
                windows.push_back(t);
            }
        }
        for (std::size_t k = 0; k < windows.size(); k++) {
            std::vector<std::size_t> r = plaquette_window(p, windows[k]);
            if (k > 0) {
                std::vector<std::size_t> prev = plaquette_window(p, windows[k - 1]);
                r.insert(r.end(), prev.begin(), prev.end());
            }
            cands.push_back({r, {p.x, p.y, static_cast<double>(windows[k] + 1)}});
        }
        bool x_type = check_pauli(lat.edges[p.edges[0]].color) != 'X' && check_pauli(lat.edges[p.edges[1]].color) != 'X';
        if (x_type) {
            std::vector<std::size_t> r;
            for (uint32_t q : p.vertices) {
                r.push_back(fin[q]);
            }
            if (!windows.empty()) {
                std::vector<std::size_t> last = plaquette_window(p, windows.back());
                r.insert(r.end(), last.begin(), last.end());
            }
            cands.push_back({r, {p.x, p.y, static_cast<double>(rounds)}});
        }
    }
    return discover_detectors(c, cands, PauliString(0));
}

Circuit build_surface_cz(const CodeSpec& spec) {
    if (spec.family != Family::SurfaceCZ) {
        throw std::invalid_argument("spec is not a surface code");
    }
    SurfaceLayout lay = make_surface_layout(spec.size);
    const int d = spec.size;
    const int rounds = spec.rounds > 0 ? spec.rounds : default_rounds(spec.family, d);
    const uint32_t nd = static_cast<uint32_t>(lay.num_data());
    const uint32_t nc = static_cast<uint32_t>(lay.checks.size());

    Circuit c;
    c.reserve_qubits(nd + nc);
    for (int y = 0; y < d; y++) {
        for (int x = 0; x < d; x++) {
            c.append(Op::QUBIT_COORDS, {static_cast<uint32_t>(lay.data_index(x, y))},
                     {static_cast<double>(x), static_cast<double>(y)});
        }
    }
    for (uint32_t k = 0; k < nc; k++) {
        c.append(Op::QUBIT_COORDS, {nd + k}, {lay.checks[k].x, lay.checks[k].y});
    }
    std::vector<uint32_t> data(nd);
    std::vector<uint32_t> anc(nc);
    for (uint32_t q = 0; q < nd; q++) {
        data[q] = q;
    }
    for (uint32_t k = 0; k < nc; k++) {
        anc[k] = nd + k;
    }
    c.append(Op::RX, data);

    // Data qubits feeding an X check sit in the Hadamard frame while they interact.
    std::vector<uint8_t> frame(nd, 0);
    auto switch_frames = [&](const std::vector<uint8_t>& want) {
        std::vector<uint32_t> flip;
        for (uint32_t q = 0; q < nd; q++) {
            if (frame[q] != want[q]) {
                flip.push_back(q);
                frame[q] = want[q];
            }
        }
        if (!flip.empty()) {
            c.append(Op::H, flip);
        }
    };

    std::vector<std::vector<std::size_t>> rec(rounds, std::vector<std::size_t>(nc));
    std::size_t m = 0;
    for (int r = 0; r < rounds; r++) {
        c.append(Op::RX, anc);
        for (int layer = 0; layer < 4; layer++) {
            std::vector<uint8_t> want = frame;
            std::vector<uint32_t> pairs;
            for (uint32_t k = 0; k < nc; k++) {
                int q = lay.checks[k].data[layer];
                if (q < 0) {
                    continue;
                }
                want[q] = lay.checks[k].x_type;
                pairs.insert(pairs.end(), {nd + k, static_cast<uint32_t>(q)});
            }
            switch_frames(want);
            c.append(Op::RUS_CZ, pairs);
            c.append(Op::TICK, {});
        }
        switch_frames(std::vector<uint8_t>(nd, 0));
        c.append(Op::MX, anc);
        for (uint32_t k = 0; k < nc; k++) {
            rec[r][k] = m++;
        }
    }
    c.append(Op::MX, data);
    std::vector<std::size_t> fin(nd);
    for (uint32_t q = 0; q < nd; q++) {
        fin[q] = m++;
    }

    std::vector<DetectorCandidate> cands;
    for (int r = 0; r < rounds; r++) {
        for (uint32_t k = 0; k < nc; k++) {
            const auto& ch = lay.checks[k];
            std::vector<std::size_t> recs = {rec[r][k]};
            if (r > 0) {
                recs.push_back(rec[r - 1][k]);
            }
            cands.push_back({recs, {ch.x, ch.y, static_cast<double>(r)}});
        }
    }
    for (uint32_t k = 0; k < nc; k++) {
        const auto& ch = lay.checks[k];
        if (!ch.x_type) {
            continue;
        }
        std::vector<std::size_t> recs = {rec[rounds - 1][k]};
        for (int q : ch.data) {
            if (q >= 0) {
                recs.push_back(fin[q]);
            }
        }
        cands.push_back({recs, {ch.x, ch.y, static_cast<double>(rounds)}});
    }
    PauliString logical(nd + nc);
    for (int x = 0; x < d; x++) {
        logical.set(lay.data_index(x, 0), 'X');
    }
    return discover_detectors(c, cands, logical);
}

Circuit build_code(const CodeSpec& spec) {
    return spec.family == Family::Honeycomb ? build_honeycomb(spec) : build_surface_cz(spec);
}

ResourceCount resource_count(const CodeSpec& spec) {
    if (spec.family != Family::Honeycomb) {
        throw std::invalid_argument("resource counting covers the honeycomb code");
    }
    HoneycombLattice lat = make_honeycomb_lattice(spec.size);
    std::size_t v = lat.num_vertices;
    std::size_t e = lat.edges.size();
    if (spec.flavor == Flavor::SPOQC) {
        return {v + e, 2 * e};
    }
    return {v, e};
}

}  // namespace spoqc
