#include "spoqc/decode.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <sstream>

#include "spoqc/rng.hpp"

namespace spoqc {

Symptom combine(const Symptom& a, const Symptom& b) {
    Symptom out;
    std::set_symmetric_difference(a.detectors.begin(), a.detectors.end(), b.detectors.begin(), b.detectors.end(),
                                  std::back_inserter(out.detectors));
    out.observables = a.observables ^ b.observables;
    return out;
}

Symptom ErrorMechanism::symptom() const {
    Symptom s;
    for (const Symptom& p : parts) {
        s = combine(s, p);
    }
    return s;
}

namespace {

std::string format_probability(double p) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, r.ptr);
}

void append_symptom(std::string& out, const Symptom& s) {
    bool first = true;
    auto sep = [&] {
        if (!first) {
            out += ' ';
        }
        first = false;
    };
    for (uint32_t d : s.detectors) {
        sep();
        out += 'D';
        out += std::to_string(d);
    }
    for (int o = 0; o < 64; o++) {
        if ((s.observables >> o) & 1) {
            sep();
            out += 'L';
            out += std::to_string(o);
        }
    }
}

Symptom to_symptom(const BitVector& v, std::size_t num_detectors) {
    Symptom s;
    v.for_each_one([&](std::size_t k) {
        if (k < num_detectors) {
            s.detectors.push_back(static_cast<uint32_t>(k));
        } else {
            s.observables |= uint64_t{1} << (k - num_detectors);
        }
    });
    return s;
}

double xor_merge(double p1, double p2) { return p1 * (1 - p2) + p2 * (1 - p1); }

}  // namespace

std::string DetectorErrorModel::str() const {
    std::string out;
    for (const ErrorMechanism& e : errors) {
        out += "error(" + format_probability(e.probability) + ")";
        for (std::size_t k = 0; k < e.parts.size(); k++) {
            out += k == 0 ? " " : " ^ ";
            append_symptom(out, e.parts[k]);
        }
        out += '\n';
    }
    return out;
}

DetectorErrorModel parse_dem(const std::string& text) {
    DetectorErrorModel dem;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) {
            continue;
        }
        if (tok.rfind("error(", 0) != 0 || tok.back() != ')') {
            throw std::invalid_argument("DEM line " + std::to_string(lineno) + ": expected error(p)");
        }
        ErrorMechanism e;
        e.probability = std::stod(tok.substr(6, tok.size() - 7));
        e.parts.emplace_back();
        while (ls >> tok) {
            if (tok == "^") {
                e.parts.emplace_back();
            } else if (tok[0] == 'D') {
                uint32_t d = static_cast<uint32_t>(std::stoul(tok.substr(1)));
                e.parts.back().detectors.push_back(d);
                dem.num_detectors = std::max<std::size_t>(dem.num_detectors, d + 1);
            } else if (tok[0] == 'L') {
                unsigned o = static_cast<unsigned>(std::stoul(tok.substr(1)));
                if (o >= 64) {
                    throw std::invalid_argument("DEM line " + std::to_string(lineno) + ": observable index >= 64");
                }
                e.parts.back().observables ^= uint64_t{1} << o;
                dem.num_observables = std::max<std::size_t>(dem.num_observables, o + 1);
            } else {
                throw std::invalid_argument("DEM line " + std::to_string(lineno) + ": bad target " + tok);
            }
        }
        for (Symptom& s : e.parts) {
            std::sort(s.detectors.begin(), s.detectors.end());
        }
        dem.errors.push_back(std::move(e));
    }
    return dem;
}

std::vector<ErrorComponent> error_components(const Circuit& c) {
    if (c.level() != CircuitLevel::Instance) {
        throw std::invalid_argument("error analysis requires an Instance circuit");
    }
    const std::size_t n = c.qubit_count();
    Annotations ann = collect_annotations(c);
    const std::size_t nd = ann.detectors.size();
    const std::size_t width = nd + ann.observables.size();
    if (ann.observables.size() > 64) {
        throw std::invalid_argument("at most 64 observables are supported");
    }
    std::vector<BitVector> rec(c.measurement_count(), BitVector(width));
    for (std::size_t d = 0; d < nd; d++) {
        for (std::size_t m : ann.detectors[d]) {
            rec[m].flip(d);
        }
    }
    for (std::size_t o = 0; o < ann.observables.size(); o++) {
        for (std::size_t m : ann.observables[o]) {
            rec[m].flip(nd + o);
        }
    }
    // sx[q] (sz[q]): what an X (Z) error on q at the current point flips.
    std::vector<BitVector> sx(n, BitVector(width));
    std::vector<BitVector> sz(n, BitVector(width));
    std::vector<ErrorComponent> out;
    std::size_t m = c.measurement_count();
    const auto& insts = c.instructions();
    for (std::size_t idx = insts.size(); idx-- > 0;) {
        const Instruction& inst = insts[idx];
        const auto& t = inst.targets;
        switch (inst.op) {
            case Op::R:
            case Op::RX:
                for (const Target& q : t) {
                    sx[q.value].clear();
                    sz[q.value].clear();
                }
                break;
            case Op::H:
                for (const Target& q : t) {
                    std::swap(sx[q.value], sz[q.value]);
                }
                break;
            case Op::H_YZ:
                for (const Target& q : t) {
                    sz[q.value] ^= sx[q.value];
                }
                break;
            case Op::S:
            case Op::S_DAG:
                for (const Target& q : t) {
                    sx[q.value] ^= sz[q.value];
                }
                break;
            case Op::CZ:
                for (std::size_t k = t.size(); k >= 2; k -= 2) {
                    uint32_t a = t[k - 2].value;
                    uint32_t b = t[k - 1].value;
                    sx[a] ^= sz[b];
                    sx[b] ^= sz[a];
                }
                break;
            case Op::M:
            case Op::MX:
                for (std::size_t k = t.size(); k-- > 0;) {
                    m--;
                    (inst.op == Op::M ? sx : sz)[t[k].value] ^= rec[m];
                }
                break;
            case Op::MZZ:
            case Op::MXX:
            case Op::MYY:
                for (std::size_t k = t.size(); k >= 2; k -= 2) {
                    m--;
                    for (uint32_t q : {t[k - 2].value, t[k - 1].value}) {
                        if (inst.op != Op::MXX) {
                            sx[q] ^= rec[m];
                        }
                        if (inst.op != Op::MZZ) {
                            sz[q] ^= rec[m];
                        }
                    }
                }
                break;
            case Op::X_ERROR:
            case Op::Y_ERROR:
            case Op::Z_ERROR: {
                char kind = inst.op == Op::X_ERROR ? 'X' : inst.op == Op::Y_ERROR ? 'Y' : 'Z';
                for (std::size_t k = t.size(); k-- > 0;) {
                    uint32_t q = t[k].value;
                    BitVector s(width);
                    if (kind != 'Z') {
                        s ^= sx[q];
                    }
                    if (kind != 'X') {
                        s ^= sz[q];
                    }
                    out.push_back({idx, k, kind, inst.args[0], to_symptom(s, nd)});
                }
                break;
            }
            case Op::DPH2: {
                double r = dph2_component_probability(inst.args[0]);
                for (std::size_t k = t.size(); k >= 2; k -= 2) {
                    uint32_t a = t[k - 2].value;
                    uint32_t b = t[k - 1].value;
                    BitVector both = sz[a];
                    both ^= sz[b];
                    out.push_back({idx, k - 2, 'c', r, to_symptom(both, nd)});
                    out.push_back({idx, k - 2, 'b', r, to_symptom(sz[b], nd)});
                    out.push_back({idx, k - 2, 'a', r, to_symptom(sz[a], nd)});
                }
                break;
            }
            default:
                break;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double dph2_component_probability(double p) {
    // Each of ZI, IZ, ZZ must occur with total probability p/4, i.e. r(1-r) = p/4.
    return 0.5 * (1 - std::sqrt(std::max(0.0, 1 - p)));
}

std::vector<Symptom> decompose(const Symptom& s, const std::vector<Symptom>& known) {
    if (s.detectors.size() <= 2) {
        return {s};
    }
    std::map<std::vector<uint32_t>, std::vector<uint64_t>> options;
    for (const Symptom& k : known) {
        if (k.detectors.empty() || k.detectors.size() > 2) {
            continue;
        }
        auto& v = options[k.detectors];
        if (std::find(v.begin(), v.end(), k.observables) == v.end()) {
            v.push_back(k.observables);
        }
    }
    std::vector<Symptom> parts;
    std::size_t budget = 200000;
    std::function<bool(std::vector<uint32_t>, uint64_t)> rec = [&](std::vector<uint32_t> rem, uint64_t obs) -> bool {
        if (budget-- == 0) {
            return false;
        }
        if (rem.empty()) {
            return obs == 0;
        }
        uint32_t a = rem[0];
        for (std::size_t j = 1; j < rem.size(); j++) {
            auto it = options.find({a, rem[j]});
            if (it == options.end()) {
                continue;
            }
            std::vector<uint32_t> next;
            for (std::size_t k = 1; k < rem.size(); k++) {
                if (k != j) {
                    next.push_back(rem[k]);
                }
            }
            for (uint64_t o : it->second) {
                parts.push_back({{a, rem[j]}, o});
                if (rec(next, obs ^ o)) {
                    return true;
                }
                parts.pop_back();
            }
        }
        auto it = options.find({a});
        if (it != options.end()) {
            std::vector<uint32_t> next(rem.begin() + 1, rem.end());
            for (uint64_t o : it->second) {
                parts.push_back({{a}, o});
                if (rec(next, obs ^ o)) {
                    return true;
                }
                parts.pop_back();
            }
        }
        return false;
    };
    if (!rec(s.detectors, s.observables)) {
        std::string d;
        append_symptom(d, s);
        throw DecompositionError("cannot split error with symptom {" + d + "} into graphlike parts");
    }
    return parts;
}

DetectorErrorModel build_dem(const Circuit& c) {
    Annotations ann = collect_annotations(c);
    DetectorErrorModel dem;
    dem.num_detectors = ann.detectors.size();
    dem.num_observables = ann.observables.size();
    std::map<Symptom, std::size_t> index;
    std::vector<std::pair<Symptom, double>> merged;
    for (const ErrorComponent& comp : error_components(c)) {
        if (comp.symptom.empty() || comp.probability <= 0) {
            continue;
        }
        auto [it, fresh] = index.try_emplace(comp.symptom, merged.size());
        if (fresh) {
            merged.push_back({comp.symptom, comp.probability});
        } else {
            double& p = merged[it->second].second;
            p = xor_merge(p, comp.probability);
        }
    }
    std::vector<Symptom> known;
    for (const auto& [s, p] : merged) {
        if (s.detectors.size() <= 2) {
            known.push_back(s);
        }
    }
    for (auto& [s, p] : merged) {
        ErrorMechanism e;
        e.probability = p;
        e.parts = decompose(s, known);
        dem.errors.push_back(std::move(e));
    }
    return dem;
}

double edge_weight(double p) {
    if (p >= 0.5) {
        return 0;
    }
    return std::log((1 - p) / p);
}

void MatchingGraph::add_edge(uint32_t a, uint32_t b, double p, uint64_t observables) {
    if (a > b) {
        std::swap(a, b);
    }
    if (b > num_detectors_ || a == b) {
        throw std::invalid_argument("bad matching-graph edge");
    }
    auto key = std::make_tuple(a, b, observables);
    auto it = merge_keys_.find(key);
    if (it != merge_keys_.end()) {
        Edge& e = edges_[it->second];
        e.probability = xor_merge(e.probability, p);
        e.weight = edge_weight(e.probability);
        has_zero_ = has_zero_ || e.weight == 0;
        return;
    }
    uint32_t id = static_cast<uint32_t>(edges_.size());
    merge_keys_[key] = id;
    edges_.push_back({a, b, p, edge_weight(p), observables});
    has_zero_ = has_zero_ || edges_.back().weight == 0;
    adj_[a].push_back(id);
    adj_[b].push_back(id);
    if (b == num_detectors_) {
        has_boundary_ = true;
    }
}

MatchingGraph MatchingGraph::from_dem(const DetectorErrorModel& dem) {
    MatchingGraph g(dem.num_detectors);
    for (const ErrorMechanism& e : dem.errors) {
        for (const Symptom& s : e.parts) {
            if (s.detectors.size() == 1) {
                g.add_edge(s.detectors[0], g.boundary(), e.probability, s.observables);
            } else if (s.detectors.size() == 2) {
                g.add_edge(s.detectors[0], s.detectors[1], e.probability, s.observables);
            }
        }
    }
    return g;
}

namespace {

// Spanning forest of the zero-weight subgraph, rooted at the boundary where
// possible. Gives each node its component and the observable parity and
// edge of its path to the root.
struct ZeroForest {
    std::vector<int32_t> comp;
    std::vector<uint64_t> root_obs;
    std::vector<int32_t> parent_edge;
    std::vector<uint8_t> comp_has_boundary;

    explicit ZeroForest(const MatchingGraph& g) {
        const std::size_t nn = g.num_detectors() + 1;
        comp.assign(nn, -1);
        root_obs.assign(nn, 0);
        parent_edge.assign(nn, -1);
        std::vector<uint32_t> order;
        order.push_back(g.boundary());
        for (uint32_t v = 0; v < g.num_detectors(); v++) {
            order.push_back(v);
        }
        std::deque<uint32_t> q;
        for (uint32_t root : order) {
            if (comp[root] >= 0) {
                continue;
            }
            int32_t id = static_cast<int32_t>(comp_has_boundary.size());
            comp_has_boundary.push_back(root == g.boundary());
            comp[root] = id;
            q.push_back(root);
            while (!q.empty()) {
                uint32_t v = q.front();
                q.pop_front();
                for (uint32_t e : g.adjacency()[v]) {
                    const auto& ed = g.edges()[e];
                    if (ed.weight != 0) {
                        continue;
                    }
                    uint32_t w = ed.a == v ? ed.b : ed.a;
                    if (comp[w] >= 0) {
                        continue;
                    }
                    comp[w] = id;
                    root_obs[w] = root_obs[v] ^ ed.observables;
                    parent_edge[w] = static_cast<int32_t>(e);
                    q.push_back(w);
                }
            }
        }
    }
};

struct PathTree {
    std::vector<double> dist;
    std::vector<int32_t> pred_edge;
};

PathTree dijkstra(const MatchingGraph& g, uint32_t src) {
    const std::size_t nn = g.num_detectors() + 1;
    PathTree t{std::vector<double>(nn, std::numeric_limits<double>::infinity()), std::vector<int32_t>(nn, -1)};
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    t.dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > t.dist[v]) {
            continue;
        }
        // Paths do not pass through the boundary.
        if (v == g.boundary() && v != src) {
            continue;
        }
        for (uint32_t e : g.adjacency()[v]) {
            const auto& ed = g.edges()[e];
            uint32_t w = ed.a == v ? ed.b : ed.a;
            double nd = d + ed.weight;
            if (nd < t.dist[w]) {
                t.dist[w] = nd;
                t.pred_edge[w] = static_cast<int32_t>(e);
                pq.push({nd, w});
            }
        }
    }
    return t;
}

void walk_path(const MatchingGraph& g, const PathTree& t, uint32_t src, uint32_t dst, uint64_t& obs,
               std::vector<uint32_t>& edges) {
    uint32_t v = dst;
    while (v != src) {
        int32_t e = t.pred_edge[v];
        const auto& ed = g.edges()[e];
        obs ^= ed.observables;
        edges.push_back(static_cast<uint32_t>(e));
        v = ed.a == v ? ed.b : ed.a;
    }
}

}  // namespace

Decoding mwpm_decode(const MatchingGraph& g, const std::vector<uint32_t>& defects) {
    Decoding out;
    if (defects.empty()) {
        return out;
    }
    std::vector<uint32_t> rest;
    std::vector<uint32_t> toggled;
    if (g.has_zero_weight_edges()) {
        ZeroForest zf(g);
        std::map<int32_t, std::vector<uint32_t>> by_comp;
        for (uint32_t d : defects) {
            by_comp[zf.comp[d]].push_back(d);
        }
        for (auto& [cid, ds] : by_comp) {
            std::size_t keep = 0;
            if (!zf.comp_has_boundary[cid] && ds.size() % 2 == 1) {
                // One defect must leave the component; the lowest index does.
                rest.push_back(ds[0]);
                keep = 1;
            }
            for (std::size_t k = keep; k < ds.size(); k++) {
                uint32_t v = ds[k];
                out.observables ^= zf.root_obs[v];
                while (zf.parent_edge[v] >= 0) {
                    uint32_t e = static_cast<uint32_t>(zf.parent_edge[v]);
                    toggled.push_back(e);
                    const auto& ed = g.edges()[e];
                    v = ed.a == v ? ed.b : ed.a;
                }
            }
        }
        std::sort(rest.begin(), rest.end());
    } else {
        rest = defects;
    }

    const std::size_t n = rest.size();
    if (n > 0) {
        const bool boundary = g.has_boundary_edges();
        if (!boundary && n % 2 == 1) {
            throw std::runtime_error("odd number of defects and no boundary");
        }
        std::vector<PathTree> trees;
        trees.reserve(n);
        for (uint32_t d : rest) {
            trees.push_back(dijkstra(g, d));
        }
        const double scale = 1048576.0;
        const std::size_t nv = boundary ? 2 * n : n;
        std::vector<std::vector<int64_t>> w(nv, std::vector<int64_t>(nv, -1));
        auto to_int = [&](double x) { return static_cast<int64_t>(std::llround(x * scale)); };
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = i + 1; j < n; j++) {
                double dij = trees[i].dist[rest[j]];
                if (std::isfinite(dij)) {
                    w[i][j] = w[j][i] = to_int(dij);
                }
            }
            if (boundary) {
                double db = trees[i].dist[g.boundary()];
                if (std::isfinite(db)) {
                    w[i][n + i] = w[n + i][i] = to_int(db);
                }
                for (std::size_t j = i + 1; j < n; j++) {
                    w[n + i][n + j] = w[n + j][n + i] = 0;
                }
            }
        }
        std::vector<int> mate = min_weight_perfect_matching(w);
        for (std::size_t i = 0; i < n; i++) {
            std::size_t j = static_cast<std::size_t>(mate[i]);
            if (j < n && j > i) {
                walk_path(g, trees[i], rest[i], rest[j], out.observables, toggled);
                out.weight += trees[i].dist[rest[j]];
            } else if (j >= n) {
                walk_path(g, trees[i], rest[i], g.boundary(), out.observables, toggled);
                out.weight += trees[i].dist[g.boundary()];
            }
        }
    }
    std::sort(toggled.begin(), toggled.end());
    for (std::size_t k = 0; k < toggled.size();) {
        std::size_t j = k;
        while (j < toggled.size() && toggled[j] == toggled[k]) {
            j++;
        }
        if ((j - k) & 1) {
            out.correction_edges.push_back(toggled[k]);
        }
        k = j;
    }
    return out;
}

double classify_symptoms(const std::vector<Symptom>& mechanisms, std::size_t num_detectors) {
    const std::size_t width = num_detectors + 64;
    std::vector<BitVector> pivot_row(num_detectors);
    std::vector<uint8_t> has(num_detectors, 0);
    for (const Symptom& s : mechanisms) {
        BitVector v(width);
        for (uint32_t d : s.detectors) {
            v.flip(d);
        }
        for (int o = 0; o < 64; o++) {
            if ((s.observables >> o) & 1) {
                v.flip(num_detectors + o);
            }
        }
        for (;;) {
            std::size_t p = v.first_one();
            if (p >= num_detectors) {
                if (p < width) {
                    return 0.5;
                }
                break;
            }
            if (!has[p]) {
                pivot_row[p] = std::move(v);
                has[p] = 1;
                break;
            }
            v ^= pivot_row[p];
        }
    }
    return 0;
}

double classify_erasure_instance(const ErasureInstance& inst) {
    Annotations ann = collect_annotations(inst.lowered);
    std::vector<Symptom> mechs;
    for (const ErrorComponent& c : error_components(inst.lowered)) {
        if (c.probability == 0.5 && !c.symptom.empty()) {
            mechs.push_back(c.symptom);
        }
    }
    return classify_symptoms(mechs, ann.detectors.size());
}

std::size_t estimate_graph_distance(const DetectorErrorModel& dem) {
    MatchingGraph g = MatchingGraph::from_dem(dem);
    const std::size_t nn = g.num_detectors() + 1;
    // Undetectable parts flipping the observable give distance 1.
    for (const ErrorMechanism& e : dem.errors) {
        if (e.parts.size() == 1 && e.parts[0].detectors.empty() && (e.parts[0].observables & 1)) {
            return 1;
        }
    }
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::vector<uint32_t> dist(2 * nn);
    std::deque<uint32_t> q;
    for (uint32_t s = 0; s < nn; s++) {
        if (g.adjacency()[s].empty()) {
            continue;
        }
        std::fill(dist.begin(), dist.end(), UINT32_MAX);
        dist[2 * s] = 0;
        q.assign(1, 2 * s);
        while (!q.empty()) {
            uint32_t x = q.front();
            q.pop_front();
            if (dist[x] + 1 >= best) {
                break;
            }
            uint32_t v = x / 2;
            uint32_t par = x & 1;
            for (uint32_t e : g.adjacency()[v]) {
                const auto& ed = g.edges()[e];
                uint32_t w = ed.a == v ? ed.b : ed.a;
                uint32_t y = 2 * w + (par ^ (ed.observables & 1));
                if (dist[y] == UINT32_MAX) {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        if (dist[2 * s + 1] != UINT32_MAX) {
            best = std::min<std::size_t>(best, dist[2 * s + 1]);
        }
    }
    return best == std::numeric_limits<std::size_t>::max() ? 0 : best;
}

ErasureDecoder::ErasureDecoder(const Circuit& base) {
    LoweredCircuit all = lower(base, std::vector<uint8_t>(base.rus_count(), 1));
    Annotations ann = collect_annotations(all.circuit);
    num_detectors_ = ann.detectors.size();
    // Error-channel targets are sorted on append, so components are keyed by qubit.
    std::map<std::pair<std::size_t, uint32_t>, Symptom> at;
    for (ErrorComponent& c : error_components(all.circuit)) {
        uint32_t q = all.circuit.instructions()[c.instruction].targets[c.target].value;
        at[{c.instruction, q}] = std::move(c.symptom);
    }
    components_.resize(base.rus_count());
    parts_.resize(base.rus_count());
    for (std::size_t s = 0; s < all.sites.size(); s++) {
        const ErasureSite& site = all.sites[s];
        std::size_t k = all.site_coin[s];
        components_[k][0] = at.at({site.instruction, site.qubit_a});
        components_[k][1] = at.at({site.instruction, site.qubit_b});
    }
    std::vector<Symptom> known;
    for (const auto& pair : components_) {
        for (const Symptom& s : pair) {
            if (!s.empty() && s.detectors.size() <= 2) {
                known.push_back(s);
            }
        }
    }
    // Pauli-channel symptoms supply graphlike pieces that erasures alone
    // never produce (e.g. at time boundaries).
    NoiseModel probe;
    probe.distinguishability = 0.1;
    probe.decoherence_ratio = 0.1;
    for (const ErrorComponent& c : error_components(apply_pauli_noise(lower_ideal(base), probe))) {
        if (!c.symptom.empty() && c.symptom.detectors.size() <= 2) {
            known.push_back(c.symptom);
        }
    }
    for (std::size_t k = 0; k < components_.size(); k++) {
        for (int side = 0; side < 2; side++) {
            const Symptom& s = components_[k][side];
            if (!s.empty()) {
                parts_[k][side] = decompose(s, known);
            }
        }
    }
}

MatchingGraph ErasureDecoder::instance_graph(const std::vector<uint8_t>& coins) const {
    MatchingGraph g(num_detectors_);
    for (std::size_t k = 0; k < coins.size(); k++) {
        if (!coins[k]) {
            continue;
        }
        for (int side = 0; side < 2; side++) {
            for (const Symptom& p : parts_[k][side]) {
                if (p.detectors.size() == 1) {
                    g.add_edge(p.detectors[0], g.boundary(), 0.5, p.observables);
                } else if (p.detectors.size() == 2) {
                    g.add_edge(p.detectors[0], p.detectors[1], 0.5, p.observables);
                }
            }
        }
    }
    return g;
}

ErasureDecoder::InstanceResult ErasureDecoder::run(const std::vector<uint8_t>& coins, std::size_t shots,
                                                   uint64_t seed) const {
    if (coins.size() != components_.size()) {
        throw std::invalid_argument("need one coin per RUS operation");
    }
    std::vector<const Symptom*> fired;
    for (std::size_t k = 0; k < coins.size(); k++) {
        if (coins[k]) {
            for (int side = 0; side < 2; side++) {
                if (!components_[k][side].empty()) {
                    fired.push_back(&components_[k][side]);
                }
            }
        }
    }
    std::vector<Symptom> mechs;
    mechs.reserve(fired.size());
    for (const Symptom* s : fired) {
        mechs.push_back(*s);
    }
    InstanceResult res{classify_symptoms(mechs, num_detectors_), shots, 0};

    // Zero-weight matching predicts the XOR of root-path parities of the
    // defects, which is linear in the fired components: component c
    // contributes residual(c) = obs(c) ^ XOR_{d in c} root_obs(d).
    MatchingGraph g = instance_graph(coins);
    ZeroForest zf(g);
    std::vector<uint64_t> residual(fired.size());
    for (std::size_t i = 0; i < fired.size(); i++) {
        uint64_t r = fired[i]->observables;
        for (uint32_t d : fired[i]->detectors) {
            r ^= zf.root_obs[d];
        }
        residual[i] = r & 1;
    }
    Rng rng(derive_seed(seed, stream_tag::kShots, 0));
    for (std::size_t done = 0; done < shots; done += 64) {
        uint64_t wrong = 0;
        for (std::size_t i = 0; i < fired.size(); i++) {
            uint64_t fires = rng();
            if (residual[i]) {
                wrong ^= fires;
            }
        }
        std::size_t take = std::min<std::size_t>(64, shots - done);
        if (take < 64) {
            wrong &= (uint64_t{1} << take) - 1;
        }
        res.mismatches += static_cast<std::size_t>(std::popcount(wrong));
    }
    return res;
}

}  // namespace spoqc
