// Maximum-weight matching in general graphs (Edmonds' blossom algorithm with
// dual variables, O(n^3)), integer weights.

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "spoqc/decode.hpp"

namespace spoqc {

namespace {

struct WEdge {
    int i;
    int j;
    int64_t w;
};

class Blossom {
  public:
    Blossom(int nvertex, std::vector<WEdge> edges, bool maxcardinality)
        : n_(nvertex), edges_(std::move(edges)), maxcard_(maxcardinality) {}

    std::vector<int> solve();

  private:
    int64_t slack(int k) const { return dual_[edges_[k].i] + dual_[edges_[k].j] - 2 * edges_[k].w; }

    void leaves(int b, std::vector<int>& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : childs_[b]) {
            leaves(t, out);
        }
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    static int wrap(int j, int n) { return ((j % n) + n) % n; }

    int n_;
    std::vector<WEdge> edges_;
    bool maxcard_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, parent_, base_, bestedge_, unused_;
    std::vector<std::vector<int>> childs_, endps_, bestedges_;
    std::vector<uint8_t> has_bestedges_;
    std::vector<int64_t> dual_;
    std::vector<uint8_t> allow_;
    std::vector<int> queue_;
};

void Blossom::assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        leaves(b, queue_);
    } else if (t == 2) {
        int base = base_[b];
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

int Blossom::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = base_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) {
            std::swap(v, w);
        }
    }
    for (int b : path) {
        label_[b] = 1;
    }
    return base;
}

void Blossom::add_blossom(int base, int k) {
    int v = edges_[k].i;
    int w = edges_[k].j;
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unused_.back();
    unused_.pop_back();
    base_[b] = base;
    parent_[b] = -1;
    parent_[bb] = b;
    std::vector<int> path;
    std::vector<int> endps;
    while (bv != bb) {
        parent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        parent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    childs_[b] = path;
    endps_[b] = endps;
    for (int leaf : leaves(b)) {
        if (label_[inblossom_[leaf]] == 2) {
            queue_.push_back(leaf);
        }
        inblossom_[leaf] = b;
    }
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int sub : path) {
        std::vector<std::vector<int>> nblists;
        if (!has_bestedges_[sub]) {
            for (int leaf : leaves(sub)) {
                std::vector<int> l;
                for (int p : neighbend_[leaf]) {
                    l.push_back(p / 2);
                }
                nblists.push_back(std::move(l));
            }
        } else {
            nblists.push_back(bestedges_[sub]);
        }
        for (const auto& nb : nblists) {
            for (int kk : nb) {
                int i = edges_[kk].i;
                int j = edges_[kk].j;
                if (inblossom_[j] == b) {
                    std::swap(i, j);
                }
                int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = kk;
                }
            }
        }
        bestedges_[sub].clear();
        has_bestedges_[sub] = 0;
        bestedge_[sub] = -1;
    }
    bestedges_[b].clear();
    for (int kk : bestedgeto) {
        if (kk != -1) {
            bestedges_[b].push_back(kk);
        }
    }
    has_bestedges_[b] = 1;
    bestedge_[b] = -1;
    for (int kk : bestedges_[b]) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
            bestedge_[b] = kk;
        }
    }
}

void Blossom::expand_blossom(int b, bool endstage) {
    for (int s : childs_[b]) {
        parent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dual_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            for (int leaf : leaves(s)) {
                inblossom_[leaf] = s;
            }
        }
    }
    if (!endstage && label_[b] == 2) {
        const auto& ch = childs_[b];
        const int len = static_cast<int>(ch.size());
        int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
        int jstep;
        int endptrick;
        if (j & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[endps_[b][wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allow_[endps_[b][wrap(j - endptrick, len)] / 2] = 1;
            j += jstep;
            p = endps_[b][wrap(j - endptrick, len)] ^ endptrick;
            allow_[p / 2] = 1;
            j += jstep;
        }
        int bv = ch[wrap(j, len)];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (ch[wrap(j, len)] != entrychild) {
            bv = ch[wrap(j, len)];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            int found = -1;
            for (int leaf : leaves(bv)) {
                if (label_[leaf] != 0) {
                    found = leaf;
                    break;
                }
            }
            if (found >= 0) {
                label_[found] = 0;
                label_[endpoint_[mate_[base_[bv]]]] = 0;
                assign_label(found, 2, labelend_[found]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    base_[b] = -1;
    bestedges_[b].clear();
    has_bestedges_[b] = 0;
    bestedge_[b] = -1;
    unused_.push_back(b);
}

void Blossom::augment_blossom(int b, int v) {
    int t = v;
    while (parent_[t] != b) {
        t = parent_[t];
    }
    if (t >= n_) {
        augment_blossom(t, v);
    }
    auto& ch = childs_[b];
    auto& ep = endps_[b];
    const int len = static_cast<int>(ch.size());
    int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = ch[wrap(j, len)];
        int p = ep[wrap(j - endptrick, len)] ^ endptrick;
        if (t >= n_) {
            augment_blossom(t, endpoint_[p]);
        }
        j += jstep;
        t = ch[wrap(j, len)];
        if (t >= n_) {
            augment_blossom(t, endpoint_[p ^ 1]);
        }
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    base_[b] = base_[ch[0]];
}

void Blossom::augment_matching(int k) {
    int v = edges_[k].i;
    int w = edges_[k].j;
    for (auto [s, p] : {std::pair<int, int>{v, 2 * k + 1}, std::pair<int, int>{w, 2 * k}}) {
        for (;;) {
            int bs = inblossom_[s];
            if (bs >= n_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            int t = endpoint_[labelend_[bs]];
            int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            int j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) {
                augment_blossom(bt, j);
            }
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> Blossom::solve() {
    const int nedge = static_cast<int>(edges_.size());
    if (n_ == 0) {
        return {};
    }
    int64_t maxweight = 0;
    for (const auto& e : edges_) {
        maxweight = std::max(maxweight, e.w);
    }
    endpoint_.resize(2 * nedge);
    neighbend_.assign(n_, {});
    for (int k = 0; k < nedge; k++) {
        endpoint_[2 * k] = edges_[k].i;
        endpoint_[2 * k + 1] = edges_[k].j;
        neighbend_[edges_[k].i].push_back(2 * k + 1);
        neighbend_[edges_[k].j].push_back(2 * k);
    }
    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    for (int v = 0; v < n_; v++) {
        inblossom_[v] = v;
    }
    parent_.assign(2 * n_, -1);
    childs_.assign(2 * n_, {});
    base_.assign(2 * n_, -1);
    for (int v = 0; v < n_; v++) {
        base_[v] = v;
    }
    endps_.assign(2 * n_, {});
    bestedge_.assign(2 * n_, -1);
    bestedges_.assign(2 * n_, {});
    has_bestedges_.assign(2 * n_, 0);
    unused_.clear();
    for (int b = 2 * n_ - 1; b >= n_; b--) {
        unused_.push_back(b);
    }
    // Python's list.pop() takes from the end; keep the same order.
    std::reverse(unused_.begin(), unused_.end());
    dual_.assign(2 * n_, 0);
    for (int v = 0; v < n_; v++) {
        dual_[v] = maxweight;
    }
    allow_.assign(nedge, 0);

    for (int stage = 0; stage < n_; stage++) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n_; b < 2 * n_; b++) {
            bestedges_[b].clear();
            has_bestedges_[b] = 0;
        }
        std::fill(allow_.begin(), allow_.end(), 0);
        queue_.clear();
        for (int v = 0; v < n_; v++) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }
        bool augmented = false;
        for (;;) {
            while (!queue_.empty() && !augmented) {
                int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    int k = p / 2;
                    int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) {
                        continue;
                    }
                    int64_t kslack = 0;
                    if (!allow_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) {
                            allow_[k] = 1;
                        }
                    }
                    if (allow_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                            bestedge_[b] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) {
                break;
            }
            int deltatype = -1;
            int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!maxcard_) {
                deltatype = 1;
                delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
            }
            for (int v = 0; v < n_; v++) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n_; b++) {
                if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    int64_t d = slack(bestedge_[b]) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n_; b < 2 * n_; b++) {
                if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
                    delta = dual_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
            }
            for (int v = 0; v < n_; v++) {
                if (label_[inblossom_[v]] == 1) {
                    dual_[v] -= delta;
                } else if (label_[inblossom_[v]] == 2) {
                    dual_[v] += delta;
                }
            }
            for (int b = n_; b < 2 * n_; b++) {
                if (base_[b] >= 0 && parent_[b] == -1) {
                    if (label_[b] == 1) {
                        dual_[b] += delta;
                    } else if (label_[b] == 2) {
                        dual_[b] -= delta;
                    }
                }
            }
            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allow_[deltaedge] = 1;
                int i = edges_[deltaedge].i;
                int j = edges_[deltaedge].j;
                if (label_[inblossom_[i]] == 0) {
                    std::swap(i, j);
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allow_[deltaedge] = 1;
                queue_.push_back(edges_[deltaedge].i);
            } else if (deltatype == 4) {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) {
            break;
        }
        for (int b = n_; b < 2 * n_; b++) {
            if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }
    std::vector<int> out(n_, -1);
    for (int v = 0; v < n_; v++) {
        if (mate_[v] >= 0) {
            out[v] = endpoint_[mate_[v]];
        }
    }
    return out;
}

}  // namespace

std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<int64_t>>& w) {
    const int n = static_cast<int>(w.size());
    if (n % 2) {
        throw std::invalid_argument("perfect matching needs an even vertex count");
    }
    int64_t maxw = 0;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (w[i][j] >= 0) {
                maxw = std::max(maxw, w[i][j]);
            }
        }
    }
    // Maximum cardinality first, then maximum of (C - w): both weights even.
    std::vector<WEdge> edges;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (w[i][j] >= 0) {
                edges.push_back({i, j, 2 * (maxw + 1 - w[i][j])});
            }
        }
    }
    std::vector<int> mate = Blossom(n, std::move(edges), true).solve();
    for (int v = 0; v < n; v++) {
        if (mate[v] < 0) {
            throw std::runtime_error("no perfect matching exists");
        }
    }
    return mate;
}

}  // namespace spoqc
