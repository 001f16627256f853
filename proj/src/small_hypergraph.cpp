#include "hgt/small_hypergraph.hpp"

#include <algorithm>
#include <cstring>

#include "hgt/common.hpp"
#include "hgt/triple_code.hpp"

namespace hgt {

void SmallHypergraph::add_triple(int a, int b, int c) {
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    HGT_CHECK(t[0] >= 0 && t[0] < t[1] && t[1] < t[2] && t[2] < v,
              "triple vertices must be distinct labels below v");
    triples.push_back({static_cast<std::uint8_t>(t[0]),
                       static_cast<std::uint8_t>(t[1]),
                       static_cast<std::uint8_t>(t[2])});
}

void SmallHypergraph::normalize() {
    for (auto& t : triples) std::sort(t.begin(), t.end());
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
}

SmallHypergraph make_hypergraph(int v, std::initializer_list<std::array<int, 3>> triples) {
    SmallHypergraph h;
    h.v = v;
    for (const auto& t : triples) h.add_triple(t[0], t[1], t[2]);
    h.normalize();
    return h;
}

namespace {

// Colex rank of a triple with new labels x < y < z; fits one byte for v <= 12
// since C(12,3) = 220.
inline int small_rank(int x, int y, int z) {
    return static_cast<int>(choose3(z) + choose2(y) + x);
}

// Backtracking minimization of the sorted colex-rank vector over all vertex
// relabelings. Labels are assigned in increasing order; a triple's rank is
// fixed the moment its last vertex gets a label, and every later triple has
// a strictly larger rank, so the determined prefix supports sound pruning.
struct CanonSearch {
    const SmallHypergraph& h;
    int v, e;
    std::vector<std::vector<int>> at_vertex;  // vertex -> triple indices
    std::vector<int> label_of;                // orig -> new label, -1 unassigned
    std::vector<int> orig_of;                 // new label -> orig
    std::vector<int> cur;                     // determined rank prefix
    std::vector<int> best;
    std::vector<int> best_orig_of;
    std::vector<int> order;  // candidate order (by invariant, for speed only)
    bool have_best = false;

    explicit CanonSearch(const SmallHypergraph& hg)
        : h(hg), v(hg.v), e(hg.edge_count()), at_vertex(hg.v),
          label_of(hg.v, -1), orig_of(hg.v, -1) {
        for (int i = 0; i < e; ++i)
            for (int x : h.triples[i]) at_vertex[x].push_back(i);
        // Heuristic branch order: high degree first.
        order.resize(v);
        for (int i = 0; i < v; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return at_vertex[a].size() > at_vertex[b].size();
        });
        cur.reserve(e);
    }

    // state of the prefix comparison against best: 0 = equal so far, -1 = less
    void descend(int depth, int cmp_state) {
        if (depth == v) {
            if (!have_best || cmp_state < 0) {
                best = cur;
                best_orig_of = orig_of;
                have_best = true;
            }
            return;
        }
        for (int cand : order) {
            if (label_of[cand] != -1) continue;
            label_of[cand] = depth;
            orig_of[depth] = cand;

            // Triples completed by this assignment; their max new label is depth.
            int block_start = static_cast<int>(cur.size());
            bool pruned = false;
            for (int ti : at_vertex[cand]) {
                int lo = v, hi = -1;
                bool full = true;
                for (int x : h.triples[ti]) {
                    int lx = label_of[x];
                    if (lx < 0) { full = false; break; }
                    if (x != cand) { lo = std::min(lo, lx); hi = std::max(hi, lx); }
                }
                if (full) cur.push_back(small_rank(lo, hi, depth));
            }
            std::sort(cur.begin() + block_start, cur.end());

            int state = cmp_state;
            if (have_best && state == 0) {
                for (int i = block_start; i < static_cast<int>(cur.size()); ++i) {
                    if (cur[i] > best[i]) { pruned = true; break; }
                    if (cur[i] < best[i]) { state = -1; break; }
                }
            }
            if (!pruned) descend(depth + 1, state);

            cur.resize(block_start);
            orig_of[depth] = -1;
            label_of[cand] = -1;
        }
    }
};

}  // namespace

CanonicalForm canonical_form(const SmallHypergraph& input) {
    HGT_CHECK(input.v >= 0 && input.v <= kMaxCanonVertices,
              "canonical labeling supports at most 12 vertices");
    SmallHypergraph h = input;
    h.normalize();

    std::string key;
    key.push_back(static_cast<char>(h.v));
    key.push_back(static_cast<char>(h.edge_count()));

    CanonicalForm out;
    if (h.edge_count() == 0 || h.v == 0) {
        out.form = h;
        out.key = key;
        return out;
    }

    CanonSearch search(h);
    search.descend(0, 0);

    SmallHypergraph relabeled;
    relabeled.v = h.v;
    std::vector<int> new_label(h.v);
    for (int l = 0; l < h.v; ++l) new_label[search.best_orig_of[l]] = l;
    for (const auto& t : h.triples)
        relabeled.add_triple(new_label[t[0]], new_label[t[1]], new_label[t[2]]);
    relabeled.normalize();

    for (int r : search.best) key.push_back(static_cast<char>(r));
    out.form = std::move(relabeled);
    out.key = std::move(key);
    return out;
}

std::string canonical_label(const SmallHypergraph& h) { return canonical_form(h).key; }

std::uint64_t automorphism_count(const SmallHypergraph& input) {
    HGT_CHECK(input.v >= 1 && input.v <= kMaxCanonVertices,
              "automorphism count supports at most 12 vertices");
    SmallHypergraph h = input;
    h.normalize();
    const auto& ref = h.triples;

    std::vector<int> perm(h.v);
    for (int i = 0; i < h.v; ++i) perm[i] = i;
    std::uint64_t count = 0;
    std::vector<std::array<std::uint8_t, 3>> mapped(ref.size());
    do {
        for (std::size_t i = 0; i < ref.size(); ++i) {
            std::array<std::uint8_t, 3> t{static_cast<std::uint8_t>(perm[ref[i][0]]),
                                          static_cast<std::uint8_t>(perm[ref[i][1]]),
                                          static_cast<std::uint8_t>(perm[ref[i][2]])};
            std::sort(t.begin(), t.end());
            mapped[i] = t;
        }
        std::sort(mapped.begin(), mapped.end());
        if (mapped == ref) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

bool is_minimal(const SmallHypergraph& input) {
    SmallHypergraph h = input;
    h.normalize();
    const int e = h.edge_count();
    if (e > 20) throw std::invalid_argument("is_minimal: too many triples");

    std::vector<std::uint16_t> tmask(e, 0);
    for (int i = 0; i < e; ++i)
        for (int x : h.triples[i]) tmask[i] |= static_cast<std::uint16_t>(1u << x);

    const std::uint32_t full = (e >= 1) ? ((1u << e) - 1) : 0;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        std::uint16_t vm = 0;
        for (int i = 0; i < e; ++i)
            if (mask & (1u << i)) vm |= tmask[i];
        int vj = __builtin_popcount(vm);
        int ej = __builtin_popcount(mask);
        if (vj >= 4 && ej == vj - 2) return false;
    }
    return true;
}

bool is_connected(const SmallHypergraph& input) {
    if (input.v == 0) return false;
    // Union-find over vertices via triples.
    std::vector<int> parent(input.v);
    for (int i = 0; i < input.v; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& t : input.triples) {
        int r = find(t[0]);
        parent[find(t[1])] = r;
        parent[find(t[2])] = r;
    }
    int root = find(0);
    for (int i = 1; i < input.v; ++i)
        if (find(i) != root) return false;
    return !input.triples.empty() || input.v == 1;
}

bool is_linear(const SmallHypergraph& h) {
    for (std::size_t i = 0; i < h.triples.size(); ++i)
        for (std::size_t j = i + 1; j < h.triples.size(); ++j) {
            int shared = 0;
            for (int x : h.triples[i])
                for (int y : h.triples[j])
                    if (x == y) ++shared;
            if (shared >= 2) return false;
        }
    return true;
}

}  // namespace hgt
