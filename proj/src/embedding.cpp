#include "hgt/embedding.hpp"

#include <algorithm>
#include <unordered_map>

#include "hgt/common.hpp"

namespace hgt {

namespace {
inline std::uint64_t pair_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 24) | static_cast<std::uint64_t>(v);
}
}  // namespace

TripleSystemIndex::TripleSystemIndex(int n, std::vector<std::array<int, 3>> triples)
    : n_(n), triples_(std::move(triples)), at_vertex_(n) {
    for (auto& t : triples_) std::sort(t.begin(), t.end());
    at_pair_.reserve(triples_.size() * 3);
    for (int i = 0; i < static_cast<int>(triples_.size()); ++i) {
        const auto& t = triples_[i];
        for (int x : t) {
            HGT_CHECK(x >= 0 && x < n_, "triple vertex out of range");
            at_vertex_[x].push_back(i);
        }
        at_pair_[pair_key(t[0], t[1])].push_back(i);
        at_pair_[pair_key(t[0], t[2])].push_back(i);
        at_pair_[pair_key(t[1], t[2])].push_back(i);
    }
}

bool TripleSystemIndex::has_triple(int a, int b, int c) const {
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    auto it = at_pair_.find(pair_key(t[0], t[1]));
    if (it == at_pair_.end()) return false;
    for (int i : it->second)
        if (triples_[i] == t) return true;
    return false;
}

const std::vector<int>& TripleSystemIndex::triples_at_pair(int u, int v) const {
    static const std::vector<int> kEmpty;
    auto it = at_pair_.find(pair_key(u, v));
    return it == at_pair_.end() ? kEmpty : it->second;
}

namespace {

// Greedy matching order seeded at start_slot: each subsequent pattern triple
// shares as many already-seen vertices as possible, so host candidates are
// pinned down early (two shared vertices mean at most one host triple in a
// partial Steiner system).
std::vector<int> matching_order(const SmallHypergraph& pattern, int start_slot) {
    const int e = pattern.edge_count();
    std::vector<int> order;
    std::vector<bool> used(e, false);
    std::uint32_t seen = 0;
    auto take = [&](int i) {
        used[i] = true;
        for (int x : pattern.triples[i]) seen |= 1u << x;
        order.push_back(i);
    };
    take(start_slot);
    for (int step = 1; step < e; ++step) {
        int pick = -1, best_shared = -1;
        for (int i = 0; i < e; ++i) {
            if (used[i]) continue;
            int shared = 0;
            for (int x : pattern.triples[i])
                if (seen & (1u << x)) ++shared;
            if (shared > best_shared) { best_shared = shared; pick = i; }
        }
        take(pick);
    }
    return order;
}

struct EmbedSearch {
    const SmallHypergraph& pattern;
    const TripleSystemIndex& index;
    const std::optional<std::array<int, 3>>& extra;
    std::vector<int> order;
    std::vector<int> psi;           // pattern vertex -> host vertex
    std::vector<int> image;         // per depth: host triple index, -2 = extra
    std::vector<char> host_used;
    bool extra_used = false;

    EmbedSearch(const SmallHypergraph& p, const TripleSystemIndex& idx,
                const std::optional<std::array<int, 3>>& ex)
        : pattern(p), index(idx), extra(ex), psi(p.v, -1),
          image(p.edge_count(), -1), host_used(idx.triples().size(), 0) {}

    bool host_vertex_used(int hv) const {
        return std::find(psi.begin(), psi.end(), hv) != psi.end();
    }

    bool try_assign(int depth, const std::array<std::uint8_t, 3>& pt,
                    const std::array<int, 3>& ht) {
        std::array<int, 3> perm{0, 1, 2};
        do {
            std::array<int, 3> bound{-1, -1, -1};
            bool ok = true;
            for (int j = 0; j < 3; ++j) {
                int pv = pt[j], hv = ht[perm[j]];
                if (psi[pv] == hv) continue;
                if (psi[pv] != -1 || host_vertex_used(hv)) { ok = false; break; }
                psi[pv] = hv;
                bound[j] = pv;
            }
            if (ok && descend(depth + 1)) return true;
            for (int pv : bound)
                if (pv >= 0) psi[pv] = -1;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    }

    bool descend(int depth) {
        if (depth == pattern.edge_count()) return true;
        const int slot = order[depth];
        const auto& pt = pattern.triples[slot];

        int m0 = -1, m1 = -1;  // first two mapped host vertices of this slot
        for (int x : pt) {
            if (psi[x] == -1) continue;
            if (m0 < 0) m0 = psi[x];
            else if (m1 < 0) m1 = psi[x];
        }

        auto try_host = [&](int hi) -> bool {
            if (host_used[hi]) return false;
            host_used[hi] = 1;
            image[depth] = hi;
            if (try_assign(depth, pt, index.triples()[hi])) return true;
            host_used[hi] = 0;
            image[depth] = -1;
            return false;
        };
        auto try_extra = [&]() -> bool {
            if (!extra || extra_used) return false;
            extra_used = true;
            image[depth] = -2;
            if (try_assign(depth, pt, *extra)) return true;
            extra_used = false;
            image[depth] = -1;
            return false;
        };
        auto extra_has = [&](int hv) {
            return extra && ((*extra)[0] == hv || (*extra)[1] == hv || (*extra)[2] == hv);
        };

        if (m1 >= 0) {
            for (int hi : index.triples_at_pair(m0, m1))
                if (try_host(hi)) return true;
            if (extra_has(m0) && extra_has(m1) && try_extra()) return true;
        } else if (m0 >= 0) {
            for (int hi : index.triples_at(m0))
                if (try_host(hi)) return true;
            if (extra_has(m0) && try_extra()) return true;
        } else {
            for (int hi = 0; hi < static_cast<int>(index.triples().size()); ++hi)
                if (try_host(hi)) return true;
            if (try_extra()) return true;
        }
        return false;
    }

    std::vector<std::array<int, 3>> result() const {
        std::vector<std::array<int, 3>> out;
        for (int d = 0; d < pattern.edge_count(); ++d)
            out.push_back(image[d] == -2 ? *extra : index.triples()[image[d]]);
        return out;
    }
};

}  // namespace

std::optional<std::vector<std::array<int, 3>>> find_embedding(
    const SmallHypergraph& pattern, const TripleSystemIndex& index,
    const std::optional<std::array<int, 3>>& extra, bool must_use_extra) {
    HGT_CHECK(pattern.edge_count() >= 1, "pattern needs at least one triple");
    HGT_CHECK(pattern.v <= 32, "pattern too large");

    if (!must_use_extra) {
        EmbedSearch search(pattern, index, extra);
        search.order = matching_order(pattern, 0);
        if (search.descend(0)) return search.result();
        return std::nullopt;
    }

    // Anchor the extra triple at each pattern slot in turn; the other slots
    // then only consider host triples, which keeps the search tight.
    HGT_CHECK(extra.has_value(), "must_use_extra requires an extra triple");
    for (int s = 0; s < pattern.edge_count(); ++s) {
        EmbedSearch search(pattern, index, extra);
        search.order = matching_order(pattern, s);
        search.extra_used = true;
        search.image[0] = -2;
        if (search.try_assign(0, pattern.triples[s], *extra)) return search.result();
    }
    return std::nullopt;
}

bool contains_copy(const SmallHypergraph& pattern, const TripleSystemIndex& index) {
    return find_embedding(pattern, index).has_value();
}

}  // namespace hgt
