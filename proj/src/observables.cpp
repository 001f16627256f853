#include "hgt/observables.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hgt/common.hpp"
#include "hgt/embedding.hpp"

namespace hgt {

std::int64_t codegree_y(const ProcessState& state, int u, int v) {
    HGT_CHECK(u != v && u >= 0 && v >= 0 && u < state.n() && v < state.n(),
              "codegree_y: bad pair");
    if (u > v) std::swap(u, v);
    HGT_CHECK(state.pair_alive(u, v), "codegree_y: pair is not alive");
    std::int64_t count = 0;
    for (std::uint16_t z : state.pair_list_raw(u, v)) {
        int a = u, b = v, c = z;
        if (c < a) std::swap(a, c);
        if (c < b) std::swap(b, c);
        if (state.q_contains(encode_triple(a, b, c))) ++count;
    }
    return count;
}

std::int64_t codegree_y_scan(const ProcessState& state, int u, int v) {
    HGT_CHECK(u != v && u >= 0 && v >= 0 && u < state.n() && v < state.n(),
              "codegree_y_scan: bad pair");
    if (u > v) std::swap(u, v);
    HGT_CHECK(state.pair_alive(u, v), "codegree_y_scan: pair is not alive");
    std::int64_t count = 0;
    for (int z = 0; z < state.n(); ++z) {
        if (z == u || z == v) continue;
        int a = u, b = v, c = z;
        if (c < a) std::swap(a, c);
        if (c < b) std::swap(b, c);
        if (state.q_contains(encode_triple(a, b, c))) ++count;
    }
    return count;
}

namespace {

enum class TripleClass { kAvailable, kChosen };

/// Injection counter for copies of one obstruction through a fixed available
/// triple, classified by how many copy triples are already in H. Candidates
/// come from the engine's pair lists (available side) and adjacency maps
/// (chosen side); free pattern vertices fall back to a scan over [n].
struct WCounter {
    const ProcessState& st;
    const Obstruction& f;
    int vf, ef;
    std::array<int, 12> psi{};
    std::array<char, 12> slot_done{};
    std::vector<std::int64_t> per_k;  // injections with exactly k chosen triples

    WCounter(const ProcessState& s, const Obstruction& ob)
        : st(s), f(ob), vf(ob.vertex_count), ef(ob.edge_count()), per_k(ef, 0) {
        psi.fill(-1);
    }

    bool vertex_used(int hv) const {
        for (int i = 0; i < vf; ++i)
            if (psi[i] == hv) return true;
        return false;
    }

    std::optional<TripleClass> classify(int a, int b, int c) const {
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        const TripleCode t = encode_triple(a, b, c);
        if (st.q_contains(t)) return TripleClass::kAvailable;
        if (a < b && b < c && st.chosen_at_pair(a, b) == t) return TripleClass::kChosen;
        return std::nullopt;
    }

    void search(int remaining, int k_chosen) {
        if (remaining == 0) {
            ++per_k[k_chosen];
            return;
        }
        // Prefer a slot with two mapped vertices; otherwise bind a free
        // vertex of the most-mapped slot by scanning [n].
        int best = -1, best_m = -1;
        for (int s = 0; s < ef; ++s) {
            if (slot_done[s]) continue;
            int m = 0;
            for (int pv : f.triples[s])
                if (psi[pv] >= 0) ++m;
            if (m > best_m) { best_m = m; best = s; }
        }
        const int slot = best;
        std::array<int, 3> mapped{};
        std::array<int, 3> freev{};
        int m = 0, fc = 0;
        for (int pv : f.triples[slot]) {
            if (psi[pv] >= 0) mapped[m++] = psi[pv];
            else freev[fc++] = pv;
        }

        if (m == 3) {
            auto cls = classify(mapped[0], mapped[1], mapped[2]);
            if (cls) {
                slot_done[slot] = 1;
                search(remaining - 1, k_chosen + (*cls == TripleClass::kChosen ? 1 : 0));
                slot_done[slot] = 0;
            }
        } else if (m == 2) {
            const int a = std::min(mapped[0], mapped[1]);
            const int b = std::max(mapped[0], mapped[1]);
            slot_done[slot] = 1;
            if (st.pair_alive(a, b)) {
                for (std::uint16_t z : st.pair_list_raw(a, b)) {
                    if (vertex_used(z)) continue;
                    int aa = a, bb = b, cc = z;
                    if (cc < aa) std::swap(aa, cc);
                    if (cc < bb) std::swap(bb, cc);
                    if (!st.q_contains(encode_triple(aa, bb, cc))) continue;
                    psi[freev[0]] = z;
                    search(remaining - 1, k_chosen);
                    psi[freev[0]] = -1;
                }
            } else {
                const TripleCode t = st.chosen_at_pair(a, b);
                if (t != kNoTriple) {
                    const auto d = decode_triple(t);
                    const int third = d[0] + d[1] + d[2] - a - b;
                    if (!vertex_used(third)) {
                        psi[freev[0]] = third;
                        search(remaining - 1, k_chosen + 1);
                        psi[freev[0]] = -1;
                    }
                }
            }
            slot_done[slot] = 0;
        } else {
            // Bind one free vertex of this slot over all host vertices.
            const int pv = freev[0];
            for (int hv = 0; hv < st.n(); ++hv) {
                if (vertex_used(hv)) continue;
                psi[pv] = hv;
                search(remaining, k_chosen);
                psi[pv] = -1;
            }
        }
    }
};

}  // namespace

std::vector<std::int64_t> count_w_all(const ProcessState& state, TripleCode uvw,
                                      const Obstruction& f) {
    HGT_CHECK(f.vertex_count >= 6, "count_w: obstruction must have v >= 6");
    HGT_CHECK(state.q_contains(uvw), "count_w: triple is not available");
    const auto d = decode_triple(uvw);

    WCounter counter(state, f);
    for (int anchor = 0; anchor < f.edge_count(); ++anchor) {
        const auto& at = f.triples[anchor];
        std::array<int, 3> perm{0, 1, 2};
        do {
            counter.psi.fill(-1);
            for (int j = 0; j < 3; ++j) counter.psi[at[j]] = d[perm[j]];
            counter.slot_done.fill(0);
            counter.slot_done[anchor] = 1;
            counter.search(f.edge_count() - 1, 0);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    std::vector<std::int64_t> out(f.edge_count(), 0);
    for (int k = 0; k < f.edge_count(); ++k) {
        HGT_REQUIRE_STATE(counter.per_k[k] % static_cast<std::int64_t>(f.aut_count) == 0,
                          "count_w: injection total not divisible by |Aut|");
        out[k] = counter.per_k[k] / static_cast<std::int64_t>(f.aut_count);
    }
    return out;
}

std::int64_t count_w(const ProcessState& state, TripleCode uvw, const Obstruction& f, int k) {
    HGT_CHECK(k >= 0 && k <= f.edge_count() - 2, "count_w: k out of range");
    return count_w_all(state, uvw, f)[k];
}

std::vector<std::int64_t> count_w_all_bruteforce(const ProcessState& state, TripleCode uvw,
                                                 const Obstruction& f) {
    HGT_CHECK(state.q_contains(uvw), "count_w: triple is not available");
    const auto d = decode_triple(uvw);
    const int vf = f.vertex_count;
    const int n = state.n();
    std::vector<std::int64_t> per_k(f.edge_count() + 1, 0);

    auto classify = [&](int a, int b, int c) -> std::optional<TripleClass> {
        std::array<int, 3> t{a, b, c};
        std::sort(t.begin(), t.end());
        const TripleCode code = encode_triple(t[0], t[1], t[2]);
        if (state.q_contains(code)) return TripleClass::kAvailable;
        if (state.chosen_at_pair(t[0], t[1]) == code) return TripleClass::kChosen;
        return std::nullopt;
    };

    std::vector<int> psi(vf, -1);
    std::vector<char> used(n, 0);

    // anchor one pattern triple onto uvw, then brute-force the rest
    for (int anchor = 0; anchor < f.edge_count(); ++anchor) {
        const auto& at = f.triples[anchor];
        std::array<int, 3> perm{0, 1, 2};
        do {
            std::fill(psi.begin(), psi.end(), -1);
            std::fill(used.begin(), used.end(), 0);
            for (int j = 0; j < 3; ++j) {
                psi[at[j]] = d[perm[j]];
                used[d[perm[j]]] = 1;
            }
            std::vector<int> free_pv;
            for (int pv = 0; pv < vf; ++pv)
                if (psi[pv] < 0) free_pv.push_back(pv);

            std::function<void(std::size_t)> rec = [&](std::size_t idx) {
                if (idx == free_pv.size()) {
                    int k_chosen = 0;
                    for (int s = 0; s < f.edge_count(); ++s) {
                        if (s == anchor) continue;
                        auto cls = classify(psi[f.triples[s][0]], psi[f.triples[s][1]],
                                            psi[f.triples[s][2]]);
                        if (!cls) return;
                        if (*cls == TripleClass::kChosen) ++k_chosen;
                    }
                    ++per_k[k_chosen];
                    return;
                }
                for (int hv = 0; hv < n; ++hv) {
                    if (used[hv]) continue;
                    used[hv] = 1;
                    psi[free_pv[idx]] = hv;
                    rec(idx + 1);
                    psi[free_pv[idx]] = -1;
                    used[hv] = 0;
                }
            };
            rec(0);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    std::vector<std::int64_t> out(f.edge_count(), 0);
    for (int k = 0; k < f.edge_count(); ++k) {
        HGT_REQUIRE_STATE(per_k[k] % static_cast<std::int64_t>(f.aut_count) == 0,
                          "count_w_bruteforce: not divisible by |Aut|");
        out[k] = per_k[k] / static_cast<std::int64_t>(f.aut_count);
    }
    return out;
}

RootedExtensionReport count_rooted_extensions(const ProcessState& state,
                                              const SmallHypergraph& h,
                                              const std::vector<int>& g_vertices,
                                              const std::vector<int>& g_triples,
                                              const std::vector<int>& images,
                                              double alpha) {
    const int limit = 2 * state.ell();
    HGT_CHECK(h.v <= limit && h.edge_count() <= limit,
              "pattern exceeds the 2*ell size bound");
    HGT_CHECK(g_vertices.size() == images.size(), "root map size mismatch");
    for (int gt : g_triples) {
        HGT_CHECK(gt >= 0 && gt < h.edge_count(), "root triple index out of range");
        for (int pv : h.triples[gt])
            HGT_CHECK(std::find(g_vertices.begin(), g_vertices.end(), pv) != g_vertices.end(),
                      "root triples must live on root vertices");
    }

    std::vector<int> psi(h.v, -1);
    for (std::size_t i = 0; i < g_vertices.size(); ++i) {
        const int pv = g_vertices[i];
        const int hv = images[i];
        HGT_CHECK(pv >= 0 && pv < h.v, "root vertex out of range");
        HGT_CHECK(hv >= 0 && hv < state.n(), "root image out of range");
        HGT_CHECK(psi[pv] == -1, "duplicate root vertex");
        for (int x : psi) HGT_CHECK(x != hv, "root images must be injective");
        psi[pv] = hv;
    }

    std::vector<int> slots;  // pattern triples that must land in H
    for (int s = 0; s < h.edge_count(); ++s)
        if (std::find(g_triples.begin(), g_triples.end(), s) == g_triples.end())
            slots.push_back(s);

    double count = 0.0;
    std::vector<char> slot_done(h.edge_count(), 0);

    std::function<void(int)> rec = [&](int remaining) {
        if (remaining == 0) {
            // Pattern vertices in no constrained slot: falling factorial.
            int unassigned = 0;
            for (int pv = 0; pv < h.v; ++pv)
                if (psi[pv] < 0) ++unassigned;
            int assigned_total = h.v - unassigned;
            double ways = 1.0;
            for (int i = 0; i < unassigned; ++i)
                ways *= static_cast<double>(state.n() - assigned_total - i);
            count += std::max(ways, 0.0);
            return;
        }
        int best = -1, best_m = -1;
        for (int s : slots) {
            if (slot_done[s]) continue;
            int m = 0;
            for (int pv : h.triples[s])
                if (psi[pv] >= 0) ++m;
            if (m > best_m) { best_m = m; best = s; }
        }
        const int slot = best;
        std::array<int, 3> mapped{};
        std::array<int, 3> freev{};
        int m = 0, fc = 0;
        for (int pv : h.triples[slot]) {
            if (psi[pv] >= 0) mapped[m++] = psi[pv];
            else freev[fc++] = pv;
        }
        auto vertex_used = [&](int hv) {
            return std::find(psi.begin(), psi.end(), hv) != psi.end();
        };

        slot_done[slot] = 1;
        if (m == 3) {
            std::array<int, 3> t{mapped[0], mapped[1], mapped[2]};
            std::sort(t.begin(), t.end());
            if (state.chosen_at_pair(t[0], t[1]) == encode_triple(t[0], t[1], t[2]))
                rec(remaining - 1);
        } else if (m == 2) {
            const int a = std::min(mapped[0], mapped[1]);
            const int b = std::max(mapped[0], mapped[1]);
            const TripleCode t = state.chosen_at_pair(a, b);
            if (t != kNoTriple) {
                const auto dt = decode_triple(t);
                const int third = dt[0] + dt[1] + dt[2] - a - b;
                if (!vertex_used(third)) {
                    psi[freev[0]] = third;
                    rec(remaining - 1);
                    psi[freev[0]] = -1;
                }
            }
        } else if (m == 1) {
            for (TripleCode t : state.chosen_at_vertex(mapped[0])) {
                const auto dt = decode_triple(t);
                int o1 = -1, o2 = -1;
                for (int hv : dt) {
                    if (hv == mapped[0]) continue;
                    if (o1 < 0) o1 = hv;
                    else o2 = hv;
                }
                if (vertex_used(o1) || vertex_used(o2)) continue;
                for (int flip = 0; flip < 2; ++flip) {
                    psi[freev[0]] = flip ? o2 : o1;
                    psi[freev[1]] = flip ? o1 : o2;
                    rec(remaining - 1);
                    psi[freev[0]] = psi[freev[1]] = -1;
                }
            }
        } else {
            for (TripleCode t : state.chosen()) {
                const auto dt = decode_triple(t);
                std::array<int, 3> perm{0, 1, 2};
                do {
                    bool clash = false;
                    for (int j = 0; j < 3 && !clash; ++j) clash = vertex_used(dt[perm[j]]);
                    if (!clash) {
                        for (int j = 0; j < 3; ++j) psi[h.triples[slot][j]] = dt[perm[j]];
                        rec(remaining - 1);
                        for (int j = 0; j < 3; ++j) psi[h.triples[slot][j]] = -1;
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        }
        slot_done[slot] = 0;
    };
    rec(static_cast<int>(slots.size()));

    RootedExtensionReport rep;
    rep.count = count;
    rep.alpha = alpha;

    // Diagnostic bound: maximize over triple subsets J between G and H.
    const double vh = h.v, eh = h.edge_count();
    double best_exp = -1e300;
    const std::uint32_t nmask = slots.size() <= 31 ? (1u << slots.size()) : 0;
    std::vector<std::uint32_t> vbit(h.edge_count());
    for (int s = 0; s < h.edge_count(); ++s)
        for (int pv : h.triples[s]) vbit[s] |= 1u << pv;
    std::uint32_t gbits = 0;
    for (int pv : g_vertices) gbits |= 1u << pv;
    for (std::uint32_t mask = 0; mask < std::max<std::uint32_t>(nmask, 1); ++mask) {
        std::uint32_t vm = gbits;
        int ej = static_cast<int>(g_triples.size());
        for (std::size_t idx = 0; idx < slots.size(); ++idx)
            if (mask & (1u << idx)) { vm |= vbit[slots[idx]]; ++ej; }
        const int vj = __builtin_popcount(vm);
        best_exp = std::max(best_exp, (vh - eh) + (ej - vj));
    }
    rep.bound = std::pow(static_cast<double>(state.n()), alpha / 9.0 + best_exp);
    return rep;
}

bool girth_check_subsets(const std::vector<std::array<int, 3>>& triples, int ell,
                         std::vector<int>* witness_vertices) {
    HGT_CHECK(ell >= 4, "ell must be at least 4");
    // Remap vertices to dense ids; the budgeted search needs few of them.
    std::vector<int> ids;
    for (const auto& t : triples)
        for (int x : t) ids.push_back(x);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    HGT_CHECK(ids.size() <= 64, "subset girth check supports at most 64 distinct vertices");

    const int e = static_cast<int>(triples.size());
    std::vector<std::uint64_t> tmask(e, 0);
    std::vector<std::vector<int>> at_vertex(ids.size());
    for (int i = 0; i < e; ++i)
        for (int x : triples[i]) {
            const int dense = static_cast<int>(
                std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
            tmask[i] |= 1ull << dense;
            at_vertex[dense].push_back(i);
        }

    // A violating vertex set reduces to a connected triple subset S with
    // |S| = span - 2 <= ell - 2; grow subsets anchored at their smallest
    // triple index under the span budget.
    std::vector<int> stack;
    bool ok = true;

    std::function<bool(std::uint64_t, int, int)> grow =
        [&](std::uint64_t vm, int size, int anchor) -> bool {
        const int span = __builtin_popcountll(vm);
        if (span >= 4 && span <= ell && size >= span - 2) {
            if (witness_vertices) {
                witness_vertices->clear();
                for (std::size_t d = 0; d < ids.size(); ++d)
                    if (vm & (1ull << d)) witness_vertices->push_back(ids[d]);
            }
            return true;  // violation found
        }
        if (size >= ell - 2) return false;
        // candidates: triples touching the current span, index above anchor
        std::vector<int> cands;
        for (std::size_t d = 0; d < ids.size(); ++d) {
            if (!(vm & (1ull << d))) continue;
            for (int ti : at_vertex[d])
                if (ti > anchor) cands.push_back(ti);
        }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        for (int ti : cands) {
            if (std::find(stack.begin(), stack.end(), ti) != stack.end()) continue;
            const std::uint64_t vm2 = vm | tmask[ti];
            if (__builtin_popcountll(vm2) > ell) continue;
            stack.push_back(ti);
            if (grow(vm2, size + 1, anchor)) return true;
            stack.pop_back();
        }
        return false;
    };

    for (int a = 0; a < e && ok; ++a) {
        stack.assign(1, a);
        if (grow(tmask[a], 1, a)) ok = false;
    }
    return ok;
}

bool girth_check_patterns(const std::vector<std::array<int, 3>>& triples, int n,
                          const ObstructionCatalog& catalog,
                          std::vector<std::array<int, 3>>* witness) {
    TripleSystemIndex index(n, triples);
    for (const auto& f : catalog.all_members) {
        auto found = find_embedding(f.as_hypergraph(), index);
        if (found) {
            if (witness) *witness = *found;
            return false;
        }
    }
    return true;
}

double Snapshot::y_mean() const {
    if (y_samples.empty()) return 0.0;
    double s = 0.0;
    for (const auto& y : y_samples) s += static_cast<double>(y.count);
    return s / static_cast<double>(y_samples.size());
}

double Snapshot::w_mean(const std::string& key, int k) const {
    double s = 0.0;
    std::int64_t cnt = 0;
    for (const auto& w : w_samples)
        if (w.k == k && w.key == key) {
            s += static_cast<double>(w.count);
            ++cnt;
        }
    return cnt == 0 ? 0.0 : s / static_cast<double>(cnt);
}

const RelError* Snapshot::rel_error(const std::string& name) const {
    for (const auto& [k, v] : rel_errors)
        if (k == name) return &v;
    return nullptr;
}

namespace {

RelError make_rel_error(double observed, double predicted) {
    RelError e;
    if (std::abs(predicted) < 1e-9) {
        e.absolute = true;
        e.value = observed - predicted;
    } else {
        e.value = (observed - predicted) / predicted;
    }
    return e;
}

}  // namespace

Snapshot take_snapshot(const ProcessState& state, const SampleCounts& counts,
                       bool parallel) {
    Snapshot snap;
    snap.i = state.step_count();
    const double n2 = static_cast<double>(state.n()) * state.n();
    snap.t = static_cast<double>(snap.i) / n2;
    snap.q_size = static_cast<std::int64_t>(state.q_size());
    snap.alive_pairs = static_cast<std::int64_t>(state.alive_pair_count());
    snap.predicted = evaluate(snap.t, state.n(), state.catalog());

    std::mt19937_64 rng(mix_seed(state.seed(), 0xB0B0'0000ull + static_cast<std::uint64_t>(snap.i)));
    auto draw_below = [&rng](std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound;
        for (;;) {
            const std::uint64_t x = rng();
            if (x >= threshold) return x % bound;
        }
    };

    // Distinct alive pairs, uniform.
    const auto pairs = state.alive_pairs();
    if (!pairs.empty()) {
        const int want = std::min<std::int64_t>(counts.pairs, pairs.size());
        std::vector<std::uint32_t> picked;
        picked.reserve(want);
        while (static_cast<int>(picked.size()) < want) {
            const std::uint32_t pr = pairs[draw_below(pairs.size())];
            if (std::find(picked.begin(), picked.end(), pr) != picked.end()) continue;
            picked.push_back(pr);
        }
        for (std::uint32_t pr : picked) {
            const auto [u, v] = unrank_pair(pr);
            YSample ys;
            ys.u = u;
            ys.v = v;
            ys.count = codegree_y(state, u, v);
            snap.y_samples.push_back(ys);
        }
    }

    // Distinct available triples, uniform; W counted for every family and k.
    const auto q = state.q_codes();
    std::vector<TripleCode> sampled;
    if (!q.empty() && !state.catalog().large_members.empty()) {
        const int want = std::min<std::int64_t>(counts.triples_per_family, q.size());
        while (static_cast<int>(sampled.size()) < want) {
            const TripleCode c = q[draw_below(q.size())];
            if (std::find(sampled.begin(), sampled.end(), c) != sampled.end()) continue;
            sampled.push_back(c);
        }
    }
    for (const auto& f : state.catalog().large_members) {
        std::vector<std::vector<std::int64_t>> results(sampled.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
        for (std::int64_t si = 0; si < static_cast<std::int64_t>(sampled.size()); ++si)
            results[si] = count_w_all(state, sampled[si], f);

        for (std::size_t si = 0; si < sampled.size(); ++si) {
            const auto d = decode_triple(sampled[si]);
            for (int k = 0; k <= f.edge_count() - 2; ++k) {
                WSample ws;
                ws.triple = {d[0], d[1], d[2]};
                ws.key = f.canonical_key;
                ws.k = k;
                ws.count = results[si][k];
                snap.w_samples.push_back(std::move(ws));
            }
        }
    }

    snap.rel_errors.emplace_back("q_size",
                                 make_rel_error(static_cast<double>(snap.q_size),
                                                snap.predicted.q_hat));
    if (!snap.y_samples.empty())
        snap.rel_errors.emplace_back("y_mean",
                                     make_rel_error(snap.y_mean(), snap.predicted.y_hat));
    for (const auto& f : state.catalog().large_members) {
        if (sampled.empty()) break;
        for (int k = 0; k <= f.edge_count() - 2; ++k) {
            const WHatEntry* wh = snap.predicted.find_w(f.canonical_key, k);
            snap.rel_errors.emplace_back(
                "w_mean:" + to_hex(f.canonical_key) + ":" + std::to_string(k),
                make_rel_error(snap.w_mean(f.canonical_key, k), wh ? wh->value : 0.0));
        }
    }
    std::sort(snap.rel_errors.begin(), snap.rel_errors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return snap;
}

}  // namespace hgt
