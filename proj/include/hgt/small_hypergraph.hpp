#ifndef HGT_SMALL_HYPERGRAPH_HPP
#define HGT_SMALL_HYPERGRAPH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hgt {

/// A 3-uniform hypergraph on a handful of vertices, labels 0..v-1.
/// Triples are stored sorted internally and the triple list sorted
/// lexicographically, so equal objects compare equal.
struct SmallHypergraph {
    int v = 0;
    std::vector<std::array<std::uint8_t, 3>> triples;

    int edge_count() const { return static_cast<int>(triples.size()); }
    void add_triple(int a, int b, int c);
    void normalize();  // sort each triple and the triple list

    bool operator==(const SmallHypergraph&) const = default;
};

SmallHypergraph make_hypergraph(int v, std::initializer_list<std::array<int, 3>> triples);

/// Largest label supported by the canonical-labeling search.
inline constexpr int kMaxCanonVertices = 12;

/// Canonical byte string, identical for isomorphic hypergraphs and distinct
/// otherwise. Layout: [v][e][colex rank of each triple under the canonical
/// labeling, ascending]. Rejects v > 12.
std::string canonical_label(const SmallHypergraph& h);

/// The canonically relabeled copy (triples sorted), plus its key.
struct CanonicalForm {
    SmallHypergraph form;
    std::string key;
};
CanonicalForm canonical_form(const SmallHypergraph& h);

/// Number of vertex permutations fixing the triple set setwise.
std::uint64_t automorphism_count(const SmallHypergraph& h);

/// True iff no proper subhypergraph J (a subset of triples, with vertex set
/// the union of its triples) has v_J >= 4 and e_J = v_J - 2.
bool is_minimal(const SmallHypergraph& h);

/// True iff the triples form one connected component covering all of 0..v-1.
bool is_connected(const SmallHypergraph& h);

/// True iff no two triples share two vertices.
bool is_linear(const SmallHypergraph& h);

}  // namespace hgt

#endif
