#ifndef HGT_EMBEDDING_HPP
#define HGT_EMBEDDING_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hgt/small_hypergraph.hpp"

namespace hgt {

/// Adjacency index over a plain list of triples with arbitrary vertex ids in
/// [0, n). Built fresh from the list; deliberately independent of the
/// engine's incremental structures so it can serve as an oracle against them.
class TripleSystemIndex {
  public:
    TripleSystemIndex(int n, std::vector<std::array<int, 3>> triples);

    int n() const { return n_; }
    const std::vector<std::array<int, 3>>& triples() const { return triples_; }
    const std::vector<int>& triples_at(int v) const { return at_vertex_[v]; }
    bool has_triple(int a, int b, int c) const;  // any order
    /// Indices of triples containing both u and v.
    const std::vector<int>& triples_at_pair(int u, int v) const;

  private:
    int n_;
    std::vector<std::array<int, 3>> triples_;
    std::vector<std::vector<int>> at_vertex_;
    std::unordered_map<std::uint64_t, std::vector<int>> at_pair_;
};

/// Searches for an embedding of `pattern` into the system, optionally with
/// one extra triple appended virtually (so "H + xyz" needs no copy of H).
/// If must_use_extra is set, only embeddings whose image includes the extra
/// triple count. Returns the image triple list of the first embedding found.
std::optional<std::vector<std::array<int, 3>>> find_embedding(
    const SmallHypergraph& pattern, const TripleSystemIndex& index,
    const std::optional<std::array<int, 3>>& extra = std::nullopt,
    bool must_use_extra = false);

bool contains_copy(const SmallHypergraph& pattern, const TripleSystemIndex& index);

}  // namespace hgt

#endif
