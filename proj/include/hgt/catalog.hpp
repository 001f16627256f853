#ifndef HGT_CATALOG_HPP
#define HGT_CATALOG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hgt/small_hypergraph.hpp"

namespace hgt {

/// One minimal forbidden configuration: e = v - 2 triples on v vertices,
/// no proper subset of triples spanning j >= 4 vertices with j - 2 triples.
/// Stored in canonical labeling.
struct Obstruction {
    int vertex_count = 0;
    std::vector<std::array<std::uint8_t, 3>> triples;
    std::uint64_t aut_count = 0;
    std::string canonical_key;  // raw bytes; hex-encoded in JSON

    int edge_count() const { return static_cast<int>(triples.size()); }
    SmallHypergraph as_hypergraph() const;
};

/// The full family for a given ell: all minimal configurations on
/// 4..ell vertices, plus the sub-family on >= 6 vertices that drives
/// triple closure (the 4-vertex diamond is handled by the pair rule).
struct ObstructionCatalog {
    int ell = 0;
    std::vector<Obstruction> all_members;    // sorted by (v, canonical_key)
    std::vector<Obstruction> large_members;  // v >= 6 subset, same order
};

inline constexpr int kMinEll = 4;
inline constexpr int kMaxEll = 9;

/// Enumerate one representative per isomorphism class. Supported for
/// 4 <= ell <= 9; beyond that the incremental search is still exponential
/// (levels grow roughly like the number of sparse classes) and is refused.
/// ell <= 7 completes in well under a minute; ell = 9 takes a few minutes.
ObstructionCatalog enumerate_obstructions(int ell);

std::string catalog_to_json(const ObstructionCatalog& c);
ObstructionCatalog catalog_from_json(const std::string& text);
void save_catalog(const ObstructionCatalog& c, const std::string& path);
ObstructionCatalog load_catalog(const std::string& path);

}  // namespace hgt

#endif
