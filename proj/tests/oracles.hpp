#ifndef HGT_TESTS_ORACLES_HPP
#define HGT_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. These stay
// deliberately naive: filter-everything enumeration and full vertex-map
// scans, so they share no search machinery with the library paths they check.

#include <cstdint>
#include <vector>

#include "hgt/catalog.hpp"
#include "hgt/small_hypergraph.hpp"

namespace hgt::testing {

/// All minimal configurations with e = v - 2 on 4..ell vertices, one per
/// isomorphism class, found by filtering every (v-2)-subset of triples on v
/// labeled vertices. Feasible for ell <= 7.
std::vector<SmallHypergraph> enumerate_naive(int ell);

/// Labeled copies of `pattern` on n vertices (image triple sets), by scanning
/// all injections. Small inputs only.
std::int64_t count_labeled_copies(const SmallHypergraph& pattern, int n);

/// True iff the system (triples over [0,n)) contains a copy of pattern,
/// by scanning all injections of pattern vertices into [0,n).
bool contains_copy_naive(const SmallHypergraph& pattern, int n,
                         const std::vector<std::array<int, 3>>& triples);

}  // namespace hgt::testing

#endif
