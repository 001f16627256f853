#ifndef HGT_OBSERVABLES_HPP
#define HGT_OBSERVABLES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgt/engine.hpp"
#include "hgt/trajectories.hpp"

namespace hgt {

/// |Y_uv(i)|: available codegree of an alive pair, from the per-pair lists.
/// Rejects dead pairs.
std::int64_t codegree_y(const ProcessState& state, int u, int v);

/// Same quantity recounted by scanning the third vertex; the two must agree.
std::int64_t codegree_y_scan(const ProcessState& state, int u, int v);

/// |W_{uvw,F,k}(i)|: copies of F through uvw with k triples already placed
/// and the remaining e_F - k (uvw included) still available. Requires
/// uvw in Q, F with v_F >= 6 from the catalog, 0 <= k <= e_F - 2.
std::int64_t count_w(const ProcessState& state, TripleCode uvw, const Obstruction& f, int k);

/// All k at once (index k = 0..e_F-1); the k = e_F - 1 bucket must be zero on
/// any process-generated state, which callers may assert.
std::vector<std::int64_t> count_w_all(const ProcessState& state, TripleCode uvw,
                                      const Obstruction& f);

/// Reference counter: plain nested loops over all vertex injections. Small n.
std::vector<std::int64_t> count_w_all_bruteforce(const ProcessState& state, TripleCode uvw,
                                                 const Obstruction& f);

/// N_{rho,G,H}(i): injections of pattern H extending the fixed root map with
/// every non-root triple landing in the current hypergraph. g_triples indexes
/// into h.triples; g_vertices/images define rho. Counts are exact (free
/// vertices contribute a falling factorial) but returned as double since
/// large patterns overflow 64 bits. The reported bound
/// n^{alpha/9} * max_J n^{(v_H - e_H) + (e_J - v_J)} is diagnostic only.
struct RootedExtensionReport {
    double count = 0.0;
    double bound = 0.0;
    double alpha = 0.75;
};
RootedExtensionReport count_rooted_extensions(const ProcessState& state,
                                              const SmallHypergraph& h,
                                              const std::vector<int>& g_vertices,
                                              const std::vector<int>& g_triples,
                                              const std::vector<int>& images,
                                              double alpha = 0.75);

/// Exhaustive girth check: true iff no g in [4, ell] vertices span >= g-2
/// triples. Explores connected triple subsets with a vertex budget; intended
/// for systems on at most ~60 distinct vertices.
bool girth_check_subsets(const std::vector<std::array<int, 3>>& triples, int ell,
                         std::vector<int>* witness_vertices = nullptr);

/// Pattern-based girth check: true iff no catalog member embeds. Scales to
/// large systems.
bool girth_check_patterns(const std::vector<std::array<int, 3>>& triples, int n,
                          const ObstructionCatalog& catalog,
                          std::vector<std::array<int, 3>>* witness = nullptr);

struct RelError {
    double value = 0.0;
    bool absolute = false;  // true when |predicted| < 1e-9

    bool operator==(const RelError&) const = default;
};

struct YSample {
    int u = 0, v = 0;
    std::int64_t count = 0;
    bool operator==(const YSample&) const = default;
};

struct WSample {
    std::array<int, 3> triple{};
    std::string key;  // obstruction canonical key
    int k = 0;
    std::int64_t count = 0;
    bool operator==(const WSample&) const = default;
};

/// Observed-vs-predicted snapshot of a live state.
struct Snapshot {
    std::int64_t i = 0;
    double t = 0.0;
    std::int64_t q_size = 0;
    std::int64_t alive_pairs = 0;
    std::vector<YSample> y_samples;
    std::vector<WSample> w_samples;
    TrajectoryPoint predicted;
    std::vector<std::pair<std::string, RelError>> rel_errors;  // sorted by name

    double y_mean() const;
    double w_mean(const std::string& key, int k) const;
    const RelError* rel_error(const std::string& name) const;
};

struct SampleCounts {
    int pairs = 200;
    int triples_per_family = 50;
};

/// Samples alive pairs and available triples uniformly (a side RNG stream
/// derived from the run seed and step index, so observation never perturbs
/// the process), counts Y and W on them, and attaches predictions at
/// t = i/n^2. W counting is distributed over OpenMP threads when parallel
/// is set; results are identical either way.
Snapshot take_snapshot(const ProcessState& state, const SampleCounts& counts,
                       bool parallel = true);

}  // namespace hgt

#endif
