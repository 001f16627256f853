#ifndef HGT_ENGINE_HPP
#define HGT_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hgt/catalog.hpp"
#include "hgt/triple_code.hpp"

namespace hgt {

/// The evolving state of the high-girth triple process.
///
/// Q(i), the set of available triples, is a dense array of codes with a
/// rank-indexed position map: uniform sampling is one RNG draw, deletion is
/// a swap-remove. E(i) is tracked the same way over pairs. Per-pair lists of
/// available third vertices are kept lazily: entries go stale when a triple
/// leaves Q and are filtered against the position map on every read, so a
/// deletion costs O(1) regardless of how many lists mention the triple.
///
/// A ProcessState is single-threaded and mutable; the catalog is shared
/// read-only. Distinct-seed states are fully independent.
class ProcessState {
  public:
    /// Q(0) = all C(n,3) triples, E(0) complete. Requires n >= 4,
    /// 4 <= ell <= 9, catalog enumerated for ell, and the estimated memory
    /// footprint to fit max_bytes. Deterministic given seed.
    ProcessState(int n, int ell, std::uint64_t seed,
                 std::shared_ptr<const ObstructionCatalog> catalog,
                 std::uint64_t max_bytes = kDefaultMaxBytes);

    static constexpr std::uint64_t kDefaultMaxBytes = 8ull << 30;
    static std::uint64_t estimate_bytes(int n);

    int n() const { return n_; }
    int ell() const { return ell_; }
    std::uint64_t seed() const { return seed_; }
    const ObstructionCatalog& catalog() const { return *catalog_; }

    std::int64_t step_count() const { return static_cast<std::int64_t>(chosen_.size()); }
    std::size_t q_size() const { return q_codes_.size(); }
    std::span<const TripleCode> q_codes() const { return q_codes_; }
    std::span<const TripleCode> chosen() const { return chosen_; }

    bool q_contains(TripleCode code) const { return q_pos_[triple_rank(code)] != kNoPos; }
    bool pair_alive(int u, int v) const { return pair_alive_[pr(u, v)] != 0; }
    std::size_t alive_pair_count() const { return alive_pairs_.size(); }
    std::span<const std::uint32_t> alive_pairs() const { return alive_pairs_; }

    /// Chosen triple covering pair {u,v}, or kNoTriple.
    TripleCode chosen_at_pair(int u, int v) const { return pair_chosen_[pr(u, v)]; }
    std::span<const TripleCode> chosen_at_vertex(int x) const { return vertex_chosen_[x]; }

    /// Raw per-pair list of candidate third vertices; may contain stale
    /// entries, callers must re-test membership via q_contains.
    std::span<const std::uint16_t> pair_list_raw(int u, int v) const {
        return pair_z_[pr(u, v)];
    }

    /// One process step: sample uniformly from Q, apply. Returns the chosen
    /// triple, or nullopt once Q is empty (the process has terminated).
    std::optional<TripleCode> step();

    /// Advance the process as if `code` had been sampled. It must be in Q.
    void apply(TripleCode code);

    /// Triples of Q that become unavailable because H (which must already
    /// contain new_triple) plus that triple completes a copy of some F with
    /// v_F >= 6, the copy using both new_triple and the returned triple.
    /// Sorted, deduplicated.
    std::vector<TripleCode> find_closing_triples(TripleCode new_triple) const;

    /// Steps until Q is empty. on_snapshot(state) fires whenever step_count
    /// reaches a value in snapshot_steps (sorted ascending; 0 fires before
    /// the first step). Returns the terminal number of triples m.
    std::int64_t run_to_completion(std::span<const std::int64_t> snapshot_steps = {},
                                   const std::function<void(const ProcessState&)>& on_snapshot = {});

    /// Uniform draw from [0, bound) by rejection sampling on mt19937_64;
    /// bit-reproducible across platforms, unlike the distribution adaptors.
    std::uint64_t uniform_below(std::uint64_t bound);

  private:
    std::uint32_t pr(int u, int v) const { return u < v ? pair_rank(u, v) : pair_rank(v, u); }
    void remove_from_q(TripleCode code);
    void kill_pair(int u, int v);

    int n_ = 0;
    int ell_ = 0;
    std::uint64_t seed_ = 0;
    std::shared_ptr<const ObstructionCatalog> catalog_;
    std::mt19937_64 rng_;

    std::vector<TripleCode> q_codes_;
    std::vector<std::uint32_t> q_pos_;  // by triple rank
    std::vector<TripleCode> chosen_;
    std::vector<std::uint8_t> pair_alive_;       // by pair rank
    std::vector<std::uint32_t> alive_pairs_;     // pair ranks, swap-remove order
    std::vector<std::uint32_t> alive_pair_pos_;  // by pair rank
    std::vector<TripleCode> pair_chosen_;        // by pair rank
    std::vector<std::vector<TripleCode>> vertex_chosen_;
    std::vector<std::vector<std::uint16_t>> pair_z_;
};

/// Ground-truth availability: xyz not already chosen, meets every chosen
/// triple in at most one vertex, and H + xyz embeds no catalog member with
/// v >= 6 (equivalently, no member of the full family; both forms are
/// evaluated and must agree). Reads only n, ell, catalog and the chosen
/// list, independently of the incremental bookkeeping above.
bool is_available_bruteforce(const ProcessState& state, TripleCode xyz);

/// Batch form: rebuilds the scratch index once and classifies every triple.
/// Returns the sorted list of available codes. With parallel=true the scan
/// is distributed over OpenMP threads; results are identical either way.
std::vector<TripleCode> recompute_available_bruteforce(const ProcessState& state,
                                                       bool parallel = false);

}  // namespace hgt

#endif
