#ifndef HGT_EXPERIMENTS_HPP
#define HGT_EXPERIMENTS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hgt/observables.hpp"

namespace hgt {

inline constexpr int kSchemaVersion = 1;

/// Default snapshot grid: p stays bounded away from 0 here, so the
/// predictions are sharp; close to t = 1/6 the error terms blow up.
inline const std::vector<double> kDefaultTGrid{0.02, 0.05, 0.10, 0.13, 0.15};

struct RunConfig {
    int n = 0;
    int ell = 4;
    std::uint64_t seed = 1;
    std::int64_t snapshot_every = 0;     // in steps; 0 = none
    std::vector<double> t_grid;          // extra snapshot times
    SampleCounts samples;
    std::uint64_t max_bytes = ProcessState::kDefaultMaxBytes;

    bool operator==(const RunConfig&) const = default;
};

struct TerminalStats {
    std::int64_t m = 0;
    std::int64_t remaining_edges = 0;  // C(n,2) - 3m
    double wall_time_s = 0.0;
};

struct RunRecord {
    RunConfig config;
    std::vector<Snapshot> snapshots;  // ordered by i
    TerminalStats terminal;
};

/// Snapshot step indices implied by a config (merged snapshot_every grid and
/// t grid), sorted and deduplicated.
std::vector<std::int64_t> snapshot_steps(const RunConfig& config);

RunRecord run_one(const RunConfig& config,
                  std::shared_ptr<const ObstructionCatalog> catalog,
                  bool parallel_snapshots = true);

/// One record per seed, in seed order. Trials are independent and run across
/// OpenMP threads when parallel is set; records are identical either way.
std::vector<RunRecord> run_trials(const RunConfig& base,
                                  const std::vector<std::uint64_t>& seeds,
                                  std::shared_ptr<const ObstructionCatalog> catalog,
                                  bool parallel = true);

/// Least-squares slope of log(mean remaining edges) against log n.
/// Requires at least 3 distinct n values with positive means.
double fit_exponent(const std::vector<double>& ns, const std::vector<double>& mean_remaining);

struct Tolerances {
    double q = 0.05;
    double y = 0.10;
    double w = 0.20;
};

struct ConcentrationRow {
    double t = 0.0;
    double worst_q = 0.0;  // worst |rel error| over records (abs-flagged excluded)
    double worst_y = 0.0;
    double worst_w = 0.0;
    bool pass = false;
};

struct SweepPoint {
    int n = 0;
    double mean_remaining = 0.0;
    double stddev_remaining = 0.0;
    double mean_covered_fraction = 0.0;  // 3m / C(n,2), seed-averaged
    int trials = 0;
};

struct SweepReport {
    int ell = 0;
    std::vector<SweepPoint> points;          // ascending n
    double fitted_exponent = 0.0;
    std::vector<ConcentrationRow> concentration;
    Tolerances tolerances;
    bool all_pass = false;
};

/// Worst per-t relative errors across records, checked against tolerances.
/// Rows are keyed by snapshot time rounded to the common grid.
std::vector<ConcentrationRow> concentration_report(const std::vector<RunRecord>& records,
                                                   const Tolerances& tol);

SweepReport make_sweep_report(const std::vector<std::vector<RunRecord>>& per_n_records,
                              int ell, const Tolerances& tol);

/// JSON round-trips losslessly. include_timing=false zeroes wall_time_s so
/// deterministic replays serialize to identical bytes.
std::string record_to_json(const RunRecord& record, bool include_timing = true);
RunRecord record_from_json(const std::string& text);
std::string record_to_csv(const RunRecord& record);
std::string sweep_report_to_json(const SweepReport& report);
std::string sweep_report_to_csv(const SweepReport& report);

bool records_equal(const RunRecord& a, const RunRecord& b, bool compare_timing = false);

}  // namespace hgt

#endif
