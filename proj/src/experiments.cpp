#include "hgt/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "hgt/common.hpp"

namespace hgt {

using nlohmann::json;

std::vector<std::int64_t> snapshot_steps(const RunConfig& config) {
    std::vector<std::int64_t> steps;
    const double n2 = static_cast<double>(config.n) * config.n;
    const std::int64_t max_step = static_cast<std::int64_t>(choose2(config.n)) / 3 + 1;
    if (config.snapshot_every > 0)
        for (std::int64_t i = 0; i <= max_step; i += config.snapshot_every)
            steps.push_back(i);
    for (double t : config.t_grid) {
        HGT_CHECK(t >= 0.0 && t <= 1.0 / 6.0 + 1e-12, "t grid entry outside [0, 1/6]");
        steps.push_back(std::llround(t * n2));
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

RunRecord run_one(const RunConfig& config,
                  std::shared_ptr<const ObstructionCatalog> catalog,
                  bool parallel_snapshots) {
    RunRecord record;
    record.config = config;
    const auto t0 = std::chrono::steady_clock::now();

    ProcessState state(config.n, config.ell, config.seed, std::move(catalog),
                       config.max_bytes);
    const auto steps = snapshot_steps(config);
    state.run_to_completion(steps, [&](const ProcessState& s) {
        record.snapshots.push_back(take_snapshot(s, config.samples, parallel_snapshots));
    });

    record.terminal.m = state.step_count();
    record.terminal.remaining_edges =
        static_cast<std::int64_t>(choose2(config.n)) - 3 * record.terminal.m;
    record.terminal.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return record;
}

std::vector<RunRecord> run_trials(const RunConfig& base,
                                  const std::vector<std::uint64_t>& seeds,
                                  std::shared_ptr<const ObstructionCatalog> catalog,
                                  bool parallel) {
    std::vector<RunRecord> records(seeds.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(seeds.size()); ++i) {
        RunConfig cfg = base;
        cfg.seed = seeds[i];
        // inner snapshot counting stays serial when trials run in parallel
        records[i] = run_one(cfg, catalog, /*parallel_snapshots=*/!parallel);
    }
    return records;
}

double fit_exponent(const std::vector<double>& ns, const std::vector<double>& mean_remaining) {
    HGT_CHECK(ns.size() == mean_remaining.size(), "fit_exponent: size mismatch");
    std::vector<double> xs;
    for (double n : ns) xs.push_back(n);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    HGT_CHECK(xs.size() >= 3, "fit_exponent: need at least 3 distinct n values");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        HGT_CHECK(ns[i] > 0 && mean_remaining[i] > 0, "fit_exponent: values must be positive");
        const double x = std::log(ns[i]);
        const double y = std::log(mean_remaining[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    HGT_CHECK(std::abs(denom) > 1e-12, "fit_exponent: degenerate grid");
    return (m * sxy - sx * sy) / denom;
}

std::vector<ConcentrationRow> concentration_report(const std::vector<RunRecord>& records,
                                                   const Tolerances& tol) {
    // group snapshots by t (rounded enough to merge across equal grids)
    std::vector<std::pair<double, ConcentrationRow>> rows;
    auto row_for = [&rows](double t) -> ConcentrationRow& {
        for (auto& [rt, row] : rows)
            if (std::abs(rt - t) < 1e-9) return row;
        rows.push_back({t, ConcentrationRow{}});
        rows.back().second.t = t;
        return rows.back().second;
    };

    for (const auto& rec : records) {
        for (const auto& snap : rec.snapshots) {
            ConcentrationRow& row = row_for(snap.t);
            for (const auto& [name, err] : snap.rel_errors) {
                if (err.absolute) continue;
                const double a = std::abs(err.value);
                if (name == "q_size") row.worst_q = std::max(row.worst_q, a);
                else if (name == "y_mean") row.worst_y = std::max(row.worst_y, a);
                else if (name.rfind("w_mean:", 0) == 0) row.worst_w = std::max(row.worst_w, a);
            }
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<ConcentrationRow> out;
    for (auto& [t, row] : rows) {
        (void)t;
        row.pass = row.worst_q <= tol.q && row.worst_y <= tol.y && row.worst_w <= tol.w;
        out.push_back(row);
    }
    return out;
}

SweepReport make_sweep_report(const std::vector<std::vector<RunRecord>>& per_n_records,
                              int ell, const Tolerances& tol) {
    SweepReport report;
    report.ell = ell;
    report.tolerances = tol;

    std::vector<double> ns, means;
    std::vector<RunRecord> all_records;
    for (const auto& group : per_n_records) {
        HGT_CHECK(!group.empty(), "sweep: empty record group");
        SweepPoint pt;
        pt.n = group.front().config.n;
        pt.trials = static_cast<int>(group.size());
        double sum = 0, sum2 = 0, cov = 0;
        for (const auto& rec : group) {
            const double r = static_cast<double>(rec.terminal.remaining_edges);
            sum += r;
            sum2 += r * r;
            cov += 3.0 * static_cast<double>(rec.terminal.m) /
                   static_cast<double>(choose2(pt.n));
            all_records.push_back(rec);
        }
        const double k = static_cast<double>(group.size());
        pt.mean_remaining = sum / k;
        pt.stddev_remaining = k > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / k) / (k - 1)))
                                    : 0.0;
        pt.mean_covered_fraction = cov / k;
        report.points.push_back(pt);
        ns.push_back(pt.n);
        means.push_back(pt.mean_remaining);
    }
    std::sort(report.points.begin(), report.points.end(),
              [](const SweepPoint& a, const SweepPoint& b) { return a.n < b.n; });

    report.fitted_exponent = ns.size() >= 3 ? fit_exponent(ns, means) : 0.0;
    report.concentration = concentration_report(all_records, tol);
    report.all_pass = std::all_of(report.concentration.begin(), report.concentration.end(),
                                  [](const ConcentrationRow& r) { return r.pass; });
    return report;
}

namespace {

json trajectory_point_to_json(const TrajectoryPoint& pt) {
    json j;
    j["t"] = pt.t;
    j["n"] = pt.n;
    j["p"] = pt.p;
    j["pi"] = pt.pi;
    j["q"] = pt.q;
    j["q_tilde"] = pt.q_tilde;
    j["q_hat"] = pt.q_hat;
    j["y_hat"] = pt.y_hat;
    json w = json::object();
    for (const auto& e : pt.w_hat)
        w[to_hex(e.key) + ":" + std::to_string(e.k)] = e.value;
    j["w_hat"] = w;
    return j;
}

TrajectoryPoint trajectory_point_from_json(const json& j) {
    TrajectoryPoint pt;
    pt.t = j.at("t").get<double>();
    pt.n = j.at("n").get<int>();
    pt.p = j.at("p").get<double>();
    pt.pi = j.at("pi").get<double>();
    pt.q = j.at("q").get<double>();
    pt.q_tilde = j.at("q_tilde").get<double>();
    pt.q_hat = j.at("q_hat").get<double>();
    pt.y_hat = j.at("y_hat").get<double>();
    for (const auto& [key, val] : j.at("w_hat").items()) {
        WHatEntry e;
        const auto colon = key.rfind(':');
        e.key = from_hex(key.substr(0, colon));
        e.k = std::stoi(key.substr(colon + 1));
        e.value = val.get<double>();
        pt.w_hat.push_back(std::move(e));
    }
    std::sort(pt.w_hat.begin(), pt.w_hat.end(), [](const WHatEntry& a, const WHatEntry& b) {
        return std::tie(a.key, a.k) < std::tie(b.key, b.k);
    });
    return pt;
}

json snapshot_to_json(const Snapshot& s) {
    json j;
    j["i"] = s.i;
    j["t"] = s.t;
    j["q_size"] = s.q_size;
    j["alive_pairs"] = s.alive_pairs;
    json ys = json::array();
    for (const auto& y : s.y_samples) ys.push_back({y.u, y.v, y.count});
    j["y_samples"] = ys;
    json ws = json::array();
    for (const auto& w : s.w_samples) {
        json jw;
        jw["triple"] = {w.triple[0], w.triple[1], w.triple[2]};
        jw["key"] = to_hex(w.key);
        jw["k"] = w.k;
        jw["count"] = w.count;
        ws.push_back(jw);
    }
    j["w_samples"] = ws;
    j["predicted"] = trajectory_point_to_json(s.predicted);
    json errs = json::object();
    for (const auto& [name, err] : s.rel_errors) {
        json je;
        je["value"] = err.value;
        je["absolute"] = err.absolute;
        errs[name] = je;
    }
    j["rel_errors"] = errs;
    return j;
}

Snapshot snapshot_from_json(const json& j) {
    Snapshot s;
    s.i = j.at("i").get<std::int64_t>();
    s.t = j.at("t").get<double>();
    s.q_size = j.at("q_size").get<std::int64_t>();
    s.alive_pairs = j.at("alive_pairs").get<std::int64_t>();
    for (const auto& y : j.at("y_samples"))
        s.y_samples.push_back({y[0].get<int>(), y[1].get<int>(), y[2].get<std::int64_t>()});
    for (const auto& w : j.at("w_samples")) {
        WSample ws;
        ws.triple = {w.at("triple")[0].get<int>(), w.at("triple")[1].get<int>(),
                     w.at("triple")[2].get<int>()};
        ws.key = from_hex(w.at("key").get<std::string>());
        ws.k = w.at("k").get<int>();
        ws.count = w.at("count").get<std::int64_t>();
        s.w_samples.push_back(std::move(ws));
    }
    s.predicted = trajectory_point_from_json(j.at("predicted"));
    for (const auto& [name, je] : j.at("rel_errors").items())
        s.rel_errors.emplace_back(name, RelError{je.at("value").get<double>(),
                                                 je.at("absolute").get<bool>()});
    std::sort(s.rel_errors.begin(), s.rel_errors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return s;
}

}  // namespace

std::string record_to_json(const RunRecord& record, bool include_timing) {
    json j;
    j["schema_version"] = kSchemaVersion;
    json jc;
    jc["n"] = record.config.n;
    jc["ell"] = record.config.ell;
    jc["seed"] = record.config.seed;
    jc["snapshot_every"] = record.config.snapshot_every;
    jc["t_grid"] = record.config.t_grid;
    jc["pairs_sampled"] = record.config.samples.pairs;
    jc["triples_sampled"] = record.config.samples.triples_per_family;
    jc["max_bytes"] = record.config.max_bytes;
    j["config"] = jc;
    json snaps = json::array();
    for (const auto& s : record.snapshots) snaps.push_back(snapshot_to_json(s));
    j["snapshots"] = snaps;
    json jt;
    jt["m"] = record.terminal.m;
    jt["remaining_edges"] = record.terminal.remaining_edges;
    jt["wall_time_s"] = include_timing ? record.terminal.wall_time_s : 0.0;
    j["terminal"] = jt;
    return j.dump(2);
}

RunRecord record_from_json(const std::string& text) {
    const json j = json::parse(text);
    HGT_CHECK(j.at("schema_version").get<int>() == kSchemaVersion,
              "unsupported schema version");
    RunRecord r;
    const json& jc = j.at("config");
    r.config.n = jc.at("n").get<int>();
    r.config.ell = jc.at("ell").get<int>();
    r.config.seed = jc.at("seed").get<std::uint64_t>();
    r.config.snapshot_every = jc.at("snapshot_every").get<std::int64_t>();
    r.config.t_grid = jc.at("t_grid").get<std::vector<double>>();
    r.config.samples.pairs = jc.at("pairs_sampled").get<int>();
    r.config.samples.triples_per_family = jc.at("triples_sampled").get<int>();
    r.config.max_bytes = jc.at("max_bytes").get<std::uint64_t>();
    for (const auto& js : j.at("snapshots")) r.snapshots.push_back(snapshot_from_json(js));
    r.terminal.m = j.at("terminal").at("m").get<std::int64_t>();
    r.terminal.remaining_edges = j.at("terminal").at("remaining_edges").get<std::int64_t>();
    r.terminal.wall_time_s = j.at("terminal").at("wall_time_s").get<double>();
    return r;
}

std::string record_to_csv(const RunRecord& record) {
    // stable (key, k) column set from the union over snapshots
    std::vector<std::pair<std::string, int>> wkeys;
    for (const auto& s : record.snapshots)
        for (const auto& e : s.predicted.w_hat)
            if (std::find(wkeys.begin(), wkeys.end(), std::make_pair(e.key, e.k)) == wkeys.end())
                wkeys.push_back({e.key, e.k});
    std::sort(wkeys.begin(), wkeys.end());

    std::ostringstream os;
    os.precision(17);
    os << "i,t,q_obs,q_pred,q_relerr,y_mean_obs,y_pred,y_relerr";
    for (const auto& [key, k] : wkeys) {
        const std::string col = to_hex(key) + ":" + std::to_string(k);
        os << ",w_obs_" << col << ",w_pred_" << col << ",w_relerr_" << col;
    }
    os << "\n";
    for (const auto& s : record.snapshots) {
        const RelError* qe = s.rel_error("q_size");
        const RelError* ye = s.rel_error("y_mean");
        os << s.i << "," << s.t << "," << s.q_size << "," << s.predicted.q_hat << ","
           << (qe ? qe->value : 0.0) << "," << s.y_mean() << "," << s.predicted.y_hat << ","
           << (ye ? ye->value : 0.0);
        for (const auto& [key, k] : wkeys) {
            const WHatEntry* wh = s.predicted.find_w(key, k);
            const RelError* we = s.rel_error("w_mean:" + to_hex(key) + ":" + std::to_string(k));
            os << "," << s.w_mean(key, k) << "," << (wh ? wh->value : 0.0) << ","
               << (we ? we->value : 0.0);
        }
        os << "\n";
    }
    return os.str();
}

std::string sweep_report_to_json(const SweepReport& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["ell"] = report.ell;
    json pts = json::array();
    for (const auto& p : report.points) {
        json jp;
        jp["n"] = p.n;
        jp["mean_remaining"] = p.mean_remaining;
        jp["stddev_remaining"] = p.stddev_remaining;
        jp["mean_covered_fraction"] = p.mean_covered_fraction;
        jp["trials"] = p.trials;
        pts.push_back(jp);
    }
    j["points"] = pts;
    j["fitted_exponent"] = report.fitted_exponent;
    json rows = json::array();
    for (const auto& r : report.concentration) {
        json jr;
        jr["t"] = r.t;
        jr["worst_q"] = r.worst_q;
        jr["worst_y"] = r.worst_y;
        jr["worst_w"] = r.worst_w;
        jr["pass"] = r.pass;
        rows.push_back(jr);
    }
    j["concentration"] = rows;
    j["tolerances"] = {{"q", report.tolerances.q},
                       {"y", report.tolerances.y},
                       {"w", report.tolerances.w}};
    j["all_pass"] = report.all_pass;
    return j.dump(2);
}

std::string sweep_report_to_csv(const SweepReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "n,trials,mean_remaining,stddev_remaining,mean_covered_fraction\n";
    for (const auto& p : report.points)
        os << p.n << "," << p.trials << "," << p.mean_remaining << ","
           << p.stddev_remaining << "," << p.mean_covered_fraction << "\n";
    return os.str();
}

bool records_equal(const RunRecord& a, const RunRecord& b, bool compare_timing) {
    return record_to_json(a, compare_timing) == record_to_json(b, compare_timing);
}

}  // namespace hgt
