#include "hgt/trajectories.hpp"

#include <algorithm>
#include <cmath>

#include "hgt/common.hpp"
#include "hgt/triple_code.hpp"

namespace hgt {

namespace {

double binom(int a, int b) {
    if (b < 0 || b > a) return 0.0;
    double r = 1.0;
    for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
}

constexpr double kTMax = 1.0 / 6.0;
constexpr double kTEps = 1e-12;

}  // namespace

const WHatEntry* TrajectoryPoint::find_w(const std::string& key, int k) const {
    for (const auto& e : w_hat)
        if (e.k == k && e.key == key) return &e;
    return nullptr;
}

double log_q_of_t(double t, const ObstructionCatalog& catalog) {
    double s = 0.0;
    for (const auto& f : catalog.large_members) {
        int ef = f.edge_count();
        s += 6.0 * ef / static_cast<double>(f.aut_count) * std::pow(6.0 * t, ef - 1);
    }
    return -s;
}

double q_of_t(double t, const ObstructionCatalog& catalog) {
    return std::exp(log_q_of_t(t, catalog));
}

double q_tilde_of_t(double t, const ObstructionCatalog& catalog) {
    double s = 0.0;
    for (const auto& f : catalog.large_members) {
        int ef = f.edge_count();
        s += 36.0 * ef * (ef - 1) / static_cast<double>(f.aut_count) *
             std::pow(6.0 * t, ef - 2);
    }
    return s;
}

TrajectoryPoint evaluate(double t, int n, const ObstructionCatalog& catalog) {
    HGT_CHECK(t >= -kTEps && t <= kTMax + kTEps, "t must lie in [0, 1/6]");
    t = std::clamp(t, 0.0, kTMax);
    TrajectoryPoint pt;
    pt.t = t;
    pt.n = n;
    pt.p = 1.0 - 6.0 * t;
    pt.pi = 6.0 * t / n;
    pt.q = q_of_t(t, catalog);
    pt.q_tilde = q_tilde_of_t(t, catalog);
    const double n3 = static_cast<double>(n) * n * n;
    pt.q_hat = pt.p * pt.p * pt.p * pt.q * n3 / 6.0;
    pt.y_hat = pt.p * pt.p * pt.q * n;

    const double pqn = pt.p * pt.p * pt.p * pt.q * n;
    for (const auto& f : catalog.large_members) {
        int ef = f.edge_count();
        for (int k = 0; k <= ef - 2; ++k) {
            WHatEntry e;
            e.key = f.canonical_key;
            e.k = k;
            e.value = 6.0 * ef / static_cast<double>(f.aut_count) * binom(ef - 1, k) *
                      std::pow(6.0 * t, k) * std::pow(pqn, ef - 1 - k);
            pt.w_hat.push_back(std::move(e));
        }
    }
    std::sort(pt.w_hat.begin(), pt.w_hat.end(), [](const WHatEntry& a, const WHatEntry& b) {
        return std::tie(a.key, a.k) < std::tie(b.key, b.k);
    });
    return pt;
}

double n_uvw_count(const Obstruction& f, int n) {
    if (n < f.vertex_count) return 0.0;
    double copies = 1.0;
    for (int i = 0; i < f.vertex_count; ++i) copies *= n - i;
    copies /= static_cast<double>(f.aut_count);
    return copies * f.edge_count() / static_cast<double>(choose3(n));
}

CountingEstimate counting_estimate(int n, const ObstructionCatalog& catalog) {
    CountingEstimate est;
    const double n2 = static_cast<double>(n) * n;
    const double n3 = n2 * n;

    // integral of log q over [0, 1/6] by composite Simpson; the integrand is
    // smooth and bounded, unlike log p which is handled in closed form
    // (integral of 3 log(1-6t) over [0,1/6] is exactly -1/2).
    const int panels = 10000;
    const double h = kTMax / panels;
    double acc = log_q_of_t(0.0, catalog) + log_q_of_t(kTMax, catalog);
    for (int i = 1; i < panels; ++i)
        acc += (i % 2 == 1 ? 4.0 : 2.0) * log_q_of_t(i * h, catalog);
    const double int_log_q = acc * h / 3.0;

    est.log_n1 = n2 * (std::log(n3 / 6.0) / 6.0 - 0.5 + int_log_q);
    est.log_n2 = std::lgamma(n2 / 6.0 + 1.0);
    est.log_ratio = est.log_n1 - est.log_n2;

    if (catalog.ell == 6) {
        est.closed_form_log_n1 = n2 / 6.0 * (std::log(n3 / 6.0) - 3.0 - 0.25);
        est.closed_form_log_ratio = n2 / 6.0 * (std::log(static_cast<double>(n)) - 2.25);
    }
    return est;
}

DerivativeReport derivative_check(double t, int n, const ObstructionCatalog& catalog) {
    HGT_CHECK(t > 0.0 && t < kTMax, "derivative check needs interior t");
    DerivativeReport rep;

    const double h = 1e-6;
    const double lo = std::max(t - h, 0.0);
    const double hi = std::min(t + h, kTMax);
    const double fd = (q_of_t(hi, catalog) - q_of_t(lo, catalog)) / (hi - lo);
    const double expected = -q_of_t(t, catalog) * q_tilde_of_t(t, catalog);
    const double scale = std::max({std::abs(expected), std::abs(fd), 1e-300});
    rep.fd_rel_dev = (catalog.large_members.empty() && fd == 0.0)
                         ? 0.0
                         : std::abs(fd - expected) / scale;

    TrajectoryPoint pt = evaluate(t, n, catalog);
    double lhs = 0.0;
    for (const auto& f : catalog.large_members) {
        const WHatEntry* e = pt.find_w(f.canonical_key, f.edge_count() - 2);
        lhs += e->value / pt.q_hat;
    }
    const double rhs = pt.q_tilde / (static_cast<double>(n) * n);
    const double s2 = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    rep.algebraic_rel_dev = (lhs == rhs) ? 0.0 : std::abs(lhs - rhs) / s2;
    return rep;
}

}  // namespace hgt
