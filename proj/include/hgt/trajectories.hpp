#ifndef HGT_TRAJECTORIES_HPP
#define HGT_TRAJECTORIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "hgt/catalog.hpp"

namespace hgt {

/// Predicted value of one extension statistic, keyed by the obstruction's
/// canonical key and the number k of its triples already placed.
struct WHatEntry {
    std::string key;  // canonical key (raw bytes)
    int k = 0;
    double value = 0.0;
};

/// All closed-form predictions at continuous time t = i/n^2.
///
///   p(t)      = 1 - 6t                    surviving-pair probability
///   pi(t,n)   = 6t / n                    per-triple placement probability
///   q(t)      = exp(-sum_F (6 e_F / |Aut F|) (6t)^{e_F - 1})   over v >= 6
///   q_tilde   = sum_F 36 e_F (e_F - 1) (6t)^{e_F - 2} / |Aut F|
///   q_hat     = p^3 q n^3 / 6             predicted |Q|
///   y_hat     = p^2 q n                   predicted available codegree
///   w_hat_F,k = (6 e_F/|Aut F|) C(e_F-1,k) (6t)^k (p^3 q n)^{e_F-1-k}
struct TrajectoryPoint {
    double t = 0.0;
    int n = 0;
    double p = 0.0;
    double pi = 0.0;
    double q = 0.0;
    double q_tilde = 0.0;
    double q_hat = 0.0;
    double y_hat = 0.0;
    std::vector<WHatEntry> w_hat;  // sorted by (key, k)

    const WHatEntry* find_w(const std::string& key, int k) const;
};

/// Evaluate all trajectories; rejects t outside [0, 1/6].
TrajectoryPoint evaluate(double t, int n, const ObstructionCatalog& catalog);

double q_of_t(double t, const ObstructionCatalog& catalog);
double q_tilde_of_t(double t, const ObstructionCatalog& catalog);
double log_q_of_t(double t, const ObstructionCatalog& catalog);

/// Exact expected number of copies of F through a fixed triple on n labeled
/// vertices: |F_F| e_F / C(n,3) with |F_F| = n(n-1)...(n-v_F+1) / |Aut F|.
/// This keeps the O(n^{e_F-2}) correction that the leading-order form
/// (6 e_F / |Aut F|) n^{e_F-1} drops. Returns 0 for n < v_F.
double n_uvw_count(const Obstruction& f, int n);

/// Log-scale sequence-counting estimate: log N1 integrates n^2 log q_hat(t)
/// over [0, 1/6] (the 3 log p part in closed form, log q by Simpson's rule),
/// log N2 = log (n^2/6)!. For ell = 6 the closed forms
/// log N1 = (n^2/6)(log(n^3/6) - 3 - 1/4) and
/// log ratio = (n^2/6)(log n - 9/4) are emitted alongside as a cross-check.
struct CountingEstimate {
    double log_n1 = 0.0;
    double log_n2 = 0.0;
    double log_ratio = 0.0;
    std::optional<double> closed_form_log_n1;
    std::optional<double> closed_form_log_ratio;
};
CountingEstimate counting_estimate(int n, const ObstructionCatalog& catalog);

/// Verifies q'(t) = -q(t) q_tilde(t) by central differences and the algebraic
/// identity sum_F w_hat_{F,e_F-2} / q_hat = q_tilde / n^2.
struct DerivativeReport {
    double fd_rel_dev = 0.0;
    double algebraic_rel_dev = 0.0;
};
DerivativeReport derivative_check(double t, int n, const ObstructionCatalog& catalog);

}  // namespace hgt

#endif
