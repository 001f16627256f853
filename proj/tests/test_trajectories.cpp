#include <doctest.h>

#include <cmath>

#include "hgt/trajectories.hpp"
#include "oracles.hpp"

using namespace hgt;

namespace {
const ObstructionCatalog kCat4 = enumerate_obstructions(4);
const ObstructionCatalog kCat6 = enumerate_obstructions(6);
const ObstructionCatalog kCat7 = enumerate_obstructions(7);
}  // namespace

TEST_CASE("ell=4 trajectories reduce to triangle removal") {
    for (double t : {0.0, 0.03, 0.1, 1.0 / 6.0}) {
        const auto pt = evaluate(t, 500, kCat4);
        CHECK(pt.q == 1.0);
        CHECK(pt.q_tilde == 0.0);
        const double p = 1.0 - 6.0 * t;
        CHECK(pt.q_hat == doctest::Approx(p * p * p * 500.0 * 500.0 * 500.0 / 6.0));
        CHECK(pt.w_hat.empty());
    }
}

TEST_CASE("t=0 point") {
    const auto pt = evaluate(0.0, 100, kCat6);
    CHECK(pt.p == 1.0);
    CHECK(pt.q == 1.0);
    CHECK(pt.y_hat == doctest::Approx(100.0));
    CHECK(pt.pi == 0.0);
}

TEST_CASE("q at the right endpoint uses the catalog Pasch automorphism count") {
    const auto pt = evaluate(1.0 / 6.0, 50, kCat6);
    // single v>=6 member with e=4, aut=24: q = exp(-6*4/24) = exp(-1)
    CHECK(kCat6.large_members.size() == 1);
    CHECK(kCat6.large_members[0].aut_count == 24);
    CHECK(pt.q == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("consistency identities and remark bound") {
    for (const auto* cat : {&kCat4, &kCat6, &kCat7}) {
        const double bound = std::exp(-std::pow(static_cast<double>(cat->ell), 2.0 * cat->ell));
        double prev_q = 2.0;
        for (int j = 0; j <= 20; ++j) {
            const double t = j / 120.0;
            const auto pt = evaluate(t, 300, *cat);
            CHECK(pt.q_hat ==
                  doctest::Approx(pt.p * pt.p * pt.p * pt.q * 300.0 * 300.0 * 300.0 / 6.0));
            CHECK(pt.y_hat == doctest::Approx(pt.p * pt.p * pt.q * 300.0));
            CHECK(pt.q <= 1.0);
            CHECK(pt.q >= bound);
            CHECK(pt.q <= prev_q + 1e-15);  // non-increasing
            prev_q = pt.q;
            // w_hat_{F,0}(0) = (6 e_F/|Aut F|) n^{e_F-1} at t = 0
            if (j == 0)
                for (const auto& f : cat->large_members) {
                    const WHatEntry* e = pt.find_w(f.canonical_key, 0);
                    REQUIRE(e != nullptr);
                    CHECK(e->value ==
                          doctest::Approx(6.0 * f.edge_count() / static_cast<double>(f.aut_count) *
                                          std::pow(300.0, f.edge_count() - 1)));
                }
        }
    }
}

TEST_CASE("evaluate rejects t outside [0, 1/6]") {
    CHECK_THROWS(evaluate(-0.01, 10, kCat4));
    CHECK_THROWS(evaluate(0.17, 10, kCat4));
}

TEST_CASE("n_uvw_count exact values") {
    const auto& diamond = enumerate_obstructions(4).all_members[0];
    // 6 labeled diamonds on 4 vertices, each triple in 3 of them
    CHECK(n_uvw_count(diamond, 4) == doctest::Approx(3.0));
    CHECK(n_uvw_count(diamond, 3) == 0.0);

    const auto& pasch = kCat6.large_members[0];
    // |F_F| = 6!/24 = 30 on six vertices, cross-checked by brute force
    CHECK(hgt::testing::count_labeled_copies(pasch.as_hypergraph(), 6) == 30);
    CHECK(n_uvw_count(pasch, 6) == doctest::Approx(30.0 * 4 / 20.0));
    CHECK(n_uvw_count(pasch, 5) == 0.0);

    // cross-check the exact value against full enumeration at n = 8
    const std::int64_t copies8 = hgt::testing::count_labeled_copies(pasch.as_hypergraph(), 8);
    CHECK(n_uvw_count(pasch, 8) ==
          doctest::Approx(static_cast<double>(copies8) * 4 / 56.0));
}

TEST_CASE("derivative identities") {
    for (const auto* cat : {&kCat4, &kCat6, &kCat7}) {
        for (int j = 1; j <= 20; ++j) {
            const double t = j / 126.5;
            const auto rep = derivative_check(t, 400, *cat);
            CHECK(rep.fd_rel_dev <= 1e-6);
            CHECK(rep.algebraic_rel_dev <= 1e-12);
        }
    }
}

TEST_CASE("counting estimate matches the ell=6 closed form within 1%") {
    for (int n : {100, 500}) {
        const auto est = counting_estimate(n, kCat6);
        REQUIRE(est.closed_form_log_n1.has_value());
        CHECK(est.log_n1 ==
              doctest::Approx(*est.closed_form_log_n1).epsilon(0.01));
        CHECK(est.log_ratio ==
              doctest::Approx(est.log_n1 - est.log_n2).epsilon(1e-12));
        // closed-form ratio: (n^2/6)(log n - 9/4)
        CHECK(*est.closed_form_log_ratio ==
              doctest::Approx(n * n / 6.0 * (std::log(n) - 2.25)).epsilon(1e-12));
    }
    // no closed form outside ell=6
    CHECK_FALSE(counting_estimate(100, kCat4).closed_form_log_n1.has_value());
    // ell=4: N1 integrates only p-terms; ratio behaves like (n^2/6)(log n - 2)
    const auto e4 = counting_estimate(200, kCat4);
    CHECK(e4.log_n1 > e4.log_n2);
}
