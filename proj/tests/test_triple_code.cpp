#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hgt/triple_code.hpp"

using namespace hgt;

TEST_CASE("encode/decode round-trips every sorted triple at small n") {
    for (int n : {4, 9, 17}) {
        std::set<TripleCode> seen;
        std::set<std::uint32_t> ranks;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c) {
                    const TripleCode code = encode_triple(a, b, c);
                    const auto d = decode_triple(code);
                    CHECK(d[0] == a);
                    CHECK(d[1] == b);
                    CHECK(d[2] == c);
                    CHECK(seen.insert(code).second);
                    CHECK(ranks.insert(triple_rank(code)).second);
                }
        CHECK(seen.size() == choose3(n));
        CHECK(*ranks.begin() == 0);
        CHECK(*ranks.rbegin() == choose3(n) - 1);
    }
}

TEST_CASE("code order equals lexicographic triple order") {
    std::mt19937_64 rng(7);
    const int n = 1000;
    auto draw = [&]() {
        int a = static_cast<int>(rng() % n), b, c;
        do { b = static_cast<int>(rng() % n); } while (b == a);
        do { c = static_cast<int>(rng() % n); } while (c == a || c == b);
        std::array<int, 3> t{a, b, c};
        std::sort(t.begin(), t.end());
        return t;
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const auto t1 = draw(), t2 = draw();
        const bool lex = t1 < t2;
        CHECK((encode_triple(t1[0], t1[1], t1[2]) < encode_triple(t2[0], t2[1], t2[2])) == lex);
    }
}

TEST_CASE("pair rank bijects and unranks") {
    const int n = 120;
    std::set<std::uint32_t> seen;
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u) {
            const std::uint32_t r = pair_rank(u, v);
            CHECK(seen.insert(r).second);
            const auto [uu, vv] = unrank_pair(r);
            CHECK(uu == u);
            CHECK(vv == v);
        }
    CHECK(seen.size() == choose2(n));
}
