#ifndef HGT_TRIPLE_CODE_HPP
#define HGT_TRIPLE_CODE_HPP

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>

#include "hgt/common.hpp"

namespace hgt {

/// A sorted vertex triple {a<b<c} packed into one 32-bit word, 10 bits per
/// field. The packing is monotone: comparing codes compares triples
/// lexicographically.
using TripleCode = std::uint32_t;

inline constexpr int kVertexBits = 10;
inline constexpr int kMaxVertices = 1 << kVertexBits;  // 1024
inline constexpr std::uint32_t kNoTriple = 0xffffffffu;
inline constexpr std::uint32_t kNoPos = 0xffffffffu;

inline constexpr std::uint64_t choose2(std::uint64_t x) {
    return x < 2 ? 0 : x * (x - 1) / 2;
}

inline constexpr std::uint64_t choose3(std::uint64_t x) {
    return x < 3 ? 0 : x * (x - 1) * (x - 2) / 6;
}

inline TripleCode encode_triple(int a, int b, int c) {
    assert(0 <= a && a < b && b < c && c < kMaxVertices);
    return (static_cast<std::uint32_t>(a) << (2 * kVertexBits)) |
           (static_cast<std::uint32_t>(b) << kVertexBits) |
           static_cast<std::uint32_t>(c);
}

inline std::array<int, 3> decode_triple(TripleCode code) {
    return {static_cast<int>(code >> (2 * kVertexBits)),
            static_cast<int>((code >> kVertexBits) & (kMaxVertices - 1)),
            static_cast<int>(code & (kMaxVertices - 1))};
}

/// Colex rank of the sorted triple, a bijection onto [0, C(n,3)).
inline std::uint32_t triple_rank(int a, int b, int c) {
    return static_cast<std::uint32_t>(choose3(c) + choose2(b) + a);
}

inline std::uint32_t triple_rank(TripleCode code) {
    auto [a, b, c] = decode_triple(code);
    return triple_rank(a, b, c);
}

/// Colex rank of the sorted pair {u<v}, a bijection onto [0, C(n,2)).
inline std::uint32_t pair_rank(int u, int v) {
    assert(0 <= u && u < v);
    return static_cast<std::uint32_t>(choose2(v) + u);
}

inline std::array<int, 2> unrank_pair(std::uint32_t r) {
    // Invert r = C(v,2) + u.
    int v = 1 + static_cast<int>((std::sqrt(8.0 * static_cast<double>(r) + 1.0) - 1.0) / 2.0);
    while (choose2(static_cast<std::uint64_t>(v) + 1) <= r) ++v;
    while (choose2(static_cast<std::uint64_t>(v)) > r) --v;
    return {static_cast<int>(r - choose2(static_cast<std::uint64_t>(v))), v};
}

}  // namespace hgt

#endif
