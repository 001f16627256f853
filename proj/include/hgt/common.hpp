#ifndef HGT_COMMON_HPP
#define HGT_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hgt {

// Always-on precondition check; failures throw instead of aborting so the
// CLI can report them.
#define HGT_CHECK(cond, msg)                                       \
    do {                                                           \
        if (!(cond)) throw std::invalid_argument(std::string(msg)); \
    } while (0)

#define HGT_REQUIRE_STATE(cond, msg)                              \
    do {                                                          \
        if (!(cond)) throw std::runtime_error(std::string(msg));  \
    } while (0)

inline std::string to_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

inline std::string from_hex(const std::string& hex) {
    HGT_CHECK(hex.size() % 2 == 0, "hex string must have even length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("bad hex digit");
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<char>((nib(hex[i]) << 4) | nib(hex[i + 1])));
    return out;
}

// splitmix64, used to derive auxiliary RNG streams from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0x517cc1b727220a95ULL * (stream + 1));
    std::uint64_t a = splitmix64(x);
    std::uint64_t b = splitmix64(x);
    return a ^ (b << 1);
}

}  // namespace hgt

#endif
