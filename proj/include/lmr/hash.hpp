#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace lmr {

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Keys sorted (nlohmann's default object is an ordered map), no whitespace,
/// shortest round-trip float formatting.
inline std::string canonical_dump(const nlohmann::json& j) { return j.dump(); }

inline std::uint64_t canonical_hash(const nlohmann::json& j) { return fnv1a64(canonical_dump(j)); }

inline std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 15];
    return s;
}

}  // namespace lmr
