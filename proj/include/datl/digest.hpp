#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace datl {

// FNV-1a 64-bit. Not cryptographic; used to pin input files in run manifests.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string digest_hex(std::string_view data) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out = "fnv1a64:";
    for (int i = 15; i >= 0; --i) out += hex[(h >> (4 * i)) & 0xf];
    return out;
}

} // namespace datl
