#include "ctxauth/wire/octets.hpp"

namespace ctxauth {

std::string to_hex(OctetView o) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(o.size() * 2);
    for (auto b : o) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

namespace {

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::optional<Octets> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    Octets out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

}  // namespace ctxauth
