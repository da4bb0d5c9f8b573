#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctxauth {

using Octets = std::vector<std::uint8_t>;
using OctetView = std::span<const std::uint8_t>;

inline Octets to_octets(std::string_view s) { return Octets(s.begin(), s.end()); }

inline std::string to_string(OctetView o) { return std::string(o.begin(), o.end()); }

std::string to_hex(OctetView o);

// Accepts upper or lower case; returns nullopt on odd length or a non-hex digit.
std::optional<Octets> from_hex(std::string_view hex);

}  // namespace ctxauth
