#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

#include "ctxauth/wire/octets.hpp"

namespace ctxauth {

using Md5Digest = std::array<std::uint8_t, 16>;
using Sha256Digest = std::array<std::uint8_t, 32>;

// Digest over the concatenation of all parts, in order.
Md5Digest md5(std::initializer_list<OctetView> parts);
Sha256Digest sha256(std::initializer_list<OctetView> parts);

// Constant-time equality for equal-length buffers; false on length mismatch.
bool constant_time_equal(OctetView a, OctetView b);

// Cryptographically secure random octets.
Octets random_octets(std::size_t n);

}  // namespace ctxauth
