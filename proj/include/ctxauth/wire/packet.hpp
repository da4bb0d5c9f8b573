#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ctxauth/wire/error.hpp"
#include "ctxauth/wire/octets.hpp"

namespace ctxauth::wire {

enum class Code : std::uint8_t {
    AccessRequest = 1,
    AccessAccept = 2,
    AccessReject = 3,
    AccessChallenge = 11,
};

const char* code_name(Code c);

// Attribute numbers understood by the server. Anything else round-trips opaquely.
namespace attr {
inline constexpr std::uint8_t UserName = 1;
inline constexpr std::uint8_t UserPassword = 2;
inline constexpr std::uint8_t NasIpAddress = 4;
inline constexpr std::uint8_t ServiceType = 6;
inline constexpr std::uint8_t ReplyMessage = 18;
inline constexpr std::uint8_t State = 24;
}  // namespace attr

// Service-Type values.
namespace service {
inline constexpr std::uint32_t LoginUser = 1;
inline constexpr std::uint32_t AdministrativeUser = 6;
}  // namespace service

const char* attribute_name(std::uint8_t type);

inline constexpr std::size_t kHeaderSize = 20;
inline constexpr std::size_t kMaxPacketSize = 4096;
inline constexpr std::size_t kMaxAttributeValue = 253;

using Authenticator = std::array<std::uint8_t, 16>;

struct Attribute {
    std::uint8_t type = 0;
    Octets value;

    bool operator==(const Attribute&) const = default;
};

struct Packet {
    Code code = Code::AccessRequest;
    std::uint8_t identifier = 0;
    Authenticator authenticator{};
    std::vector<Attribute> attributes;

    bool operator==(const Packet&) const = default;

    // First attribute of the given type, if any.
    const Attribute* find(std::uint8_t type) const;

    Packet& add(std::uint8_t type, Octets value);
    Packet& add(std::uint8_t type, std::string_view text) { return add(type, to_octets(text)); }
    Packet& add_u32(std::uint8_t type, std::uint32_t value);

    std::size_t encoded_length() const;
};

// Big-endian 32-bit attribute payload (Service-Type, NAS-IP-Address).
std::optional<std::uint32_t> read_u32(const Attribute& a);

Octets encode_packet(const Packet& packet);

// Declared length governs; octets past it are ignored.
Packet decode_packet(OctetView bytes);

}  // namespace ctxauth::wire
