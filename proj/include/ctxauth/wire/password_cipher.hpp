#pragma once

#include "ctxauth/wire/octets.hpp"
#include "ctxauth/wire/packet.hpp"

namespace ctxauth::wire {

inline constexpr std::size_t kCipherBlock = 16;
inline constexpr std::size_t kMaxPasswordLength = 128;

// Concatenated cipher blocks c_1..c_n of a hidden password.
class HiddenPassword {
public:
    // Throws WireError(BadLength) unless the size is a positive multiple of 16, at most 128.
    explicit HiddenPassword(Octets blocks);

    const Octets& octets() const noexcept { return blocks_; }
    std::size_t block_count() const noexcept { return blocks_.size() / kCipherBlock; }

    bool operator==(const HiddenPassword&) const = default;

private:
    Octets blocks_;
};

// c_1 = p_1 xor MD5(secret | ra), c_i = p_i xor MD5(secret | c_{i-1}); p zero-padded to 16.
HiddenPassword hide_password(OctetView plaintext, OctetView secret, const Authenticator& ra);

// Inverse of hide_password; strips the trailing 0x00 pad.
Octets recover_password(const HiddenPassword& hidden, OctetView secret, const Authenticator& ra);
Octets recover_password(OctetView hidden, OctetView secret, const Authenticator& ra);

// MD5(code | identifier | length | request_ra | attributes | secret).
Authenticator compute_response_authenticator(const Packet& response, const Authenticator& request_ra,
                                             OctetView secret);

bool verify_response_authenticator(const Packet& response, const Authenticator& request_ra,
                                   OctetView secret);

}  // namespace ctxauth::wire
