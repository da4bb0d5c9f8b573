#include "ctxauth/wire/password_cipher.hpp"

#include <algorithm>
#include <string>

#include "ctxauth/wire/digest.hpp"

namespace ctxauth::wire {

namespace {

void check_hidden_length(std::size_t n) {
    if (n == 0 || n % kCipherBlock != 0 || n > kMaxPasswordLength)
        throw WireError(WireErrc::BadLength, std::to_string(n) + " octets");
}

}  // namespace

HiddenPassword::HiddenPassword(Octets blocks) : blocks_(std::move(blocks)) {
    check_hidden_length(blocks_.size());
}

HiddenPassword hide_password(OctetView plaintext, OctetView secret, const Authenticator& ra) {
    if (plaintext.empty()) throw WireError(WireErrc::EmptyPassword, "plaintext is empty");
    if (plaintext.size() > kMaxPasswordLength)
        throw WireError(WireErrc::PasswordTooLong, std::to_string(plaintext.size()) + " octets");
    if (std::find(plaintext.begin(), plaintext.end(), 0) != plaintext.end())
        throw WireError(WireErrc::PasswordContainsPad, "plaintext contains 0x00");
    if (secret.empty()) throw WireError(WireErrc::EmptySecret, "shared secret is empty");

    const std::size_t padded = (plaintext.size() + kCipherBlock - 1) / kCipherBlock * kCipherBlock;
    Octets out(padded, 0);
    std::copy(plaintext.begin(), plaintext.end(), out.begin());

    OctetView chain(ra);
    for (std::size_t off = 0; off < padded; off += kCipherBlock) {
        const Md5Digest key = md5({secret, chain});
        for (std::size_t i = 0; i < kCipherBlock; ++i) out[off + i] ^= key[i];
        chain = OctetView(out).subspan(off, kCipherBlock);
    }
    return HiddenPassword(std::move(out));
}

Octets recover_password(const HiddenPassword& hidden, OctetView secret, const Authenticator& ra) {
    const Octets& in = hidden.octets();
    Octets out(in.size());

    OctetView chain(ra);
    for (std::size_t off = 0; off < in.size(); off += kCipherBlock) {
        const Md5Digest key = md5({secret, chain});
        for (std::size_t i = 0; i < kCipherBlock; ++i) out[off + i] = in[off + i] ^ key[i];
        chain = OctetView(in).subspan(off, kCipherBlock);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    if (out.empty()) throw WireError(WireErrc::AllPadRecovered, "recovered only pad octets");
    return out;
}

Octets recover_password(OctetView hidden, OctetView secret, const Authenticator& ra) {
    return recover_password(HiddenPassword(Octets(hidden.begin(), hidden.end())), secret, ra);
}

Authenticator compute_response_authenticator(const Packet& response, const Authenticator& request_ra,
                                             OctetView secret) {
    Packet stamped = response;
    stamped.authenticator = request_ra;
    const Octets image = encode_packet(stamped);
    return md5({image, secret});
}

bool verify_response_authenticator(const Packet& response, const Authenticator& request_ra,
                                   OctetView secret) {
    const Authenticator expected = compute_response_authenticator(response, request_ra, secret);
    return constant_time_equal(expected, response.authenticator);
}

}  // namespace ctxauth::wire
