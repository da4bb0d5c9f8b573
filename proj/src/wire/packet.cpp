#include "ctxauth/wire/packet.hpp"

#include <algorithm>
#include <string>

namespace ctxauth {

const char* to_string(WireErrc e) {
    switch (e) {
        case WireErrc::AttributeTooLong: return "AttributeTooLong";
        case WireErrc::PacketTooLong: return "PacketTooLong";
        case WireErrc::Truncated: return "Truncated";
        case WireErrc::MalformedAttribute: return "MalformedAttribute";
        case WireErrc::UnknownCode: return "UnknownCode";
        case WireErrc::EmptyPassword: return "EmptyPassword";
        case WireErrc::PasswordTooLong: return "PasswordTooLong";
        case WireErrc::PasswordContainsPad: return "PasswordContainsPad";
        case WireErrc::EmptySecret: return "EmptySecret";
        case WireErrc::BadLength: return "BadLength";
        case WireErrc::AllPadRecovered: return "AllPadRecovered";
    }
    return "WireError";
}

}  // namespace ctxauth

namespace ctxauth::wire {

const char* code_name(Code c) {
    switch (c) {
        case Code::AccessRequest: return "Access-Request";
        case Code::AccessAccept: return "Access-Accept";
        case Code::AccessReject: return "Access-Reject";
        case Code::AccessChallenge: return "Access-Challenge";
    }
    return "Unknown";
}

const char* attribute_name(std::uint8_t type) {
    switch (type) {
        case attr::UserName: return "User-Name";
        case attr::UserPassword: return "User-Password";
        case attr::NasIpAddress: return "NAS-IP-Address";
        case attr::ServiceType: return "Service-Type";
        case attr::ReplyMessage: return "Reply-Message";
        case attr::State: return "State";
        default: return "Attr";
    }
}

const Attribute* Packet::find(std::uint8_t type) const {
    auto it = std::find_if(attributes.begin(), attributes.end(),
                           [type](const Attribute& a) { return a.type == type; });
    return it == attributes.end() ? nullptr : &*it;
}

Packet& Packet::add(std::uint8_t type, Octets value) {
    attributes.push_back(Attribute{type, std::move(value)});
    return *this;
}

Packet& Packet::add_u32(std::uint8_t type, std::uint32_t value) {
    return add(type, Octets{static_cast<std::uint8_t>(value >> 24), static_cast<std::uint8_t>(value >> 16),
                            static_cast<std::uint8_t>(value >> 8), static_cast<std::uint8_t>(value)});
}

std::size_t Packet::encoded_length() const {
    std::size_t n = kHeaderSize;
    for (const auto& a : attributes) n += 2 + a.value.size();
    return n;
}

std::optional<std::uint32_t> read_u32(const Attribute& a) {
    if (a.value.size() != 4) return std::nullopt;
    return std::uint32_t{a.value[0]} << 24 | std::uint32_t{a.value[1]} << 16 |
           std::uint32_t{a.value[2]} << 8 | std::uint32_t{a.value[3]};
}

namespace {

bool known_code(std::uint8_t c) {
    switch (static_cast<Code>(c)) {
        case Code::AccessRequest:
        case Code::AccessAccept:
        case Code::AccessReject:
        case Code::AccessChallenge:
            return true;
    }
    return false;
}

}  // namespace

Octets encode_packet(const Packet& packet) {
    for (const auto& a : packet.attributes) {
        if (a.value.size() > kMaxAttributeValue)
            throw WireError(WireErrc::AttributeTooLong,
                            "attribute " + std::to_string(a.type) + " carries " +
                                std::to_string(a.value.size()) + " octets");
        if (a.type == 0) throw WireError(WireErrc::MalformedAttribute, "attribute type 0");
    }
    const std::size_t length = packet.encoded_length();
    if (length > kMaxPacketSize)
        throw WireError(WireErrc::PacketTooLong, std::to_string(length) + " octets");

    Octets out;
    out.reserve(length);
    out.push_back(static_cast<std::uint8_t>(packet.code));
    out.push_back(packet.identifier);
    out.push_back(static_cast<std::uint8_t>(length >> 8));
    out.push_back(static_cast<std::uint8_t>(length));
    out.insert(out.end(), packet.authenticator.begin(), packet.authenticator.end());
    for (const auto& a : packet.attributes) {
        out.push_back(a.type);
        out.push_back(static_cast<std::uint8_t>(a.value.size() + 2));
        out.insert(out.end(), a.value.begin(), a.value.end());
    }
    return out;
}

Packet decode_packet(OctetView bytes) {
    if (bytes.size() < kHeaderSize)
        throw WireError(WireErrc::Truncated, std::to_string(bytes.size()) + " octets, header needs 20");

    const std::size_t declared = std::size_t{bytes[2]} << 8 | bytes[3];
    if (declared < kHeaderSize)
        throw WireError(WireErrc::Truncated, "declared length " + std::to_string(declared));
    if (declared > kMaxPacketSize)
        throw WireError(WireErrc::PacketTooLong, "declared length " + std::to_string(declared));
    if (bytes.size() < declared)
        throw WireError(WireErrc::Truncated, "declared " + std::to_string(declared) + ", received " +
                                                 std::to_string(bytes.size()));
    if (!known_code(bytes[0])) throw WireError(WireErrc::UnknownCode, "code " + std::to_string(bytes[0]));

    Packet p;
    p.code = static_cast<Code>(bytes[0]);
    p.identifier = bytes[1];
    std::copy_n(bytes.begin() + 4, 16, p.authenticator.begin());

    std::size_t pos = kHeaderSize;
    while (pos < declared) {
        if (declared - pos < 2)
            throw WireError(WireErrc::MalformedAttribute, "dangling octet at " + std::to_string(pos));
        const std::uint8_t type = bytes[pos];
        const std::size_t len = bytes[pos + 1];
        if (type == 0) throw WireError(WireErrc::MalformedAttribute, "attribute type 0");
        if (len < 2)
            throw WireError(WireErrc::MalformedAttribute, "attribute length " + std::to_string(len));
        if (pos + len > declared)
            throw WireError(WireErrc::MalformedAttribute,
                            "attribute at " + std::to_string(pos) + " overruns packet");
        p.attributes.push_back(Attribute{type, Octets(bytes.begin() + pos + 2, bytes.begin() + pos + len)});
        pos += len;
    }
    return p;
}

}  // namespace ctxauth::wire
