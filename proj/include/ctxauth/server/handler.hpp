#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>

#include "ctxauth/auth/auth_core.hpp"
#include "ctxauth/server/config.hpp"
#include "ctxauth/wire/packet.hpp"

namespace ctxauth::server {

struct Endpoint {
    Ipv4 address;
    std::uint16_t port = 0;

    auto operator<=>(const Endpoint&) const = default;
};

inline constexpr std::string_view kGrantedDefault = "granted: default";
inline constexpr std::string_view kGrantedRoot = "granted: root";
inline constexpr std::string_view kAccessDenied = "access denied";

// Turns one request datagram into at most one response datagram. Safe to call concurrently.
class RequestHandler {
public:
    RequestHandler(const ServerConfig& config, auth::AuthCore& core, EventLog* log = nullptr);

    // nullopt means silent drop: unknown client, undecodable or non-request packet, or a
    // retransmission whose original is still in flight. A retransmission of an answered
    // request (same peer, identifier and request authenticator) replays the cached response.
    std::optional<Octets> handle_datagram(OctetView bytes, Endpoint peer, Instant now);

    const ClientEntry* client_for(Ipv4 peer) const;

private:
    struct CacheKey {
        Endpoint peer;
        std::uint8_t identifier;
        auto operator<=>(const CacheKey&) const = default;
    };
    struct CacheEntry {
        wire::Authenticator request_ra{};
        Instant received;
        std::optional<Octets> response;  // empty while in flight
    };

    wire::Packet process(const wire::Packet& request, const ClientEntry& client, Endpoint peer, Instant now);
    void log(Instant now, std::string_view event, std::string_view subject, std::string_view detail);

    const ServerConfig& config_;
    auth::AuthCore& core_;
    EventLog* log_;

    std::mutex cache_mutex_;
    std::map<CacheKey, CacheEntry> cache_;
};

}  // namespace ctxauth::server
