#include "ctxauth/server/handler.hpp"

#include <fmt/format.h>

#include "ctxauth/wire/password_cipher.hpp"

namespace ctxauth::server {

using wire::Code;
using wire::Packet;
namespace attr = wire::attr;

RequestHandler::RequestHandler(const ServerConfig& config, auth::AuthCore& core, EventLog* log)
    : config_(config), core_(core), log_(log) {}

void RequestHandler::log(Instant now, std::string_view event, std::string_view subject, std::string_view detail) {
    if (log_) log_->emit(now, event, subject, detail);
}

const ClientEntry* RequestHandler::client_for(Ipv4 peer) const {
    for (const auto& c : config_.clients)
        if (c.address.contains(peer)) return &c;
    return nullptr;
}

namespace {

std::string peer_name(Endpoint p) { return fmt::format("{}:{}", p.address.to_string(), p.port); }

Packet reply(const Packet& request, Code code) {
    Packet p;
    p.code = code;
    p.identifier = request.identifier;
    return p;
}

Packet reject(const Packet& request) {
    Packet p = reply(request, Code::AccessReject);
    p.add(attr::ReplyMessage, kAccessDenied);
    return p;
}

Packet to_response(const Packet& request, const auth::AuthDecision& d) {
    if (const auto* a = d.accept()) {
        Packet p = reply(request, Code::AccessAccept);
        p.add(attr::ReplyMessage, a->role == auth::Role::Root ? kGrantedRoot : kGrantedDefault);
        return p;
    }
    if (const auto* c = d.challenge()) {
        Packet p = reply(request, Code::AccessChallenge);
        p.add(attr::State, c->state_token);
        p.add(attr::ReplyMessage, c->prompt);
        return p;
    }
    return reject(request);
}

}  // namespace

Packet RequestHandler::process(const Packet& request, const ClientEntry& client, Endpoint peer, Instant now) {
    const std::string who = peer_name(peer);

    std::optional<std::string> username;
    if (const auto* a = request.find(attr::UserName)) username = to_string(a->value);
    const std::string subject = username.value_or(who);

    std::optional<Octets> password;
    if (const auto* a = request.find(attr::UserPassword)) {
        try {
            password = wire::recover_password(OctetView(a->value), client.shared_secret, request.authenticator);
        } catch (const WireError& e) {
            log(now, "reject", subject, fmt::format("undecodable User-Password ({})", to_string(e.code())));
            return reject(request);
        }
    }

    RequestedAction action = RequestedAction::DefaultAccess;
    if (const auto* a = request.find(attr::ServiceType)) {
        const auto st = wire::read_u32(*a);
        if (st == wire::service::AdministrativeUser) {
            action = RequestedAction::RootAccess;
        } else if (st != wire::service::LoginUser) {
            log(now, "reject", subject, "unsupported Service-Type");
            return reject(request);
        }
    }

    Ipv4 source = peer.address;
    if (const auto* a = request.find(attr::NasIpAddress)) {
        const auto nas = wire::read_u32(*a);
        if (!nas) {
            log(now, "reject", subject, "malformed NAS-IP-Address");
            return reject(request);
        }
        source = Ipv4{*nas};
    }

    auth::AuthDecision decision;
    if (const auto* state = request.find(attr::State)) {
        if (!password) {
            log(now, "reject", subject, "MalformedRequest (State without User-Password)");
            return reject(request);
        }
        decision = core_.complete_challenge(state->value, to_string(*password), now,
                                            username ? std::optional<std::string_view>(*username) : std::nullopt);
    } else {
        const ContextSnapshot snapshot = snapshot_context(source, now, config_.context);
        decision = core_.authenticate(auth::Credentials{username, password}, action, snapshot);
    }
    return to_response(request, decision);
}

std::optional<Octets> RequestHandler::handle_datagram(OctetView bytes, Endpoint peer, Instant now) {
    const ClientEntry* client = client_for(peer.address);
    if (!client) {
        log(now, "drop", peer_name(peer), "unknown client");
        return std::nullopt;
    }

    Packet request;
    try {
        request = wire::decode_packet(bytes);
    } catch (const WireError& e) {
        log(now, "drop", peer_name(peer), fmt::format("undecodable ({})", to_string(e.code())));
        return std::nullopt;
    }
    if (request.code != Code::AccessRequest) {
        log(now, "drop", peer_name(peer), fmt::format("unexpected {}", wire::code_name(request.code)));
        return std::nullopt;
    }

    const CacheKey key{peer, request.identifier};
    {
        std::lock_guard lock(cache_mutex_);
        std::erase_if(cache_, [&](const auto& kv) {
            return kv.second.response && now - kv.second.received >= config_.dedup_window;
        });
        auto it = cache_.find(key);
        if (it != cache_.end() && it->second.request_ra == request.authenticator) {
            if (!it->second.response) {
                log(now, "drop", peer_name(peer), fmt::format("duplicate id={} in flight", request.identifier));
                return std::nullopt;
            }
            log(now, "replay", peer_name(peer), fmt::format("id={}", request.identifier));
            return it->second.response;
        }
        cache_[key] = CacheEntry{request.authenticator, now, std::nullopt};
    }

    std::optional<Octets> out;
    try {
        Packet response = process(request, *client, peer, now);
        response.authenticator =
            wire::compute_response_authenticator(response, request.authenticator, client->shared_secret);
        out = wire::encode_packet(response);
    } catch (const std::exception& e) {
        log(now, "error", peer_name(peer), e.what());
    }

    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.request_ra == request.authenticator) {
        if (out)
            it->second.response = out;
        else
            cache_.erase(it);
    }
    return out;
}

}  // namespace ctxauth::server
