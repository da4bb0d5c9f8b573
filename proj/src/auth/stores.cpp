#include "ctxauth/auth/stores.hpp"

#include <algorithm>

#include "ctxauth/wire/digest.hpp"

namespace ctxauth::auth {

const char* to_string(Role r) {
    switch (r) {
        case Role::None: return "none";
        case Role::Default: return "default";
        case Role::Root: return "root";
    }
    return "?";
}

Role role_for(RequestedAction a) { return a == RequestedAction::RootAccess ? Role::Root : Role::Default; }

const char* to_string(OtpCheck c) {
    switch (c) {
        case OtpCheck::Ok: return "ok";
        case OtpCheck::Unknown: return "unknown-token";
        case OtpCheck::Expired: return "expired";
        case OtpCheck::Exhausted: return "attempts-exhausted";
        case OtpCheck::Mismatch: return "mismatch";
    }
    return "?";
}

std::string ChallengeStore::generate_otp() const {
    std::uint64_t bound = 1;
    for (int i = 0; i < policy_.digits; ++i) bound *= 10;
    // Rejection sampling keeps the draw uniform over [0, bound).
    const std::uint64_t limit = (std::uint64_t{1} << 32) / bound * bound;
    std::uint64_t draw = 0;
    do {
        const Octets r = random_octets(4);
        draw = std::uint64_t{r[0]} << 24 | std::uint64_t{r[1]} << 16 | std::uint64_t{r[2]} << 8 | r[3];
    } while (draw >= limit);
    std::string digits = std::to_string(draw % bound);
    digits.insert(0, static_cast<std::size_t>(policy_.digits) - digits.size(), '0');
    return digits;
}

OtpChallenge ChallengeStore::issue(std::string_view username, RequestedAction action, Instant now) {
    OtpChallenge c;
    c.state_token = random_octets(kStateTokenLength);
    c.otp_value = generate_otp();
    c.issued_at = now;
    c.expires_at = now + policy_.ttl;
    c.attempts_remaining = policy_.max_attempts;
    c.pending_action = action;
    c.username = std::string(username);

    std::lock_guard lock(mutex_);
    std::erase_if(pending_, [now](const auto& kv) { return now >= kv.second.expires_at; });
    const auto live = std::count_if(pending_.begin(), pending_.end(),
                                    [&](const auto& kv) { return kv.second.username == username; });
    if (live >= policy_.max_pending)
        throw ChallengeFloodLimit("user already has " + std::to_string(live) + " pending challenges");
    pending_.emplace(to_hex(c.state_token), c);
    return c;
}

OtpOutcome ChallengeStore::consume(OctetView state_token, std::string_view otp, Instant now,
                                   std::optional<std::string_view> expected_user) {
    std::lock_guard lock(mutex_);
    auto it = pending_.find(to_hex(state_token));
    if (it == pending_.end()) return {OtpCheck::Unknown, std::nullopt};
    OtpChallenge& c = it->second;
    if (expected_user && *expected_user != c.username) return {OtpCheck::Unknown, std::nullopt};
    if (now >= c.expires_at) {
        pending_.erase(it);
        return {OtpCheck::Expired, std::nullopt};
    }
    if (c.attempts_remaining <= 0) {
        pending_.erase(it);
        return {OtpCheck::Exhausted, std::nullopt};
    }
    if (!constant_time_equal(to_octets(otp), to_octets(c.otp_value))) {
        if (--c.attempts_remaining <= 0) pending_.erase(it);
        return {OtpCheck::Mismatch, std::nullopt};
    }
    OtpOutcome out{OtpCheck::Ok, std::move(c)};
    pending_.erase(it);
    return out;
}

void ChallengeStore::discard(OctetView state_token) {
    std::lock_guard lock(mutex_);
    pending_.erase(to_hex(state_token));
}

std::size_t ChallengeStore::pending_for(std::string_view username, Instant now) const {
    std::lock_guard lock(mutex_);
    return static_cast<std::size_t>(std::count_if(pending_.begin(), pending_.end(), [&](const auto& kv) {
        return kv.second.username == username && now < kv.second.expires_at;
    }));
}

std::size_t ChallengeStore::size() const {
    std::lock_guard lock(mutex_);
    return pending_.size();
}

std::optional<Session> SessionStore::active(std::string_view username, Instant now) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(std::string(username));
    if (it == sessions_.end() || it->second.expired(now)) return std::nullopt;
    return it->second;
}

Session SessionStore::grant(std::string_view username, Role role, int factors, Instant now) {
    std::lock_guard lock(mutex_);
    auto [it, inserted] = sessions_.try_emplace(std::string(username));
    Session& s = it->second;
    if (inserted || s.expired(now)) {
        s = Session{to_hex(random_octets(16)), std::string(username), role, factors, now, now + policy_.ttl};
    } else {
        s.granted_role = std::max(s.granted_role, role);
        s.factors_verified = std::max(s.factors_verified, factors);
    }
    return s;
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

}  // namespace ctxauth::auth
