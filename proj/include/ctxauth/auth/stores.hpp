#pragma once

#include <chrono>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ctxauth/context/context.hpp"
#include "ctxauth/policy/policy.hpp"
#include "ctxauth/wire/octets.hpp"

namespace ctxauth::auth {

enum class Role { None = 0, Default = 1, Root = 2 };

const char* to_string(Role r);
Role role_for(RequestedAction a);

struct OtpPolicy {
    std::chrono::seconds ttl{120};
    int max_attempts = 3;
    int digits = 6;
    int max_pending = 3;  // concurrent pending challenges per user
};

struct SessionPolicy {
    std::chrono::seconds ttl{8 * 3600};
};

inline constexpr std::size_t kStateTokenLength = 16;

struct OtpChallenge {
    Octets state_token;
    std::string otp_value;
    Instant issued_at;
    Instant expires_at;
    int attempts_remaining = 0;
    RequestedAction pending_action = RequestedAction::DefaultAccess;
    std::string username;
};

class ChallengeFloodLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OtpCheck { Ok, Unknown, Expired, Exhausted, Mismatch };

const char* to_string(OtpCheck c);

struct OtpOutcome {
    OtpCheck status = OtpCheck::Unknown;
    std::optional<OtpChallenge> challenge;  // set on Ok
};

// Pending challenges keyed by state token. Every operation is atomic per store.
class ChallengeStore {
public:
    explicit ChallengeStore(OtpPolicy policy = {}) : policy_(policy) {}

    // Throws ChallengeFloodLimit when the user already has max_pending live challenges.
    OtpChallenge issue(std::string_view username, RequestedAction action, Instant now);

    // Single-use: a matching, live challenge is removed on success. A mismatch burns one
    // attempt; the challenge is dropped once attempts or time run out. When expected_user is
    // given, a token owned by anyone else reads as Unknown and costs nothing.
    OtpOutcome consume(OctetView state_token, std::string_view otp, Instant now,
                       std::optional<std::string_view> expected_user = std::nullopt);

    void discard(OctetView state_token);

    std::size_t pending_for(std::string_view username, Instant now) const;
    std::size_t size() const;

    const OtpPolicy& policy() const noexcept { return policy_; }

private:
    std::string generate_otp() const;

    OtpPolicy policy_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, OtpChallenge> pending_;  // key: hex(state_token)
};

struct Session {
    std::string session_id;
    std::string username;
    Role granted_role = Role::None;
    int factors_verified = 0;
    Instant established_at;
    Instant expires_at;

    bool expired(Instant now) const { return now >= expires_at; }
};

// One session per user. Expired sessions behave as absent.
class SessionStore {
public:
    explicit SessionStore(SessionPolicy policy = {}) : policy_(policy) {}

    std::optional<Session> active(std::string_view username, Instant now) const;

    // Raises the live session of username to at least (role, factors), keeping its id, or opens
    // a new one when none is live.
    Session grant(std::string_view username, Role role, int factors, Instant now);

    std::size_t size() const;

private:
    SessionPolicy policy_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, Session> sessions_;
};

}  // namespace ctxauth::auth
