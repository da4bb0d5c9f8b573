#pragma once

#include <optional>
#include <string>
#include <variant>

#include "ctxauth/auth/delivery.hpp"
#include "ctxauth/auth/event_log.hpp"
#include "ctxauth/auth/stores.hpp"
#include "ctxauth/auth/user_store.hpp"

namespace ctxauth::auth {

enum class RejectReason {
    BadCredentials,
    MalformedRequest,
    BadOtp,
    UnknownChallenge,
    SessionExpired,
    ChallengeLimit,
};

const char* to_string(RejectReason r);

struct Accept {
    Role role = Role::None;
    std::string session_id;
    int factors_verified = 0;
};

struct Challenge {
    Octets state_token;
    std::string prompt;
};

struct Reject {
    RejectReason reason = RejectReason::BadCredentials;
};

struct AuthDecision {
    std::variant<Accept, Challenge, Reject> outcome;

    const Accept* accept() const { return std::get_if<Accept>(&outcome); }
    const Challenge* challenge() const { return std::get_if<Challenge>(&outcome); }
    const Reject* reject() const { return std::get_if<Reject>(&outcome); }
};

struct Credentials {
    std::optional<std::string> username;
    std::optional<Octets> password;
};

inline constexpr const char* kOtpPrompt = "Enter the one-time password sent to your device";

// The factor flow: first factor, context-driven policy, OTP second factor, sessions and
// escalation. Shared stores are internally synchronized; the object is safe to share.
class AuthCore {
public:
    AuthCore(const UserStore& users, DeliverySink& delivery, OtpPolicy otp = {}, SessionPolicy session = {},
             EventLog* log = nullptr);

    bool verify_first_factor(std::string_view username, OctetView password) const;

    // Registers a challenge for username and pushes its OTP to the user's delivery channel.
    OtpChallenge issue_otp_challenge(std::string_view username, RequestedAction action, Instant now);

    bool verify_otp(OctetView state_token, std::string_view otp, Instant now);

    // Uses the live session of the user, if any, as the existing session.
    AuthDecision authenticate(const Credentials& credentials, RequestedAction action,
                              const ContextSnapshot& snapshot);
    AuthDecision authenticate(const Credentials& credentials, RequestedAction action,
                              const ContextSnapshot& snapshot, const std::optional<Session>& existing);

    AuthDecision complete_challenge(OctetView state_token, std::string_view otp, Instant now,
                                    std::optional<std::string_view> username = std::nullopt);

    AuthDecision escalate(const Session& session, const ContextSnapshot& snapshot, Instant now);

    SessionStore& sessions() noexcept { return sessions_; }
    const SessionStore& sessions() const noexcept { return sessions_; }
    ChallengeStore& challenges() noexcept { return challenges_; }

private:
    AuthDecision challenge_for(std::string_view username, RequestedAction action, Instant now);
    void log(Instant now, std::string_view event, std::string_view subject, std::string_view detail);

    const UserStore& users_;
    DeliverySink& delivery_;
    ChallengeStore challenges_;
    SessionStore sessions_;
    EventLog* log_;
};

}  // namespace ctxauth::auth
