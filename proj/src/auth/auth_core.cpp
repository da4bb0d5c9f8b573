#include "ctxauth/auth/auth_core.hpp"

#include <fmt/format.h>

namespace ctxauth::auth {

const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::BadCredentials: return "BadCredentials";
        case RejectReason::MalformedRequest: return "MalformedRequest";
        case RejectReason::BadOtp: return "BadOtp";
        case RejectReason::UnknownChallenge: return "UnknownChallenge";
        case RejectReason::SessionExpired: return "SessionExpired";
        case RejectReason::ChallengeLimit: return "ChallengeLimit";
    }
    return "?";
}

AuthCore::AuthCore(const UserStore& users, DeliverySink& delivery, OtpPolicy otp, SessionPolicy session,
                   EventLog* log)
    : users_(users), delivery_(delivery), challenges_(otp), sessions_(session), log_(log) {}

void AuthCore::log(Instant now, std::string_view event, std::string_view subject, std::string_view detail) {
    if (log_) log_->emit(now, event, subject, detail);
}

bool AuthCore::verify_first_factor(std::string_view username, OctetView password) const {
    return auth::verify_first_factor(username, password, users_);
}

OtpChallenge AuthCore::issue_otp_challenge(std::string_view username, RequestedAction action, Instant now) {
    const UserRecord* user = users_.find(username);
    if (!user) throw std::invalid_argument("issue_otp_challenge: unknown user");
    OtpChallenge c = challenges_.issue(username, action, now);
    try {
        delivery_.deliver(DeliveryEntry{now, user->otp_channel, c.otp_value});
    } catch (...) {
        challenges_.discard(c.state_token);
        throw;
    }
    log(now, "otp-issued", username, fmt::format("action={} channel={}", to_string(action), user->otp_channel));
    return c;
}

bool AuthCore::verify_otp(OctetView state_token, std::string_view otp, Instant now) {
    const OtpOutcome r = challenges_.consume(state_token, otp, now);
    if (r.status != OtpCheck::Ok) log(now, "otp-failed", "-", to_string(r.status));
    return r.status == OtpCheck::Ok;
}

AuthDecision AuthCore::challenge_for(std::string_view username, RequestedAction action, Instant now) {
    try {
        OtpChallenge c = issue_otp_challenge(username, action, now);
        return {Challenge{std::move(c.state_token), kOtpPrompt}};
    } catch (const ChallengeFloodLimit& e) {
        log(now, "reject", username, e.what());
        return {Reject{RejectReason::ChallengeLimit}};
    }
}

AuthDecision AuthCore::authenticate(const Credentials& credentials, RequestedAction action,
                                    const ContextSnapshot& snapshot) {
    std::optional<Session> existing;
    if (credentials.username) existing = sessions_.active(*credentials.username, snapshot.timestamp);
    return authenticate(credentials, action, snapshot, existing);
}

AuthDecision AuthCore::authenticate(const Credentials& credentials, RequestedAction action,
                                    const ContextSnapshot& snapshot, const std::optional<Session>& existing) {
    const Instant now = snapshot.timestamp;
    if (!credentials.username || !credentials.password || credentials.username->empty()) {
        log(now, "reject", credentials.username.value_or("-"), "MalformedRequest");
        return {Reject{RejectReason::MalformedRequest}};
    }
    const std::string& username = *credentials.username;

    if (!verify_first_factor(username, *credentials.password)) {
        log(now, "reject", username, "BadCredentials");
        return {Reject{RejectReason::BadCredentials}};
    }

    const Role wanted = role_for(action);
    if (existing && existing->username == username && !existing->expired(now)) {
        if (existing->granted_role >= wanted) {
            log(now, "accept", username, fmt::format("role={} via=session", to_string(existing->granted_role)));
            return {Accept{existing->granted_role, existing->session_id, existing->factors_verified}};
        }
        if (existing->granted_role == Role::Default && action == RequestedAction::RootAccess)
            return escalate(*existing, snapshot, now);
    }

    const ContextVerdict verdict = evaluate_plausibility(snapshot);
    const SecurityLevel level = required_security(verdict, action);
    log(now, "policy", username,
        fmt::format("action={} in_hours={} on_site={} level={}", to_string(action), snapshot.in_working_hours,
                    snapshot.on_site, to_string(level.level)));

    if (level.level == Level::Low) {
        const Session s = sessions_.grant(username, Role::Default, 1, now);
        log(now, "accept", username, "role=default factors=1");
        return {Accept{Role::Default, s.session_id, s.factors_verified}};
    }
    return challenge_for(username, action, now);
}

AuthDecision AuthCore::complete_challenge(OctetView state_token, std::string_view otp, Instant now,
                                          std::optional<std::string_view> username) {
    OtpOutcome r = challenges_.consume(state_token, otp, now, username);
    const std::string subject(username.value_or("-"));
    if (r.status == OtpCheck::Unknown) {
        log(now, "reject", subject, "UnknownChallenge");
        return {Reject{RejectReason::UnknownChallenge}};
    }
    if (r.status != OtpCheck::Ok) {
        log(now, "reject", subject, fmt::format("BadOtp ({})", to_string(r.status)));
        return {Reject{RejectReason::BadOtp}};
    }

    const OtpChallenge& c = *r.challenge;
    const Role role = role_for(c.pending_action);
    const Session s = sessions_.grant(c.username, role, 2, now);
    log(now, "accept", c.username, fmt::format("role={} factors=2 session={}", to_string(role), s.session_id));
    return {Accept{role, s.session_id, s.factors_verified}};
}

AuthDecision AuthCore::escalate(const Session& session, const ContextSnapshot& snapshot, Instant now) {
    (void)snapshot;
    if (session.expired(now)) {
        log(now, "reject", session.username, "SessionExpired");
        return {Reject{RejectReason::SessionExpired}};
    }
    if (session.granted_role == Role::Root || session.factors_verified >= 2) {
        const Session s = sessions_.grant(session.username, Role::Root, 2, now);
        log(now, "accept", session.username, "role=root via=escalation factors=2");
        return {Accept{Role::Root, s.session_id, s.factors_verified}};
    }
    log(now, "escalate", session.username, "second factor required");
    return challenge_for(session.username, RequestedAction::RootAccess, now);
}

}  // namespace ctxauth::auth
