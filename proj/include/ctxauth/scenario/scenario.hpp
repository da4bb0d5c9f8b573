#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ctxauth/context/context.hpp"
#include "ctxauth/wire/packet.hpp"

namespace ctxauth::scenario {

enum class ScenarioId { S1_DefaultLowSec, S2_RootHighSec, S3_DefaultHighSec, E1_Escalation };

const char* short_name(ScenarioId id);  // "S1", "S2", "S3", "E1"
std::optional<ScenarioId> parse_scenario_id(std::string_view name);

// Where the request claims to come from. OffSite adds a NAS-IP-Address outside any trusted network.
enum class SourceProfile { OnSite, OffSite };

inline constexpr const char* kOffSiteAddress = "203.0.113.7";


struct ScenarioScript {
    ScenarioId id = ScenarioId::S1_DefaultLowSec;
    std::string username;
    std::string password;
    std::string otp_channel;
    std::filesystem::path otp_source;  // delivery log to read OTPs from
    SourceProfile source = SourceProfile::OnSite;
    std::vector<wire::Code> expected_sequence;
    std::string expected_role;  // "default" or "root"
};

// Fixture user for each scenario: usernames s1-user .. e1-user, password "<username>-pw",
// channel "sms:<username>". Distinct users keep scenarios independent of each other's sessions.
ScenarioScript fixture_script(ScenarioId id, const std::filesystem::path& delivery_log);

enum class Direction { Sent, Received };

struct TranscriptEntry {
    Direction direction = Direction::Sent;
    Instant at;
    wire::Packet packet;
    Octets raw;

    // "→ Access-Request id=5 attrs=[User-Name,User-Password]"
    std::string summary() const;
};

enum class Failure { None, Timeout, SequenceMismatch, AuthenticatorMismatch, OtpUnavailable, Protocol };

const char* to_string(Failure f);

struct Transcript {
    ScenarioId id = ScenarioId::S1_DefaultLowSec;
    std::vector<TranscriptEntry> entries;
    bool pass = false;
    Failure failure = Failure::None;
    std::string detail;

    std::vector<wire::Code> codes() const;
    std::optional<std::string> final_reply_message() const;
};

struct ServerEndpoint {
    Ipv4 address;
    std::uint16_t port = 1812;

    // "a.b.c.d:port"
    static std::optional<ServerEndpoint> parse(std::string_view text);
};

struct ClientOptions {
    std::chrono::milliseconds timeout{2000};
    int retries = 3;  // retransmissions after the first send, same identifier and bytes
};

Transcript run_scenario(const ScenarioScript& script, const ServerEndpoint& server, OctetView secret,
                        const ClientOptions& options = {});

void print_transcript(const Transcript& t, std::ostream& out);

// S1, S2, S3, E1 in order against the fixture users. 0 iff all pass.
int run_all(const ServerEndpoint& server, OctetView secret, const std::filesystem::path& delivery_log,
            std::ostream& out, const ClientOptions& options = {});

}  // namespace ctxauth::scenario
