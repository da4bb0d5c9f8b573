#include "ctxauth/scenario/scenario.hpp"

#include <charconv>

#include <fmt/format.h>

#include "ctxauth/auth/delivery.hpp"
#include "ctxauth/wire/digest.hpp"
#include "ctxauth/wire/password_cipher.hpp"
#include "udp_client.hpp"

namespace ctxauth::scenario {

using wire::Code;
using wire::Packet;
namespace attr = wire::attr;

const char* short_name(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1_DefaultLowSec: return "S1";
        case ScenarioId::S2_RootHighSec: return "S2";
        case ScenarioId::S3_DefaultHighSec: return "S3";
        case ScenarioId::E1_Escalation: return "E1";
    }
    return "?";
}

std::optional<ScenarioId> parse_scenario_id(std::string_view name) {
    for (auto id : {ScenarioId::S1_DefaultLowSec, ScenarioId::S2_RootHighSec, ScenarioId::S3_DefaultHighSec,
                    ScenarioId::E1_Escalation})
        if (name == short_name(id)) return id;
    return std::nullopt;
}

const char* to_string(Failure f) {
    switch (f) {
        case Failure::None: return "None";
        case Failure::Timeout: return "Timeout";
        case Failure::SequenceMismatch: return "SequenceMismatch";
        case Failure::AuthenticatorMismatch: return "AuthenticatorMismatch";
        case Failure::OtpUnavailable: return "OtpUnavailable";
        case Failure::Protocol: return "Protocol";
    }
    return "?";
}

ScenarioScript fixture_script(ScenarioId id, const std::filesystem::path& delivery_log) {
    ScenarioScript s;
    s.id = id;
    std::string lower = short_name(id);
    lower[0] = static_cast<char>(lower[0] - 'A' + 'a');
    s.username = lower + "-user";
    s.password = s.username + "-pw";
    s.otp_channel = "sms:" + s.username;
    s.otp_source = delivery_log;

    constexpr auto Req = Code::AccessRequest;
    constexpr auto Acc = Code::AccessAccept;
    constexpr auto Chl = Code::AccessChallenge;
    switch (id) {
        case ScenarioId::S1_DefaultLowSec:
            s.expected_sequence = {Req, Acc};
            s.expected_role = "default";
            break;
        case ScenarioId::S2_RootHighSec:
            s.expected_sequence = {Req, Chl, Req, Acc};
            s.expected_role = "root";
            break;
        case ScenarioId::S3_DefaultHighSec:
            s.source = SourceProfile::OffSite;
            s.expected_sequence = {Req, Chl, Req, Acc};
            s.expected_role = "default";
            break;
        case ScenarioId::E1_Escalation:
            s.expected_sequence = {Req, Acc, Req, Chl, Req, Acc};
            s.expected_role = "root";
            break;
    }
    return s;
}

std::string TranscriptEntry::summary() const {
    std::string names;
    for (const auto& a : packet.attributes) {
        if (!names.empty()) names += ',';
        names += wire::attribute_name(a.type);
        if (std::string_view(wire::attribute_name(a.type)) == "Attr") names += std::to_string(a.type);
    }
    return fmt::format("{} {} id={} attrs=[{}]", direction == Direction::Sent ? "→" : "←",
                       wire::code_name(packet.code), packet.identifier, names);
}

std::vector<Code> Transcript::codes() const {
    std::vector<Code> out;
    for (const auto& e : entries) out.push_back(e.packet.code);
    return out;
}

std::optional<std::string> Transcript::final_reply_message() const {
    if (entries.empty()) return std::nullopt;
    const auto* a = entries.back().packet.find(attr::ReplyMessage);
    if (!a) return std::nullopt;
    return ctxauth::to_string(a->value);
}

std::optional<ServerEndpoint> ServerEndpoint::parse(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto addr = Ipv4::parse(text.substr(0, colon));
    const auto port_text = text.substr(colon + 1);
    unsigned port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (!addr || ec != std::errc{} || ptr != port_text.data() + port_text.size() || port == 0 || port > 65535)
        return std::nullopt;
    return ServerEndpoint{*addr, static_cast<std::uint16_t>(port)};
}

namespace {

Instant wall_now() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

struct ScenarioFailed {
    Failure failure;
    std::string detail;
};

class Exchange {
public:
    Exchange(const ServerEndpoint& server, OctetView secret, const ClientOptions& options, Transcript& t)
        : client_(server), secret_(secret.begin(), secret.end()), options_(options), transcript_(t) {
        next_id_ = random_octets(1)[0];
    }

    Packet request(const ScenarioScript& script, std::uint32_t service, std::string_view password,
                   const Octets* state) {
        Packet req;
        req.code = Code::AccessRequest;
        req.identifier = next_id_++;
        const Octets ra = random_octets(16);
        std::copy(ra.begin(), ra.end(), req.authenticator.begin());
        req.add(attr::UserName, script.username);
        req.add(attr::UserPassword, wire::hide_password(to_octets(password), secret_, req.authenticator).octets());
        req.add_u32(attr::ServiceType, service);
        if (script.source == SourceProfile::OffSite) req.add_u32(attr::NasIpAddress, Ipv4::parse(kOffSiteAddress)->value);
        if (state) req.add(attr::State, *state);
        return send(req);
    }

private:
    Packet send(const Packet& req) {
        const Octets raw = wire::encode_packet(req);
        transcript_.entries.push_back({Direction::Sent, wall_now(), req, raw});

        for (int attempt = 0; attempt <= options_.retries; ++attempt) {
            client_.send(raw);
            const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
            while (auto datagram = client_.receive(deadline)) {
                Packet resp;
                try {
                    resp = wire::decode_packet(*datagram);
                } catch (const WireError& e) {
                    throw ScenarioFailed{Failure::Protocol, e.what()};
                }
                if (resp.identifier != req.identifier) continue;  // stale answer to an earlier request
                transcript_.entries.push_back({Direction::Received, wall_now(), resp, *datagram});
                if (!wire::verify_response_authenticator(resp, req.authenticator, secret_))
                    throw ScenarioFailed{Failure::AuthenticatorMismatch,
                                         fmt::format("response id={} fails verification", resp.identifier)};
                return resp;
            }
        }
        throw ScenarioFailed{Failure::Timeout, fmt::format("no response to id={} after {} attempts",
                                                           req.identifier, options_.retries + 1)};
    }

    UdpClient client_;
    Octets secret_;
    ClientOptions options_;
    Transcript& transcript_;
    std::uint8_t next_id_ = 0;
};

// One logical login: request, and answer a challenge with the newest delivered OTP.
void login(Exchange& ex, const ScenarioScript& script, std::uint32_t service) {
    const Packet first = ex.request(script, service, script.password, nullptr);
    if (first.code != Code::AccessChallenge) return;
    const auto* state = first.find(attr::State);
    if (!state) throw ScenarioFailed{Failure::Protocol, "Access-Challenge without State"};
    const auto otp = auth::latest_otp(script.otp_source, script.otp_channel);
    if (!otp) throw ScenarioFailed{Failure::OtpUnavailable, "no OTP for " + script.otp_channel + " in " +
                                                                 script.otp_source.string()};
    ex.request(script, service, *otp, &state->value);
}

std::string codes_text(const std::vector<Code>& codes) {
    std::string s;
    for (auto c : codes) s += (s.empty() ? "" : ", ") + std::string(wire::code_name(c));
    return "[" + s + "]";
}

}  // namespace

Transcript run_scenario(const ScenarioScript& script, const ServerEndpoint& server, OctetView secret,
                        const ClientOptions& options) {
    Transcript t;
    t.id = script.id;
    try {
        Exchange ex(server, secret, options, t);
        switch (script.id) {
            case ScenarioId::S1_DefaultLowSec:
            case ScenarioId::S3_DefaultHighSec:
                login(ex, script, wire::service::LoginUser);
                break;
            case ScenarioId::S2_RootHighSec:
                login(ex, script, wire::service::AdministrativeUser);
                break;
            case ScenarioId::E1_Escalation:
                login(ex, script, wire::service::LoginUser);
                if (t.entries.back().packet.code == Code::AccessAccept)
                    login(ex, script, wire::service::AdministrativeUser);
                break;
        }
    } catch (const ScenarioFailed& f) {
        t.failure = f.failure;
        t.detail = f.detail;
        return t;
    } catch (const std::exception& e) {
        t.failure = Failure::Protocol;
        t.detail = e.what();
        return t;
    }

    const auto codes = t.codes();
    const std::string want_reply = "granted: " + script.expected_role;
    if (codes != script.expected_sequence) {
        t.failure = Failure::SequenceMismatch;
        t.detail = fmt::format("expected {}, observed {}", codes_text(script.expected_sequence), codes_text(codes));
    } else if (t.final_reply_message() != want_reply) {
        t.failure = Failure::SequenceMismatch;
        t.detail = fmt::format("final Reply-Message '{}', expected '{}'", t.final_reply_message().value_or(""),
                               want_reply);
    } else {
        t.pass = true;
    }
    return t;
}

void print_transcript(const Transcript& t, std::ostream& out) {
    out << "== " << short_name(t.id) << '\n';
    for (const auto& e : t.entries) out << e.summary() << '\n';
    if (t.pass)
        out << "PASS " << short_name(t.id) << '\n';
    else
        out << "FAIL " << short_name(t.id) << ' ' << to_string(t.failure) << ": " << t.detail << '\n';
}

int run_all(const ServerEndpoint& server, OctetView secret, const std::filesystem::path& delivery_log,
            std::ostream& out, const ClientOptions& options) {
    bool ok = true;
    for (auto id : {ScenarioId::S1_DefaultLowSec, ScenarioId::S2_RootHighSec, ScenarioId::S3_DefaultHighSec,
                    ScenarioId::E1_Escalation}) {
        const Transcript t = run_scenario(fixture_script(id, delivery_log), server, secret, options);
        print_transcript(t, out);
        ok = ok && t.pass;
    }
    return ok ? 0 : 1;
}

}  // namespace ctxauth::scenario
