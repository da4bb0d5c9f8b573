// Acceptance gate: one PASS/FAIL line per criterion, each under its wall-clock limit.

#include <openssl/evp.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ctxauth/policy/policy.hpp"
#include "ctxauth/scenario/scenario.hpp"
#include "oracle_vectors.hpp"
#include "test_support.hpp"
#include "udp_probe.hpp"

using namespace ctxauth;
using namespace std::chrono_literals;
using wire::Code;

namespace {

struct CriterionFailed {
    std::string why;
};

void require(bool cond, const std::string& why) {
    if (!cond) throw CriterionFailed{why};
}

// (request, response) datagram pairs observed by the harness, checked by criterion 7.
std::vector<std::pair<Octets, Octets>> g_exchanges;

void record_transcript(const scenario::Transcript& t) {
    std::map<std::uint8_t, Octets> sent;
    for (const auto& e : t.entries) {
        if (e.direction == scenario::Direction::Sent)
            sent[e.packet.identifier] = e.raw;
        else if (sent.count(e.packet.identifier))
            g_exchanges.emplace_back(sent[e.packet.identifier], e.raw);
    }
}

// Response authenticator recomputed straight from the datagrams with a one-shot MD5:
// MD5(response with request RA in the authenticator slot | secret).
bool response_verifies(const Octets& request, const Octets& response, std::string_view secret) {
    if (request.size() < 20 || response.size() < 20) return false;
    const std::size_t len = std::size_t{response[2]} << 8 | response[3];
    if (len < 20 || len > response.size()) return false;
    Octets image(response.begin(), response.begin() + static_cast<std::ptrdiff_t>(len));
    std::copy(request.begin() + 4, request.begin() + 20, image.begin() + 4);
    image.insert(image.end(), secret.begin(), secret.end());
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    if (EVP_Digest(image.data(), image.size(), digest, &n, EVP_md5(), nullptr) != 1 || n != 16) return false;
    return std::equal(digest, digest + 16, response.begin() + 4);
}

// Sends one request and waits for its answer; records the pair.
std::optional<wire::Packet> exchange(testing::UdpProbe& probe, std::uint16_t port, const wire::Packet& req,
                                     std::chrono::milliseconds wait = 1000ms) {
    const Octets raw = wire::encode_packet(req);
    probe.send_to(port, raw);
    while (auto bytes = probe.receive(wait)) {
        const wire::Packet resp = wire::decode_packet(*bytes);
        if (resp.identifier != req.identifier) continue;
        g_exchanges.emplace_back(raw, *bytes);
        return resp;
    }
    return std::nullopt;
}

wire::Packet request(std::uint8_t id, std::string_view user, std::string_view password, std::uint32_t service,
                     bool off_site = false, const Octets* state = nullptr,
                     std::string_view secret = testing::kSecret) {
    const Octets ra = random_octets(16);
    wire::Authenticator auth{};
    std::copy(ra.begin(), ra.end(), auth.begin());
    wire::Packet p = testing::make_request(id, auth, user, password, service, secret);
    if (off_site) p.add_u32(wire::attr::NasIpAddress, Ipv4::parse(scenario::kOffSiteAddress)->value);
    if (state) p.add(wire::attr::State, *state);
    return p;
}

// ── criteria ────────────────────────────────────────────────────────────────

void policy_table() {
    const ContextVerdict plausible{true, {}};
    const ContextVerdict implausible{false, {ContextReason::OutsideWorkingHours}};
    require(required_security(plausible, RequestedAction::DefaultAccess).level == Level::Low, "plausible+default");
    require(required_security(plausible, RequestedAction::RootAccess).level == Level::High, "plausible+root");
    require(required_security(implausible, RequestedAction::DefaultAccess).level == Level::High, "implausible+default");
    require(required_security(implausible, RequestedAction::RootAccess).level == Level::High, "implausible+root");
    // Every snapshot combination through the real evaluation path.
    for (bool h : {false, true})
        for (bool s : {false, true})
            for (auto a : {RequestedAction::DefaultAccess, RequestedAction::RootAccess}) {
                const auto level = required_security(evaluate_plausibility({testing::tuesday_at(10), Ipv4{}, h, s}), a);
                const bool low = h && s && a == RequestedAction::DefaultAccess;
                require((level.level == Level::Low) == low, "snapshot-driven cell mismatch");
            }
}

void scenario_fidelity(testing::RunningServer& server) {
    const scenario::ServerEndpoint ep{Ipv4{0x7f000001}, server.port()};
    const Octets secret = to_octets(testing::kSecret);
    const scenario::ClientOptions opts{1000ms, 2};
    struct Want {
        scenario::ScenarioId id;
        std::size_t messages;
        const char* reply;
    };
    for (const Want& w : {Want{scenario::ScenarioId::S1_DefaultLowSec, 2, "granted: default"},
                          Want{scenario::ScenarioId::S2_RootHighSec, 4, "granted: root"},
                          Want{scenario::ScenarioId::S3_DefaultHighSec, 4, "granted: default"}}) {
        const auto t = scenario::run_scenario(scenario::fixture_script(w.id, server.config.delivery_log_path), ep,
                                              secret, opts);
        record_transcript(t);
        const std::string name = scenario::short_name(w.id);
        require(t.pass, name + ": " + t.detail);
        require(t.entries.size() == w.messages, name + ": wrong message count");
        const auto codes = t.codes();
        if (w.messages == 4)
            require(codes == std::vector<Code>{Code::AccessRequest, Code::AccessChallenge, Code::AccessRequest,
                                               Code::AccessAccept},
                    name + ": sequence");
        else
            require(codes == std::vector<Code>{Code::AccessRequest, Code::AccessAccept}, name + ": sequence");
        require(t.final_reply_message() == w.reply, name + ": final role");
    }
}

void cipher_correctness() {
    std::mt19937 rng(20261018);
    const std::string kName = "cipher";
    for (int i = 0; i < 1280; ++i) {
        Octets p(static_cast<std::size_t>(1 + i % 128));  // every length 1..128, ten times over
        for (auto& b : p) b = static_cast<std::uint8_t>(1 + rng() % 255);
        Octets s(1 + rng() % 64);
        for (auto& b : s) b = static_cast<std::uint8_t>(rng());
        wire::Authenticator ra{};
        for (auto& b : ra) b = static_cast<std::uint8_t>(rng());
        require(wire::recover_password(wire::hide_password(p, s, ra), s, ra) == p,
                "round trip failed at length " + std::to_string(p.size()));
    }
    require(oracle::kHideVectors.size() >= 11, "need hello + 10 oracle vectors");
    std::size_t multi_block = 0;
    for (const auto& v : oracle::kHideVectors) {
        wire::Authenticator ra{};
        std::copy(v.ra.begin(), v.ra.end(), ra.begin());
        require(wire::hide_password(v.plaintext, v.secret, ra).octets() == v.hidden,
                "oracle mismatch for " + std::to_string(v.plaintext.size()) + "-octet plaintext");
        if (v.hidden.size() > 16) ++multi_block;
    }
    require(oracle::kHideVectors.front().plaintext == to_octets("hello"), "first vector must be hello");
    require(multi_block >= 5, "too few multi-block oracle vectors");
}

void escalation(testing::RunningServer& server) {
    const scenario::ServerEndpoint ep{Ipv4{0x7f000001}, server.port()};
    const Octets secret = to_octets(testing::kSecret);
    const auto& log = server.config.delivery_log_path;

    // Default session with one factor for e1-user.
    auto login = scenario::fixture_script(scenario::ScenarioId::S1_DefaultLowSec, log);
    login.username = "e1-user";
    login.password = "e1-user-pw";
    login.otp_channel = "sms:e1-user";
    auto t1 = scenario::run_scenario(login, ep, secret);
    record_transcript(t1);
    require(t1.pass, "initial default login: " + t1.detail);
    const auto before = server.service->core().sessions().active("e1-user", server.clock.now());
    require(before && before->granted_role == auth::Role::Default && before->factors_verified == 1,
            "expected a one-factor default session");

    const auto count_otps = [&] {
        std::ifstream in(log);
        int n = 0;
        for (std::string line; std::getline(in, line);)
            if (auto e = auth::parse_delivery_line(line); e && e->channel == "sms:e1-user") ++n;
        return n;
    };
    const int otps_before = count_otps();

    auto raise = login;
    raise.id = scenario::ScenarioId::S2_RootHighSec;
    raise.expected_sequence = {Code::AccessRequest, Code::AccessChallenge, Code::AccessRequest, Code::AccessAccept};
    raise.expected_role = "root";
    auto t2 = scenario::run_scenario(raise, ep, secret);
    record_transcript(t2);
    require(t2.pass, "escalation: " + t2.detail);
    require(count_otps() - otps_before == 1, "expected exactly one OTP challenge");

    const auto after = server.service->core().sessions().active("e1-user", server.clock.now());
    require(after.has_value(), "session vanished");
    require(after->session_id == before->session_id, "escalation opened a new session");
    require(after->granted_role == auth::Role::Root, "session not raised to root");
    require(after->factors_verified == 2, "session does not hold two factors");
}

void security_invariants(testing::RunningServer& server) {
    testing::UdpProbe probe;
    const auto port = server.port();
    auto& core = server.service->core();
    std::uint8_t id = 0;
    const auto otp_of = [&](const std::string& user) {
        return *auth::latest_otp(server.config.delivery_log_path, "sms:" + user);
    };

    // (a) every policy cell, end to end, fresh user per cell.
    const struct {
        const char* user;
        bool off_site;
        std::uint32_t service;
        int needed;
    } cells[] = {{"cell-pd", false, wire::service::LoginUser, 1},
                 {"cell-pr", false, wire::service::AdministrativeUser, 2},
                 {"cell-id", true, wire::service::LoginUser, 2},
                 {"cell-ir", true, wire::service::AdministrativeUser, 2}};
    for (const auto& c : cells) {
        const std::string user = c.user;
        auto r = exchange(probe, port, request(id++, user, user + "-pw", c.service, c.off_site));
        require(r.has_value(), user + ": no response");
        if (r->code == Code::AccessChallenge) {
            const Octets state = r->find(wire::attr::State)->value;
            r = exchange(probe, port, request(id++, user, otp_of(user), c.service, c.off_site, &state));
            require(r.has_value(), user + ": no response to OTP");
        } else {
            require(c.needed == 1, user + ": two-factor cell accepted without a challenge");
        }
        require(r->code == Code::AccessAccept, user + ": not accepted");
        const auto s = core.sessions().active(user, server.clock.now());
        require(s && s->factors_verified >= c.needed, user + ": factor floor violated");
        require(s->granted_role != auth::Role::Root || s->factors_verified == 2, user + ": root with < 2 factors");
    }

    // (b) a consumed state token is dead, 100 times over.
    auto ch = exchange(probe, port, request(id++, "replay", "replay-pw", wire::service::AdministrativeUser));
    require(ch && ch->code == Code::AccessChallenge, "replay: no challenge");
    const Octets token = ch->find(wire::attr::State)->value;
    const std::string otp = otp_of("replay");
    auto ok = exchange(probe, port, request(id++, "replay", otp, wire::service::AdministrativeUser, false, &token));
    require(ok && ok->code == Code::AccessAccept, "replay: first use not accepted");
    for (int i = 0; i < 100; ++i) {
        auto r = exchange(probe, port, request(id++, "replay", otp, wire::service::AdministrativeUser, false, &token));
        require(r && r->code == Code::AccessReject, "replay #" + std::to_string(i) + " not rejected");
    }

    // (c) correct OTP after the TTL has elapsed.
    ch = exchange(probe, port, request(id++, "expiry", "expiry-pw", wire::service::AdministrativeUser));
    require(ch && ch->code == Code::AccessChallenge, "expiry: no challenge");
    const Octets exp_token = ch->find(wire::attr::State)->value;
    server.clock.advance(server.config.otp.ttl);
    auto late = exchange(probe, port,
                         request(id++, "expiry", otp_of("expiry"), wire::service::AdministrativeUser, false, &exp_token));
    require(late && late->code == Code::AccessReject, "expired OTP was not rejected");

    // (d) wrong shared secret, against a user that already holds a session.
    for (int i = 0; i < 100; ++i) {
        const auto req = request(id++, "cell-pd", "cell-pd-pw", wire::service::LoginUser, false, nullptr,
                                 "wrong-secret-" + std::to_string(i));
        auto r = exchange(probe, port, req, 300ms);
        require(!r || r->code != Code::AccessAccept, "wrong secret accepted");
    }
}

void codec_robustness() {
    std::mt19937 rng(4096);
    int decoded = 0;
    for (int i = 0; i < 10000; ++i) {
        Octets in(rng() % 4097);
        for (auto& b : in) b = static_cast<std::uint8_t>(rng());
        if (i % 2 == 0 && in.size() >= 20) {  // half with a coherent header so attribute parsing is reached
            in[0] = std::array<std::uint8_t, 4>{1, 2, 3, 11}[rng() % 4];
            in[2] = static_cast<std::uint8_t>(in.size() >> 8);
            in[3] = static_cast<std::uint8_t>(in.size());
        }
        try {
            wire::decode_packet(in);
            ++decoded;
        } catch (const WireError&) {
        }
    }
    const Code codes[] = {Code::AccessRequest, Code::AccessAccept, Code::AccessReject, Code::AccessChallenge};
    for (int i = 0; i < 1000; ++i) {
        wire::Packet p;
        p.code = codes[rng() % 4];
        p.identifier = static_cast<std::uint8_t>(rng());
        for (auto& b : p.authenticator) b = static_cast<std::uint8_t>(rng());
        std::size_t room = wire::kMaxPacketSize - wire::kHeaderSize;
        for (int n = static_cast<int>(rng() % 40); n > 0; --n) {
            const std::size_t len = rng() % 254;
            if (len + 2 > room) break;
            room -= len + 2;
            Octets v(len);
            for (auto& b : v) b = static_cast<std::uint8_t>(rng());
            p.add(static_cast<std::uint8_t>(1 + rng() % 255), std::move(v));
        }
        require(wire::decode_packet(wire::encode_packet(p)) == p, "round trip mismatch at packet " + std::to_string(i));
    }
    (void)decoded;
}

void response_integrity() {
    require(g_exchanges.size() >= 100, "too few responses observed (" + std::to_string(g_exchanges.size()) + ")");
    for (const auto& [req, resp] : g_exchanges) {
        require(req[1] == resp[1], "response identifier differs from request");
        require(response_verifies(req, resp, testing::kSecret), "response authenticator does not recompute");
    }
}

struct Criterion {
    const char* name;
    std::chrono::milliseconds limit;
    std::function<void()> run;
};

}  // namespace

int main() {
    std::vector<auth::UserRecord> records;
    for (const char* u : {"s1-user", "s2-user", "s3-user", "e1-user", "cell-pd", "cell-pr", "cell-id", "cell-ir",
                          "replay", "expiry"}) {
        const std::string n = u;
        records.push_back(auth::make_user_record(n, n + "-pw", "sms:" + n));
    }
    testing::RunningServer server;
    server.service->stop();
    testing::write_file(server.config.user_store_path, auth::UserStore(records).to_json());
    server.service = std::make_unique<server::Service>(
        server.config, server::ServiceOptions{server.clock.fn(), nullptr, nullptr});
    server.service->start();

    const std::vector<Criterion> criteria = {
        {"AC1 policy table fidelity (4 cells)", 1000ms, policy_table},
        {"AC2 scenario fidelity S1=2, S2=4, S3=4 messages", 5000ms, [&] { scenario_fidelity(server); }},
        {"AC3 password hiding round trip + oracle vectors", 5000ms, cipher_correctness},
        {"AC4 escalation updates the same session to root", 2000ms, [&] { escalation(server); }},
        {"AC5 security invariants (floor, replay, expiry, wrong secret)", 10000ms,
         [&] { security_invariants(server); }},
        {"AC6 codec robustness (10000 noise, 1000 round trips)", 10000ms, codec_robustness},
        {"AC7 response authenticators recompute independently", 1000ms, response_integrity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string why;
        try {
            c.run();
        } catch (const CriterionFailed& f) {
            why = f.why;
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        const auto took = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        if (why.empty() && took > c.limit) why = "exceeded time limit";
        const bool pass = why.empty();
        if (!pass) ++failures;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.name << "  (" << took.count() << " ms, limit "
                  << c.limit.count() << " ms)" << (pass ? "" : "  -- " + why) << '\n';
    }
    server.service->stop();
    std::cout << (failures == 0 ? "acceptance: all criteria passed" : "acceptance: FAILED") << '\n';
    return failures == 0 ? 0 : 1;
}
