#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ctxauth/scenario/scenario.hpp"

using namespace ctxauth;

int main(int argc, char** argv) {
    CLI::App app{"Replays the authentication scenarios against a running server"};
    app.require_subcommand(1);

    std::string which, server_text, secret_hex, delivery_log;
    int timeout_ms = 2000;
    auto* run = app.add_subcommand("run", "Run one scenario (S1, S2, S3, E1) or all");
    run->add_option("scenario", which, "S1|S2|S3|E1|all")->required()->check(CLI::IsMember({"S1", "S2", "S3", "E1", "all"}));
    run->add_option("--server", server_text, "Server address, a.b.c.d:port")->required();
    run->add_option("--secret", secret_hex, "Shared secret, hex")->required();
    run->add_option("--delivery-log", delivery_log, "OTP delivery log written by the server")->required();
    run->add_option("--timeout-ms", timeout_ms, "Per-attempt response wait")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    const auto server = scenario::ServerEndpoint::parse(server_text);
    if (!server) {
        std::cerr << "scenario: bad --server '" << server_text << "'\n";
        return 2;
    }
    const auto secret = from_hex(secret_hex);
    if (!secret || secret->empty()) {
        std::cerr << "scenario: --secret must be non-empty hex\n";
        return 2;
    }

    scenario::ClientOptions options;
    options.timeout = std::chrono::milliseconds{timeout_ms};

    if (which == "all") return scenario::run_all(*server, *secret, delivery_log, std::cout, options);

    const auto id = scenario::parse_scenario_id(which);
    const auto t = scenario::run_scenario(scenario::fixture_script(*id, delivery_log), *server, *secret, options);
    scenario::print_transcript(t, std::cout);
    return t.pass ? 0 : 1;
}
