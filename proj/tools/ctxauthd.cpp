#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ctxauth/auth/user_store.hpp"
#include "ctxauth/server/config.hpp"
#include "ctxauth/server/service.hpp"

using namespace ctxauth;

int main(int argc, char** argv) {
    CLI::App app{"Context-aware multi-factor authentication server"};
    app.require_subcommand(1);

    std::string config_path;
    auto* serve = app.add_subcommand("serve", "Run the UDP authentication daemon");
    serve->add_option("-c,--config", config_path, "Server configuration (JSON)")->required();

    std::string username, password, channel;
    auto* add_user = app.add_subcommand("hash-user", "Print a user store entry with a fresh salt");
    add_user->add_option("--username", username)->required();
    add_user->add_option("--password", password)->required();
    add_user->add_option("--channel", channel, "OTP delivery channel handle")->required();

    CLI11_PARSE(app, argc, argv);

    if (*serve) {
        server::ServerConfig config;
        try {
            config = server::load_server_config(config_path);
        } catch (const std::exception& e) {
            std::cerr << "ctxauthd: " << e.what() << '\n';
            return 1;
        }
        return server::run_server(config, std::cerr);
    }

    auth::UserStore store({auth::make_user_record(username, password, channel)});
    std::cout << store.to_json() << '\n';
    return 0;
}
