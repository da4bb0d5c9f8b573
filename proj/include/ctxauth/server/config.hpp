#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "ctxauth/auth/stores.hpp"
#include "ctxauth/context/context.hpp"
#include "ctxauth/wire/octets.hpp"

namespace ctxauth::server {

struct ClientEntry {
    Cidr address;
    Octets shared_secret;  // never logged
};

struct ServerConfig {
    Ipv4 bind_address{0x7f000001};
    std::uint16_t port = 1812;
    int workers = 4;
    std::vector<ClientEntry> clients;
    ContextConfig context;
    auth::OtpPolicy otp;
    auth::SessionPolicy session;
    std::chrono::seconds dedup_window{30};
    std::filesystem::path user_store_path;
    std::filesystem::path delivery_log_path;
    // Test-only: the server clock starts at this instant and advances in real time.
    std::optional<Instant> clock_override;

    // Throws ConfigError.
    void validate() const;
};

// Relative paths in the document resolve against base_dir.
ServerConfig parse_server_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ServerConfig load_server_config(const std::filesystem::path& path);

}  // namespace ctxauth::server
