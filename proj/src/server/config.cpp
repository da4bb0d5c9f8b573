#include "ctxauth/server/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ctxauth::server {

using nlohmann::json;

namespace {

template <typename T>
T value_or(const json& obj, const char* key, T fallback) {
    return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

ContextConfig parse_context(const json& c) {
    ContextConfig cfg;
    cfg.working_days.clear();
    for (const auto& d : c.at("working_days")) {
        auto wd = parse_weekday(d.get<std::string>());
        if (!wd) throw ConfigError("context: unknown weekday '" + d.get<std::string>() + "'");
        cfg.working_days.insert(wd->c_encoding());
    }
    auto start = TimeOfDay::parse(c.at("day_start").get<std::string>());
    auto end = TimeOfDay::parse(c.at("day_end").get<std::string>());
    if (!start || !end) throw ConfigError("context: day_start/day_end must be \"HH:MM\"");
    cfg.day_start = *start;
    cfg.day_end = *end;
    auto tz = UtcOffset::parse(value_or<std::string>(c, "timezone", "+00:00"));
    if (!tz) throw ConfigError("context: timezone must be \"+HH:MM\" or \"-HH:MM\"");
    cfg.timezone = *tz;
    for (const auto& n : c.at("trusted_networks")) {
        auto cidr = Cidr::parse(n.get<std::string>());
        if (!cidr) throw ConfigError("context: bad trusted network '" + n.get<std::string>() + "'");
        cfg.trusted_networks.push_back(*cidr);
    }
    return cfg;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

void ServerConfig::validate() const {
    if (clients.empty()) throw ConfigError("config: at least one client entry required");
    for (const auto& c : clients)
        if (c.shared_secret.empty()) throw ConfigError("config: client " + c.address.to_string() + " has an empty secret");
    context.validate();
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    if (otp.ttl.count() <= 0) throw ConfigError("config: otp.ttl_seconds must be positive");
    if (otp.max_attempts < 1) throw ConfigError("config: otp.max_attempts must be >= 1");
    if (otp.digits < 4 || otp.digits > 9) throw ConfigError("config: otp.digits must be in 4..9");
    if (otp.max_pending < 1) throw ConfigError("config: otp.max_pending must be >= 1");
    if (session.ttl.count() <= 0) throw ConfigError("config: session.ttl_seconds must be positive");
    if (dedup_window.count() < 0) throw ConfigError("config: dedup_window_seconds must be >= 0");
    if (user_store_path.empty()) throw ConfigError("config: user_store_path is required");
    if (delivery_log_path.empty()) throw ConfigError("config: delivery_log_path is required");
}

ServerConfig parse_server_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    ServerConfig cfg;
    try {
        const json doc = json::parse(json_text);

        auto bind = Ipv4::parse(value_or<std::string>(doc, "bind_address", "127.0.0.1"));
        if (!bind) throw ConfigError("config: bad bind_address");
        cfg.bind_address = *bind;
        const int port = value_or<int>(doc, "port", 1812);
        if (port < 0 || port > 65535) throw ConfigError("config: port out of range");
        cfg.port = static_cast<std::uint16_t>(port);
        cfg.workers = value_or<int>(doc, "workers", 4);

        for (const auto& c : doc.at("clients")) {
            auto addr = Cidr::parse(c.at("address").get<std::string>());
            if (!addr) throw ConfigError("config: bad client address '" + c.at("address").get<std::string>() + "'");
            auto secret = from_hex(c.at("secret").get<std::string>());
            if (!secret) throw ConfigError("config: client secret must be hex");
            cfg.clients.push_back(ClientEntry{*addr, std::move(*secret)});
        }

        cfg.context = parse_context(doc.at("context"));

        if (doc.contains("otp")) {
            const auto& o = doc["otp"];
            cfg.otp.ttl = std::chrono::seconds{value_or<long>(o, "ttl_seconds", cfg.otp.ttl.count())};
            cfg.otp.max_attempts = value_or<int>(o, "max_attempts", cfg.otp.max_attempts);
            cfg.otp.digits = value_or<int>(o, "digits", cfg.otp.digits);
            cfg.otp.max_pending = value_or<int>(o, "max_pending", cfg.otp.max_pending);
        }
        if (doc.contains("session"))
            cfg.session.ttl = std::chrono::seconds{value_or<long>(doc["session"], "ttl_seconds", cfg.session.ttl.count())};
        cfg.dedup_window = std::chrono::seconds{value_or<long>(doc, "dedup_window_seconds", cfg.dedup_window.count())};

        cfg.user_store_path = resolve(base_dir, doc.at("user_store_path").get<std::string>());
        cfg.delivery_log_path = resolve(base_dir, doc.at("delivery_log_path").get<std::string>());

        if (doc.contains("test_clock_override") && !doc["test_clock_override"].is_null()) {
            auto t = parse_instant(doc["test_clock_override"].get<std::string>());
            if (!t) throw ConfigError("config: test_clock_override must be YYYY-MM-DDTHH:MM:SSZ");
            cfg.clock_override = *t;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ServerConfig load_server_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_server_config(buf.str(), path.parent_path());
}

}  // namespace ctxauth::server
