#include "ctxauth/auth/user_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctxauth/context/context.hpp"

namespace ctxauth::auth {

using nlohmann::json;

Sha256Digest password_digest(OctetView salt, OctetView password) { return sha256({salt, password}); }

UserRecord make_user_record(std::string username, std::string_view password, std::string otp_channel) {
    UserRecord r;
    r.username = std::move(username);
    r.password_salt = random_octets(kMinSaltLength);
    r.password_digest = password_digest(r.password_salt, to_octets(password));
    r.otp_channel = std::move(otp_channel);
    return r;
}

UserStore::UserStore(std::vector<UserRecord> records) {
    for (auto& r : records) {
        if (r.username.empty()) throw ConfigError("user store: empty username");
        if (r.password_salt.size() < kMinSaltLength)
            throw ConfigError("user store: salt of '" + r.username + "' shorter than 16 octets");
        if (r.otp_channel.empty()) throw ConfigError("user store: '" + r.username + "' has no otp_channel");
        std::string key = r.username;
        if (!users_.emplace(std::move(key), std::move(r)).second)
            throw ConfigError("user store: duplicate username");
    }
}

UserStore UserStore::parse(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("user store: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("users") || !doc["users"].is_array())
        throw ConfigError("user store: expected an object with a \"users\" array");

    std::vector<UserRecord> records;
    for (const auto& u : doc["users"]) {
        try {
            UserRecord r;
            r.username = u.at("username").get<std::string>();
            auto salt = from_hex(u.at("salt").get<std::string>());
            auto digest = from_hex(u.at("digest").get<std::string>());
            if (!salt) throw ConfigError("user store: bad salt hex for '" + r.username + "'");
            if (!digest || digest->size() != r.password_digest.size())
                throw ConfigError("user store: digest of '" + r.username + "' must be 32 octets of hex");
            r.password_salt = std::move(*salt);
            std::copy(digest->begin(), digest->end(), r.password_digest.begin());
            r.otp_channel = u.at("otp_channel").get<std::string>();
            records.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw ConfigError(std::string("user store: ") + e.what());
        }
    }
    return UserStore(std::move(records));
}

UserStore UserStore::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("user store: cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const UserRecord* UserStore::find(std::string_view username) const {
    auto it = users_.find(username);
    return it == users_.end() ? nullptr : &it->second;
}

std::string UserStore::to_json() const {
    json users = json::array();
    for (const auto& [name, r] : users_) {
        users.push_back({{"username", r.username},
                         {"salt", to_hex(r.password_salt)},
                         {"digest", to_hex(r.password_digest)},
                         {"otp_channel", r.otp_channel}});
    }
    return json{{"users", users}}.dump(2);
}

bool verify_first_factor(std::string_view username, OctetView password, const UserStore& store) {
    static const Octets kDummySalt(kMinSaltLength, 0x5c);
    static const Sha256Digest kDummyDigest{};

    const UserRecord* user = store.find(username);
    const OctetView salt = user ? OctetView(user->password_salt) : OctetView(kDummySalt);
    const Sha256Digest& expected = user ? user->password_digest : kDummyDigest;

    const Sha256Digest actual = password_digest(salt, password);
    const bool match = constant_time_equal(actual, expected);
    return user != nullptr && match;
}

}  // namespace ctxauth::auth
