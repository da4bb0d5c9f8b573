#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ctxauth/wire/digest.hpp"
#include "ctxauth/wire/octets.hpp"

namespace ctxauth::auth {

inline constexpr std::size_t kMinSaltLength = 16;

struct UserRecord {
    std::string username;
    Octets password_salt;
    Sha256Digest password_digest{};
    std::string otp_channel;  // handle of the simulated out-of-band delivery channel
};

// SHA-256(salt | password).
Sha256Digest password_digest(OctetView salt, OctetView password);

// Fresh random salt of kMinSaltLength octets.
UserRecord make_user_record(std::string username, std::string_view password, std::string otp_channel);

// Read-only after load. Backed by a JSON document:
//   {"users": [{"username": "...", "salt": "<hex>", "digest": "<hex>", "otp_channel": "..."}]}
class UserStore {
public:
    UserStore() = default;
    explicit UserStore(std::vector<UserRecord> records);

    static UserStore parse(std::string_view json_text);
    static UserStore load_file(const std::filesystem::path& path);

    const UserRecord* find(std::string_view username) const;
    std::size_t size() const noexcept { return users_.size(); }

    std::string to_json() const;

private:
    std::map<std::string, UserRecord, std::less<>> users_;
};

// Unknown user and wrong password are indistinguishable, including in timing.
bool verify_first_factor(std::string_view username, OctetView password, const UserStore& store);

}  // namespace ctxauth::auth
