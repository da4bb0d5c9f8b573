#pragma once

#include <stdexcept>
#include <string>

namespace ctxauth {

enum class WireErrc {
    AttributeTooLong,
    PacketTooLong,
    Truncated,
    MalformedAttribute,
    UnknownCode,
    EmptyPassword,
    PasswordTooLong,
    PasswordContainsPad,
    EmptySecret,
    BadLength,
    AllPadRecovered,
};

const char* to_string(WireErrc e);

class WireError : public std::runtime_error {
public:
    WireError(WireErrc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    WireErrc code() const noexcept { return code_; }

private:
    WireErrc code_;
};

}  // namespace ctxauth
