#pragma once

#include <mutex>
#include <ostream>
#include <string_view>

#include "ctxauth/context/context.hpp"

namespace ctxauth {

// One event per line: "instant <TAB> event <TAB> subject <TAB> detail".
// Callers never pass secrets, passwords or OTP values.
class EventLog {
public:
    EventLog() = default;
    explicit EventLog(std::ostream& sink) : sink_(&sink) {}

    void emit(Instant when, std::string_view event, std::string_view subject, std::string_view detail);

private:
    std::ostream* sink_ = nullptr;
    std::mutex mutex_;
};

}  // namespace ctxauth
