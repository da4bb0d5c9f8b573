#pragma once

#include <compare>

#include "ctxauth/context/context.hpp"

namespace ctxauth {

enum class RequestedAction { DefaultAccess, RootAccess };

const char* to_string(RequestedAction a);

// Low: one factor. High: two factors. Ordered Low < High.
enum class Level { Low = 1, High = 2 };

struct SecurityLevel {
    Level level = Level::Low;

    int required_factors() const noexcept { return static_cast<int>(level); }

    auto operator<=>(const SecurityLevel&) const = default;
};

const char* to_string(Level l);

// Rule table over (context, action):
//   plausible   + default -> Low
//   plausible   + root    -> High
//   implausible + any     -> High
SecurityLevel required_security(const ContextVerdict& verdict, RequestedAction action);

}  // namespace ctxauth
