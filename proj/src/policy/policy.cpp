#include "ctxauth/policy/policy.hpp"

namespace ctxauth {

const char* to_string(RequestedAction a) {
    return a == RequestedAction::RootAccess ? "RootAccess" : "DefaultAccess";
}

const char* to_string(Level l) { return l == Level::High ? "High" : "Low"; }

SecurityLevel required_security(const ContextVerdict& verdict, RequestedAction action) {
    if (!verdict.plausible || action == RequestedAction::RootAccess) return SecurityLevel{Level::High};
    return SecurityLevel{Level::Low};
}

}  // namespace ctxauth
