#include "ctxauth/auth/event_log.hpp"

namespace ctxauth {

void EventLog::emit(Instant when, std::string_view event, std::string_view subject, std::string_view detail) {
    if (!sink_) return;
    std::lock_guard lock(mutex_);
    *sink_ << format_instant(when) << '\t' << event << '\t' << subject << '\t' << detail << '\n';
    sink_->flush();
}

}  // namespace ctxauth
