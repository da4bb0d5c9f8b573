#include "ctxauth/context/context.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace ctxauth {

namespace {

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

// "HH:MM" with HH in [0, max_hours].
std::optional<int> parse_hhmm(std::string_view s, int max_hours) {
    if (s.size() != 5 || s[2] != ':') return std::nullopt;
    auto h = parse_int(s.substr(0, 2));
    auto m = parse_int(s.substr(3, 2));
    if (!h || !m || *h < 0 || *h > max_hours || *m < 0 || *m > 59) return std::nullopt;
    return *h * 60 + *m;
}

}  // namespace

std::string format_instant(Instant t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

std::optional<Instant> parse_instant(std::string_view text) {
    using namespace std::chrono;
    // YYYY-MM-DDTHH:MM:SSZ
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != 'Z')
        return std::nullopt;
    auto y = parse_int(text.substr(0, 4));
    auto mo = parse_int(text.substr(5, 2));
    auto d = parse_int(text.substr(8, 2));
    auto h = parse_int(text.substr(11, 2));
    auto mi = parse_int(text.substr(14, 2));
    auto s = parse_int(text.substr(17, 2));
    if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
    const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok() || *h > 23 || *mi > 59 || *s > 59) return std::nullopt;
    return sys_days{ymd} + hours{*h} + minutes{*mi} + seconds{*s};
}

std::optional<Ipv4> Ipv4::parse(std::string_view dotted) {
    std::uint32_t value = 0;
    int parts = 0;
    while (true) {
        auto dot = dotted.find('.');
        auto piece = dotted.substr(0, dot);
        if (piece.empty() || piece.size() > 3) return std::nullopt;
        auto v = parse_int(piece);
        if (!v || *v > 255) return std::nullopt;
        value = value << 8 | static_cast<std::uint32_t>(*v);
        ++parts;
        if (dot == std::string_view::npos) break;
        dotted.remove_prefix(dot + 1);
    }
    if (parts != 4) return std::nullopt;
    return Ipv4{value};
}

std::string Ipv4::to_string() const {
    return fmt::format("{}.{}.{}.{}", value >> 24, (value >> 16) & 0xff, (value >> 8) & 0xff, value & 0xff);
}

std::optional<Cidr> Cidr::parse(std::string_view text) {
    auto slash = text.find('/');
    auto addr = Ipv4::parse(text.substr(0, slash));
    if (!addr) return std::nullopt;
    int prefix = 32;
    if (slash != std::string_view::npos) {
        auto p = parse_int(text.substr(slash + 1));
        if (!p || *p < 0 || *p > 32) return std::nullopt;
        prefix = *p;
    }
    return Cidr{*addr, static_cast<std::uint8_t>(prefix)};
}

bool Cidr::contains(Ipv4 addr) const {
    if (prefix == 0) return true;
    const std::uint32_t mask = prefix >= 32 ? 0xffffffffu : ~(0xffffffffu >> prefix);
    return (addr.value & mask) == (network.value & mask);
}

std::string Cidr::to_string() const { return fmt::format("{}/{}", network.to_string(), prefix); }

std::optional<TimeOfDay> TimeOfDay::parse(std::string_view hhmm) {
    // 24:00 is allowed as an end-of-day bound.
    auto m = parse_hhmm(hhmm, 24);
    if (!m || *m > 24 * 60) return std::nullopt;
    return TimeOfDay{*m};
}

std::optional<UtcOffset> UtcOffset::parse(std::string_view text) {
    if (text == "Z" || text == "UTC") return UtcOffset{0};
    if (text.size() != 6 || (text[0] != '+' && text[0] != '-')) return std::nullopt;
    auto m = parse_hhmm(text.substr(1), 14);
    if (!m) return std::nullopt;
    return UtcOffset{text[0] == '-' ? -*m : *m};
}

std::optional<std::chrono::weekday> parse_weekday(std::string_view name) {
    static constexpr std::string_view kNames[] = {"sunday",   "monday", "tuesday", "wednesday",
                                                  "thursday", "friday", "saturday"};
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (unsigned i = 0; i < 7; ++i) {
        if (lower == kNames[i] || (lower.size() == 3 && kNames[i].substr(0, 3) == lower))
            return std::chrono::weekday{i};
    }
    return std::nullopt;
}

void ContextConfig::validate() const {
    if (working_days.empty()) throw ConfigError("context: working_days is empty");
    for (unsigned d : working_days)
        if (d > 6) throw ConfigError("context: weekday index out of range");
    if (!(day_start < day_end)) throw ConfigError("context: day_start must be before day_end");
    if (trusted_networks.empty()) throw ConfigError("context: at least one trusted network required");
}

const char* to_string(ContextReason r) {
    switch (r) {
        case ContextReason::OutsideWorkingHours: return "OutsideWorkingHours";
        case ContextReason::OffSite: return "OffSite";
    }
    return "?";
}

ContextSnapshot snapshot_context(Ipv4 source_address, Instant now, const ContextConfig& config) {
    using namespace std::chrono;
    const Instant local = now + minutes{config.timezone.minutes};
    const auto day = floor<days>(local);
    const unsigned weekday_index = weekday{day}.c_encoding();
    const auto since_midnight = duration_cast<seconds>(local - day).count();

    const bool day_ok = config.working_days.count(weekday_index) != 0;
    const bool time_ok = since_midnight >= config.day_start.minutes * 60LL &&
                         since_midnight < config.day_end.minutes * 60LL;
    const bool on_site = std::any_of(config.trusted_networks.begin(), config.trusted_networks.end(),
                                     [&](const Cidr& c) { return c.contains(source_address); });

    return ContextSnapshot{now, source_address, day_ok && time_ok, on_site};
}

ContextVerdict evaluate_plausibility(const ContextSnapshot& snapshot) {
    ContextVerdict v;
    if (!snapshot.in_working_hours) v.reasons.insert(ContextReason::OutsideWorkingHours);
    if (!snapshot.on_site) v.reasons.insert(ContextReason::OffSite);
    v.plausible = v.reasons.empty();
    return v;
}

}  // namespace ctxauth
