#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctxauth {

// Server clock instants carry seconds precision.
using Instant = std::chrono::sys_seconds;

// RFC 3339 / ISO 8601 UTC form, e.g. "2026-10-20T10:00:00Z".
std::string format_instant(Instant t);
std::optional<Instant> parse_instant(std::string_view text);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Ipv4 {
    std::uint32_t value = 0;  // host order

    static std::optional<Ipv4> parse(std::string_view dotted);
    std::string to_string() const;

    auto operator<=>(const Ipv4&) const = default;
};

struct Cidr {
    Ipv4 network;
    std::uint8_t prefix = 32;

    // "a.b.c.d/len" or a bare address (treated as /32).
    static std::optional<Cidr> parse(std::string_view text);
    bool contains(Ipv4 addr) const;
    std::string to_string() const;
};

// Minutes after local midnight.
struct TimeOfDay {
    int minutes = 0;

    static std::optional<TimeOfDay> parse(std::string_view hhmm);
    auto operator<=>(const TimeOfDay&) const = default;
};

// Fixed offset from UTC, written "+HH:MM" / "-HH:MM".
struct UtcOffset {
    int minutes = 0;

    static std::optional<UtcOffset> parse(std::string_view text);
};

// "Mon".."Sun" or the full English name, case-insensitive.
std::optional<std::chrono::weekday> parse_weekday(std::string_view name);

struct ContextConfig {
    std::set<unsigned> working_days;  // std::chrono::weekday::c_encoding(), Sunday = 0
    TimeOfDay day_start{8 * 60};
    TimeOfDay day_end{18 * 60};
    UtcOffset timezone{};
    std::vector<Cidr> trusted_networks;

    // Throws ConfigError on an empty weekday set, start >= end, or no trusted network.
    void validate() const;
};

struct ContextSnapshot {
    Instant timestamp;
    Ipv4 source_address;
    bool in_working_hours = false;
    bool on_site = false;

    bool operator==(const ContextSnapshot&) const = default;
};

enum class ContextReason { OutsideWorkingHours, OffSite };

const char* to_string(ContextReason r);

struct ContextVerdict {
    bool plausible = true;
    std::set<ContextReason> reasons;
};

ContextSnapshot snapshot_context(Ipv4 source_address, Instant now, const ContextConfig& config);

ContextVerdict evaluate_plausibility(const ContextSnapshot& snapshot);

}  // namespace ctxauth
