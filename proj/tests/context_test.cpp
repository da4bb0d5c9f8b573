#include <gtest/gtest.h>

#include "ctxauth/context/context.hpp"
#include "test_support.hpp"

namespace ctxauth {
namespace {

using testing::office_context;
using testing::tuesday_at;

Ipv4 ip(const char* s) { return *Ipv4::parse(s); }

TEST(Snapshot, InsideHoursAndOnSite) {
    const auto s = snapshot_context(ip("10.0.0.5"), tuesday_at(10), office_context());
    EXPECT_TRUE(s.in_working_hours);
    EXPECT_TRUE(s.on_site);
    EXPECT_EQ(s.timestamp, tuesday_at(10));
    EXPECT_EQ(s.source_address, ip("10.0.0.5"));
}

TEST(Snapshot, NightIsOutsideHours) {
    EXPECT_FALSE(snapshot_context(ip("10.0.0.5"), tuesday_at(2), office_context()).in_working_hours);
}

TEST(Snapshot, ForeignPrefixIsOffSite) {
    ContextConfig c = office_context();
    c.trusted_networks = {*Cidr::parse("10.0.0.0/8")};
    EXPECT_FALSE(snapshot_context(ip("203.0.113.7"), tuesday_at(10), c).on_site);
}

TEST(Snapshot, HalfOpenWindow) {
    const auto c = office_context();
    EXPECT_TRUE(snapshot_context(ip("10.0.0.1"), tuesday_at(8, 0, 0), c).in_working_hours);
    EXPECT_FALSE(snapshot_context(ip("10.0.0.1"), tuesday_at(7, 59, 59), c).in_working_hours);
    EXPECT_TRUE(snapshot_context(ip("10.0.0.1"), tuesday_at(17, 59, 59), c).in_working_hours);
    EXPECT_FALSE(snapshot_context(ip("10.0.0.1"), tuesday_at(18, 0, 0), c).in_working_hours);
}

TEST(Snapshot, WeekendIsOutsideHours) {
    // 2026-10-24 is a Saturday.
    EXPECT_FALSE(snapshot_context(ip("10.0.0.1"), tuesday_at(10) + std::chrono::days{4}, office_context())
                     .in_working_hours);
    EXPECT_TRUE(snapshot_context(ip("10.0.0.1"), tuesday_at(10) + std::chrono::days{3}, office_context())
                    .in_working_hours);
}

TEST(Snapshot, TimezoneOffsetShiftsLocalTime) {
    ContextConfig c = office_context();
    c.timezone = *UtcOffset::parse("+09:00");
    // 00:30 UTC Tuesday = 09:30 local Tuesday.
    EXPECT_TRUE(snapshot_context(ip("10.0.0.1"), tuesday_at(0, 30), c).in_working_hours);
    // 10:00 UTC = 19:00 local.
    EXPECT_FALSE(snapshot_context(ip("10.0.0.1"), tuesday_at(10), c).in_working_hours);
    c.timezone = *UtcOffset::parse("-05:00");
    // 03:00 UTC Tuesday = 22:00 Monday local.
    EXPECT_FALSE(snapshot_context(ip("10.0.0.1"), tuesday_at(3), c).in_working_hours);
}

TEST(Snapshot, Deterministic) {
    const auto c = office_context();
    for (int h = 0; h < 24; ++h)
        EXPECT_EQ(snapshot_context(ip("192.168.1.1"), tuesday_at(h), c),
                  snapshot_context(ip("192.168.1.1"), tuesday_at(h), c));
}

TEST(Snapshot, AddingTrustedNetworkNeverRevokesOnSite) {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 500; ++iter) {
        ContextConfig c = office_context();
        const Ipv4 addr{static_cast<std::uint32_t>(rng())};
        const bool before = snapshot_context(addr, tuesday_at(10), c).on_site;
        c.trusted_networks.push_back(Cidr{Ipv4{static_cast<std::uint32_t>(rng())}, static_cast<std::uint8_t>(rng() % 33)});
        const bool after = snapshot_context(addr, tuesday_at(10), c).on_site;
        EXPECT_TRUE(!before || after);
    }
}

TEST(Plausibility, AllFourCombinations) {
    auto verdict = [](bool hours, bool site) {
        return evaluate_plausibility(ContextSnapshot{tuesday_at(10), Ipv4{}, hours, site});
    };
    const auto tt = verdict(true, true);
    EXPECT_TRUE(tt.plausible);
    EXPECT_TRUE(tt.reasons.empty());

    const auto ft = verdict(false, true);
    EXPECT_FALSE(ft.plausible);
    EXPECT_EQ(ft.reasons, std::set<ContextReason>{ContextReason::OutsideWorkingHours});

    const auto tf = verdict(true, false);
    EXPECT_FALSE(tf.plausible);
    EXPECT_EQ(tf.reasons, std::set<ContextReason>{ContextReason::OffSite});

    const auto ff = verdict(false, false);
    EXPECT_FALSE(ff.plausible);
    EXPECT_EQ(ff.reasons, (std::set<ContextReason>{ContextReason::OutsideWorkingHours, ContextReason::OffSite}));

    for (const auto& v : {tt, ft, tf, ff}) EXPECT_EQ(v.plausible, v.reasons.empty());
}

TEST(Parsing, Addresses) {
    EXPECT_EQ(ip("10.1.2.3").value, 0x0a010203u);
    EXPECT_EQ(ip("10.1.2.3").to_string(), "10.1.2.3");
    EXPECT_FALSE(Ipv4::parse("10.1.2"));
    EXPECT_FALSE(Ipv4::parse("10.1.2.256"));
    EXPECT_FALSE(Ipv4::parse("10..2.3"));
    EXPECT_FALSE(Ipv4::parse("a.b.c.d"));

    const auto c = *Cidr::parse("192.168.0.0/16");
    EXPECT_TRUE(c.contains(ip("192.168.44.1")));
    EXPECT_FALSE(c.contains(ip("192.169.0.1")));
    EXPECT_TRUE(Cidr::parse("0.0.0.0/0")->contains(ip("8.8.8.8")));
    EXPECT_TRUE(Cidr::parse("1.2.3.4")->contains(ip("1.2.3.4")));
    EXPECT_FALSE(Cidr::parse("1.2.3.4")->contains(ip("1.2.3.5")));
    EXPECT_FALSE(Cidr::parse("1.2.3.4/33"));
}

TEST(Parsing, TimesAndDays) {
    EXPECT_EQ(TimeOfDay::parse("08:30")->minutes, 510);
    EXPECT_FALSE(TimeOfDay::parse("8:30"));
    EXPECT_FALSE(TimeOfDay::parse("12:60"));
    EXPECT_EQ(UtcOffset::parse("-05:30")->minutes, -330);
    EXPECT_FALSE(UtcOffset::parse("05:00"));
    EXPECT_EQ(parse_weekday("Mon")->c_encoding(), 1u);
    EXPECT_EQ(parse_weekday("sunday")->c_encoding(), 0u);
    EXPECT_FALSE(parse_weekday("Funday"));

    EXPECT_EQ(format_instant(tuesday_at(9, 5, 7)), "2026-10-20T09:05:07Z");
    EXPECT_EQ(parse_instant("2026-10-20T09:05:07Z"), tuesday_at(9, 5, 7));
    EXPECT_FALSE(parse_instant("2026-02-30T00:00:00Z"));
}

TEST(ConfigValidation, RejectsDegenerateConfigs) {
    ContextConfig c = office_context();
    EXPECT_NO_THROW(c.validate());

    auto bad = c;
    bad.working_days.clear();
    EXPECT_THROW(bad.validate(), ConfigError);

    bad = c;
    bad.day_end = bad.day_start;
    EXPECT_THROW(bad.validate(), ConfigError);

    bad = c;
    std::swap(bad.day_start, bad.day_end);  // overnight shift
    EXPECT_THROW(bad.validate(), ConfigError);

    bad = c;
    bad.trusted_networks.clear();
    EXPECT_THROW(bad.validate(), ConfigError);
}

}  // namespace
}  // namespace ctxauth
