#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxauth/context/context.hpp"

namespace ctxauth::auth {

struct DeliveryEntry {
    Instant issued_at;
    std::string channel;
    std::string otp;

    bool operator==(const DeliveryEntry&) const = default;
};

// Simulated out-of-band channel standing in for SMS delivery.
class DeliverySink {
public:
    virtual ~DeliverySink() = default;
    virtual void deliver(const DeliveryEntry& entry) = 0;
};

// Append-only text log, one "instant <TAB> channel <TAB> otp" line per OTP, flushed per line.
class FileDeliveryLog final : public DeliverySink {
public:
    explicit FileDeliveryLog(const std::filesystem::path& path);

    void deliver(const DeliveryEntry& entry) override;
    void flush();

private:
    std::mutex mutex_;
    std::ofstream out_;
};

class MemoryDeliveryLog final : public DeliverySink {
public:
    void deliver(const DeliveryEntry& entry) override;

    std::vector<DeliveryEntry> entries() const;
    std::optional<std::string> latest(std::string_view channel) const;

private:
    mutable std::mutex mutex_;
    std::vector<DeliveryEntry> entries_;
};

std::string format_delivery_line(const DeliveryEntry& entry);
std::optional<DeliveryEntry> parse_delivery_line(std::string_view line);

// Newest OTP delivered to channel, scanning the whole log file.
std::optional<std::string> latest_otp(const std::filesystem::path& log, std::string_view channel);

}  // namespace ctxauth::auth
