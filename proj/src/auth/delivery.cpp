#include "ctxauth/auth/delivery.hpp"

#include <stdexcept>

namespace ctxauth::auth {

std::string format_delivery_line(const DeliveryEntry& entry) {
    return format_instant(entry.issued_at) + '\t' + entry.channel + '\t' + entry.otp;
}

std::optional<DeliveryEntry> parse_delivery_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto t1 = line.find('\t');
    if (t1 == std::string_view::npos) return std::nullopt;
    const auto t2 = line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) return std::nullopt;
    auto when = parse_instant(line.substr(0, t1));
    if (!when) return std::nullopt;
    return DeliveryEntry{*when, std::string(line.substr(t1 + 1, t2 - t1 - 1)), std::string(line.substr(t2 + 1))};
}

FileDeliveryLog::FileDeliveryLog(const std::filesystem::path& path) : out_(path, std::ios::app) {
    if (!out_) throw std::runtime_error("delivery log: cannot open " + path.string() + " for append");
}

void FileDeliveryLog::deliver(const DeliveryEntry& entry) {
    std::lock_guard lock(mutex_);
    out_ << format_delivery_line(entry) << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("delivery log: write failed");
}

void FileDeliveryLog::flush() {
    std::lock_guard lock(mutex_);
    out_.flush();
}

void MemoryDeliveryLog::deliver(const DeliveryEntry& entry) {
    std::lock_guard lock(mutex_);
    entries_.push_back(entry);
}

std::vector<DeliveryEntry> MemoryDeliveryLog::entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

std::optional<std::string> MemoryDeliveryLog::latest(std::string_view channel) const {
    std::lock_guard lock(mutex_);
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->channel == channel) return it->otp;
    return std::nullopt;
}

std::optional<std::string> latest_otp(const std::filesystem::path& log, std::string_view channel) {
    std::ifstream in(log);
    if (!in) return std::nullopt;
    std::optional<std::string> newest;
    std::string line;
    while (std::getline(in, line)) {
        auto entry = parse_delivery_line(line);
        if (entry && entry->channel == channel) newest = std::move(entry->otp);
    }
    return newest;
}

}  // namespace ctxauth::auth
