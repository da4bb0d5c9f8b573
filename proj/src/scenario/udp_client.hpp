#pragma once

#include <chrono>
#include <optional>

#include "ctxauth/scenario/scenario.hpp"

namespace ctxauth::scenario {

// Connected UDP socket to one server.
class UdpClient {
public:
    explicit UdpClient(const ServerEndpoint& server);
    ~UdpClient();

    UdpClient(const UdpClient&) = delete;
    UdpClient& operator=(const UdpClient&) = delete;

    void send(OctetView datagram);
    // nullopt once the deadline passes.
    std::optional<Octets> receive(std::chrono::steady_clock::time_point deadline);

private:
    int fd_ = -1;
};

}  // namespace ctxauth::scenario
