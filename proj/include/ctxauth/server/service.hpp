#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <ostream>
#include <thread>
#include <vector>

#include "ctxauth/auth/auth_core.hpp"
#include "ctxauth/server/config.hpp"
#include "ctxauth/server/handler.hpp"

namespace ctxauth::server {

using ClockFn = std::function<Instant()>;

// System clock, or the configured override advancing in real time.
ClockFn make_clock(const ServerConfig& config);

// Bound UDP socket plus worker threads draining it into a RequestHandler.
class UdpServer {
public:
    // Binds immediately; throws std::system_error when the address is unusable.
    UdpServer(RequestHandler& handler, Endpoint bind, int workers, ClockFn clock, EventLog* log = nullptr);
    ~UdpServer();

    UdpServer(const UdpServer&) = delete;
    UdpServer& operator=(const UdpServer&) = delete;

    std::uint16_t port() const noexcept { return port_; }

    void start();
    void stop();

private:
    void worker();

    RequestHandler& handler_;
    int fd_ = -1;
    std::uint16_t port_ = 0;
    int worker_count_;
    ClockFn clock_;
    EventLog* log_;
    std::atomic<bool> running_{false};
    std::vector<std::thread> threads_;
};

struct ServiceOptions {
    ClockFn clock;                        // defaults to make_clock(config)
    std::ostream* log_sink = nullptr;     // event log destination; nullptr silences it
    auth::DeliverySink* delivery = nullptr;  // defaults to a FileDeliveryLog at delivery_log_path
};

// The assembled daemon: user store, delivery log, auth core, handler and socket.
class Service {
public:
    // Throws ConfigError or std::system_error on startup failure.
    explicit Service(ServerConfig config, ServiceOptions options = {});

    std::uint16_t port() const noexcept { return udp_->port(); }
    void start() { udp_->start(); }
    void stop();

    auth::AuthCore& core() noexcept { return *core_; }
    RequestHandler& handler() noexcept { return *handler_; }
    const ServerConfig& config() const noexcept { return config_; }

private:
    ServerConfig config_;
    ClockFn clock_;
    std::unique_ptr<EventLog> log_;
    auth::UserStore users_;
    std::unique_ptr<auth::FileDeliveryLog> file_delivery_;
    auth::DeliverySink* delivery_;
    std::unique_ptr<auth::AuthCore> core_;
    std::unique_ptr<RequestHandler> handler_;
    std::unique_ptr<UdpServer> udp_;
};

// Runs until SIGINT or SIGTERM. Returns the process exit code.
int run_server(const ServerConfig& config, std::ostream& diagnostics);

}  // namespace ctxauth::server
