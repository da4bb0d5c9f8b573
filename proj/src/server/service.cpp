#include "ctxauth/server/service.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <system_error>

#include <fmt/format.h>

namespace ctxauth::server {

ClockFn make_clock(const ServerConfig& config) {
    if (!config.clock_override) {
        return [] { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); };
    }
    const Instant base = *config.clock_override;
    const auto started = std::chrono::steady_clock::now();
    return [base, started] {
        return base + std::chrono::floor<std::chrono::seconds>(std::chrono::steady_clock::now() - started);
    };
}

UdpServer::UdpServer(RequestHandler& handler, Endpoint bind, int workers, ClockFn clock, EventLog* log)
    : handler_(handler), worker_count_(workers), clock_(std::move(clock)), log_(log) {
    fd_ = ::socket(AF_INET, SOCK_DGRAM | SOCK_NONBLOCK | SOCK_CLOEXEC, 0);
    if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(bind.port);
    addr.sin_addr.s_addr = htonl(bind.address.value);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        const int err = errno;
        ::close(fd_);
        fd_ = -1;
        throw std::system_error(err, std::generic_category(),
                                fmt::format("bind {}:{}", bind.address.to_string(), bind.port));
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

UdpServer::~UdpServer() {
    stop();
    if (fd_ >= 0) ::close(fd_);
}

void UdpServer::start() {
    if (running_.exchange(true)) return;
    for (int i = 0; i < worker_count_; ++i) threads_.emplace_back([this] { worker(); });
    if (log_) log_->emit(clock_(), "listening", fmt::format("port {}", port_), fmt::format("workers={}", worker_count_));
}

void UdpServer::stop() {
    running_ = false;
    for (auto& t : threads_)
        if (t.joinable()) t.join();
    threads_.clear();
}

void UdpServer::worker() {
    std::array<std::uint8_t, 65536> buf{};
    while (running_) {
        pollfd pfd{fd_, POLLIN, 0};
        if (::poll(&pfd, 1, 100) <= 0) continue;

        sockaddr_in from{};
        socklen_t from_len = sizeof from;
        const ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&from), &from_len);
        if (n < 0) continue;  // EAGAIN: another worker took it

        const Endpoint peer{Ipv4{ntohl(from.sin_addr.s_addr)}, ntohs(from.sin_port)};
        auto response = handler_.handle_datagram(OctetView(buf.data(), static_cast<std::size_t>(n)), peer, clock_());
        if (response)
            ::sendto(fd_, response->data(), response->size(), 0, reinterpret_cast<sockaddr*>(&from), from_len);
    }
}

Service::Service(ServerConfig config, ServiceOptions options) : config_(std::move(config)) {
    config_.validate();
    clock_ = options.clock ? std::move(options.clock) : make_clock(config_);
    log_ = options.log_sink ? std::make_unique<EventLog>(*options.log_sink) : std::make_unique<EventLog>();
    users_ = auth::UserStore::load_file(config_.user_store_path);
    if (options.delivery) {
        delivery_ = options.delivery;
    } else {
        file_delivery_ = std::make_unique<auth::FileDeliveryLog>(config_.delivery_log_path);
        delivery_ = file_delivery_.get();
    }
    core_ = std::make_unique<auth::AuthCore>(users_, *delivery_, config_.otp, config_.session, log_.get());
    handler_ = std::make_unique<RequestHandler>(config_, *core_, log_.get());
    udp_ = std::make_unique<UdpServer>(*handler_, Endpoint{config_.bind_address, config_.port}, config_.workers,
                                       clock_, log_.get());
}

void Service::stop() {
    udp_->stop();
    if (file_delivery_) file_delivery_->flush();
}

int run_server(const ServerConfig& config, std::ostream& diagnostics) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    // Block before any worker starts so only sigwait sees them.
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    std::unique_ptr<Service> service;
    try {
        service = std::make_unique<Service>(config, ServiceOptions{{}, &diagnostics, nullptr});
    } catch (const std::exception& e) {
        diagnostics << "ctxauthd: startup failed: " << e.what() << '\n';
        return 1;
    }
    service->start();

    int sig = 0;
    sigwait(&signals, &sig);
    service->stop();
    EventLog(diagnostics).emit(make_clock(config)(), "shutdown", fmt::format("signal {}", sig), "clean");
    return 0;
}

}  // namespace ctxauth::server
