#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "spaace/core.hpp"
#include "spaace/modulator.hpp"

namespace spaace {

/// One controller-in-the-loop session: a Modulator driven by text frames.
///
///   STEP <t> <x_ref> <x>   -> REF <x_ref_mod>
///   RESET                  -> OK
///   PARAMS <key>=<value>.. -> OK (all-or-nothing)
///   BYE                    -> BYE, then the connection closes
///
/// Anything else gets `ERR <reason>` and the session carries on.
class CosimSession {
public:
    explicit CosimSession(ControllerParams params);

    struct Reply {
        std::string text;  // without the trailing newline
        bool close = false;
    };

    [[nodiscard]] Reply handle(std::string_view frame);

    [[nodiscard]] const Modulator& modulator() const noexcept { return modulator_; }

private:
    Modulator modulator_;
};

/// Thread-per-connection TCP server. Each connection gets its own CosimSession.
class CosimServer {
public:
    /// Binds and listens immediately; port 0 picks a free port. Throws Error when the port
    /// cannot be bound.
    CosimServer(ControllerParams params, std::uint16_t port, const std::string& host = "127.0.0.1");
    ~CosimServer();

    CosimServer(const CosimServer&) = delete;
    CosimServer& operator=(const CosimServer&) = delete;

    [[nodiscard]] std::uint16_t port() const noexcept { return port_; }

    /// Accepts connections until stop() is called.
    void serve();

    /// Thread-safe. Unblocks serve() and closes live connections.
    void stop();

private:
    void session(int fd);

    ControllerParams params_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex mutex_;
    std::set<int> clients_;
    std::vector<std::thread> workers_;
};

}  // namespace spaace
