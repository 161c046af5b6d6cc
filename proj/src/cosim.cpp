#include "spaace/cosim.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

#include "spaace/config.hpp"

namespace spaace {

namespace {

constexpr std::size_t kMaxFrame = 4096;

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto start = line.find_first_not_of(' ', pos);
        if (start == std::string_view::npos) break;
        auto end = line.find(' ', start);
        if (end == std::string_view::npos) end = line.size();
        out.push_back(line.substr(start, end - start));
        pos = end;
    }
    return out;
}

bool send_all(int fd, const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

}  // namespace

CosimSession::CosimSession(ControllerParams params) : modulator_(std::move(params)) {}

CosimSession::Reply CosimSession::handle(std::string_view frame) {
    if (!frame.empty() && frame.back() == '\r') frame.remove_suffix(1);
    const auto f = fields(frame);
    if (f.empty()) return {"ERR malformed frame"};

    if (f[0] == "STEP") {
        if (f.size() != 4) return {"ERR malformed frame"};
        double v[3];
        try {
            for (int i = 0; i < 3; ++i) v[i] = parse_double(f[i + 1]);
        } catch (const Error&) {
            return {"ERR malformed frame"};
        }
        try {
            return {"REF " + format_double(modulator_.modulate_step(v[0], v[1], v[2]))};
        } catch (const Error& e) {
            return {std::string("ERR ") + e.what()};
        }
    }
    if (f[0] == "RESET") {
        if (f.size() != 1) return {"ERR malformed frame"};
        modulator_.reset();
        return {"OK"};
    }
    if (f[0] == "PARAMS") {
        if (f.size() < 2) return {"ERR malformed frame"};
        ControllerParams next = modulator_.params();
        try {
            for (std::size_t i = 1; i < f.size(); ++i) {
                const auto eq = f[i].find('=');
                if (eq == std::string_view::npos || eq == 0) return {"ERR malformed frame"};
                const auto key = f[i].substr(0, eq);
                if (!apply_controller_setting(next, key, f[i].substr(eq + 1))) {
                    return {"ERR unknown parameter '" + std::string(key) + "'"};
                }
            }
            modulator_.set_params(next);
        } catch (const Error& e) {
            return {std::string("ERR ") + e.what()};
        }
        return {"OK"};
    }
    if (f[0] == "BYE") return {"BYE", true};
    return {"ERR malformed frame"};
}

CosimServer::CosimServer(ControllerParams params, std::uint16_t port, const std::string& host)
    : params_(std::move(params)) {
    if (auto errors = validate(params_); !errors.empty()) throw Error("invalid controller params: " + errors.front());

    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        throw Error("invalid bind address '" + host + "'");
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 16) != 0) {
        const std::string reason = std::strerror(errno);
        ::close(listen_fd_);
        throw Error("cannot listen on " + host + ":" + std::to_string(port) + ": " + reason);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

CosimServer::~CosimServer() {
    stop();
    for (auto& w : workers_) {
        if (w.joinable()) w.join();
    }
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void CosimServer::serve() {
    while (!stopping_) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR) continue;
            break;  // listening socket shut down
        }
        std::lock_guard lock(mutex_);
        if (stopping_) {
            ::close(fd);
            break;
        }
        clients_.insert(fd);
        workers_.emplace_back([this, fd] { session(fd); });
    }
}

void CosimServer::stop() {
    if (stopping_.exchange(true)) return;
    ::shutdown(listen_fd_, SHUT_RDWR);
    std::lock_guard lock(mutex_);
    for (const int fd : clients_) ::shutdown(fd, SHUT_RDWR);
}

void CosimServer::session(int fd) {
    CosimSession state(params_);
    std::string buffer;
    char chunk[1024];
    bool open = true;
    while (open) {
        const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t nl;
        while (open && (nl = buffer.find('\n')) != std::string::npos) {
            const auto reply = state.handle(std::string_view(buffer).substr(0, nl));
            buffer.erase(0, nl + 1);
            if (!send_all(fd, reply.text + "\n") || reply.close) open = false;
        }
        if (open && buffer.size() > kMaxFrame) {
            buffer.clear();
            open = send_all(fd, "ERR frame too long\n");
        }
    }
    {
        std::lock_guard lock(mutex_);
        clients_.erase(fd);
    }
    ::close(fd);
}

}  // namespace spaace
