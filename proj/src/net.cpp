#include "deixis/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <iostream>

namespace deixis {

namespace {

int listen_on(std::uint16_t port, std::uint16_t& bound_port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw IoError("socket: " + std::string(std::strerror(errno)));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw IoError("cannot bind port " + std::to_string(port) + ": " + err);
  }
  if (::listen(fd, 8) < 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw IoError("listen: " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  bound_port = ntohs(addr.sin_port);
  return fd;
}

int accept_with_timeout(int listen_fd, const std::atomic<bool>& running) {
  while (running.load()) {
    pollfd pfd{listen_fd, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, 100);
    if (rc < 0) {
      if (errno == EINTR) continue;
      return -1;
    }
    if (rc == 0) continue;
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd >= 0) return fd;
  }
  return -1;
}

}  // namespace

IngestServer::IngestServer(RunConfig cfg, ServeOptions opts)
    : cfg_(std::move(cfg)), opts_(opts) {}

IngestServer::~IngestServer() { stop(); }

void IngestServer::start() {
  ingest_fd_ = listen_on(opts_.ingest_port, ingest_port_);
  if (opts_.events_port) {
    std::uint16_t port = 0;
    events_fd_ = listen_on(*opts_.events_port, port);
    events_port_ = port;
  }
  running_ = true;
  accept_thread_ = std::thread(&IngestServer::accept_loop, this);
  if (events_fd_ >= 0)
    events_thread_ = std::thread(&IngestServer::events_accept_loop, this);
}

void IngestServer::stop() {
  if (!running_.exchange(false)) return;
  if (ingest_fd_ >= 0) ::close(ingest_fd_);
  if (events_fd_ >= 0) ::close(events_fd_);
  ingest_fd_ = events_fd_ = -1;
  {
    std::lock_guard lock(clients_mutex_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  if (events_thread_.joinable()) events_thread_.join();
  for (std::thread& t : client_threads_)
    if (t.joinable()) t.join();
  client_threads_.clear();
  std::lock_guard lock(subscribers_mutex_);
  for (int fd : subscriber_fds_) ::close(fd);
  subscriber_fds_.clear();
}

void IngestServer::accept_loop() {
  while (running_.load()) {
    const int fd = accept_with_timeout(ingest_fd_, running_);
    if (fd < 0) break;
    {
      std::lock_guard lock(clients_mutex_);
      client_fds_.push_back(fd);
    }
    client_threads_.emplace_back(&IngestServer::handle_client, this, fd);
  }
}

void IngestServer::events_accept_loop() {
  while (running_.load()) {
    const int fd = accept_with_timeout(events_fd_, running_);
    if (fd < 0) break;
    std::lock_guard lock(subscribers_mutex_);
    subscriber_fds_.push_back(fd);
  }
}

void IngestServer::emit(const std::string& line) {
  std::lock_guard lock(emit_mutex_);
  if (opts_.events_to_stdout) {
    FILE* out = opts_.events_stream ? opts_.events_stream : stdout;
    std::fwrite(line.data(), 1, line.size(), out);
    std::fputc('\n', out);
    std::fflush(out);
  }
  if (event_sink_) event_sink_(line);
  std::lock_guard sub_lock(subscribers_mutex_);
  for (auto it = subscriber_fds_.begin(); it != subscriber_fds_.end();) {
    const std::string framed = line + "\n";
    if (::send(*it, framed.data(), framed.size(), MSG_NOSIGNAL) < 0) {
      ::close(*it);
      it = subscriber_fds_.erase(it);
    } else {
      ++it;
    }
  }
}

void IngestServer::handle_client(int fd) {
  std::unique_ptr<PointingEngine> engine;
  {
    // A client reconnecting quickly resumes the parked stream state.
    std::lock_guard lock(parked_mutex_);
    const auto now = std::chrono::steady_clock::now();
    if (parked_engine_ &&
        std::chrono::duration<double>(now - parked_at_).count() <=
            opts_.reset_gap_s)
      engine = std::move(parked_engine_);
    parked_engine_.reset();
  }
  if (!engine) engine = std::make_unique<PointingEngine>(cfg_.engine_setup());

  std::string buffer;
  char chunk[4096];
  long line_no = 0;
  while (running_.load()) {
    const ssize_t n = ::read(fd, chunk, sizeof chunk);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<size_t>(n));
    size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      const std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      ++line_no;
      if (line.empty()) continue;
      try {
        const JointFrame frame = parse_frame(line, static_cast<int>(line_no));
        for (const PointingEvent& ev : engine->step(frame))
          emit(serialize_event(ev));
      } catch (const MalformedFrame& e) {
        std::cerr << "warning: ingest: " << e.what() << "\n";
      } catch (const NonMonotoneTime& e) {
        std::cerr << "warning: ingest: " << e.what() << ", frame dropped\n";
      }
    }
  }
  ::close(fd);
  std::cerr << "info: ingest connection closed after " << line_no
            << " lines\n";
  {
    std::lock_guard lock(parked_mutex_);
    parked_engine_ = std::move(engine);
    parked_at_ = std::chrono::steady_clock::now();
  }
  std::lock_guard lock(clients_mutex_);
  std::erase(client_fds_, fd);
}

}  // namespace deixis
