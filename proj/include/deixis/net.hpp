#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "deixis/config.hpp"
#include "deixis/engine.hpp"

namespace deixis {

struct ServeOptions {
  std::uint16_t ingest_port = 0;  // 0 picks an ephemeral port
  std::optional<std::uint16_t> events_port;
  double reset_gap_s = 1.0;  // engine survives a reconnect within this gap
  bool events_to_stdout = true;
  FILE* events_stream = nullptr;  // defaults to stdout
};

/// TCP front end: each ingest connection carries one newline-delimited frame
/// stream and is processed by its own engine in arrival order (one stream =
/// one tracked person). Emitted events go to stdout and, when an events port
/// is configured, to every connected subscriber. A malformed line is logged
/// and skipped; it never terminates the connection. When a client drops and
/// reconnects within reset_gap_s the previous engine state is resumed.
class IngestServer {
 public:
  IngestServer(RunConfig cfg, ServeOptions opts);
  ~IngestServer();

  void start();
  void stop();

  std::uint16_t ingest_port() const { return ingest_port_; }
  std::optional<std::uint16_t> events_port() const { return events_port_; }

  /// Extra per-event-line hook (used by tests).
  void set_event_sink(std::function<void(const std::string&)> sink) {
    event_sink_ = std::move(sink);
  }

 private:
  void accept_loop();
  void events_accept_loop();
  void handle_client(int fd);
  void emit(const std::string& line);

  RunConfig cfg_;
  ServeOptions opts_;
  std::atomic<bool> running_{false};
  int ingest_fd_ = -1;
  int events_fd_ = -1;
  std::uint16_t ingest_port_ = 0;
  std::optional<std::uint16_t> events_port_;
  std::thread accept_thread_;
  std::thread events_thread_;
  std::vector<std::thread> client_threads_;
  std::mutex clients_mutex_;
  std::vector<int> client_fds_;
  std::mutex subscribers_mutex_;
  std::vector<int> subscriber_fds_;
  std::mutex emit_mutex_;
  std::function<void(const std::string&)> event_sink_;

  std::mutex parked_mutex_;
  std::unique_ptr<PointingEngine> parked_engine_;
  std::chrono::steady_clock::time_point parked_at_;
};

}  // namespace deixis
