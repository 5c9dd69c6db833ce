#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "nin/gateway/command.hpp"
#include "nin/gateway/event_hub.hpp"
#include "nin/gateway/snapshot.hpp"

namespace nin::gateway {

/// "host:port", ":port" or "port". Host defaults to 127.0.0.1.
std::optional<std::pair<std::string, int>> parse_listen_address(std::string_view text);

/// Built-in status page served at `/` when no asset directory is given.
std::string_view builtin_index_html();

/// HTTP side of the gateway:
///   GET  /api/state    latest snapshot
///   POST /api/command  operator command
///   GET  /api/events   event stream, one JSON object per `data:` frame
///   GET  /             dashboard assets
class ApiServer {
 public:
  using CommandSink = std::function<CommandResult(const Command&)>;

  ApiServer(SnapshotCell& cell, EventHub& hub, CommandSink sink,
            std::optional<std::filesystem::path> assets = std::nullopt);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Serves on a background thread. Port 0 picks a free port. Returns the
  /// bound port, or -1 when binding failed.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nin::gateway
