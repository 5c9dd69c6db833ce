#include "nin/gateway/api_server.hpp"

#include <charconv>
#include <thread>

#include <httplib.h>

namespace nin::gateway {

std::optional<std::pair<std::string, int>> parse_listen_address(std::string_view text) {
  std::string host = "127.0.0.1";
  std::string_view port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(text.substr(0, colon));
    port_text = text.substr(colon + 1);
  }
  int port = -1;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    return std::nullopt;
  }
  return std::make_pair(host, port);
}

std::string_view builtin_index_html() {
  return R"html(<!doctype html>
<html><head><meta charset="utf-8"><title>nin testbed</title>
<style>body{font:14px monospace;margin:1em}pre{background:#f4f4f4;padding:.5em;max-height:40vh;overflow:auto}</style>
</head><body>
<h3>nin testbed</h3>
<div id="plan"></div>
<div id="subnets"></div>
<pre id="log"></pre>
<script>
async function power(id, on) {
  await fetch('/api/command', {method: 'POST', body: JSON.stringify({kind: 'subnet_power', subnet: id, on})});
}
async function refresh() {
  const s = await (await fetch('/api/state')).json();
  document.getElementById('plan').textContent = 't=' + s.t + ' ms  plan v' + s.plan.version + ': ' +
    s.plan.assignments.map(a => 'SN-' + a.subnet + ' [' + a.low_mhz + ',' + a.high_mhz + ']').join('  ');
  document.getElementById('subnets').innerHTML = s.subnets.map(n =>
    'SN-' + n.subnet + ' ' + n.phase + ' ' + (n.band.high_mhz - n.band.low_mhz) + ' MHz ' +
    '<button onclick="power(' + n.subnet + ',' + !n.switched_on + ')">' + (n.switched_on ? 'off' : 'on') +
    '</button>').join('<br>');
}
const log = document.getElementById('log');
new EventSource('/api/events').onmessage = e => {
  const f = JSON.parse(e.data);
  log.textContent = (f.gap ? '[gap ' + f.gap + ']' : f.t + ' | ' + f.module + ' | ' + f.event + ' | ' + f.details)
    + '\n' + log.textContent.slice(0, 20000);
};
setInterval(refresh, 500);
refresh();
</script></body></html>
)html";
}

struct ApiServer::Impl {
  SnapshotCell& cell;
  EventHub& hub;
  CommandSink sink;
  std::optional<std::filesystem::path> assets;
  httplib::Server server;
  std::thread thread;

  Impl(SnapshotCell& c, EventHub& h, CommandSink s, std::optional<std::filesystem::path> a)
      : cell(c), hub(h), sink(std::move(s)), assets(std::move(a)) {}
};

ApiServer::ApiServer(SnapshotCell& cell, EventHub& hub, CommandSink sink, std::optional<std::filesystem::path> assets)
    : impl_(std::make_unique<Impl>(cell, hub, std::move(sink), std::move(assets))) {
  auto& srv = impl_->server;
  Impl* impl = impl_.get();

  srv.Get("/api/state", [impl](const httplib::Request&, httplib::Response& res) {
    res.set_content(*impl->cell.json(), "application/json");
  });

  srv.Post("/api/command", [impl](const httplib::Request& req, httplib::Response& res) {
    auto parsed = parse_command(req.body);
    CommandResult r;
    if (auto* err = std::get_if<std::string>(&parsed)) {
      r = {false, *err};
    } else {
      r = impl->sink(std::get<Command>(parsed));
    }
    res.status = r.accepted ? 200 : 400;
    res.set_content(to_json(r), "application/json");
  });

  srv.Get("/api/events", [impl](const httplib::Request&, httplib::Response& res) {
    auto sub = impl->hub.subscribe();
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [sub](std::size_t, httplib::DataSink& sink) {
          if (auto frame = sub->next(std::chrono::milliseconds(250))) {
            const std::string out = "data: " + *frame + "\n\n";
            if (!sink.write(out.data(), out.size())) return false;
          } else if (sub->closed()) {
            sink.done();
            return true;
          }
          return sink.is_writable();
        },
        [impl, sub](bool) { impl->hub.unsubscribe(sub); });
  });

  if (impl_->assets) {
    srv.set_mount_point("/", impl_->assets->string());
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(std::string(builtin_index_html()), "text/html");
    });
  }
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::start(const std::string& host, int port) {
  auto& srv = impl_->server;
  int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
  if (bound < 0) return -1;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ApiServer::stop() {
  if (!impl_) return;
  impl_->hub.close();
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace nin::gateway
