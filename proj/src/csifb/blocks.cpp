#include "fbguard/csifb/blocks.hpp"

#include <algorithm>
#include <memory>

namespace fbguard::csifb {

namespace {

std::string indexed(const char* prefix, std::size_t i) { return prefix + std::to_string(i + 1); }

std::vector<std::string> names(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(indexed(prefix, i));
  return out;
}

std::vector<DataValue> gather(const fb::DispatchContext& ctx, std::size_t n) {
  std::vector<DataValue> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(ctx.in(indexed("SD_", i)));
  return out;
}

/// Decodes and type-checks a payload against the expected RD kinds.
std::optional<std::vector<DataValue>> accept(const fb::ServiceInput& input, const std::vector<DataKind>& kinds) {
  const auto* bytes = std::get_if<Bytes>(&input);
  if (!bytes) return std::nullopt;
  auto decoded = try_decode(*bytes);
  auto* values = std::get_if<std::vector<DataValue>>(&decoded);
  if (!values || values->size() != kinds.size()) return std::nullopt;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if ((*values)[i].kind() != kinds[i]) return std::nullopt;
  }
  return std::move(*values);
}

std::vector<fb::Assignment> rd_assignments(std::vector<DataValue> values) {
  std::vector<fb::Assignment> out{{"QO", true}};
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back({indexed("RD_", i), std::move(values[i])});
  return out;
}

std::optional<net::SocketAddress> parse_id(const DataValue& id) {
  return net::parse_socket_address(id.as_string());
}

Tick next_send_time(std::optional<Tick>& last, Tick now) {
  const Tick t = last ? std::max(now, *last + 1) : now;
  last = t;
  return t;
}

}  // namespace

void PublisherBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event == "INIT") {
    group_.reset();
    if (ctx.in("QI").as_bool()) group_ = parse_id(ctx.in("ID"));
    ctx.emit("INITO", {{"QO", group_.has_value()}});
    return;
  }
  if (event != "REQ") return;
  if (!group_) {
    ctx.emit("CNF", {{"QO", false}});
    return;
  }
  net::WirePacket packet{net::Protocol::Udp,
                         {platform_.transport->address_of(platform_.device), src_port_},
                         *group_,
                         encode(gather(ctx, arity_)),
                         next_send_time(last_send_, ctx.now())};
  ++sent_;
  ctx.defer([p = platform_, packet = std::move(packet)]() mutable { p.transport->send(p.device, std::move(packet)); });
  ctx.emit("CNF", {{"QO", true}});
}

void SubscriberBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event != "INIT") return;
  std::optional<net::SocketAddress> id;
  if (ctx.in("QI").as_bool()) id = parse_id(ctx.in("ID"));
  if (id && !bound_) {
    ctx.defer([p = platform_, inst = instance_, sa = *id] {
      if (net::is_multicast(sa.addr)) p.transport->join_group(sa.addr, {p.device, sa});
      p.transport->bind_udp(p.device, sa.port, [rt = p.runtime, inst](const net::WirePacket& w, Tick) {
        rt->service(inst, "RECV", w.payload);
      });
    });
  }
  if (id) bound_ = id;
  ctx.emit("INITO", {{"QO", id.has_value()}});
}

void SubscriberBehavior::on_service(std::string_view label, const fb::ServiceInput& input,
                                    fb::DispatchContext& ctx) {
  if (label != "RECV" || !bound_) return;
  auto values = accept(input, kinds_);
  if (!values) {
    ++malformed_;
    ctx.latch("QO", false);
    return;
  }
  ++accepted_;
  ctx.emit("IND", rd_assignments(std::move(*values)));
}

void ClientBehavior::send(fb::DispatchContext& ctx, net::Protocol proto, Bytes payload) {
  net::WirePacket packet{proto,
                         {platform_.transport->address_of(platform_.device), local_port_},
                         server_,
                         std::move(payload),
                         next_send_time(last_send_, ctx.now())};
  ctx.defer([p = platform_, packet = std::move(packet)]() mutable { p.transport->send(p.device, std::move(packet)); });
}

void ClientBehavior::send_syn(fb::DispatchContext& ctx) {
  attempts_.push_back(ctx.now());
  send(ctx, net::Protocol::TcpSyn, {});
  ctx.defer([p = platform_, inst = instance_, at = ctx.now() + retry_] {
    p.transport->scheduler().post(at, [rt = p.runtime, inst] { rt->service(inst, "RETRY"); });
  });
}

void ClientBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event == "INIT") {
    if (state_ != ClientState::Idle) {
      ctx.emit("INITO", {{"QO", state_ == ClientState::Established}});
      return;
    }
    auto id = ctx.in("QI").as_bool() ? parse_id(ctx.in("ID")) : std::nullopt;
    if (!id) {
      ctx.emit("INITO", {{"QO", false}});
      return;
    }
    server_ = *id;
    state_ = ClientState::Connecting;
    ctx.defer([p = platform_, inst = instance_, port = local_port_] {
      p.transport->bind_tcp_client(p.device, port, [rt = p.runtime, inst](const net::WirePacket& w, Tick) {
        rt->service(inst, w.proto == net::Protocol::TcpSynAck ? "SYNACK" : "DATA", w.payload);
      });
    });
    send_syn(ctx);
    return;
  }
  if (event != "REQ") return;
  Bytes payload = encode(gather(ctx, arity_));
  if (state_ == ClientState::Established) {
    send(ctx, net::Protocol::TcpData, std::move(payload));
    ctx.emit("CNF", {{"QO", true}});
    return;
  }
  if (state_ == ClientState::Connecting) pending_ = std::move(payload);
  ctx.emit("CNF", {{"QO", false}});
}

void ClientBehavior::on_service(std::string_view label, const fb::ServiceInput&, fb::DispatchContext& ctx) {
  if (label == "RETRY") {
    if (state_ == ClientState::Connecting) send_syn(ctx);
    return;
  }
  if (label != "SYNACK" || state_ != ClientState::Connecting) return;
  state_ = ClientState::Established;
  established_at_ = ctx.now();
  send(ctx, net::Protocol::TcpAck, {});
  ctx.emit("INITO", {{"QO", true}});
  if (pending_) {
    send(ctx, net::Protocol::TcpData, std::move(*pending_));
    pending_.reset();
    ctx.emit("CNF", {{"QO", true}});
  }
}

void ServerBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event != "INIT") return;
  std::optional<std::uint16_t> port;
  if (ctx.in("QI").as_bool()) {
    if (auto sa = parse_id(ctx.in("ID"))) port = sa->port;
  }
  if (port && !listening_) {
    listening_ = true;
    ctx.defer([p = platform_, inst = instance_, port = *port] {
      p.transport->listen_tcp(p.device, port, [rt = p.runtime, inst](const net::WirePacket& w, Tick) {
        rt->service(inst, "DATA", w.payload);
      });
    });
  }
  ctx.emit("INITO", {{"QO", port.has_value()}});
}

void ServerBehavior::on_service(std::string_view label, const fb::ServiceInput& input, fb::DispatchContext& ctx) {
  if (label != "DATA" || !listening_) return;
  auto values = accept(input, kinds_);
  if (!values) {
    ++malformed_;
    ctx.latch("QO", false);
    return;
  }
  ++accepted_;
  ctx.emit("IND", rd_assignments(std::move(*values)));
}

namespace {

std::vector<fb::PortSpec> ports(const char* prefix, bool sender, const std::vector<DataKind>& kinds) {
  using namespace fb;
  std::vector<PortSpec> out{
      event_in("INIT", {"QI", "ID"}),
      event_out("INITO", {"QO"}),
      data_in("QI", DataKind::Bool),
      data_in("ID", DataKind::String),
      data_out("QO", DataKind::Bool),
  };
  const auto data = names(prefix, kinds.size());
  if (sender) {
    out.push_back(event_in("REQ", data));
    out.push_back(event_out("CNF", {"QO"}));
    for (std::size_t i = 0; i < kinds.size(); ++i) out.push_back(data_in(data[i], kinds[i]));
  } else {
    auto with = data;
    with.insert(with.begin(), "QO");
    out.push_back(event_out("IND", with));
    for (std::size_t i = 0; i < kinds.size(); ++i) out.push_back(data_out(data[i], kinds[i]));
  }
  return out;
}

}  // namespace

fb::FBInstance make_publisher(std::string id, const std::vector<DataKind>& sd, Platform platform,
                              std::uint16_t src_port) {
  return {std::move(id), ports("SD_", true, sd), std::make_unique<PublisherBehavior>(platform, sd.size(), src_port)};
}

fb::FBInstance make_subscriber(std::string id, const std::vector<DataKind>& rd, Platform platform) {
  auto behavior = std::make_unique<SubscriberBehavior>(platform, id, rd);
  return {std::move(id), ports("RD_", false, rd), std::move(behavior)};
}

fb::FBInstance make_client(std::string id, const std::vector<DataKind>& sd, Platform platform,
                           std::uint16_t local_port, Tick retry) {
  auto behavior = std::make_unique<ClientBehavior>(platform, id, sd.size(), local_port, retry);
  return {std::move(id), ports("SD_", true, sd), std::move(behavior)};
}

fb::FBInstance make_server(std::string id, const std::vector<DataKind>& rd, Platform platform) {
  auto behavior = std::make_unique<ServerBehavior>(platform, id, rd);
  return {std::move(id), ports("RD_", false, rd), std::move(behavior)};
}

}  // namespace fbguard::csifb
