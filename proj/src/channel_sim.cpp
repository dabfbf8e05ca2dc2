#include "linenet/channel_sim.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace linenet {

namespace {

// Stream keys under the master seed.
constexpr std::uint64_t kSourceData = 1;
constexpr std::uint64_t kNodeStream = 2;
constexpr std::uint64_t kLinkStream = 3;

std::vector<Payload> draw_source(const NetworkConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, kSourceData));
  std::vector<Payload> out(cfg.k, Payload(cfg.payload_size));
  for (auto& s : out)
    for (auto& b : s) b = static_cast<std::uint8_t>(rng.bits());
  return out;
}

}  // namespace

nlohmann::json to_json(const SlotEvent& e) {
  nlohmann::json j{{"slot", e.slot}, {"link", e.link}};
  if (e.sent)
    j["sent"] = {{"origin", e.sent->origin}, {"seq", e.sent->seq}};
  else
    j["sent"] = nullptr;
  j["delivered"] = e.delivered;
  j["node_memory_after"] = e.node_memory_after;
  return j;
}

void write_trace_jsonl(const RunTrace& trace, std::ostream& out) {
  for (const auto& e : trace.events) out << to_json(e).dump() << '\n';
}

Simulation::Simulation(NetworkConfig config) : directory_(config.hops()) {
  config.validate();
  const std::size_t hops = config.hops();
  trace_.config = std::move(config);
  const NetworkConfig& cfg = trace_.config;
  source_ = draw_source(cfg);
  for (NodeId i = 0; i < hops; ++i)
    nodes_.push_back(make_node(cfg, i, source_, directory_, Rng(derive_seed(cfg.seed, kNodeStream, i))));
  dest_ = make_destination(cfg, directory_);
  for (std::uint32_t i = 0; i < hops; ++i) link_rng_.emplace_back(derive_seed(cfg.seed, kLinkStream, i));
  horizon_ = cfg.effective_horizon();
  trace_.sent_per_link.assign(hops, 0);
  trace_.delivered_per_link.assign(hops, 0);
  trace_.peak_memory.assign(hops - 1, 0);
}

Simulation::~Simulation() = default;

std::vector<SlotEvent> Simulation::step() {
  if (done_) throw std::logic_error("Simulation::step: already finished");
  const NetworkConfig& cfg = trace_.config;
  const std::size_t hops = cfg.hops();
  const std::uint64_t t = ++slot_;

  std::vector<PacketPtr> offered(hops);
  for (std::size_t i = 0; i < hops; ++i) offered[i] = nodes_[i]->emit(t);

  std::vector<SlotEvent> events(hops);
  bool destination_heard = false;
  for (std::uint32_t i = 0; i < hops; ++i) {
    // Every link draws every slot so its erasure pattern does not depend on
    // the traffic.
    const bool erased = link_rng_[i].unit() < cfg.links[i].epsilon;
    SlotEvent& ev = events[i];
    ev.slot = t;
    ev.link = i;
    if (!offered[i]) continue;
    ev.sent = offered[i]->header->id;
    ev.delivered = !erased;
    ++trace_.sent_per_link[i];
    if (erased) continue;
    ++trace_.delivered_per_link[i];
    if (i + 1 < hops) {
      directory_.record(i + 1, offered[i]->header);
      nodes_[i + 1]->receive(offered[i], t);
    } else {
      dest_->receive(*offered[i]);
      destination_heard = true;
    }
  }
  if (scheme_uses_feedback(cfg.scheme))
    for (std::size_t i = 0; i < hops; ++i)
      if (offered[i]) nodes_[i]->feedback(events[i].delivered);
  for (std::size_t i = 1; i < hops; ++i) nodes_[i]->end_slot(t);

  const bool success = destination_heard && dest_->try_decode();

  std::vector<std::uint32_t> memory(hops - 1);
  for (std::size_t i = 1; i < hops; ++i) {
    memory[i - 1] = static_cast<std::uint32_t>(nodes_[i]->memory());
    trace_.peak_memory[i - 1] = std::max(trace_.peak_memory[i - 1], memory[i - 1]);
  }
  for (auto& ev : events) ev.node_memory_after = memory;
  if (!trace_.source_done_slot && nodes_[0]->idle()) {
    trace_.source_done_slot = t;
    trace_.memory_at_source_done = memory;
  }

  trace_.slots_run = t;
  trace_.received_at_destination = dest_->received();
  if (success) {
    auto decoded = dest_->symbols();
    if (decoded != source_) throw std::logic_error("decoder output differs from the source symbols");
    trace_.decode_success = true;
    trace_.completion_slot = t;
    done_ = true;
  } else if (t >= horizon_) {
    done_ = true;
  } else if (std::all_of(nodes_.begin(), nodes_.end(), [](const auto& n) { return n->idle(); }) &&
             !dest_->try_decode()) {
    done_ = true;  // nothing left in flight and nothing will ever be sent
  }
  if (done_) {
    std::uint64_t ops = 0;
    for (const auto& n : nodes_) ops += n->xor_ops();
    trace_.relay_xor_ops = ops;
    trace_.decoder_ops = dest_->ops();
  }
  if (cfg.record_events) trace_.events.insert(trace_.events.end(), events.begin(), events.end());
  return events;
}

RunTrace Simulation::run() {
  while (!done_) step();
  return std::move(trace_);
}

RunTrace run(const NetworkConfig& config) { return Simulation(config).run(); }

}  // namespace linenet
