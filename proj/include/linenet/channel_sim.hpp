#pragma once

// Slotted simulation of a line of erasure links.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "linenet/config.hpp"
#include "linenet/packet.hpp"
#include "linenet/receivers.hpp"
#include "linenet/rng.hpp"
#include "linenet/schemes.hpp"

#include <json.hpp>

namespace linenet {

struct SlotEvent {
  std::uint64_t slot = 0;
  std::uint32_t link = 0;              // link i joins node i and node i + 1
  std::optional<PacketId> sent;        // nullopt = NONE
  bool delivered = false;
  std::vector<std::uint32_t> node_memory_after;  // one entry per relay
};

struct RunTrace {
  NetworkConfig config;
  std::vector<SlotEvent> events;       // empty unless config.record_events
  std::optional<std::uint64_t> completion_slot;  // nullopt = TIMEOUT
  bool decode_success = false;
  std::uint64_t slots_run = 0;

  std::uint64_t received_at_destination = 0;
  std::vector<std::uint64_t> sent_per_link;
  std::vector<std::uint64_t> delivered_per_link;
  std::vector<std::uint32_t> peak_memory;  // per relay
  /// Relay memory right after the slot in which the source finished its
  /// schedule; only set for schemes whose source stops.
  std::optional<std::uint64_t> source_done_slot;
  std::vector<std::uint32_t> memory_at_source_done;
  std::uint64_t relay_xor_ops = 0;
  std::uint64_t decoder_ops = 0;
};

nlohmann::json to_json(const SlotEvent& e);
/// One SlotEvent per line.
void write_trace_jsonl(const RunTrace& trace, std::ostream& out);

/// Step-by-step driver. The constructor validates the configuration and
/// draws the source symbols.
class Simulation {
 public:
  explicit Simulation(NetworkConfig config);
  ~Simulation();

  /// Advances one slot and returns its events (one per link).
  std::vector<SlotEvent> step();

  bool finished() const { return done_; }
  std::uint64_t slot() const { return slot_; }
  const NetworkConfig& config() const { return trace_.config; }
  const std::vector<Payload>& source() const { return source_; }
  const Receiver& destination() const { return *dest_; }
  const NodeProcessor& node(NodeId i) const { return *nodes_.at(i); }

  /// Runs to completion, horizon or a dead chain and returns the trace.
  RunTrace run();

 private:
  RunTrace trace_;
  std::vector<Payload> source_;
  HeaderDirectory directory_;
  std::vector<std::unique_ptr<NodeProcessor>> nodes_;
  std::unique_ptr<Receiver> dest_;
  std::vector<Rng> link_rng_;
  std::uint64_t slot_ = 0;
  std::uint64_t horizon_ = 0;
  bool done_ = false;
};

RunTrace run(const NetworkConfig& config);

}  // namespace linenet
