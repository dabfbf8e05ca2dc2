#pragma once

// Per-node packet processing rules of the coding schemes.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>

#include "linenet/config.hpp"
#include "linenet/packet.hpp"
#include "linenet/receivers.hpp"
#include "linenet/rng.hpp"

namespace linenet {

/// One node of the line. Each slot the simulator asks every node what to
/// send (emit) before any deliveries of that slot happen, so a packet
/// received in slot t can influence transmissions from slot t + 1 on.
class NodeProcessor {
 public:
  virtual ~NodeProcessor() = default;

  /// Packet to transmit in `slot`, or nullptr to stay silent.
  virtual PacketPtr emit(std::uint64_t slot) = 0;
  virtual void receive(const PacketPtr& /*packet*/, std::uint64_t /*slot*/) {}
  /// Whether this slot's transmission got through (feedback schemes only).
  virtual void feedback(bool /*delivered*/) {}
  virtual void end_slot(std::uint64_t /*slot*/) {}

  /// Payload buffers currently held.
  virtual std::size_t memory() const { return 0; }
  /// True when the node will never transmit again without new input.
  virtual bool idle() const = 0;
  virtual std::uint64_t xor_ops() const { return 0; }
};

/// Processor for node `node` (0 = source, 1..L-1 = relays). `source` holds
/// the k source symbols and is only read by the source node.
std::unique_ptr<NodeProcessor> make_node(const NetworkConfig& config, NodeId node,
                                         std::span<const Payload> source, const HeaderDirectory& directory,
                                         Rng rng);

/// Decoder used at the destination for the configured scheme.
std::unique_ptr<Receiver> make_destination(const NetworkConfig& config, const HeaderDirectory& directory);

/// Slot after which node `node` of a systematic scheme sends nothing more.
std::uint64_t systematic_schedule_end(const NetworkConfig& config, NodeId node);

/// Number of positions of node `node`'s reception log that a systematic
/// relay may see (upstream packets in total).
std::size_t systematic_positions(const NetworkConfig& config, NodeId node);

}  // namespace linenet
