#pragma once

// Decoders for packets arriving at a node. Each one reconstructs the source
// symbols from packet headers (resolved through a HeaderDirectory) and
// payloads.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "linenet/eliminator.hpp"
#include "linenet/gf2.hpp"
#include "linenet/gf256.hpp"
#include "linenet/packet.hpp"
#include "linenet/sparse_system.hpp"

namespace linenet {

class Receiver {
 public:
  virtual ~Receiver() = default;

  virtual void receive(const Packet& packet) = 0;
  /// Attempts to finish decoding with what has arrived. True once complete.
  virtual bool try_decode() = 0;
  virtual bool complete() const = 0;
  /// Decoded source symbols; requires complete().
  virtual std::vector<Payload> symbols() const = 0;
  /// Payload XOR / row operations spent so far.
  virtual std::uint64_t ops() const = 0;

  std::size_t received() const { return received_; }

 protected:
  std::size_t received_ = 0;
};

/// Sparse decoder for XOR-coded packets. Unknowns are the k source symbols
/// plus one variable per packet that is referenced by a received header but
/// was never received itself; that variable is tied to its own header by a
/// definition equation. Peeling runs on every arrival and inactivation
/// decoding is tried once enough equations exist.
class LayeredReceiver final : public Receiver {
 public:
  LayeredReceiver(std::size_t k, std::size_t payload_bytes, const HeaderDirectory& directory);

  void receive(const Packet& packet) override;
  bool try_decode() override;
  bool complete() const override { return system_.complete(); }
  std::vector<Payload> symbols() const override;
  std::uint64_t ops() const override { return system_.xor_ops(); }

  /// Source symbols recovered so far.
  std::size_t recovered() const { return system_.resolved_targets(); }

 private:
  void expand(const PacketHeader& h, std::vector<std::uint32_t>& vars, Payload& constant);
  std::uint32_t variable_for(const PacketHeader& h);

  std::size_t k_;
  std::size_t pb_;
  const HeaderDirectory& dir_;
  gf2::SparseSystem system_;
  std::unordered_map<std::uint64_t, Payload> payloads_;
  std::unordered_map<std::uint64_t, std::uint32_t> vars_;
  bool dirty_ = false;
};

/// Dense GF(2) decoder: each header is expanded into its full coefficient
/// vector over the source symbols and fed to a batched eliminator.
class DenseReceiver final : public Receiver {
 public:
  DenseReceiver(std::size_t k, std::size_t payload_bytes, const HeaderDirectory& directory);

  void receive(const Packet& packet) override;
  bool try_decode() override;
  bool complete() const override { return eliminator_.full_rank(); }
  std::vector<Payload> symbols() const override { return eliminator_.solve(); }
  std::uint64_t ops() const override { return eliminator_.row_ops(); }

  std::size_t rank() const { return eliminator_.rank(); }

 private:
  // Source-space headers of one reception log, flattened for fast lookup.
  struct FlatLog {
    std::vector<std::uint32_t> start{0};
    std::vector<std::uint32_t> index;
    std::vector<std::uint8_t> nested;  // entry is itself a reception-space header
  };

  void accumulate(const PacketHeader& h, std::vector<std::uint64_t>& row);
  const std::vector<std::uint64_t>& composite(const PacketHeader& h);
  FlatLog& flat_log(NodeId node);
  // Builds the rows of all deferred packets, 64 at a time, and queues them
  // for elimination in arrival order.
  void materialize();

  static constexpr std::size_t kDeferred = 64;

  std::size_t k_;
  const HeaderDirectory& dir_;
  gf2::Eliminator eliminator_;
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> memo_;
  std::unordered_map<NodeId, FlatLog> flat_;
  std::vector<std::uint8_t> scratch_;
  std::vector<Packet> deferred_;
  std::vector<std::uint64_t> coins_;    // per log position, bit j = deferred packet j
  std::vector<std::uint64_t> columns_;  // per source column, bit j = deferred packet j
};

/// Dense GF(256) decoder for packets with explicit coefficients.
class FieldReceiver final : public Receiver {
 public:
  FieldReceiver(std::size_t k, std::size_t payload_bytes, const HeaderDirectory& directory);

  void receive(const Packet& packet) override;
  bool try_decode() override { return complete(); }
  bool complete() const override { return eliminator_.full_rank(); }
  std::vector<Payload> symbols() const override { return eliminator_.solve(); }
  std::uint64_t ops() const override { return eliminator_.row_ops(); }

  std::size_t rank() const { return eliminator_.rank(); }

 private:
  void accumulate(const PacketHeader& h, gf256::Element scale, std::vector<gf256::Element>& row);
  const std::vector<gf256::Element>& composite(const PacketHeader& h);

  std::size_t k_;
  const HeaderDirectory& dir_;
  gf256::Eliminator eliminator_;
  std::unordered_map<std::uint64_t, std::vector<gf256::Element>> memo_;
};

}  // namespace linenet
