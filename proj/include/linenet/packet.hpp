#pragma once

// Coded packets and the header bookkeeping shared by the nodes of a line.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

namespace linenet {

using NodeId = std::uint32_t;
using Payload = std::vector<std::uint8_t>;

struct PacketId {
  NodeId origin = 0;
  std::uint64_t seq = 0;

  auto operator<=>(const PacketId&) const = default;
  std::uint64_t key() const { return (static_cast<std::uint64_t>(origin) << 48) ^ seq; }
};

/// What the indices of a header refer to: source symbols, or positions in
/// the reception log of the originating node.
enum class Space : std::uint8_t { kSource, kReception };

struct PacketHeader {
  PacketId id;
  Space space = Space::kSource;
  std::vector<std::uint32_t> incidence;     // ascending
  std::vector<std::uint8_t> coefficients;   // GF(256), parallel to incidence; empty means all ones
};

using HeaderPtr = std::shared_ptr<const PacketHeader>;

struct Packet {
  HeaderPtr header;
  Payload payload;
};

using PacketPtr = std::shared_ptr<const Packet>;

PacketPtr make_packet(PacketHeader header, Payload payload);

void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src);

/// Wire form: {"origin", "seq", "space", "incidence", ["coefficients"], "payload" (hex)}.
nlohmann::json to_json(const Packet& p);
Packet packet_from_json(const nlohmann::json& j);

/// Per-node reception logs of packet headers, in arrival order. A header in
/// Space::kReception with origin n refers to entries of log n.
class HeaderDirectory {
 public:
  explicit HeaderDirectory(std::size_t nodes) : logs_(nodes) {}

  void record(NodeId node, HeaderPtr header) { logs_.at(node).push_back(std::move(header)); }
  const PacketHeader& at(NodeId node, std::uint32_t position) const { return *logs_[node][position]; }
  std::size_t received(NodeId node) const { return logs_[node].size(); }

 private:
  std::vector<std::vector<HeaderPtr>> logs_;
};

}  // namespace linenet
