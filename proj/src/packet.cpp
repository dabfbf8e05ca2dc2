#include "linenet/packet.hpp"

#include <stdexcept>
#include <string>

namespace linenet {

PacketPtr make_packet(PacketHeader header, Payload payload) {
  auto p = std::make_shared<Packet>();
  p->header = std::make_shared<const PacketHeader>(std::move(header));
  p->payload = std::move(payload);
  return p;
}

void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string to_hex(std::span<const std::uint8_t> bytes) {
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 15]);
  }
  return s;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("bad hex digit in payload");
}

}  // namespace

nlohmann::json to_json(const Packet& p) {
  const auto& h = *p.header;
  nlohmann::json j{{"origin", h.id.origin},
                   {"seq", h.id.seq},
                   {"space", h.space == Space::kSource ? "source" : "reception"},
                   {"incidence", h.incidence}};
  if (!h.coefficients.empty()) j["coefficients"] = h.coefficients;
  j["payload"] = to_hex(p.payload);
  return j;
}

Packet packet_from_json(const nlohmann::json& j) {
  PacketHeader h;
  h.id.origin = j.at("origin").get<NodeId>();
  h.id.seq = j.at("seq").get<std::uint64_t>();
  h.space = j.at("space").get<std::string>() == "source" ? Space::kSource : Space::kReception;
  h.incidence = j.at("incidence").get<std::vector<std::uint32_t>>();
  if (j.contains("coefficients")) h.coefficients = j["coefficients"].get<std::vector<std::uint8_t>>();
  const auto hex = j.at("payload").get<std::string>();
  if (hex.size() % 2) throw std::invalid_argument("odd-length hex payload");
  Payload payload(hex.size() / 2);
  for (std::size_t i = 0; i < payload.size(); ++i)
    payload[i] = static_cast<std::uint8_t>(hex_digit(hex[2 * i]) << 4 | hex_digit(hex[2 * i + 1]));
  return {std::make_shared<const PacketHeader>(std::move(h)), std::move(payload)};
}

}  // namespace linenet
