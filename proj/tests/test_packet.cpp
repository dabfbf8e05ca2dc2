#include <doctest.h>

#include <stdexcept>

#include <functional>
#include <vector>

#include "linenet/fountain.hpp"
#include "linenet/packet.hpp"
#include "linenet/receivers.hpp"
#include "linenet/rng.hpp"

using namespace linenet;

TEST_CASE("packet JSON round-trip") {
  PacketHeader h;
  h.id = {3, 41};
  h.space = Space::kReception;
  h.incidence = {0, 5, 9};
  h.coefficients = {1, 200, 7};
  auto p = make_packet(h, {0x00, 0xab, 0xff});
  auto j = to_json(*p);
  CHECK(j["space"] == "reception");
  auto back = packet_from_json(j);
  CHECK(back.header->id == h.id);
  CHECK(back.header->space == h.space);
  CHECK(back.header->incidence == h.incidence);
  CHECK(back.header->coefficients == h.coefficients);
  CHECK(back.payload == p->payload);
  auto bad = j;
  bad["payload"] = "abc";
  CHECK_THROWS(packet_from_json(bad));
}

TEST_CASE("packet ids are ordered and keyed by origin") {
  PacketId a{1, 5}, b{2, 0};
  CHECK(a < b);
  CHECK(a.key() != b.key());
  CHECK(PacketId{1, 5}.key() == a.key());
}

namespace {

// Two relays: node 1 logs LT-coded source packets, node 2 logs coin
// combinations of node 1's log (reception space), and the destination gets
// coin combinations of node 2's log. Payloads are built by direct
// expansion so every decoder is checked against the source.
struct Layered {
  std::size_t k;
  std::vector<Payload> source;
  HeaderDirectory dir{3};
  std::vector<Payload> log1, log2;
  std::uint64_t seq = 0;

  Layered(std::size_t k_, Rng& rng) : k(k_), source(k_, Payload(2)) {
    for (auto& s : source)
      for (auto& b : s) b = static_cast<std::uint8_t>(rng.bits());
  }

  Payload xor_of(const std::vector<Payload>& pool, const std::vector<std::uint32_t>& idx) {
    Payload out(2, 0);
    for (auto i : idx) xor_into(out, pool[i]);
    return out;
  }

  void relay1_receives(Rng& rng, const fountain::DegreeDistribution& dist) {
    PacketHeader h;
    h.id = {0, seq++};
    h.incidence = fountain::sample_neighbors(k, std::min(dist.sample(rng), k), rng);
    log1.push_back(xor_of(source, h.incidence));
    dir.record(1, std::make_shared<const PacketHeader>(h));
  }

  std::vector<std::uint32_t> coins(std::size_t n, Rng& rng) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < n; ++i)
      if (rng.coin()) out.push_back(i);
    return out;
  }

  bool relay2_receives(Rng& rng) {
    auto c = coins(log1.size(), rng);
    if (c.empty()) return false;
    PacketHeader h;
    h.id = {1, seq++};
    h.space = Space::kReception;
    h.incidence = c;
    log2.push_back(xor_of(log1, c));
    dir.record(2, std::make_shared<const PacketHeader>(h));
    return true;
  }

  PacketPtr to_destination(Rng& rng) {
    auto c = coins(log2.size(), rng);
    if (c.empty()) return nullptr;
    PacketHeader h;
    h.id = {2, seq++};
    h.space = Space::kReception;
    h.incidence = c;
    return make_packet(h, xor_of(log2, c));
  }
};

}  // namespace

TEST_CASE("dense and layered receivers decode nested reception-space packets") {
  Rng rng(31);
  const std::size_t k = 150;
  auto dist = fountain::robust_soliton(k);
  for (int t = 0; t < 5; ++t) {
    Layered net(k, rng);
    DenseReceiver dense(k, 2, net.dir);
    LayeredReceiver layered(k, 2, net.dir);
    std::size_t sent = 0;
    while (!(dense.complete() && layered.complete()) && sent < 3 * k) {
      net.relay1_receives(rng, dist);
      net.relay2_receives(rng);
      if (auto p = net.to_destination(rng)) {
        dense.receive(*p);
        layered.receive(*p);
        ++sent;
        dense.try_decode();
        layered.try_decode();
        CHECK(dense.received() == sent);
      }
    }
    REQUIRE(dense.complete());
    REQUIRE(layered.complete());
    CHECK(dense.symbols() == net.source);
    CHECK(layered.symbols() == net.source);
  }
}

TEST_CASE("dense receiver mixes source-space and reception-space packets") {
  Rng rng(32);
  const std::size_t k = 200;
  auto dist = fountain::robust_soliton(k);
  Layered net(k, rng);
  DenseReceiver dense(k, 2, net.dir);
  std::size_t n = 0;
  while (!dense.complete() && n < 4 * k) {
    net.relay1_receives(rng, dist);
    net.relay2_receives(rng);
    if (rng.coin()) {
      if (auto p = net.to_destination(rng)) dense.receive(*p);
    } else {
      PacketHeader h;
      h.id = {0, net.seq++};
      h.incidence = fountain::sample_neighbors(k, 1 + rng.uniform(3), rng);
      dense.receive(*make_packet(h, net.xor_of(net.source, h.incidence)));
    }
    ++n;
    if (n >= k) dense.try_decode();
  }
  REQUIRE(dense.complete());
  CHECK(dense.symbols() == net.source);
}

TEST_CASE("fewer than k packets never decode") {
  Rng rng(33);
  const std::size_t k = 64;
  HeaderDirectory dir(1);
  DenseReceiver dense(k, 1, dir);
  LayeredReceiver layered(k, 1, dir);
  for (std::uint32_t i = 0; i + 1 < k; ++i) {
    PacketHeader h;
    h.id = {0, i};
    h.incidence = {i};
    auto p = make_packet(h, {static_cast<std::uint8_t>(i)});
    dense.receive(*p);
    layered.receive(*p);
    CHECK_FALSE(dense.try_decode());
    CHECK_FALSE(layered.try_decode());
  }
  CHECK(layered.recovered() == k - 1);
}
