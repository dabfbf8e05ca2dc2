#include "linenet/receivers.hpp"

#include <algorithm>
#include <stdexcept>

namespace linenet {

LayeredReceiver::LayeredReceiver(std::size_t k, std::size_t payload_bytes, const HeaderDirectory& directory)
    : k_(k), pb_(payload_bytes), dir_(directory), system_(k, payload_bytes) {}

void LayeredReceiver::expand(const PacketHeader& h, std::vector<std::uint32_t>& vars, Payload& constant) {
  if (!h.coefficients.empty()) throw std::logic_error("LayeredReceiver: packet carries field coefficients");
  if (h.space == Space::kSource) {
    vars.insert(vars.end(), h.incidence.begin(), h.incidence.end());
    return;
  }
  for (auto pos : h.incidence) {
    const PacketHeader& ref = dir_.at(h.id.origin, pos);
    auto it = payloads_.find(ref.id.key());
    if (it != payloads_.end())
      xor_into(constant, it->second);
    else
      vars.push_back(variable_for(ref));
  }
}

std::uint32_t LayeredReceiver::variable_for(const PacketHeader& h) {
  auto it = vars_.find(h.id.key());
  if (it != vars_.end()) return it->second;
  std::uint32_t v = system_.add_variable();
  vars_.emplace(h.id.key(), v);
  std::vector<std::uint32_t> def;
  Payload constant(pb_, 0);
  expand(h, def, constant);
  def.push_back(v);
  system_.add_equation(def, constant);
  return v;
}

void LayeredReceiver::receive(const Packet& packet) {
  ++received_;
  dirty_ = true;
  const PacketHeader& h = *packet.header;
  const auto key = h.id.key();
  if (payloads_.contains(key)) return;  // duplicate copy adds nothing
  payloads_.emplace(key, packet.payload);
  auto it = vars_.find(key);
  if (it != vars_.end()) {
    std::uint32_t v = it->second;
    system_.add_equation({&v, 1}, packet.payload);
    return;
  }
  std::vector<std::uint32_t> vars;
  Payload rhs = packet.payload;
  expand(h, vars, rhs);
  system_.add_equation(vars, rhs);
}

bool LayeredReceiver::try_decode() {
  if (system_.complete()) return true;
  if (!dirty_ || system_.residual_surplus() < 0) return false;
  dirty_ = false;
  return system_.solve_residual() && system_.complete();
}

std::vector<Payload> LayeredReceiver::symbols() const {
  if (!complete()) throw std::logic_error("LayeredReceiver: not complete");
  std::vector<Payload> out(k_);
  for (std::uint32_t i = 0; i < k_; ++i) {
    auto v = system_.value(i);
    out[i].assign(v.begin(), v.end());
  }
  return out;
}

DenseReceiver::DenseReceiver(std::size_t k, std::size_t payload_bytes, const HeaderDirectory& directory)
    : k_(k), dir_(directory), eliminator_(k, payload_bytes) {}

DenseReceiver::FlatLog& DenseReceiver::flat_log(NodeId node) {
  FlatLog& log = flat_[node];
  for (std::size_t pos = log.nested.size(); pos < dir_.received(node); ++pos) {
    const PacketHeader& ref = dir_.at(node, static_cast<std::uint32_t>(pos));
    const bool nested = ref.space != Space::kSource;
    if (!nested) log.index.insert(log.index.end(), ref.incidence.begin(), ref.incidence.end());
    log.nested.push_back(nested);
    log.start.push_back(static_cast<std::uint32_t>(log.index.size()));
  }
  return log;
}

void DenseReceiver::accumulate(const PacketHeader& h, std::vector<std::uint64_t>& row) {
  if (!h.coefficients.empty()) throw std::logic_error("DenseReceiver: packet carries field coefficients");
  std::uint64_t* bits = row.data();
  if (h.space == Space::kSource) {
    for (auto i : h.incidence) bits[i / gf2::kWordBits] ^= std::uint64_t{1} << (i % gf2::kWordBits);
    return;
  }
  // Parities are gathered one byte per column, then packed into the row.
  scratch_.assign(row.size() * gf2::kWordBits, 0);
  std::uint8_t* parity = scratch_.data();
  const FlatLog& log = flat_log(h.id.origin);
  const std::uint32_t* idx = log.index.data();
  for (auto pos : h.incidence) {
    if (log.nested[pos]) {
      const auto& c = composite(dir_.at(h.id.origin, pos));
      for (std::size_t w = 0; w < row.size(); ++w) bits[w] ^= c[w];
      continue;
    }
    for (std::uint32_t j = log.start[pos], end = log.start[pos + 1]; j < end; ++j) parity[idx[j]] ^= 1;
  }
  for (std::size_t w = 0; w < row.size(); ++w) {
    std::uint64_t word = 0;
    const std::uint8_t* p = parity + w * gf2::kWordBits;
    for (std::size_t b = 0; b < gf2::kWordBits; ++b) word |= static_cast<std::uint64_t>(p[b]) << b;
    bits[w] ^= word;
  }
}

const std::vector<std::uint64_t>& DenseReceiver::composite(const PacketHeader& h) {
  auto it = memo_.find(h.id.key());
  if (it != memo_.end()) return it->second;
  std::vector<std::uint64_t> row(gf2::words_for(k_), 0);
  accumulate(h, row);
  return memo_.emplace(h.id.key(), std::move(row)).first->second;
}

void DenseReceiver::receive(const Packet& packet) {
  if (!packet.header->coefficients.empty())
    throw std::logic_error("DenseReceiver: packet carries field coefficients");
  ++received_;
  deferred_.push_back(packet);
  if (deferred_.size() == kDeferred) materialize();
}

namespace {

// In-place transpose of a 64 x 64 bit block: bit j of word i moves to bit i
// of word j.
void transpose64(std::uint64_t* a) {
  std::uint64_t mask = 0x00000000FFFFFFFFull;
  for (std::size_t width = 32; width != 0; width >>= 1, mask ^= mask << width) {
    for (std::size_t i = 0; i < 64; i = (i + width + 1) & ~width) {
      std::uint64_t t = ((a[i] >> width) ^ a[i + width]) & mask;
      a[i] ^= t << width;
      a[i + width] ^= t;
    }
  }
}

}  // namespace

void DenseReceiver::materialize() {
  if (deferred_.empty()) return;
  const std::size_t words = gf2::words_for(k_);
  const std::size_t n = deferred_.size();
  std::vector<std::vector<std::uint64_t>> rows(n, std::vector<std::uint64_t>(words, 0));
  columns_.assign(words * gf2::kWordBits, 0);
  bool any_columns = false;

  std::vector<NodeId> origins;
  for (const auto& p : deferred_)
    if (p.header->space == Space::kReception &&
        std::find(origins.begin(), origins.end(), p.header->id.origin) == origins.end())
      origins.push_back(p.header->id.origin);

  for (std::size_t j = 0; j < n; ++j)
    if (deferred_[j].header->space == Space::kSource) accumulate(*deferred_[j].header, rows[j]);

  for (NodeId origin : origins) {
    const FlatLog& log = flat_log(origin);
    coins_.assign(log.nested.size(), 0);
    std::size_t used = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const PacketHeader& h = *deferred_[j].header;
      if (h.space != Space::kReception || h.id.origin != origin) continue;
      for (auto pos : h.incidence) {
        if (log.nested[pos]) {
          const auto& c = composite(dir_.at(origin, pos));
          for (std::size_t w = 0; w < words; ++w) rows[j][w] ^= c[w];
          continue;
        }
        coins_[pos] |= std::uint64_t{1} << j;
        used = std::max<std::size_t>(used, pos + 1);
      }
    }
    const std::uint32_t* idx = log.index.data();
    for (std::size_t pos = 0; pos < used; ++pos) {
      const std::uint64_t c = coins_[pos];
      if (!c) continue;
      any_columns = true;
      for (std::uint32_t e = log.start[pos], end = log.start[pos + 1]; e < end; ++e) columns_[idx[e]] ^= c;
    }
  }

  if (any_columns) {
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t* block = columns_.data() + w * gf2::kWordBits;
      transpose64(block);
      for (std::size_t j = 0; j < n; ++j) rows[j][w] ^= block[j];
    }
  }
  for (std::size_t j = 0; j < n; ++j) eliminator_.enqueue(rows[j], deferred_[j].payload);
  deferred_.clear();
}

bool DenseReceiver::try_decode() {
  if (received_ < k_) return false;
  materialize();
  if (eliminator_.pending() > 0) eliminator_.flush();
  return eliminator_.full_rank();
}

FieldReceiver::FieldReceiver(std::size_t k, std::size_t payload_bytes, const HeaderDirectory& directory)
    : k_(k), dir_(directory), eliminator_(k, payload_bytes) {}

void FieldReceiver::accumulate(const PacketHeader& h, gf256::Element scale, std::vector<gf256::Element>& row) {
  const auto& f = gf256::Field::instance();
  const bool ones = h.coefficients.empty();
  if (h.space == Space::kSource) {
    for (std::size_t j = 0; j < h.incidence.size(); ++j)
      row[h.incidence[j]] ^= f.mul(scale, ones ? 1 : h.coefficients[j]);
    return;
  }
  for (std::size_t j = 0; j < h.incidence.size(); ++j) {
    const PacketHeader& ref = dir_.at(h.id.origin, h.incidence[j]);
    gf256::Element c = f.mul(scale, ones ? 1 : h.coefficients[j]);
    if (ref.space == Space::kSource)
      accumulate(ref, c, row);
    else
      f.mul_add(row, composite(ref), c);
  }
}

const std::vector<gf256::Element>& FieldReceiver::composite(const PacketHeader& h) {
  auto it = memo_.find(h.id.key());
  if (it != memo_.end()) return it->second;
  std::vector<gf256::Element> row(k_, 0);
  accumulate(h, 1, row);
  return memo_.emplace(h.id.key(), std::move(row)).first->second;
}

void FieldReceiver::receive(const Packet& packet) {
  ++received_;
  std::vector<gf256::Element> row(k_, 0);
  accumulate(*packet.header, 1, row);
  eliminator_.insert(row, packet.payload);
}

}  // namespace linenet
