#include "linenet/schemes.hpp"

#include <bit>
#include <deque>
#include <stdexcept>

#include "linenet/fountain.hpp"
#include "linenet/gf256.hpp"

namespace linenet {

namespace {

PacketPtr source_packet(NodeId origin, std::uint64_t seq, fountain::EncodedSymbol sym) {
  PacketHeader h;
  h.id = {origin, seq};
  h.space = Space::kSource;
  h.incidence = std::move(sym.neighbors);
  return make_packet(std::move(h), std::move(sym.payload));
}

// Endless LT stream, or the first `limit` symbols of one.
class LtSource final : public NodeProcessor {
 public:
  LtSource(const NetworkConfig& cfg, std::span<const Payload> source, Rng rng, std::uint64_t limit)
      : source_(source),
        dist_(fountain::robust_soliton(cfg.k, cfg.params.lt_c, cfg.params.lt_delta)),
        rng_(rng),
        limit_(limit) {}

  PacketPtr emit(std::uint64_t) override {
    if (seq_ >= limit_) return nullptr;
    return source_packet(0, seq_++, fountain::lt_encode_next(source_, dist_, rng_));
  }
  bool idle() const override { return seq_ >= limit_; }

 private:
  std::span<const Payload> source_;
  fountain::DegreeDistribution dist_;
  Rng rng_;
  std::uint64_t limit_;
  std::uint64_t seq_ = 0;
};

// Uncoded source symbols, each repeated until acknowledged.
class ArqSource final : public NodeProcessor {
 public:
  explicit ArqSource(std::span<const Payload> source) : source_(source) {}

  PacketPtr emit(std::uint64_t) override {
    if (next_ >= source_.size()) return nullptr;
    if (!current_) {
      PacketHeader h;
      h.id = {0, next_};
      h.incidence = {static_cast<std::uint32_t>(next_)};
      current_ = make_packet(std::move(h), source_[next_]);
    }
    return current_;
  }
  void feedback(bool delivered) override {
    if (delivered) {
      ++next_;
      current_.reset();
    }
  }
  bool idle() const override { return next_ >= source_.size(); }

 private:
  std::span<const Payload> source_;
  std::size_t next_ = 0;
  PacketPtr current_;
};

// Dense random combinations over the order-q subfield of GF(256).
class FieldSource final : public NodeProcessor {
 public:
  FieldSource(const NetworkConfig& cfg, std::span<const Payload> source, Rng rng)
      : source_(source), q_(cfg.params.q), pb_(cfg.payload_size), rng_(rng) {}

  PacketPtr emit(std::uint64_t) override {
    const auto& f = gf256::Field::instance();
    PacketHeader h;
    h.id = {0, seq_++};
    Payload payload(pb_, 0);
    for (std::uint32_t i = 0; i < source_.size(); ++i) {
      gf256::Element c = gf256::random_element(q_, rng_);
      if (c == 0) continue;
      h.incidence.push_back(i);
      h.coefficients.push_back(c);
      f.mul_add(payload, source_[i], c);
    }
    if (h.incidence.empty()) return nullptr;
    return make_packet(std::move(h), std::move(payload));
  }
  bool idle() const override { return false; }

 private:
  std::span<const Payload> source_;
  unsigned q_;
  std::size_t pb_;
  Rng rng_;
  std::uint64_t seq_ = 0;
};

// Store-and-forward relay; with feedback it holds the head packet until
// the next hop acknowledges it.
class ForwardRelay final : public NodeProcessor {
 public:
  explicit ForwardRelay(bool arq) : arq_(arq) {}

  PacketPtr emit(std::uint64_t) override {
    if (queue_.empty()) return nullptr;
    PacketPtr p = queue_.front();
    if (!arq_) queue_.pop_front();
    return p;
  }
  void receive(const PacketPtr& packet, std::uint64_t) override { queue_.push_back(packet); }
  void feedback(bool delivered) override {
    if (arq_ && delivered) queue_.pop_front();
  }
  std::size_t memory() const override { return queue_.size(); }
  bool idle() const override { return queue_.empty(); }

 private:
  bool arq_;
  std::deque<PacketPtr> queue_;
};

// Forwards until it can decode, then sends its own LT stream.
class DecodeRelay final : public NodeProcessor {
 public:
  DecodeRelay(const NetworkConfig& cfg, NodeId node, const HeaderDirectory& dir, Rng rng)
      : node_(node),
        k_(cfg.k),
        decoder_(cfg.k, cfg.payload_size, dir),
        dist_(fountain::robust_soliton(cfg.k, cfg.params.lt_c, cfg.params.lt_delta)),
        rng_(rng) {}

  PacketPtr emit(std::uint64_t) override {
    if (!decoded_.empty())
      return source_packet(node_, seq_++, fountain::lt_encode_next(decoded_, dist_, rng_));
    if (queue_.empty()) return nullptr;
    PacketPtr p = queue_.front();
    queue_.pop_front();
    return p;
  }
  void receive(const PacketPtr& packet, std::uint64_t) override {
    if (!decoded_.empty()) return;
    queue_.push_back(packet);
    decoder_.receive(*packet);
  }
  void end_slot(std::uint64_t) override {
    if (decoded_.empty() && decoder_.try_decode()) {
      decoded_ = decoder_.symbols();
      queue_.clear();
    }
  }
  std::size_t memory() const override { return decoded_.empty() ? decoder_.received() : k_; }
  bool idle() const override { return decoded_.empty() && queue_.empty(); }
  std::uint64_t xor_ops() const override { return decoder_.ops(); }

 private:
  NodeId node_;
  std::size_t k_;
  LayeredReceiver decoder_;
  fountain::DegreeDistribution dist_;
  Rng rng_;
  std::deque<PacketPtr> queue_;
  std::vector<Payload> decoded_;
  std::uint64_t seq_ = 0;
};

// Forwards everything it hears while folding each arrival into a fixed set
// of parity accumulators; once the upstream schedule is over it sends the
// parities.
class SystematicRelay final : public NodeProcessor {
 public:
  SystematicRelay(const NetworkConfig& cfg, NodeId node, Rng rng)
      : node_(node),
        upstream_end_(systematic_schedule_end(cfg, node - 1)),
        positions_(systematic_positions(cfg, node)),
        sparse_(cfg.scheme == SchemeId::kSystematicSparse),
        rng_(rng) {
    const double eps = cfg.links[node].epsilon;
    const std::size_t m = systematic_parity_count(cfg.k, eps);
    if (sparse_) {
      density_ = sparse_parity_density(cfg.k, eps, cfg.params.delta);
    } else {
      auto dist = fountain::default_parity_distribution(positions_, m, cfg.params.lt_c, cfg.params.lt_delta);
      members_.resize(positions_);
      auto rows = fountain::parity_structure(positions_, m, dist, rng_);
      for (std::uint32_t i = 0; i < rows.size(); ++i)
        for (auto pos : rows[i]) members_[pos].push_back(i);
    }
    acc_.assign(m, Payload(cfg.payload_size, 0));
    incidence_.resize(m);
  }

  PacketPtr emit(std::uint64_t slot) override {
    if (!queue_.empty()) {
      PacketPtr p = queue_.front();
      queue_.pop_front();
      return p;
    }
    if (slot <= upstream_end_ || next_parity_ >= acc_.size()) return nullptr;
    const std::size_t i = next_parity_++;
    PacketHeader h;
    h.id = {node_, i};
    h.space = Space::kReception;
    h.incidence = std::move(incidence_[i]);
    Payload payload = std::move(acc_[i]);
    return make_packet(std::move(h), std::move(payload));
  }

  void receive(const PacketPtr& packet, std::uint64_t) override {
    queue_.push_back(packet);
    const auto pos = static_cast<std::uint32_t>(received_++);
    if (pos >= positions_) throw std::logic_error("systematic relay: more arrivals than scheduled");
    auto add = [&](std::size_t i) {
      xor_into(acc_[i], packet->payload);
      incidence_[i].push_back(pos);
      ++xor_ops_;
    };
    if (sparse_) {
      for (std::uint64_t i = rng_.geometric(density_); i < acc_.size(); i += 1 + rng_.geometric(density_))
        add(i);
    } else {
      for (auto i : members_[pos]) add(i);
    }
  }

  std::size_t memory() const override { return queue_.size() + (acc_.size() - next_parity_); }
  bool idle() const override { return queue_.empty() && next_parity_ >= acc_.size(); }
  std::uint64_t xor_ops() const override { return xor_ops_; }

 private:
  NodeId node_;
  std::uint64_t upstream_end_;
  std::size_t positions_;
  bool sparse_;
  double density_ = 0.0;
  Rng rng_;
  std::vector<std::vector<std::uint32_t>> members_;  // position -> parity rows
  std::vector<Payload> acc_;
  std::vector<std::vector<std::uint32_t>> incidence_;
  std::deque<PacketPtr> queue_;
  std::size_t received_ = 0;
  std::size_t next_parity_ = 0;
  std::uint64_t xor_ops_ = 0;
};

// Keeps every packet and sends a random combination of all of them:
// fair-coin XOR, or uniform coefficients in the order-q subfield.
class MixingRelay final : public NodeProcessor {
 public:
  MixingRelay(const NetworkConfig& cfg, NodeId node, Rng rng, bool field)
      : node_(node), pb_(cfg.payload_size), q_(cfg.params.q), field_(field), rng_(rng) {}

  PacketPtr emit(std::uint64_t) override {
    PacketHeader h;
    h.space = Space::kReception;
    Payload payload(pb_, 0);
    const std::size_t n = count_;
    if (field_) {
      const auto& f = gf256::Field::instance();
      for (std::uint32_t i = 0; i < n; ++i) {
        gf256::Element c = gf256::random_element(q_, rng_);
        if (c == 0) continue;
        h.incidence.push_back(i);
        h.coefficients.push_back(c);
        f.mul_add(payload, {pool_.data() + std::size_t{i} * pb_, pb_}, c);
      }
    } else {
      // One fair coin per buffered packet, 64 at a time.
      h.incidence.reserve(n / 2 + 64);
      for (std::size_t base = 0; base < n; base += 64) {
        std::uint64_t coins = rng_.bits();
        if (n - base < 64) coins &= (std::uint64_t{1} << (n - base)) - 1;
        for (; coins; coins &= coins - 1) {
          auto i = static_cast<std::uint32_t>(base + static_cast<std::size_t>(std::countr_zero(coins)));
          h.incidence.push_back(i);
          const std::uint8_t* src = pool_.data() + std::size_t{i} * pb_;
          for (std::size_t b = 0; b < pb_; ++b) payload[b] ^= src[b];
        }
      }
    }
    xor_ops_ += h.incidence.size();
    if (h.incidence.empty()) return nullptr;
    h.id = {node_, seq_++};
    return make_packet(std::move(h), std::move(payload));
  }
  void receive(const PacketPtr& packet, std::uint64_t) override {
    pool_.insert(pool_.end(), packet->payload.begin(), packet->payload.end());
    ++count_;
  }
  std::size_t memory() const override { return count_; }
  bool idle() const override { return count_ == 0; }
  std::uint64_t xor_ops() const override { return xor_ops_; }

 private:
  NodeId node_;
  std::size_t pb_;
  unsigned q_;
  bool field_;
  Rng rng_;
  std::vector<std::uint8_t> pool_;  // received payloads, back to back
  std::size_t count_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t xor_ops_ = 0;
};

bool systematic(SchemeId s) { return s == SchemeId::kSystematicFixed || s == SchemeId::kSystematicSparse; }

}  // namespace

std::uint64_t systematic_schedule_end(const NetworkConfig& cfg, NodeId node) {
  std::uint64_t end = systematic_source_count(cfg.k, cfg.links.at(0).epsilon, cfg.params.systematic_margin);
  for (NodeId j = 1; j <= node; ++j) end += 1 + systematic_parity_count(cfg.k, cfg.links.at(j).epsilon);
  return end;
}

std::size_t systematic_positions(const NetworkConfig& cfg, NodeId node) {
  std::size_t n = systematic_source_count(cfg.k, cfg.links.at(0).epsilon, cfg.params.systematic_margin);
  for (NodeId j = 1; j < node; ++j) n += systematic_parity_count(cfg.k, cfg.links.at(j).epsilon);
  return n;
}

std::unique_ptr<NodeProcessor> make_node(const NetworkConfig& cfg, NodeId node, std::span<const Payload> source,
                                         const HeaderDirectory& dir, Rng rng) {
  if (node >= cfg.hops()) throw std::out_of_range("make_node: node is not a sender");
  if (systematic(cfg.scheme) && cfg.links[0].epsilon >= 1.0)
    throw ConfigError("systematic schemes need eps < 1 on every link");
  if (node == 0) {
    switch (cfg.scheme) {
      case SchemeId::kFeedbackOptimal:
        return std::make_unique<ArqSource>(source);
      case SchemeId::kGfqDense:
        if (!gf256::supported_order(cfg.params.q)) throw ConfigError("q must be one of 2, 4, 16, 256");
        return std::make_unique<FieldSource>(cfg, source, rng);
      case SchemeId::kSystematicFixed:
      case SchemeId::kSystematicSparse:
        return std::make_unique<LtSource>(cfg, source, rng, systematic_schedule_end(cfg, 0));
      default:
        return std::make_unique<LtSource>(cfg, source, rng, UINT64_MAX);
    }
  }
  switch (cfg.scheme) {
    case SchemeId::kForwardOnly:
      return std::make_unique<ForwardRelay>(false);
    case SchemeId::kFeedbackOptimal:
      return std::make_unique<ForwardRelay>(true);
    case SchemeId::kDecodeReencode:
      return std::make_unique<DecodeRelay>(cfg, node, dir, rng);
    case SchemeId::kSystematicFixed:
    case SchemeId::kSystematicSparse:
      if (cfg.links[node].epsilon >= 1.0) throw ConfigError("systematic schemes need eps < 1 on every link");
      return std::make_unique<SystematicRelay>(cfg, node, rng);
    case SchemeId::kGreedyRandom:
      return std::make_unique<MixingRelay>(cfg, node, rng, false);
    case SchemeId::kGfqDense:
      return std::make_unique<MixingRelay>(cfg, node, rng, true);
  }
  throw std::logic_error("make_node: unknown scheme");
}

std::unique_ptr<Receiver> make_destination(const NetworkConfig& cfg, const HeaderDirectory& dir) {
  switch (cfg.scheme) {
    case SchemeId::kGreedyRandom:
      return std::make_unique<DenseReceiver>(cfg.k, cfg.payload_size, dir);
    case SchemeId::kGfqDense:
      return std::make_unique<FieldReceiver>(cfg.k, cfg.payload_size, dir);
    default:
      return std::make_unique<LayeredReceiver>(cfg.k, cfg.payload_size, dir);
  }
}

}  // namespace linenet
