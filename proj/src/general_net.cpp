#include "linenet/general_net.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace linenet {

void ErasureDag::validate() const {
  if (nodes == 0) throw ConfigError("DAG has no nodes");
  if (source >= nodes || sink >= nodes) throw ConfigError("source or sink out of range");
  if (source == sink) throw ConfigError("source equals sink");
  std::vector<std::uint32_t> indeg(nodes, 0);
  for (const auto& e : edges) {
    if (e.from >= nodes || e.to >= nodes) throw ConfigError("edge endpoint out of range");
    if (e.from == e.to) throw ConfigError("self-loop");
    if (!(e.epsilon >= 0.0 && e.epsilon <= 1.0)) throw ConfigError("edge epsilon must be in [0, 1]");
    if (e.to == source) throw ConfigError("source has an in-edge");
    if (e.from == sink) throw ConfigError("sink has an out-edge");
    ++indeg[e.to];
  }
  std::vector<std::vector<std::uint32_t>> out(nodes);
  for (const auto& e : edges) out[e.from].push_back(e.to);
  std::vector<std::uint32_t> ready;
  for (std::uint32_t v = 0; v < nodes; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::uint32_t v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto w : out[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  if (seen != nodes) throw ConfigError("graph has a cycle");
}

ErasureDag dag_from_json(const nlohmann::json& j) {
  ErasureDag dag;
  try {
    dag.nodes = j.at("nodes").get<std::uint32_t>();
    for (const auto& e : j.at("edges"))
      dag.edges.push_back({e.at("from").get<std::uint32_t>(), e.at("to").get<std::uint32_t>(),
                           e.at("epsilon").get<double>()});
    dag.source = j.at("source").get<std::uint32_t>();
    dag.sink = j.at("sink").get<std::uint32_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("DAG document: ") + e.what());
  }
  dag.validate();
  return dag;
}

nlohmann::json to_json(const ErasureDag& dag) {
  auto edges = nlohmann::json::array();
  for (const auto& e : dag.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"epsilon", e.epsilon}});
  return {{"nodes", dag.nodes}, {"edges", edges}, {"source", dag.source}, {"sink", dag.sink}};
}

namespace {

// Edmonds-Karp on unit capacities; returns the flow on every edge.
std::vector<std::uint8_t> unit_max_flow(const ErasureDag& dag) {
  dag.validate();
  const std::size_t n = dag.nodes;
  std::vector<std::vector<std::uint32_t>> touching(n);  // edges incident to a node
  for (std::uint32_t i = 0; i < dag.edges.size(); ++i) {
    touching[dag.edges[i].from].push_back(i);
    touching[dag.edges[i].to].push_back(i);
  }
  std::vector<std::uint8_t> flow(dag.edges.size(), 0);
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  for (;;) {
    std::vector<std::uint32_t> via(n, kNone);  // edge used to reach the node
    std::vector<std::uint8_t> seen(n, 0);
    std::deque<std::uint32_t> queue{dag.source};
    seen[dag.source] = 1;
    while (!queue.empty() && !seen[dag.sink]) {
      std::uint32_t v = queue.front();
      queue.pop_front();
      for (auto i : touching[v]) {
        const auto& e = dag.edges[i];
        std::uint32_t w;
        if (e.from == v && !flow[i])
          w = e.to;  // forward residual
        else if (e.to == v && flow[i])
          w = e.from;  // cancel existing flow
        else
          continue;
        if (seen[w]) continue;
        seen[w] = 1;
        via[w] = i;
        queue.push_back(w);
      }
    }
    if (!seen[dag.sink]) break;
    for (std::uint32_t v = dag.sink; v != dag.source;) {
      std::uint32_t i = via[v];
      flow[i] ^= 1;
      v = dag.edges[i].from == v ? dag.edges[i].to : dag.edges[i].from;
    }
  }
  return flow;
}

}  // namespace

std::size_t max_flow(const ErasureDag& dag) {
  auto flow = unit_max_flow(dag);
  std::size_t total = 0;
  for (std::uint32_t i = 0; i < dag.edges.size(); ++i)
    if (flow[i] && dag.edges[i].from == dag.source) ++total;
  return total;
}

PathDecomposition decompose_paths(const ErasureDag& dag) {
  auto flow = unit_max_flow(dag);
  std::vector<std::vector<std::uint32_t>> out(dag.nodes);
  for (std::uint32_t i = 0; i < dag.edges.size(); ++i)
    if (flow[i]) out[dag.edges[i].from].push_back(i);
  PathDecomposition d;
  // A flow on a DAG has no cycles, so walking unused flow edges from the
  // source always ends at the sink.
  while (!out[dag.source].empty()) {
    std::vector<std::uint32_t> path;
    std::uint32_t v = dag.source;
    while (v != dag.sink) {
      std::uint32_t i = out[v].back();
      out[v].pop_back();
      path.push_back(i);
      v = dag.edges[i].to;
    }
    d.paths.push_back(std::move(path));
  }
  if (d.paths.empty()) throw NoPathError();
  return d;
}

std::vector<std::size_t> split_blocks(std::size_t k, std::size_t m) {
  if (m == 0) throw std::invalid_argument("split_blocks: m must be >= 1");
  std::vector<std::size_t> sizes(m, k / m);
  for (std::size_t i = 0; i < k % m; ++i) ++sizes[i];
  return sizes;
}

gf2::BitMatrix end_to_end_matrix(const ErasureDag& dag, const PathDecomposition& paths,
                                 std::span<const std::size_t> block_sizes,
                                 std::span<const gf2::BitMatrix> link_matrices) {
  if (block_sizes.size() != paths.m()) throw std::invalid_argument("end_to_end_matrix: one block per path");
  if (link_matrices.size() != dag.edges.size())
    throw std::invalid_argument("end_to_end_matrix: one matrix per edge");
  gf2::BitMatrix total;
  for (std::size_t p = 0; p < paths.m(); ++p) {
    gf2::BitMatrix m = gf2::BitMatrix::identity(block_sizes[p]);
    for (auto e : paths.paths[p]) {
      const auto& link = link_matrices[e];
      if (link.cols() != m.rows())
        throw std::invalid_argument("end_to_end_matrix: link matrix of edge " + std::to_string(e) + " has " +
                                    std::to_string(link.cols()) + " columns, expected " +
                                    std::to_string(m.rows()));
      m = gf2::multiply(link, m);
    }
    total = p == 0 ? m : gf2::direct_sum(total, m);
  }
  return total;
}

MultipathResult run_multipath(const ErasureDag& dag, std::size_t k, const NetworkConfig& base) {
  MultipathResult r;
  r.decomposition = decompose_paths(dag);
  const std::size_t m = r.decomposition.m();
  if (k < m) throw ConfigError("k must be at least the number of paths");
  r.block_sizes = split_blocks(k, m);
  double capacity = 0.0;
  std::uint64_t d = 0;
  bool ok = true;
  std::uint64_t received = 0;
  for (std::size_t p = 0; p < m; ++p) {
    NetworkConfig cfg = base;
    cfg.k = r.block_sizes[p];
    cfg.links.clear();
    double cap = 1.0;
    for (auto e : r.decomposition.paths[p]) {
      cfg.links.push_back({dag.edges[e].epsilon});
      cap = std::min(cap, 1.0 - dag.edges[e].epsilon);
    }
    capacity += cap;
    if (p > 0) cfg.seed = derive_seed(base.seed, 0x70617468, p);
    r.traces.push_back(run(cfg));
    r.per_path.push_back(measure(r.traces.back()));
    const auto& rec = r.per_path.back();
    ok = ok && rec.success;
    if (rec.completion_slot) d = std::max(d, *rec.completion_slot);
    received += rec.received;
  }
  if (m == 1) {
    r.combined = r.per_path[0];
    return r;
  }
  MetricsRecord& c = r.combined;
  c.success = ok;
  for (const auto& rec : r.per_path) {
    c.peak_memory.insert(c.peak_memory.end(), rec.peak_memory.begin(), rec.peak_memory.end());
    c.xor_ops += rec.xor_ops;
    c.row_ops += rec.row_ops;
  }
  c.received = received;
  if (ok) {
    c.completion_slot = d;
    c.delay_slots = static_cast<double>(d) - static_cast<double>(k) / capacity;
    c.achieved_rate = static_cast<double>(k) / static_cast<double>(d);
    c.overhead = (static_cast<double>(received) - static_cast<double>(k)) / static_cast<double>(k);
  }
  return r;
}

}  // namespace linenet
