#pragma once

// Unicast over a DAG of erasure links by routing over edge-disjoint paths,
// each path run as an independent line network.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "linenet/channel_sim.hpp"
#include "linenet/config.hpp"
#include "linenet/gf2.hpp"
#include "linenet/metrics.hpp"

namespace linenet {

class NoPathError : public std::runtime_error {
 public:
  NoPathError() : std::runtime_error("no path from source to sink") {}
};

struct DagEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double epsilon = 0.0;
};

struct ErasureDag {
  std::uint32_t nodes = 0;
  std::vector<DagEdge> edges;
  std::uint32_t source = 0;
  std::uint32_t sink = 0;

  /// Throws ConfigError unless the graph is acyclic, indices are in range,
  /// the source has no in-edges and the sink no out-edges.
  void validate() const;
};

/// {"nodes": n, "edges": [{"from", "to", "epsilon"}], "source", "sink"}
ErasureDag dag_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ErasureDag& dag);

struct PathDecomposition {
  std::vector<std::vector<std::uint32_t>> paths;  // edge indices, source to sink
  std::size_t m() const { return paths.size(); }
};

/// Maximum number of edge-disjoint source-to-sink paths.
std::size_t max_flow(const ErasureDag& dag);

/// Edge-disjoint paths realizing the unit-capacity max flow. Throws
/// NoPathError when the sink is unreachable.
PathDecomposition decompose_paths(const ErasureDag& dag);

/// Block sizes of k split over m paths, differing by at most one.
std::vector<std::size_t> split_blocks(std::size_t k, std::size_t m);

/// Receiver matrix of the whole transfer: per path, the product of its link
/// matrices (first link applied first) acting on that path's block of
/// source columns; paths combine by direct sum. `link_matrices` is indexed
/// by edge. Throws std::invalid_argument on any dimension mismatch.
gf2::BitMatrix end_to_end_matrix(const ErasureDag& dag, const PathDecomposition& paths,
                                 std::span<const std::size_t> block_sizes,
                                 std::span<const gf2::BitMatrix> link_matrices);

struct MultipathResult {
  PathDecomposition decomposition;
  std::vector<std::size_t> block_sizes;
  std::vector<RunTrace> traces;          // one per path
  std::vector<MetricsRecord> per_path;
  MetricsRecord combined;                // success iff every path decodes
};

/// Splits k over the paths and runs `base` (its k and links replaced) on
/// each path. Path 0 uses base.seed, so a single path reproduces run(base).
MultipathResult run_multipath(const ErasureDag& dag, std::size_t k, const NetworkConfig& base);

}  // namespace linenet
