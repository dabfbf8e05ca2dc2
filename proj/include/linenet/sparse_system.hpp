#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace linenet::gf2 {

/// Sparse linear system over GF(2) with byte payloads, solved incrementally.
///
/// Equations are peeled as they arrive (a degree-one equation resolves its
/// variable, which is then substituted everywhere). When peeling stalls,
/// solve_residual() finishes the job by inactivation decoding: it keeps
/// peeling while declaring stuck variables inactive, then solves the small
/// dense system left over on the inactive set. The result is equivalent to
/// Gaussian elimination on the whole system.
///
/// Variables 0..targets-1 are the ones whose recovery defines completion;
/// callers may add auxiliary variables with add_variable().
class SparseSystem {
 public:
  SparseSystem(std::size_t targets, std::size_t payload_bytes);

  std::size_t targets() const { return targets_; }
  std::size_t variables() const { return var_resolved_.size(); }
  std::size_t equations() const { return eq_remaining_.size(); }
  std::size_t payload_bytes() const { return pb_; }

  std::uint32_t add_variable();

  /// Adds sum(vars) = payload. Repeated indices cancel in pairs.
  void add_equation(std::span<const std::uint32_t> vars, std::span<const std::uint8_t> payload);

  bool complete() const { return resolved_targets_ == targets_; }
  bool inconsistent() const { return inconsistent_; }
  std::size_t resolved_targets() const { return resolved_targets_; }

  bool is_resolved(std::uint32_t var) const { return var_resolved_[var]; }
  std::span<const std::uint8_t> value(std::uint32_t var) const {
    return {values_.data() + static_cast<std::size_t>(var) * pb_, pb_};
  }

  /// Number of equations that could still contribute rank, minus unresolved
  /// variables. Negative means the residual system cannot be full rank.
  long long residual_surplus() const;

  /// Runs inactivation decoding on the residual system. On success every
  /// variable is resolved; on failure the system is left untouched.
  bool solve_residual();

  /// Inactive variables used by the last solve_residual() call.
  std::size_t last_inactivations() const { return last_inactivations_; }
  std::uint64_t xor_ops() const { return xor_ops_; }

 private:
  void resolve(std::uint32_t var, std::uint32_t eq);
  void drain();
  std::uint8_t* eq_payload(std::uint32_t e) { return eq_payload_.data() + static_cast<std::size_t>(e) * pb_; }

  std::size_t targets_;
  std::size_t pb_;

  std::vector<std::uint8_t> var_resolved_;
  std::vector<std::uint8_t> values_;
  std::vector<std::vector<std::uint32_t>> var_eqs_;

  std::vector<std::vector<std::uint32_t>> eq_vars_;
  std::vector<std::uint8_t> eq_payload_;
  std::vector<std::uint32_t> eq_remaining_;
  std::vector<std::uint32_t> eq_xor_;
  std::vector<std::uint8_t> eq_used_;

  std::vector<std::uint32_t> ripple_;
  std::size_t resolved_targets_ = 0;
  std::size_t unresolved_ = 0;
  std::size_t live_equations_ = 0;
  bool inconsistent_ = false;
  std::size_t last_inactivations_ = 0;
  std::uint64_t xor_ops_ = 0;
};

}  // namespace linenet::gf2
