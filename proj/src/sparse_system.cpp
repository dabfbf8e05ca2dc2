#include "linenet/sparse_system.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "linenet/eliminator.hpp"
#include "linenet/gf2.hpp"

namespace linenet::gf2 {

namespace {

void xor_bytes(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

bool all_zero(const std::uint8_t* p, std::size_t n) {
  return std::all_of(p, p + n, [](std::uint8_t b) { return b == 0; });
}

}  // namespace

SparseSystem::SparseSystem(std::size_t targets, std::size_t payload_bytes)
    : targets_(targets), pb_(payload_bytes) {
  var_resolved_.assign(targets, 0);
  values_.assign(targets * pb_, 0);
  var_eqs_.resize(targets);
  unresolved_ = targets;
}

std::uint32_t SparseSystem::add_variable() {
  var_resolved_.push_back(0);
  values_.resize(values_.size() + pb_, 0);
  var_eqs_.emplace_back();
  ++unresolved_;
  return static_cast<std::uint32_t>(var_resolved_.size() - 1);
}

void SparseSystem::add_equation(std::span<const std::uint32_t> vars, std::span<const std::uint8_t> payload) {
  std::vector<std::uint32_t> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint32_t> unique;
  unique.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if ((j - i) % 2) unique.push_back(sorted[i]);
    i = j;
  }

  const auto e = static_cast<std::uint32_t>(eq_remaining_.size());
  eq_payload_.resize(eq_payload_.size() + pb_);
  std::uint8_t* p = eq_payload(e);
  std::copy(payload.begin(), payload.end(), p);
  std::uint32_t remaining = 0;
  std::uint32_t x = 0;
  for (auto v : unique) {
    if (var_resolved_[v]) {
      xor_bytes(p, values_.data() + static_cast<std::size_t>(v) * pb_, pb_);
      ++xor_ops_;
    } else {
      ++remaining;
      x ^= v;
      var_eqs_[v].push_back(e);
    }
  }
  eq_vars_.push_back(std::move(unique));
  eq_remaining_.push_back(remaining);
  eq_xor_.push_back(x);
  eq_used_.push_back(0);
  if (remaining == 0) {
    if (!all_zero(p, pb_)) inconsistent_ = true;
    return;
  }
  ++live_equations_;
  if (remaining == 1) {
    ripple_.push_back(e);
    drain();
  }
}

void SparseSystem::resolve(std::uint32_t var, std::uint32_t eq) {
  eq_used_[eq] = 1;
  --live_equations_;
  var_resolved_[var] = 1;
  --unresolved_;
  if (var < targets_) ++resolved_targets_;
  std::uint8_t* val = values_.data() + static_cast<std::size_t>(var) * pb_;
  std::memcpy(val, eq_payload(eq), pb_);
  for (auto f : var_eqs_[var]) {
    if (f == eq || eq_used_[f]) continue;
    xor_bytes(eq_payload(f), val, pb_);
    ++xor_ops_;
    eq_xor_[f] ^= var;
    if (--eq_remaining_[f] == 1) {
      ripple_.push_back(f);
    } else if (eq_remaining_[f] == 0) {
      --live_equations_;
      if (!all_zero(eq_payload(f), pb_)) inconsistent_ = true;
    }
  }
  std::vector<std::uint32_t>().swap(var_eqs_[var]);
}

void SparseSystem::drain() {
  while (!ripple_.empty()) {
    std::uint32_t e = ripple_.back();
    ripple_.pop_back();
    if (eq_used_[e] || eq_remaining_[e] != 1) continue;
    resolve(eq_xor_[e], e);
  }
}

long long SparseSystem::residual_surplus() const {
  return static_cast<long long>(live_equations_) - static_cast<long long>(unresolved_);
}

bool SparseSystem::solve_residual() {
  last_inactivations_ = 0;
  if (complete() && unresolved_ == 0) return true;
  if (residual_surplus() < 0) return false;

  // Local numbering of the unresolved variables and the live equations.
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> local_of(variables(), kNone);
  std::vector<std::uint32_t> global_of;
  for (std::uint32_t v = 0; v < variables(); ++v)
    if (!var_resolved_[v]) {
      local_of[v] = static_cast<std::uint32_t>(global_of.size());
      global_of.push_back(v);
    }
  const std::size_t nv = global_of.size();

  std::vector<std::uint32_t> eqs;
  for (std::uint32_t e = 0; e < equations(); ++e)
    if (!eq_used_[e] && eq_remaining_[e] > 0) eqs.push_back(e);
  const std::size_t ne = eqs.size();

  std::vector<std::vector<std::uint32_t>> active(ne);
  std::vector<std::vector<std::uint32_t>> adj(nv);
  std::vector<std::uint8_t> payload(ne * pb_);
  std::vector<std::uint32_t> count(ne);
  std::vector<std::uint32_t> xsum(ne, 0);
  std::vector<std::vector<std::uint64_t>> inact(ne);
  std::vector<std::uint8_t> used(ne, 0);
  for (std::uint32_t i = 0; i < ne; ++i) {
    std::uint32_t e = eqs[i];
    std::memcpy(payload.data() + i * pb_, eq_payload(e), pb_);
    for (auto v : eq_vars_[e]) {
      if (var_resolved_[v]) continue;
      std::uint32_t lv = local_of[v];
      active[i].push_back(lv);
      adj[lv].push_back(i);
      xsum[i] ^= lv;
    }
    count[i] = static_cast<std::uint32_t>(active[i].size());
  }

  enum : std::uint8_t { kActive, kSolved, kInactive };
  std::vector<std::uint8_t> state(nv, kActive);
  std::vector<std::uint32_t> solved_by(nv, kNone);
  std::vector<std::uint32_t> inactive_vars;
  std::size_t active_left = nv;
  std::vector<std::uint32_t> ripple;
  for (std::uint32_t i = 0; i < ne; ++i)
    if (count[i] == 1) ripple.push_back(i);

  auto xor_inact = [&](std::uint32_t dst, std::uint32_t src) {
    auto& d = inact[dst];
    const auto& s = inact[src];
    if (d.size() < s.size()) d.resize(s.size(), 0);
    for (std::size_t w = 0; w < s.size(); ++w) d[w] ^= s[w];
  };

  for (;;) {
    while (!ripple.empty()) {
      std::uint32_t e = ripple.back();
      ripple.pop_back();
      if (used[e] || count[e] != 1) continue;
      std::uint32_t v = xsum[e];
      state[v] = kSolved;
      solved_by[v] = e;
      used[e] = 1;
      --active_left;
      for (auto f : adj[v]) {
        if (f == e || used[f]) continue;
        xor_bytes(payload.data() + f * pb_, payload.data() + e * pb_, pb_);
        xor_inact(f, e);
        ++xor_ops_;
        xsum[f] ^= v;
        if (--count[f] == 1) ripple.push_back(f);
      }
    }
    if (active_left == 0) break;

    // Stuck: pick the live equation with the fewest active variables and
    // inactivate all but one of them.
    std::uint32_t best = kNone;
    for (std::uint32_t i = 0; i < ne; ++i)
      if (!used[i] && count[i] >= 2 && (best == kNone || count[i] < count[best])) best = i;
    if (best == kNone) return false;  // some active variable appears nowhere
    std::uint32_t kept = kNone;
    for (auto v : active[best]) {
      if (state[v] != kActive) continue;
      if (kept == kNone) {
        kept = v;
        continue;
      }
      const auto z = static_cast<std::uint32_t>(inactive_vars.size());
      inactive_vars.push_back(v);
      state[v] = kInactive;
      --active_left;
      for (auto f : adj[v]) {
        if (used[f]) continue;
        auto& vec = inact[f];
        if (vec.size() <= z / kWordBits) vec.resize(z / kWordBits + 1, 0);
        vec[z / kWordBits] ^= std::uint64_t{1} << (z % kWordBits);
        xsum[f] ^= v;
        if (--count[f] == 1) ripple.push_back(f);
      }
    }
  }

  const std::size_t nz = inactive_vars.size();
  last_inactivations_ = nz;
  std::vector<std::vector<std::uint8_t>> zval;
  if (nz > 0) {
    Eliminator dense(nz, pb_);
    std::vector<std::uint64_t> row(words_for(nz));
    for (std::uint32_t i = 0; i < ne && !dense.full_rank(); ++i) {
      if (used[i]) continue;
      std::fill(row.begin(), row.end(), 0);
      std::copy(inact[i].begin(), inact[i].end(), row.begin());
      dense.enqueue(row, {payload.data() + i * pb_, pb_});
    }
    dense.flush();
    xor_ops_ += dense.row_ops();
    if (!dense.full_rank()) return false;
    zval = dense.solve();
  }

  // Commit.
  std::vector<std::uint8_t> val(pb_);
  for (std::size_t lv = 0; lv < nv; ++lv) {
    std::uint32_t v = global_of[lv];
    std::uint8_t* dst = values_.data() + static_cast<std::size_t>(v) * pb_;
    if (state[lv] == kSolved) {
      std::uint32_t e = solved_by[lv];
      std::memcpy(dst, payload.data() + e * pb_, pb_);
      const auto& vec = inact[e];
      for (std::size_t w = 0; w < vec.size(); ++w) {
        std::uint64_t word = vec[w];
        while (word) {
          std::size_t z = w * kWordBits + static_cast<std::size_t>(__builtin_ctzll(word));
          word &= word - 1;
          xor_bytes(dst, zval[z].data(), pb_);
        }
      }
    }
  }
  for (std::size_t z = 0; z < nz; ++z) {
    std::uint32_t v = global_of[inactive_vars[z]];
    std::memcpy(values_.data() + static_cast<std::size_t>(v) * pb_, zval[z].data(), pb_);
  }
  for (std::size_t lv = 0; lv < nv; ++lv) {
    std::uint32_t v = global_of[lv];
    var_resolved_[v] = 1;
    if (v < targets_) ++resolved_targets_;
    std::vector<std::uint32_t>().swap(var_eqs_[v]);
  }
  unresolved_ = 0;
  for (auto e : eqs) eq_used_[e] = 1;
  live_equations_ = 0;
  ripple_.clear();
  return true;
}

}  // namespace linenet::gf2
