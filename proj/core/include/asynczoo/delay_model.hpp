#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace asynczoo {

class RngStream;

enum class DelayKind { none, fixed, uniform, trace };

std::string_view to_string(DelayKind kind) noexcept;
DelayKind parse_delay_kind(std::string_view name);

/// Which earlier updates the read at step k misses (the set J(k)). Every set
/// is a subset of {k-1, ..., k-T}.
class DelayModel {
 public:
  /// J(k) empty: every read sees the current iterate.
  static DelayModel none();
  /// J(k) = {k-tau, ..., k-1} clipped at 0, i.e. the read returns x_{k-tau}.
  static DelayModel fixed(std::uint64_t tau);
  /// tau_k drawn uniformly from {0, ..., T} each step, then as fixed(tau_k).
  static DelayModel uniform(std::uint64_t max_staleness);
  /// Explicit sets for k = 0, 1, ...; empty after the end of the list.
  /// Throws ValidationError if a set leaves {k-1, ..., k-T}.
  static DelayModel trace(std::uint64_t max_staleness,
                          std::vector<std::vector<std::uint64_t>> sets);

  DelayKind kind() const noexcept { return kind_; }
  std::uint64_t staleness() const noexcept { return staleness_; }

  /// Writes J(k) to `out` in increasing order. Only the uniform kind
  /// consumes randomness.
  void missed(std::uint64_t k, RngStream& rng, std::vector<std::uint64_t>& out) const;

 private:
  DelayModel(DelayKind kind, std::uint64_t staleness) : kind_(kind), staleness_(staleness) {}

  DelayKind kind_;
  std::uint64_t staleness_;
  std::vector<std::vector<std::uint64_t>> sets_;
};

}  // namespace asynczoo
