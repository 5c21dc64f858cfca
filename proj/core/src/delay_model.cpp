#include "asynczoo/delay_model.hpp"

#include <algorithm>
#include <string>

#include "asynczoo/error.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

std::string_view to_string(DelayKind kind) noexcept {
  switch (kind) {
    case DelayKind::none: return "none";
    case DelayKind::fixed: return "fixed";
    case DelayKind::uniform: return "uniform";
    case DelayKind::trace: return "trace";
  }
  return "none";
}

DelayKind parse_delay_kind(std::string_view name) {
  for (DelayKind k : {DelayKind::none, DelayKind::fixed, DelayKind::uniform, DelayKind::trace}) {
    if (name == to_string(k)) return k;
  }
  throw ValidationError("unknown delay model '" + std::string(name) + "'");
}

DelayModel DelayModel::none() { return DelayModel(DelayKind::none, 0); }

DelayModel DelayModel::fixed(std::uint64_t tau) {
  return DelayModel(tau == 0 ? DelayKind::none : DelayKind::fixed, tau);
}

DelayModel DelayModel::uniform(std::uint64_t max_staleness) {
  return DelayModel(max_staleness == 0 ? DelayKind::none : DelayKind::uniform, max_staleness);
}

DelayModel DelayModel::trace(std::uint64_t max_staleness,
                             std::vector<std::vector<std::uint64_t>> sets) {
  for (std::uint64_t k = 0; k < sets.size(); ++k) {
    auto& set = sets[k];
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      throw ValidationError("delay trace: duplicate index in J(" + std::to_string(k) + ")");
    }
    for (std::uint64_t j : set) {
      if (j >= k || k - j > max_staleness) {
        throw ValidationError("delay trace: J(" + std::to_string(k) + ") contains " +
                              std::to_string(j) + ", outside {k-1, ..., k-" +
                              std::to_string(max_staleness) + "}");
      }
    }
  }
  DelayModel model(DelayKind::trace, max_staleness);
  model.sets_ = std::move(sets);
  return model;
}

void DelayModel::missed(std::uint64_t k, RngStream& rng, std::vector<std::uint64_t>& out) const {
  out.clear();
  std::uint64_t tau = 0;
  switch (kind_) {
    case DelayKind::none:
      return;
    case DelayKind::fixed:
      tau = staleness_;
      break;
    case DelayKind::uniform:
      tau = rng.below(staleness_ + 1);
      break;
    case DelayKind::trace:
      if (k < sets_.size()) out = sets_[k];
      return;
  }
  for (std::uint64_t j = k - std::min(tau, k); j < k; ++j) out.push_back(j);
}

}  // namespace asynczoo
