#include <algorithm>
#include <cmath>
#include <sstream>

#include "asynczoo/error.hpp"
#include "asynczoo/problem.hpp"

namespace asynczoo {

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::analytic ? "analytic" : "estimated";
}

LipschitzInfo::LipschitzInfo(double global, std::vector<double> per_coordinate,
                             Provenance provenance, BlockFn block_fn)
    : global_(global),
      per_coordinate_(std::move(per_coordinate)),
      provenance_(provenance),
      block_fn_(std::move(block_fn)) {
  if (per_coordinate_.empty()) {
    throw ValidationError("LipschitzInfo: per-coordinate constants must be non-empty");
  }
  if (!std::isfinite(global_) || global_ < 0.0) {
    throw ValidationError("LipschitzInfo: global constant must be finite and >= 0");
  }
  for (double v : per_coordinate_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("LipschitzInfo: coordinate constants must be finite and >= 0");
    }
  }
  max_coordinate_ = *std::max_element(per_coordinate_.begin(), per_coordinate_.end());
  if (max_coordinate_ > global_) {
    std::ostringstream msg;
    msg << "max coordinate constant " << max_coordinate_ << " exceeds global constant "
        << global_ << "; global raised to match";
    warnings_.push_back(msg.str());
    global_ = max_coordinate_;
  }
  if (block_fn_) {
    const double first = block_fn_(1);
    const double last = block_fn_(per_coordinate_.size());
    if (first < max_coordinate_ || last > global_) {
      warnings_.push_back("block constants clamped into [max_coordinate, global]");
    }
  }
}

double LipschitzInfo::clamp_to_chain(double v) const noexcept {
  return std::clamp(v, max_coordinate_, global_);
}

double LipschitzInfo::block(std::size_t s) const {
  s = std::clamp<std::size_t>(s, 1, std::max<std::size_t>(1, per_coordinate_.size()));
  if (!block_fn_) {
    return clamp_to_chain(std::min(global_, static_cast<double>(s) * max_coordinate_));
  }
  // Prefix maximum keeps a user-supplied function monotone.
  double best = max_coordinate_;
  for (std::size_t t = 1; t <= s; ++t) best = std::max(best, clamp_to_chain(block_fn_(t)));
  return best;
}

}  // namespace asynczoo
