#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>

#include "asynczoo/problem.hpp"
#include "asynczoo/zeroth_order.hpp"

namespace asynczoo {

enum class ReadMode { consistent, inconsistent };

std::string_view to_string(ReadMode m) noexcept;

/// Shared optimization variable. Every coordinate is a std::atomic<double>;
/// updates are per-coordinate atomic subtractions followed by one increment
/// of the iteration counter.
///
/// Consistent mode adds a second counter that writers bump before touching
/// any coordinate. A reader accepts a copy only if no update was in flight
/// when it started and none began while it copied, so the copy equals the
/// state after exactly k_read updates.
class ParamStore {
 public:
  ParamStore(std::span<const double> x0, ReadMode mode);

  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;

  std::size_t dim() const noexcept { return dim_; }
  ReadMode mode() const noexcept { return mode_; }

  /// Number of completed updates.
  std::uint64_t counter() const noexcept { return completed_.load(std::memory_order_acquire); }

  /// Consistent snapshot into `out`; returns the number of updates it reflects.
  /// Requires consistent mode.
  std::uint64_t read_consistent(std::span<double> out) const;

  /// Coordinate-by-coordinate read; coordinates may come from different
  /// iterations. Returns the counter observed before the first coordinate.
  std::uint64_t read_inconsistent(std::span<double> out) const;

  /// Dispatches on mode().
  std::uint64_t read(std::span<double> out) const {
    return mode_ == ReadMode::consistent ? read_consistent(out) : read_inconsistent(out);
  }

  /// x_i -= gamma * value_i for every entry, then counter += 1. Returns this
  /// update's index (the counter value before the increment).
  std::uint64_t apply_update(const SparseGradEstimate& estimate, double gamma);

  /// Adds `delta` to one coordinate and counts it as an update. Used by the
  /// stress harnesses.
  std::uint64_t apply_delta(std::size_t i, double delta);

  /// Copy of x via the mode's read.
  Vector snapshot() const;

 private:
  double subtract(std::size_t i, double amount) noexcept;
  void begin_write() noexcept;

  std::size_t dim_;
  ReadMode mode_;
  std::unique_ptr<std::atomic<double>[]> x_;
  alignas(64) std::atomic<std::uint64_t> begun_{0};
  alignas(64) std::atomic<std::uint64_t> completed_{0};
};

}  // namespace asynczoo
