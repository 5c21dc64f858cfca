#include "asynczoo/param_store.hpp"

#include <thread>

#include "asynczoo/error.hpp"

namespace asynczoo {

namespace {

constexpr int kSpinsBeforeYield = 64;

}  // namespace

std::string_view to_string(ReadMode m) noexcept {
  return m == ReadMode::consistent ? "consistent" : "inconsistent";
}

ParamStore::ParamStore(std::span<const double> x0, ReadMode mode)
    : dim_(x0.size()), mode_(mode), x_(new std::atomic<double>[x0.size()]) {
  if (dim_ == 0) throw ValidationError("ParamStore: dimension must be >= 1");
  for (std::size_t i = 0; i < dim_; ++i) x_[i].store(x0[i], std::memory_order_relaxed);
  std::atomic_thread_fence(std::memory_order_release);
}

std::uint64_t ParamStore::read_consistent(std::span<double> out) const {
  if (mode_ != ReadMode::consistent) {
    throw ValidationError("read_consistent on an inconsistent-mode store");
  }
  if (out.size() != dim_) throw ValidationError("read_consistent: output has wrong length");
  int spins = 0;
  for (;;) {
    const std::uint64_t done = completed_.load(std::memory_order_acquire);
    const std::uint64_t started = begun_.load(std::memory_order_acquire);
    if (started == done) {
      for (std::size_t i = 0; i < dim_; ++i) out[i] = x_[i].load(std::memory_order_relaxed);
      std::atomic_thread_fence(std::memory_order_acquire);
      if (begun_.load(std::memory_order_relaxed) == started) return done;
    }
    if (++spins >= kSpinsBeforeYield) {
      spins = 0;
      std::this_thread::yield();
    }
  }
}

std::uint64_t ParamStore::read_inconsistent(std::span<double> out) const {
  if (out.size() != dim_) throw ValidationError("read_inconsistent: output has wrong length");
  const std::uint64_t k = completed_.load(std::memory_order_acquire);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = x_[i].load(std::memory_order_relaxed);
  return k;
}

void ParamStore::begin_write() noexcept {
  if (mode_ == ReadMode::consistent) {
    begun_.fetch_add(1, std::memory_order_relaxed);
    // Pairs with the reader's acquire fence: a reader that sees any of this
    // update's coordinates also sees the begun_ increment.
    std::atomic_thread_fence(std::memory_order_release);
  }
}

double ParamStore::subtract(std::size_t i, double amount) noexcept {
  return x_[i].fetch_sub(amount, std::memory_order_relaxed);
}

std::uint64_t ParamStore::apply_update(const SparseGradEstimate& estimate, double gamma) {
  for (std::size_t i : estimate.indices) {
    if (i >= dim_) throw IndexError("apply_update: coordinate out of range");
  }
  begin_write();
  for (std::size_t j = 0; j < estimate.indices.size(); ++j) {
    subtract(estimate.indices[j], gamma * estimate.values[j]);
  }
  return completed_.fetch_add(1, std::memory_order_acq_rel);
}

std::uint64_t ParamStore::apply_delta(std::size_t i, double delta) {
  if (i >= dim_) throw IndexError("apply_delta: coordinate out of range");
  begin_write();
  x_[i].fetch_add(delta, std::memory_order_relaxed);
  return completed_.fetch_add(1, std::memory_order_acq_rel);
}

Vector ParamStore::snapshot() const {
  Vector out(dim_);
  read(out);
  return out;
}

}  // namespace asynczoo
