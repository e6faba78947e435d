#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "nwidths/norms.hpp"

namespace nwidths {

struct NelderMeadOptions {
  double initial_step = 0.25;
  int max_evals = 4000;
  /// Stop when the simplex spread of f values is below ftol * (|f_best| + tiny)
  /// or the simplex diameter is below xtol.
  double ftol = 1e-12;
  double xtol = 1e-10;
};

struct NelderMeadResult {
  Vec x;
  double f = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Nelder-Mead with the dimension-adaptive coefficients of Gao and Han.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                             const NelderMeadOptions& opts = {});

/// Worker count used by parallel_map; 0 means hardware concurrency.
void set_worker_count(int workers);
int worker_count();

/// Applies fn to 0..count-1 and returns results in index order. The result
/// does not depend on scheduling as long as fn(i) is a pure function of i.
template <typename T>
std::vector<T> parallel_map(int count, const std::function<T(int)>& fn) {
  std::vector<T> out(static_cast<std::size_t>(std::max(count, 0)));
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// splitmix64, used to derive per-restart seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

}  // namespace nwidths
