#include "watchlist/kernels.hpp"

#include <cmath>
#include <exception>
#include <mutex>

#include <omp.h>

namespace watchlist::kernels {

namespace {

inline double bin_sum(std::span<const double> scores, double center, double inv_two_h2) {
  double acc = 0.0;
  for (const double s : scores) {
    const double d = center - s;
    acc += std::exp(-d * d * inv_two_h2);
  }
  return acc;
}

}  // namespace

void gaussian_bin_mass_serial(std::span<const double> scores, std::span<const double> centers,
                              double bandwidth, std::span<double> out) {
  const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  for (std::size_t k = 0; k < centers.size(); ++k)
    out[k] = bin_sum(scores, centers[k], inv_two_h2);
}

void gaussian_bin_mass_parallel(std::span<const double> scores, std::span<const double> centers,
                                double bandwidth, std::span<double> out) {
  const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  const auto n = static_cast<std::ptrdiff_t>(centers.size());
  // Small inputs are not worth a parallel region.
  if (scores.size() * centers.size() < 20000) {
    gaussian_bin_mass_serial(scores, centers, bandwidth, out);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] =
        bin_sum(scores, centers[static_cast<std::size_t>(k)], inv_two_h2);
}

void gaussian_bin_mass(Execution exec, std::span<const double> scores,
                       std::span<const double> centers, double bandwidth, std::span<double> out) {
  if (exec == Execution::Parallel)
    gaussian_bin_mass_parallel(scores, centers, bandwidth, out);
  else
    gaussian_bin_mass_serial(scores, centers, bandwidth, out);
}

void for_each_index(Execution exec, std::size_t n, const std::function<void(std::size_t)>& body) {
  if (exec == Execution::Serial || n < 2 || omp_in_parallel()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace watchlist::kernels
