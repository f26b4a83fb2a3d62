#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace watchlist {

/// Selects the OpenMP kernel or its serial reference. Both produce
/// bit-identical results; the serial path is kept for tests and benchmarks.
enum class Execution { Serial, Parallel };

namespace kernels {

/// out[k] = sum_i exp(-(centers[k] - scores[i])^2 / (2 h^2)), summed in
/// input order. out.size() must equal centers.size().
void gaussian_bin_mass_serial(std::span<const double> scores, std::span<const double> centers,
                              double bandwidth, std::span<double> out);
void gaussian_bin_mass_parallel(std::span<const double> scores, std::span<const double> centers,
                                double bandwidth, std::span<double> out);
void gaussian_bin_mass(Execution exec, std::span<const double> scores,
                       std::span<const double> centers, double bandwidth, std::span<double> out);

/// Runs body(i) for i in [0, n). Iterations must be independent and write
/// only to slot i of their outputs. The first exception thrown by any
/// iteration is rethrown after the loop.
void for_each_index(Execution exec, std::size_t n, const std::function<void(std::size_t)>& body);

/// Number of OpenMP threads a parallel region would use.
int max_threads();

}  // namespace kernels
}  // namespace watchlist
