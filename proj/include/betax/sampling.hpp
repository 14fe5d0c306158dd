#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "betax/rng.hpp"

namespace betax::sampling {

/// One Gamma(shape, 1) draw.  Marsaglia-Tsang for shape >= 1; for shape < 1
/// the boost transform G_a = G_{a+1} U^{1/a}, switched to log space below
/// shape = 1e-3 where U^{1/a} underflows.
double sample_gamma(double shape, rng::SplitStream& stream);

/// ln of a Gamma(shape, 1) draw; finite for any shape > 0.
double sample_gamma_log(double shape, rng::SplitStream& stream);

/// chi(k) = sqrt(2 Gamma(k/2, 1)) in distribution.
double sample_chi(double k, rng::SplitStream& stream);
double sample_chi_log(double k, rng::SplitStream& stream);

/// Independent array X_{i,n} ~ chi(i beta), i = 1..n.  Entry i draws from
/// stream (master_seed -> replica -> i), so regeneration is bit-exact and
/// order-free.
struct TriangularSample {
  std::int64_t n = 0;
  double beta = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t replica = 0;
  std::vector<double> values;  // values[i-1] ~ chi(i beta)
};

TriangularSample sample_triangular_array(std::int64_t n, double beta,
                                         std::uint64_t master_seed,
                                         std::uint64_t replica);

/// H = sqrt(beta) H_{n,beta}: N(0,2) diagonal, offdiagonal[j-1] ~ chi((n-j) beta).
struct TridiagonalMatrix {
  std::vector<double> diagonal;
  std::vector<double> offdiagonal;

  std::int64_t size() const { return static_cast<std::int64_t>(diagonal.size()); }
};

TridiagonalMatrix sample_tridiagonal(std::int64_t n, double beta,
                                     std::uint64_t master_seed,
                                     std::uint64_t replica);

/// Binary dump (little-endian doubles) for cross-checking implementations.
void write_sample(const std::string& path, const TriangularSample& sample);
TriangularSample read_sample(const std::string& path);

/// E[chi(k)] = sqrt(2) Gamma((k+1)/2) / Gamma(k/2) and Var = k - mean^2.
double chi_mean(double k);
double chi_variance(double k);

}  // namespace betax::sampling
