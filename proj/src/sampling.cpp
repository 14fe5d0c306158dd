#include "betax/sampling.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "betax/special_functions.hpp"

static_assert(std::endian::native == std::endian::little,
              "sample dumps assume a little-endian host");

namespace betax::sampling {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Marsaglia & Tsang (2000), ACM TOMS 26(3): squeeze-based rejection for
// shape >= 1.
double gamma_marsaglia_tsang(double shape, rng::SplitStream& stream) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = stream.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.next_unit();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

void check_shape(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::domain_error("sample_gamma: shape must be positive and finite");
}

}  // namespace

double sample_gamma(double shape, rng::SplitStream& stream) {
  check_shape(shape);
  if (shape >= 1.0) return gamma_marsaglia_tsang(shape, stream);
  if (shape >= 1e-3) {
    const double g = gamma_marsaglia_tsang(shape + 1.0, stream);
    const double u = stream.next_unit();
    return g * std::pow(u, 1.0 / shape);
  }
  return std::exp(sample_gamma_log(shape, stream));
}

double sample_gamma_log(double shape, rng::SplitStream& stream) {
  check_shape(shape);
  if (shape >= 1.0) return std::log(gamma_marsaglia_tsang(shape, stream));
  const double g = gamma_marsaglia_tsang(shape + 1.0, stream);
  const double u = stream.next_unit();
  return std::log(g) + std::log(u) / shape;
}

double sample_chi(double k, rng::SplitStream& stream) {
  return std::sqrt(2.0 * sample_gamma(0.5 * k, stream));
}

double sample_chi_log(double k, rng::SplitStream& stream) {
  return 0.5 * (kLn2 + sample_gamma_log(0.5 * k, stream));
}

TriangularSample sample_triangular_array(std::int64_t n, double beta,
                                         std::uint64_t master_seed,
                                         std::uint64_t replica) {
  if (n < 1) throw std::domain_error("sample_triangular_array: n must be >= 1");
  if (!(beta > 0.0))
    throw std::domain_error("sample_triangular_array: beta must be > 0");
  TriangularSample out;
  out.n = n;
  out.beta = beta;
  out.master_seed = master_seed;
  out.replica = replica;
  out.values.resize(static_cast<std::size_t>(n));
  const rng::SplitStream rep = rng::SplitStream(master_seed).fork(replica);
  for (std::int64_t i = 1; i <= n; ++i) {
    rng::SplitStream entry = rep.fork(static_cast<std::uint64_t>(i));
    out.values[static_cast<std::size_t>(i - 1)] =
        sample_chi(static_cast<double>(i) * beta, entry);
  }
  return out;
}

TridiagonalMatrix sample_tridiagonal(std::int64_t n, double beta,
                                     std::uint64_t master_seed,
                                     std::uint64_t replica) {
  if (n < 2) throw std::domain_error("sample_tridiagonal: n must be >= 2");
  if (!(beta > 0.0))
    throw std::domain_error("sample_tridiagonal: beta must be > 0");
  TridiagonalMatrix m;
  m.diagonal.resize(static_cast<std::size_t>(n));
  m.offdiagonal.resize(static_cast<std::size_t>(n - 1));
  const rng::SplitStream rep = rng::SplitStream(master_seed).fork(replica);
  // diagonal row r uses entry code 2r, offdiagonal j uses 2j+1
  for (std::int64_t r = 1; r <= n; ++r) {
    rng::SplitStream entry = rep.fork(static_cast<std::uint64_t>(2 * r));
    m.diagonal[static_cast<std::size_t>(r - 1)] =
        std::sqrt(2.0) * entry.next_normal();
  }
  for (std::int64_t j = 1; j <= n - 1; ++j) {
    rng::SplitStream entry = rep.fork(static_cast<std::uint64_t>(2 * j + 1));
    m.offdiagonal[static_cast<std::size_t>(j - 1)] =
        sample_chi(static_cast<double>(n - j) * beta, entry);
  }
  return m;
}

namespace {

constexpr char kMagic[8] = {'B', 'X', 'S', 'A', 'M', 'P', '0', '1'};

struct FileCloser {
  std::FILE* f;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_sample(const std::string& path, const TriangularSample& sample) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_sample: cannot open " + path);
  FileCloser closer{f};
  const std::uint64_t n = static_cast<std::uint64_t>(sample.n);
  bool ok = std::fwrite(kMagic, 1, 8, f) == 8;
  ok = ok && std::fwrite(&n, sizeof n, 1, f) == 1;
  ok = ok && std::fwrite(&sample.beta, sizeof sample.beta, 1, f) == 1;
  ok = ok && std::fwrite(&sample.master_seed, sizeof sample.master_seed, 1, f) == 1;
  ok = ok && std::fwrite(&sample.replica, sizeof sample.replica, 1, f) == 1;
  ok = ok && std::fwrite(sample.values.data(), sizeof(double),
                         sample.values.size(), f) == sample.values.size();
  if (!ok) throw std::runtime_error("write_sample: short write to " + path);
}

TriangularSample read_sample(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("read_sample: cannot open " + path);
  FileCloser closer{f};
  char magic[8];
  if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("read_sample: bad magic in " + path);
  TriangularSample out;
  std::uint64_t n = 0;
  bool ok = std::fread(&n, sizeof n, 1, f) == 1;
  ok = ok && std::fread(&out.beta, sizeof out.beta, 1, f) == 1;
  ok = ok && std::fread(&out.master_seed, sizeof out.master_seed, 1, f) == 1;
  ok = ok && std::fread(&out.replica, sizeof out.replica, 1, f) == 1;
  if (!ok) throw std::runtime_error("read_sample: truncated header in " + path);
  out.n = static_cast<std::int64_t>(n);
  out.values.resize(n);
  if (std::fread(out.values.data(), sizeof(double), n, f) != n)
    throw std::runtime_error("read_sample: truncated payload in " + path);
  return out;
}

double chi_mean(double k) {
  if (!(k > 0.0)) throw std::domain_error("chi_mean: k must be > 0");
  return std::sqrt(2.0) *
         std::exp(sf::log_gamma(0.5 * (k + 1.0)) - sf::log_gamma(0.5 * k));
}

double chi_variance(double k) {
  const double m = chi_mean(k);
  return k - m * m;
}

}  // namespace betax::sampling
