#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "betax/rng.hpp"
#include "betax/scaling.hpp"
#include "betax/special_functions.hpp"
#include "test_support.hpp"

using namespace betax;
using betax::test::rel_err;
using scaling::Regime;

namespace {
double loglog(double n) { return std::log(std::log(n)); }
}

TEST_CASE("classify_regime on the three reference points") {
  {
    const auto c = scaling::classify_regime(1'000'000, std::pow(1e6, -1.5));
    CHECK(c.regime == Regime::A);
    CHECK(rel_err(c.diag.n2_beta, 1000.0) < 1e-12);
    CHECK(rel_err(c.diag.nbeta_loglog, 1e-3 * loglog(1e6)) < 1e-12);
  }
  {
    const auto c = scaling::classify_regime(1'000'000, 2.0 * 0.5 / 1e6);
    CHECK(c.regime == Regime::C);
    CHECK(rel_err(c.gamma_hint, 0.5) < 1e-12);
  }
  {
    const double beta = 1.0 / (1e6 * std::sqrt(loglog(1e6)));
    const auto c = scaling::classify_regime(1'000'000, beta);
    CHECK(c.regime == Regime::B);
    CHECK(c.diag.nbeta_loglog > 1.0);
    CHECK(c.diag.nbeta < 0.8);
  }
}

TEST_CASE("classify_regime ambiguity band and stability") {
  CHECK_THROWS_AS(scaling::classify_regime(1'000'000, 0.3 / 1e6),
                  scaling::RegimeAmbiguityError);
  const double betas[] = {std::pow(1e6, -1.5), 1.0 / 1e6,
                          1.0 / (1e6 * std::sqrt(loglog(1e6)))};
  for (const double b : betas) {
    const auto base = scaling::classify_regime(1'000'000, b).regime;
    CHECK(scaling::classify_regime(1'000'000, b * (1.0 + 1e-9)).regime == base);
    CHECK(scaling::classify_regime(1'000'000, b * (1.0 - 1e-9)).regime == base);
  }
  CHECK_THROWS_AS(scaling::classify_regime(8, 0.01), std::domain_error);
  CHECK_THROWS_AS(scaling::classify_regime(100, 0.0), std::domain_error);
}

TEST_CASE("regime A pair at analytically convenient points") {
  // n^2 beta = e^e: log log = 1, a = sqrt(2e), b = a - 1/a
  const double beta = std::exp(std::exp(1.0)) / (16.0 * 16.0);
  const auto p = scaling::scaling_regime_A(16, beta);
  CHECK(rel_err(p.a_n, 2.3316439815971242034) < 1e-14);
  CHECK(rel_err(p.b_n, 1.9027620391167708051) < 1e-14);

  // boundary n^2 beta = e: loglog = 0, b = a = sqrt(2)
  const auto edge = scaling::scaling_regime_A(16, std::exp(1.0) / 256.0);
  CHECK(rel_err(edge.a_n, std::sqrt(2.0)) < 1e-14);
  CHECK(std::fabs(edge.b_n - edge.a_n) < 1e-15);
  CHECK_THROWS_AS(scaling::scaling_regime_A(16, 0.999 * std::exp(1.0) / 256.0),
                  std::domain_error);
}

TEST_CASE("regime A pair matches an independent recomputation") {
  const auto p = scaling::scaling_regime_A(100'000, std::pow(10.0, -7.5));
  CHECK(rel_err(p.a_n, 3.3930702122075558989) < 1e-14);
  CHECK(rel_err(p.b_n, 2.8772178815293357128) < 1e-14);
}

TEST_CASE("regime B pair") {
  // n = round(e^(e^e)): loglog n is e and logloglog n is 1 to ~1e-8
  const std::int64_t n = 3'814'279;
  CHECK(std::fabs(loglog(static_cast<double>(n)) - std::exp(1.0)) < 1e-6);
  CHECK(std::fabs(std::log(loglog(static_cast<double>(n))) - 1.0) < 1e-6);

  // beta -> 0 leaves the chi-free Gumbel form a - (loglog n + logloglog n)/a
  const auto free_form = scaling::scaling_regime_B(n, 0.0);
  const double ll = loglog(static_cast<double>(n));
  CHECK(rel_err(free_form.b_n, free_form.a_n - (ll + std::log(ll)) / free_form.a_n) <
        1e-14);

  const double beta = 1.0 / (1e6 * std::sqrt(loglog(1e6)));
  const auto p = scaling::scaling_regime_B(1'000'000, beta);
  CHECK(rel_err(p.a_n, 5.2565217697569319786) < 1e-14);
  CHECK(rel_err(p.b_n, 4.7274723725709172331) < 1e-14);
  CHECK_THROWS_AS(scaling::scaling_regime_B(15, beta), std::domain_error);
}

TEST_CASE("regime C pair and its constant term") {
  const auto p = scaling::scaling_regime_C(1'000'000, 0.5);
  CHECK(rel_err(p.a_n, 5.2044740764600337954) < 1e-14);
  CHECK(rel_err(p.b_n, 4.8441475612215194335) < 1e-14);

  // logGamma(1/2) = log sqrt(pi) enters the centering exactly
  const double big_l = 0.5 * p.a_n * p.a_n;
  const double c_term = (p.b_n - p.a_n) * p.a_n - (0.5 - 1.0) * std::log(big_l);
  CHECK(rel_err(c_term, -0.5 * std::log(3.14159265358979323846)) < 1e-12);

  // the constant (gamma-1) log L - logGamma(gamma) stays negative on (0,1)
  // and vanishes at the gamma -> 1 edge
  for (double g = 0.1; g < 0.95; g += 0.1) {
    const auto pg = scaling::scaling_regime_C(1'000'000, g);
    const double lg = 0.5 * pg.a_n * pg.a_n;
    const double c = (g - 1.0) * std::log(lg) - sf::log_gamma(g);
    CHECK(c < 0.0);
  }
  const auto edge = scaling::scaling_regime_C(1'000'000, 1.0 - 1e-9);
  CHECK(std::fabs((edge.b_n - edge.a_n) * edge.a_n) < 1e-7);

  CHECK_THROWS_AS(scaling::scaling_regime_C(1000, 0.0), std::domain_error);
  CHECK_THROWS_AS(scaling::scaling_regime_C(1000, 1.0), std::domain_error);
}

TEST_CASE("regime C equals the i.i.d. chi(2 gamma) pair at m = n/(gamma loglog n)") {
  // classical Gumbel pair for m i.i.d. chi(k) draws, written as a closed form
  auto iid_chi_pair = [](double m, double k) {
    const double big_l = std::log(m);
    const double a = std::sqrt(2.0 * big_l);
    const double b =
        a + ((0.5 * k - 1.0) * std::log(big_l) - sf::log_gamma(0.5 * k)) / a;
    return std::pair<double, double>(a, b);
  };
  rng::SplitStream s(5);
  for (int i = 0; i < 10; ++i) {
    const std::int64_t n = 1000 + static_cast<std::int64_t>(s.next_unit() * 9e6);
    const double g = 0.05 + 0.9 * s.next_unit();
    const auto p = scaling::scaling_regime_C(n, g);
    const double m = static_cast<double>(n) / (g * loglog(static_cast<double>(n)));
    const auto [ea, eb] = iid_chi_pair(m, 2.0 * g);
    CHECK(rel_err(p.a_n, ea) < 1e-14);
    CHECK(rel_err(p.b_n, eb) < 1e-14);
  }
}

TEST_CASE("gaussian comparison pair") {
  const auto p = scaling::scaling_gaussian(1'000'000);
  CHECK(rel_err(p.a_n, 7.4338443776996768939) < 1e-13);
  CHECK(rel_err(p.a_n, 2.0 * std::sqrt(std::log(1e6))) < 1e-13);
  CHECK(rel_err(p.b_n, 6.7401499849417506332) < 1e-13);
  for (const std::int64_t n : {16, 100, 10'000, 1'000'000})
    CHECK(scaling::scaling_gaussian(n).b_n < scaling::scaling_gaussian(n).a_n);
  CHECK_THROWS_AS(scaling::scaling_gaussian(15), std::domain_error);
}

TEST_CASE("phi and phi_inverse") {
  const scaling::ScalingPair p{2.0, 3.0, Regime::C};
  CHECK(scaling::phi(p, 0.0) == 3.0);
  CHECK(scaling::phi(p, 4.0) == 5.0);
  rng::SplitStream s(3);
  const auto real_pair = scaling::scaling_regime_C(100'000, 0.4);
  for (int i = 0; i < 1000; ++i) {
    const double x = -10.0 + 20.0 * s.next_unit();
    const double back = scaling::phi_inverse(real_pair, scaling::phi(real_pair, x));
    CHECK(std::fabs(back - x) < 1e-12 * std::max(1.0, std::fabs(x)));
  }
}

TEST_CASE("pair ladders: slopes and centers grow, b/a approaches 1") {
  const std::vector<std::int64_t> ladder = {10'000, 100'000, 1'000'000, 10'000'000};
  scaling::RegimeConfig cfgs[3];
  cfgs[0] = {Regime::A, 10'000, 1.5, 0.5, 0.5};
  cfgs[1] = {Regime::B, 10'000, 1.5, 0.5, 0.5};
  cfgs[2] = {Regime::C, 10'000, 1.5, 0.5, 0.5};
  for (const auto& cfg : cfgs) {
    double prev_a = 0.0, prev_b = -1e300, prev_gap = 1e300;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const auto p = cfg.pair_at(ladder[i]);
      CHECK(p.a_n > prev_a);
      CHECK(p.b_n > prev_b);
      const double gap = std::fabs(p.b_n / p.a_n - 1.0);
      CHECK(gap < prev_gap);  // monotone approach of b/a to 1
      if (i + 1 == ladder.size()) CHECK(gap < 0.2);
      prev_a = p.a_n;
      prev_b = p.b_n;
      prev_gap = gap;
    }
  }
}

TEST_CASE("RegimeConfig validation and beta_at") {
  scaling::RegimeConfig cfg;
  cfg.regime = Regime::C;
  cfg.n = 1'000'000;
  cfg.gamma = 0.5;
  cfg.validate();
  CHECK(rel_err(cfg.beta_at(1'000'000), 1e-6) < 1e-14);

  cfg.regime = Regime::A;
  cfg.beta_exponent = 1.5;
  cfg.validate();
  CHECK(rel_err(cfg.beta_at(10'000), 1e-6) < 1e-14);
  cfg.beta_exponent = 2.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg.regime = Regime::B;
  cfg.loglog_exponent = 0.5;
  cfg.validate();
  CHECK(rel_err(cfg.beta_at(1'000'000),
                1.0 / (1e6 * std::sqrt(loglog(1e6)))) < 1e-14);
  cfg.loglog_exponent = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = scaling::RegimeConfig{};
  cfg.n = 8;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = scaling::RegimeConfig{};
  cfg.regime = Regime::Gaussian;
  cfg.validate();
  CHECK_THROWS_AS(cfg.beta_at(1000), std::invalid_argument);
}
