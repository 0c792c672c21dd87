#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "aikawa/assouad.hpp"
#include "aikawa/fractal.hpp"
#include "aikawa/rng.hpp"

using namespace aikawa;

TEST_CASE("full space: every ratio is 1 and both slopes vanish") {
  const Generated g = make_full(1, 256);
  SamplingParams params;
  params.centers = 16;
  params.seed = 5;
  const auto samples = ratio_samples(g.space, g.set, params);
  REQUIRE(!samples.empty());
  for (const auto& s : samples) CHECK(s.ratio == 1.0);
  CHECK(lower_codim(samples).slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(upper_codim(samples).slope == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sample invariants hold on cantor(6)") {
  const Generated g = make_cantor(6);
  SamplingParams params;
  params.centers = 16;
  params.seed = 11;
  const auto samples = ratio_samples(g.space, g.set, params);
  const double diam = set_diameter(g.set);
  REQUIRE(!samples.empty());
  for (const auto& s : samples) {
    CHECK(s.r > 0.0);
    CHECK(s.r < s.R);
    CHECK(s.R < diam);
    CHECK(s.ratio > 0.0);
    CHECK(s.ratio <= 1.0);
  }
}

TEST_CASE("point with ambient-diameter convention scales like (r/R)^2") {
  const Generated g = make_point(2, 256);
  SamplingParams params;
  params.centers = 1;
  params.seed = 1;
  params.ambient_diameter = grid_diameter(g.space);
  const auto samples = ratio_samples(g.space, g.set, params);
  REQUIRE(!samples.empty());
  for (const auto& s : samples) {
    if (s.r < 4.0 * g.space.cell()) continue;  // too few cells to be round
    CHECK(s.ratio ==
          doctest::Approx((s.r / s.R) * (s.r / s.R)).epsilon(0.35));
  }
  const ExponentFit fit = upper_codim(samples);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("degenerate set without ambient diameter is rejected") {
  const Generated g = make_point(2, 64);
  SamplingParams params;
  CHECK_THROWS_WITH_AS(static_cast<void>(ratio_samples(g.space, g.set, params)),
                       "degenerate set: supply ambient diameter",
                       std::invalid_argument);
}

TEST_CASE("estimators are permutation invariant") {
  const Generated g = make_cantor(5);
  SamplingParams params;
  params.centers = 8;
  params.seed = 2;
  auto samples = ratio_samples(g.space, g.set, params);
  const ExponentFit lo = lower_codim(samples);
  const ExponentFit hi = upper_codim(samples);
  Rng rng(99);
  for (std::size_t i = samples.size(); i > 1; --i)
    std::swap(samples[i - 1],
              samples[static_cast<std::size_t>(rng.below(static_cast<std::int64_t>(i)))]);
  CHECK(lower_codim(samples).slope == lo.slope);
  CHECK(upper_codim(samples).slope == hi.slope);
}

TEST_CASE("slopes are exactly invariant under uniform length scaling") {
  const Generated g = make_cantor(5);
  SamplingParams params;
  params.centers = 8;
  params.seed = 3;
  const auto base = ratio_samples(g.space, g.set, params);

  const double lambda = 4.0;
  GridSet space2(g.space.shape(), g.space.cell() * lambda,
                 {g.space.origin()[0] * lambda});
  for (std::int64_t i = 0; i < g.space.cells(); ++i) space2.set(i, true);
  GridSet set2(space2.shape(), space2.cell(), space2.origin());
  for (const auto c : g.set.set_cells()) set2.set(c);
  const auto scaled = ratio_samples(space2, set2, params);

  REQUIRE(base.size() == scaled.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(base[i].ratio == scaled[i].ratio);
  CHECK(lower_codim(base).slope == lower_codim(scaled).slope);
}

TEST_CASE("lower codim never exceeds upper codim by more than tolerance") {
  for (const char* kind : {"cantor(5)", "sierpinski_carpet(3)"}) {
    const Generated g = generate(kind);
    SamplingParams params;
    params.centers = 32;
    params.seed = 17;
    const auto samples = ratio_samples(g.space, g.set, params);
    const ExponentFit lo = lower_codim(samples);
    const ExponentFit hi = upper_codim(samples);
    CHECK(lo.slope <= hi.slope + 2.0 * (lo.residual_rms + hi.residual_rms) + 0.05);
  }
}

TEST_CASE("cantor(6) slopes approximate 1 - log2/log3") {
  const Generated g = make_cantor(6);
  SamplingParams params;
  params.centers = 64;
  params.seed = 1;
  const auto samples = ratio_samples(g.space, g.set, params);
  const double expected = 1.0 - std::log(2.0) / std::log(3.0);
  CHECK(lower_codim(samples).slope == doctest::Approx(expected).epsilon(0.2));
  CHECK(upper_codim(samples).slope == doctest::Approx(expected).epsilon(0.2));
}

TEST_CASE("upper codim bounded by the doubling exponent") {
  const Generated g = make_cantor(6);
  SamplingParams params;
  params.centers = 32;
  params.seed = 23;
  const auto fit = upper_codim(ratio_samples(g.space, g.set, params));
  const DoublingReport rep = doubling_report(g.space, 32, 23);
  CHECK(fit.slope <= rep.s_hat + 0.15);
}
