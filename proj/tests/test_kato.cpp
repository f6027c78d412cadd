#include <doctest.h>

#include "adsflow/kato.hpp"
#include "oracles.hpp"

using namespace adsflow;

namespace {

Sym3 random_sym3(SplitMix64& rng, double scale = 2.0) {
  return Sym3::from_components(rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                               rng.uniform(-scale, scale), rng.uniform(-scale, scale));
}

}  // namespace

TEST_CASE("umbilic h makes both sides vanish") {
  SplitMix64 rng = case_rng(301, 0);
  for (int c = 0; c < 100; ++c) {
    const MatN g = oracle::random_spd(rng, 2);
    const Mat2 g2 = g.topLeftCorner<2, 2>();
    const Mat2 h = rng.uniform(-2, 2) * g2;  // tracefree part is zero
    const Sym3 T = random_sym3(rng);
    const KatoResult r = kato_check(g2, h, T);
    CHECK(r.kato <= 1e-12 * r.scale);
    CHECK(r.cor_i <= 1e-12 * r.scale);
  }
}

TEST_CASE("fixed diagonal case") {
  Mat2 h;
  h << 1, 0, 0, 2;
  SplitMix64 rng = case_rng(302, 0);
  for (int c = 0; c < 100; ++c) {
    const Sym3 T = random_sym3(rng);
    const KatoResult r = kato_check(Mat2::Identity(), h, T);
    CHECK(r.kato <= 1e-12 * r.scale);
    CHECK(r.kato2 <= 1e-12 * r.scale);
    CHECK(r.cor_i <= 1e-12 * r.scale);
  }
}

TEST_CASE("identities hold on random ensembles") {
  double worst = 0.0, worst2 = 0.0, worst_i = 0.0, worst_gap = 0.0;
  for (int c = 0; c < 10000; ++c) {
    SplitMix64 rng = case_rng(303, c);
    const MatN g = oracle::random_spd(rng, 2);
    const MatN h = oracle::random_sym(rng, 2);
    const Sym3 T = random_sym3(rng);
    const KatoResult r =
        kato_check(g.topLeftCorner<2, 2>(), h.topLeftCorner<2, 2>(), T);
    worst = std::max(worst, r.kato / r.scale);
    worst2 = std::max(worst2, r.kato2 / r.scale);
    worst_i = std::max(worst_i, r.cor_i / r.scale);
    // the truncated variant misses exactly the |grad H|^2 completion term
    worst_gap = std::max(worst_gap, r.cor_i_truncated_gap / r.scale);
  }
  CHECK(worst <= 1e-10);
  CHECK(worst2 <= 1e-10);
  CHECK(worst_i <= 1e-10);
  CHECK(worst_gap <= 1e-10);
}

TEST_CASE("optimal identity on gradient-free mean curvature draws") {
  double worst = 0.0;
  for (int c = 0; c < 5000; ++c) {
    SplitMix64 rng = case_rng(304, c);
    const MatN g = oracle::random_spd(rng, 2);
    const MatN h = oracle::random_sym(rng, 2);
    const Mat2 g2 = g.topLeftCorner<2, 2>();
    const Sym3 T = remove_trace(g2, random_sym3(rng));
    const KatoResult r = kato_check(g2, h.topLeftCorner<2, 2>(), T);
    REQUIRE(r.grad_H_norm <= 1e-12);
    CHECK(!std::isnan(r.cor_ii));
    worst = std::max(worst, r.cor_ii / r.scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("non-symmetric T is rejected") {
  Sym3 T = Sym3::from_components(1, 0.5, -0.2, 2);
  T(0, 1, 0) += 1e-3;
  CHECK_THROWS_AS(kato_check(Mat2::Identity(), Mat2::Identity(), T),
                  ContractViolation);
}
