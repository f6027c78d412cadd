#include <doctest.h>

#include "adsflow/pseudo_euclidean.hpp"
#include "oracles.hpp"

using namespace adsflow;

namespace {

Vec4 random_quadric_point(SplitMix64& rng, double kappa) {
  // temporal part dominates, so the vector is timelike
  const double r = rng.uniform(0.0, 2.0);
  const double a = rng.uniform(0.0, 6.283185307179586);
  const double rho = r + rng.uniform(0.2, 2.0);
  const double b = rng.uniform(0.0, 6.283185307179586);
  const Vec4 v(r * std::cos(a), r * std::sin(a), rho * std::cos(b), rho * std::sin(b));
  return quadric_project(v, kappa);
}

Vec4 project_tangent(const Vec4& u, const Vec4& F) {
  return u - (dot22(u, F) / dot22(F, F)) * F;
}

}  // namespace

TEST_CASE("inner product basis values") {
  const auto e1 = AmbientVector::r42(1, 0, 0, 0);
  const auto e4 = AmbientVector::r42(0, 0, 0, 1);
  CHECK(inner(e1, e1) == 1.0);
  CHECK(inner(e4, e4) == -1.0);
  const auto u = AmbientVector::r42(1, 2, 3, 4);
  const auto v = AmbientVector::r42(4, 3, 2, 1);
  CHECK(inner(u, v) == 0.0);  // 4 + 6 - 6 - 4
}

TEST_CASE("inner rejects mismatched signature tags") {
  const auto u = AmbientVector::r42(1, 0, 0, 0);
  const auto v = AmbientVector::r31(1, 0, 0);
  CHECK_THROWS_AS(inner(u, v), ContractViolation);
  CHECK(inner(v, v) == 1.0);
}

TEST_CASE("inner is bilinear and symmetric on random triples") {
  double worst = 0.0;
  for (int c = 0; c < 10000; ++c) {
    SplitMix64 rng = case_rng(101, c);
    Vec4 u, v, w;
    for (int k = 0; k < 4; ++k) {
      u[k] = rng.uniform(-5, 5);
      v[k] = rng.uniform(-5, 5);
      w[k] = rng.uniform(-5, 5);
    }
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const double scale = u.norm() * w.norm() + v.norm() * w.norm() + 1.0;
    worst = std::max(worst,
                     std::fabs(dot22(a * u + b * v, w) - a * dot22(u, w) - b * dot22(v, w)) / scale);
    worst = std::max(worst, std::fabs(dot22(u, v) - dot22(v, u)) / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("normal completion of the standard frame") {
  const Vec4 F(0, 0, 1, 0);
  const Vec4 nu = normal_completion(F, Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0));
  CHECK(nu.isApprox(Vec4(0, 0, 0, 1), 1e-14));
}

TEST_CASE("normal completion on a geodesic-slice node") {
  const double chi = 0.8, th = 0.3;
  const Vec4 F(std::sinh(chi) * std::cos(th), std::sinh(chi) * std::sin(th),
               std::cosh(chi), 0.0);
  const Vec4 T1(std::cosh(chi) * std::cos(th), std::cosh(chi) * std::sin(th),
                std::sinh(chi), 0.0);
  const Vec4 T2(-std::sinh(chi) * std::sin(th), std::sinh(chi) * std::cos(th), 0.0,
                0.0);
  const Vec4 nu = normal_completion(F, T1, T2);
  CHECK(nu.isApprox(Vec4(0, 0, 0, 1), 1e-12));
}

TEST_CASE("normal completion rejects a degenerate span") {
  const Vec4 F(0, 0, 1, 0);
  const Vec4 T(1, 0, 0, 0);
  CHECK_THROWS_AS(normal_completion(F, T, 2.0 * T), DegenerateFrame);
}

TEST_CASE("normal completion rejects a non-spacelike frame") {
  // T2 timelike: the orthogonal complement of {F,T1,T2} is spacelike
  const Vec4 F(0, 0, 1, 0);
  CHECK_THROWS_AS(normal_completion(F, Vec4(1, 0, 0, 0), Vec4(0, 0, 0, 1)),
                  NoTimelikeCompletion);
}

TEST_CASE("normal completion orthonormality and orientation ensemble") {
  int done = 0;
  for (int c = 0; done < 10000; ++c) {
    SplitMix64 rng = case_rng(102, c);
    const double kappa = rng.uniform(0.5, 2.0);
    const Vec4 F = random_quadric_point(rng, kappa);
    Vec4 T1, T2;
    for (int k = 0; k < 4; ++k) {
      T1[k] = rng.uniform(-2, 2);
      T2[k] = rng.uniform(-2, 2);
    }
    T1 = project_tangent(T1, F);
    T2 = project_tangent(T2, F);
    // keep only genuinely spacelike frames
    const double a = dot22(T1, T1), b = dot22(T1, T2), d = dot22(T2, T2);
    if (!(a > 0.05 && a * d - b * b > 0.01)) continue;
    ++done;
    const Vec4 nu = normal_completion(F, T1, T2);
    const double scale = 1.0 + nu.norm() * (F.norm() + T1.norm() + T2.norm());
    CHECK(std::fabs(dot22(nu, nu) + 1.0) <= 1e-10 * scale);
    CHECK(std::fabs(dot22(nu, F)) <= 1e-10 * scale);
    CHECK(std::fabs(dot22(nu, T1)) <= 1e-10 * scale);
    CHECK(std::fabs(dot22(nu, T2)) <= 1e-10 * scale);
    CHECK(is_future_directed(nu, F));
  }
}

TEST_CASE("generalized eigenvalues, fixed cases") {
  MatN g = MatN::Identity(2, 2);
  MatN h(2, 2);
  h << 2, 0, 0, 3;
  VecN ev = generalized_eigen(g, h);
  CHECK(ev[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));

  ev = generalized_eigen(MatN(2.0 * MatN::Identity(2, 2)),
                         MatN(2.0 * MatN::Identity(2, 2)));
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-14));

  g.resize(2, 2);
  g << 2, 1, 1, 1;
  h << 3, 1, 1, 1;
  ev = generalized_eigen(g, h);
  // cross-check against the library solver
  const VecN ref = oracle::eigenvalues(g, h);
  CHECK(ev[0] == doctest::Approx(ref[0]).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(ref[1]).epsilon(1e-12));
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("generalized eigenvalues are congruence invariant") {
  double worst = 0.0;
  for (int c = 0; c < 1000; ++c) {
    SplitMix64 rng = case_rng(103, c);
    const MatN g = oracle::random_spd(rng, 2);
    const MatN h = oracle::random_sym(rng, 2);
    MatN P(2, 2);
    do {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) P(i, j) = rng.uniform(-2, 2);
    } while (std::fabs(P.determinant()) < 0.2);
    const VecN ev = generalized_eigen(g, h);
    const VecN evc = generalized_eigen(MatN(P.transpose() * g * P),
                                       MatN(P.transpose() * h * P));
    for (int k = 0; k < 2; ++k)
      worst = std::max(worst, std::fabs(ev[k] - evc[k]) /
                                  std::max(1.0, std::fabs(ev[k])));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("generalized eigenvalues reject non positive definite g") {
  MatN g(2, 2);
  g << 1, 2, 2, 1;
  CHECK_THROWS_AS(generalized_eigen(g, MatN(MatN::Identity(2, 2))),
                  ContractViolation);
}

TEST_CASE("quadric projection") {
  CHECK(quadric_project(Vec4(0, 0, 2, 0), 1.0).isApprox(Vec4(0, 0, 1, 0)));
  CHECK(quadric_project(Vec4(0, 0, 1, 0), 4.0).isApprox(Vec4(0, 0, 0.5, 0)));
  CHECK_THROWS_AS(quadric_project(Vec4(1, 0, 1, 0), 1.0), NotProjectable);

  // idempotence
  double worst = 0.0;
  for (int c = 0; c < 1000; ++c) {
    SplitMix64 rng = case_rng(104, c);
    const double kappa = rng.uniform(0.5, 2.0);
    const Vec4 F = random_quadric_point(rng, kappa);
    const double rel = (quadric_project(F, kappa) - F).cwiseAbs().maxCoeff() /
                       std::max(1.0, F.cwiseAbs().maxCoeff());
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 1e-15);
}
