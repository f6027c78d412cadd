#include <doctest.h>

#include "adsflow/evolution_residual.hpp"
#include "adsflow/gauss_map.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace adsflow;

namespace {

SeedSpec grid(SeedSpec s, double lo, double hi, int nc, int nt) {
  s.chi_min = lo;
  s.chi_max = hi;
  s.n_chi = nc;
  s.n_theta = nt;
  return s;
}

Vec3 random_hyperboloid_point(SplitMix64& rng) {
  const double r = rng.uniform(0.0, 2.0);
  const double a = rng.uniform(0.0, 6.283185307179586);
  return Vec3(r * std::cos(a), r * std::sin(a), std::sqrt(r * r + 0.5));
}

struct MeshData {
  SurfaceMesh mesh;
  GeometryField fields;
  std::vector<Vec3> plus, minus;
};

MeshData build(const SeedSpec& spec) {
  MeshData d;
  d.mesh = seed_surface(spec, 1.0);
  d.fields = assemble_node_geometry(d.mesh);
  gauss_map_eval(d.mesh, d.fields, d.plus, d.minus);
  return d;
}

}  // namespace

TEST_CASE("endomorphism algebra holds exactly") {
  CHECK(endo_algebra_residual() == 0.0);
  // spot values: E2+ e1 = -e3, then E1+(-e3) = e2 = E3+ e1
  const Vec4 e1(1, 0, 0, 0);
  const Vec4 im = split_endomorphism(2, +1) * e1;
  CHECK(im == Vec4(0, 0, -1, 0));
  CHECK(split_endomorphism(1, +1) * im == Vec4(0, 1, 0, 0));
  CHECK(split_endomorphism(3, +1) * e1 == Vec4(0, 1, 0, 0));
}

TEST_CASE("symplectic form fixed values") {
  const Vec4 e1(1, 0, 0, 0), e2(0, 1, 0, 0), e3(0, 0, 1, 0), e4(0, 0, 0, 1);
  CHECK(symplectic_eval({3, +1}, e1, e2) == 1.0);
  CHECK(symplectic_eval({1, -1}, e2, e3) == 1.0);
  CHECK(symplectic_eval({1, -1}, e4, e1) == -1.0);
  // antisymmetry on random vectors
  for (int c = 0; c < 200; ++c) {
    SplitMix64 rng = case_rng(601, c);
    Vec4 u;
    for (int k = 0; k < 4; ++k) u[k] = rng.uniform(-3, 3);
    for (int A = 1; A <= 3; ++A)
      for (int d : {+1, -1}) CHECK(symplectic_eval({A, d}, u, u) == 0.0);
  }
}

TEST_CASE("split bases have the claimed orientations") {
  for (int c = 0; c < 500; ++c) {
    SplitMix64 rng = case_rng(602, c);
    Vec4 V;
    do {
      for (int k = 0; k < 4; ++k) V[k] = rng.uniform(-2, 2);
    } while (V.norm() < 0.1);
    Mat4 P, M;
    for (int A = 1; A <= 3; ++A) {
      P.col(A) = split_endomorphism(A, +1) * V;
      M.col(A) = split_endomorphism(A, -1) * V;
    }
    P.col(0) = V;
    M.col(0) = V;
    CHECK(P.determinant() > 0.0);
    CHECK(M.determinant() < 0.0);
  }
}

TEST_CASE("decomposition identity on random draws") {
  CHECK(decomp_residual(603, 10000) <= 1e-12);
  // trivial instance: e = V = W spacelike unit
  const Vec4 e(1, 0, 0, 0);
  double acc = dot22(e, e) * dot22(e, e);
  const double signs[3] = {-1, -1, +1};
  for (int A = 1; A <= 3; ++A)
    acc += signs[A - 1] * symplectic_eval({A, +1}, e, e) * symplectic_eval({A, +1}, e, e);
  CHECK(acc == 1.0);
}

TEST_CASE("hyperbolic complex structure squares to minus one") {
  double worst = 0.0;
  for (int c = 0; c < 2000; ++c) {
    SplitMix64 rng = case_rng(604, c);
    const Vec3 p = random_hyperboloid_point(rng);
    Vec3 X;
    for (int k = 0; k < 3; ++k) X[k] = rng.uniform(-2, 2);
    X += (dot21(X, p) / 0.5) * p;  // project onto the tangent plane
    CHECK(std::fabs(dot21(X, p)) <= 1e-12 * (1.0 + X.norm() * p.norm()));
    const Vec3 JX = hyperbolic_J(p, X);
    worst = std::max(worst, (hyperbolic_J(p, JX) + X).norm() /
                                std::max(1.0, X.norm()));
    // J is isometric on the tangent plane
    worst = std::max(worst, std::fabs(dot21(JX, JX) - dot21(X, X)) /
                                std::max(1.0, dot21(X, X)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("geodesic slice gauss map has the closed form") {
  const MeshData d = build(grid(SeedSpec::geodesic(), 0.5, 1.5, 16, 16));
  const double inv_sqrt2 = 0.70710678118654752440;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double chi = d.mesh.chi(i), th = d.mesh.theta(j);
      const Vec3 expect(-std::sinh(chi) * std::cos(th) * inv_sqrt2,
                        std::sinh(chi) * std::sin(th) * inv_sqrt2,
                        std::cosh(chi) * inv_sqrt2);
      const std::size_t k = static_cast<std::size_t>(d.mesh.idx(i, j));
      CHECK((d.plus[k] - expect).norm() <= 1e-12);
      CHECK((d.minus[k] - expect).norm() <= 1e-12);  // diagonal image
      CHECK(std::fabs(dot21(d.plus[k], d.plus[k]) + 0.5) <= 1e-12);
    }
}

TEST_CASE("hyperboloid constraint is frame-algebraic on random meshes") {
  for (int rep = 0; rep < 4; ++rep) {
    SplitMix64 rng = case_rng(605, rep);
    const double amp = rng.uniform(0.01, 0.08);
    const int mode = rng.uniform_int(1, 3);
    const MeshData d = build(grid(
        SeedSpec::perturbation_of(SeedSpec::umbilic(rng.uniform(-0.5, 0.5)).base,
                                  amp, mode, rng.next()),
        0.25, 2.25, 32, 32));
    double worst = 0.0;
    for (const auto& g : d.plus)
      worst = std::max(worst, std::fabs(dot21(g, g) + 0.5));
    for (const auto& g : d.minus)
      worst = std::max(worst, std::fabs(dot21(g, g) + 0.5));
    CHECK(worst <= 1e-12);
    for (const auto& g : d.plus) CHECK(g[2] > 0.0);
    for (const auto& g : d.minus) CHECK(g[2] > 0.0);
  }
}

TEST_CASE("frame rotation leaves the gauss map unchanged") {
  const MeshData d = build(grid(
      SeedSpec::perturbation_of(SeedSpec::umbilic(0.3).base, 0.05, 2, 17), 0.25,
      2.25, 16, 16));
  SplitMix64 rng = case_rng(606, 0);
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const int i = rng.uniform_int(0, 15), j = rng.uniform_int(0, 15);
    const NodeGeometry& nd = d.fields.at(i, j);
    // orthonormal frame, rotated by a random angle
    const double n1 = std::sqrt(nd.g(0, 0));
    const Vec4 E1 = nd.F1 / n1;
    Vec4 E2 = nd.F2 - dot22(nd.F2, E1) * E1;
    E2 /= std::sqrt(dot22(E2, E2));
    const double a = rng.uniform(0.0, 6.283185307179586);
    const Vec4 R1 = std::cos(a) * E1 + std::sin(a) * E2;
    const Vec4 R2 = -std::sin(a) * E1 + std::cos(a) * E2;
    const std::size_t k = static_cast<std::size_t>(d.mesh.idx(i, j));
    for (int A = 1; A <= 3; ++A) {
      const double inv_sqrt2 = 0.70710678118654752440;
      worst = std::max(worst, std::fabs(inv_sqrt2 * symplectic_eval({A, +1}, R1, R2) -
                                        d.plus[k][A - 1]));
      worst = std::max(worst, std::fabs(inv_sqrt2 * symplectic_eval({A, -1}, R1, R2) -
                                        d.minus[k][A - 1]));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("induced metric, tau = dphi and the Lagrangian condition converge") {
  double ind[3], tau[3], lag[3];
  int k = 0;
  for (const int N : {16, 32, 64}) {
    const MeshData d = build(grid(
        SeedSpec::perturbation_of(SeedSpec::umbilic(0.3).base, 0.05, 2, 3), 0.25,
        2.25, N, N));
    ind[k] = gauss_residual(d.mesh, d.fields, d.plus, d.minus,
                            GaussResidualKind::InducedMetric).sup;
    tau[k] = gauss_residual(d.mesh, d.fields, d.plus, d.minus,
                            GaussResidualKind::TauEqualsDphi).sup;
    lag[k] = gauss_residual(d.mesh, d.fields, d.plus, d.minus,
                            GaussResidualKind::Lagrangian).sup;
    ++k;
  }
  CHECK(std::log2(ind[1] / ind[2]) >= 1.8);
  CHECK(std::log2(tau[1] / tau[2]) >= 1.8);
  CHECK(std::log2(lag[1] / lag[2]) >= 1.8);
}

TEST_CASE("geodesic slice residuals sit at the discretization floor") {
  const MeshData d = build(grid(SeedSpec::geodesic(), 0.5, 1.5, 32, 32));
  // h = 0, so sigma = g and both sides are tiny
  CHECK(gauss_residual(d.mesh, d.fields, d.plus, d.minus,
                       GaussResidualKind::TauEqualsDphi).sup <= 1e-12);
  CHECK(gauss_residual(d.mesh, d.fields, d.plus, d.minus,
                       GaussResidualKind::Lagrangian).sup <= 1e-10);
}

namespace {

RunResult gauss_run(int N, int level) {
  SeedSpec seed = grid(
      SeedSpec::perturbation_of(SeedSpec::umbilic(0.3).base, 0.05, 2, 11), 0.25,
      2.25, N, N);
  FlowConfig cfg;
  cfg.mode = FlowMode::Mesh;
  cfg.kappa = 1.0;
  cfg.initial = seed;
  cfg.integrator = Integrator::Euler;
  cfg.dt.cfl_factor = 0.25;
  cfg.store_gauss = true;
  const double dt = cfg.resolved_dt();
  const long steps = 24L << (2 * level);
  cfg.t_end = static_cast<double>(steps) * dt;
  cfg.snapshot_every = 8;
  cfg.monitor_every = static_cast<int>(steps);
  return run_flow(cfg);
}

}  // namespace

TEST_CASE("gauss map evolution relations converge along the flow") {
  double ev[2], rt[2], rn[2];
  int k = 0;
  for (const int N : {32, 64}) {
    const RunResult run = gauss_run(N, k + 1);
    REQUIRE(!run.aborted);
    const std::size_t mid = 2u << (2 * (k + 1));
    const GaussFlowResidual r = gauss_flow_residual(
        run.snapshots[mid - 1], run.snapshots[mid], run.snapshots[mid + 1]);
    ev[k] = r.evolution;
    rt[k] = r.relation_tangent;
    rn[k] = r.relation_normal;
    ++k;
  }
  CHECK(std::log2(ev[0] / ev[1]) >= 1.5);
  CHECK(std::log2(rt[0] / rt[1]) >= 1.5);
  CHECK(std::log2(rn[0] / rn[1]) >= 1.5);
}

TEST_CASE("umbilic family freezes the gauss map") {
  // spatially constant angle kills the sigma-gradient, so dG/dt -> 0
  double sup[2];
  int k = 0;
  for (const int N : {32, 64}) {
    SeedSpec seed = grid(SeedSpec::umbilic(0.5), 0.25, 2.25, N, N);
    FlowConfig cfg;
    cfg.mode = FlowMode::Mesh;
    cfg.kappa = 1.0;
    cfg.initial = seed;
    cfg.integrator = Integrator::Euler;
    cfg.dt.cfl_factor = 0.25;
    cfg.store_gauss = true;
    const double dt = cfg.resolved_dt();
    const long steps = 24L << (2 * (k + 1));
    cfg.t_end = static_cast<double>(steps) * dt;
    cfg.snapshot_every = 8;
    cfg.monitor_every = static_cast<int>(steps);
    const RunResult run = run_flow(cfg);
    REQUIRE(!run.aborted);
    const std::size_t mid = 2u << (2 * (k + 1));
    const GaussFlowResidual r = gauss_flow_residual(
        run.snapshots[mid - 1], run.snapshots[mid], run.snapshots[mid + 1]);
    sup[k] = r.sup_dGdt;
    ++k;
  }
  CHECK(std::log2(sup[0] / sup[1]) >= 1.5);
}
