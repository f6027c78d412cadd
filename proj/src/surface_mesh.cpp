#include "adsflow/surface_mesh.hpp"

#include "adsflow/rng.hpp"

#include <cmath>

namespace adsflow {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

constexpr double kTwoPi = 6.283185307179586476925;

}  // namespace

Vec4 seed_point(const SeedBase& base, double kappa, double chi, double theta) {
  const double rk = 1.0 / std::sqrt(kappa);
  const double sh = std::sinh(chi), ch = std::cosh(chi);
  const double ct = std::cos(theta), st = std::sin(theta);
  switch (base.kind) {
    case SeedKind::GeodesicSlice:
      return rk * Vec4(sh * ct, sh * st, ch, 0.0);
    case SeedKind::UmbilicSlice: {
      const double rho = std::sqrt(1.0 - base.s * base.s);
      return rk * Vec4(rho * sh * ct, rho * sh * st, rho * ch, base.s);
    }
    case SeedKind::GraphRadial: {
      const double u = base.profile.u(chi);
      return rk * Vec4(sh * ct, sh * st, ch * std::cos(u), ch * std::sin(u));
    }
    default:
      throw ContractViolation("seed_point: not an analytic base family");
  }
}

Vec4 seed_normal(const SeedBase& base, double kappa, double chi, double theta) {
  const double sh = std::sinh(chi), ch = std::cosh(chi);
  const double ct = std::cos(theta), st = std::sin(theta);
  Vec4 nu;
  switch (base.kind) {
    case SeedKind::GeodesicSlice:
      nu = Vec4(0.0, 0.0, 0.0, 1.0);
      break;
    case SeedKind::UmbilicSlice: {
      const double rho = std::sqrt(1.0 - base.s * base.s);
      nu = Vec4(-base.s * sh * ct, -base.s * sh * st, -base.s * ch, rho);
      break;
    }
    case SeedKind::GraphRadial: {
      const double u = base.profile.u(chi);
      const double up = base.profile.du(chi);
      const double w = 1.0 - ch * ch * up * up;
      require(w > 0.0, "seed_normal: graph is not spacelike here");
      const double Q = 1.0 / std::sqrt(w);
      const double A = Q * ch * ch * up;
      const double P = Q * sh * ch * up;
      const double cu = std::cos(u), su = std::sin(u);
      nu = Vec4(A * ct, A * st, P * cu - Q * su, P * su + Q * cu);
      break;
    }
    default:
      throw ContractViolation("seed_normal: not an analytic base family");
  }
  const Vec4 F = seed_point(base, kappa, chi, theta);
  if (!is_future_directed(nu, F)) nu = -nu;
  return nu;
}

SurfaceMesh seed_surface(const SeedSpec& spec, double kappa) {
  require(kappa > 0.0, "seed_surface: kappa must be positive");
  require(power_of_two(spec.n_chi) && power_of_two(spec.n_theta),
          "seed_surface: resolution must be a power of two");
  require(spec.chi_max > spec.chi_min, "seed_surface: empty chi range");
  if (spec.base.kind == SeedKind::UmbilicSlice)
    require(std::fabs(spec.base.s) < 1.0, "seed_surface: umbilic slice needs |s| < 1");

  SurfaceMesh m;
  m.n_chi = spec.n_chi;
  m.n_theta = spec.n_theta;
  m.chi0 = spec.chi_min;
  // endpoint-exclusive spacing: dyadic refinements share parameter points
  m.dchi = (spec.chi_max - spec.chi_min) / spec.n_chi;
  m.dtheta = kTwoPi / spec.n_theta;
  m.kappa = kappa;
  m.theta_periodic = true;
  m.chi_bc = spec.chi_bc;
  m.node.resize(static_cast<std::size_t>(m.n_chi) * m.n_theta);

  // deterministic perturbation phase
  double phase = 0.0;
  if (spec.perturbed) {
    SplitMix64 rng(spec.seed);
    phase = kTwoPi * rng.u01();
  }
  const double chi_mid = 0.5 * (spec.chi_min + spec.chi_max);
  const double half = 0.5 * (spec.chi_max - spec.chi_min);
  const double beta = 9.0 / (half * half);  // window ~ exp(-9) at the ends

  for (int i = 0; i < m.n_chi; ++i) {
    const double chi = m.chi(i);
    if (spec.base.kind == SeedKind::GraphRadial) {
      const double up = spec.base.profile.du(chi);
      if (std::cosh(chi) * std::cosh(chi) * up * up >= 1.0)
        throw MeshInvalid("seed_surface: graph violates spacelike condition", i, -1);
    }
    for (int j = 0; j < m.n_theta; ++j) {
      Vec4 F = seed_point(spec.base, kappa, chi, m.theta(j));
      if (spec.perturbed) {
        const double d = chi - chi_mid;
        const double window = std::exp(-beta * d * d);
        const double delta =
            spec.amplitude * window * std::cos(spec.mode * m.theta(j) + phase);
        F = quadric_project(F + delta * seed_normal(spec.base, kappa, chi, m.theta(j)),
                            kappa);
      }
      m.at(i, j) = F;
    }
  }
  validate_spacelike(m);
  return m;
}

void validate_spacelike(const SurfaceMesh& mesh) {
  const auto F = [&mesh](int i, int j) { return mesh.at(i, j); };
  for (int i = 0; i < mesh.n_chi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j) {
      const Vec4 Fc = (stencil::sample(mesh, F, i + 1, j) -
                       stencil::sample(mesh, F, i - 1, j)) /
                      (2.0 * mesh.dchi);
      const Vec4 Ft = (stencil::sample(mesh, F, i, j + 1) -
                       stencil::sample(mesh, F, i, j - 1)) /
                      (2.0 * mesh.dtheta);
      const double g11 = dot22(Fc, Fc);
      const double g12 = dot22(Fc, Ft);
      const double g22 = dot22(Ft, Ft);
      if (!(g11 > 0.0) || !(g11 * g22 - g12 * g12 > 0.0))
        throw MeshInvalid("mesh: induced metric not positive definite", i, j);
    }
}

}  // namespace adsflow
