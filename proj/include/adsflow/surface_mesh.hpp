#pragma once

#include "adsflow/pseudo_euclidean.hpp"

#include <cstdint>
#include <vector>

namespace adsflow {

// Closure of the chi direction.
//   Periodic      index wrap (requires genuinely chi-periodic data)
//   NeumannGhost  ghost nodes by cubic extrapolation; free symmetric ends,
//                 the boundary column evolves with the flow
//   Pinned        same ghost stencils, boundary columns frozen in time
enum class ChiBoundary { Periodic, NeumannGhost, Pinned };

struct MeshInvalid : std::runtime_error {
  int i = -1, j = -1;
  MeshInvalid(const std::string& what, int ii, int jj)
      : std::runtime_error(what), i(ii), j(jj) {}
};

// Structured (chi x theta) grid of ambient quadric points <F,F> = -1/kappa.
struct SurfaceMesh {
  int n_chi = 0;
  int n_theta = 0;
  double chi0 = 0.0;
  double dchi = 0.0;
  double dtheta = 0.0;
  double kappa = 1.0;
  bool theta_periodic = true;
  ChiBoundary chi_bc = ChiBoundary::NeumannGhost;
  std::vector<Vec4> node;

  double chi(int i) const { return chi0 + i * dchi; }
  double theta(int j) const { return j * dtheta; }
  int idx(int i, int j) const { return i * n_theta + j; }
  Vec4& at(int i, int j) { return node[static_cast<std::size_t>(idx(i, j))]; }
  const Vec4& at(int i, int j) const {
    return node[static_cast<std::size_t>(idx(i, j))];
  }
};

namespace stencil {

// Cubic-extrapolation ghost weights; exact on cubics, so the boundary
// stencils keep second-order accuracy. off = 1 or 2 cells beyond the edge.
// The four weights apply to the first four columns counted from the edge.
inline const std::array<double, 4>& ghost_weights(int off) {
  static const std::array<double, 4> w1{4.0, -6.0, 4.0, -1.0};
  static const std::array<double, 4> w2{10.0, -20.0, 15.0, -4.0};
  return off == 1 ? w1 : w2;
}

inline int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Closure-resolved sample of a per-node field. Getter: (i,j) -> value for
// in-range indices. Values must support scalar multiply and addition.
template <class Getter>
auto sample(const SurfaceMesh& m, Getter&& f, int i, int j)
    -> decltype(f(0, 0)) {
  j = m.theta_periodic ? wrap(j, m.n_theta) : j;
  if (!m.theta_periodic && (j < 0 || j >= m.n_theta))
    throw std::logic_error("stencil: non-periodic theta overflow unsupported");
  if (i >= 0 && i < m.n_chi) return f(i, j);
  if (m.chi_bc == ChiBoundary::Periodic) return f(wrap(i, m.n_chi), j);
  const bool low = i < 0;
  const int off = low ? -i : i - (m.n_chi - 1);
  if (off > 2) throw std::logic_error("stencil: ghost offset beyond 2 cells");
  const auto& w = ghost_weights(off);
  auto acc = (w[0] * f(low ? 0 : m.n_chi - 1, j)).eval();
  for (int k = 1; k < 4; ++k)
    acc += w[k] * f(low ? k : m.n_chi - 1 - k, j);
  return acc;
}

// Scalar overload (Eigen expressions need .eval(), doubles do not).
template <class Getter>
double sample_s(const SurfaceMesh& m, Getter&& f, int i, int j) {
  j = m.theta_periodic ? wrap(j, m.n_theta) : j;
  if (i >= 0 && i < m.n_chi) return f(i, j);
  if (m.chi_bc == ChiBoundary::Periodic) return f(wrap(i, m.n_chi), j);
  const bool low = i < 0;
  const int off = low ? -i : i - (m.n_chi - 1);
  if (off > 2) throw std::logic_error("stencil: ghost offset beyond 2 cells");
  const auto& w = ghost_weights(off);
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) acc += w[k] * f(low ? k : m.n_chi - 1 - k, j);
  return acc;
}

}  // namespace stencil

struct RadialProfile {
  double amplitude = 0.0;
  double center = 0.0;
  double sharpness = 0.0;  // u(chi) = amplitude * exp(-sharpness * (chi-center)^2)

  double u(double chi) const {
    const double d = chi - center;
    return amplitude * std::exp(-sharpness * d * d);
  }
  double du(double chi) const {
    const double d = chi - center;
    return -2.0 * sharpness * d * u(chi);
  }
};

enum class SeedKind { GeodesicSlice, UmbilicSlice, GraphRadial, Perturbed };

// Analytic base families (positions and exact unit normals).
struct SeedBase {
  SeedKind kind = SeedKind::GeodesicSlice;  // never Perturbed here
  double s = 0.0;                           // UmbilicSlice plane offset, |s| < 1
  RadialProfile profile;                    // GraphRadial
};

struct SeedSpec {
  SeedBase base;
  bool perturbed = false;
  double amplitude = 0.0;
  int mode = 0;
  std::uint64_t seed = 0;

  double chi_min = 0.5;
  double chi_max = 1.5;
  int n_chi = 32;
  int n_theta = 32;
  ChiBoundary chi_bc = ChiBoundary::NeumannGhost;

  static SeedSpec geodesic() { return {}; }
  static SeedSpec umbilic(double s) {
    SeedSpec sp;
    sp.base.kind = SeedKind::UmbilicSlice;
    sp.base.s = s;
    return sp;
  }
  static SeedSpec graph(const RadialProfile& p) {
    SeedSpec sp;
    sp.base.kind = SeedKind::GraphRadial;
    sp.base.profile = p;
    return sp;
  }
  static SeedSpec perturbation_of(const SeedBase& b, double amplitude, int mode,
                                  std::uint64_t seed) {
    SeedSpec sp;
    sp.base = b;
    sp.perturbed = true;
    sp.amplitude = amplitude;
    sp.mode = mode;
    sp.seed = seed;
    return sp;
  }
};

// Exact point and future unit normal of a base family at (chi, theta).
Vec4 seed_point(const SeedBase& base, double kappa, double chi, double theta);
Vec4 seed_normal(const SeedBase& base, double kappa, double chi, double theta);

SurfaceMesh seed_surface(const SeedSpec& spec, double kappa);

// Positive-definiteness of the induced metric at every node.
void validate_spacelike(const SurfaceMesh& mesh);

}  // namespace adsflow
