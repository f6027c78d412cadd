#pragma once

#include "adsflow/angle_calculus.hpp"
#include "adsflow/surface_mesh.hpp"

namespace adsflow {

// Pointwise geometry of an assembled mesh node in the chart coordinates
// (x1, x2) = (chi, theta). Derivatives are plain ambient partials; the
// ambient chart is flat, so h_ij = -<F_ij, nu>.
struct NodeGeometry {
  Vec4 F;
  Vec4 F1, F2;        // first partials
  Vec4 F11, F12, F22; // second partials
  Vec4 nu;
  Mat2 g, g_inv, h, sigma, sigma_inv;
  double Gamma[2][2][2];  // Gamma[k][i][j]
  double Dh[2][2][2];     // Dh[i][j][k] = covariant derivative of h
  Vec2 lambda;            // ascending principal curvatures
  double H = 0.0, K = 0.0, phi = 0.0;

  const Vec4& d1(int i) const { return i == 0 ? F1 : F2; }
  const Vec4& d2(int i, int j) const {
    return (i == 0 && j == 0) ? F11 : ((i == 1 && j == 1) ? F22 : F12);
  }
};

struct GeometryField {
  int n_chi = 0, n_theta = 0;
  std::vector<NodeGeometry> node;

  NodeGeometry& at(int i, int j) {
    return node[static_cast<std::size_t>(i) * n_theta + j];
  }
  const NodeGeometry& at(int i, int j) const {
    return node[static_cast<std::size_t>(i) * n_theta + j];
  }
};

// Full two-pass assembly: local derivatives, normal, fundamental forms,
// invariants; then Christoffel symbols from the metric field and the
// covariant derivative of h. Throws MeshInvalid at a non-spacelike node.
GeometryField assemble_node_geometry(const SurfaceMesh& mesh);

// Flow-speed fields only (phi and nu per node); the cheap per-step path.
struct SpeedField {
  std::vector<double> f;
  std::vector<Vec4> nu;
};
enum class SpeedKind { Phi, One, MeanCurvature };
void assemble_speed(const SurfaceMesh& mesh, SpeedKind kind, SpeedField& out);

// Per-node scalar extracted from an assembled field.
using NodeScalar = double (*)(const NodeGeometry&);

// First and second chart partials of a scalar field over the mesh closure.
Vec2 field_grad(const SurfaceMesh& mesh, const GeometryField& f, NodeScalar get,
                int i, int j);
Mat2 field_hess(const SurfaceMesh& mesh, const GeometryField& f, NodeScalar get,
                int i, int j);

// Covariant Hessian of a scalar: hess - Gamma^k grad_k.
Mat2 covariant_hessian(const SurfaceMesh& mesh, const GeometryField& f,
                       NodeScalar get, int i, int j);

// Covariant second derivative of h as a (0,4) array DDh(k,l,i,j) =
// nabla_k nabla_l h_ij, from finite differences of the Dh field.
Rank4 second_covariant_h(const SurfaceMesh& mesh, const GeometryField& f, int i,
                         int j);

// Curvature tensor R_ijkl of the induced metric by finite differences of the
// Christoffel field (intrinsic; no use of h).
Rank4 curvature_from_metric(const SurfaceMesh& mesh, const GeometryField& f,
                            int i, int j);

// Scalar curvature g^ik g^jl R_ijkl at a node.
double scalar_curvature(const SurfaceMesh& mesh, const GeometryField& f, int i,
                        int j);

}  // namespace adsflow
