#pragma once

#include "adsflow/node_geometry.hpp"

namespace adsflow {

enum class StructureKind { Codazzi, Gauss, Simons };

struct ResidualStats {
  double sup = 0.0;
  long nodes = 0;
};

// Sup-norm residual of a structural identity over interior nodes, excluding a
// chi margin (fraction of the range on each side) so that the measurement
// window is resolution independent.
//   Codazzi: nabla_i h_jk - nabla_j h_ik
//   Gauss:   R_ijkl(g) + kappa (g_ik g_jl - g_il g_jk) + h_ik h_jl - h_il h_jk
//            with R computed intrinsically from the metric field
//   Simons:  nabla_i nabla_j h_kl - nabla_k nabla_l h_ij
//            - R^m_{lki} h_mj - R^m_{jki} h_lm
ResidualStats structure_residual(const SurfaceMesh& mesh, const GeometryField& f,
                                 StructureKind kind, double margin_frac = 0.12);

// Interior chi-index window [lo, hi) for a margin fraction.
std::pair<int, int> interior_window(const SurfaceMesh& mesh, double margin_frac);

}  // namespace adsflow
