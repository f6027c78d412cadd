#pragma once

#include "adsflow/flow.hpp"

namespace adsflow {

// Time-derivative identities checked against three equally spaced snapshots:
// central differences in t at the middle snapshot versus the right-hand side
// evaluated from the middle snapshot alone.
//   Metric:    d/dt g_ij  = 2 f h_ij
//   Shape:     d/dt h_ij  = Hess_ij f + f h_i^k h_kj - kappa f g_ij
//   ShapeFull: d/dt h_ij  expanded through the sigma-weighted second
//              derivatives of h and the angle hessian (speed = phi only)
//   Angle:     d/dt phi   = sigma^{ij} Hess_ij phi - 2 phi
//   Scalar2D:  d/dt G     for G in {H, K} via the two-invariant expansion
//   GaussCurv: d/dt K     via the explicit gradient expansion
enum class EvolKind { Metric, Shape, ShapeFull, Angle, Scalar2D_H, Scalar2D_K, GaussCurv };

struct EvolResidual {
  double sup = 0.0;
  long count = 0;
};

EvolResidual evolution_residual(const Snapshot& prev, const Snapshot& mid,
                                const Snapshot& next, EvolKind kind,
                                SpeedKind speed = SpeedKind::Phi,
                                double margin_frac = 0.12);

// Picks the three consecutive snapshots centered at `center_index` from a run.
EvolResidual evolution_residual(const RunResult& run, std::size_t center_index,
                                EvolKind kind, SpeedKind speed = SpeedKind::Phi,
                                double margin_frac = 0.12);

}  // namespace adsflow
