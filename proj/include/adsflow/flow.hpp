#pragma once

#include "adsflow/node_geometry.hpp"
#include "adsflow/tolerances.hpp"

#include <map>
#include <optional>
#include <string>

namespace adsflow {

enum class Integrator { Euler, RK4 };

struct DtPolicy {
  bool cfl = true;
  double cfl_factor = 0.5;  // dt = factor * kappa * dx^2 / 4
  double fixed = 0.0;
};

enum class FlowMode { OdeUmbilic, Mesh, GraphRadial };

// Pinned chi boundaries can be driven along the exact umbilic reduction,
// giving exact Dirichlet data for cross-checks against the reduction ode.
enum class BoundaryDriver { Free, ExactUmbilicFamily };

struct FlowConfig {
  int schema_version = 1;
  FlowMode mode = FlowMode::Mesh;
  int n = 2;              // ode mode only; mesh modes are n = 2
  double kappa = 1.0;
  double lambda0 = 0.0;   // ode mode initial principal curvature
  SeedSpec initial;
  Integrator integrator = Integrator::Euler;
  SpeedKind speed = SpeedKind::Phi;
  BoundaryDriver boundary_driver = BoundaryDriver::Free;
  DtPolicy dt;
  double t_end = 1.0;
  int monitor_every = 0;   // steps between monitor samples; 0 = auto
  int snapshot_every = 0;  // steps between stored snapshots; 0 = ends only
  bool store_gauss = false;
  std::string out_dir;     // empty = no files
  std::uint64_t seed = 0;

  double grid_dx() const { return (initial.chi_max - initial.chi_min) / initial.n_chi; }
  double resolved_dt() const {
    if (!dt.cfl) return dt.fixed;
    const double dx = grid_dx();
    return dt.cfl_factor * kappa * dx * dx / 4.0;
  }
};

// Aborted time step: the mesh left the spacelike regime.
struct FlowAbort : std::runtime_error {
  int node_i = -1, node_j = -1;
  double t = 0.0, dt = 0.0;
  FlowAbort(const std::string& what, int i, int j, double tt, double step)
      : std::runtime_error(what), node_i(i), node_j(j), t(tt), dt(step) {}
};

// Exact umbilic reduction: phi(t) = phi0 exp(-n t) with
// phi0 = (n/sqrt(kappa)) arctan(lambda0/sqrt(kappa)), and
// lambda(t) = sqrt(kappa) tan(sqrt(kappa) phi(t) / n).
std::pair<double, double> umbilic_exact(int n, double kappa, double lambda0, double t);

struct OdeTrajectory {
  std::vector<double> t, lambda, phi;
};

// Integrates lambda' = -(kappa + lambda^2) (n/sqrt(kappa)) arctan(lambda/sqrt(kappa)).
OdeTrajectory umbilic_ode(int n, double kappa, double lambda0, double dt,
                          double t_end, Integrator integrator);

// One explicit step of F -> F + dt f nu followed by quadric projection.
// Pinned chi boundaries keep their boundary columns fixed.
void mesh_step(SurfaceMesh& mesh, double dt, Integrator integrator, SpeedKind speed);

struct Snapshot {
  long step = 0;
  double t = 0.0;
  SurfaceMesh mesh;
  GeometryField fields;
  std::vector<Vec3> gauss_plus, gauss_minus;  // optional, per node
};

// One monitor sample; sup/inf are over mesh nodes.
struct MonitorSample {
  double t = 0.0;
  double sup_phi_env = 0.0, inf_phi_env = 0.0;  // phi e^{nt} envelope values
  double sup_abs_phi = 0.0;
  double sup_K = 0.0, inf_K = 0.0;
  double min_kappa_minus_K = 0.0;
  double sup_h2 = 0.0;          // |h|^2 = lambda1^2 + lambda2^2
  double h2_identity_res = 0.0; // kappa|h|^2 - ((kappa-K)^2 tan^2(sqrt(k)phi) - 2 kappa K)
  double phi_HK_res = 0.0;      // phi - arctan(sqrt(k) H/(kappa-K))/sqrt(k), where kappa-K > 1e-6
  double metric_ratio_max = 1.0, metric_ratio_min = 1.0;  // eigenvalues of g(0)^{-1} g(t)
  double sup_abs_H = 0.0;
  double sup_W_op = 0.0;        // max |lambda|
  double sup_nu_euclid = 0.0;   // Euclidean norm of nu
  double displacement_sup = 0.0;  // max Euclidean node motion since last sample
  double two_pos_min = 0.0;
  bool ode_mode = false;
};

struct MonitorReport {
  int n = 2;
  double kappa = 1.0;
  double sup_phi0 = 0.0, inf_phi0 = 0.0, sup_abs_phi0 = 0.0;
  std::vector<MonitorSample> series;
  std::map<std::string, bool> verdicts;
  std::map<std::string, double> worst;  // signed slack per monitor (>= -tol passes)
  Tolerances tol;

  bool all_pass() const {
    for (const auto& [k, v] : verdicts)
      if (!v) return false;
    return true;
  }
};

struct RunResult {
  FlowConfig config;
  double dt = 0.0;
  long steps = 0;
  bool aborted = false;
  std::string abort_reason;
  std::vector<Snapshot> snapshots;
  MonitorReport monitor;
  OdeTrajectory ode;  // ode mode only
};

// Advances the configured flow to t_end (or abort), sampling monitors and
// storing snapshots at the configured cadences. Monitor verdicts are filled
// by monitor_suite on the collected series.
RunResult run_flow(const FlowConfig& config);

// Evaluates all monitor verdicts from the stored series (idempotent).
MonitorReport monitor_suite(const RunResult& run, const Tolerances& tol);

}  // namespace adsflow
