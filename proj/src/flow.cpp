#include "adsflow/flow.hpp"

#include "adsflow/gauss_map.hpp"

#include <cmath>

namespace adsflow {

namespace {

double umbilic_rate(int n, double kappa, double lambda) {
  const double sk = std::sqrt(kappa);
  return -(kappa + lambda * lambda) * (n / sk) * std::atan(lambda / sk);
}

// node displacement field f * nu for the current mesh state
void speed_displacement(const SurfaceMesh& mesh, SpeedKind kind,
                        std::vector<Vec4>& disp, SpeedField& ws) {
  assemble_speed(mesh, kind, ws);
  disp.resize(mesh.node.size());
  const std::size_t n = mesh.node.size();
  for (std::size_t k = 0; k < n; ++k) disp[k] = ws.f[k] * ws.nu[k];
}

MonitorSample sample_mesh_monitors(const SurfaceMesh& mesh, const GeometryField& f,
                                   double t, int n_exp,
                                   const std::vector<Mat2>& g0,
                                   const std::vector<Vec4>& prev_F) {
  MonitorSample s;
  s.t = t;
  const double kappa = mesh.kappa;
  const double sk = std::sqrt(kappa);
  const double env = std::exp(n_exp * t);
  s.sup_phi_env = -1e300;
  s.inf_phi_env = 1e300;
  s.sup_K = -1e300;
  s.inf_K = 1e300;
  s.min_kappa_minus_K = 1e300;
  s.metric_ratio_max = -1e300;
  s.metric_ratio_min = 1e300;
  s.two_pos_min = 1e300;

  for (int i = 0; i < mesh.n_chi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j) {
      const std::size_t k = static_cast<std::size_t>(mesh.idx(i, j));
      const NodeGeometry& nd = f.at(i, j);
      s.sup_phi_env = std::max(s.sup_phi_env, nd.phi * env);
      s.inf_phi_env = std::min(s.inf_phi_env, nd.phi * env);
      s.sup_abs_phi = std::max(s.sup_abs_phi, std::fabs(nd.phi));
      s.sup_K = std::max(s.sup_K, nd.K);
      s.inf_K = std::min(s.inf_K, nd.K);
      s.min_kappa_minus_K = std::min(s.min_kappa_minus_K, kappa - nd.K);
      const double h2 = nd.lambda[0] * nd.lambda[0] + nd.lambda[1] * nd.lambda[1];
      s.sup_h2 = std::max(s.sup_h2, h2);
      if (kappa - nd.K > 1e-6) {
        const double tn = std::tan(sk * nd.phi);
        const double rhs =
            ((kappa - nd.K) * (kappa - nd.K) * tn * tn - 2.0 * kappa * nd.K) /
            kappa;
        s.h2_identity_res =
            std::max(s.h2_identity_res, std::fabs(h2 - rhs) / std::max(1.0, h2));
        const double closed = std::atan(sk * nd.H / (kappa - nd.K)) / sk;
        s.phi_HK_res = std::max(s.phi_HK_res, std::fabs(nd.phi - closed));
      }
      const Vec2 ratio = generalized_eigen2(g0[k], nd.g);
      s.metric_ratio_max = std::max(s.metric_ratio_max, ratio[1]);
      s.metric_ratio_min = std::min(s.metric_ratio_min, ratio[0]);
      s.sup_abs_H = std::max(s.sup_abs_H, std::fabs(nd.H));
      s.sup_W_op =
          std::max({s.sup_W_op, std::fabs(nd.lambda[0]), std::fabs(nd.lambda[1])});
      s.sup_nu_euclid = std::max(s.sup_nu_euclid, nd.nu.norm());
      if (!prev_F.empty())
        s.displacement_sup = std::max(s.displacement_sup, (nd.F - prev_F[k]).norm());
      s.two_pos_min = std::min(s.two_pos_min, two_positive_margin(nd.g, nd.h, kappa));
    }
  return s;
}

}  // namespace

std::pair<double, double> umbilic_exact(int n, double kappa, double lambda0,
                                        double t) {
  const double sk = std::sqrt(kappa);
  const double phi0 = (n / sk) * std::atan(lambda0 / sk);
  const double phi = phi0 * std::exp(-n * t);
  const double lambda = sk * std::tan(sk * phi / n);
  return {lambda, phi};
}

OdeTrajectory umbilic_ode(int n, double kappa, double lambda0, double dt,
                          double t_end, Integrator integrator) {
  require(n >= 1 && kappa > 0.0 && dt > 0.0, "umbilic_ode: bad parameters");
  OdeTrajectory tr;
  const double sk = std::sqrt(kappa);
  double lambda = lambda0;
  double t = 0.0;
  const auto push = [&]() {
    tr.t.push_back(t);
    tr.lambda.push_back(lambda);
    tr.phi.push_back((n / sk) * std::atan(lambda / sk));
  };
  push();
  while (t < t_end - 1e-12) {
    const double step = std::min(dt, t_end - t);
    if (integrator == Integrator::Euler) {
      lambda += step * umbilic_rate(n, kappa, lambda);
    } else {
      const double k1 = umbilic_rate(n, kappa, lambda);
      const double k2 = umbilic_rate(n, kappa, lambda + 0.5 * step * k1);
      const double k3 = umbilic_rate(n, kappa, lambda + 0.5 * step * k2);
      const double k4 = umbilic_rate(n, kappa, lambda + step * k3);
      lambda += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t += step;
    push();
  }
  return tr;
}

void mesh_step(SurfaceMesh& mesh, double dt, Integrator integrator,
               SpeedKind speed) {
  require(dt > 0.0, "mesh_step: dt must be positive");
  static thread_local SpeedField ws;
  const std::size_t n = mesh.node.size();
  std::vector<Vec4> update(n);

  try {
    if (integrator == Integrator::Euler) {
      speed_displacement(mesh, speed, update, ws);
      for (auto& u : update) u *= dt;
    } else {
      // classical RK4 on node positions; intermediate stages stay unprojected
      std::vector<Vec4> k1, k2, k3, k4;
      SurfaceMesh stage = mesh;
      speed_displacement(mesh, speed, k1, ws);
      for (std::size_t k = 0; k < n; ++k)
        stage.node[k] = mesh.node[k] + 0.5 * dt * k1[k];
      speed_displacement(stage, speed, k2, ws);
      for (std::size_t k = 0; k < n; ++k)
        stage.node[k] = mesh.node[k] + 0.5 * dt * k2[k];
      speed_displacement(stage, speed, k3, ws);
      for (std::size_t k = 0; k < n; ++k)
        stage.node[k] = mesh.node[k] + dt * k3[k];
      speed_displacement(stage, speed, k4, ws);
      for (std::size_t k = 0; k < n; ++k)
        update[k] = dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
  } catch (const MeshInvalid& e) {
    throw FlowAbort(std::string("mesh_step: ") + e.what(), e.i, e.j, 0.0, dt);
  }

  const bool pinned = (mesh.chi_bc == ChiBoundary::Pinned);
  for (int i = 0; i < mesh.n_chi; ++i) {
    if (pinned && (i == 0 || i == mesh.n_chi - 1)) continue;
    for (int j = 0; j < mesh.n_theta; ++j) {
      const std::size_t k = static_cast<std::size_t>(mesh.idx(i, j));
      mesh.node[k] = quadric_project(mesh.node[k] + update[k], mesh.kappa);
    }
  }
}

RunResult run_flow(const FlowConfig& config) {
  RunResult run;
  run.config = config;
  const Tolerances tol;

  if (config.mode == FlowMode::OdeUmbilic) {
    require(config.n >= 1 && config.n <= 3, "run_flow: ode mode needs n in 1..3");
    const double dt = config.dt.cfl ? 1e-3 : config.dt.fixed;
    run.dt = dt;
    run.ode = umbilic_ode(config.n, config.kappa, config.lambda0, dt,
                          config.t_end, config.integrator);
    const double sk = std::sqrt(config.kappa);
    const double phi0 = (config.n / sk) * std::atan(config.lambda0 / sk);
    run.monitor.n = config.n;
    run.monitor.kappa = config.kappa;
    run.monitor.sup_phi0 = run.monitor.inf_phi0 = phi0;
    run.monitor.sup_abs_phi0 = std::fabs(phi0);
    for (std::size_t k = 0; k < run.ode.t.size(); ++k) {
      MonitorSample s;
      s.ode_mode = true;
      s.t = run.ode.t[k];
      const double env = std::exp(config.n * s.t);
      s.sup_phi_env = s.inf_phi_env = run.ode.phi[k] * env;
      s.sup_abs_phi = std::fabs(run.ode.phi[k]);
      const double lam = run.ode.lambda[k];
      const double K = std::pow(lam, config.n >= 2 ? 2.0 : 1.0);
      s.sup_K = s.inf_K = K;
      s.min_kappa_minus_K = config.kappa - K;
      s.sup_h2 = config.n * lam * lam;
      s.sup_abs_H = std::fabs(config.n * lam);
      s.sup_W_op = std::fabs(lam);
      s.metric_ratio_max = s.metric_ratio_min = 1.0;  // not tracked in ode mode
      s.two_pos_min = 2.0 * (config.kappa * config.kappa - K * K) /
                      std::pow(config.kappa + lam * lam, 2.0);
      run.monitor.series.push_back(s);
    }
    run.steps = static_cast<long>(run.ode.t.size()) - 1;
    run.monitor = monitor_suite(run, tol);
    return run;
  }

  SurfaceMesh mesh = seed_surface(config.initial, config.kappa);
  const double dt = config.resolved_dt();
  require(dt > 0.0, "run_flow: nonpositive dt");
  const long total_steps = static_cast<long>(std::ceil(config.t_end / dt - 1e-9));
  const long monitor_every =
      config.monitor_every > 0 ? config.monitor_every
                               : std::max(1L, total_steps / 256);
  run.dt = dt;

  GeometryField fields = assemble_node_geometry(mesh);
  std::vector<Mat2> g0(mesh.node.size());
  for (int i = 0; i < mesh.n_chi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j)
      g0[static_cast<std::size_t>(mesh.idx(i, j))] = fields.at(i, j).g;

  run.monitor.n = 2;
  run.monitor.kappa = config.kappa;
  run.monitor.sup_phi0 = -1e300;
  run.monitor.inf_phi0 = 1e300;
  for (const auto& nd : fields.node) {
    run.monitor.sup_phi0 = std::max(run.monitor.sup_phi0, nd.phi);
    run.monitor.inf_phi0 = std::min(run.monitor.inf_phi0, nd.phi);
  }
  run.monitor.sup_abs_phi0 =
      std::max(std::fabs(run.monitor.sup_phi0), std::fabs(run.monitor.inf_phi0));

  std::vector<Vec4> prev_F;
  const auto store_snapshot = [&](long step, double t, const GeometryField& f) {
    Snapshot snap;
    snap.step = step;
    snap.t = t;
    snap.mesh = mesh;
    snap.fields = f;
    if (config.store_gauss)
      gauss_map_eval(mesh, f, snap.gauss_plus, snap.gauss_minus);
    run.snapshots.push_back(std::move(snap));
  };
  const auto monitor_now = [&](double t, const GeometryField& f) {
    run.monitor.series.push_back(sample_mesh_monitors(mesh, f, t, 2, g0, prev_F));
    prev_F.resize(mesh.node.size());
    for (int i = 0; i < mesh.n_chi; ++i)
      for (int j = 0; j < mesh.n_theta; ++j)
        prev_F[static_cast<std::size_t>(mesh.idx(i, j))] = f.at(i, j).F;
  };

  monitor_now(0.0, fields);
  store_snapshot(0, 0.0, fields);

  // exact family data for driven boundaries
  const bool driven = config.boundary_driver == BoundaryDriver::ExactUmbilicFamily;
  double lambda0_true = 0.0;
  if (driven) {
    require(config.initial.base.kind == SeedKind::UmbilicSlice &&
                !config.initial.perturbed &&
                config.initial.chi_bc == ChiBoundary::Pinned,
            "run_flow: the exact-family driver needs a pinned umbilic slice");
    const double s0 = config.initial.base.s;
    lambda0_true = -std::sqrt(config.kappa) * s0 / std::sqrt(1.0 - s0 * s0);
  }
  const auto drive_boundary = [&](double t_now) {
    const auto [lam, phi] = umbilic_exact(2, config.kappa, lambda0_true, t_now);
    (void)phi;
    const double s_now = -lam / std::sqrt(config.kappa + lam * lam);
    SeedBase family;
    family.kind = SeedKind::UmbilicSlice;
    family.s = s_now;
    for (const int i : {0, mesh.n_chi - 1})
      for (int j = 0; j < mesh.n_theta; ++j)
        mesh.at(i, j) = seed_point(family, config.kappa, mesh.chi(i), mesh.theta(j));
  };

  long step = 0;
  double t = 0.0;
  try {
    while (step < total_steps) {
      const double h = std::min(dt, config.t_end - t);
      try {
        mesh_step(mesh, h, config.integrator, config.speed);
      } catch (FlowAbort& e) {
        e.t = t;
        throw;
      }
      ++step;
      t = (step == total_steps) ? config.t_end : t + h;
      if (driven) drive_boundary(t);
      const bool at_end = (step == total_steps);
      const bool want_monitor = at_end || (step % monitor_every == 0);
      const bool want_snapshot =
          at_end ||
          (config.snapshot_every > 0 && step % config.snapshot_every == 0);
      if (want_monitor || want_snapshot) {
        fields = assemble_node_geometry(mesh);
        if (want_monitor) monitor_now(t, fields);
        if (want_snapshot) store_snapshot(step, t, fields);
      }
    }
  } catch (const FlowAbort& e) {
    run.aborted = true;
    run.abort_reason = std::string(e.what()) + " at node (" +
                       std::to_string(e.node_i) + "," + std::to_string(e.node_j) +
                       "), t = " + std::to_string(e.t) +
                       ", dt = " + std::to_string(e.dt);
  } catch (const MeshInvalid& e) {
    run.aborted = true;
    run.abort_reason = std::string(e.what()) + " at node (" + std::to_string(e.i) +
                       "," + std::to_string(e.j) + ")";
  }
  run.steps = step;
  run.monitor = monitor_suite(run, tol);
  return run;
}

}  // namespace adsflow
