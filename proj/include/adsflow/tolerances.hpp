#pragma once

namespace adsflow {

// Gating tolerances and convergence-order gates, all in one versioned table.
// Suites and the acceptance harness read these; overrides that loosen a gate
// require an explicit opt-in at the CLI.
struct Tolerances {
  int version = 1;

  // pointwise algebra
  double smooth_angle_oracle = 1e-12;    // vs eigenvalue arctan sum
  double ab_identity_rel = 1e-10;        // a^2 + b^2 = prod(1 + x^2)
  double fpart_grad_h_rel = 1e-6;        // FD of phi in h vs inverse sigma
  double fpart_grad_ginv_rel = 1e-6;     // FD of phi in g^{-1}
  double fpart_hessian_rel = 1e-4;       // FD hessian vs displayed formula
  double sigma_mixed_identity = 1e-12;   // sigma = g(kappa I + W^2)
  double sigma_closed_form_rel = 1e-11;  // n = 2 closed-form inverse
  double weingarten_symmetry_rel = 1e-11;
  double arctan_addition = 1e-12;        // phi vs arctan(sqrt(k)H/(kappa-K))
  double kato_scale = 1e-10;
  double kato_cor_ii_scale = 1e-12;

  // mesh structure residual convergence orders
  double order_codazzi = 1.8;
  double order_gauss = 1.8;
  double order_simons = 1.5;

  // evolution identities
  double order_evolution = 1.8;
  double ode_exact = 1e-8;             // RK4 vs closed form
  double ode_envelope_const = 1e-8;    // phi e^{nt} drift in ode mode
  double umbilic_mesh_base = 1e-6;     // mesh vs ode: base + quad * dx^2
  double umbilic_mesh_quad = 0.5;

  // run monitors
  double phi_envelope = 1e-6;
  double kK_margin = 1e-3;
  double h2_identity = 1e-9;
  double phi_HK_pointwise = 1e-9;
  double metric_ratio_rel = 1e-3;
  double displacement_rel = 1e-3;
  double sup_H_final = 1e-3;
  double two_pos_min = 0.0;

  // Gauss map
  double hyperboloid_constraint = 1e-12;
  double decomp_scale = 1e-12;
  double frame_rotation = 1e-12;
  double j_squared = 1e-12;
  double order_gauss_map = 1.8;   // induced metric, tau = dphi, Lagrangian
  double order_gauss_flow = 1.5;  // evolution relations
};

}  // namespace adsflow
