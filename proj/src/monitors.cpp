#include "adsflow/flow.hpp"

#include <cmath>

namespace adsflow {

// Verdicts derived from the stored series and the tolerance table only, so a
// report can be re-judged offline from its serialized form.
MonitorReport monitor_suite(const RunResult& run, const Tolerances& tol) {
  MonitorReport rep = run.monitor;
  rep.tol = tol;
  rep.verdicts.clear();
  rep.worst.clear();
  if (rep.series.empty()) return rep;

  const int n = rep.n;
  const double kappa = rep.kappa;
  const double sk = std::sqrt(kappa);
  const MonitorSample& first = rep.series.front();
  const bool ode = first.ode_mode;
  const bool pinched0 =
      n == 2 && std::max(std::fabs(first.sup_K), std::fabs(first.inf_K)) < kappa;

  // angle envelope: inf phi0 <= phi e^{nt} <= sup phi0
  {
    double excess = -1e300;
    for (const auto& s : rep.series) {
      excess = std::max(excess, s.sup_phi_env - rep.sup_phi0);
      excess = std::max(excess, rep.inf_phi0 - s.inf_phi_env);
    }
    rep.worst["phi_envelope_excess"] = excess;
    rep.verdicts["phi_envelope"] =
        excess <= (ode ? tol.ode_envelope_const : tol.phi_envelope);
  }

  // decayed form: sup |phi(t)| <= sup |phi0| e^{-nt} + tol
  {
    double excess = -1e300;
    for (const auto& s : rep.series)
      excess = std::max(excess,
                        s.sup_abs_phi - rep.sup_abs_phi0 * std::exp(-n * s.t));
    rep.worst["phi_decay_excess"] = excess;
    rep.verdicts["phi_decay"] =
        excess <= (ode ? tol.ode_envelope_const : tol.phi_envelope);
  }

  if (ode) {
    // phi e^{nt} is constant for homogeneous data
    double drift = 0.0;
    for (const auto& s : rep.series)
      drift = std::max(drift, std::fabs(s.sup_phi_env - rep.sup_phi0));
    rep.worst["phi_env_drift"] = drift;
    rep.verdicts["phi_env_constant"] = drift <= tol.ode_envelope_const;
  }

  if (n == 2 && pinched0) {
    const double C = sk * rep.sup_abs_phi0;

    // kappa - K >= kappa cos(C e^{-2t}), and >= kappa cos(C) uniformly
    {
      double slack = 1e300;
      for (const auto& s : rep.series) {
        const double arg = std::min(C * std::exp(-2.0 * s.t), 1.5707);
        slack = std::min(slack, s.min_kappa_minus_K - kappa * std::cos(arg));
      }
      rep.worst["kK_margin_slack"] = slack;
      rep.verdicts["kK_margin"] = slack >= -tol.kK_margin;
    }

    // |h|^2 never exceeds the envelope implied by the K bounds and the
    // decaying angle, kappa |h|^2 = (kappa-K)^2 tan^2(sqrt(kappa) phi) - 2 kappa K
    {
      double slack = 1e300;
      for (const auto& s : rep.series) {
        const double arg = std::min(C * std::exp(-2.0 * s.t) * (1.0 + 1e-9), 1.55);
        const double span = kappa - s.inf_K;
        const double bound =
            (span * span * std::tan(arg) * std::tan(arg) +
             2.0 * kappa * std::max(0.0, -s.inf_K)) / kappa;
        slack = std::min(slack, bound * (1.0 + tol.kK_margin) +
                                    tol.kK_margin - s.sup_h2);
      }
      rep.worst["h2_bound_slack"] = slack;
      rep.verdicts["h2_bound"] = slack >= 0.0;
    }

    // |H| decays with the angle wherever kappa - K stays positive
    {
      double excess = -1e300;
      for (const auto& s : rep.series) {
        const double arg = std::min(C * std::exp(-2.0 * s.t) * (1.0 + 1e-9), 1.55);
        const double bound = (kappa - s.inf_K) * std::tan(arg) / sk;
        excess = std::max(excess, s.sup_abs_H - bound);
      }
      rep.worst["H_decay_excess"] = excess;
      rep.verdicts["H_decay"] = excess <= tol.kK_margin;
    }

    // two-positivity stays positive
    {
      double lo = 1e300;
      for (const auto& s : rep.series) lo = std::min(lo, s.two_pos_min);
      rep.worst["two_pos_min"] = lo;
      rep.verdicts["two_positive"] = lo > tol.two_pos_min;
    }
  }

  if (n == 2 && !ode) {
    // pointwise closed-form relation between phi, H and K
    {
      double worst = 0.0;
      for (const auto& s : rep.series) worst = std::max(worst, s.phi_HK_res);
      rep.worst["phi_HK_res"] = worst;
      rep.verdicts["phi_HK_relation"] = worst <= tol.phi_HK_pointwise;
    }
    {
      double worst = 0.0;
      for (const auto& s : rep.series) worst = std::max(worst, s.h2_identity_res);
      rep.worst["h2_identity_res"] = worst;
      rep.verdicts["h2_identity"] = worst <= tol.h2_identity;
    }

    // metric ratios within exp(+-C'(1-e^{-t})), C' from the run's own data
    {
      double excess = -1e300;
      double wmax = 0.0;
      for (const auto& s : rep.series) {
        wmax = std::max(wmax, s.sup_W_op);
        const double cprime = 2.0 * wmax * rep.sup_abs_phi0;
        const double logbound = cprime * (1.0 - std::exp(-s.t));
        excess = std::max(excess, std::log(s.metric_ratio_max) - logbound);
        excess = std::max(excess, -std::log(s.metric_ratio_min) - logbound);
      }
      rep.worst["metric_ratio_log_excess"] = excess;
      rep.verdicts["metric_ratio"] = excess <= tol.metric_ratio_rel;
    }

    // per-interval displacement against C'' (e^{-2 t1} - e^{-2 t2})
    {
      double excess = -1e300;
      double numax = rep.series.front().sup_nu_euclid;
      for (std::size_t k = 1; k < rep.series.size(); ++k) {
        const MonitorSample& a = rep.series[k - 1];
        const MonitorSample& b = rep.series[k];
        numax = std::max(numax, b.sup_nu_euclid);
        const double cpp = 0.5 * rep.sup_abs_phi0 * numax;
        const double bound =
            cpp * (std::exp(-2.0 * a.t) - std::exp(-2.0 * b.t));
        excess = std::max(excess, b.displacement_sup -
                                      bound * (1.0 + tol.displacement_rel));
      }
      rep.worst["displacement_excess"] = excess;
      rep.verdicts["displacement"] = excess <= tol.displacement_rel * 1e-3;
    }
  }

  return rep;
}

}  // namespace adsflow
