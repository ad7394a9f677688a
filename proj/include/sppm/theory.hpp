#ifndef SPPM_THEORY_HPP
#define SPPM_THEORY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "sppm/engine.hpp"
#include "sppm/problem.hpp"

namespace sppm {

// Constants (A1, B1, C1) bound the shifted correction variance; (A2, B2, C2)
// bound the control-state recursion.
struct AssumptionParams {
  double A1 = 0.0;
  double B1 = 0.0;
  double C1 = 0.0;
  double A2 = 0.0;
  double B2 = 0.0;
  double C2 = 0.0;
};

inline void validate_params(const AssumptionParams& q) {
  if (q.A1 < 0 || q.B1 < 0 || q.C1 < 0 || q.A2 < 0 || q.B2 < 0 || q.C2 < 0 || q.B2 >= 1.0 ||
      !std::isfinite(q.A1 + q.B1 + q.C1 + q.A2 + q.B2 + q.C2))
    throw DegenerateConstants("assumption constants must be nonnegative with B2 < 1");
}

// One row of the per-method constants table.
inline AssumptionParams method_params(const CorrectionStrategy& strategy,
                                      const ProblemConstants& consts, std::size_t n,
                                      double sigma_sq_override = -1.0) {
  AssumptionParams q;
  switch (strategy.kind) {
    case CorrectionKind::none:
      // C1 is the sampling-scheme variance at the optimum; callers substitute
      // the weighted or subset variant for non-uniform schemes.
      q.C1 = sigma_sq_override >= 0.0 ? sigma_sq_override : consts.sigma_star_sq;
      break;
    case CorrectionKind::star:
      break;
    case CorrectionKind::gc:
      if (!std::isfinite(consts.delta)) throw MissingConstant("delta");
      q.A1 = consts.delta * consts.delta;
      break;
    case CorrectionKind::lsvrp:
      if (!std::isfinite(consts.delta)) throw MissingConstant("delta");
      q.B1 = consts.delta * consts.delta;
      q.A2 = strategy.lsvrp_p;
      q.B2 = 1.0 - strategy.lsvrp_p;
      break;
    case CorrectionKind::point_saga:
      if (!std::isfinite(consts.nu) || consts.nu <= 0.0) throw MissingConstant("nu");
      if (n == 0) throw MissingConstant("n");
      q.B1 = consts.nu * consts.nu;
      q.A2 = 1.0 / double(n);
      q.B2 = double(n - 1) / double(n);
      break;
  }
  return q;
}

// Contraction certificate for the Lyapunov recursion
//   E[Psi_{k+1}] <= theta E[Psi_k] + zeta,   Psi_k = ||x_k - x*||^2 + alpha sigma_k^2.
struct RateCertificate {
  double theta = 0.0;
  double zeta = 0.0;
  double neighborhood = 0.0;  // zeta / (1 - theta)
  double alpha = 0.0;
};

inline RateCertificate certificate(const AssumptionParams& q, double gamma, double alpha,
                                   double mu) {
  validate_params(q);
  if (gamma <= 0.0) throw NonPositiveGamma();
  if (alpha <= 0.0 || mu <= 0.0)
    throw DegenerateConstants("certificate needs alpha > 0 and mu > 0");
  const double contraction = (1.0 + gamma * mu) * (1.0 + gamma * mu);
  const double boost = 1.0 + alpha * q.A2;
  const double expr1 = (1.0 + gamma * gamma * q.A1) * boost / contraction;
  const double expr2 = gamma * gamma * q.B1 * boost / (alpha * contraction) + q.B2;
  if (expr1 >= 1.0) throw CertificateInvalid(1);
  if (expr2 >= 1.0) throw CertificateInvalid(2);
  RateCertificate cert;
  cert.theta = std::max(expr1, expr2);
  cert.zeta = gamma * gamma * q.C1 * boost / contraction + alpha * q.C2;
  cert.neighborhood = cert.zeta / (1.0 - cert.theta);
  cert.alpha = alpha;
  return cert;
}

// Inputs for the closed-form per-method rates; only the fields the chosen
// method reads need to be set. `mu` is the effective strong-convexity constant
// (the weighted or subset variant for non-uniform schemes).
struct RateInputs {
  double mu = 0.0;
  double sigma_sq = 0.0;  // variance at optimum (kind none)
  double delta = 0.0;     // Hessian-similarity constant (gc, lsvrp)
  double nu = 0.0;        // per-function smoothness (point_saga)
  std::size_t n = 0;      // table size (point_saga)
  double p = 1.0;         // control-update probability (lsvrp)
  double alpha = 0.0;     // Lyapunov weight for the lsvrp rate
};

struct ClosedFormRate {
  double factor = 0.0;        // per-step contraction of the method's Lyapunov value
  double neighborhood = 0.0;  // additive limit term (0 for variance-reduced methods)
};

inline ClosedFormRate closed_form_rate(CorrectionKind kind, const RateInputs& in, double gamma) {
  if (gamma <= 0.0) throw NonPositiveGamma();
  if (in.mu <= 0.0) throw MissingConstant("mu");
  const double om = 1.0 + gamma * in.mu;
  ClosedFormRate r;
  switch (kind) {
    case CorrectionKind::none:
      r.factor = 1.0 / (om * om);
      r.neighborhood = gamma * in.sigma_sq / (gamma * in.mu * in.mu + 2.0 * in.mu);
      break;
    case CorrectionKind::star:
      r.factor = 1.0 / (om * om);
      break;
    case CorrectionKind::gc:
      r.factor = (1.0 + gamma * gamma * in.delta * in.delta) / (om * om);
      break;
    case CorrectionKind::lsvrp: {
      if (in.alpha <= 0.0) throw MissingConstant("alpha");
      const double boost = 1.0 + in.alpha * in.p;
      r.factor = std::max(boost / (om * om),
                          boost * gamma * gamma * in.delta * in.delta / (in.alpha * om * om) +
                              1.0 - in.p);
      break;
    }
    case CorrectionKind::point_saga: {
      if (in.n == 0) throw MissingConstant("n");
      if (in.nu <= 0.0) throw MissingConstant("nu");
      const double second =
          gamma * in.nu * in.nu / (om * in.mu * double(in.n)) + 1.0 - 1.0 / double(in.n);
      r.factor = std::max(1.0 / om, second);
      break;
    }
  }
  return r;
}

struct StepsizeSelection {
  double gamma = 0.0;
  double alpha = 0.0;              // Lyapunov weight the analysis pairs with gamma
  double complexity_factor = 0.0;  // iterations = factor * log(log_argument)
  double log_argument = 0.0;
  double iterations = 0.0;
  bool unbounded_gamma = false;  // any sufficiently large gamma works (no finite optimum)
};

// Stepsize selectors and iteration complexities. `psi0` is the initial
// Lyapunov value (squared distance for methods without control state).
inline StepsizeSelection optimal_stepsize(CorrectionKind kind, const RateInputs& in, double eps,
                                          double psi0) {
  if (eps <= 0.0) throw DegenerateConstants("target accuracy must be positive");
  if (in.mu <= 0.0) throw MissingConstant("mu");
  StepsizeSelection sel;
  auto finish = [&](double factor, double log_arg) {
    sel.complexity_factor = factor;
    sel.log_argument = log_arg;
    sel.iterations = log_arg > 1.0 ? std::ceil(factor * std::log(log_arg)) : 0.0;
  };
  switch (kind) {
    case CorrectionKind::none: {
      if (in.sigma_sq <= 0.0) {
        // Interpolation: the neighborhood is empty and any gamma converges.
        sel.unbounded_gamma = true;
        finish(0.5, 2.0 * psi0 / eps);
        return sel;
      }
      sel.gamma = in.mu * eps / in.sigma_sq;
      finish(in.sigma_sq / (2.0 * eps * in.mu * in.mu) + 0.5, 2.0 * psi0 / eps);
      return sel;
    }
    case CorrectionKind::gc: {
      if (in.delta <= 0.0) {
        sel.unbounded_gamma = true;
        finish(1.0, psi0 / eps);
        return sel;
      }
      sel.gamma = in.mu / (in.delta * in.delta);
      finish(1.0 + in.delta * in.delta / (in.mu * in.mu), psi0 / eps);
      return sel;
    }
    case CorrectionKind::lsvrp: {
      const double p = in.p;
      if (p <= 0.0 || p > 1.0) throw DegenerateConstants("lsvrp needs p in (0, 1]");
      const double denom = p * in.delta * in.delta / in.mu + (1.0 - p) * in.mu;
      if (denom <= 0.0) {
        sel.unbounded_gamma = true;
        finish(1.0 / p, psi0 / eps);
        return sel;
      }
      sel.gamma = p / denom;
      sel.alpha = sel.gamma * in.mu / p;
      // The selector balances the two branches of the rate; verify it did.
      const double om = 1.0 + sel.gamma * in.mu;
      const double a_side = 1.0 / om;
      const double b_side = p * sel.gamma * in.delta * in.delta / (in.mu * om) + 1.0 - p;
      if (std::fabs(a_side - b_side) > 1e-9 * std::max(a_side, b_side))
        throw Mismatch("stepsize selector failed to balance the rate branches");
      finish(1.0 / p + in.delta * in.delta / (in.mu * in.mu), psi0 / eps);
      return sel;
    }
    case CorrectionKind::point_saga: {
      if (in.n == 0) throw MissingConstant("n");
      if (in.nu <= 0.0) throw MissingConstant("nu");
      sel.gamma = 1.0 / (in.nu * in.nu / in.mu + double(in.n - 1) * in.mu);
      sel.alpha = sel.gamma * in.mu * double(in.n);
      const double om = 1.0 + sel.gamma * in.mu;
      const double a_side = 1.0 / om;
      const double b_side =
          sel.gamma * in.nu * in.nu / (om * in.mu * double(in.n)) + 1.0 - 1.0 / double(in.n);
      if (std::fabs(a_side - b_side) > 1e-9 * std::max(a_side, b_side))
        throw Mismatch("stepsize selector failed to balance the rate branches");
      finish(double(in.n) + in.nu * in.nu / (in.mu * in.mu), psi0 / eps);
      return sel;
    }
    case CorrectionKind::star:
      throw MissingConstant("no stepsize selector for the known-shift method");
  }
  throw MissingConstant("unknown method kind");
}

inline AssumptionParams params_from_inputs(CorrectionKind kind, const RateInputs& in) {
  AssumptionParams q;
  switch (kind) {
    case CorrectionKind::none:
      q.C1 = in.sigma_sq;
      break;
    case CorrectionKind::star:
      break;
    case CorrectionKind::gc:
      q.A1 = in.delta * in.delta;
      break;
    case CorrectionKind::lsvrp:
      q.B1 = in.delta * in.delta;
      q.A2 = in.p;
      q.B2 = 1.0 - in.p;
      break;
    case CorrectionKind::point_saga:
      if (in.n == 0) throw MissingConstant("n");
      q.B1 = in.nu * in.nu;
      q.A2 = 1.0 / double(in.n);
      q.B2 = double(in.n - 1) / double(in.n);
      break;
  }
  return q;
}

struct CrossValidation {
  double theta = 0.0;
  double closed_form_factor = 0.0;
  double neighborhood = 0.0;
  double closed_form_neighborhood = 0.0;
  double alpha_used = 0.0;
};

// Checks that the generic certificate reproduces the method-specific closed
// form exactly (the table-size Lyapunov weight is forced where the analysis
// fixes it).
inline CrossValidation validate_certificate_against_closed_form(CorrectionKind kind,
                                                                const RateInputs& in, double gamma,
                                                                double alpha,
                                                                double rel_tol = 1e-12) {
  RateInputs cf_in = in;
  double alpha_used = alpha;
  if (kind == CorrectionKind::point_saga) alpha_used = gamma * in.mu * double(in.n);
  if (kind == CorrectionKind::lsvrp) cf_in.alpha = alpha_used;
  const RateCertificate cert = certificate(params_from_inputs(kind, in), gamma, alpha_used, in.mu);
  const ClosedFormRate cf = closed_form_rate(kind, cf_in, gamma);
  auto close = [&](double a, double b) {
    return std::fabs(a - b) <= rel_tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
  };
  if (!close(cert.theta, cf.factor))
    throw Mismatch("certificate theta " + std::to_string(cert.theta) +
                   " vs closed form " + std::to_string(cf.factor));
  if (!(close(cert.neighborhood, cf.neighborhood) ||
        std::fabs(cert.neighborhood - cf.neighborhood) <= rel_tol))
    throw Mismatch("certificate neighborhood " + std::to_string(cert.neighborhood) +
                   " vs closed form " + std::to_string(cf.neighborhood));
  CrossValidation v;
  v.theta = cert.theta;
  v.closed_form_factor = cf.factor;
  v.neighborhood = cert.neighborhood;
  v.closed_form_neighborhood = cf.neighborhood;
  v.alpha_used = alpha_used;
  return v;
}

// Numeric minimizer of alpha -> max{A(alpha), B(alpha)} from the certificate:
// the first branch increases and the second decreases in alpha, so the max is
// unimodal and ternary search on log(alpha) applies. Exposed as an extra
// beyond the analyzed alpha choices.
inline double optimal_alpha_numeric(const AssumptionParams& q, double gamma, double mu) {
  validate_params(q);
  const double contraction = (1.0 + gamma * mu) * (1.0 + gamma * mu);
  auto value = [&](double alpha) {
    const double boost = 1.0 + alpha * q.A2;
    const double e1 = (1.0 + gamma * gamma * q.A1) * boost / contraction;
    const double e2 = gamma * gamma * q.B1 * boost / (alpha * contraction) + q.B2;
    return std::max(e1, e2);
  };
  double lo = -40.0, hi = 40.0;  // log alpha
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (value(std::exp(m1)) <= value(std::exp(m2)))
      hi = m2;
    else
      lo = m1;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace sppm

#endif  // SPPM_THEORY_HPP
