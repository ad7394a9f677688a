#ifndef SPPM_VERIFY_HPP
#define SPPM_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "sppm/arbitrary_sampling.hpp"
#include "sppm/engine.hpp"
#include "sppm/theory.hpp"

namespace sppm {

// Default tolerances shared by all checks: algebraic identities 1e-9 relative,
// oracle gaps 1e-8 absolute, statistical checks 3 standard errors.
constexpr double kAlgebraTol = 1e-9;
constexpr double kOracleTol = 1e-8;

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_margin = 0.0;  // most-violating slack; negative means violation
  std::size_t samples = 0;
  std::string notes;
};

inline CheckReport make_report(std::string name, double worst_margin, double tolerance,
                               std::size_t samples, std::string notes = "") {
  CheckReport r;
  r.name = std::move(name);
  r.worst_margin = worst_margin;
  r.passed = worst_margin >= -tolerance;
  r.samples = samples;
  r.notes = std::move(notes);
  return r;
}

// Effective rate constants for a configured method: the strong-convexity and
// optimum-variance constants of the reweighted sub-objectives the sampler
// induces (they reduce to mu and sigma*^2 for uniform single-index sampling).
inline RateInputs effective_rate_inputs(const MethodSpec& method, const RegressionProblem& p,
                                        const ProblemConstants& consts) {
  RateInputs in;
  in.delta = consts.delta;
  in.nu = consts.nu;
  in.n = p.n;
  in.p = method.strategy.lsvrp_p;
  if (method.strategy.kind != CorrectionKind::none) {
    in.mu = consts.mu;
    in.sigma_sq = consts.sigma_star_sq;
    return in;
  }
  const AsConstants as = sigma_star_as(p, consts, method.sampler, true);
  in.mu = as.mu_as;
  in.sigma_sq = as.sigma_star_as_sq;
  return in;
}

// Independent prox solver: steepest descent with exact line search on the
// strongly convex quadratic subproblem
//   F(x) = sum_{i in subset} w_i f_i(x) + (1/2 gamma) ||x - v||^2.
// Deliberately avoids the closed-form linear solves it is used to audit.
inline Vec prox_oracle(const RegressionProblem& p, const std::vector<std::size_t>& subset,
                       const std::vector<double>& weights, double gamma, const Vec& v,
                       double tol = 1e-11) {
  if (subset.empty()) throw EmptySubset();
  if (gamma <= 0.0) throw NonPositiveGamma();
  for (std::size_t i : subset) p.check_index(i);
  auto gradient = [&](const Vec& x) {
    Vec g = sub(x, v);
    for (double& e : g) e /= gamma;
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const std::size_t i = subset[k];
      const double r = dot(p.rows[i], x) - p.targets[i];
      axpy(weights[k] * r, p.rows[i], g);
      axpy(2.0 * weights[k] * p.lambdas[i], x, g);
    }
    return g;
  };
  auto hess_apply = [&](const Vec& g) {
    Vec hg = scaled(g, 1.0 / gamma);
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const std::size_t i = subset[k];
      axpy(weights[k] * dot(p.rows[i], g), p.rows[i], hg);
      axpy(2.0 * weights[k] * p.lambdas[i], g, hg);
    }
    return hg;
  };
  Vec x = v;
  for (std::size_t it = 0; it < 1000000; ++it) {
    const Vec g = gradient(x);
    const double gg = norm_sq(g);
    if (std::sqrt(gg) <= tol) return x;
    const Vec hg = hess_apply(g);
    const double t = gg / dot(g, hg);
    axpy(-t, g, x);
  }
  throw NoConvergence("prox oracle exceeded the iteration cap");
}

// Firm nonexpansiveness with strong convexity:
// ||prox(x) - prox(y)|| <= ||x - y|| / (1 + gamma mu_i).
inline CheckReport check_contraction(const RegressionProblem& p, std::size_t i, double mu_i,
                                     const std::vector<double>& gammas, std::size_t num_pairs,
                                     Rng& rng) {
  double worst = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  for (double gamma : gammas) {
    const double factor = (1.0 + gamma * mu_i) * (1.0 + gamma * mu_i);
    for (std::size_t k = 0; k < num_pairs; ++k) {
      Vec x(p.d), y(p.d);
      for (std::size_t j = 0; j < p.d; ++j) {
        x[j] = 10.0 * rng.next_gaussian();
        y[j] = 10.0 * rng.next_gaussian();
      }
      const double base = dist_sq(x, y);
      if (base == 0.0) continue;
      const double moved = dist_sq(p.prox_single(i, gamma, x), p.prox_single(i, gamma, y));
      worst = std::min(worst, (base - factor * moved) / base);
      ++samples;
    }
  }
  return make_report("prox_contraction", worst, 1e-10, samples);
}

// Variance bound on the shifted correction (conditional on the current state):
//   E ||h_k - grad f_xi(x*)||^2 <= A1 ||x_k - x*||^2 + B1 sigma_k^2 + C1,
// estimated by exact enumeration of the sampling distribution.
inline CheckReport check_correction_variance_bound(const MethodSpec& method,
                                                   const RegressionProblem& p,
                                                   const ProblemConstants& consts,
                                                   const AssumptionParams& q,
                                                   std::size_t num_states, Rng& rng) {
  double worst = std::numeric_limits<double>::infinity();
  auto random_vec = [&](double scale) {
    Vec v(p.d);
    for (std::size_t j = 0; j < p.d; ++j) v[j] = consts.x_star[j] + scale * rng.next_gaussian();
    return v;
  };
  std::size_t samples = 0;
  for (std::size_t s = 0; s < num_states; ++s) {
    const Vec x = random_vec(5.0);
    ControlState state = ControlState::make(method.strategy, p, consts, x);
    if (method.strategy.kind == CorrectionKind::lsvrp) {
      state.w = random_vec(5.0);
      state.grad_f_w = p.grad(state.w);
    } else if (method.strategy.kind == CorrectionKind::point_saga) {
      state.table_grad_avg.assign(p.d, 0.0);
      for (std::size_t j = 0; j < p.n; ++j) {
        state.table[j] = random_vec(5.0);
        state.table_grads[j] = p.grad_i(j, state.table[j]);
        axpy(1.0 / double(p.n), state.table_grads[j], state.table_grad_avg);
      }
    }
    const double sigma_sq = state.sigma_sq(method.strategy, consts, p.n);
    double lhs = 0.0;
    if (method.strategy.kind == CorrectionKind::none) {
      // h = 0 and the sampled objective is f_C; the shift is grad f_C(x*).
      for (const auto& entry : method.sampler.enumerate_support()) {
        Vec g(p.d, 0.0);
        const auto w = method.sampler.weights_for(entry.indices);
        for (std::size_t k = 0; k < entry.indices.size(); ++k)
          axpy(w[k], consts.grad_at_star[entry.indices[k]], g);
        lhs += entry.prob * norm_sq(g);
      }
    } else {
      for (std::size_t i = 0; i < p.n; ++i) {
        const Vec h = correction(method.strategy, state, p, consts, x, i);
        lhs += norm_sq(sub(h, consts.grad_at_star[i])) / double(p.n);
      }
    }
    const double rhs = q.A1 * dist_sq(x, consts.x_star) + q.B1 * sigma_sq + q.C1;
    const double scale = std::max({std::fabs(rhs), std::fabs(lhs), 1.0});
    worst = std::min(worst, (rhs - lhs) / scale);
    ++samples;
  }
  return make_report("assumption_variance_bound", worst, kAlgebraTol, samples);
}

// Control-state recursion: E[sigma_{k+1}^2 | x_{k+1}, phi_k] against
// A2 ||x_{k+1} - x*||^2 + B2 sigma_k^2 + C2, using each method's exact update
// law (two-point mixture for the lazy control vector; n-term average for the
// table, conditioning on the realized index).
inline CheckReport check_control_recursion(const MethodSpec& method, const RegressionProblem& p,
                                           const ProblemConstants& consts,
                                           const AssumptionParams& q, std::size_t num_states,
                                           Rng& rng) {
  if (!is_variance_reduced_control(method.strategy.kind))
    return make_report("assumption_control_recursion", 0.0, kAlgebraTol, 0,
                       "no control state; recursion vacuous");
  double worst = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  for (std::size_t s = 0; s < num_states; ++s) {
    Vec x(p.d);
    for (std::size_t j = 0; j < p.d; ++j) x[j] = consts.x_star[j] + 5.0 * rng.next_gaussian();
    ControlState state = ControlState::make(method.strategy, p, consts, x);
    double lhs = 0.0, rhs = 0.0;
    if (method.strategy.kind == CorrectionKind::lsvrp) {
      Vec w(p.d), x_next(p.d);
      for (std::size_t j = 0; j < p.d; ++j) {
        w[j] = consts.x_star[j] + 5.0 * rng.next_gaussian();
        x_next[j] = consts.x_star[j] + 5.0 * rng.next_gaussian();
      }
      const double pr = method.strategy.lsvrp_p;
      lhs = pr * dist_sq(x_next, consts.x_star) + (1.0 - pr) * dist_sq(w, consts.x_star);
      rhs = q.A2 * dist_sq(x_next, consts.x_star) + q.B2 * dist_sq(w, consts.x_star) + q.C2;
    } else {
      for (std::size_t j = 0; j < p.n; ++j)
        for (std::size_t t = 0; t < p.d; ++t)
          state.table[j][t] = consts.x_star[t] + 5.0 * rng.next_gaussian();
      const double sigma_sq_k = [&] {
        double acc = 0.0;
        for (std::size_t j = 0; j < p.n; ++j) acc += dist_sq(state.table[j], consts.x_star);
        return acc / double(p.n);
      }();
      for (std::size_t j = 0; j < p.n; ++j) {
        state.table_grads[j] = p.grad_i(j, state.table[j]);
      }
      state.table_grad_avg.assign(p.d, 0.0);
      for (std::size_t j = 0; j < p.n; ++j)
        axpy(1.0 / double(p.n), state.table_grads[j], state.table_grad_avg);
      // Enumerate the index draw; each branch determines x_{k+1} and the slot
      // overwrite, so both sides average over the same n outcomes.
      double mean_next_dist = 0.0;
      for (std::size_t i = 0; i < p.n; ++i) {
        const Vec h = correction(method.strategy, state, p, consts, x, i);
        Vec v = x;
        axpy(method.gamma, h, v);
        const Vec x_next = p.prox_single(i, method.gamma, v);
        const double nd = dist_sq(x_next, consts.x_star);
        mean_next_dist += nd / double(p.n);
        lhs += (sigma_sq_k + (nd - dist_sq(state.table[i], consts.x_star)) / double(p.n)) /
               double(p.n);
      }
      rhs = q.A2 * mean_next_dist + q.B2 * sigma_sq_k + q.C2;
    }
    const double scale = std::max({std::fabs(rhs), std::fabs(lhs), 1.0});
    worst = std::min(worst, (rhs - lhs) / scale);
    ++samples;
  }
  return make_report("assumption_control_recursion", worst, kAlgebraTol, samples);
}

inline CheckReport check_assumption_bounds(const MethodSpec& method, const RegressionProblem& p,
                                           const ProblemConstants& consts,
                                           const AssumptionParams& q, std::size_t num_states,
                                           Rng& rng) {
  const CheckReport first =
      check_correction_variance_bound(method, p, consts, q, num_states, rng);
  const CheckReport second = check_control_recursion(method, p, consts, q, num_states, rng);
  CheckReport r;
  r.name = "assumption_bounds";
  r.passed = first.passed && second.passed;
  r.worst_margin = std::min(first.worst_margin, second.worst_margin);
  r.samples = first.samples + second.samples;
  r.notes = first.notes.empty() ? second.notes : first.notes;
  return r;
}

// Ensemble test of the one-step Lyapunov recursion
//   E[Psi_{k+1}] <= theta E[Psi_k] + zeta.
// Tested through the paired per-run statistic D_k = Psi_{k+1} - theta Psi_k,
// whose mean must not exceed zeta. Pairing matters: Psi_{k+1} and Psi_k share
// the run, and for the table-based method the realized jump is heavy-tailed
// (a rare stale table entry dominates), so the standard error of D itself is
// the only honest noise scale. Five standard errors keep the family-wise
// false-alarm rate negligible over horizon x methods many one-sided tests.
inline CheckReport check_lyapunov_recursion(MethodSpec method, const RegressionProblem& p,
                                            const ProblemConstants& consts, double alpha,
                                            std::size_t num_seeds, std::size_t horizon,
                                            std::uint64_t base_seed = 424242) {
  const RateInputs in = effective_rate_inputs(method, p, consts);
  const RateCertificate cert =
      certificate(params_from_inputs(method.strategy.kind, in), method.gamma, alpha, in.mu);
  method.iterations = horizon;
  method.record_lyapunov_alpha = alpha;
  Vec x0(p.d, 0.0);
  for (std::size_t j = 0; j < p.d; ++j) x0[j] = consts.x_star[j] + 10.0 / std::sqrt(double(p.d));
  std::vector<double> mean_d(horizon, 0.0), m2_d(horizon, 0.0), mean_psi(horizon + 1, 0.0);
  for (std::size_t r = 0; r < num_seeds; ++r) {
    const Trajectory t = run(method, p, consts, x0, base_seed, r);
    for (std::size_t k = 0; k <= horizon; ++k)
      mean_psi[k] += (t.lyapunov[k] - mean_psi[k]) / double(r + 1);
    for (std::size_t k = 0; k < horizon; ++k) {
      const double d = t.lyapunov[k + 1] - cert.theta * t.lyapunov[k];
      const double d1 = d - mean_d[k];
      mean_d[k] += d1 / double(r + 1);
      m2_d[k] += d1 * (d - mean_d[k]);
    }
  }
  // One step of the iteration carries an absolute rounding error in x of the
  // order of an ulp of the data scale (e.g. (x - b) + b quantizes tiny x), so
  // Psi = ||x - x*||^2 is only trustworthy up to 2 sqrt(Psi) e_abs + e_abs^2.
  double data_scale = std::sqrt(dist_sq(x0, consts.x_star)) + norm(consts.x_star);
  for (double b : p.targets) data_scale = std::max(data_scale, std::fabs(b));
  const double e_abs = 64.0 * std::numeric_limits<double>::epsilon() * data_scale;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < horizon; ++k) {
    const double se_d =
        num_seeds > 1 ? std::sqrt(m2_d[k] / double(num_seeds - 1) / double(num_seeds)) : 0.0;
    const double psi = std::max(mean_psi[k], mean_psi[k + 1]);
    const double rhs = cert.zeta + 5.0 * se_d +
                       2.0 * std::sqrt(std::max(psi, 0.0)) * e_abs + e_abs * e_abs;
    const double lhs = mean_d[k];
    const double scale =
        std::max({cert.theta * mean_psi[k] + cert.zeta, mean_psi[k + 1], 1e-300});
    worst = std::min(worst, (rhs - lhs) / scale);
  }
  return make_report("lyapunov_recursion", worst, kAlgebraTol, num_seeds * horizon);
}

// Similarity constants: delta bounds the Hessian-deviation variance, nu the
// per-function gradient displacement; random probes must respect both, and a
// probe along the top deviation eigenvector must come within 1% of delta^2.
inline CheckReport check_similarity_constants(const RegressionProblem& p,
                                              const ProblemConstants& consts,
                                              std::size_t num_probes, Rng& rng) {
  const double delta_sq = consts.delta * consts.delta;
  const double nu_sq = consts.nu * consts.nu;
  double worst = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  auto deviation_lhs = [&](const Vec& x) {
    const Vec gbar = p.grad(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) {
      Vec dev = sub(p.grad_i(i, x), gbar);
      dev = sub(dev, consts.grad_at_star[i]);
      acc += norm_sq(dev) / double(p.n);
    }
    return acc;
  };
  for (std::size_t s = 0; s < num_probes; ++s) {
    Vec x(p.d);
    for (std::size_t j = 0; j < p.d; ++j) x[j] = consts.x_star[j] + 5.0 * rng.next_gaussian();
    const double dist = dist_sq(x, consts.x_star);
    const double lhs = deviation_lhs(x);
    const double rhs = delta_sq * dist;
    worst = std::min(worst, (rhs - lhs) / std::max({rhs, lhs, 1.0}));
    ++samples;
    // Multi-point bound: independent points per function.
    std::vector<Vec> xs(p.n, Vec(p.d));
    double sum_dist = 0.0;
    Vec avg_grad(p.d, 0.0);
    for (std::size_t j = 0; j < p.n; ++j) {
      for (std::size_t t = 0; t < p.d; ++t)
        xs[j][t] = consts.x_star[t] + 5.0 * rng.next_gaussian();
      sum_dist += dist_sq(xs[j], consts.x_star);
      axpy(1.0 / double(p.n), p.grad_i(j, xs[j]), avg_grad);
    }
    double multi_lhs = 0.0;
    for (std::size_t j = 0; j < p.n; ++j) {
      Vec dev = sub(p.grad_i(j, xs[j]), avg_grad);
      dev = sub(dev, consts.grad_at_star[j]);
      multi_lhs += norm_sq(dev) / double(p.n);
    }
    const double multi_rhs = nu_sq * sum_dist / double(p.n);
    worst = std::min(worst, (multi_rhs - multi_lhs) / std::max({multi_rhs, multi_lhs, 1.0}));
    ++samples;
  }
  std::string notes;
  if (delta_sq > 0.0) {
    // Adversarial probe: the top eigenvector of the averaged squared Hessian
    // deviation attains the supremum ratio for quadratics.
    Mat h_bar(p.d);
    std::vector<Mat> hess(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
      hess[i] = p.hessian_i(i);
      for (std::size_t r = 0; r < p.d; ++r)
        for (std::size_t c = 0; c < p.d; ++c) h_bar(r, c) += hess[i](r, c) / double(p.n);
    }
    Mat dev_sq_mat(p.d);
    for (std::size_t i = 0; i < p.n; ++i) {
      Mat di = hess[i];
      for (std::size_t r = 0; r < p.d; ++r)
        for (std::size_t c = 0; c < p.d; ++c) di(r, c) -= h_bar(r, c);
      const Mat di2 = di.mul(di);
      for (std::size_t r = 0; r < p.d; ++r)
        for (std::size_t c = 0; c < p.d; ++c) dev_sq_mat(r, c) += di2(r, c) / double(p.n);
    }
    Vec top;
    extreme_eigenvalue(dev_sq_mat, Extreme::largest, &top);
    const Vec x_adv = add(consts.x_star, top);
    const double ratio = deviation_lhs(x_adv) / dist_sq(x_adv, consts.x_star);
    worst = std::min(worst, ratio / delta_sq - 0.99);
    ++samples;
    notes = "adversarial ratio " + std::to_string(ratio / delta_sq);
  }
  return make_report("similarity_constants", worst, kAlgebraTol, samples, notes);
}

// Scalar recurrence s_{k+1} = a s_k + b implies
// s_k <= a^k s_0 + b * min{k, 1/(1-a)}.
inline CheckReport check_recurrence_bound(std::size_t num_cases, Rng& rng) {
  double worst = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  for (std::size_t c = 0; c < num_cases; ++c) {
    const double a = rng.next_double() * 0.999 + 5e-4;
    const double b = rng.next_double() * 10.0;
    const double s0 = rng.next_double() * 100.0;
    const std::size_t horizon = 1 + std::size_t(rng.next_index(50));
    double s = s0, pow_a = 1.0;
    for (std::size_t k = 1; k <= horizon; ++k) {
      s = a * s + b;
      pow_a *= a;
      const double bound = pow_a * s0 + b * std::min(double(k), 1.0 / (1.0 - a));
      worst = std::min(worst, (bound - s) / std::max({bound, s, 1.0}));
      ++samples;
    }
  }
  return make_report("recurrence_bound", worst, kAlgebraTol, samples);
}

inline CheckReport check_prox_oracle_gap(const RegressionProblem& p, std::size_t num_cases,
                                         Rng& rng) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < num_cases; ++c) {
    const double gamma = std::pow(10.0, -4.0 + 8.0 * rng.next_double());
    Vec v(p.d);
    for (auto& e : v) e = 5.0 * rng.next_gaussian();
    Vec closed, reference;
    if (rng.next_bernoulli(0.5)) {
      const std::size_t i = std::size_t(rng.next_index(p.n));
      closed = p.prox_single(i, gamma, v);
      reference = prox_oracle(p, {i}, {1.0}, gamma, v);
    } else {
      const std::size_t count = 2 + std::size_t(rng.next_index(std::min<std::size_t>(p.n, 5)));
      std::vector<std::size_t> subset;
      std::vector<double> weights;
      for (std::size_t k = 0; k < count; ++k) {
        subset.push_back(std::size_t(rng.next_index(p.n)));
        weights.push_back(0.1 + rng.next_double());
      }
      closed = p.prox_subset(subset, weights, gamma, v);
      reference = prox_oracle(p, subset, weights, gamma, v);
    }
    worst = std::min(worst, kOracleTol - std::sqrt(dist_sq(closed, reference)));
  }
  return make_report("prox_oracle_gap", worst, 0.0, num_cases,
                     "margin is tolerance minus observed gap");
}

// Default suite over seeded random instances; `quick` trims the Monte-Carlo
// budgets so the whole suite stays under a minute.
inline std::vector<CheckReport> default_suite(std::uint64_t seed, bool quick) {
  std::vector<CheckReport> out;
  Rng rng = rng_new(seed, 0);
  const std::size_t instances = quick ? 6 : 20;
  const std::size_t states = quick ? 5 : 20;
  const std::size_t pairs = quick ? 100 : 1000;
  for (std::size_t inst = 0; inst < instances; ++inst) {
    const std::size_t n = 2 + std::size_t(rng.next_index(19));
    const std::size_t d = 1 + std::size_t(rng.next_index(8));
    Vec lambdas(n);
    for (auto& l : lambdas) l = 0.25 + rng.next_double();
    const RegressionProblem p = make_gaussian_problem(n, d, lambdas, seed + 1000 + inst);
    const ProblemConstants consts = compute_constants(p);
    const std::string tag = " [instance " + std::to_string(inst) + "]";

    CheckReport r = check_prox_oracle_gap(p, quick ? 20 : 50, rng);
    r.name += tag;
    out.push_back(r);

    r = check_contraction(p, 0, consts.mu_each[0], {0.01, 1.0, 100.0}, pairs, rng);
    r.name += tag;
    out.push_back(r);

    const std::vector<CorrectionStrategy> strategies = {
        {CorrectionKind::none, 1.0},  {CorrectionKind::star, 1.0},
        {CorrectionKind::gc, 1.0},    {CorrectionKind::lsvrp, 0.5},
        {CorrectionKind::point_saga, 1.0}};
    for (const auto& strategy : strategies) {
      MethodSpec m;
      m.strategy = strategy;
      m.sampler = Sampler::uniform_singleton(n);
      m.gamma = 0.5;
      const AssumptionParams q = method_params(strategy, consts, n);
      r = check_assumption_bounds(m, p, consts, q, states, rng);
      r.name += " kind " + std::to_string(int(strategy.kind)) + tag;
      out.push_back(r);
    }

    r = check_similarity_constants(p, consts, states, rng);
    r.name += tag;
    out.push_back(r);
  }
  out.push_back(check_recurrence_bound(100, rng));

  // Ensemble recursion checks on a small fixed instance (two 1-D functions
  // with equal curvature and opposite targets).
  RegressionProblem toy;
  toy.n = 2;
  toy.d = 1;
  toy.rows = {{1.0}, {1.0}};
  toy.targets = {2.0, -2.0};
  toy.lambdas = {0.5, 0.5};
  const ProblemConstants tc = compute_constants(toy);
  const std::size_t seeds = quick ? 300 : 2000;
  const std::size_t horizon = quick ? 50 : 100;
  MethodSpec m;
  m.sampler = Sampler::uniform_singleton(2);
  m.gamma = 1.0;
  m.strategy = {CorrectionKind::none, 1.0};
  CheckReport r = check_lyapunov_recursion(m, toy, tc, 1.0, seeds, horizon, seed + 7);
  r.name += " [plain]";
  out.push_back(r);
  m.strategy = {CorrectionKind::gc, 1.0};
  r = check_lyapunov_recursion(m, toy, tc, 1.0, seeds, horizon, seed + 8);
  r.name += " [gradient corrected]";
  out.push_back(r);
  m.strategy = {CorrectionKind::lsvrp, 0.5};
  r = check_lyapunov_recursion(m, toy, tc, m.gamma * tc.mu / 0.5, seeds, horizon, seed + 9);
  r.name += " [lazy control]";
  out.push_back(r);
  return out;
}

}  // namespace sppm

#endif  // SPPM_VERIFY_HPP
