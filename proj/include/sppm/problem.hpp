#ifndef SPPM_PROBLEM_HPP
#define SPPM_PROBLEM_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "sppm/numerics.hpp"

namespace sppm {

// Regularized linear-regression finite sum:
//   f_i(x) = 1/2 (a_i^T x - b_i)^2 + lambda_i ||x||^2,   f = (1/n) sum_i f_i.
// Each f_i is strongly convex since lambda_i > 0, so f has a unique minimizer.
struct RegressionProblem {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<Vec> rows;        // a_i
  Vec targets;                  // b_i
  Vec lambdas;                  // lambda_i > 0

  const Vec& row(std::size_t i) const { return rows[i]; }

  void check_index(std::size_t i) const {
    if (i >= n) throw IndexOutOfRange();
  }

  double value_i(std::size_t i, const Vec& x) const {
    check_index(i);
    const double r = dot(rows[i], x) - targets[i];
    return 0.5 * r * r + lambdas[i] * norm_sq(x);
  }

  double value(const Vec& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += value_i(i, x);
    return s / double(n);
  }

  // grad f_i(x) = a_i (a_i^T x - b_i) + 2 lambda_i x
  Vec grad_i(std::size_t i, const Vec& x) const {
    check_index(i);
    const double r = dot(rows[i], x) - targets[i];
    Vec g = scaled(x, 2.0 * lambdas[i]);
    axpy(r, rows[i], g);
    return g;
  }

  Vec grad(const Vec& x) const {
    Vec g(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = dot(rows[i], x) - targets[i];
      axpy(r / double(n), rows[i], g);
    }
    double lam_sum = 0.0;
    for (double l : lambdas) lam_sum += l;
    axpy(2.0 * lam_sum / double(n), x, g);
    return g;
  }

  // Hessian of f_i: a_i a_i^T + 2 lambda_i I.
  Mat hessian_i(std::size_t i) const {
    check_index(i);
    Mat h(d);
    h.add_outer(1.0, rows[i]);
    h.add_scaled_identity(2.0 * lambdas[i]);
    return h;
  }

  // argmin_x f_i(x) + 1/(2 gamma_eff) ||x - v||^2, closed form through the
  // Sherman-Morrison solve of (2 lambda_i + 1/gamma_eff) I + a_i a_i^T.
  Vec prox_single(std::size_t i, double gamma_eff, const Vec& v) const {
    check_index(i);
    if (gamma_eff <= 0.0) throw NonPositiveGamma();
    const double c = 2.0 * lambdas[i] + 1.0 / gamma_eff;
    Vec rhs = scaled(rows[i], targets[i]);
    axpy(1.0 / gamma_eff, v, rhs);
    return rank_one_spd_solve(c, rows[i], rhs);
  }

  // argmin_x sum_{i in subset} w_i f_i(x) + 1/(2 gamma) ||x - v||^2.
  Vec prox_subset(const std::vector<std::size_t>& subset, const std::vector<double>& weights,
                  double gamma, const Vec& v) const {
    if (subset.empty()) throw EmptySubset();
    if (gamma <= 0.0) throw NonPositiveGamma();
    if (subset.size() == 1) {
      // Single term: w f_i + 1/(2 gamma)||.-v||^2 is the prox of f_i at stepsize gamma*w.
      return prox_single(subset[0], gamma * weights[0], v);
    }
    Mat m(d);
    Vec rhs(d, 0.0);
    double diag = 1.0 / gamma;
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const std::size_t i = subset[k];
      check_index(i);
      m.add_outer(weights[k], rows[i]);
      diag += 2.0 * weights[k] * lambdas[i];
      axpy(weights[k] * targets[i], rows[i], rhs);
    }
    m.add_scaled_identity(diag);
    axpy(1.0 / gamma, v, rhs);
    return solve_spd(m, rhs);
  }

  // Solves ((1/n) sum a_i a_i^T + (2/n) sum lambda_i I) x = (1/n) sum a_i b_i.
  Vec minimizer() const {
    Mat m(d);
    Vec rhs(d, 0.0);
    double lam_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m.add_outer(1.0 / double(n), rows[i]);
      lam_sum += lambdas[i];
      axpy(targets[i] / double(n), rows[i], rhs);
    }
    m.add_scaled_identity(2.0 * lam_sum / double(n));
    return solve_spd(m, rhs);
  }
};

// Everything the rate certificates consume, computed once per instance.
struct ProblemConstants {
  Vec x_star;
  std::vector<double> mu_each;    // mu_i = lambda_min(a_i a_i^T + 2 lambda_i I)
  double mu = 0.0;                // min_i mu_i
  double sigma_star_sq = 0.0;     // (1/n) sum ||grad f_i(x_star)||^2
  double delta = 0.0;             // similarity constant, exact for quadratics
  double nu = 0.0;                // max_i lambda_max(H_i)
  std::vector<Vec> grad_at_star;  // rows: grad f_i(x_star)
};

inline ProblemConstants compute_constants(const RegressionProblem& p) {
  ProblemConstants c;
  c.x_star = p.minimizer();
  c.mu_each.resize(p.n);
  c.grad_at_star.resize(p.n);
  double nu_sq = 0.0;
  std::vector<Mat> hess(p.n);
  Mat h_bar(p.d);
  for (std::size_t i = 0; i < p.n; ++i) {
    hess[i] = p.hessian_i(i);
    for (std::size_t r = 0; r < p.d; ++r)
      for (std::size_t s = 0; s < p.d; ++s) h_bar(r, s) += hess[i](r, s) / double(p.n);
    c.mu_each[i] = extreme_eigenvalue(hess[i], Extreme::smallest);
    nu_sq = std::max(nu_sq, extreme_eigenvalue(hess[i], Extreme::largest));
    c.grad_at_star[i] = p.grad_i(i, c.x_star);
    c.sigma_star_sq += norm_sq(c.grad_at_star[i]) / double(p.n);
  }
  c.mu = c.mu_each[0];
  for (double m : c.mu_each) c.mu = std::min(c.mu, m);
  c.nu = nu_sq;  // nu = max_i lambda_max(H_i); per-function Lipschitz bound
  // delta^2 = lambda_max((1/n) sum (H_i - H_bar)^2): for quadratics the deviation
  // grad f_i(x) - grad f(x) - grad f_i(x_star) equals (H_i - H_bar)(x - x_star).
  Mat dev_sq(p.d);
  for (std::size_t i = 0; i < p.n; ++i) {
    Mat di = hess[i];
    for (std::size_t r = 0; r < p.d; ++r)
      for (std::size_t s = 0; s < p.d; ++s) di(r, s) -= h_bar(r, s);
    Mat di2 = di.mul(di);
    for (std::size_t r = 0; r < p.d; ++r)
      for (std::size_t s = 0; s < p.d; ++s) dev_sq(r, s) += di2(r, s) / double(p.n);
  }
  const double delta_sq = extreme_eigenvalue(dev_sq, Extreme::largest);
  c.delta = std::sqrt(std::max(delta_sq, 0.0));
  return c;
}

// Weighted single-index constants: sigma*_NS^2 = (1/n) sum (1/(n p_i)) ||grad f_i(x*)||^2
// and mu_NS = min_i mu_i / (n p_i).
struct NsConstants {
  double mu_ns = 0.0;
  double sigma_star_ns_sq = 0.0;
};

inline NsConstants sigma_star_ns(const RegressionProblem& p, const ProblemConstants& c,
                                 const std::vector<double>& probs) {
  validate_distribution(probs);
  NsConstants out;
  out.mu_ns = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.n; ++i) {
    if (probs[i] <= 0.0) throw BadDistribution("all sampling probabilities must be positive");
    const double w = 1.0 / (double(p.n) * probs[i]);
    out.sigma_star_ns_sq += w * norm_sq(c.grad_at_star[i]) / double(p.n);
    out.mu_ns = std::min(out.mu_ns, c.mu_each[i] * w);
  }
  return out;
}

// Synthetic instance: A and b entries i.i.d. standard normal from a seeded stream.
inline RegressionProblem make_gaussian_problem(std::size_t n, std::size_t d, const Vec& lambdas,
                                               std::uint64_t seed) {
  RegressionProblem p;
  p.n = n;
  p.d = d;
  p.lambdas = lambdas;
  p.rows.resize(n, Vec(d));
  p.targets.resize(n);
  Rng rng = rng_new(seed, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) p.rows[i][j] = rng.next_gaussian();
  for (std::size_t i = 0; i < n; ++i) p.targets[i] = rng.next_gaussian();
  return p;
}

}  // namespace sppm

#endif  // SPPM_PROBLEM_HPP
