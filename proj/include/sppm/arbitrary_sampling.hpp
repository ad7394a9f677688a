#ifndef SPPM_ARBITRARY_SAMPLING_HPP
#define SPPM_ARBITRARY_SAMPLING_HPP

#include <cmath>
#include <limits>

#include "sppm/problem.hpp"
#include "sppm/sampling.hpp"

namespace sppm {

struct AsConstants {
  double mu_as = 0.0;
  double sigma_star_as_sq = 0.0;
  bool exact = true;
  double std_error = 0.0;  // of the sigma estimate when Monte-Carlo was used
  std::size_t samples = 0;
};

// sigma*_AS^2 = sum_C p_C || sum_{i in C} grad f_i(x*) / (n p_i) ||^2 and
// mu_AS = min over support of sum_{i in C} mu_i / (n p_i). Exact enumeration
// when the support fits under the cap, Monte-Carlo otherwise.
inline AsConstants sigma_star_as(const RegressionProblem& p, const ProblemConstants& c,
                                 const Sampler& sampler, bool require_exact = false,
                                 std::size_t mc_draws = 1000000, std::uint64_t mc_seed = 12345) {
  AsConstants out;
  const auto incl = sampler.inclusion_probs();
  auto subset_grad_sq = [&](const std::vector<std::size_t>& idx) {
    Vec g(p.d, 0.0);
    for (std::size_t i : idx) axpy(1.0 / (double(p.n) * incl[i]), c.grad_at_star[i], g);
    return norm_sq(g);
  };
  auto subset_mu = [&](const std::vector<std::size_t>& idx) {
    double m = 0.0;
    for (std::size_t i : idx) m += c.mu_each[i] / (double(p.n) * incl[i]);
    return m;
  };

  if (sampler.support_size() <= 1000000) {
    const auto support = sampler.enumerate_support();
    out.mu_as = std::numeric_limits<double>::infinity();
    for (const auto& entry : support) {
      out.sigma_star_as_sq += entry.prob * subset_grad_sq(entry.indices);
      out.mu_as = std::min(out.mu_as, subset_mu(entry.indices));
    }
    out.exact = true;
    out.samples = support.size();
    return out;
  }
  if (require_exact) throw SupportTooLarge();

  Rng rng = rng_new(mc_seed, 0);
  out.mu_as = std::numeric_limits<double>::infinity();
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < mc_draws; ++k) {
    const auto drawn = sampler.draw(rng);
    const double v = subset_grad_sq(drawn.indices);
    out.mu_as = std::min(out.mu_as, subset_mu(drawn.indices));
    const double delta = v - mean;
    mean += delta / double(k + 1);
    m2 += delta * (v - mean);
  }
  out.sigma_star_as_sq = mean;
  out.std_error = std::sqrt(m2 / double(mc_draws - 1) / double(mc_draws));
  out.exact = false;
  out.samples = mc_draws;
  return out;
}

}  // namespace sppm

#endif  // SPPM_ARBITRARY_SAMPLING_HPP
