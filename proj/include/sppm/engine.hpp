#ifndef SPPM_ENGINE_HPP
#define SPPM_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sppm/problem.hpp"
#include "sppm/sampling.hpp"

namespace sppm {

// The correction-vector rule: it is the only thing distinguishing the seven
// methods once the sampler is fixed.
enum class CorrectionKind {
  none,       // SPPM / SPPM-NS / SPPM-AS: h = 0
  star,       // h = grad f_xi(x*)
  gc,         // h = grad f_xi(x_k) - grad f(x_k)
  lsvrp,      // h = grad f_xi(w_k) - grad f(w_k), lazy control update
  point_saga  // h = grad f_i(w^i_k) - (1/n) sum_j grad f_j(w^j_k)
};

struct CorrectionStrategy {
  CorrectionKind kind = CorrectionKind::none;
  double lsvrp_p = 1.0;  // control-update probability, (0, 1]
};

inline bool is_variance_reduced_control(CorrectionKind k) {
  return k == CorrectionKind::lsvrp || k == CorrectionKind::point_saga;
}

// Control vectors phi_k. Gradient caches are maintained incrementally so a
// Point SAGA step stays O(d) rather than O(n d).
struct ControlState {
  // L-SVRP
  Vec w;
  Vec grad_f_w;
  // Point SAGA
  std::vector<Vec> table;
  std::vector<Vec> table_grads;
  Vec table_grad_avg;

  static ControlState make(const CorrectionStrategy& strategy, const RegressionProblem& p,
                           const ProblemConstants& consts, const Vec& x0) {
    ControlState s;
    if (strategy.kind == CorrectionKind::lsvrp) {
      s.w = x0;
      s.grad_f_w = p.grad(x0);
    } else if (strategy.kind == CorrectionKind::point_saga) {
      s.table.assign(p.n, x0);
      s.table_grads.resize(p.n);
      s.table_grad_avg.assign(p.d, 0.0);
      for (std::size_t j = 0; j < p.n; ++j) {
        s.table_grads[j] = p.grad_i(j, x0);
        axpy(1.0 / double(p.n), s.table_grads[j], s.table_grad_avg);
      }
    }
    return s;
  }

  // sigma_k^2: 0 for methods without a control vector.
  double sigma_sq(const CorrectionStrategy& strategy, const ProblemConstants& consts,
                  std::size_t n) const {
    switch (strategy.kind) {
      case CorrectionKind::lsvrp:
        return dist_sq(w, consts.x_star);
      case CorrectionKind::point_saga: {
        // Summed directly: an incremental += new - old accumulator keeps an
        // absolute drift at the ulp of the largest past entry, which becomes
        // a false floor once the table has converged far below it. Only paid
        // when the Lyapunov value is recorded.
        double acc = 0.0;
        for (const Vec& w_j : table) acc += dist_sq(w_j, consts.x_star);
        return acc / double(n);
      }
      default:
        return 0.0;
    }
  }
};

struct MethodSpec {
  CorrectionStrategy strategy;
  Sampler sampler;
  double gamma = 1.0;
  std::size_t iterations = 0;
  std::optional<double> record_lyapunov_alpha;
};

struct Trajectory {
  std::vector<double> sq_dist;                    // length iterations + 1
  std::vector<double> lyapunov;                   // same length when alpha was given
  std::vector<std::vector<std::size_t>> sampled;  // one entry per step
  std::uint64_t base_seed = 0;
  std::uint64_t run_index = 0;
  const char* rng_algorithm = Rng::kAlgorithm;
};

inline void check_state(const CorrectionStrategy& strategy, const ControlState& state,
                        std::size_t n) {
  if (strategy.kind == CorrectionKind::lsvrp && state.w.empty())
    throw StateMismatch("lsvrp needs a control vector w");
  if (strategy.kind == CorrectionKind::point_saga && state.table.size() != n)
    throw StateMismatch("point_saga needs a table of n control vectors");
}

// h_k for a realized sample index. Zero-mean over the sampling distribution.
inline Vec correction(const CorrectionStrategy& strategy, const ControlState& state,
                      const RegressionProblem& p, const ProblemConstants& consts, const Vec& x_k,
                      std::size_t idx) {
  check_state(strategy, state, p.n);
  switch (strategy.kind) {
    case CorrectionKind::none:
      return Vec(p.d, 0.0);
    case CorrectionKind::star:
      return consts.grad_at_star[idx];
    case CorrectionKind::gc:
      return sub(p.grad_i(idx, x_k), p.grad(x_k));
    case CorrectionKind::lsvrp:
      return sub(p.grad_i(idx, state.w), state.grad_f_w);
    case CorrectionKind::point_saga:
      return sub(state.table_grads[idx], state.table_grad_avg);
  }
  return Vec(p.d, 0.0);
}

struct StepResult {
  Vec x_next;
  std::vector<std::size_t> drawn;
};

// One SPPM-LC iteration: draw, correct, prox, update control state. Draw order
// is fixed: index/subset first, then (L-SVRP only) the Bernoulli coin.
inline StepResult step(const MethodSpec& method, const RegressionProblem& p,
                       const ProblemConstants& consts, const Vec& x_k, ControlState& state,
                       Rng& rng) {
  if (method.gamma <= 0.0) throw NonPositiveGamma();
  StepResult out;
  if (method.strategy.kind == CorrectionKind::none) {
    const auto drawn = method.sampler.draw(rng);
    out.x_next = p.prox_subset(drawn.indices, drawn.weights, method.gamma, x_k);
    out.drawn = drawn.indices;
    return out;
  }
  // Single uniform index for the corrected variants.
  const auto drawn = method.sampler.draw(rng);
  const std::size_t i = drawn.indices[0];
  const Vec h = correction(method.strategy, state, p, consts, x_k, i);
  Vec v = x_k;
  axpy(method.gamma, h, v);
  out.x_next = p.prox_single(i, method.gamma, v);
  out.drawn = {i};

  if (method.strategy.kind == CorrectionKind::lsvrp) {
    if (rng.next_bernoulli(method.strategy.lsvrp_p)) {
      state.w = out.x_next;
      state.grad_f_w = p.grad(state.w);
    }
  } else if (method.strategy.kind == CorrectionKind::point_saga) {
    Vec g_new = p.grad_i(i, out.x_next);
    Vec diff = sub(g_new, state.table_grads[i]);
    axpy(1.0 / double(p.n), diff, state.table_grad_avg);
    state.table_grads[i] = std::move(g_new);
    state.table[i] = out.x_next;
  }
  return out;
}

inline Trajectory run(const MethodSpec& method, const RegressionProblem& p,
                      const ProblemConstants& consts, const Vec& x0, std::uint64_t base_seed,
                      std::uint64_t run_index) {
  Rng rng = rng_new(base_seed, run_index);
  ControlState state = ControlState::make(method.strategy, p, consts, x0);
  Trajectory t;
  t.base_seed = base_seed;
  t.run_index = run_index;
  t.sq_dist.reserve(method.iterations + 1);
  t.sampled.reserve(method.iterations);
  const bool with_ly = method.record_lyapunov_alpha.has_value();
  const double alpha = with_ly ? *method.record_lyapunov_alpha : 0.0;
  Vec x = x0;
  t.sq_dist.push_back(dist_sq(x, consts.x_star));
  if (with_ly)
    t.lyapunov.push_back(t.sq_dist.back() + alpha * state.sigma_sq(method.strategy, consts, p.n));
  for (std::size_t k = 0; k < method.iterations; ++k) {
    StepResult s = step(method, p, consts, x, state, rng);
    x = std::move(s.x_next);
    t.sq_dist.push_back(dist_sq(x, consts.x_star));
    if (with_ly)
      t.lyapunov.push_back(t.sq_dist.back() +
                           alpha * state.sigma_sq(method.strategy, consts, p.n));
    t.sampled.push_back(std::move(s.drawn));
  }
  return t;
}

struct EnsembleStats {
  std::vector<double> mean_sq_dist;
  std::vector<double> se_sq_dist;
  std::vector<double> mean_lyapunov;
  std::vector<double> se_lyapunov;
  std::size_t num_runs = 0;
};

// Independent seeded runs aggregated with a single-pass mean/variance update;
// reduction order is fixed by run_index.
inline EnsembleStats run_ensemble(const MethodSpec& method, const RegressionProblem& p,
                                  const ProblemConstants& consts, const Vec& x0,
                                  std::uint64_t base_seed, std::size_t num_runs) {
  EnsembleStats stats;
  stats.num_runs = num_runs;
  const std::size_t len = method.iterations + 1;
  const bool with_ly = method.record_lyapunov_alpha.has_value();
  std::vector<double> mean_sq(len, 0.0), m2_sq(len, 0.0);
  std::vector<double> mean_ly, m2_ly;
  if (with_ly) {
    mean_ly.assign(len, 0.0);
    m2_ly.assign(len, 0.0);
  }
  for (std::size_t r = 0; r < num_runs; ++r) {
    const Trajectory t = run(method, p, consts, x0, base_seed, r);
    for (std::size_t k = 0; k < len; ++k) {
      const double d1 = t.sq_dist[k] - mean_sq[k];
      mean_sq[k] += d1 / double(r + 1);
      m2_sq[k] += d1 * (t.sq_dist[k] - mean_sq[k]);
      if (with_ly) {
        const double d2 = t.lyapunov[k] - mean_ly[k];
        mean_ly[k] += d2 / double(r + 1);
        m2_ly[k] += d2 * (t.lyapunov[k] - mean_ly[k]);
      }
    }
  }
  auto to_se = [&](const std::vector<double>& m2, std::vector<double>& se) {
    se.assign(len, 0.0);
    if (num_runs > 1)
      for (std::size_t k = 0; k < len; ++k)
        se[k] = std::sqrt(m2[k] / double(num_runs - 1) / double(num_runs));
  };
  stats.mean_sq_dist = std::move(mean_sq);
  to_se(m2_sq, stats.se_sq_dist);
  if (with_ly) {
    stats.mean_lyapunov = std::move(mean_ly);
    to_se(m2_ly, stats.se_lyapunov);
  }
  return stats;
}

}  // namespace sppm

#endif  // SPPM_ENGINE_HPP
