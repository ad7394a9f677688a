#ifndef SPPM_NUMERICS_HPP
#define SPPM_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sppm/errors.hpp"

namespace sppm {

using Vec = std::vector<double>;

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm_sq(const Vec& x) { return dot(x, x); }

inline double norm(const Vec& x) { return std::sqrt(norm_sq(x)); }

inline double dist_sq(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

inline void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Vec scaled(const Vec& x, double a) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
  return r;
}

inline Vec sub(const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vec add(const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

// Small dense square matrix, row-major. Sized for d <= ~10; everything is O(d^2)/O(d^3)
// and that is fine at this scale.
class Mat {
 public:
  Mat() = default;
  explicit Mat(std::size_t d, double fill = 0.0) : d_(d), a_(d * d, fill) {}

  std::size_t dim() const { return d_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

  static Mat identity(std::size_t d) {
    Mat m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }

  bool is_symmetric(double rel_tol = 1e-12) const {
    double max_abs = 0.0, max_dev = 0.0;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        max_abs = std::max(max_abs, std::fabs((*this)(i, j)));
        max_dev = std::max(max_dev, std::fabs((*this)(i, j) - (*this)(j, i)));
      }
    return max_dev <= rel_tol * std::max(max_abs, 1.0);
  }

  Vec mul(const Vec& x) const {
    Vec y(d_, 0.0);
    for (std::size_t i = 0; i < d_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d_; ++j) s += a_[i * d_ + j] * x[j];
      y[i] = s;
    }
    return y;
  }

  void add_scaled_identity(double c) {
    for (std::size_t i = 0; i < d_; ++i) (*this)(i, i) += c;
  }

  // M += w * v v^T
  void add_outer(double w, const Vec& v) {
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) (*this)(i, j) += w * v[i] * v[j];
  }

  Mat mul(const Mat& o) const {
    Mat r(d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t k = 0; k < d_; ++k) {
        const double aik = (*this)(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < d_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

 private:
  std::size_t d_ = 0;
  std::vector<double> a_;
};

// Cholesky solve for symmetric positive definite systems. Throws NotSPD on a
// nonpositive pivot.
inline Vec solve_spd(const Mat& m, const Vec& rhs) {
  const std::size_t d = m.dim();
  // Lower-triangular factor, computed in place.
  std::vector<double> l(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * d + k] * l[j * d + k];
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) throw NotSPD();
        l[i * d + i] = std::sqrt(s);
      } else {
        l[i * d + j] = s / l[j * d + j];
      }
    }
  }
  // Forward then backward substitution.
  Vec y(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * d + k] * y[k];
    y[i] = s / l[i * d + i];
  }
  Vec x(d);
  for (std::size_t ii = d; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < d; ++k) s -= l[k * d + ii] * x[k];
    x[ii] = s / l[ii * d + ii];
  }
  return x;
}

// Solves (c I + a a^T) x = rhs via the Sherman-Morrison identity:
//   x = (1/c) (rhs - a (a^T rhs) / (c + ||a||^2)).
inline Vec rank_one_spd_solve(double c, const Vec& a, const Vec& rhs) {
  if (c <= 0.0) throw NonPositiveC();
  const double coeff = dot(a, rhs) / (c + norm_sq(a));
  Vec x(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) x[i] = (rhs[i] - a[i] * coeff) / c;
  return x;
}

enum class Extreme { largest, smallest };

// Power iteration on a symmetric matrix; the smallest eigenvalue is obtained by
// iterating on sigma I - M with sigma = largest + 1. Optionally returns the
// converged eigenvector through `out_vector`.
inline double extreme_eigenvalue(const Mat& m, Extreme which, Vec* out_vector = nullptr,
                                 double tol = 1e-11, std::size_t max_iters = 100000) {
  const std::size_t d = m.dim();
  if (d == 1) {
    if (out_vector) *out_vector = Vec{1.0};
    return m(0, 0);
  }
  auto power = [&](auto&& apply, Vec& v) -> double {
    // Deterministic start with all components present.
    for (std::size_t i = 0; i < d; ++i) v[i] = 1.0 + 0.5 / double(i + 1);
    double inv = 1.0 / norm(v);
    for (auto& e : v) e *= inv;
    for (std::size_t it = 0; it < max_iters; ++it) {
      Vec w = apply(v);
      const double nw = norm(w);
      if (nw == 0.0) return 0.0;  // v already in the kernel: eigenvalue 0
      for (std::size_t i = 0; i < d; ++i) w[i] /= nw;
      // Residual ||M v - lambda v|| relative to |lambda|.
      Vec mv = apply(w);
      const double lam2 = dot(w, mv);
      double res = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double r = mv[i] - lam2 * w[i];
        res += r * r;
      }
      v = w;
      if (std::sqrt(res) <= tol * std::max(std::fabs(lam2), 1e-300)) return lam2;
    }
    throw NoConvergence("power iteration did not converge");
  };

  Vec v(d);
  if (which == Extreme::largest) {
    // Frobenius norm upper-bounds the spectral radius; shift so the dominant
    // eigenvalue of (M + s I) is the algebraically largest one of M.
    double fro = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) fro += m(i, j) * m(i, j);
    const double shift = std::sqrt(fro) + 1.0;
    const double lam = power([&](const Vec& x) {
      Vec y = m.mul(x);
      axpy(shift, x, y);
      return y;
    }, v);
    if (out_vector) *out_vector = v;
    return lam - shift;
  }
  const double largest = extreme_eigenvalue(m, Extreme::largest, nullptr, tol, max_iters);
  const double sigma = largest + 1.0;
  const double lam = power([&](const Vec& x) {
    Vec y = m.mul(x);
    for (std::size_t i = 0; i < d; ++i) y[i] = sigma * x[i] - y[i];
    return y;
  }, v);
  if (out_vector) *out_vector = v;
  return sigma - lam;
}

// Deterministic seedable generator: xoshiro256++ with splitmix64 stream setup.
// Distinct (base_seed, run_index) pairs yield independent streams; equal pairs
// yield bit-identical streams. The algorithm name is recorded in run metadata.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "xoshiro256++";

  Rng(std::uint64_t base_seed, std::uint64_t run_index) {
    std::uint64_t sm = base_seed + 0x9E3779B97F4A7C15ULL * (run_index + 1);
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection on the top bits.
  std::uint64_t next_index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller (one value per call; the pair's second half
  // is discarded to keep the stream layout simple).
  double next_gaussian() {
    double u1 = next_double();
    while (u1 == 0.0) u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  bool next_bernoulli(double p) {
    if (p >= 1.0) return true;  // no draw consumed; keeps streams aligned for p = 1
    return next_double() < p;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

inline Rng rng_new(std::uint64_t base_seed, std::uint64_t run_index) {
  return Rng(base_seed, run_index);
}

inline void validate_distribution(const std::vector<double>& probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0 || !std::isfinite(p)) throw BadDistribution();
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw BadDistribution();
}

// Cumulative-sum inversion; ties broken toward the lower index. The unchecked
// variant is for callers that validated the distribution at construction time.
inline std::size_t sample_categorical_unchecked(Rng& rng, const std::vector<double>& probs) {
  const double u = rng.next_double();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  // Rounding left u at or beyond the accumulated mass: last positive entry.
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return i;
  throw BadDistribution();
}

inline std::size_t sample_categorical(Rng& rng, const std::vector<double>& probs) {
  validate_distribution(probs);
  return sample_categorical_unchecked(rng, probs);
}

}  // namespace sppm

#endif  // SPPM_NUMERICS_HPP
