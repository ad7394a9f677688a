#ifndef SPPM_SAMPLING_HPP
#define SPPM_SAMPLING_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "sppm/numerics.hpp"

namespace sppm {

enum class Scheme { full, singleton, nice, block, stratified };

// A draw: the index set C together with the weights w_i = 1/(n p_i) used by the
// reweighted sub-objective f_C.
struct DrawResult {
  std::vector<std::size_t> indices;
  std::vector<double> weights;
};

struct SupportEntry {
  std::vector<std::size_t> indices;
  double prob;
};

// Distribution over subsets of [n]: full, singleton(probs), tau-nice,
// block(partition, block_probs), stratified(partition). Proper (p_i > 0) and
// nonvacuous (never the empty set) by construction.
class Sampler {
 public:
  // Default: full sampling over a single function (harmless placeholder).
  Sampler() : Sampler(Scheme::full, 1) {}

  static Sampler full(std::size_t n) { return Sampler(Scheme::full, n); }

  static Sampler singleton(std::vector<double> probs) {
    validate_distribution(probs);
    for (double p : probs)
      if (p <= 0.0) throw BadDistribution("singleton sampler needs all p_i > 0");
    Sampler s(Scheme::singleton, probs.size());
    s.probs_ = std::move(probs);
    return s;
  }

  static Sampler uniform_singleton(std::size_t n) {
    return singleton(std::vector<double>(n, 1.0 / double(n)));
  }

  static Sampler nice(std::size_t n, std::size_t tau) {
    if (tau < 1 || tau > n) throw BadDistribution("nice sampler needs 1 <= tau <= n");
    Sampler s(Scheme::nice, n);
    s.tau_ = tau;
    return s;
  }

  static Sampler block(std::vector<std::vector<std::size_t>> partition,
                       std::vector<double> block_probs) {
    validate_distribution(block_probs);
    Sampler s(Scheme::block, 0);
    s.init_partition(std::move(partition));
    for (double q : block_probs)
      if (q <= 0.0) throw BadDistribution("block sampler needs all q_j > 0");
    if (block_probs.size() != s.partition_.size())
      throw BadDistribution("one probability per block required");
    s.probs_ = std::move(block_probs);
    return s;
  }

  static Sampler stratified(std::vector<std::vector<std::size_t>> partition) {
    Sampler s(Scheme::stratified, 0);
    s.init_partition(std::move(partition));
    return s;
  }

  Scheme scheme() const { return scheme_; }
  std::size_t n() const { return n_; }
  std::size_t tau() const { return tau_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<std::vector<std::size_t>>& partition() const { return partition_; }

  // p_i = Prob(i in S)
  std::vector<double> inclusion_probs() const {
    std::vector<double> p(n_, 0.0);
    switch (scheme_) {
      case Scheme::full:
        std::fill(p.begin(), p.end(), 1.0);
        break;
      case Scheme::singleton:
        p = probs_;
        break;
      case Scheme::nice:
        std::fill(p.begin(), p.end(), double(tau_) / double(n_));
        break;
      case Scheme::block:
        for (std::size_t j = 0; j < partition_.size(); ++j)
          for (std::size_t i : partition_[j]) p[i] = probs_[j];
        break;
      case Scheme::stratified:
        for (const auto& blockset : partition_)
          for (std::size_t i : blockset) p[i] = 1.0 / double(blockset.size());
        break;
    }
    return p;
  }

  DrawResult draw(Rng& rng) const {
    DrawResult r;
    switch (scheme_) {
      case Scheme::full:
        r.indices.resize(n_);
        std::iota(r.indices.begin(), r.indices.end(), 0);
        break;
      case Scheme::singleton:
        r.indices.push_back(sample_categorical_unchecked(rng, probs_));
        break;
      case Scheme::nice: {
        // Fisher-Yates partial shuffle, first tau slots, then sorted for a
        // deterministic set representation.
        std::vector<std::size_t> pool(n_);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t k = 0; k < tau_; ++k) {
          const std::size_t j = k + std::size_t(rng.next_index(n_ - k));
          std::swap(pool[k], pool[j]);
        }
        r.indices.assign(pool.begin(), pool.begin() + tau_);
        std::sort(r.indices.begin(), r.indices.end());
        break;
      }
      case Scheme::block: {
        const std::size_t j = sample_categorical_unchecked(rng, probs_);
        r.indices = partition_[j];
        break;
      }
      case Scheme::stratified:
        for (const auto& blockset : partition_)
          r.indices.push_back(blockset[rng.next_index(blockset.size())]);
        std::sort(r.indices.begin(), r.indices.end());
        break;
    }
    const auto p = inclusion_probs();
    r.weights.reserve(r.indices.size());
    for (std::size_t i : r.indices) r.weights.push_back(1.0 / (double(n_) * p[i]));
    return r;
  }

  std::size_t support_size() const {
    switch (scheme_) {
      case Scheme::full:
        return 1;
      case Scheme::singleton:
        return n_;
      case Scheme::nice: {
        // C(n, tau), capped to avoid overflow.
        double c = 1.0;
        for (std::size_t k = 1; k <= tau_; ++k) c *= double(n_ - tau_ + k) / double(k);
        return c > 2e6 ? std::size_t(2e6) + 1 : std::size_t(c + 0.5);
      }
      case Scheme::block:
        return partition_.size();
      case Scheme::stratified: {
        double c = 1.0;
        for (const auto& blockset : partition_) {
          c *= double(blockset.size());
          if (c > 2e6) return std::size_t(2e6) + 1;
        }
        return std::size_t(c + 0.5);
      }
    }
    return 0;
  }

  // Full support as (C, p_C) pairs; nice subsets are listed lexicographically.
  std::vector<SupportEntry> enumerate_support(std::size_t cap = 1000000) const {
    if (support_size() > cap) throw SupportTooLarge();
    std::vector<SupportEntry> out;
    switch (scheme_) {
      case Scheme::full: {
        SupportEntry e;
        e.indices.resize(n_);
        std::iota(e.indices.begin(), e.indices.end(), 0);
        e.prob = 1.0;
        out.push_back(std::move(e));
        break;
      }
      case Scheme::singleton:
        for (std::size_t i = 0; i < n_; ++i) out.push_back({{i}, probs_[i]});
        break;
      case Scheme::nice: {
        const double p_c = 1.0 / double(support_size());
        std::vector<std::size_t> comb(tau_);
        std::iota(comb.begin(), comb.end(), 0);
        for (;;) {
          out.push_back({comb, p_c});
          // next lexicographic tau-combination of [0, n)
          std::size_t k = tau_;
          while (k-- > 0) {
            if (comb[k] + 1 <= n_ - (tau_ - k)) {
              ++comb[k];
              for (std::size_t j = k + 1; j < tau_; ++j) comb[j] = comb[j - 1] + 1;
              break;
            }
            if (k == 0) return out;
          }
        }
      }
      case Scheme::block:
        for (std::size_t j = 0; j < partition_.size(); ++j)
          out.push_back({partition_[j], probs_[j]});
        break;
      case Scheme::stratified: {
        std::vector<std::size_t> pick(partition_.size(), 0);
        const double p_c = 1.0 / double(support_size());
        for (;;) {
          SupportEntry e;
          for (std::size_t j = 0; j < partition_.size(); ++j)
            e.indices.push_back(partition_[j][pick[j]]);
          std::sort(e.indices.begin(), e.indices.end());
          e.prob = p_c;
          out.push_back(std::move(e));
          std::size_t j = partition_.size();
          while (j-- > 0) {
            if (++pick[j] < partition_[j].size()) break;
            pick[j] = 0;
            if (j == 0) return out;
          }
        }
      }
    }
    return out;
  }

  std::vector<double> weights_for(const std::vector<std::size_t>& indices) const {
    const auto p = inclusion_probs();
    std::vector<double> w;
    w.reserve(indices.size());
    for (std::size_t i : indices) w.push_back(1.0 / (double(n_) * p[i]));
    return w;
  }

 private:
  Sampler(Scheme scheme, std::size_t n) : scheme_(scheme), n_(n) {}

  void init_partition(std::vector<std::vector<std::size_t>> partition) {
    partition_ = std::move(partition);
    std::size_t total = 0;
    std::vector<bool> seen;
    for (const auto& blockset : partition_) {
      if (blockset.empty()) throw BadDistribution("partition blocks must be nonempty");
      total += blockset.size();
    }
    n_ = total;
    seen.assign(total, false);
    for (const auto& blockset : partition_)
      for (std::size_t i : blockset) {
        if (i >= total || seen[i]) throw BadDistribution("partition must cover [n] exactly once");
        seen[i] = true;
      }
  }

  Scheme scheme_;
  std::size_t n_;
  std::size_t tau_ = 0;
  std::vector<double> probs_;
  std::vector<std::vector<std::size_t>> partition_;
};

}  // namespace sppm

#endif  // SPPM_SAMPLING_HPP
