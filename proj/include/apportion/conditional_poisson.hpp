#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "apportion/distribution.hpp"
#include "apportion/profile.hpp"

namespace apportion {

// e_0..e_k of the weights, by the standard triangular recurrence.
template <typename T>
std::vector<T> elementary_symmetric(const std::vector<T>& weights, int k) {
  std::vector<T> e(k + 1, T(0));
  e[0] = T(1);
  for (std::size_t i = 0; i < weights.size(); ++i)
    for (int j = std::min<int>(k, static_cast<int>(i) + 1); j >= 1; --j)
      e[j] += weights[i] * e[j - 1];
  return e;
}

// Inclusion marginals of the conditional Poisson design with the given
// weights: mu_i = w_i * e_{k-1}(w \ i) / e_k(w). O(n^2 k), no subset
// enumeration.
template <typename T>
std::vector<T> conditional_poisson_marginals(const std::vector<T>& weights, int k) {
  const int n = static_cast<int>(weights.size());
  std::vector<T> ek = elementary_symmetric(weights, k);
  std::vector<T> out(n);
  for (int i = 0; i < n; ++i) {
    std::vector<T> rest;
    rest.reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) rest.push_back(weights[j]);
    std::vector<T> e = elementary_symmetric(rest, k - 1);
    out[i] = weights[i] * e[k - 1] / ek[k];
  }
  return out;
}

// Joint inclusion probability of parties i and j (0-indexed here).
template <typename T>
T conditional_poisson_joint(const std::vector<T>& weights, int k, int i, int j) {
  if (k < 2) return T(0);
  std::vector<T> ek = elementary_symmetric(weights, k);
  std::vector<T> rest;
  for (int l = 0; l < static_cast<int>(weights.size()); ++l)
    if (l != i && l != j) rest.push_back(weights[l]);
  std::vector<T> e = elementary_symmetric(rest, k - 2);
  return weights[i] * weights[j] * e[k - 2] / ek[k];
}

struct WorkingProbabilities {
  std::vector<Rat> pi;  // exact snapshot of the solved weights; 0 for p_i = 0
  Rat residual;         // max |marginal - target| achieved
  int iterations = 0;
};

struct SolveError : std::runtime_error {
  Rat last_residual;
  SolveError(const std::string& msg, Rat residual)
      : std::runtime_error(msg), last_residual(std::move(residual)) {}
};

namespace detail {

struct PrecisionGuard {
  unsigned saved;
  explicit PrecisionGuard(int digits10) : saved(BigFloat::default_precision()) {
    BigFloat::default_precision(digits10);
  }
  ~PrecisionGuard() { BigFloat::default_precision(saved); }
};

// Gaussian elimination with partial pivoting; A is overwritten.
inline std::vector<BigFloat> solve_linear(std::vector<std::vector<BigFloat>>& a,
                                          std::vector<BigFloat>& b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (abs(a[r][col]) > abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0) throw SolveError("singular Newton system", Rat(0));
    for (int r = col + 1; r < n; ++r) {
      BigFloat factor = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<BigFloat> x(n);
  for (int r = n - 1; r >= 0; --r) {
    BigFloat acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace detail

// Solves for working probabilities pi such that the conditional Poisson
// design with mass(T) ~ prod_{i in T} pi_i reproduces the target marginals.
// Damped Newton in log space, initialized at the naive odds p/(1-p); the
// iteration fixes the last coordinate since the weights are scale-free.
inline WorkingProbabilities conditional_poisson_solve(const ResidueProfile& p,
                                                      unsigned precision_bits = 128,
                                                      double residual_target = 1e-12,
                                                      int max_iterations = 200) {
  detail::PrecisionGuard guard(bits_to_decimal_digits(precision_bits));

  std::vector<int> live;  // parties with p_i > 0, 1-indexed
  for (int i = 1; i <= p.n(); ++i)
    if (p.p(i) > 0) live.push_back(i);
  const int m = static_cast<int>(live.size());

  WorkingProbabilities out;
  out.pi.assign(p.n(), Rat(0));
  out.residual = 0;
  if (p.k == 0) return out;

  std::vector<BigFloat> target(m), lambda(m);
  for (int i = 0; i < m; ++i) {
    target[i] = float_from_rational(p.p(live[i]));
    lambda[i] = log(target[i] / (1 - target[i]));
  }
  BigFloat goal(residual_target);

  auto weights_of = [&](const std::vector<BigFloat>& lam) {
    std::vector<BigFloat> w(m);
    for (int i = 0; i < m; ++i) w[i] = exp(lam[i]);
    return w;
  };
  auto residual_of = [&](const std::vector<BigFloat>& mu) {
    BigFloat r = 0;
    for (int i = 0; i < m; ++i) r = std::max(r, BigFloat(abs(mu[i] - target[i])));
    return r;
  };

  std::vector<BigFloat> weights = weights_of(lambda);
  std::vector<BigFloat> mu = conditional_poisson_marginals(weights, p.k);
  BigFloat residual = residual_of(mu);

  int iter = 0;
  while (residual > goal) {
    if (++iter > max_iterations)
      throw SolveError("conditional Poisson solve did not converge, residual " +
                           residual.str(6),
                       rational_from_float(residual));
    // Jacobian of marginals wrt lambda is the inclusion covariance matrix;
    // it annihilates the all-ones vector, so the last coordinate stays fixed.
    const int d = m - 1;
    std::vector<std::vector<BigFloat>> jac(d, std::vector<BigFloat>(d));
    std::vector<BigFloat> rhs(d);
    for (int i = 0; i < d; ++i) {
      rhs[i] = target[i] - mu[i];
      for (int j = 0; j < d; ++j) {
        BigFloat joint = i == j ? mu[i]
                                : conditional_poisson_joint(weights, p.k, i, j);
        jac[i][j] = joint - mu[i] * mu[j];
      }
    }
    std::vector<BigFloat> step = detail::solve_linear(jac, rhs);
    // halve the step until the residual decreases
    BigFloat scale = 1;
    for (int attempt = 0;; ++attempt) {
      std::vector<BigFloat> trial = lambda;
      for (int i = 0; i < d; ++i) trial[i] += scale * step[i];
      std::vector<BigFloat> w = weights_of(trial);
      std::vector<BigFloat> tmu = conditional_poisson_marginals(w, p.k);
      BigFloat tres = residual_of(tmu);
      if (tres < residual || tres <= goal) {
        lambda = std::move(trial);
        weights = std::move(w);
        mu = std::move(tmu);
        residual = tres;
        break;
      }
      if (attempt >= 60)
        throw SolveError("conditional Poisson line search stalled, residual " +
                             residual.str(6),
                         rational_from_float(residual));
      scale /= 2;
    }
  }

  for (int i = 0; i < m; ++i) out.pi[live[i] - 1] = rational_from_float(weights[i]);
  out.residual = rational_from_float(residual);
  out.iterations = iter;
  return out;
}

// Exact distribution for given working probabilities: mass(T) proportional
// to the product of weights over T. Parties with pi_i = 0 are never selected.
inline KSubsetDistribution conditional_poisson_distribution(
    const std::vector<Rat>& pi, int k) {
  const int n = static_cast<int>(pi.size());
  int positive = 0;
  for (const Rat& w : pi) {
    if (w < 0) throw std::invalid_argument("negative working probability");
    if (w > 0) ++positive;
  }
  if (k > positive)
    throw std::invalid_argument("k exceeds the number of positive working probabilities");
  KSubsetDistribution dist;
  dist.n = n;
  dist.k = k;
  Rat total = 0;
  for (Subset t : enumerate_k_subsets(n, k)) {
    Rat prod = 1;
    for (int i : subset_members(t)) prod *= pi[i - 1];
    if (prod != 0) {
      dist.mass[t] = prod;
      total += prod;
    }
  }
  dist.scale(1 / total);
  return dist;
}

inline KSubsetDistribution conditional_poisson_distribution(
    const WorkingProbabilities& pi, int k) {
  return conditional_poisson_distribution(pi.pi, k);
}

}  // namespace apportion
