#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "sparsetrack/types.hpp"

namespace sparsetrack {

/// Projection of t onto the interval [0, u].
inline double clip_box(double t, double u) {
  if (t <= 0.0) return 0.0;
  if (t >= u) return u;
  return t;
}

/// Indices of the r largest entries of a, ties broken towards the lowest
/// index. Returned sorted ascending.
inline std::vector<int> top_r_indices(const Vector& a, int r) {
  const int n = static_cast<int>(a.size());
  if (r < 1 || r > n) {
    detail::fail("cardinality: top-r selection needs 1 <= r <= n, got r = " +
                 detail::str(r) + ", n = " + detail::str(n));
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + r, order.end(),
                    [&a](int i, int j) {
                      if (a[i] != a[j]) return a[i] > a[j];
                      return i < j;
                    });
  order.resize(r);
  std::sort(order.begin(), order.end());
  return order;
}

/// Root of the capped-simplex budget equation together with the achieved
/// residual h(lambda) = sum_i clip(a_i + lambda, u) - 1.
struct MultiplierSolution {
  double lambda = 0.0;
  double residual = 0.0;
};

/// h(lambda) evaluated directly.
inline double capped_sum_residual(const Vector& a, double u, double lambda) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    sum += clip_box(a[i] + lambda, u);
  }
  return sum - 1.0;
}

/// Solves sum_i clip(a_i + lambda, u) = 1 for lambda by sweeping the
/// breakpoints of the piecewise linear increasing map h. Breakpoints are
/// {-a_i} (slope gains one) and {-a_i + u} (slope loses one); h is -1 left
/// of the first breakpoint and m*u - 1 right of the last, so a root exists
/// whenever m*u >= 1. Duplicate breakpoints are merged with their
/// multiplicities. When a flat segment of roots occurs the left endpoint is
/// returned.
inline MultiplierSolution solve_capped_simplex_multiplier(const Vector& a_sub, double u) {
  const Eigen::Index m = a_sub.size();
  if (m < 1) detail::fail("a_sub: must be nonempty");
  if (!(u > 0.0)) detail::fail("cap: must be positive, got " + detail::str(u));
  if (static_cast<double>(m) * u < 1.0) {
    detail::fail("cap: infeasible subproblem, m * cap = " +
                 detail::str(static_cast<double>(m) * u) + " < 1");
  }

  // (breakpoint, slope change past it)
  std::vector<std::pair<double, int>> breaks;
  breaks.reserve(2 * static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    breaks.emplace_back(-a_sub[i], +1);
    breaks.emplace_back(-a_sub[i] + u, -1);
  }
  std::sort(breaks.begin(), breaks.end());

  double lambda = breaks.back().first;  // fallback: all entries at the cap
  double prev_value = breaks.front().first;
  double h = -1.0;
  double slope = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < breaks.size() && !found;) {
    const double value = breaks[i].first;
    h += slope * (value - prev_value);
    if (h >= 0.0) {
      // crossing inside (prev_value, value]
      lambda = (h == 0.0 || slope <= 0.0)
                   ? value
                   : value - h / slope;
      found = true;
      break;
    }
    int change = 0;
    while (i < breaks.size() && breaks[i].first == value) {
      change += breaks[i].second;
      ++i;
    }
    slope += change;
    prev_value = value;
  }
  // !found can only happen through accumulated rounding when m*u is at the
  // feasibility boundary; the root then sits at the last breakpoint.

  // Newton polish with direct evaluation; h is exactly linear within a
  // segment, so this lands on the root to machine precision.
  double h_cur = capped_sum_residual(a_sub, u, lambda);
  double best_lambda = lambda;
  double best_abs = std::abs(h_cur);
  for (int pass = 0; pass < 4 && h_cur != 0.0; ++pass) {
    int interior = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double t = a_sub[i] + lambda;
      if (t > 0.0 && t < u) ++interior;
    }
    if (interior == 0) break;  // flat segment, nothing to correct
    lambda -= h_cur / interior;
    h_cur = capped_sum_residual(a_sub, u, lambda);
    if (std::abs(h_cur) < best_abs) {
      best_abs = std::abs(h_cur);
      best_lambda = lambda;
    } else {
      break;
    }
  }
  return MultiplierSolution{best_lambda, capped_sum_residual(a_sub, u, best_lambda)};
}

/// Euclidean projection onto {sum(x) = 1, 0 <= x_i <= cap, nnz(x) <= r}:
/// keep the r largest entries of a, shift them by the capped-simplex
/// multiplier, clip to [0, cap] and zero the rest. r >= n degrades to the
/// plain capped-simplex projection.
inline Weights project_sparse_capped_simplex(const Vector& a,
                                             const SparseSimplexConstraint& constraint) {
  const int n = static_cast<int>(a.size());
  if (n < 1) detail::fail("a: must be nonempty");
  if (constraint.dimension != n) {
    detail::fail("dimension: constraint dimension " + detail::str(constraint.dimension) +
                 " does not match input length " + detail::str(n));
  }
  if (constraint.cardinality < 1) {
    detail::fail("cardinality: must be >= 1, got " + detail::str(constraint.cardinality));
  }
  if (!(constraint.cap > 0.0) || constraint.cap > 1.0) {
    detail::fail("cap: must lie in (0, 1], got " + detail::str(constraint.cap));
  }
  const int r = std::min(constraint.cardinality, n);
  if (constraint.cap * r < 1.0) {
    detail::fail("cap: infeasible constraint, cap * min(cardinality, n) = " +
                 detail::str(constraint.cap * r) + " < 1");
  }

  const std::vector<int> support = top_r_indices(a, r);
  Vector a_sub(r);
  for (int i = 0; i < r; ++i) a_sub[i] = a[support[i]];
  const MultiplierSolution mult = solve_capped_simplex_multiplier(a_sub, constraint.cap);

  Vector x = Vector::Zero(n);
  for (int i : support) x[i] = clip_box(a[i] + mult.lambda, constraint.cap);
  return Weights{std::move(x)};
}

}  // namespace sparsetrack
