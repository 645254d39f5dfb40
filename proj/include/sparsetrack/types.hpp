#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsetrack {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sample data of an index-tracking instance: per-period asset returns
/// (T x n) and the index returns (length T) over the same periods.
struct TrackingProblem {
  Matrix returns;
  Vector index_returns;

  Eigen::Index period_count() const { return returns.rows(); }
  Eigen::Index asset_count() const { return returns.cols(); }
};

/// Feasible set {x : sum(x) = 1, 0 <= x_i <= cap, nnz(x) <= cardinality}.
struct SparseSimplexConstraint {
  int cardinality = 1;
  double cap = 1.0;
  int dimension = 1;
};

struct SolverParams {
  double l_min = 1e-8;
  double l_max = 1e8;
  double tau = 2.0;
  double c = 1e-4;
  int memory = 3;  // acceptance window covers the last memory+1 objective values
  double step_tol = 1e-6;
  int max_iter = 10000;
  std::uint64_t rng_seed = 0;
};

/// Portfolio weight vector. Off-support entries are exact zeros, so the
/// sparsity count below needs no epsilon.
struct Weights {
  Vector values;

  int nonzero_count() const {
    int count = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (values[i] != 0.0) ++count;
    }
    return count;
  }
};

enum class SolveStatus { converged_step_tol, max_iter_reached };

struct SolveResult {
  Weights weights;
  std::vector<double> objective_trace;  // f(x^0), ..., f(x^K)
  std::vector<int> inner_counts;        // subproblem solves per outer iteration
  SolveStatus status = SolveStatus::max_iter_reached;
  double stationarity_residual = 0.0;
  double final_l = 1.0;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& message) {
  throw std::invalid_argument(message);
}

template <typename T>
std::string str(const T& value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

}  // namespace detail

inline void validate(const SparseSimplexConstraint& constraint) {
  if (constraint.dimension < 1) {
    detail::fail("dimension: must be a positive integer, got " +
                 detail::str(constraint.dimension));
  }
  if (constraint.cardinality < 1 || constraint.cardinality > constraint.dimension) {
    detail::fail("cardinality: must satisfy 1 <= cardinality <= dimension, got " +
                 detail::str(constraint.cardinality) + " with dimension " +
                 detail::str(constraint.dimension));
  }
  if (!(constraint.cap > 0.0) || constraint.cap > 1.0) {
    detail::fail("cap: must lie in (0, 1], got " + detail::str(constraint.cap));
  }
  if (constraint.cap * constraint.cardinality < 1.0) {
    detail::fail("cap: infeasible constraint, cap * cardinality = " +
                 detail::str(constraint.cap * constraint.cardinality) + " < 1");
  }
}

inline void validate(const SolverParams& params) {
  if (!(params.l_min > 0.0) || !(params.l_min < params.l_max)) {
    detail::fail("l_min/l_max: must satisfy 0 < l_min < l_max, got " +
                 detail::str(params.l_min) + ", " + detail::str(params.l_max));
  }
  if (!(params.tau > 1.0)) {
    detail::fail("tau: must be > 1, got " + detail::str(params.tau));
  }
  if (!(params.c > 0.0)) {
    detail::fail("c: must be > 0, got " + detail::str(params.c));
  }
  if (params.memory < 0) {
    detail::fail("memory: must be >= 0, got " + detail::str(params.memory));
  }
  if (!(params.step_tol > 0.0)) {
    detail::fail("step_tol: must be > 0, got " + detail::str(params.step_tol));
  }
  if (params.max_iter < 1) {
    detail::fail("max_iter: must be >= 1, got " + detail::str(params.max_iter));
  }
}

/// Accepts exactly the inputs on which every downstream operation's
/// preconditions hold; throws std::invalid_argument naming the offending
/// field otherwise.
inline void validate_problem(const TrackingProblem& problem,
                             const SparseSimplexConstraint& constraint) {
  const Eigen::Index t = problem.returns.rows();
  const Eigen::Index n = problem.returns.cols();
  if (t < 1 || n < 1) {
    detail::fail("returns: must be a nonempty T x n matrix, got " +
                 detail::str(t) + " x " + detail::str(n));
  }
  if (problem.index_returns.size() != t) {
    detail::fail("index_returns: length " + detail::str(problem.index_returns.size()) +
                 " does not match returns row count " + detail::str(t));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < t; ++i) {
      if (!std::isfinite(problem.returns(i, j))) {
        detail::fail("returns: non-finite entry at row " + detail::str(i) +
                     ", column " + detail::str(j));
      }
    }
  }
  for (Eigen::Index i = 0; i < t; ++i) {
    if (!std::isfinite(problem.index_returns[i])) {
      detail::fail("index_returns: non-finite entry at row " + detail::str(i));
    }
  }
  if (constraint.dimension != static_cast<int>(n)) {
    detail::fail("dimension: constraint dimension " + detail::str(constraint.dimension) +
                 " does not match asset count " + detail::str(n));
  }
  validate(constraint);
}

/// Checks the weight-vector invariants: budget within sum_tol, box bounds
/// within box_tol, sparsity by exact nonzero count.
inline bool is_feasible(const Vector& x, const SparseSimplexConstraint& constraint,
                        double sum_tol = 1e-9, double box_tol = 1e-12) {
  if (x.size() != constraint.dimension) return false;
  int nonzeros = 0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < -box_tol || x[i] > constraint.cap + box_tol) return false;
    if (x[i] != 0.0) ++nonzeros;
    sum += x[i];
  }
  return std::abs(sum - 1.0) <= sum_tol && nonzeros <= constraint.cardinality;
}

}  // namespace sparsetrack
