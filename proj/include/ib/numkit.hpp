#pragma once
// Dense real linear algebra and a small two-phase simplex LP solver.
// Every optimization in the library reduces to these primitives.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ib/common.hpp"

namespace ib {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class LPSense { Minimize, Maximize };
enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPProblem {
  LPSense sense = LPSense::Maximize;
  Vec objective;                    // covector c; optimize c^T x
  Mat eq_A;  Vec eq_b;              // eq_A x = eq_b
  Mat ub_A;  Vec ub_b;              // ub_A x <= ub_b
  // Per-variable lower bound; nullopt = free variable.  Empty vector means
  // all variables bounded below by 0 (the common case).
  std::vector<std::optional<double>> lower;

  int num_vars() const { return static_cast<int>(objective.size()); }
};

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Vec point;
  double value = 0.0;
};

// Solves the LP.  Throws DimensionMismatch on inconsistent sizes and
// NumericalBreakdown if no admissible pivot remains (after Bland fallback).
LPSolution lp_solve(const LPProblem& p);

// Orthonormal basis of ker(M); columns count = cols - rank(M).
// A matrix with no rows (or the zero matrix) yields the identity basis.
Mat kernel_basis(const Mat& M);

// Euclidean-minimum-norm solution of A y = b; throws Inconsistent if the
// residual exceeds tol_feas.
Vec least_squares_min_norm(const Mat& A, const Vec& b);

// Numerical rank with relative threshold rank_eps.
int rank(const Mat& M);

}  // namespace ib
