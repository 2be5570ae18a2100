#include "ib/numkit.hpp"

#include <cmath>
#include <limits>

namespace ib {

Tolerances& tols() {
  static Tolerances t;
  return t;
}

namespace {

bool all_finite(const Mat& m) { return m.allFinite(); }
bool all_finite(const Vec& v) { return v.allFinite(); }

// Full-tableau simplex core on  min c^T x  s.t.  A x = b, x >= 0, b >= 0.
// `basis` must index an identity submatrix on entry.  Returns false when the
// problem is unbounded.  Dantzig rule with a Bland fallback after an
// iteration budget (guards against cycling on degenerate bases).
struct Tableau {
  Mat A;          // m x n
  Vec b;          // m
  Vec cost;       // n, reduced-cost row (updated by pivots)
  double obj = 0; // negative of current objective
  std::vector<int> basis;

  void price_out(const Vec& c) {
    cost = c;
    obj = 0;
    for (int i = 0; i < (int)basis.size(); ++i) {
      double cb = cost(basis[i]);
      if (cb != 0.0) {
        cost -= cb * A.row(i).transpose();
        obj -= cb * b(i);
      }
    }
  }

  void pivot(int r, int e) {
    double piv = A(r, e);
    A.row(r) /= piv;
    b(r) /= piv;
    for (int i = 0; i < A.rows(); ++i) {
      if (i == r) continue;
      double f = A(i, e);
      if (f != 0.0) {
        A.row(i) -= f * A.row(r);
        b(i) -= f * b(r);
      }
    }
    double f = cost(e);
    if (f != 0.0) {
      cost -= f * A.row(r).transpose();
      obj -= f * b(r);
    }
    basis[r] = e;
  }

  // Returns true on optimal, false on unbounded.
  bool run() {
    const double eps = tols().tol_obj * 0.1;
    const double peps = tols().pivot_eps;
    const int n = (int)A.cols();
    const int m = (int)A.rows();
    const long budget = 50L * (n + m) + 200;
    long iter = 0;
    while (true) {
      ++iter;
      bool bland = iter > budget;
      if (iter > 20 * budget + 20000)
        throw NumericalBreakdown("simplex iteration limit exceeded");
      int e = -1;
      if (bland) {
        for (int j = 0; j < n; ++j)
          if (cost(j) < -eps) { e = j; break; }
      } else {
        double best = -eps;
        for (int j = 0; j < n; ++j)
          if (cost(j) < best) { best = cost(j); e = j; }
      }
      if (e < 0) return true;  // optimal
      int r = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double a = A(i, e);
        if (a > peps) {
          double ratio = b(i) / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (r < 0 || basis[i] < basis[r]))) {
            best_ratio = ratio;
            r = i;
          }
        }
      }
      if (r < 0) return false;  // unbounded
      pivot(r, e);
    }
  }
};

}  // namespace

LPSolution lp_solve(const LPProblem& p) {
  const int nv = p.num_vars();
  if (!all_finite(p.objective)) throw DimensionMismatch("non-finite objective");
  if (p.eq_A.size() > 0 && p.eq_A.cols() != nv)
    throw DimensionMismatch("eq constraint width != num vars");
  if (p.ub_A.size() > 0 && p.ub_A.cols() != nv)
    throw DimensionMismatch("ub constraint width != num vars");
  if (p.eq_A.rows() != p.eq_b.size() || p.ub_A.rows() != p.ub_b.size())
    throw DimensionMismatch("constraint rhs length mismatch");
  if ((p.eq_A.size() > 0 && !all_finite(p.eq_A)) || !all_finite(p.eq_b) ||
      (p.ub_A.size() > 0 && !all_finite(p.ub_A)) || !all_finite(p.ub_b))
    throw DimensionMismatch("non-finite constraint data");
  if (!p.lower.empty() && (int)p.lower.size() != nv)
    throw DimensionMismatch("lower bound list length mismatch");

  const int me = (int)p.eq_A.rows();
  const int mu = (int)p.ub_A.rows();
  const int m = me + mu;

  // Column mapping: bounded var -> one shifted column; free var -> (+,-) pair.
  std::vector<double> shift(nv, 0.0);
  std::vector<bool> is_free(nv, false);
  for (int j = 0; j < nv; ++j) {
    if (!p.lower.empty()) {
      if (p.lower[j].has_value()) shift[j] = *p.lower[j];
      else is_free[j] = true;
    }
  }
  std::vector<int> col_of(nv);  // first standard-form column of var j
  int ns = 0;
  for (int j = 0; j < nv; ++j) {
    col_of[j] = ns;
    ns += is_free[j] ? 2 : 1;
  }
  const int slack0 = ns;
  ns += mu;                    // slacks for ub rows
  const int art0 = ns;
  const int n_total = ns + m;  // artificials for every row

  Mat A = Mat::Zero(m, n_total);
  Vec b = Vec::Zero(m);
  Vec c = Vec::Zero(n_total);
  double c0 = 0.0;  // constant from shifts

  auto fill_row = [&](int row, const Mat& src, int srow, double rhs) {
    double r = rhs;
    for (int j = 0; j < nv; ++j) {
      double a = src(srow, j);
      if (a == 0.0) continue;
      A(row, col_of[j]) = a;
      if (is_free[j]) A(row, col_of[j] + 1) = -a;
      r -= a * shift[j];
    }
    b(row) = r;
  };
  for (int i = 0; i < me; ++i) fill_row(i, p.eq_A, i, p.eq_b(i));
  for (int i = 0; i < mu; ++i) {
    fill_row(me + i, p.ub_A, i, p.ub_b(i));
    A(me + i, slack0 + i) = 1.0;
  }
  double sgn = (p.sense == LPSense::Maximize) ? -1.0 : 1.0;  // solve as min
  for (int j = 0; j < nv; ++j) {
    double cj = sgn * p.objective(j);
    c(col_of[j]) = cj;
    if (is_free[j]) c(col_of[j] + 1) = -cj;
    c0 += sgn * p.objective(j) * shift[j];
  }

  // Normalize rows to b >= 0 and install artificial identity basis.
  Tableau t;
  t.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0) { A.row(i) = -A.row(i); b(i) = -b(i); }
    A(i, art0 + i) = 1.0;
    t.basis[i] = art0 + i;
  }
  t.A = std::move(A);
  t.b = std::move(b);

  // Phase 1.
  Vec c1 = Vec::Zero(n_total);
  for (int i = 0; i < m; ++i) c1(art0 + i) = 1.0;
  t.price_out(c1);
  if (!t.run()) throw NumericalBreakdown("phase-1 unbounded (should not happen)");
  double infeas = -t.obj;
  if (infeas > tols().tol_feas * 1000 + tols().tol_obj) {
    LPSolution s;
    s.status = LPStatus::Infeasible;
    return s;
  }
  // Drive remaining artificials out of the basis where possible; rows where
  // no structural pivot exists are redundant and are removed outright (a
  // basic artificial carrying the huge phase-2 cost would otherwise corrupt
  // the whole reduced-cost row).
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] >= art0) {
      int e = -1;
      for (int j = 0; j < art0; ++j)
        if (std::abs(t.A(i, j)) > tols().pivot_eps * 100) { e = j; break; }
      if (e >= 0) t.pivot(i, e);
      else continue;  // redundant row: drop it
    }
    keep.push_back(i);
  }
  if ((int)keep.size() < m) {
    Mat A2((int)keep.size(), n_total);
    Vec b2((int)keep.size());
    std::vector<int> basis2(keep.size());
    for (int k = 0; k < (int)keep.size(); ++k) {
      A2.row(k) = t.A.row(keep[k]);
      b2(k) = t.b(keep[k]);
      basis2[k] = t.basis[keep[k]];
    }
    t.A = std::move(A2);
    t.b = std::move(b2);
    t.basis = std::move(basis2);
  }
  // Forbid artificials from re-entering.
  Vec c2 = c;
  for (int i = 0; i < m; ++i) c2(art0 + i) = 1e30;

  // Phase 2.
  t.price_out(c2);
  if (!t.run()) {
    LPSolution s;
    s.status = LPStatus::Unbounded;
    return s;
  }

  Vec xs = Vec::Zero(n_total);
  for (int i = 0; i < (int)t.basis.size(); ++i) xs(t.basis[i]) = t.b(i);
  LPSolution s;
  s.status = LPStatus::Optimal;
  s.point = Vec::Zero(nv);
  for (int j = 0; j < nv; ++j) {
    double v = xs(col_of[j]);
    if (is_free[j]) v -= xs(col_of[j] + 1);
    s.point(j) = v + shift[j];
  }
  s.value = p.objective.dot(s.point);
  return s;
}

Mat kernel_basis(const Mat& M) {
  const int n = (int)M.cols();
  if (M.rows() == 0 || M.lpNorm<Eigen::Infinity>() == 0.0)
    return Mat::Identity(n, n);
  Eigen::FullPivLU<Mat> lu(M);
  lu.setThreshold(tols().rank_eps);  // relative to the largest pivot
  Mat K = lu.kernel();
  if (K.cols() == 1 && K.lpNorm<Eigen::Infinity>() == 0.0)
    return Mat::Zero(n, 0);  // Eigen returns a zero column for trivial kernels
  // Orthonormalize.
  Eigen::HouseholderQR<Mat> qr(K);
  Mat Q = qr.householderQ() * Mat::Identity(n, K.cols());
  return Q;
}

Vec least_squares_min_norm(const Mat& A, const Vec& b) {
  if (A.rows() != b.size()) throw DimensionMismatch("A rows != b size");
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  cod.setThreshold(tols().rank_eps);
  Vec y = cod.solve(b);
  double resid = (A * y - b).lpNorm<Eigen::Infinity>();
  if (resid > tols().tol_feas * std::max(1.0, b.lpNorm<Eigen::Infinity>()) * 100)
    throw Inconsistent("least_squares_min_norm: system inconsistent");
  return y;
}

int rank(const Mat& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  if (M.lpNorm<Eigen::Infinity>() == 0.0) return 0;
  Eigen::ColPivHouseholderQR<Mat> qr(M);
  qr.setThreshold(tols().rank_eps);
  return (int)qr.rank();
}

}  // namespace ib
