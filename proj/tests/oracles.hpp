#pragma once
// Independent brute-force reference implementations used only by the tests.

#include <cmath>
#include <limits>
#include <vector>

#include "ib/numkit.hpp"
#include "ib/rng.hpp"

namespace oracle {

using ib::Mat;
using ib::Vec;

// Brute-force LP by vertex enumeration.  Collects every constraint as either
// a fixed equality or a candidate active inequality, solves all square
// systems, keeps feasible points, and optimizes over them.  Suitable for
// num_vars <= 4 and few constraints only.
struct BruteLP {
  bool feasible = false;
  bool bounded = true;   // only meaningful when feasible and a ray check is run
  double value = 0.0;
  Vec point;
};

inline BruteLP brute_lp(const ib::LPProblem& p) {
  const int n = p.num_vars();
  struct Row { Vec a; double b; bool eq; };
  std::vector<Row> rows;
  for (int i = 0; i < p.eq_A.rows(); ++i)
    rows.push_back({p.eq_A.row(i).transpose(), p.eq_b(i), true});
  for (int i = 0; i < p.ub_A.rows(); ++i)
    rows.push_back({p.ub_A.row(i).transpose(), p.ub_b(i), false});
  for (int j = 0; j < n; ++j) {
    bool has_lb = p.lower.empty() || p.lower[j].has_value();
    if (has_lb) {
      double lb = p.lower.empty() ? 0.0 : *p.lower[j];
      Vec a = Vec::Zero(n);
      a(j) = -1.0;
      rows.push_back({a, -lb, false});
    }
  }
  const int m = (int)rows.size();
  BruteLP out;
  double best = std::numeric_limits<double>::infinity();
  double sgn = (p.sense == ib::LPSense::Maximize) ? -1.0 : 1.0;
  std::vector<int> idx;
  // Enumerate all subsets of rows of size n (equalities must be included;
  // when more than n equalities exist, subsets of size n of them).
  std::vector<int> comb(n);
  auto consider = [&](const std::vector<int>& act) {
    Mat A(n, n);
    Vec b(n);
    for (int k = 0; k < n; ++k) {
      A.row(k) = rows[act[k]].a.transpose();
      b(k) = rows[act[k]].b;
    }
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) return;
    Vec x = lu.solve(b);
    for (const auto& r : rows) {
      double v = r.a.dot(x);
      if (r.eq ? std::abs(v - r.b) > 1e-7 : v > r.b + 1e-7) return;
    }
    out.feasible = true;
    double val = sgn * p.objective.dot(x);
    if (val < best) {
      best = val;
      out.point = x;
      out.value = p.objective.dot(x);
    }
  };
  std::vector<int> act(n);
  // all combinations of m choose n
  std::vector<int> c(n);
  for (int k = 0; k < n; ++k) c[k] = k;
  if (m >= n) {
    while (true) {
      consider(c);
      int k = n - 1;
      while (k >= 0 && c[k] == m - n + k) --k;
      if (k < 0) break;
      ++c[k];
      for (int j = k + 1; j < n; ++j) c[j] = c[j - 1] + 1;
    }
  }
  return out;
}

// Dense grid minimization of a function over an affine set  {x0 + K t}
// with t ranging over [-range, range]^dim at the given step.
template <typename F>
double grid_min(F&& f, const Vec& x0, const Mat& K, double range, double step) {
  int dim = (int)K.cols();
  double best = f(x0);
  std::vector<double> t(dim, -range);
  if (dim == 0) return best;
  while (true) {
    Vec x = x0;
    for (int i = 0; i < dim; ++i) x += t[i] * K.col(i);
    best = std::min(best, f(x));
    int k = 0;
    while (k < dim) {
      t[k] += step;
      if (t[k] <= range + 1e-12) break;
      t[k] = -range;
      ++k;
    }
    if (k == dim) break;
  }
  return best;
}

}  // namespace oracle
