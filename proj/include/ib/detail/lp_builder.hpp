#pragma once
// Internal helpers for assembling LPs incrementally and for encoding norm
// epigraphs as linear constraints.  Not part of the public surface.

#include <utility>
#include <vector>

#include "ib/geometry.hpp"
#include "ib/numkit.hpp"

namespace ib::detail {

inline Vec gather(const Vec& v, const std::vector<int>& idx) {
  Vec out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

struct LinTerm { int var; double coef; };
using LinExpr = std::vector<LinTerm>;

struct LPBuilder {
  int nv = 0;
  std::vector<std::optional<double>> lower;
  std::vector<std::pair<LinExpr, double>> eqs;  // expr == rhs
  std::vector<std::pair<LinExpr, double>> ubs;  // expr <= rhs

  int add(std::optional<double> lb) {
    lower.push_back(lb);
    return nv++;
  }
  void eq(LinExpr e, double rhs) { eqs.push_back({std::move(e), rhs}); }
  void ub(LinExpr e, double rhs) { ubs.push_back({std::move(e), rhs}); }

  LPProblem build(const LinExpr& obj, LPSense sense) const {
    LPProblem p;
    p.sense = sense;
    p.objective = Vec::Zero(nv);
    for (const auto& t : obj) p.objective(t.var) += t.coef;
    p.eq_A = Mat::Zero(eqs.size(), nv);
    p.eq_b = Vec::Zero(eqs.size());
    for (size_t i = 0; i < eqs.size(); ++i) {
      for (const auto& t : eqs[i].first) p.eq_A(i, t.var) += t.coef;
      p.eq_b(i) = eqs[i].second;
    }
    p.ub_A = Mat::Zero(ubs.size(), nv);
    p.ub_b = Vec::Zero(ubs.size());
    for (size_t i = 0; i < ubs.size(); ++i) {
      for (const auto& t : ubs[i].first) p.ub_A(i, t.var) += t.coef;
      p.ub_b(i) = ubs[i].second;
    }
    p.lower = lower;
    return p;
  }
};

// Affine coordinate expression: linear terms plus a constant.
struct AffExpr {
  LinExpr terms;
  double c0 = 0;
};

// Adds constraints enforcing ||u||_n <= s_var (polyhedral norms only).
inline void add_norm_epigraph(LPBuilder& B, const NormSpec& n,
                              const std::vector<AffExpr>& u, int s_var) {
  switch (n.kind) {
    case NormSpec::Kind::L1: {
      LinExpr sum;
      for (const auto& e : u) {
        int a = B.add(0.0);
        LinExpr pos = e.terms, neg;
        pos.push_back({a, -1.0});
        B.ub(pos, -e.c0);
        for (const auto& t : e.terms) neg.push_back({t.var, -t.coef});
        neg.push_back({a, -1.0});
        B.ub(neg, e.c0);
        sum.push_back({a, 1.0});
      }
      sum.push_back({s_var, -1.0});
      B.ub(sum, 0.0);
      break;
    }
    case NormSpec::Kind::LInf: {
      for (const auto& e : u) {
        LinExpr pos = e.terms, neg;
        pos.push_back({s_var, -1.0});
        B.ub(pos, -e.c0);
        for (const auto& t : e.terms) neg.push_back({t.var, -t.coef});
        neg.push_back({s_var, -1.0});
        B.ub(neg, e.c0);
      }
      break;
    }
    case NormSpec::Kind::PolytopeHull: {
      const Mat& V = n.vertices;
      if ((int)u.size() != V.rows()) throw DimensionMismatch("hull norm dim");
      std::vector<int> cp(V.cols()), cm(V.cols());
      for (int j = 0; j < V.cols(); ++j) {
        cp[j] = B.add(0.0);
        cm[j] = B.add(0.0);
      }
      for (size_t i = 0; i < u.size(); ++i) {
        LinExpr row = u[i].terms;
        for (int j = 0; j < V.cols(); ++j) {
          if (V(i, j) != 0.0) {
            row.push_back({cp[(size_t)j], -V(i, j)});
            row.push_back({cm[(size_t)j], V(i, j)});
          }
        }
        B.eq(row, -u[i].c0);
      }
      LinExpr sum;
      for (int j = 0; j < V.cols(); ++j) {
        sum.push_back({cp[(size_t)j], 1.0});
        sum.push_back({cm[(size_t)j], 1.0});
      }
      sum.push_back({s_var, -1.0});
      B.ub(sum, 0.0);
      break;
    }
    case NormSpec::Kind::MaxOfBlocks: {
      for (const auto& [idx, sub] : n.blocks) {
        std::vector<AffExpr> block;
        for (int i : idx) block.push_back(u[(size_t)i]);
        add_norm_epigraph(B, sub, block, s_var);
      }
      break;
    }
    case NormSpec::Kind::L2:
      throw NoApplicableMethod("L2 norm has no LP epigraph");
  }
}

// Any element of the subdifferential of the norm at u.
inline Vec norm_subgradient(const NormSpec& n, const Vec& u) {
  switch (n.kind) {
    case NormSpec::Kind::L1: {
      Vec g(u.size());
      for (int i = 0; i < u.size(); ++i) g(i) = (u(i) >= 0) ? 1.0 : -1.0;
      return g;
    }
    case NormSpec::Kind::L2: {
      double nu = u.norm();
      return nu > 1e-15 ? Vec(u / nu) : Vec(Vec::Zero(u.size()));
    }
    case NormSpec::Kind::LInf: {
      int imax = 0;
      u.cwiseAbs().maxCoeff(&imax);
      Vec g = Vec::Zero(u.size());
      g(imax) = (u(imax) >= 0) ? 1.0 : -1.0;
      return g;
    }
    case NormSpec::Kind::MaxOfBlocks: {
      double best = -1;
      const std::pair<std::vector<int>, NormSpec>* argmax = nullptr;
      for (const auto& b : n.blocks) {
        double v = norm_eval(b.second, gather(u, b.first));
        if (v > best) {
          best = v;
          argmax = &b;
        }
      }
      Vec g = Vec::Zero(u.size());
      if (argmax) {
        Vec sub = norm_subgradient(argmax->second, gather(u, argmax->first));
        for (size_t i = 0; i < argmax->first.size(); ++i)
          g(argmax->first[i]) = sub(i);
      }
      return g;
    }
    case NormSpec::Kind::PolytopeHull:
      throw NoApplicableMethod("no subgradient for hull gauges");
  }
  throw NoApplicableMethod("unknown norm");
}

}  // namespace ib::detail
