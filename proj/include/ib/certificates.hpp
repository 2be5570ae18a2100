#pragma once
// Regret-bound parameter computations: the norm on W, the quotient space
// Zbar = (Z (+) W) / N with its polyhedral dual representation, the scalar
// parameters R, S, C and the gap g, and the three bound evaluators.

#include <cstdint>
#include <string>
#include <vector>

#include "ib/model.hpp"

namespace ib {

// Exact dual representation of the W-norm over the scenario grid:
// ||w||_W = max_j |G.col(j) . w|.  Columns of G are the vertices of the
// polars of the image bodies F_{x,theta}(unit Y-ball), one polar per grid
// pair, pruned to the extreme points of their absolute convex hull.
struct WDual {
  int dim_W = 0;
  Mat G;
  double operator()(const Vec& w) const;
};

WDual build_w_dual(const HypothesisFamily& fam, const OutcomeSpace& space);

// max over the (x, theta) grid of min { ||y||_Y : F_{x,theta} y = w }.
double w_norm(const HypothesisFamily& fam, const OutcomeSpace& space, const Vec& w);

struct ZBarSpace {
  int dim_Z = 0;
  int dim_W = 0;
  // Orthonormal basis of the null subspace N = {(z,w) : F(x,z,y) + mu(y) w = 0
  // for every grid arm x and basis vector y};  0 columns when N is trivial.
  Mat N_basis;
  // Orthonormal basis of the orthogonal complement of N: coordinates of the
  // quotient representation.
  Mat complement;
  WDual wdual;
  Vec mu;  // normalizing covector of the outcome space used at build time
  // Dual covectors of the quotient norm: columns l in R^{dim_Z + dim_W} with
  // ||v|| = max_l |l . v|.  Every column annihilates N_basis by construction.
  Mat L;
};

ZBarSpace build_zbar(const HypothesisFamily& fam, const OutcomeSpace& space);

// Norm of v in Z (+) W (descends to the quotient automatically).
double zbar_norm(const ZBarSpace& zb, const Vec& v);
// Norm of the hypothesis embedding (theta, 0).
double zbar_norm_theta(const ZBarSpace& zb, const Vec& theta);

struct Certificates {
  double R = 0;
  double S = 0;
  double C = 0;
  double g = std::numeric_limits<double>::infinity();
  std::vector<std::string> notes;  // provenance: method used per value
};

double param_R(const ZBarSpace& zb, const HypothesisFamily& fam);
double param_R(const HypothesisFamily& fam, const OutcomeSpace& space);

enum class SineMethod { Auto, SimplexLB, Ball, ConeFlat, Bruteforce, Chain };

struct SineOptions {
  std::vector<double> chain_components;  // for SineMethod::Chain
  std::vector<int> support;              // for SimplexLB; empty = all labels
  int samples = 20000;
  std::uint64_t seed = 1;
};

// min over the (x, theta) grid of the sine of the credal flat relative to the
// body; returns (value, method note).
std::pair<double, std::string> param_S(const HypothesisFamily& fam,
                                       const OutcomeSpace& space,
                                       SineMethod method = SineMethod::Auto,
                                       const SineOptions& opts = {});

// max - min of the reward over arms x extreme points of the body.
double param_C(const RewardSpec& reward, const OutcomeSpace& space);

// Minimal distance between qualifying credal-set pairs; +inf when no ordered
// hypothesis pair satisfies the two gap conditions.
double gap_compute(const HypothesisFamily& fam, const RewardSpec& reward,
                   const OutcomeSpace& space);

struct BoundDims {
  int D_Z = 0;
  int D_W = 0;
};

// Four-term bound; the unspecified universal constant inside the exponential
// is the configurable knob c_exp.
double bound_main(const Certificates& cert, const BoundDims& dims, double N,
                  double eta, double delta, double c_exp = 1.0);

// Simplex-body bound with fully explicit constants; labels = |B|.
double bound_simplex(const Certificates& cert, const BoundDims& dims, double N,
                     double eta, double delta, int labels);

// The eta the simplex bound recommends.
double simplex_recommended_eta(const Certificates& cert, double N, int labels,
                               int D_W);

// Two-term logarithmic-in-N bound for positive gap g.
double bound_gap(const Certificates& cert, const BoundDims& dims, double N,
                 double eta, double g, double c_exp = 1.0);

// Fixed constant gamma = 1 / ln((1 - e^-2)^-1) used by all bound evaluators.
double bound_gamma();

}  // namespace ib
