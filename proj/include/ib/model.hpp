#pragma once
// Outcome spaces, hypothesis families, credal sets, lower/upper previsions,
// optimal arms, and the zero-sum game value.

#include <functional>
#include <string>
#include <vector>

#include "ib/geometry.hpp"

namespace ib {

struct OutcomeSpace {
  int dim_Y = 0;
  Vec mu;             // normalizing covector; affine hull of body = mu^-1(1)
  ConvexBody body;
  NormSpec y_norm;    // unit ball = absolute convex hull of the body
  int ext_resolution = 1024;
  Mat ext;            // cached extreme points (columns)
};

// Derives the induced Y-norm (exact for simplices and balls, sampled hull
// otherwise) and caches the extreme points.
OutcomeSpace make_outcome_space(Vec mu, ConvexBody body, int ext_resolution = 1024);

struct RewardSpec {
  // r(x, y) = c[x]·y + c0[x]; affine in the outcome.
  std::vector<Vec> c;
  std::vector<double> c0;
  double eval(int arm, const Vec& y) const { return c[(size_t)arm].dot(y) + c0[(size_t)arm]; }
  int num_arms() const { return (int)c.size(); }
};

struct HypothesisFamily {
  // Arm descriptors (embeddings into R^{D_X}); used by scenario logic.
  std::vector<Vec> arm_embed;
  int dim_Z = 0;
  int dim_W = 0;
  std::vector<Vec> H_grid;
  // Per arm x: tensor T_x as dim_W matrices of size dim_Z x dim_Y with
  // F(x,z,y)_w = z^T T_x[w] y.
  std::vector<std::vector<Mat>> F_tensor;
  int num_arms() const { return (int)F_tensor.size(); }
  int num_hypotheses() const { return (int)H_grid.size(); }
};

// F_{x,theta} : Y -> W as a D_W x D_Y matrix.
Mat f_matrix(const HypothesisFamily& fam, int x, const Vec& theta);
Mat f_matrix(const HypothesisFamily& fam, int x, int theta_idx);

// F(x, z, y) in W.
Vec f_apply(const HypothesisFamily& fam, int x, const Vec& z, const Vec& y);

struct ValidationEntry {
  int arm = 0;
  int hyp = 0;
  bool onto = false;      // rank F_{x,theta} == dim_W
  bool feasible = false;  // ker F_{x,theta} ∩ body nonempty
};
struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool ok = true;
  std::string summary;
};

ValidationReport validate_family(const HypothesisFamily& fam, const OutcomeSpace& space);

// The credal section K_theta(x)+ = {y in body : F_{x,theta} y = 0} as an
// LP-ready block over extreme-point coefficients.
struct CredalSection {
  Mat V;       // extreme points of the body
  Mat F;       // D_W x D_Y constraint matrix
  // Solves min/max of c·y + c0 over the section.
  double optimize(const Vec& c, double c0, bool maximize) const;
  // Same, returning an attaining point of the section.
  std::pair<double, Vec> optimize_point(const Vec& c, double c0, bool maximize) const;
  // A point of the section (throws InfeasibleCredalSet when empty).
  Vec any_point() const;
  bool feasible() const;
};

CredalSection credal_section(const HypothesisFamily& fam, const OutcomeSpace& space,
                             int x, const Vec& theta);

double lower_prevision(const HypothesisFamily& fam, const RewardSpec& reward,
                       const OutcomeSpace& space, int x, const Vec& theta);
double upper_prevision(const HypothesisFamily& fam, const RewardSpec& reward,
                       const OutcomeSpace& space, int x, const Vec& theta);

// Argmax over arms of the lower prevision; ties resolved to the lowest index.
std::pair<int, double> optimal_arm(const HypothesisFamily& fam, const RewardSpec& reward,
                                   const OutcomeSpace& space, const Vec& theta);

// Value and maximin strategy for the row player of payoff matrix P.
std::pair<double, Vec> game_value(const Mat& P);

// Convexified reward over a polytope body: evaluates
//   r~(y) = min { sum_v z_v r_v : vertex distribution z with mean y }.
class ConvexifiedReward {
 public:
  ConvexifiedReward(const ConvexBody& body, Vec vertex_values);
  double operator()(const Vec& y) const;  // throws QueryOutsideBody

 private:
  Mat V_;
  Vec rv_;
};

}  // namespace ib
