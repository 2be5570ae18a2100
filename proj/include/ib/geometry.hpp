#pragma once
// Norms induced by convex bodies, distances to affine subspaces and between
// convex sets, and the sine of a subspace relative to a convex body.

#include <memory>
#include <utility>
#include <vector>

#include "ib/numkit.hpp"

namespace ib {

// ---------------------------------------------------------------------------
// NormSpec

struct NormSpec {
  enum class Kind { L1, L2, LInf, MaxOfBlocks, PolytopeHull };
  Kind kind = Kind::L2;
  // MaxOfBlocks: (coordinate index set, sub-norm) pairs partitioning 0..d-1.
  std::vector<std::pair<std::vector<int>, NormSpec>> blocks;
  // PolytopeHull: columns are the hull vertices; the unit ball is their
  // absolute convex hull.
  Mat vertices;

  static NormSpec l1() { return {Kind::L1, {}, {}}; }
  static NormSpec l2() { return {Kind::L2, {}, {}}; }
  static NormSpec linf() { return {Kind::LInf, {}, {}}; }
  static NormSpec hull(Mat verts) { return {Kind::PolytopeHull, {}, std::move(verts)}; }
  static NormSpec max_of(std::vector<std::pair<std::vector<int>, NormSpec>> blks) {
    return {Kind::MaxOfBlocks, std::move(blks), {}};
  }
  bool polyhedral() const;  // true when evaluation reduces to an LP
};

double norm_eval(const NormSpec& n, const Vec& v);
// Dual norm: max { <v,y> : ||y||_n <= 1 }.
double dual_norm_eval(const NormSpec& n, const Vec& v);

// ---------------------------------------------------------------------------
// AffineSubspace: solution set of A y = b with cached point/kernel.

class AffineSubspace {
 public:
  AffineSubspace() = default;
  AffineSubspace(Mat A, Vec b);
  // Subspace through `point` with directions spanned by `basis` columns.
  static AffineSubspace from_point_basis(const Vec& point, const Mat& basis);

  bool empty() const { return empty_; }
  int ambient_dim() const { return (int)point_.size(); }
  int dim() const { return (int)kernel_.cols(); }
  const Vec& point() const;
  const Mat& basis() const { return kernel_; }  // orthonormal columns
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }
  bool contains(const Vec& y, double tol) const;
  // Intersection with another affine subspace (stacked systems).
  AffineSubspace intersect(const AffineSubspace& o) const;

 private:
  Mat A_;
  Vec b_;
  Vec point_;
  Mat kernel_;
  bool empty_ = true;
};

// ---------------------------------------------------------------------------
// ConvexBody

struct ConvexBody {
  enum class Kind { Polytope, SimplexOfLabels, Ball, ConeBall, Segment };
  Kind kind = Kind::Polytope;
  Mat verts;          // Polytope: columns; Segment: exactly 2 columns
  int labels = 0;     // SimplexOfLabels: |B|
  // Ball: { y in R^{ball_dim+1} : y[mu_coord]=1, ||y without mu_coord||_2<=1 }
  int ball_dim = 0;
  int mu_coord = 0;
  // ConeBall (ambient R^{D+2}):
  //   { y : y0+y1=1, y0>=0, y1 >= ||(y2..y_{D+1})||_2 }
  // With cone_flat set the same cone is expressed in flattened coordinates
  // t = (y0, y2..y_{D+1}) in R^{D+1}: { t : t0>=0, ||t_1:||_2 <= 1-t0 }.
  // That is the rescaled Euclidean picture used for the cone sine estimate.
  int cone_D = 0;
  double cone_alpha = 0;  // scenario metadata only; the body ignores it
  bool cone_flat = false;

  static ConvexBody polytope(Mat v);
  static ConvexBody simplex(int labels);
  static ConvexBody ball(int ball_dim, int mu_coord = 0);
  static ConvexBody cone_ball(int D, double alpha);
  static ConvexBody cone_ball_flat(int D);
  static ConvexBody segment(const Vec& a, const Vec& b);

  int dim() const;  // ambient dimension
  bool is_polytope_like() const {
    return kind == Kind::Polytope || kind == Kind::SimplexOfLabels ||
           kind == Kind::Segment;
  }
  // Extreme points (columns).  For Ball/ConeBall these are boundary samples
  // at the given grid resolution (default 1024); exact for other kinds.
  Mat ext_points(int resolution = 1024) const;
  bool contains(const Vec& y, double tol) const;
  // Affine hull as {y : A y = b}.
  std::pair<Mat, Vec> hull_constraints() const;
};

// ---------------------------------------------------------------------------
// Operations

// (point attaining the minimum, minimal norm) over S.
std::pair<Vec, double> min_norm_on_affine(const NormSpec& n, const AffineSubspace& S);

double dist_point_to_affine(const NormSpec& n, const Vec& p, const AffineSubspace& S);

// Minimal distance between two polytope-like bodies.
double dist_between_convex(const NormSpec& n, const ConvexBody& P, const ConvexBody& Q);

// Distance from p to the body (closed forms for Ball/ConeBall under L2,
// LPs for polyhedral norms on polytope-like bodies, Frank-Wolfe for L2).
double dist_point_to_body(const NormSpec& n, const Vec& p, const ConvexBody& D);

// Distance from p to  S ∩ D  (the section of the body by the subspace).
double dist_point_to_section(const NormSpec& n, const Vec& p,
                             const AffineSubspace& S, const ConvexBody& D);

double l1_dist_to_simplex(const Vec& y);

// Upper estimate of  inf_{p in B\D} d(p,D)/d(p,B∩D)  by seeded sampling.
double sine_bruteforce(const AffineSubspace& B, const ConvexBody& D,
                       const NormSpec& n, int samples, std::uint64_t seed);

// Sine of the first non-vanishing principal angle between linear subspaces
// spanned by the columns of B and C (Euclidean geometry).
double sine_principal_angles(const Mat& B, const Mat& C);

// LP lower bound: max over y in U∩Δ of min_{i in E} y_i.  U is a linear
// subspace of R^labels given by a spanning matrix (columns).
double sine_simplex_lb(const Mat& U, const std::vector<int>& support, int labels);

// sqrt(1 - rho^2) with rho = min l2-norm over the subspace (ball-plane coords).
double sine_ball(const AffineSubspace& U_in_plane);

double sine_chain(const std::vector<double>& component_sines);
double sine_prob_system(int family_size);

}  // namespace ib
