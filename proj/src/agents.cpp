#include "ib/agents.hpp"

#include <algorithm>
#include <cmath>

namespace ib {

// ---------------------------------------------------------------------------
// dz distance

double dz_distance(const ZBarSpace& zb, const HypothesisFamily& fam,
                   const Vec& theta, int x, const Vec& ybar) {
  if (x < 0 || x >= fam.num_arms()) throw IndexOutOfGrid("arm index");
  const int dims = zb.dim_Z + zb.dim_W;
  if (zb.L.cols() == 0) return 0.0;
  // Kernel of (z, w) -> F(x, z, ybar) + mu(ybar) w.
  Mat M = Mat::Zero(fam.dim_W, dims);
  for (int w = 0; w < fam.dim_W; ++w)
    M.row(w).head(fam.dim_Z) =
        (fam.F_tensor[(size_t)x][(size_t)w] * ybar).transpose();
  M.rightCols(fam.dim_W).diagonal().setConstant(zb.mu.dot(ybar));
  Mat K = kernel_basis(M);

  Vec te = Vec::Zero(dims);
  te.head(zb.dim_Z) = theta;
  Vec b = zb.L.transpose() * te;               // covector values at theta
  if (K.cols() == 0) return b.cwiseAbs().maxCoeff();
  Mat A = zb.L.transpose() * K;                // covectors restricted to kernel

  // Chebyshev dual of  min_c max_k |b_k - A_k . c|:
  //   max  sum (p_k - m_k) b_k
  //   s.t. sum (p_k + m_k) = 1,  sum (p_k - m_k) A_k = 0,  p, m >= 0.
  const int Kc = (int)b.size();
  const int kd = (int)K.cols();
  LPProblem lp;
  lp.sense = LPSense::Maximize;
  lp.objective = Vec::Zero(2 * Kc);
  lp.eq_A = Mat::Zero(kd + 1, 2 * Kc);
  lp.eq_b = Vec::Zero(kd + 1);
  for (int k = 0; k < Kc; ++k) {
    lp.objective(k) = b(k);
    lp.objective(Kc + k) = -b(k);
    lp.eq_A(0, k) = 1.0;
    lp.eq_A(0, Kc + k) = 1.0;
    for (int j = 0; j < kd; ++j) {
      lp.eq_A(1 + j, k) = A(k, j);
      lp.eq_A(1 + j, Kc + k) = -A(k, j);
    }
  }
  lp.eq_b(0) = 1.0;
  auto sol = lp_solve(lp);
  if (sol.status != LPStatus::Optimal)
    throw NumericalBreakdown("dz distance LP failed");
  return std::max(0.0, sol.value);
}

// ---------------------------------------------------------------------------
// optimistic hypothesis

std::tuple<int, int, double> optimistic_hypothesis(
    const std::vector<int>& C, const HypothesisFamily& fam,
    const RewardSpec& reward, const OutcomeSpace& space) {
  if (C.empty()) throw EmptyConfidenceSet("no surviving hypotheses");
  int best_h = -1, best_arm = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int h : C) {
    auto [arm, value] = optimal_arm(fam, reward, space, fam.H_grid[(size_t)h]);
    if (value > best + 1e-12) {
      best = value;
      best_h = h;
      best_arm = arm;
    }
  }
  return {best_h, best_arm, best};
}

// ---------------------------------------------------------------------------
// IUCB

struct IUCBAgent::Impl {
  double eta_param;
  const Scenario* sc = nullptr;
  std::string cache_name;
  int horizon = 0;
  double eta = 0;

  ZBarSpace zb;
  std::vector<double> values;  // per-hypothesis optimal values
  std::vector<int> xstar;      // per-hypothesis optimal arms
  Mat hull_A;
  Vec hull_b;
  Mat hull_AAt_inv;
  bool has_hull = false;

  std::vector<int> C;
  int theta_idx = -1;
  int arm_star = -1;
  int tau = 0;
  Vec sum_y;
  int cycles = 0;
  double rho = 0;
  bool eliminated = false;

  void pick_optimistic() {
    theta_idx = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int h : C) {
      if (values[(size_t)h] > best + 1e-12) {
        best = values[(size_t)h];
        theta_idx = h;
      }
    }
    arm_star = xstar[(size_t)theta_idx];
  }
};

IUCBAgent::IUCBAgent(double eta) : impl_(new Impl) { impl_->eta_param = eta; }
IUCBAgent::~IUCBAgent() = default;

void IUCBAgent::reset(const Scenario& sc, int horizon, std::uint64_t) {
  Impl& s = *impl_;
  if (s.sc != &sc || s.cache_name != sc.meta.name) {
    s.sc = &sc;
    s.cache_name = sc.meta.name;
    s.zb = build_zbar(sc.family, sc.space);
    const int H = sc.family.num_hypotheses();
    s.values.resize((size_t)H);
    s.xstar.resize((size_t)H);
    for (int h = 0; h < H; ++h) {
      auto [arm, value] =
          optimal_arm(sc.family, sc.reward, sc.space, sc.family.H_grid[(size_t)h]);
      s.xstar[(size_t)h] = arm;
      s.values[(size_t)h] = value;
    }
    auto [A, b] = sc.space.body.hull_constraints();
    s.has_hull = A.rows() > 0;
    if (s.has_hull) {
      s.hull_A = A;
      s.hull_b = b;
      s.hull_AAt_inv = (A * A.transpose()).inverse();
    }
  }
  s.horizon = horizon;
  if (s.eta_param > 0) {
    s.eta = s.eta_param;
  } else {
    Certificates cert;
    cert.R = param_R(s.zb, sc.family);
    cert.C = param_C(sc.reward, sc.space);
    if (sc.space.body.kind == ConvexBody::Kind::SimplexOfLabels) {
      s.eta = simplex_recommended_eta(cert, horizon, sc.space.body.labels,
                                      sc.family.dim_W);
    } else {
      double arg = std::max(1.0, cert.C * sc.family.dim_W * horizon);
      s.eta = cert.R * std::pow((double)sc.family.dim_W, 5.0 / 6.0) *
              std::sqrt(std::log(arg));
    }
  }
  s.C.resize((size_t)sc.family.num_hypotheses());
  for (size_t h = 0; h < s.C.size(); ++h) s.C[h] = (int)h;
  s.pick_optimistic();
  s.tau = 0;
  s.sum_y = Vec::Zero(sc.space.dim_Y);
  s.cycles = 0;
  s.rho = 0;
  s.eliminated = false;
}

int IUCBAgent::select_arm() { return impl_->arm_star; }

void IUCBAgent::observe(const Vec& y) {
  Impl& s = *impl_;
  if (!s.sc->space.body.contains(y, 1e-7))
    throw OutcomeOutsideBody("observed outcome outside the body");
  ++s.tau;
  s.sum_y += y;
  Vec ybar = s.sum_y / s.tau;
  if (s.has_hull)
    ybar -= s.hull_A.transpose() * (s.hull_AAt_inv * (s.hull_A * ybar - s.hull_b));

  std::vector<double> dz(s.C.size());
  double rho = 0;
  for (size_t i = 0; i < s.C.size(); ++i) {
    dz[i] = dz_distance(s.zb, s.sc->family, s.sc->family.H_grid[(size_t)s.C[i]],
                        s.arm_star, ybar);
    rho = std::max(rho, dz[i]);
  }
  s.rho = rho;
  const double threshold = 2.0 * (s.sc->family.dim_Z + 1) * s.eta;
  if (s.C.empty() || std::sqrt((double)s.tau) * rho < threshold) return;

  std::vector<int> next;
  const double keep = s.eta / std::sqrt((double)s.tau);
  for (size_t i = 0; i < s.C.size(); ++i)
    if (dz[i] <= keep + 1e-12) next.push_back(s.C[i]);
  ++s.cycles;
  s.C = std::move(next);
  if (s.C.empty()) {
    // Misspecification fallback: keep playing the last optimistic arm.
    s.eliminated = true;
  } else {
    s.pick_optimistic();
  }
  s.tau = 0;
  s.sum_y.setZero();
}

const std::vector<int>& IUCBAgent::confidence_set() const { return impl_->C; }
int IUCBAgent::cycle_count() const { return impl_->cycles; }
int IUCBAgent::tau() const { return impl_->tau; }
double IUCBAgent::eta() const { return impl_->eta; }
double IUCBAgent::last_rho() const { return impl_->rho; }
bool IUCBAgent::hypothesis_eliminated() const { return impl_->eliminated; }
int IUCBAgent::optimistic_index() const { return impl_->theta_idx; }
const ZBarSpace& IUCBAgent::zbar() const { return impl_->zb; }

// ---------------------------------------------------------------------------
// UCB

void UCBAgent::reset(const Scenario& sc, int horizon, std::uint64_t) {
  sc_ = &sc;
  horizon_ = horizon;
  last_arm_ = -1;
  sum_r_.assign((size_t)sc.reward.num_arms(), 0.0);
  count_.assign((size_t)sc.reward.num_arms(), 0);
}

int UCBAgent::select_arm() {
  for (size_t x = 0; x < count_.size(); ++x) {
    if (count_[x] == 0) {
      last_arm_ = (int)x;
      return last_arm_;
    }
  }
  int best = 0;
  double best_idx = -std::numeric_limits<double>::infinity();
  for (size_t x = 0; x < count_.size(); ++x) {
    double idx = sum_r_[x] / count_[x] +
                 2.0 * std::sqrt(std::log((double)horizon_) / count_[x]);
    if (idx > best_idx + 1e-15) {
      best_idx = idx;
      best = (int)x;
    }
  }
  last_arm_ = best;
  return best;
}

void UCBAgent::observe(const Vec& y) {
  double r = sc_->reward.eval(last_arm_, y);
  sum_r_[(size_t)last_arm_] += r;
  count_[(size_t)last_arm_] += 1;
}

// ---------------------------------------------------------------------------
// Confidence Ball

std::vector<int> barycentric_spanner(const Mat& arms) {
  const int d = (int)arms.rows();
  Eigen::ColPivHouseholderQR<Mat> qr(arms);
  qr.setThreshold(1e-10);
  if (qr.rank() < d) throw DegenerateInput("arm set does not span the space");
  std::vector<int> sel(qr.colsPermutation().indices().data(),
                       qr.colsPermutation().indices().data() + d);
  Mat B(d, d);
  auto fill = [&]() {
    for (int i = 0; i < d; ++i) B.col(i) = arms.col(sel[(size_t)i]);
  };
  fill();
  double det = std::abs(B.determinant());
  bool improved = true;
  int guard = 0;
  while (improved && guard++ < 1000) {
    improved = false;
    for (int i = 0; i < d && !improved; ++i) {
      for (int j = 0; j < arms.cols() && !improved; ++j) {
        Mat cand = B;
        cand.col(i) = arms.col(j);
        double cd = std::abs(cand.determinant());
        if (cd > det + 1e-9) {
          sel[(size_t)i] = j;
          B = cand;
          det = cd;
          improved = true;
        }
      }
    }
  }
  std::sort(sel.begin(), sel.end());
  return sel;
}

void ConfidenceBallAgent::reset(const Scenario& sc, int horizon, std::uint64_t) {
  sc_ = &sc;
  horizon_ = horizon;
  round_ = 0;
  last_arm_ = -1;
  const int d = (int)sc.family.arm_embed[0].size();
  Mat arms(d, sc.family.num_arms());
  for (int x = 0; x < sc.family.num_arms(); ++x)
    arms.col(x) = sc.family.arm_embed[(size_t)x];
  spanner_ = barycentric_spanner(arms);
  X_ = Mat::Zero(d, d);
  for (int i : spanner_) X_ += arms.col(i) * arms.col(i).transpose();
  etahat_ = Vec::Zero(d);
}

int ConfidenceBallAgent::select_arm() {
  ++round_;
  const int d = (int)etahat_.size();
  Eigen::LLT<Mat> llt(X_);
  if (llt.info() != Eigen::Success)
    throw SingularX("confidence ball design matrix not positive definite");
  double n = (double)round_;
  double lnn2 = std::log((double)horizon_ * n * n);
  double beta =
      std::max(128.0 * d * std::log(n) * lnn2, std::pow(8.0 / 3.0 * lnn2, 2));
  Vec theta_hat = llt.solve(etahat_);
  int best = 0;
  double best_idx = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < sc_->family.num_arms(); ++x) {
    const Vec& v = sc_->family.arm_embed[(size_t)x];
    double quad = v.dot(llt.solve(v));
    double idx = v.dot(theta_hat) + std::sqrt(std::max(0.0, beta * quad));
    if (idx > best_idx + 1e-15) {
      best_idx = idx;
      best = x;
    }
  }
  last_arm_ = best;
  return best;
}

void ConfidenceBallAgent::observe(const Vec& y) {
  double r = sc_->reward.eval(last_arm_, y);
  const Vec& v = sc_->family.arm_embed[(size_t)last_arm_];
  X_ += v * v.transpose();
  etahat_ += r * v;
}

// ---------------------------------------------------------------------------
// Game UCB

void GameUCBAgent::reset(const Scenario& sc, int horizon, std::uint64_t seed) {
  if (!sc.meta.zerosum)
    throw NoApplicableMethod("Game UCB needs a zero-sum scenario");
  sc_ = &sc;
  horizon_ = horizon;
  last_a_ = -1;
  const auto& zs = *sc.meta.zerosum;
  R_ = Mat::Zero(zs.nb1, zs.nb2);
  T_ = Mat::Zero(zs.nb1, zs.nb2);
  rng_ = Rng(seed);
}

Mat GameUCBAgent::optimistic_matrix() const {
  const auto& zs = *sc_->meta.zerosum;
  double lg = std::log(2.0 * zs.nb1 * zs.nb2 * (double)horizon_ * horizon_);
  Mat P(zs.nb1, zs.nb2);
  for (int a = 0; a < zs.nb1; ++a) {
    for (int b = 0; b < zs.nb2; ++b) {
      double t = T_(a, b);
      double mean = t > 0 ? R_(a, b) / t : 0.0;
      P(a, b) = mean + std::sqrt(2.0 * lg / std::max(t, 1.0));
    }
  }
  return P;
}

int GameUCBAgent::select_arm() {
  const auto& zs = *sc_->meta.zerosum;
  auto [value, x] = game_value(optimistic_matrix());
  double u = rng_.uniform();
  double acc = 0;
  int a = zs.nb1 - 1;
  for (int i = 0; i < zs.nb1; ++i) {
    acc += x(i);
    if (u < acc) {
      a = i;
      break;
    }
  }
  last_a_ = a;
  return zs.pure_arm[(size_t)a];
}

void GameUCBAgent::observe(const Vec& y) {
  const auto& zs = *sc_->meta.zerosum;
  int vtx = -1;
  double mx = 0;
  for (int j = 0; j < y.size(); ++j) {
    if (y(j) > mx) {
      mx = y(j);
      vtx = j;
    }
  }
  if (vtx < 0 || mx < 0.99)
    throw NoApplicableMethod("Game UCB needs sampled vertex outcomes");
  auto [a, b] = zs.vertex_ab[(size_t)vtx];
  R_(a, b) += zs.vertex_payoff[(size_t)vtx];
  T_(a, b) += 1.0;
}

}  // namespace ib
