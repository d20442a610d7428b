#include "zerocap/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

// Primal-dual path-following method on the homogeneous self-dual embedding
//
//   A x - b tau = 0,   A* y + S - C tau = 0,   b.y - <C,x> - kappa = 0,
//   X, S in cone, tau, kappa >= 0,
//
// with Nesterov-Todd scaling and a Mehrotra predictor-corrector step.  A
// solution with tau > 0 yields an optimal pair (X,y,S)/tau; tau -> 0 with
// kappa > 0 yields an infeasibility or unboundedness certificate.

namespace zerocap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cone {
  bool diag = false;
  int n = 0;
  // iterate
  RMatrix X, S;
  RVector xd, sd;
  // NT scaling (lam holds the scaled point, which the SVD makes diagonal)
  RMatrix G, Gi;
  RVector lam;
  RVector wd;  // diagonal case: sqrt(x/s)
  // scaled constraint/objective data for the current iteration
  std::vector<RMatrix> B;
  std::vector<RVector> Bd;
  RMatrix Ctil;
  RVector Ctil_d;
  // scratch for directions
  RMatrix K, dXt, dSt, D;
  RVector Kd, dXtd, dStd, Dd;
};

double sym_dot(const RMatrix& a, const RMatrix& b) { return (a.array() * b.array()).sum(); }

RMatrix symmetrize(const RMatrix& m) { return 0.5 * (m + m.transpose()); }

// Largest step alpha with lam + alpha * d staying positive (semi)definite,
// in the metric where the scaled point lam is diagonal.
double step_to_boundary(const RVector& lam, const RMatrix& d) {
  const int n = static_cast<int>(lam.size());
  RMatrix t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = d(i, j) / std::sqrt(lam(i) * lam(j));
  Eigen::SelfAdjointEigenSolver<RMatrix> es(t, Eigen::EigenvaluesOnly);
  const double mineig = es.eigenvalues()(0);
  return mineig >= 0.0 ? kInf : -1.0 / mineig;
}

double step_to_boundary(const RVector& lam, const RVector& d) {
  double a = kInf;
  for (int i = 0; i < lam.size(); ++i)
    if (d(i) < 0.0) a = std::min(a, -lam(i) / d(i));
  return a;
}

// De-embed a 2d x 2d real symmetric block into the complex Hermitian matrix
// it represents (averaging over the embedding's symmetry).
CMatrix deembed(const RMatrix& y) {
  const int d = static_cast<int>(y.rows()) / 2;
  const RMatrix re = 0.5 * (y.topLeftCorner(d, d) + y.bottomRightCorner(d, d));
  const RMatrix im = 0.5 * (y.topRightCorner(d, d).transpose() - y.topRightCorner(d, d));
  CMatrix out(d, d);
  out.real() = symmetrize(re);
  out.imag() = 0.5 * (im - im.transpose().eval());
  return out;
}

class HsdSolver {
 public:
  HsdSolver(const CompiledSdp& P, const SolveOptions& opts) : P_(P), opts_(opts) {
    m_ = static_cast<int>(P.b.size());
    y_ = RVector::Zero(m_);
    dy_.resize(m_);
    nu_ = 0;
    double cnorm = 0.0;
    for (const auto& rb : P.blocks) {
      Cone c;
      c.diag = rb.diagonal;
      c.n = rb.dim;
      nu_ += rb.dim;
      if (rb.diagonal) {
        cnorm = std::max(cnorm, rb.c_diag.size() ? rb.c_diag.cwiseAbs().maxCoeff() : 0.0);
      } else if (rb.c.size() > 0) {
        cnorm = std::max(cnorm, rb.c.cwiseAbs().maxCoeff());
      }
      cones_.push_back(std::move(c));
    }
    bnorm_ = m_ ? P.b.cwiseAbs().maxCoeff() : 0.0;
    // Cold start scaled by the problem norms.
    xscale_ = std::max(1.0, std::sqrt(bnorm_));
    sscale_ = std::max(1.0, std::sqrt(cnorm));
    for (std::size_t b = 0; b < cones_.size(); ++b) {
      Cone& c = cones_[b];
      if (c.diag) {
        c.xd = RVector::Constant(c.n, xscale_);
        c.sd = RVector::Constant(c.n, sscale_);
      } else {
        c.X = RMatrix::Identity(c.n, c.n) * xscale_;
        c.S = RMatrix::Identity(c.n, c.n) * sscale_;
      }
    }
    tau_ = 1.0;
    kappa_ = xscale_ * sscale_;
  }

  SdpSolution run();

 private:
  // linear operators ---------------------------------------------------------
  RVector apply_A() const {  // A(X)
    RVector out = RVector::Zero(m_);
    for (std::size_t b = 0; b < cones_.size(); ++b) {
      const auto& rb = P_.blocks[b];
      const Cone& c = cones_[b];
      for (std::size_t k = 0; k < rb.rows.size(); ++k)
        out(rb.rows[k]) += c.diag ? rb.diag_coeff[k].dot(c.xd) : sym_dot(rb.coeff[k], c.X);
    }
    return out;
  }

  void apply_At(const RVector& y, std::size_t b, RMatrix& out, RVector& out_d) const {
    const auto& rb = P_.blocks[b];
    if (rb.diagonal) {
      out_d.setZero(rb.dim);
      for (std::size_t k = 0; k < rb.rows.size(); ++k) out_d += y(rb.rows[k]) * rb.diag_coeff[k];
    } else {
      out.setZero(rb.dim, rb.dim);
      for (std::size_t k = 0; k < rb.rows.size(); ++k) out += y(rb.rows[k]) * rb.coeff[k];
    }
  }

  double cx() const {
    double v = 0.0;
    for (std::size_t b = 0; b < cones_.size(); ++b) {
      const auto& rb = P_.blocks[b];
      const Cone& c = cones_[b];
      v += c.diag ? (rb.c_diag.size() ? rb.c_diag.dot(c.xd) : 0.0)
                  : (rb.c.size() ? sym_dot(rb.c, c.X) : 0.0);
    }
    return v;
  }

  double xs() const {
    double v = tau_ * kappa_;
    for (const Cone& c : cones_) v += c.diag ? c.xd.dot(c.sd) : sym_dot(c.X, c.S);
    return v;
  }

  bool update_scaling();
  bool factor_schur();
  // One factored solve plus two rounds of iterative refinement; the Schur
  // matrix gets badly conditioned near convergence and the refinement buys
  // the last digits of the search direction.
  RVector schur_solve(const RVector& rhs) const {
    RVector u = use_ldlt_ ? RVector(schur_ldlt_.solve(rhs)) : RVector(schur_llt_.solve(rhs));
    for (int pass = 0; pass < 2; ++pass) {
      const RVector r = rhs - schur_m_ * u;
      if (r.norm() <= 1e-16 * (1.0 + rhs.norm())) break;
      u += use_ldlt_ ? RVector(schur_ldlt_.solve(r)) : RVector(schur_llt_.solve(r));
    }
    return u;
  }
  void compute_direction(double sigma, double dtau_target, bool corrector);
  double max_step() const;

  SdpSolution extract(SdpStatus status) const;

  const CompiledSdp& P_;
  SolveOptions opts_;
  int m_ = 0;
  int nu_ = 0;
  double bnorm_ = 0.0, xscale_ = 1.0, sscale_ = 1.0;
  std::vector<Cone> cones_;
  RVector y_, dy_;
  double tau_ = 1.0, kappa_ = 1.0;
  double dtau_ = 0.0, dkappa_ = 0.0;

  // per-iteration shared state
  RVector rp_;
  double rg_ = 0.0;
  double mu_ = 0.0;
  RMatrix schur_m_;
  Eigen::LLT<RMatrix> schur_llt_;
  Eigen::LDLT<RMatrix> schur_ldlt_;
  bool use_ldlt_ = false;
  RVector u1_, aphic_;
  double ctil_sq_ = 0.0;

  int iterations_ = 0;
};

bool HsdSolver::update_scaling() {
  for (std::size_t b = 0; b < cones_.size(); ++b) {
    Cone& c = cones_[b];
    if (c.n == 0) continue;
    if (c.diag) {
      c.wd = (c.xd.array() / c.sd.array()).sqrt();
      c.lam = (c.xd.array() * c.sd.array()).sqrt();
      if (!c.lam.allFinite() || c.lam.minCoeff() <= 0.0) return false;
      continue;
    }
    Eigen::LLT<RMatrix> lltx(c.X);
    Eigen::LLT<RMatrix> llts(c.S);
    for (double jitter = 1e-13; (lltx.info() != Eigen::Success || llts.info() != Eigen::Success);
         jitter *= 1e3) {
      if (jitter > 1e-6) return false;
      const double ex = jitter * (1.0 + c.X.trace() / c.n);
      const double es = jitter * (1.0 + c.S.trace() / c.n);
      lltx.compute(c.X + ex * RMatrix::Identity(c.n, c.n));
      llts.compute(c.S + es * RMatrix::Identity(c.n, c.n));
    }
    const RMatrix Lx = lltx.matrixL();
    const RMatrix Ls = llts.matrixL();
    Eigen::JacobiSVD<RMatrix> svd(Ls.transpose() * Lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    c.lam = svd.singularValues();
    if (c.lam.minCoeff() <= 0.0) return false;
    const RVector isq = c.lam.cwiseSqrt().cwiseInverse();
    c.G = Lx * svd.matrixV() * isq.asDiagonal();
    // G^{-1} = sqrt(Sigma) V^T Lx^{-1}
    c.Gi = c.lam.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() *
           Lx.triangularView<Eigen::Lower>().solve(RMatrix::Identity(c.n, c.n));
  }

  // scaled constraint and objective data
  for (std::size_t b = 0; b < cones_.size(); ++b) {
    const auto& rb = P_.blocks[b];
    Cone& c = cones_[b];
    if (c.diag) {
      c.Bd.resize(rb.rows.size());
      for (std::size_t k = 0; k < rb.rows.size(); ++k) c.Bd[k] = c.wd.cwiseProduct(rb.diag_coeff[k]);
      c.Ctil_d = rb.c_diag.size() ? RVector(c.wd.cwiseProduct(rb.c_diag)) : RVector::Zero(c.n);
    } else {
      c.B.resize(rb.rows.size());
      for (std::size_t k = 0; k < rb.rows.size(); ++k)
        c.B[k] = symmetrize(c.G.transpose() * rb.coeff[k] * c.G);
      c.Ctil = rb.c.size() ? symmetrize(c.G.transpose() * rb.c * c.G) : RMatrix::Zero(c.n, c.n);
    }
  }
  return true;
}

bool HsdSolver::factor_schur() {
  RMatrix M = RMatrix::Zero(m_, m_);
  for (std::size_t b = 0; b < cones_.size(); ++b) {
    const auto& rb = P_.blocks[b];
    const Cone& c = cones_[b];
    const std::size_t k = rb.rows.size();
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t bb = a; bb < k; ++bb) {
        const double v = c.diag ? c.Bd[a].dot(c.Bd[bb]) : sym_dot(c.B[a], c.B[bb]);
        M(rb.rows[a], rb.rows[bb]) += v;
        if (rb.rows[a] != rb.rows[bb]) M(rb.rows[bb], rb.rows[a]) += v;
      }
  }

  schur_m_ = M;
  use_ldlt_ = false;
  double ridge = 0.0;
  const double base = 1e-14 * (1.0 + M.trace() / std::max(1, m_));
  for (int attempt = 0; attempt < 4; ++attempt) {
    schur_llt_.compute(M + ridge * RMatrix::Identity(m_, m_));
    if (schur_llt_.info() == Eigen::Success) break;
    ridge = (ridge == 0.0) ? base : ridge * 1e3;
  }
  if (schur_llt_.info() != Eigen::Success) {
    schur_ldlt_.compute(M + ridge * RMatrix::Identity(m_, m_));
    if (schur_ldlt_.info() != Eigen::Success) return false;
    use_ldlt_ = true;
  }

  // u1 = M^{-1}(A Phi(C) + b) and related objective contractions are shared
  // by both predictor and corrector solves.
  aphic_ = RVector::Zero(m_);
  ctil_sq_ = 0.0;
  for (std::size_t b = 0; b < cones_.size(); ++b) {
    const auto& rb = P_.blocks[b];
    const Cone& c = cones_[b];
    for (std::size_t k = 0; k < rb.rows.size(); ++k)
      aphic_(rb.rows[k]) += c.diag ? c.Bd[k].dot(c.Ctil_d) : sym_dot(c.B[k], c.Ctil);
    ctil_sq_ += c.diag ? c.Ctil_d.squaredNorm() : c.Ctil.squaredNorm();
  }
  const RVector rhs1 = aphic_ + P_.b;
  u1_ = schur_solve(rhs1);
  return true;
}

void HsdSolver::compute_direction(double sigma, double dtau_target, bool /*corrector*/) {
  const double eta = 1.0 - sigma;

  // K = Llam^{-1}(D) + eta * G^T Rd G per cone, where Rd = A*y + S - C tau.
  RVector a_of_k = RVector::Zero(m_);
  double c_dot_k = 0.0;
  RMatrix at;
  RVector at_d;
  for (std::size_t b = 0; b < cones_.size(); ++b) {
    const auto& rb = P_.blocks[b];
    Cone& c = cones_[b];
    if (c.n == 0) continue;
    if (c.diag) {
      apply_At(y_, b, at, at_d);
      const RVector rd = at_d + c.sd - tau_ * (rb.c_diag.size() ? rb.c_diag : RVector::Zero(c.n));
      c.Kd = c.Dd.cwiseQuotient(c.lam) + eta * c.wd.cwiseProduct(rd);
      for (std::size_t k = 0; k < rb.rows.size(); ++k) a_of_k(rb.rows[k]) += c.Bd[k].dot(c.Kd);
      c_dot_k += c.Ctil_d.dot(c.Kd);
    } else {
      apply_At(y_, b, at, at_d);
      const RMatrix rd = at + c.S - tau_ * (rb.c.size() ? rb.c : RMatrix::Zero(c.n, c.n));
      RMatrix linv(c.n, c.n);
      for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) linv(i, j) = 2.0 * c.D(i, j) / (c.lam(i) + c.lam(j));
      c.K = linv + eta * symmetrize(c.G.transpose() * rd * c.G);
      for (std::size_t k = 0; k < rb.rows.size(); ++k) a_of_k(rb.rows[k]) += sym_dot(c.B[k], c.K);
      c_dot_k += sym_dot(c.Ctil, c.K);
    }
  }

  const RVector rhs2 = -eta * rp_ - a_of_k;
  const RVector u2 = schur_solve(rhs2);

  const double denom = (P_.b - aphic_).dot(u1_) + ctil_sq_ + kappa_ / tau_;
  const double numer = -eta * rg_ + c_dot_k + dtau_target / tau_ - (P_.b - aphic_).dot(u2);
  dtau_ = numer / denom;
  dy_ = u2 + dtau_ * u1_;
  dkappa_ = (dtau_target - kappa_ * dtau_) / tau_;

  for (std::size_t b = 0; b < cones_.size(); ++b) {
    const auto& rb = P_.blocks[b];
    Cone& c = cones_[b];
    if (c.n == 0) continue;
    if (c.diag) {
      apply_At(dy_, b, at, at_d);
      const RVector cd = rb.c_diag.size() ? rb.c_diag : RVector::Zero(c.n);
      c.dXtd = c.Kd + c.wd.cwiseProduct(at_d - dtau_ * cd);
      c.dStd = c.Dd.cwiseQuotient(c.lam) - c.dXtd;
    } else {
      apply_At(dy_, b, at, at_d);
      const RMatrix cc = rb.c.size() ? rb.c : RMatrix::Zero(c.n, c.n);
      c.dXt = c.K + symmetrize(c.G.transpose() * (at - dtau_ * cc) * c.G);
      RMatrix linv(c.n, c.n);
      for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) linv(i, j) = 2.0 * c.D(i, j) / (c.lam(i) + c.lam(j));
      c.dSt = linv - c.dXt;
    }
  }
}

double HsdSolver::max_step() const {
  double a = kInf;
  for (const Cone& c : cones_) {
    if (c.n == 0) continue;
    if (c.diag) {
      a = std::min(a, step_to_boundary(c.lam, c.dXtd));
      a = std::min(a, step_to_boundary(c.lam, c.dStd));
    } else {
      a = std::min(a, step_to_boundary(c.lam, c.dXt));
      a = std::min(a, step_to_boundary(c.lam, c.dSt));
    }
  }
  if (dtau_ < 0.0) a = std::min(a, -tau_ / dtau_);
  if (dkappa_ < 0.0) a = std::min(a, -kappa_ / dkappa_);
  return a;
}

SdpSolution HsdSolver::extract(SdpStatus status) const {
  SdpSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  const double t = std::max(tau_, 1e-300);
  const double pv = cx() / t;
  const double dv = P_.b.dot(y_) / t;
  sol.primal_value = P_.obj_sign * pv;
  sol.dual_value = P_.obj_sign * dv;

  for (std::size_t b = 0; b < cones_.size(); ++b) {
    const Cone& c = cones_[b];
    if (c.diag) {
      CMatrix x = (c.xd / t).asDiagonal();
      CMatrix s = (c.sd / t).asDiagonal();
      sol.X.push_back(std::move(x));
      sol.S.push_back(std::move(s));
    } else {
      sol.X.push_back(deembed(c.X / t));
      sol.S.push_back(deembed(c.S / t));
    }
  }

  // Scatter multipliers of the pruned system back onto the original rows.
  sol.y.assign(P_.total_rows, 0.0);
  for (int k = 0; k < m_; ++k) sol.y[P_.kept_rows[k]] = y_(k) / t;

  double xnorm = 0.0, snorm = 0.0;
  for (const Cone& c : cones_) {
    xnorm = std::max(xnorm, (c.diag ? c.xd.cwiseAbs().maxCoeff() : c.X.cwiseAbs().maxCoeff()) / t);
    snorm = std::max(snorm, (c.diag ? c.sd.cwiseAbs().maxCoeff() : c.S.cwiseAbs().maxCoeff()) / t);
  }
  const RVector pr = apply_A() / t - P_.b;
  sol.residuals.primal = pr.norm() / (1.0 + P_.b.norm() + xnorm);
  double dn = 0.0, cn = 0.0;
  RMatrix at;
  RVector at_d;
  for (std::size_t b = 0; b < cones_.size(); ++b) {
    const auto& rb = P_.blocks[b];
    const Cone& c = cones_[b];
    apply_At(y_, b, at, at_d);
    if (c.diag) {
      const RVector cd = rb.c_diag.size() ? rb.c_diag : RVector::Zero(c.n);
      dn += ((at_d + c.sd) / t - cd).squaredNorm();
      cn += cd.squaredNorm();
    } else {
      const RMatrix cc = rb.c.size() ? rb.c : RMatrix::Zero(c.n, c.n);
      dn += ((at + c.S) / t - cc).squaredNorm();
      cn += cc.squaredNorm();
    }
  }
  const double ynorm = m_ ? y_.cwiseAbs().maxCoeff() / t : 0.0;
  sol.residuals.dual = std::sqrt(dn) / (1.0 + std::sqrt(cn) + std::max(ynorm, snorm));
  sol.residuals.gap = std::abs(pv - dv) / (1.0 + std::abs(pv));
  return sol;
}

SdpSolution HsdSolver::run() {
  if (m_ == 0) {
    // No equalities: the zero matrix is optimal for min <C,X> with C >= 0;
    // our formulations never produce this, so treat it as degenerate input.
    throw solver_error("solve: problem has no equality constraints");
  }

  SdpSolution best;
  double best_score = kInf;

  for (iterations_ = 0; iterations_ < opts_.max_iter; ++iterations_) {
    // residuals
    rp_ = apply_A() - P_.b * tau_;
    rg_ = P_.b.dot(y_) - cx() - kappa_;
    mu_ = xs() / (nu_ + 1);

    const SdpSolution cand = extract(SdpStatus::max_iter);
    const double pres = cand.residuals.primal;
    const double dres = cand.residuals.dual;
    const double grel = cand.residuals.gap;
    if (opts_.trace) opts_.trace(iterations_, cx() / tau_, P_.b.dot(y_) / tau_, rg_ / tau_);

    const double score = std::max({pres, dres, grel});
    if (score < best_score) {
      best = cand;
      best_score = score;
    }

    if (pres <= opts_.feas_tol && dres <= opts_.feas_tol && grel <= opts_.gap_tol) {
      SdpSolution sol = cand;
      sol.status = SdpStatus::optimal;
      return sol;
    }

    // Certificate checks (tau -> 0 branch of the embedding).
    const double by = P_.b.dot(y_);
    if (by > 0.0 && tau_ <= 1e-6 * std::max(1.0, kappa_)) {
      double rn = 0.0, yn = y_.norm() / by;
      RMatrix at;
      RVector at_d;
      for (std::size_t b = 0; b < cones_.size(); ++b) {
        apply_At(y_, b, at, at_d);
        rn += cones_[b].diag ? (at_d + cones_[b].sd).squaredNorm() : (at + cones_[b].S).squaredNorm();
      }
      if (std::sqrt(rn) / by <= opts_.feas_tol * (1.0 + yn)) return extract(SdpStatus::infeasible);
    }
    const double mcx = -cx();
    if (mcx > 0.0 && tau_ <= 1e-6 * std::max(1.0, kappa_)) {
      const RVector ax = apply_A();
      double xn = 0.0;
      for (const Cone& c : cones_) xn += c.diag ? c.xd.squaredNorm() : c.X.squaredNorm();
      if (ax.norm() / mcx <= opts_.feas_tol * (1.0 + std::sqrt(xn) / mcx))
        return extract(SdpStatus::unbounded);
    }

    if (mu_ < 1e-18) {
      best.status = SdpStatus::numerical;
      return best;
    }

    if (!update_scaling() || !factor_schur()) {
      best.status = SdpStatus::numerical;
      return best;
    }

    // predictor
    for (Cone& c : cones_) {
      if (c.n == 0) continue;
      if (c.diag) {
        c.Dd = -c.lam.cwiseProduct(c.lam);
      } else {
        c.D = RMatrix::Zero(c.n, c.n);
        c.D.diagonal() = -c.lam.cwiseProduct(c.lam);
      }
    }
    compute_direction(0.0, -tau_ * kappa_, false);
    const double a_aff = std::min(1.0, max_step());

    double gap_aff = (tau_ + a_aff * dtau_) * (kappa_ + a_aff * dkappa_);
    for (const Cone& c : cones_) {
      if (c.n == 0) continue;
      if (c.diag) {
        gap_aff += (c.lam + a_aff * c.dXtd).dot(c.lam + a_aff * c.dStd);
      } else {
        RMatrix lx = a_aff * c.dXt;
        lx.diagonal() += c.lam;
        RMatrix ls = a_aff * c.dSt;
        ls.diagonal() += c.lam;
        gap_aff += sym_dot(lx, ls);
      }
    }
    const double mu_aff = gap_aff / (nu_ + 1);
    double sigma = std::pow(std::max(0.0, mu_aff / mu_), 3.0);
    sigma = std::clamp(sigma, 1e-8, 1.0 - 1e-8);

    // corrector
    for (Cone& c : cones_) {
      if (c.n == 0) continue;
      if (c.diag) {
        c.Dd = RVector::Constant(c.n, sigma * mu_) - c.lam.cwiseProduct(c.lam) -
               c.dXtd.cwiseProduct(c.dStd);
      } else {
        c.D = -symmetrize(c.dXt * c.dSt);
        c.D.diagonal() += RVector::Constant(c.n, sigma * mu_) - c.lam.cwiseProduct(c.lam);
      }
    }
    compute_direction(sigma, sigma * mu_ - tau_ * kappa_ - dtau_ * dkappa_, true);
    const double alpha = std::min(1.0, 0.98 * max_step());
    if (!(alpha > 1e-10)) {
      best.status = SdpStatus::numerical;
      return best;
    }

    // update (directions are held in the scaled space)
    for (Cone& c : cones_) {
      if (c.n == 0) continue;
      if (c.diag) {
        c.xd += alpha * c.wd.cwiseProduct(c.dXtd);
        c.sd += alpha * c.dStd.cwiseQuotient(c.wd);
      } else {
        c.X = symmetrize(c.X + alpha * c.G * c.dXt * c.G.transpose());
        c.S = symmetrize(c.S + alpha * c.Gi.transpose() * c.dSt * c.Gi);
      }
    }
    y_ += alpha * dy_;
    tau_ += alpha * dtau_;
    kappa_ += alpha * dkappa_;
  }

  best.status = SdpStatus::max_iter;
  return best;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolveOptions& opts) {
  const CompiledSdp compiled = compile(problem);
  HsdSolver solver(compiled, opts);
  SdpSolution sol = solver.run();

  // The compiled system dropped linearly dependent rows; make sure the
  // returned point honors the full original list (an inconsistent redundant
  // row would otherwise go unnoticed).
  if (sol.status == SdpStatus::optimal) {
    double worst = 0.0;
    double xmax = 0.0;
    for (const auto& x : sol.X)
      if (x.size() > 0) xmax = std::max(xmax, x.cwiseAbs().maxCoeff());
    for (const auto& eq : problem.equalities()) {
      double v = -eq.rhs;
      for (const auto& [b, coeff] : eq.terms) v += hs_dot(coeff, sol.X[b]);
      worst = std::max(worst, std::abs(v));
    }
    const double scale = 1.0 + compiled.b.cwiseAbs().maxCoeff() + xmax;
    if (worst > std::max(1e-6, 100.0 * opts.feas_tol) * scale) sol.status = SdpStatus::numerical;
  }
  return sol;
}

}  // namespace zerocap
