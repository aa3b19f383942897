#include "biot/linalg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace biot {

SpdFactor::SpdFactor(const SpMat& A) {
  llt_.compute(A);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("SpdFactor: Cholesky factorization failed (matrix not SPD?)");
  }
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

std::pair<Eigen::VectorXd, SolveReport> minres(const LinOp& apply_A, const LinOp& apply_P,
                                               const Eigen::VectorXd& b, double rtol,
                                               std::size_t maxiter) {
  auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index n = b.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  SolveReport rep;

  Eigen::VectorXd r1 = b;
  Eigen::VectorXd y = apply_P(b);
  double beta1sq = b.dot(y);
  if (beta1sq < 0) throw std::runtime_error("minres: preconditioner is not SPD");
  double beta1 = std::sqrt(beta1sq);
  if (beta1 == 0.0) {
    rep.converged = true;
    rep.rel_residual_history = {0.0};
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {x, rep};
  }
  rep.rel_residual_history.push_back(1.0);

  // Paige-Saunders recurrence.
  double oldb = 0.0, beta = beta1;
  double dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r2 = r1;

  for (std::size_t it = 1; it <= maxiter; ++it) {
    Eigen::VectorXd v = y / beta;
    y = apply_A(v);
    if (it >= 2) y -= (beta / oldb) * r1;
    double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = apply_P(r2);
    oldb = beta;
    double betasq = r2.dot(y);
    if (betasq < 0) {
      rep.breakdown = true;
      break;
    }
    beta = std::sqrt(betasq);

    double oldeps = epsln;
    double delta = cs * dbar + sn * alfa;
    double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::max(std::sqrt(gbar * gbar + beta * beta), 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    double phi = cs * phibar;
    phibar = sn * phibar;

    Eigen::VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    rep.iterations = it;
    rep.rel_residual_history.push_back(phibar / beta1);
    if (phibar <= rtol * beta1) {
      rep.converged = true;
      break;
    }
    if (beta == 0.0) {  // Krylov space exhausted
      rep.breakdown = true;
      rep.converged = phibar <= rtol * beta1;
      break;
    }
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {x, rep};
}

std::pair<double, double> lanczos_extremes(const LinOp& apply_T, const LinOp& apply_N,
                                           std::size_t dim, const EigOptions& opt) {
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd q0(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < q0.size(); ++i) q0[i] = dist(rng);

  std::vector<Eigen::VectorXd> Q, NQ;
  Eigen::VectorXd Nq = apply_N(q0);
  double nrm = std::sqrt(q0.dot(Nq));
  Q.push_back(q0 / nrm);
  NQ.push_back(Nq / nrm);

  std::vector<double> alphas, betas;
  double prev_lo = 0, prev_hi = 0;
  bool have_prev = false;
  double lo = 0, hi = 0;
  const int m = std::min<int>(opt.max_iters, static_cast<int>(dim));

  auto ritz_extremes = [&](double& out_lo, double& out_hi) {
    Eigen::Map<const Eigen::VectorXd> d(alphas.data(), static_cast<Eigen::Index>(alphas.size()));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(alphas.size() - 1));
    for (Eigen::Index i = 0; i < sub.size(); ++i) sub[i] = betas[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, sub, Eigen::EigenvaluesOnly);
    out_lo = es.eigenvalues().minCoeff();
    out_hi = es.eigenvalues().maxCoeff();
  };

  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd w = apply_T(Q[static_cast<std::size_t>(j)]);
    double alpha = NQ[static_cast<std::size_t>(j)].dot(w);
    alphas.push_back(alpha);
    w -= alpha * Q[static_cast<std::size_t>(j)];
    if (j > 0) w -= betas.back() * Q[static_cast<std::size_t>(j - 1)];
    for (int pass = 0; pass < 2; ++pass) {  // full reorthogonalization in the N-inner product
      for (std::size_t i = 0; i < Q.size(); ++i) w -= NQ[i].dot(w) * Q[i];
    }
    Eigen::VectorXd Nw = apply_N(w);
    double b2 = w.dot(Nw);
    double betaj = b2 > 0 ? std::sqrt(b2) : 0.0;
    double scale = std::abs(alpha);
    for (double a : alphas) scale = std::max(scale, std::abs(a));
    if (betaj <= 1e-13 * std::max(scale, 1e-300) || j + 1 == m || Q.size() == dim) {
      ritz_extremes(lo, hi);
      break;
    }
    betas.push_back(betaj);
    Q.push_back(w / betaj);
    NQ.push_back(Nw / betaj);

    if ((j + 1) % 10 == 0) {
      ritz_extremes(lo, hi);
      if (have_prev) {
        double dl = std::abs(lo - prev_lo) / std::max(std::abs(lo), 1e-300);
        double dh = std::abs(hi - prev_hi) / std::max(std::abs(hi), 1e-300);
        if (dl < opt.ritz_tol && dh < opt.ritz_tol) break;
      }
      prev_lo = lo;
      prev_hi = hi;
      have_prev = true;
    }
  }
  if (alphas.empty()) throw std::runtime_error("lanczos_extremes: empty recurrence");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::runtime_error("lanczos_extremes: non-finite Ritz values");
  return {lo, hi};
}

namespace {

double max_modulus(std::pair<double, double> signed_extremes) {
  return std::max(std::abs(signed_extremes.first), std::abs(signed_extremes.second));
}

}  // namespace

std::pair<double, double> extreme_eigs(const CsrMatrix& S, const CsrMatrix* N, EigMode mode,
                                       const EigOptions& opt) {
  if (S.rows != S.cols) throw std::invalid_argument("extreme_eigs: square matrix required");
  const std::size_t dim = S.rows;

  if (mode == EigMode::DENSE) {
    if (dim > 20000) throw std::invalid_argument("extreme_eigs: DENSE mode limited to dim <= 20000");
    Eigen::MatrixXd Sd = Eigen::MatrixXd(S.to_eigen());
    Eigen::VectorXd ev;
    if (N) {
      Eigen::MatrixXd Nd = Eigen::MatrixXd(N->to_eigen());
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Sd, Nd, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
      if (es.info() != Eigen::Success) throw std::runtime_error("extreme_eigs: dense eigensolver failed");
      ev = es.eigenvalues();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sd, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) throw std::runtime_error("extreme_eigs: dense eigensolver failed");
      ev = es.eigenvalues();
    }
    double mn = ev.cwiseAbs().minCoeff(), mx = ev.cwiseAbs().maxCoeff();
    return {mn, mx};
  }

  SpMat Se = S.to_eigen();
  std::unique_ptr<SpdFactor> Nfac;
  SpMat Ne;
  if (N) {
    Ne = N->to_eigen();
    Nfac = std::make_unique<SpdFactor>(Ne);
  }
  LinOp apply_N = [&](const Eigen::VectorXd& x) { return N ? Eigen::VectorXd(Ne * x) : x; };

  // Forward pencil: T = N^{-1} S gives max|lambda| from its extreme Ritz values.
  LinOp fwd = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd Sx = Se * x;
    return N ? Nfac->solve(Sx) : Sx;
  };
  double max_mod = max_modulus(lanczos_extremes(fwd, apply_N, dim, opt));

  // Inverted pencil: T = S^{-1} N (self-adjoint in the same inner product)
  // gives min|lambda| = 1 / max|mu| robustly even when min|lambda| is interior.
  Eigen::SparseLU<SpMat> slu;
  slu.compute(Se);
  if (slu.info() != Eigen::Success) throw std::runtime_error("extreme_eigs: sparse LU of S failed");
  LinOp inv = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(slu.solve(N ? Eigen::VectorXd(Ne * x) : x));
  };
  double inv_max = max_modulus(lanczos_extremes(inv, apply_N, dim, opt));
  if (inv_max <= 0) throw std::runtime_error("extreme_eigs: singular pencil");
  return {1.0 / inv_max, max_mod};
}

}  // namespace biot
