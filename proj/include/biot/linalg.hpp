#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "biot/csr.hpp"

namespace biot {

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Sparse Cholesky of an SPD matrix (AMD fill-reducing ordering); throws on
// factorization failure, which downstream code treats as "block is not SPD".
class SpdFactor {
 public:
  explicit SpdFactor(const SpMat& A);
  explicit SpdFactor(const CsrMatrix& A) : SpdFactor(A.to_eigen()) {}
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::Index dim() const { return llt_.rows(); }

 private:
  Eigen::SimplicialLLT<SpMat> llt_;
};

struct SolveReport {
  std::size_t iterations = 0;
  bool converged = false;
  bool breakdown = false;  // Lanczos beta hit zero (exhausted Krylov space / exact solution)
  std::vector<double> rel_residual_history;  // preconditioned residual norms / initial
  double wall_time_s = 0.0;
};

// Preconditioned MINRES for symmetric (possibly indefinite) A with SPD
// preconditioner apply_P ~ P^{-1}. Stops when the preconditioned residual
// norm sqrt(<P r, r>) drops below rtol times its initial value. Zero initial
// guess.
std::pair<Eigen::VectorXd, SolveReport> minres(const LinOp& apply_A, const LinOp& apply_P,
                                               const Eigen::VectorXd& b, double rtol = 1e-8,
                                               std::size_t maxiter = 500);

enum class EigMode { DENSE, LANCZOS };

struct EigOptions {
  int max_iters = 250;
  double ritz_tol = 1e-6;  // relative change of extreme Ritz values between checks
  unsigned seed = 7;
};

// Extreme eigenvalue moduli (min|lambda|, max|lambda|) of the generalized
// symmetric pencil S x = lambda N x with N SPD (identity when N == nullptr).
// DENSE solves the full problem; LANCZOS runs a fully reorthogonalized
// generalized Lanczos in the N-inner product for max|lambda| and the same on
// the inverted pencil (via a sparse LU of S) for min|lambda|.
std::pair<double, double> extreme_eigs(const CsrMatrix& S, const CsrMatrix* N, EigMode mode,
                                       const EigOptions& opt = {});

// Signed extreme Ritz values (theta_min, theta_max) of the operator
// T = N^{-1} S, self-adjoint in the N-inner product; building block of
// extreme_eigs and exposed for tests.
std::pair<double, double> lanczos_extremes(const LinOp& apply_T, const LinOp& apply_N,
                                           std::size_t dim, const EigOptions& opt = {});

}  // namespace biot
