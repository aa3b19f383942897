#pragma once

#include <memory>
#include <string>

#include "biot/assembly.hpp"
#include "biot/linalg.hpp"

namespace biot {

enum class PrecKind { NONE, P_II, P1_III, P2_III, P3_III, PS, UVS };
enum class BetaRule { MAX_MU_LAMBDA, KAPPA, MIN_OF_BOTH, EXPLICIT };

struct PreconditionerSpec {
  PrecKind kind = PrecKind::P1_III;
  BetaRule beta_rule = BetaRule::MIN_OF_BOTH;
  double explicit_beta = 0.0;
};

double select_beta(BetaRule rule, const MaterialParams& params, double explicit_beta = 0.0);

// A built block-diagonal preconditioner: SPD factors of each diagonal block
// plus the block matrices themselves, so both the inverse application (what
// MINRES needs) and the forward Gram product (what eigenvalue estimation
// needs) are available.
struct Preconditioner {
  PrecKind kind = PrecKind::NONE;
  double beta = 0.0;
  bool shifted = false;  // a singular baseline pressure block was stabilized by beta^{-1} Mp
  std::size_t n = 0;

  struct Block {
    std::size_t offset = 0;
    CsrMatrix mat;
    std::shared_ptr<SpdFactor> factor;
  };
  std::vector<Block> blocks;

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;      // block-diagonal inverse
  Eigen::VectorXd apply_mat(const Eigen::VectorXd& x) const;  // block-diagonal forward product
  CsrMatrix gram_matrix() const;
};

Preconditioner build_preconditioner(const PreconditionerSpec& spec, const BlockOperator& op,
                                    const MaterialParams& params);

Preconditioner build_P_II(const BlockOperator& op, const MaterialParams& params);
Preconditioner build_P1_III(const BlockOperator& op, const MaterialParams& params, double beta);
Preconditioner build_P2_III(const BlockOperator& op, const MaterialParams& params, double beta);
Preconditioner build_P3_III(const BlockOperator& op, const MaterialParams& params);
std::pair<Preconditioner, Preconditioner> build_schur_baselines(const BlockOperator& op,
                                                                const MaterialParams& params,
                                                                double beta);

// The divergence-augmented (u,v) block
//   [[Au + beta Bu^T D Bu, beta Bu^T D Bv], [beta Bv^T D Bu, Av + beta Bv^T D Bv]]
// with diagonal weight D = diag(dinv). Shared by the coupled preconditioner
// and the Schur baseline; exposed for tests.
SpMat augmented_coupled_block(const BlockOperator& op, double beta, const Eigen::VectorXd& dinv);

PrecKind prec_kind_from_string(const std::string& s);
std::string to_string(PrecKind kind);
BetaRule beta_rule_from_string(const std::string& s);
std::string to_string(BetaRule rule);

}  // namespace biot
