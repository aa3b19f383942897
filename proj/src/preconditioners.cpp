#include "biot/preconditioners.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace biot {

double select_beta(BetaRule rule, const MaterialParams& params, double explicit_beta) {
  const double ml = std::max(params.mu(), params.lambda());
  switch (rule) {
    case BetaRule::MAX_MU_LAMBDA: return ml;
    case BetaRule::KAPPA: return params.kappa();
    case BetaRule::MIN_OF_BOTH: return std::min(ml, params.kappa());
    case BetaRule::EXPLICIT:
      if (!(explicit_beta > 0)) throw std::invalid_argument("select_beta: explicit beta must be positive");
      return explicit_beta;
  }
  throw std::invalid_argument("select_beta: unknown rule");
}

Eigen::VectorXd Preconditioner::apply(const Eigen::VectorXd& r) const {
  if (static_cast<std::size_t>(r.size()) != n) throw std::invalid_argument("Preconditioner::apply: size mismatch");
  if (kind == PrecKind::NONE) return r;
  Eigen::VectorXd out(r.size());
  for (const auto& b : blocks) {
    auto seg = r.segment(static_cast<Eigen::Index>(b.offset), b.factor->dim());
    out.segment(static_cast<Eigen::Index>(b.offset), b.factor->dim()) = b.factor->solve(seg);
  }
  return out;
}

Eigen::VectorXd Preconditioner::apply_mat(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != n) throw std::invalid_argument("Preconditioner::apply_mat: size mismatch");
  if (kind == PrecKind::NONE) return x;
  Eigen::VectorXd out(x.size());
  for (const auto& b : blocks) {
    Eigen::VectorXd seg = x.segment(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.mat.rows));
    out.segment(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.mat.rows)) = spmv(b.mat, seg);
  }
  return out;
}

CsrMatrix Preconditioner::gram_matrix() const {
  if (kind == PrecKind::NONE) return CsrMatrix::identity(n);
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.mat.rows; ++i) {
      for (int p = b.mat.offsets[i]; p < b.mat.offsets[i + 1]; ++p) {
        trip.emplace_back(static_cast<int>(b.offset + i), static_cast<int>(b.offset) + b.mat.indices[p],
                          b.mat.values[p]);
      }
    }
  }
  SpMat G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  G.setFromTriplets(trip.begin(), trip.end());
  return CsrMatrix::from_eigen(G);
}

namespace {

Preconditioner::Block make_block(std::size_t offset, const SpMat& M) {
  Preconditioner::Block b;
  b.offset = offset;
  b.mat = CsrMatrix::from_eigen(M);
  b.factor = std::make_shared<SpdFactor>(M);
  return b;
}

void require_three_field(const BlockOperator& op, const char* who) {
  if (op.form != Formulation::THREE_FIELD) {
    throw std::invalid_argument(std::string(who) + ": three-field blocks required");
  }
}

SpMat pressure_mass_over_beta_plus_C(const BlockOperator& op, double beta) {
  return SpMat((1.0 / beta) * op.Mp.to_eigen() + op.Cp.to_eigen());
}

}  // namespace

SpMat augmented_coupled_block(const BlockOperator& op, double beta, const Eigen::VectorXd& dinv) {
  SpMat Bu = op.Bu.to_eigen(), Bv = op.Bv.to_eigen();
  SpMat D(dinv.size(), dinv.size());
  for (Eigen::Index i = 0; i < dinv.size(); ++i) D.insert(i, i) = beta * dinv[i];
  SpMat Kuu = op.Au.to_eigen() + SpMat(Bu.transpose() * D * Bu);
  SpMat Kvv = op.Av.to_eigen() + SpMat(Bv.transpose() * D * Bv);
  SpMat Kuv = Bu.transpose() * D * Bv;

  std::vector<Eigen::Triplet<double>> trip;
  const int nu = static_cast<int>(op.nu);
  auto add = [&trip](const SpMat& M, int roff, int coff, bool transpose) {
    for (int k = 0; k < M.outerSize(); ++k) {
      for (SpMat::InnerIterator it(M, k); it; ++it) {
        int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
        if (transpose) std::swap(r, c);
        trip.emplace_back(roff + r, coff + c, it.value());
      }
    }
  };
  add(Kuu, 0, 0, false);
  add(Kvv, nu, nu, false);
  add(Kuv, 0, nu, false);
  add(Kuv, nu, 0, true);
  SpMat K(static_cast<Eigen::Index>(op.nu + op.nv), static_cast<Eigen::Index>(op.nu + op.nv));
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Preconditioner build_P_II(const BlockOperator& op, const MaterialParams& params) {
  if (op.form != Formulation::TWO_FIELD) throw std::invalid_argument("build_P_II: two-field blocks required");
  Preconditioner P;
  P.kind = PrecKind::P_II;
  P.beta = std::max(params.mu(), params.lambda());
  P.n = op.dim();
  P.blocks.push_back(make_block(0, op.Au.to_eigen()));
  SpMat Q = (1.0 / P.beta) * op.Mp.to_eigen() + op.Ap.to_eigen();
  P.blocks.push_back(make_block(op.nu, Q));
  return P;
}

Preconditioner build_P1_III(const BlockOperator& op, const MaterialParams& params, double beta) {
  require_three_field(op, "build_P1_III");
  if (!(beta > 0)) throw std::invalid_argument("build_P1_III: beta must be positive");
  (void)params;
  Preconditioner P;
  P.kind = PrecKind::P1_III;
  P.beta = beta;
  P.n = op.dim();
  Eigen::VectorXd mp_inv = op.Mp.diagonal_vector().cwiseInverse();
  P.blocks.push_back(make_block(0, augmented_coupled_block(op, beta, mp_inv)));
  P.blocks.push_back(make_block(op.nu + op.nv, pressure_mass_over_beta_plus_C(op, beta)));
  return P;
}

Preconditioner build_P2_III(const BlockOperator& op, const MaterialParams& params, double beta) {
  require_three_field(op, "build_P2_III");
  if (!(beta > 0)) throw std::invalid_argument("build_P2_III: beta must be positive");
  if (params.xi() * beta > 20.0) {
    std::cerr << "warning: xi*beta = " << params.xi() * beta
              << " is large; the uncoupled flux augmentation degrades in this regime\n";
  }
  Preconditioner P;
  P.kind = PrecKind::P2_III;
  P.beta = beta;
  P.n = op.dim();
  Eigen::VectorXd mp_inv = op.Mp.diagonal_vector().cwiseInverse();
  SpMat Bv = op.Bv.to_eigen();
  SpMat D(mp_inv.size(), mp_inv.size());
  for (Eigen::Index i = 0; i < mp_inv.size(); ++i) D.insert(i, i) = beta * mp_inv[i];
  SpMat Kvv = op.Av.to_eigen() + SpMat(Bv.transpose() * D * Bv);
  P.blocks.push_back(make_block(0, op.Au.to_eigen()));
  P.blocks.push_back(make_block(op.nu, Kvv));
  P.blocks.push_back(make_block(op.nu + op.nv, pressure_mass_over_beta_plus_C(op, beta)));
  return P;
}

Preconditioner build_P3_III(const BlockOperator& op, const MaterialParams& params) {
  require_three_field(op, "build_P3_III");
  Preconditioner P;
  P.kind = PrecKind::P3_III;
  P.beta = std::max(params.mu(), params.lambda());
  P.n = op.dim();
  // Row-sum lumped RT mass keeps the pressure block sparse.
  SpMat Mv = op.Mv.to_eigen();
  Eigen::VectorXd lump = Mv * Eigen::VectorXd::Ones(Mv.cols());
  if (lump.minCoeff() <= 0) throw std::runtime_error("build_P3_III: non-positive lumped flux mass");
  SpMat Bv = op.Bv.to_eigen();
  SpMat D(lump.size(), lump.size());
  for (Eigen::Index i = 0; i < lump.size(); ++i) D.insert(i, i) = 1.0 / (params.kappa() * lump[i]);
  SpMat Q = pressure_mass_over_beta_plus_C(op, P.beta) + SpMat(Bv * D * Bv.transpose());
  P.blocks.push_back(make_block(0, op.Au.to_eigen()));
  P.blocks.push_back(make_block(op.nu, op.Av.to_eigen()));
  P.blocks.push_back(make_block(op.nu + op.nv, Q));
  return P;
}

std::pair<Preconditioner, Preconditioner> build_schur_baselines(const BlockOperator& op,
                                                                const MaterialParams& params,
                                                                double beta) {
  require_three_field(op, "build_schur_baselines");
  if (!(beta > 0)) throw std::invalid_argument("build_schur_baselines: beta must be positive");
  (void)params;
  Eigen::VectorXd mp = op.Mp.diagonal_vector();
  Eigen::VectorXd cp = op.Cp.diagonal_vector();

  // Pressure Schur baseline: blockdiag(Au, Av, C + Bv diag(Av)^{-1} Bv^T),
  // sign flipped so the block is SPD; shifted by beta^{-1} Mp if singular.
  Preconditioner ps;
  ps.kind = PrecKind::PS;
  ps.beta = beta;
  ps.n = op.dim();
  SpMat Bv = op.Bv.to_eigen();
  Eigen::VectorXd dv = op.Av.diagonal_vector();
  if (dv.minCoeff() <= 0) throw std::runtime_error("build_schur_baselines: non-positive diag(Av)");
  SpMat Dinv(dv.size(), dv.size());
  for (Eigen::Index i = 0; i < dv.size(); ++i) Dinv.insert(i, i) = 1.0 / dv[i];
  SpMat Sp = op.Cp.to_eigen() + SpMat(Bv * Dinv * Bv.transpose());
  ps.blocks.push_back(make_block(0, op.Au.to_eigen()));
  ps.blocks.push_back(make_block(op.nu, op.Av.to_eigen()));
  try {
    ps.blocks.push_back(make_block(op.nu + op.nv, Sp));
  } catch (const std::runtime_error&) {
    ps.shifted = true;
    Sp = Sp + SpMat((1.0 / beta) * op.Mp.to_eigen());
    ps.blocks.push_back(make_block(op.nu + op.nv, Sp));
  }

  // Displacement-velocity Schur baseline: the coupled block augmented through
  // C^{-1} instead of Mp^{-1}, with C itself as the pressure block. C = Cp is
  // singular whenever the storage term vanishes; then it is shifted.
  Preconditioner uvs;
  uvs.kind = PrecKind::UVS;
  uvs.beta = beta;
  uvs.n = op.dim();
  Eigen::VectorXd c = cp;
  if (c.minCoeff() <= 0) {
    uvs.shifted = true;
    c += mp / beta;
  }
  uvs.blocks.push_back(make_block(0, augmented_coupled_block(op, beta, c.cwiseInverse())));
  SpMat Cm(c.size(), c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) Cm.insert(i, i) = c[i];
  uvs.blocks.push_back(make_block(op.nu + op.nv, Cm));
  return {ps, uvs};
}

Preconditioner build_preconditioner(const PreconditionerSpec& spec, const BlockOperator& op,
                                    const MaterialParams& params) {
  switch (spec.kind) {
    case PrecKind::NONE: {
      Preconditioner P;
      P.kind = PrecKind::NONE;
      P.n = op.dim();
      return P;
    }
    case PrecKind::P_II: return build_P_II(op, params);
    case PrecKind::P1_III:
      return build_P1_III(op, params, select_beta(spec.beta_rule, params, spec.explicit_beta));
    case PrecKind::P2_III:
      return build_P2_III(op, params, select_beta(spec.beta_rule, params, spec.explicit_beta));
    case PrecKind::P3_III: return build_P3_III(op, params);
    case PrecKind::PS:
      return build_schur_baselines(op, params, select_beta(spec.beta_rule, params, spec.explicit_beta)).first;
    case PrecKind::UVS:
      return build_schur_baselines(op, params, select_beta(spec.beta_rule, params, spec.explicit_beta)).second;
  }
  throw std::invalid_argument("build_preconditioner: unknown kind");
}

PrecKind prec_kind_from_string(const std::string& s) {
  if (s == "none") return PrecKind::NONE;
  if (s == "pII" || s == "pii") return PrecKind::P_II;
  if (s == "p1") return PrecKind::P1_III;
  if (s == "p2") return PrecKind::P2_III;
  if (s == "p3") return PrecKind::P3_III;
  if (s == "ps") return PrecKind::PS;
  if (s == "uvs") return PrecKind::UVS;
  throw std::invalid_argument("unknown preconditioner kind: " + s);
}

std::string to_string(PrecKind kind) {
  switch (kind) {
    case PrecKind::NONE: return "none";
    case PrecKind::P_II: return "pII";
    case PrecKind::P1_III: return "p1";
    case PrecKind::P2_III: return "p2";
    case PrecKind::P3_III: return "p3";
    case PrecKind::PS: return "ps";
    case PrecKind::UVS: return "uvs";
  }
  return "?";
}

BetaRule beta_rule_from_string(const std::string& s) {
  if (s == "max_mu_lambda" || s == "max") return BetaRule::MAX_MU_LAMBDA;
  if (s == "kappa") return BetaRule::KAPPA;
  if (s == "min_of_both" || s == "min") return BetaRule::MIN_OF_BOTH;
  if (s == "explicit") return BetaRule::EXPLICIT;
  throw std::invalid_argument("unknown beta rule: " + s);
}

std::string to_string(BetaRule rule) {
  switch (rule) {
    case BetaRule::MAX_MU_LAMBDA: return "max_mu_lambda";
    case BetaRule::KAPPA: return "kappa";
    case BetaRule::MIN_OF_BOTH: return "min_of_both";
    case BetaRule::EXPLICIT: return "explicit";
  }
  return "?";
}

}  // namespace biot
