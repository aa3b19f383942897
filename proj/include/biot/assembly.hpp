#pragma once

#include "biot/csr.hpp"
#include "biot/materials.hpp"
#include "biot/mesh.hpp"

namespace biot {

enum class Formulation { TWO_FIELD, THREE_FIELD };

// Per-field global numbering and the essential-constraint sets.
// Displacement dofs: 2*node + component, where node is a vertex id or
// n_vertices + edge id (P2 midpoint). Flux dofs: edge ids. Pressure dofs:
// cell ids (three-field P0) or vertex ids (two-field P1).
struct DofMap {
  std::size_t n_u = 0, n_v = 0, n_p = 0;
  std::vector<int> u_constrained;  // u = 0 on CLAMPED
  std::vector<int> v_constrained;  // v.n = 0 on CLAMPED and GAMMA1
  std::vector<int> p_constrained;  // p = 0 on GAMMA2 (two-field only)
};

// Assembled blocks with essential constraints already eliminated
// symmetrically (rows/columns zeroed, unit diagonal on the main blocks).
// Three-field layout: [[Au, 0, Bu^T], [0, Av, Bv^T], [Bu, Bv, -Cp]].
// Two-field layout:   [[Au, Bu^T], [Bu, -Ap]].
struct BlockOperator {
  Formulation form = Formulation::THREE_FIELD;
  std::size_t nu = 0, nv = 0, np = 0;
  CsrMatrix Au;
  CsrMatrix Av, Mv;  // three-field; Av = kappa * (RT mass)
  CsrMatrix Bu, Bv;  // divergence couplings, np x nu and np x nv
  CsrMatrix Mp;      // pressure mass
  CsrMatrix Cp;      // xi * Mp (three-field)
  CsrMatrix Ap;      // two-field pressure form (kappa^{-1} grad, grad) + xi mass

  std::size_t dim() const { return nu + nv + np; }
  CsrMatrix monolithic() const;
};

struct AssembledSystem {
  BlockOperator op;
  Eigen::VectorXd rhs;
  DofMap dofs;
};

// apply_bc = false skips constraint elimination (diagnostics only: patch
// tests and raw block inspection).
AssembledSystem assemble_three_field(const Mesh& mesh, const MaterialParams& params, bool apply_bc = true);
AssembledSystem assemble_two_field(const Mesh& mesh, const MaterialParams& params, bool apply_bc = true);

// Surface load t = magnitude * n on the GAMMA1 strip, integrated against the
// displacement test space. Returns a vector over all displacement dofs.
Eigen::VectorXd assemble_rhs_traction(const Mesh& mesh, double magnitude);

inline constexpr double kFootingTraction = -1e4;

}  // namespace biot
