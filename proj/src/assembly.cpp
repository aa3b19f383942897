#include "biot/assembly.hpp"

#include <algorithm>
#include <set>

#include "biot/elements.hpp"

namespace biot {

namespace {

using Trip = Eigen::Triplet<double>;

CellGeometry cell_geometry(const Mesh& mesh, int t) {
  CellGeometry g;
  for (int k = 0; k < 3; ++k) g.v[k] = mesh.vertices[mesh.cells[t][k]];
  for (int k = 0; k < 3; ++k) g.rt_signs[k] = mesh.cell_edge_signs[t][k];
  return g;
}

// Zero constrained rows/columns; optionally place a unit diagonal there.
SpMat eliminate(const SpMat& A, const std::vector<int>& rows, const std::vector<int>& cols,
                bool unit_diag) {
  std::vector<char> rmask(A.rows(), 0), cmask(A.cols(), 0);
  for (int r : rows) rmask[r] = 1;
  for (int c : cols) cmask[c] = 1;
  std::vector<Trip> trip;
  trip.reserve(static_cast<std::size_t>(A.nonZeros()));
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      if (rmask[it.row()] || cmask[it.col()]) continue;
      trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  if (unit_diag) {
    for (int r : rows) trip.emplace_back(r, r, 1.0);
  }
  SpMat out(A.rows(), A.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

std::vector<int> displacement_constraints(const Mesh& mesh) {
  std::set<int> nodes;
  const int nv = static_cast<int>(mesh.n_vertices());
  for (const auto& [e, tag] : mesh.facet_tags) {
    if (tag != BoundaryTag::CLAMPED) continue;
    nodes.insert(mesh.edges[e][0]);
    nodes.insert(mesh.edges[e][1]);
    nodes.insert(nv + e);
  }
  std::vector<int> dofs;
  for (int nd : nodes) {
    dofs.push_back(2 * nd);
    dofs.push_back(2 * nd + 1);
  }
  return dofs;
}

std::vector<int> flux_constraints(const Mesh& mesh) {
  std::vector<int> dofs;
  for (const auto& [e, tag] : mesh.facet_tags) {
    if (tag == BoundaryTag::CLAMPED || tag == BoundaryTag::GAMMA1) dofs.push_back(e);
  }
  std::sort(dofs.begin(), dofs.end());
  return dofs;
}

void local_elasticity(const CellGeometry& geom, const QuadratureRule& qr, double mu, double lambda,
                      Eigen::Matrix<double, 12, 12>& K, Eigen::Matrix<double, 12, 1>& div_int) {
  K.setZero();
  div_int.setZero();
  const double jac = 2.0 * geom.area();
  for (const auto& qp : qr.points) {
    BasisEval be = eval_basis(ElementKind::VECTOR_P2, qp.bary, geom);
    const double w = qp.weight * jac;
    for (int a = 0; a < 12; ++a) {
      div_int[a] += w * be.divergences[a];
      for (int b = 0; b <= a; ++b) {
        double eps = (be.sym_gradients[a].cwiseProduct(be.sym_gradients[b])).sum();
        double val = w * (2.0 * mu * eps + lambda * be.divergences[a] * be.divergences[b]);
        K(a, b) += val;
        if (b != a) K(b, a) += val;
      }
    }
  }
}

}  // namespace

CsrMatrix BlockOperator::monolithic() const {
  std::vector<Trip> trip;
  auto add_block = [&trip](const CsrMatrix& M, std::size_t roff, std::size_t coff, double scale,
                           bool transpose) {
    for (std::size_t i = 0; i < M.rows; ++i) {
      for (int p = M.offsets[i]; p < M.offsets[i + 1]; ++p) {
        int r = static_cast<int>(i), c = M.indices[p];
        if (transpose) std::swap(r, c);
        trip.emplace_back(static_cast<int>(roff) + r, static_cast<int>(coff) + c, scale * M.values[p]);
      }
    }
  };
  const std::size_t N = dim();
  if (form == Formulation::THREE_FIELD) {
    add_block(Au, 0, 0, 1.0, false);
    add_block(Av, nu, nu, 1.0, false);
    add_block(Bu, nu + nv, 0, 1.0, false);
    add_block(Bu, 0, nu + nv, 1.0, true);
    add_block(Bv, nu + nv, nu, 1.0, false);
    add_block(Bv, nu, nu + nv, 1.0, true);
    add_block(Cp, nu + nv, nu + nv, -1.0, false);
  } else {
    add_block(Au, 0, 0, 1.0, false);
    add_block(Bu, nu, 0, 1.0, false);
    add_block(Bu, 0, nu, 1.0, true);
    add_block(Ap, nu, nu, -1.0, false);
  }
  SpMat S(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  S.setFromTriplets(trip.begin(), trip.end());
  return CsrMatrix::from_eigen(S);
}

Eigen::VectorXd assemble_rhs_traction(const Mesh& mesh, double magnitude) {
  const int nv = static_cast<int>(mesh.n_vertices());
  const std::size_t ndof = 2 * (mesh.n_vertices() + mesh.n_edges());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ndof));
  for (const auto& [e, nrm] : boundary_facets(mesh, BoundaryTag::GAMMA1)) {
    const double len = mesh.edge_length(e);
    const Eigen::Vector2d t = magnitude * nrm;
    // Exact integral of the quadratic edge trace: endpoints len/6, midpoint 2len/3.
    const std::array<std::pair<int, double>, 3> contrib{
        std::pair{mesh.edges[e][0], len / 6.0},
        std::pair{mesh.edges[e][1], len / 6.0},
        std::pair{nv + e, 2.0 * len / 3.0}};
    for (const auto& [node, wgt] : contrib) {
      rhs[2 * node] += wgt * t.x();
      rhs[2 * node + 1] += wgt * t.y();
    }
  }
  return rhs;
}

AssembledSystem assemble_three_field(const Mesh& mesh, const MaterialParams& params, bool apply_bc) {
  params.validate();
  const double mu = params.mu(), lambda = params.lambda();
  const double kappa = params.kappa(), xi = params.xi();

  const int nvert = static_cast<int>(mesh.n_vertices());
  const std::size_t nu = 2 * (mesh.n_vertices() + mesh.n_edges());
  const std::size_t nvd = mesh.n_edges();
  const std::size_t np = mesh.n_cells();

  const QuadratureRule q4 = quadrature_rule(4);
  const QuadratureRule q5 = quadrature_rule(5);

  std::vector<Trip> tAu, tMv, tBu, tBv;
  tAu.reserve(mesh.n_cells() * 144);
  tMv.reserve(mesh.n_cells() * 9);
  tBu.reserve(mesh.n_cells() * 12);
  tBv.reserve(mesh.n_cells() * 3);
  Eigen::VectorXd areas(static_cast<Eigen::Index>(np));

  Eigen::Matrix<double, 12, 12> Kloc;
  Eigen::Matrix<double, 12, 1> divloc;
  for (int t = 0; t < static_cast<int>(mesh.n_cells()); ++t) {
    CellGeometry geom = cell_geometry(mesh, t);
    const double area = geom.area();
    areas[t] = area;
    const double jac = 2.0 * area;

    std::array<int, 6> nodes;
    for (int k = 0; k < 3; ++k) nodes[k] = mesh.cells[t][k];
    for (int k = 0; k < 3; ++k) nodes[3 + k] = nvert + mesh.cell_edges[t][k];

    local_elasticity(geom, q4, mu, lambda, Kloc, divloc);
    for (int a = 0; a < 12; ++a) {
      int ga = 2 * nodes[a / 2] + a % 2;
      tBu.emplace_back(t, ga, divloc[a]);
      for (int b = 0; b < 12; ++b) {
        tAu.emplace_back(ga, 2 * nodes[b / 2] + b % 2, Kloc(a, b));
      }
    }

    Eigen::Matrix3d Mloc = Eigen::Matrix3d::Zero();
    for (const auto& qp : q5.points) {
      BasisEval be = eval_basis(ElementKind::RT_LOWEST, qp.bary, geom);
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          Mloc(a, b) += qp.weight * jac * be.vec_values[a].dot(be.vec_values[b]);
        }
      }
    }
    for (int a = 0; a < 3; ++a) {
      int ea = mesh.cell_edges[t][a];
      // (div phi_a, 1)_T = sign * edge length, exactly.
      tBv.emplace_back(t, ea, mesh.cell_edge_signs[t][a] * geom.edge_length(a));
      for (int b = 0; b < 3; ++b) tMv.emplace_back(ea, mesh.cell_edges[t][b], Mloc(a, b));
    }
  }

  auto build = [](std::size_t r, std::size_t c, std::vector<Trip>& trip) {
    SpMat M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
  };
  SpMat Au = build(nu, nu, tAu);
  SpMat Mv = build(nvd, nvd, tMv);
  SpMat Bu = build(np, nu, tBu);
  SpMat Bv = build(np, nvd, tBv);
  SpMat Av = kappa * Mv;

  AssembledSystem sys;
  sys.dofs.n_u = nu;
  sys.dofs.n_v = nvd;
  sys.dofs.n_p = np;
  sys.dofs.u_constrained = displacement_constraints(mesh);
  sys.dofs.v_constrained = flux_constraints(mesh);

  Eigen::VectorXd load = assemble_rhs_traction(mesh, kFootingTraction);
  if (apply_bc) {
    const auto& cu = sys.dofs.u_constrained;
    const auto& cv = sys.dofs.v_constrained;
    Au = eliminate(Au, cu, cu, true);
    Av = eliminate(Av, cv, cv, true);
    Mv = eliminate(Mv, cv, cv, true);
    Bu = eliminate(Bu, {}, cu, false);
    Bv = eliminate(Bv, {}, cv, false);
    for (int r : cu) load[r] = 0.0;
  }

  BlockOperator& op = sys.op;
  op.form = Formulation::THREE_FIELD;
  op.nu = nu;
  op.nv = nvd;
  op.np = np;
  op.Au = CsrMatrix::from_eigen(Au);
  op.Av = CsrMatrix::from_eigen(Av);
  op.Mv = CsrMatrix::from_eigen(Mv);
  op.Bu = CsrMatrix::from_eigen(Bu);
  op.Bv = CsrMatrix::from_eigen(Bv);
  op.Mp = CsrMatrix::diagonal(areas);
  op.Cp = CsrMatrix::diagonal(xi * areas);

  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.dim()));
  sys.rhs.head(static_cast<Eigen::Index>(nu)) = load;
  return sys;
}

AssembledSystem assemble_two_field(const Mesh& mesh, const MaterialParams& params, bool apply_bc) {
  params.validate();
  const double mu = params.mu(), lambda = params.lambda();
  const double kappa = params.kappa(), xi = params.xi();

  const int nvert = static_cast<int>(mesh.n_vertices());
  const std::size_t nu = 2 * (mesh.n_vertices() + mesh.n_edges());
  const std::size_t np = mesh.n_vertices();

  const QuadratureRule q4 = quadrature_rule(4);

  std::vector<Trip> tAu, tAp, tMp, tBu;
  Eigen::Matrix<double, 12, 12> Kloc;
  Eigen::Matrix<double, 12, 1> divloc;
  for (int t = 0; t < static_cast<int>(mesh.n_cells()); ++t) {
    CellGeometry geom = cell_geometry(mesh, t);
    const double jac = 2.0 * geom.area();

    std::array<int, 6> nodes;
    for (int k = 0; k < 3; ++k) nodes[k] = mesh.cells[t][k];
    for (int k = 0; k < 3; ++k) nodes[3 + k] = nvert + mesh.cell_edges[t][k];

    local_elasticity(geom, q4, mu, lambda, Kloc, divloc);
    for (int a = 0; a < 12; ++a) {
      int ga = 2 * nodes[a / 2] + a % 2;
      for (int b = 0; b < 12; ++b) tAu.emplace_back(ga, 2 * nodes[b / 2] + b % 2, Kloc(a, b));
    }

    for (const auto& qp : q4.points) {
      BasisEval p1 = eval_basis(ElementKind::SCALAR_P1, qp.bary, geom);
      BasisEval p2v = eval_basis(ElementKind::VECTOR_P2, qp.bary, geom);
      const double w = qp.weight * jac;
      for (int i = 0; i < 3; ++i) {
        int gi = mesh.cells[t][i];
        for (int j = 0; j < 3; ++j) {
          int gj = mesh.cells[t][j];
          tAp.emplace_back(gi, gj,
                           w * ((1.0 / kappa) * p1.gradients[i].dot(p1.gradients[j]) +
                                xi * p1.values[i] * p1.values[j]));
          tMp.emplace_back(gi, gj, w * p1.values[i] * p1.values[j]);
        }
        for (int a = 0; a < 12; ++a) {
          tBu.emplace_back(gi, 2 * nodes[a / 2] + a % 2, w * p2v.divergences[a] * p1.values[i]);
        }
      }
    }
  }

  auto build = [](std::size_t r, std::size_t c, std::vector<Trip>& trip) {
    SpMat M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
  };
  SpMat Au = build(nu, nu, tAu);
  SpMat Ap = build(np, np, tAp);
  SpMat Mp = build(np, np, tMp);
  SpMat Bu = build(np, nu, tBu);

  AssembledSystem sys;
  sys.dofs.n_u = nu;
  sys.dofs.n_p = np;
  sys.dofs.u_constrained = displacement_constraints(mesh);
  std::set<int> pfix;
  for (const auto& [e, tag] : mesh.facet_tags) {
    if (tag == BoundaryTag::GAMMA2) {
      pfix.insert(mesh.edges[e][0]);
      pfix.insert(mesh.edges[e][1]);
    }
  }
  sys.dofs.p_constrained.assign(pfix.begin(), pfix.end());

  Eigen::VectorXd load = assemble_rhs_traction(mesh, kFootingTraction);
  if (apply_bc) {
    const auto& cu = sys.dofs.u_constrained;
    const auto& cp = sys.dofs.p_constrained;
    Au = eliminate(Au, cu, cu, true);
    Ap = eliminate(Ap, cp, cp, true);
    Mp = eliminate(Mp, cp, cp, false);
    Bu = eliminate(Bu, cp, cu, false);
    for (int r : cu) load[r] = 0.0;
  }

  BlockOperator& op = sys.op;
  op.form = Formulation::TWO_FIELD;
  op.nu = nu;
  op.nv = 0;
  op.np = np;
  op.Au = CsrMatrix::from_eigen(Au);
  op.Ap = CsrMatrix::from_eigen(Ap);
  op.Mp = CsrMatrix::from_eigen(Mp);
  op.Bu = CsrMatrix::from_eigen(Bu);

  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.dim()));
  sys.rhs.head(static_cast<Eigen::Index>(nu)) = load;
  return sys;
}

}  // namespace biot
