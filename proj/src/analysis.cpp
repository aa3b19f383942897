#include "biot/analysis.hpp"

#include <fstream>
#include <sstream>

#include "biot/elements.hpp"

namespace biot {

namespace {

struct DensePair {
  Eigen::MatrixXd N;  // Gram matrix of the primal norm, constrained dofs removed
  Eigen::MatrixXd B;  // coupling block, n_cells x kept dofs
};

std::vector<int> keep_indices(std::size_t total, const std::vector<int>& drop) {
  std::vector<char> gone(total, 0);
  for (int d : drop) gone[static_cast<std::size_t>(d)] = 1;
  std::vector<int> keep;
  keep.reserve(total - drop.size());
  for (std::size_t i = 0; i < total; ++i)
    if (!gone[i]) keep.push_back(static_cast<int>(i));
  return keep;
}

// Vector Lagrange H1 pair: N = component-wise stiffness, B = cellwise
// divergence integrals. Used for both the P2 primal pair and the equal-order
// P1 negative control; all boundary nodes are constrained.
DensePair lagrange_pair(const Mesh& mesh, bool quadratic) {
  const std::size_t nv = mesh.n_vertices();
  const std::size_t n_nodes = quadratic ? nv + mesh.n_edges() : nv;
  const std::size_t nd = 2 * n_nodes;
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nd), static_cast<Eigen::Index>(nd));
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(mesh.n_cells()),
                                            static_cast<Eigen::Index>(nd));
  const QuadratureRule rule = quadrature_rule(2);
  const int nb = quadratic ? 6 : 3;
  for (std::size_t t = 0; t < mesh.n_cells(); ++t) {
    CellGeometry geom;
    for (int k = 0; k < 3; ++k) geom.v[k] = mesh.vertices[static_cast<std::size_t>(mesh.cells[t][k])];
    const double detJ = 2.0 * geom.area();
    std::array<int, 6> nodes{};
    for (int k = 0; k < 3; ++k) nodes[static_cast<std::size_t>(k)] = mesh.cells[t][k];
    if (quadratic)
      for (int k = 0; k < 3; ++k)
        nodes[static_cast<std::size_t>(3 + k)] = static_cast<int>(nv) + mesh.cell_edges[t][k];
    for (const auto& qp : rule.points) {
      std::array<double, 6> vals{};
      std::array<Eigen::Vector2d, 6> grads{};
      if (quadratic) {
        eval_p2_scalar(qp.bary, geom, vals, grads);
      } else {
        Eigen::Matrix2d J;
        J.col(0) = geom.v[1] - geom.v[0];
        J.col(1) = geom.v[2] - geom.v[0];
        const Eigen::Matrix2d Jit = J.inverse().transpose();
        const Eigen::Vector2d ref_g[3] = {{-1, -1}, {1, 0}, {0, 1}};
        for (int a = 0; a < 3; ++a) grads[static_cast<std::size_t>(a)] = Jit * ref_g[a];
      }
      const double w = qp.weight * detJ;
      for (int a = 0; a < nb; ++a) {
        const auto& ga = grads[static_cast<std::size_t>(a)];
        for (int b = 0; b < nb; ++b) {
          const double v = w * ga.dot(grads[static_cast<std::size_t>(b)]);
          for (int c = 0; c < 2; ++c)
            N(2 * nodes[static_cast<std::size_t>(a)] + c, 2 * nodes[static_cast<std::size_t>(b)] + c) += v;
        }
        for (int c = 0; c < 2; ++c) B(static_cast<Eigen::Index>(t), 2 * nodes[static_cast<std::size_t>(a)] + c) += w * ga[c];
      }
    }
  }
  std::vector<int> drop;
  std::vector<char> bvert(nv, 0);
  for (const auto& [e, tag] : mesh.facet_tags) {
    (void)tag;
    bvert[static_cast<std::size_t>(mesh.edges[static_cast<std::size_t>(e)][0])] = 1;
    bvert[static_cast<std::size_t>(mesh.edges[static_cast<std::size_t>(e)][1])] = 1;
    if (quadratic)
      for (int c = 0; c < 2; ++c) drop.push_back(2 * (static_cast<int>(nv) + e) + c);
  }
  for (std::size_t vtx = 0; vtx < nv; ++vtx)
    if (bvert[vtx])
      for (int c = 0; c < 2; ++c) drop.push_back(2 * static_cast<int>(vtx) + c);
  const std::vector<int> keep = keep_indices(nd, drop);
  DensePair out;
  out.N = N(keep, keep);
  out.B = B(Eigen::all, keep);
  return out;
}

DensePair flux_pair(const Mesh& mesh) {
  MaterialParams unit;
  unit.E = 1.0;
  unit.nu = 0.0;
  const AssembledSystem sys = assemble_three_field(mesh, unit, /*apply_bc=*/false);
  Eigen::MatrixXd Mv = Eigen::MatrixXd(sys.op.Mv.to_eigen());
  Eigen::MatrixXd Bv = Eigen::MatrixXd(sys.op.Bv.to_eigen());
  Eigen::VectorXd inv_area = sys.op.Mp.diagonal_vector().cwiseInverse();
  Eigen::MatrixXd N = Mv + Bv.transpose() * inv_area.asDiagonal() * Bv;
  std::vector<int> drop;
  for (const auto& [e, tag] : mesh.facet_tags) {
    (void)tag;
    drop.push_back(e);
  }
  const std::vector<int> keep = keep_indices(mesh.n_edges(), drop);
  DensePair out;
  out.N = N(keep, keep);
  out.B = Bv(Eigen::all, keep);
  return out;
}

}  // namespace

InfSupEstimate estimate_infsup(InfSupPair pair, const Mesh& mesh, const MaterialParams& params) {
  (void)params;  // the probing norms are parameter-free by design
  if (mesh.n > 8) throw std::invalid_argument("estimate_infsup: needs a desk-scale mesh (n <= 8)");
  DensePair dp;
  switch (pair) {
    case InfSupPair::UP: dp = lagrange_pair(mesh, /*quadratic=*/true); break;
    case InfSupPair::VP: dp = flux_pair(mesh); break;
    case InfSupPair::P1P0_CONTROL: dp = lagrange_pair(mesh, /*quadratic=*/false); break;
  }
  Eigen::VectorXd areas(static_cast<Eigen::Index>(mesh.n_cells()));
  for (std::size_t t = 0; t < mesh.n_cells(); ++t) areas[static_cast<Eigen::Index>(t)] = mesh.cell_area(static_cast<int>(t));
  Eigen::MatrixXd G = dp.B * dp.N.ldlt().solve(dp.B.transpose());
  Eigen::MatrixXd Mp = areas.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Mp);
  if (es.info() != Eigen::Success) throw std::runtime_error("estimate_infsup: eigensolver failure");
  const Eigen::VectorXd sig = es.eigenvalues();
  const double thresh = 1e-10 * sig[sig.size() - 1];
  double smallest = -1.0;
  for (Eigen::Index i = 0; i < sig.size(); ++i) {
    if (sig[i] > thresh) {
      smallest = sig[i];
      break;
    }
  }
  if (smallest <= 0) throw std::runtime_error("estimate_infsup: coupling block is numerically zero");
  InfSupEstimate out;
  out.pair = pair;
  out.h = 8.0 / mesh.n;
  out.gamma_h = std::sqrt(smallest);
  return out;
}

double condition_number(const BlockOperator& op, const Preconditioner* prec, EigMode mode,
                        const EigOptions& opt) {
  const CsrMatrix S = op.monolithic();
  double lo = 0.0, hi = 0.0;
  if (prec != nullptr && prec->kind != PrecKind::NONE) {
    const CsrMatrix N = prec->gram_matrix();
    std::tie(lo, hi) = extreme_eigs(S, &N, mode, opt);
  } else {
    std::tie(lo, hi) = extreme_eigs(S, nullptr, mode, opt);
  }
  if (lo <= 0) throw std::runtime_error("condition_number: singular operator");
  return hi / lo;
}

std::vector<MaterialEntry> materials_table() {
  return {
      {"Ruhr sandstone", 2.3836},    {"Tennessee marble", 12.1667}, {"Charcoal granite", 6.7635},
      {"Berea sandstone", 2.3192},   {"Westerly granite", 2.5972},  {"Weber sandstone", 2.9235},
      {"Ohio sandstone", 3.5965},    {"Pecos sandstone", 2.5322},   {"Boise sandstone", 2.4860},
  };
}

std::vector<MaterialEntry> load_materials_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_materials_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_materials_csv: empty file");
  std::vector<MaterialEntry> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw std::runtime_error("load_materials_csv: bad row: " + line);
    MaterialEntry e;
    e.name = line.substr(0, comma);
    e.xi_beta = std::stod(line.substr(comma + 1));
    if (!(e.xi_beta > 0)) throw std::runtime_error("load_materials_csv: nonpositive value: " + line);
    out.push_back(std::move(e));
  }
  return out;
}

InfSupPair infsup_pair_from_string(const std::string& s) {
  if (s == "up") return InfSupPair::UP;
  if (s == "vp") return InfSupPair::VP;
  if (s == "p1p0") return InfSupPair::P1P0_CONTROL;
  throw std::invalid_argument("unknown inf-sup pair: " + s);
}

std::string to_string(InfSupPair pair) {
  switch (pair) {
    case InfSupPair::UP: return "up";
    case InfSupPair::VP: return "vp";
    case InfSupPair::P1P0_CONTROL: return "p1p0";
  }
  return "?";
}

}  // namespace biot
