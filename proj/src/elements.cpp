#include "biot/elements.hpp"

namespace biot {

namespace {

void push_point(QuadratureRule& r, double l0, double l1, double l2, double w) {
  r.points.push_back({{l0, l1, l2}, w});
}

// Permutations of a 3-symmetric orbit (a,b,b).
void push_orbit3(QuadratureRule& r, double a, double b, double w) {
  push_point(r, a, b, b, w);
  push_point(r, b, a, b, w);
  push_point(r, b, b, a, w);
}

// Full 6-point orbit of (a,b,c) with distinct entries.
void push_orbit6(QuadratureRule& r, double a, double b, double c, double w) {
  push_point(r, a, b, c, w);
  push_point(r, a, c, b, w);
  push_point(r, b, a, c, w);
  push_point(r, b, c, a, w);
  push_point(r, c, a, b, w);
  push_point(r, c, b, a, w);
}

}  // namespace

QuadratureRule quadrature_rule(int degree) {
  if (degree < 1 || degree > 6) throw std::invalid_argument("quadrature_rule: degree must be in [1, 6]");
  QuadratureRule r;
  r.degree = degree;
  // Dunavant symmetric rules; weights stated relative to reference area 1/2.
  switch (degree) {
    case 1:
      push_point(r, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5);
      break;
    case 2:
      push_orbit3(r, 2.0 / 3, 1.0 / 6, 1.0 / 6);
      break;
    case 3:
    case 4: {
      const double a1 = 0.445948490915965, w1 = 0.223381589678011 / 2;
      const double a2 = 0.091576213509771, w2 = 0.109951743655322 / 2;
      push_orbit3(r, 1 - 2 * a1, a1, w1);
      push_orbit3(r, 1 - 2 * a2, a2, w2);
      break;
    }
    case 5: {
      const double a1 = 0.470142064105115, w1 = 0.132394152788506 / 2;
      const double a2 = 0.101286507323456, w2 = 0.125939180544827 / 2;
      push_point(r, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225 / 2);
      push_orbit3(r, 1 - 2 * a1, a1, w1);
      push_orbit3(r, 1 - 2 * a2, a2, w2);
      break;
    }
    case 6: {
      const double a1 = 0.063089014491502, w1 = 0.050844906370207 / 2;
      const double a2 = 0.249286745170910, w2 = 0.116786275726379 / 2;
      const double b = 0.310352451033785, c = 0.636502499121399, w3 = 0.082851075618374 / 2;
      push_orbit3(r, 1 - 2 * a1, a1, w1);
      push_orbit3(r, 1 - 2 * a2, a2, w2);
      push_orbit6(r, 1 - b - c, b, c, w3);
      break;
    }
  }
  return r;
}

int dofs_per_cell(ElementKind kind) {
  switch (kind) {
    case ElementKind::VECTOR_P2: return 12;
    case ElementKind::SCALAR_P1: return 3;
    case ElementKind::SCALAR_P0: return 1;
    case ElementKind::RT_LOWEST: return 3;
  }
  return 0;
}

void eval_p2_scalar(const std::array<double, 3>& bary, const CellGeometry& geom,
                    std::array<double, 6>& values, std::array<Eigen::Vector2d, 6>& grads) {
  const double l0 = bary[0], l1 = bary[1], l2 = bary[2];
  // Barycentric gradients from the affine map.
  Eigen::Matrix2d J;
  J.col(0) = geom.v[1] - geom.v[0];
  J.col(1) = geom.v[2] - geom.v[0];
  Eigen::Matrix2d Jit = J.inverse().transpose();
  std::array<Eigen::Vector2d, 3> gl;
  gl[1] = Jit * Eigen::Vector2d(1, 0);
  gl[2] = Jit * Eigen::Vector2d(0, 1);
  gl[0] = -gl[1] - gl[2];

  const std::array<double, 3> l{l0, l1, l2};
  for (int i = 0; i < 3; ++i) {
    values[i] = l[i] * (2 * l[i] - 1);
    grads[i] = (4 * l[i] - 1) * gl[i];
  }
  for (int k = 0; k < 3; ++k) {
    int i = (k + 1) % 3, j = (k + 2) % 3;  // midpoint k opposite vertex k
    values[3 + k] = 4 * l[i] * l[j];
    grads[3 + k] = 4 * (l[i] * gl[j] + l[j] * gl[i]);
  }
}

BasisEval eval_basis(ElementKind kind, const std::array<double, 3>& bary, const CellGeometry& geom) {
  if (geom.area() <= 0) throw std::invalid_argument("eval_basis: degenerate cell");
  BasisEval out;
  switch (kind) {
    case ElementKind::SCALAR_P0:
      out.values = {1.0};
      out.gradients = {Eigen::Vector2d::Zero()};
      break;
    case ElementKind::SCALAR_P1: {
      Eigen::Matrix2d J;
      J.col(0) = geom.v[1] - geom.v[0];
      J.col(1) = geom.v[2] - geom.v[0];
      Eigen::Matrix2d Jit = J.inverse().transpose();
      Eigen::Vector2d g1 = Jit * Eigen::Vector2d(1, 0);
      Eigen::Vector2d g2 = Jit * Eigen::Vector2d(0, 1);
      out.values = {bary[0], bary[1], bary[2]};
      out.gradients = {-g1 - g2, g1, g2};
      break;
    }
    case ElementKind::VECTOR_P2: {
      std::array<double, 6> val;
      std::array<Eigen::Vector2d, 6> grad;
      eval_p2_scalar(bary, geom, val, grad);
      out.vec_values.resize(12);
      out.sym_gradients.resize(12);
      out.divergences.resize(12);
      for (int a = 0; a < 6; ++a) {
        for (int c = 0; c < 2; ++c) {
          int i = 2 * a + c;
          Eigen::Vector2d v = Eigen::Vector2d::Zero();
          v[c] = val[a];
          out.vec_values[i] = v;
          Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
          g.row(c) = grad[a].transpose();  // g = grad(phi_a e_c)
          out.sym_gradients[i] = 0.5 * (g + g.transpose());
          out.divergences[i] = grad[a][c];
        }
      }
      break;
    }
    case ElementKind::RT_LOWEST: {
      // phi_k = s_k |e_k| / (2|T|) (x - p_k); div phi_k = s_k |e_k| / |T|.
      const double A = geom.area();
      Eigen::Vector2d x = bary[0] * geom.v[0] + bary[1] * geom.v[1] + bary[2] * geom.v[2];
      out.vec_values.resize(3);
      out.divergences.resize(3);
      for (int k = 0; k < 3; ++k) {
        double coef = geom.rt_signs[k] * geom.edge_length(k) / (2 * A);
        out.vec_values[k] = coef * (x - geom.v[k]);
        out.divergences[k] = 2 * coef;
      }
      break;
    }
  }
  return out;
}

}  // namespace biot
