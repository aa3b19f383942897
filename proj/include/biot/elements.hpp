#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace biot {

enum class ElementKind { VECTOR_P2, SCALAR_P1, SCALAR_P0, RT_LOWEST };

struct QuadraturePoint {
  std::array<double, 3> bary;
  double weight;
};

// Symmetric rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}.
// Weights are positive and sum to 1/2; all monomials of total degree <=
// `degree` integrate exactly.
struct QuadratureRule {
  int degree = 0;
  std::vector<QuadraturePoint> points;
};

QuadratureRule quadrature_rule(int degree);

// Geometry of one physical cell, as needed to push reference bases forward.
struct CellGeometry {
  std::array<Eigen::Vector2d, 3> v;      // vertex coordinates, CCW
  std::array<int, 3> rt_signs{1, 1, 1};  // per local edge (edge k opposite vertex k)

  double area() const {
    Eigen::Vector2d d1 = v[1] - v[0], d2 = v[2] - v[0];
    return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
  }
  double edge_length(int k) const { return (v[(k + 2) % 3] - v[(k + 1) % 3]).norm(); }
};

// Physical-space basis data at one point. Which fields are populated depends
// on the element kind:
//   SCALAR_P1 / SCALAR_P0 : values, gradients
//   VECTOR_P2             : vec_values, sym_gradients, divergences
//                           (12 dofs, ordered (node 0, x), (node 0, y), ...;
//                            nodes 0-2 are vertices, 3-5 edge midpoints with
//                            midpoint k opposite vertex k)
//   RT_LOWEST             : vec_values, divergences (3 edge dofs; basis k has
//                           unit averaged normal flux through edge k, zero
//                           through the others, with the cell's sign
//                           convention)
struct BasisEval {
  std::vector<double> values;
  std::vector<Eigen::Vector2d> gradients;
  std::vector<Eigen::Vector2d> vec_values;
  std::vector<Eigen::Matrix2d> sym_gradients;
  std::vector<double> divergences;
};

BasisEval eval_basis(ElementKind kind, const std::array<double, 3>& bary, const CellGeometry& geom);

// Scalar P2 Lagrange values and physical gradients (6 functions); the
// building block used by the vector wrapper and by assembly loops.
void eval_p2_scalar(const std::array<double, 3>& bary, const CellGeometry& geom,
                    std::array<double, 6>& values, std::array<Eigen::Vector2d, 6>& grads);

int dofs_per_cell(ElementKind kind);

}  // namespace biot
