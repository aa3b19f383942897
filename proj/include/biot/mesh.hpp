#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace biot {

enum class BoundaryTag : std::uint8_t { CLAMPED = 0, GAMMA1 = 1, GAMMA2 = 2 };

// Structured triangulation of the square (-4,4)^2. Each of the n*n grid
// squares is split along the diagonal from its lower-left to its upper-right
// corner, giving 2n^2 counter-clockwise cells. Edges carry a global
// orientation (low vertex index -> high vertex index); cell_edges stores, per
// cell, the three incident edges with the sign relating the cell-local edge
// direction to the global one. Boundary edges are tagged: GAMMA1 is the loaded
// footing strip on the top boundary (edge midpoint |x| < 0.8, y = 4), GAMMA2
// the rest of the top, CLAMPED the remaining three sides.
struct Mesh {
  int n = 0;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> cell_edges;       // edge index, local edge k opposite vertex k
  std::vector<std::array<int, 3>> cell_edge_signs;  // +1 if local direction matches global
  std::map<int, BoundaryTag> facet_tags;            // boundary edge -> tag

  std::size_t n_vertices() const { return vertices.size(); }
  std::size_t n_cells() const { return cells.size(); }
  std::size_t n_edges() const { return edges.size(); }

  double cell_area(int t) const;
  Eigen::Vector2d edge_midpoint(int e) const;
  double edge_length(int e) const;
};

Mesh build_structured_mesh(int n);

// All boundary edges carrying `tag`, with outward unit normals.
std::vector<std::pair<int, Eigen::Vector2d>> boundary_facets(const Mesh& mesh, BoundaryTag tag);
std::vector<std::pair<int, Eigen::Vector2d>> boundary_facets(const Mesh& mesh,
                                                             std::initializer_list<BoundaryTag> tags);

}  // namespace biot
