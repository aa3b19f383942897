#include "biot/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace biot {

double Mesh::cell_area(int t) const {
  const auto& c = cells[t];
  Eigen::Vector2d d1 = vertices[c[1]] - vertices[c[0]];
  Eigen::Vector2d d2 = vertices[c[2]] - vertices[c[0]];
  return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
}

Eigen::Vector2d Mesh::edge_midpoint(int e) const {
  return 0.5 * (vertices[edges[e][0]] + vertices[edges[e][1]]);
}

double Mesh::edge_length(int e) const {
  return (vertices[edges[e][1]] - vertices[edges[e][0]]).norm();
}

Mesh build_structured_mesh(int n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("build_structured_mesh: n must be even and >= 2");
  }
  Mesh m;
  m.n = n;
  const double lo = -4.0, hi = 4.0;
  const double h = (hi - lo) / n;

  m.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      m.vertices.emplace_back(lo + i * h, lo + j * h);
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  m.cells.reserve(2u * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      m.cells.push_back({a, b, c});
      m.cells.push_back({a, c, d});
    }
  }

  std::map<std::array<int, 2>, int> edge_id;
  std::vector<int> incidence;
  m.cell_edges.resize(m.cells.size());
  m.cell_edge_signs.resize(m.cells.size());
  for (std::size_t t = 0; t < m.cells.size(); ++t) {
    const auto& c = m.cells[t];
    for (int k = 0; k < 3; ++k) {
      int p = c[(k + 1) % 3], q = c[(k + 2) % 3];  // local edge k is opposite vertex k
      std::array<int, 2> key{std::min(p, q), std::max(p, q)};
      auto it = edge_id.find(key);
      int e;
      if (it == edge_id.end()) {
        e = static_cast<int>(m.edges.size());
        edge_id.emplace(key, e);
        m.edges.push_back(key);
        incidence.push_back(0);
      } else {
        e = it->second;
      }
      ++incidence[e];
      m.cell_edges[t][k] = e;
      m.cell_edge_signs[t][k] = (p < q) ? 1 : -1;
    }
  }

  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    if (incidence[e] != 1) continue;
    Eigen::Vector2d mid = m.edge_midpoint(static_cast<int>(e));
    BoundaryTag tag;
    if (std::abs(mid.y() - hi) < 1e-12) {
      tag = std::abs(mid.x()) < 0.8 ? BoundaryTag::GAMMA1 : BoundaryTag::GAMMA2;
    } else {
      tag = BoundaryTag::CLAMPED;
    }
    m.facet_tags.emplace(static_cast<int>(e), tag);
  }
  return m;
}

std::vector<std::pair<int, Eigen::Vector2d>> boundary_facets(const Mesh& mesh, BoundaryTag tag) {
  // Outward direction determined by pointing away from the incident cell.
  std::vector<Eigen::Vector2d> centroid_of(mesh.n_edges(), Eigen::Vector2d::Zero());
  std::vector<int> count(mesh.n_edges(), 0);
  for (std::size_t t = 0; t < mesh.n_cells(); ++t) {
    const auto& c = mesh.cells[t];
    Eigen::Vector2d ctr = (mesh.vertices[c[0]] + mesh.vertices[c[1]] + mesh.vertices[c[2]]) / 3.0;
    for (int k = 0; k < 3; ++k) {
      int e = mesh.cell_edges[t][k];
      centroid_of[e] = ctr;
      ++count[e];
    }
  }
  std::vector<std::pair<int, Eigen::Vector2d>> out;
  for (const auto& [e, t] : mesh.facet_tags) {
    if (t != tag) continue;
    Eigen::Vector2d d = mesh.vertices[mesh.edges[e][1]] - mesh.vertices[mesh.edges[e][0]];
    Eigen::Vector2d nrm(d.y(), -d.x());
    nrm.normalize();
    if (nrm.dot(mesh.edge_midpoint(e) - centroid_of[e]) < 0) nrm = -nrm;
    out.emplace_back(e, nrm);
  }
  return out;
}

std::vector<std::pair<int, Eigen::Vector2d>> boundary_facets(const Mesh& mesh,
                                                             std::initializer_list<BoundaryTag> tags) {
  std::vector<std::pair<int, Eigen::Vector2d>> out;
  for (BoundaryTag t : tags) {
    auto part = boundary_facets(mesh, t);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace biot
