#include "biot/matrix_market.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace biot {

void write_matrix_market(const CsrMatrix& A, const std::string& path) {
  if (A.rows != A.cols) throw std::invalid_argument("write_matrix_market: symmetric format needs a square matrix");
  std::vector<std::array<std::size_t, 2>> coords;
  std::vector<double> vals;
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (int p = A.offsets[i]; p < A.offsets[i + 1]; ++p) {
      const auto j = static_cast<std::size_t>(A.indices[static_cast<std::size_t>(p)]);
      if (j > i) continue;  // keep the lower triangle
      coords.push_back({i, j});
      vals.push_back(A.values[static_cast<std::size_t>(p)]);
    }
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << A.rows << " " << A.cols << " " << coords.size() << "\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < coords.size(); ++k)
    out << coords[k][0] + 1 << " " << coords[k][1] + 1 << " " << vals[k] << "\n";
  if (!out) throw std::runtime_error("write_matrix_market: write failed on " + path);
}

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_market: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate real", 0) != 0)
    throw std::runtime_error("read_matrix_market: unsupported header in " + path);
  const bool symmetric = line.find("symmetric") != std::string::npos;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream hdr(line);
  std::size_t rows = 0, cols = 0, nnz = 0;
  hdr >> rows >> cols >> nnz;
  if (!hdr) throw std::runtime_error("read_matrix_market: bad size line in " + path);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(symmetric ? 2 * nnz : nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = 0, j = 0;
    double v = 0;
    in >> i >> j >> v;
    if (!in) throw std::runtime_error("read_matrix_market: truncated entries in " + path);
    trip.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetric && i != j) trip.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
  }
  SpMat M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  M.setFromTriplets(trip.begin(), trip.end());
  return CsrMatrix::from_eigen(M);
}

}  // namespace biot
