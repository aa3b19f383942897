#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace biot {

using SpMat = Eigen::SparseMatrix<double>;

// Compressed-sparse-row storage: offsets[i]..offsets[i+1] delimit row i,
// column indices strictly increasing within a row, no stored duplicates.
struct CsrMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<int> offsets;  // size rows + 1
  std::vector<int> indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  static CsrMatrix identity(std::size_t n);
  static CsrMatrix diagonal(const Eigen::VectorXd& d);
  static CsrMatrix from_eigen(const SpMat& A);
  SpMat to_eigen() const;
  Eigen::VectorXd diagonal_vector() const;
};

// y = A x, rows accumulated left to right in IEEE double precision.
Eigen::VectorXd spmv(const CsrMatrix& A, const Eigen::VectorXd& x);

}  // namespace biot
