#include "biot/csr.hpp"

namespace biot {

CsrMatrix CsrMatrix::identity(std::size_t n) {
  CsrMatrix A;
  A.rows = A.cols = n;
  A.offsets.resize(n + 1);
  A.indices.resize(n);
  A.values.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) A.offsets[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < n; ++i) A.indices[i] = static_cast<int>(i);
  return A;
}

CsrMatrix CsrMatrix::diagonal(const Eigen::VectorXd& d) {
  CsrMatrix A = identity(static_cast<std::size_t>(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) A.values[i] = d[i];
  return A;
}

CsrMatrix CsrMatrix::from_eigen(const SpMat& A) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> R = A;
  R.prune(0.0);
  R.makeCompressed();
  CsrMatrix out;
  out.rows = static_cast<std::size_t>(R.rows());
  out.cols = static_cast<std::size_t>(R.cols());
  out.offsets.assign(R.outerIndexPtr(), R.outerIndexPtr() + R.rows() + 1);
  out.indices.assign(R.innerIndexPtr(), R.innerIndexPtr() + R.nonZeros());
  out.values.assign(R.valuePtr(), R.valuePtr() + R.nonZeros());
  return out;
}

SpMat CsrMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(nnz());
  for (std::size_t i = 0; i < rows; ++i) {
    for (int p = offsets[i]; p < offsets[i + 1]; ++p) {
      trip.emplace_back(static_cast<int>(i), indices[p], values[p]);
    }
  }
  SpMat A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

Eigen::VectorXd CsrMatrix::diagonal_vector() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    for (int p = offsets[i]; p < offsets[i + 1]; ++p) {
      if (indices[p] == static_cast<int>(i)) d[static_cast<Eigen::Index>(i)] = values[p];
    }
  }
  return d;
}

Eigen::VectorXd spmv(const CsrMatrix& A, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != A.cols) throw std::invalid_argument("spmv: dimension mismatch");
  Eigen::VectorXd y(static_cast<Eigen::Index>(A.rows));
  for (std::size_t i = 0; i < A.rows; ++i) {
    double acc = 0.0;
    for (int p = A.offsets[i]; p < A.offsets[i + 1]; ++p) acc += A.values[p] * x[A.indices[p]];
    y[static_cast<Eigen::Index>(i)] = acc;
  }
  return y;
}

}  // namespace biot
