#include "doctest.h"

#include <random>

#include "biot/assembly.hpp"
#include "biot/linalg.hpp"
#include "biot/preconditioners.hpp"

using namespace biot;

namespace {

CsrMatrix tridiag_example() {
  std::vector<Eigen::Triplet<double>> t;
  const double vals[3][3] = {{2, 1, 0}, {1, 2, 1}, {0, 1, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (vals[i][j] != 0) t.emplace_back(i, j, vals[i][j]);
  SpMat A(3, 3);
  A.setFromTriplets(t.begin(), t.end());
  return CsrMatrix::from_eigen(A);
}

SpMat random_spd(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = dist(rng);
  const Eigen::MatrixXd A = R.transpose() * R + Eigen::MatrixXd::Identity(n, n);
  return SpMat(A.sparseView());
}

Eigen::VectorXd random_vec(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

const LinOp kIdentity = [](const Eigen::VectorXd& v) { return v; };

}  // namespace

TEST_CASE("csr storage keeps sorted rows and round-trips") {
  const CsrMatrix A = tridiag_example();
  CHECK(A.rows == 3);
  CHECK(A.nnz() == 7);
  for (std::size_t i = 0; i < A.rows; ++i) {
    CHECK(A.offsets[i] <= A.offsets[i + 1]);
    for (int p = A.offsets[i] + 1; p < A.offsets[i + 1]; ++p)
      CHECK(A.indices[static_cast<std::size_t>(p - 1)] < A.indices[static_cast<std::size_t>(p)]);
  }
  const CsrMatrix B = CsrMatrix::from_eigen(A.to_eigen());
  CHECK(B.offsets == A.offsets);
  CHECK(B.indices == A.indices);
  CHECK(B.values == A.values);

  const CsrMatrix I = CsrMatrix::identity(5);
  CHECK(I.nnz() == 5);
  CHECK(I.diagonal_vector() == Eigen::VectorXd::Ones(5));
}

TEST_CASE("spmv matches hand arithmetic and respects symmetry") {
  const CsrMatrix I = CsrMatrix::identity(4);
  const Eigen::VectorXd x = random_vec(4, 11);
  CHECK(spmv(I, x) == x);

  const CsrMatrix A = tridiag_example();
  const Eigen::VectorXd y = spmv(A, Eigen::VectorXd::Ones(3));
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 4.0);
  CHECK(y[2] == 3.0);

  const Eigen::VectorXd u = random_vec(3, 1), z = random_vec(3, 2);
  const double lhs = spmv(A, u).dot(z), rhs = u.dot(spmv(A, z));
  CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(lhs));

  CHECK_THROWS_AS(spmv(A, Eigen::VectorXd::Ones(5)), std::invalid_argument);
}

TEST_CASE("sparse Cholesky solves SPD systems and rejects indefinite ones") {
  const SpMat A = random_spd(40, 3);
  const SpdFactor F(A);
  const Eigen::VectorXd b = random_vec(40, 4);
  const Eigen::VectorXd x = F.solve(b);
  CHECK((A * x - b).norm() <= 1e-10 * b.norm());

  SpMat ind(2, 2);
  ind.insert(0, 0) = 1.0;
  ind.insert(1, 1) = -1.0;
  CHECK_THROWS_AS(SpdFactor{ind}, std::runtime_error);
}

TEST_CASE("minres terminates by the Krylov dimension bound on tiny systems") {
  SpMat A(2, 2);
  A.insert(0, 0) = 3.0;
  A.insert(0, 1) = 1.0;
  A.insert(1, 0) = 1.0;
  A.insert(1, 1) = 2.0;
  const CsrMatrix Ac = CsrMatrix::from_eigen(A);
  const Eigen::VectorXd b = (Eigen::VectorXd(2) << 1.0, -2.0).finished();
  auto [x, rep] = minres([&Ac](const Eigen::VectorXd& v) { return spmv(Ac, v); }, kIdentity, b, 1e-12, 50);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 2);
  CHECK((A * x - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("minres handles symmetric indefinite diagonals") {
  SpMat A(2, 2);
  A.insert(0, 0) = 1.0;
  A.insert(1, 1) = -1.0;
  const CsrMatrix Ac = CsrMatrix::from_eigen(A);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(2);
  auto [x, rep] = minres([&Ac](const Eigen::VectorXd& v) { return spmv(Ac, v); }, kIdentity, b, 1e-12, 50);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 2);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("minres residual history is monotone and sized with the iterations") {
  const int n = 60;
  std::mt19937 rng(8);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = dist(rng);
  const Eigen::MatrixXd sym = 0.5 * (R + R.transpose());  // indefinite
  const CsrMatrix A = CsrMatrix::from_eigen(SpMat(sym.sparseView()));
  const Eigen::VectorXd b = random_vec(n, 9);
  auto [x, rep] = minres([&A](const Eigen::VectorXd& v) { return spmv(A, v); }, kIdentity, b, 1e-10, 500);
  (void)x;
  CHECK(rep.converged);
  CHECK(rep.rel_residual_history.size() == rep.iterations + 1);
  CHECK(rep.rel_residual_history.front() == 1.0);
  for (std::size_t i = 1; i < rep.rel_residual_history.size(); ++i)
    CHECK(rep.rel_residual_history[i] <= rep.rel_residual_history[i - 1] * (1.0 + 1e-12));
  CHECK(rep.rel_residual_history.back() <= 1e-10);
  CHECK(rep.wall_time_s >= 0.0);
}

TEST_CASE("minres edge cases: zero load, non-convergence, breakdown") {
  const CsrMatrix A = tridiag_example();
  auto apply_A = [&A](const Eigen::VectorXd& v) { return spmv(A, v); };

  auto [x0, rep0] = minres(apply_A, kIdentity, Eigen::VectorXd::Zero(3), 1e-8, 10);
  CHECK(rep0.converged);
  CHECK(rep0.iterations == 0);
  CHECK(x0.norm() == 0.0);

  // iteration cap reached: reported as non-converged, not as breakdown
  const int n = 200;
  std::vector<Eigen::Triplet<double>> t;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ud(0.5, 2.0);
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, (i % 2 ? 1 : -1) * ud(rng));
  SpMat D(n, n);
  D.setFromTriplets(t.begin(), t.end());
  const CsrMatrix Dc = CsrMatrix::from_eigen(D);
  auto [x1, rep1] = minres([&Dc](const Eigen::VectorXd& v) { return spmv(Dc, v); }, kIdentity,
                           random_vec(n, 6), 1e-14, 3);
  (void)x1;
  CHECK(!rep1.converged);
  CHECK(!rep1.breakdown);
  CHECK(rep1.iterations == 3);

  // an indefinite "preconditioner" surfaces as breakdown, not as silence
  SpMat P(2, 2);
  P.insert(0, 0) = 1.0;
  P.insert(1, 1) = -1.0;
  const CsrMatrix Pc = CsrMatrix::from_eigen(P);
  const CsrMatrix I2 = CsrMatrix::identity(2);
  const Eigen::VectorXd b = (Eigen::VectorXd(2) << 2.0, 1.0).finished();
  auto [x2, rep2] = minres([&I2](const Eigen::VectorXd& v) { return spmv(I2, v); },
                           [&Pc](const Eigen::VectorXd& v) { return spmv(Pc, v); }, b, 1e-12, 50);
  (void)x2;
  CHECK(rep2.breakdown);
  CHECK(!rep2.converged);
}

TEST_CASE("extreme eigenvalue moduli on explicit diagonals") {
  SpMat D(2, 2);
  D.insert(0, 0) = 1.0;
  D.insert(1, 1) = 4.0;
  const CsrMatrix Dc = CsrMatrix::from_eigen(D);
  for (auto mode : {EigMode::DENSE, EigMode::LANCZOS}) {
    auto [lo, hi] = extreme_eigs(Dc, nullptr, mode);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hi == doctest::Approx(4.0).epsilon(1e-10));
  }

  // signed extremes of an indefinite diagonal via the Lanczos building block
  SpMat T(3, 3);
  T.insert(0, 0) = 2.0;
  T.insert(1, 1) = -3.0;
  T.insert(2, 2) = 5.0;
  const CsrMatrix Tc = CsrMatrix::from_eigen(T);
  auto [tlo, thi] = lanczos_extremes([&Tc](const Eigen::VectorXd& v) { return spmv(Tc, v); },
                                     [](const Eigen::VectorXd& v) { return v; }, 3);
  CHECK(tlo == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(thi == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("a perfectly matched metric yields unit spectrum") {
  const SpMat A = random_spd(30, 12);
  const CsrMatrix Ac = CsrMatrix::from_eigen(A);
  for (auto mode : {EigMode::DENSE, EigMode::LANCZOS}) {
    auto [lo, hi] = extreme_eigs(Ac, &Ac, mode);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("dense and Lanczos extremes agree on a saddle-point operator") {
  const Mesh m = build_structured_mesh(2);
  const MaterialParams p = MaterialParams::footing(3e4, 0.4, 1e3);
  const AssembledSystem sys = assemble_three_field(m, p);
  const Preconditioner P = build_P1_III(sys.op, p, select_beta(BetaRule::MAX_MU_LAMBDA, p));
  const CsrMatrix S = sys.op.monolithic();
  const CsrMatrix N = P.gram_matrix();
  auto [dlo, dhi] = extreme_eigs(S, &N, EigMode::DENSE);
  auto [llo, lhi] = extreme_eigs(S, &N, EigMode::LANCZOS);
  CHECK(llo == doctest::Approx(dlo).epsilon(0.01));
  CHECK(lhi == doctest::Approx(dhi).epsilon(0.01));
}

TEST_CASE("input guards on the eigenvalue estimator") {
  SpMat R(2, 3);
  R.insert(0, 0) = 1.0;
  CHECK_THROWS_AS(extreme_eigs(CsrMatrix::from_eigen(R), nullptr, EigMode::DENSE), std::invalid_argument);
  CHECK_THROWS_AS(extreme_eigs(CsrMatrix::identity(20001), nullptr, EigMode::DENSE), std::invalid_argument);
}
