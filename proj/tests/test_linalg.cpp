#include <random>

#include "doctest.h"
#include "hypcert/linalg.hpp"

using namespace hypcert;

namespace {

bool encloses(const IntervalMatrix& e, const Matrix& m, double tol = 0.0) {
  for (std::size_t i = 0; i < e.rows(); ++i) {
    for (std::size_t j = 0; j < e.cols(); ++j) {
      const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (e(i, j).lo() > v + tol || e(i, j).hi() < v - tol) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("verified inverse of simple matrices") {
  const IntervalMatrix e = verified_inverse(Matrix::Identity(3, 3));
  CHECK(encloses(e, Matrix::Identity(3, 3)));
  CHECK(e.max_width() < 1e-15);

  Matrix d(2, 2);
  d << 2, 0, 0, 0.5;
  Matrix inv(2, 2);
  inv << 0.5, 0, 0, 2;
  CHECK(encloses(verified_inverse(d), inv));

  Matrix singular(2, 2);
  singular << 1, 2, 2, 4;
  CHECK_THROWS_WITH_AS(verified_inverse(singular), "inverse not verifiable", IntervalError);
  CHECK_THROWS_AS(verified_inverse(Matrix(2, 3)), DimensionError);
}

TEST_CASE("verified inverse of eigenvector matrices contains the identity product") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 50; ++t) {
    Matrix a(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
    }
    a += Matrix::Identity(3, 3) * 2.0 * (t % 2 ? 1.0 : -1.0);
    Eigen::EigenSolver<Matrix> es(a);
    if ((es.eigenvalues().imag().cwiseAbs().maxCoeff()) > 0.0) continue;
    const Matrix c = es.eigenvectors().real();
    const IntervalMatrix e = verified_inverse(c);
    const IntervalMatrix prod = mat_mul(e, to_interval(c));
    CHECK(prod.contains(IntervalMatrix::identity(3)));
    ++checked;
  }
  CHECK(checked > 5);
}

TEST_CASE("interval linear solve") {
  const IntervalMatrix a = IntervalMatrix::from_rows({{4, 1}, {1, 3}});
  const IntervalVector b{Interval(1), Interval(2)};
  const IntervalVector x = interval_solve(a, b);
  // exact solution (1/11, 7/11)
  CHECK(x[0].contains(1.0 / 11.0));
  CHECK(x[1].contains(7.0 / 11.0));
  CHECK(x.max_width() < 1e-14);

  const IntervalMatrix wide = IntervalMatrix::from_rows(
      {{Interval(3.9, 4.1), Interval(1)}, {Interval(1), Interval(2.9, 3.1)}});
  const IntervalVector y = interval_solve(wide, b);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    Matrix m(2, 2);
    m << 3.9 + 0.2 * u(rng), 1, 1, 2.9 + 0.2 * u(rng);
    const Vector sol = m.lu().solve(Vector::Map(std::vector<double>{1, 2}.data(), 2));
    CHECK(y[0].contains(sol(0)));
    CHECK(y[1].contains(sol(1)));
  }
  CHECK_THROWS_AS(interval_solve(IntervalMatrix::from_rows({{Interval(-1, 1)}}), IntervalVector{Interval(1)}),
                  IntervalError);
}

TEST_CASE("norm upper bound") {
  Matrix m(2, 2);
  m << 3, 0, 0, 4;
  CHECK(norm_upper(m) >= 5.0);
  CHECK(norm_upper(m) < 5.0 + 1e-14);
  CHECK(norm_upper(to_interval(m)) >= 5.0);
}
