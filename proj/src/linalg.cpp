#include "hypcert/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hypcert {

using namespace rounding;

IntervalMatrix to_interval(const Matrix& m) {
  IntervalMatrix r(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Interval(m(i, j));
    }
  }
  return r;
}

IntervalVector to_interval(const Vector& v) {
  IntervalVector r(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) r[static_cast<std::size_t>(i)] = Interval(v(i));
  return r;
}

Matrix mid(const IntervalMatrix& m) {
  Matrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).mid();
    }
  }
  return r;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

IntervalMatrix verified_inverse(const Matrix& c) {
  if (c.rows() != c.cols()) throw DimensionError("verified_inverse needs a square matrix");
  const auto n = static_cast<std::size_t>(c.rows());
  Eigen::FullPivLU<Matrix> lu(c);
  if (!lu.isInvertible()) throw IntervalError("inverse not verifiable");
  const Matrix b = lu.inverse();
  if (!b.allFinite()) throw IntervalError("inverse not verifiable");

  const IntervalMatrix bi = to_interval(b);
  const IntervalMatrix residual = IntervalMatrix::identity(n) - mat_mul(bi, to_interval(c));

  double delta = 0.0;  // upper bound of ‖R‖∞
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row = add_up(row, residual(i, j).mag());
    delta = std::max(delta, row);
  }
  if (!(delta < 1.0)) throw IntervalError("inverse not verifiable");

  double b_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row = add_up(row, std::fabs(b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    b_norm = std::max(b_norm, row);
  }
  // C⁻¹ = B + R B + R² C⁻¹ and every entry of R² C⁻¹ is bounded by
  // δ² ‖B‖∞ / (1 - δ).
  const double tail = div_up(mul_up(mul_up(delta, delta), b_norm), sub_down(1.0, delta));
  const IntervalMatrix first = bi + mat_mul(residual, bi);
  IntervalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = first(i, j) + Interval(-tail, tail);
    }
  }
  return out;
}

IntervalVector interval_solve(const IntervalMatrix& a, const IntervalVector& rhs) {
  if (a.rows() != a.cols() || a.rows() != rhs.size()) {
    throw DimensionError("interval_solve dimension mismatch");
  }
  const std::size_t n = a.rows();
  const Matrix centre = mid(a);
  Eigen::FullPivLU<Matrix> lu(centre);
  if (!lu.isInvertible()) throw IntervalError("singular midpoint matrix");
  const IntervalMatrix precond = to_interval(Matrix(lu.inverse()));

  IntervalMatrix m = mat_mul(precond, a);
  IntervalVector b = mat_vec(precond, rhs);
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k).contains_zero()) throw IntervalError("pivot interval contains zero");
    for (std::size_t i = k + 1; i < n; ++i) {
      const Interval factor = m(i, k) / m(k, k);
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= factor * m(k, j);
      m(i, k) = Interval(0.0);
      b[i] -= factor * b[k];
    }
  }
  IntervalVector x(n);
  for (std::size_t kk = n; kk-- > 0;) {
    Interval acc = b[kk];
    for (std::size_t j = kk + 1; j < n; ++j) acc -= m(kk, j) * x[j];
    x[kk] = acc / m(kk, kk);
  }
  return x;
}

double norm_upper(const IntervalMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = m(i, j).mag();
      s = add_up(s, mul_up(v, v));
    }
  }
  return sqrt_up(s);
}

double norm_upper(const Matrix& m) { return norm_upper(to_interval(m)); }

}  // namespace hypcert
