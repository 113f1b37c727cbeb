#include "hypcert/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace hypcert {

namespace rounding {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude products and quotients may lose the exactness of the
// fma-based error term; fall back to one-ulp inflation.
constexpr double kTiny = 0x1p-960;

double check_finite(double x) {
  if (!std::isfinite(x)) throw IntervalError("interval overflow");
  return x;
}

// Sign of the rounding error of s = fl(a + b) relative to the exact sum.
double two_sum_err(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

}  // namespace

double next_down(double a) { return std::nextafter(a, -kInf); }
double next_up(double a) { return std::nextafter(a, kInf); }

double add_down(double a, double b) {
  const double s = check_finite(a + b);
  return two_sum_err(a, b, s) < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  const double s = check_finite(a + b);
  return two_sum_err(a, b, s) > 0.0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  const double p = check_finite(a * b);
  if (a == 0.0 || b == 0.0) return 0.0;
  if (std::fabs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  const double p = check_finite(a * b);
  if (a == 0.0 || b == 0.0) return 0.0;
  if (std::fabs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

double div_down(double a, double b) {
  const double q = check_finite(a / b);
  if (a == 0.0) return 0.0;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
  // exact remainder a - q*b; the true quotient exceeds q iff r/b > 0
  const double r = std::fma(-q, b, a);
  const bool true_below = (r < 0.0) != (b < 0.0) && r != 0.0;
  return true_below ? next_down(q) : q;
}

double div_up(double a, double b) {
  const double q = check_finite(a / b);
  if (a == 0.0) return 0.0;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
  const double r = std::fma(-q, b, a);
  const bool true_above = (r > 0.0) == (b > 0.0) && r != 0.0;
  return true_above ? next_up(q) : q;
}

double sqrt_down(double a) {
  const double s = std::sqrt(a);
  if (s == 0.0) return 0.0;
  return std::fma(-s, s, a) < 0.0 ? next_down(s) : s;
}

double sqrt_up(double a) {
  const double s = std::sqrt(a);
  if (s == 0.0) return a == 0.0 ? 0.0 : next_up(s);
  return std::fma(-s, s, a) > 0.0 ? next_up(s) : s;
}

}  // namespace rounding

using namespace rounding;

Interval::Interval(double point) : lo_(point), hi_(point) {
  if (!std::isfinite(point)) throw IntervalError("non-finite interval endpoint");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw IntervalError("non-finite interval endpoint");
  }
  if (lo > hi) throw IntervalError("interval with lo > hi");
}

double Interval::mid() const {
  if (lo_ == hi_) return lo_;
  return 0.5 * lo_ + 0.5 * hi_;
}

double Interval::width() const { return sub_up(hi_, lo_); }

double Interval::rad() const {
  const double m = mid();
  return std::max(sub_up(m, lo_), sub_up(hi_, m));
}

double Interval::mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::min(std::fabs(lo_), std::fabs(hi_));
}

Interval& Interval::operator+=(const Interval& b) { return *this = *this + b; }
Interval& Interval::operator-=(const Interval& b) { return *this = *this - b; }
Interval& Interval::operator*=(const Interval& b) { return *this = *this * b; }
Interval& Interval::operator/=(const Interval& b) { return *this = *this / b; }

Interval operator-(const Interval& a) { return {-a.hi(), -a.lo()}; }

Interval operator+(const Interval& a, const Interval& b) {
  return {add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi())};
}

Interval operator-(const Interval& a, const Interval& b) {
  return {sub_down(a.lo(), b.hi()), sub_up(a.hi(), b.lo())};
}

Interval operator*(const Interval& a, const Interval& b) {
  const double lo = std::min({mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()),
                              mul_down(a.hi(), b.lo()), mul_down(a.hi(), b.hi())});
  const double hi = std::max({mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()),
                              mul_up(a.hi(), b.lo()), mul_up(a.hi(), b.hi())});
  return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) {
    throw IntervalError("division by zero-containing interval");
  }
  const double lo = std::min({div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi()),
                              div_down(a.hi(), b.lo()), div_down(a.hi(), b.hi())});
  const double hi = std::max({div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi()),
                              div_up(a.hi(), b.lo()), div_up(a.hi(), b.hi())});
  return {lo, hi};
}

Interval sqr(const Interval& a) {
  if (a.lo() >= 0.0) return {mul_down(a.lo(), a.lo()), mul_up(a.hi(), a.hi())};
  if (a.hi() <= 0.0) return {mul_down(a.hi(), a.hi()), mul_up(a.lo(), a.lo())};
  return {0.0, std::max(mul_up(a.lo(), a.lo()), mul_up(a.hi(), a.hi()))};
}

Interval sqrt(const Interval& a) {
  if (a.lo() < 0.0) throw IntervalError("sqrt of interval with negative part");
  return {sqrt_down(a.lo()), sqrt_up(a.hi())};
}

Interval pi_interval() {
  // M_PI rounds below pi.
  constexpr double kPiLo = 3.141592653589793;
  return {kPiLo, next_up(kPiLo)};
}

Interval enclose_literal(double x) {
  const double scaled = std::ldexp(x, 30);
  if (std::isfinite(scaled) && scaled == std::floor(scaled)) return Interval(x);
  return {next_down(x), next_up(x)};
}

namespace {

// True if some integer lies in (x - offset) / (2 pi) for x in a, i.e. a may
// contain a point offset + 2 k pi.
bool may_contain_phase(const Interval& a, const Interval& offset) {
  const Interval two_pi = Interval(2.0) * pi_interval();
  const Interval y = (a - offset) / two_pi;
  return std::floor(y.hi()) >= std::ceil(y.lo());
}

double libm_down(double v) {
  // libm sin/cos are accurate to within one ulp; widen by two.
  return std::max(-1.0, next_down(next_down(v)));
}

double libm_up(double v) { return std::min(1.0, next_up(next_up(v))); }

Interval trig(const Interval& a, double (*fn)(double), const Interval& max_at,
              const Interval& min_at) {
  if (a.width() >= 6.28) return {-1.0, 1.0};
  const double v0 = fn(a.lo());
  const double v1 = fn(a.hi());
  double lo = libm_down(std::min(v0, v1));
  double hi = libm_up(std::max(v0, v1));
  if (may_contain_phase(a, max_at)) hi = 1.0;
  if (may_contain_phase(a, min_at)) lo = -1.0;
  return {lo, hi};
}

}  // namespace

Interval sin(const Interval& a) {
  const Interval half_pi = pi_interval() / Interval(2.0);
  return trig(a, [](double x) { return std::sin(x); }, half_pi, -half_pi);
}

Interval cos(const Interval& a) {
  return trig(a, [](double x) { return std::cos(x); }, Interval(0.0), pi_interval());
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

bool intersects(const Interval& a, const Interval& b) {
  return a.lo() <= b.hi() && b.lo() <= a.hi();
}

Interval intersect(const Interval& a, const Interval& b) {
  if (!intersects(a, b)) throw IntervalError("empty interval intersection");
  return {std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

std::ostream& operator<<(std::ostream& os, const Interval& a) {
  return os << '[' << a.lo() << ", " << a.hi() << ']';
}

// IntervalVector

IntervalVector IntervalVector::from_point(const std::vector<double>& x) {
  IntervalVector v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = Interval(x[i]);
  return v;
}

IntervalVector IntervalVector::ball(const std::vector<double>& centre, double radius) {
  IntervalVector v(centre.size());
  for (std::size_t i = 0; i < centre.size(); ++i) {
    v[i] = Interval(sub_down(centre[i], radius), add_up(centre[i], radius));
  }
  return v;
}

std::vector<double> IntervalVector::mid() const {
  std::vector<double> m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = data_[i].mid();
  return m;
}

double IntervalVector::max_width() const {
  double w = 0.0;
  for (const auto& x : data_) w = std::max(w, x.width());
  return w;
}

bool IntervalVector::contains(const std::vector<double>& x) const {
  if (x.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!data_[i].contains(x[i])) return false;
  }
  return true;
}

bool IntervalVector::contains(const IntervalVector& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!data_[i].contains(other[i])) return false;
  }
  return true;
}

bool IntervalVector::contains_in_interior(const IntervalVector& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!data_[i].contains_in_interior(other[i])) return false;
  }
  return true;
}

IntervalVector operator+(const IntervalVector& a, const IntervalVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector dimension mismatch");
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntervalVector operator-(const IntervalVector& a, const IntervalVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector dimension mismatch");
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// IntervalMatrix

IntervalMatrix IntervalMatrix::identity(std::size_t n) {
  IntervalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Interval(1.0);
  return m;
}

IntervalMatrix IntervalMatrix::from_rows(
    std::initializer_list<std::initializer_list<Interval>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  IntervalMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged matrix rows");
    std::size_t j = 0;
    for (const auto& x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

IntervalMatrix IntervalMatrix::transpose() const {
  IntervalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool IntervalMatrix::contains(const IntervalMatrix& other) const {
  if (other.rows_ != rows_ || other.cols_ != cols_) return false;
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!data_[k].contains(other.data_[k])) return false;
  }
  return true;
}

double IntervalMatrix::max_width() const {
  double w = 0.0;
  for (const auto& x : data_) w = std::max(w, x.width());
  return w;
}

IntervalMatrix operator+(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix dimension mismatch");
  }
  IntervalMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  }
  return r;
}

IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix dimension mismatch");
  }
  IntervalMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  }
  return r;
}

IntervalMatrix operator*(const Interval& s, const IntervalMatrix& a) {
  IntervalMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  }
  return r;
}

IntervalMatrix mat_mul(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix inner dimension mismatch");
  IntervalMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Interval acc(0.0);
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  }
  return r;
}

IntervalVector mat_vec(const IntervalMatrix& a, const IntervalVector& x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector dimension mismatch");
  IntervalVector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Interval acc(0.0);
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
    r[i] = acc;
  }
  return r;
}

IntervalMatrix symmetrize(const IntervalMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("symmetrize needs a square matrix");
  IntervalMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = intersect(a(i, j), a(j, i));
  }
  return s;
}

PositiveDefiniteResult check_positive_definite(const IntervalMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("PD test needs a square matrix");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      // no symmetric member at all
      if (!intersects(a(i, j), a(j, i))) return {};
    }
  }
  const IntervalMatrix s = symmetrize(a);
  const std::size_t n = s.rows();
  IntervalMatrix l(n, n);
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    Interval pivot = s(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= sqr(l(j, k));
    if (!(pivot.lo() > 0.0)) return {false, pivot.lo()};
    min_pivot = std::min(min_pivot, pivot.lo());
    l(j, j) = sqrt(pivot);
    for (std::size_t i = j + 1; i < n; ++i) {
      Interval acc = s(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / l(j, j);
    }
  }
  return {true, min_pivot};
}

bool is_positive_definite(const IntervalMatrix& a) {
  return check_positive_definite(a).verified;
}

}  // namespace hypcert
