#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypcert {

class IntervalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed interval [lo, hi] of finite doubles. Every operation rounds its
// endpoints outward, so the result encloses the exact real image.
class Interval {
 public:
  constexpr Interval() = default;
  Interval(double point);  // NOLINT(google-explicit-constructor)
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const;
  double width() const;  // rounded up
  double rad() const;    // rounded up, mid() +- rad() covers the interval
  double mag() const;    // max |x|
  double mig() const;    // min |x|

  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool contains_in_interior(const Interval& other) const {
    return lo_ < other.lo_ && other.hi_ < hi_;
  }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool is_point() const { return lo_ == hi_; }

  Interval& operator+=(const Interval& b);
  Interval& operator-=(const Interval& b);
  Interval& operator*=(const Interval& b);
  Interval& operator/=(const Interval& b);

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval operator-(const Interval& a);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Throws IntervalError("division by zero-containing interval") if 0 is in b.
Interval operator/(const Interval& a, const Interval& b);

Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);

Interval hull(const Interval& a, const Interval& b);
// Throws if the intersection is empty.
Interval intersect(const Interval& a, const Interval& b);
bool intersects(const Interval& a, const Interval& b);

// Enclosure of pi.
Interval pi_interval();

// Enclosure of the real number a decimal literal such as 0.1 or 5.4 stands
// for: dyadic values with at most 30 fractional bits stay points, anything
// else is widened by one ulp on each side.
Interval enclose_literal(double x);

std::ostream& operator<<(std::ostream& os, const Interval& a);

// Directed rounding of single operations on doubles, built on error-free
// transformations (no rounding-mode switching).
namespace rounding {
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);
double next_down(double a);
double next_up(double a);
}  // namespace rounding

class IntervalVector {
 public:
  IntervalVector() = default;
  explicit IntervalVector(std::size_t n) : data_(n) {}
  IntervalVector(std::initializer_list<Interval> xs) : data_(xs) {}
  explicit IntervalVector(std::vector<Interval> xs) : data_(std::move(xs)) {}

  static IntervalVector from_point(const std::vector<double>& x);
  // Max-norm ball around centre.
  static IntervalVector ball(const std::vector<double>& centre, double radius);

  std::size_t size() const { return data_.size(); }
  Interval& operator[](std::size_t i) { return data_[i]; }
  const Interval& operator[](std::size_t i) const { return data_[i]; }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  std::vector<double> mid() const;
  double max_width() const;
  bool contains(const std::vector<double>& x) const;
  bool contains(const IntervalVector& other) const;
  bool contains_in_interior(const IntervalVector& other) const;

 private:
  std::vector<Interval> data_;
};

IntervalVector operator+(const IntervalVector& a, const IntervalVector& b);
IntervalVector operator-(const IntervalVector& a, const IntervalVector& b);

// Row-major matrix of intervals.
class IntervalMatrix {
 public:
  IntervalMatrix() = default;
  IntervalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntervalMatrix identity(std::size_t n);
  static IntervalMatrix from_rows(
      std::initializer_list<std::initializer_list<Interval>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Interval& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Interval& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  IntervalMatrix transpose() const;
  bool contains(const IntervalMatrix& other) const;
  double max_width() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Interval> data_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

IntervalMatrix operator+(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix operator*(const Interval& s, const IntervalMatrix& a);
IntervalMatrix mat_mul(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalVector mat_vec(const IntervalMatrix& a, const IntervalVector& x);

// A ∩ Aᵀ. Throws if some entry pair is disjoint.
IntervalMatrix symmetrize(const IntervalMatrix& a);

struct PositiveDefiniteResult {
  bool verified = false;
  // Lower bound of the smallest Cholesky pivot (meaningful when verified).
  double min_pivot = 0.0;
};

// Interval Cholesky on the symmetrized matrix. verified == true proves every
// symmetric member is positive definite; false only means "not proved".
PositiveDefiniteResult check_positive_definite(const IntervalMatrix& a);
bool is_positive_definite(const IntervalMatrix& a);

}  // namespace hypcert
