#include "hypcert/dynsys.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hypcert {

namespace {

void check_dim(std::size_t got, std::size_t want) {
  if (got != want) throw DimensionError("map argument dimension mismatch");
}

}  // namespace

Vector SmaleMap::eval(const Vector& x) const {
  check_dim(static_cast<std::size_t>(x.size()), 3);
  const double angle = 2.0 * std::numbers::pi * x(2);
  Vector r(3);
  r << kContraction * x(0) + kRadius * std::cos(angle),
      kContraction * x(1) + kRadius * std::sin(angle), 2.0 * x(2);
  return r;
}

Matrix SmaleMap::jac(const Vector& x) const {
  check_dim(static_cast<std::size_t>(x.size()), 3);
  const double angle = 2.0 * std::numbers::pi * x(2);
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = kContraction;
  d(1, 1) = kContraction;
  d(0, 2) = -std::numbers::pi * std::sin(angle);
  d(1, 2) = std::numbers::pi * std::cos(angle);
  d(2, 2) = 2.0;
  return d;
}

IntervalVector SmaleMap::eval_i(const IntervalVector& box) const {
  check_dim(box.size(), 3);
  const Interval angle = Interval(2.0) * pi_interval() * box[2];
  const Interval contraction = enclose_literal(kContraction);
  const Interval radius(kRadius);
  return {contraction * box[0] + radius * cos(angle),
          contraction * box[1] + radius * sin(angle), Interval(2.0) * box[2]};
}

IntervalMatrix SmaleMap::jac_i(const IntervalVector& box) const {
  check_dim(box.size(), 3);
  const Interval pi = pi_interval();
  const Interval angle = Interval(2.0) * pi * box[2];
  IntervalMatrix d(3, 3);
  d(0, 0) = enclose_literal(kContraction);
  d(1, 1) = enclose_literal(kContraction);
  d(0, 2) = -(pi * sin(angle));
  d(1, 2) = pi * cos(angle);
  d(2, 2) = Interval(2.0);
  return d;
}

Vector HenonMap::eval(const Vector& x) const {
  check_dim(static_cast<std::size_t>(x.size()), 2);
  Vector r(2);
  r << 1.0 + x(1) - a_ * x(0) * x(0), b_ * x(0);
  return r;
}

Matrix HenonMap::jac(const Vector& x) const {
  check_dim(static_cast<std::size_t>(x.size()), 2);
  Matrix d(2, 2);
  d << -2.0 * a_ * x(0), 1.0, b_, 0.0;
  return d;
}

IntervalVector HenonMap::eval_i(const IntervalVector& box) const {
  check_dim(box.size(), 2);
  return {Interval(1.0) + box[1] - enclose_literal(a_) * sqr(box[0]),
          enclose_literal(b_) * box[0]};
}

IntervalMatrix HenonMap::jac_i(const IntervalVector& box) const {
  check_dim(box.size(), 2);
  IntervalMatrix d(2, 2);
  d(0, 0) = Interval(-2.0) * enclose_literal(a_) * box[0];
  d(0, 1) = Interval(1.0);
  d(1, 0) = enclose_literal(b_);
  d(1, 1) = Interval(0.0);
  return d;
}

AffineMap::AffineMap(Matrix a, Vector offset) : a_(std::move(a)), offset_(std::move(offset)) {
  if (a_.rows() != a_.cols() || offset_.size() != a_.rows()) {
    throw DimensionError("affine map needs a square matrix and matching offset");
  }
}

AffineMap::AffineMap(Matrix a) : AffineMap(a, Vector::Zero(a.rows())) {}

Vector AffineMap::eval(const Vector& x) const { return a_ * x + offset_; }

Matrix AffineMap::jac(const Vector& x) const {
  check_dim(static_cast<std::size_t>(x.size()), dimension());
  return a_;
}

IntervalVector AffineMap::eval_i(const IntervalVector& box) const {
  return mat_vec(to_interval(a_), box) + to_interval(offset_);
}

IntervalMatrix AffineMap::jac_i(const IntervalVector& box) const {
  check_dim(box.size(), dimension());
  return to_interval(a_);
}

Vector iterate(const MapSystem& f, Vector x, int times) {
  for (int i = 0; i < times; ++i) x = f.eval(x);
  return x;
}

Matrix iterate_jac(const MapSystem& f, Vector x, int times) {
  const auto n = static_cast<Eigen::Index>(f.dimension());
  Matrix d = Matrix::Identity(n, n);
  for (int i = 0; i < times; ++i) {
    d = f.jac(x) * d;
    x = f.eval(x);
  }
  return d;
}

std::unique_ptr<MapSystem> make_system(const std::string& name, const std::vector<double>& params) {
  if (name == "smale") {
    if (!params.empty()) throw std::invalid_argument("smale takes no parameters");
    return std::make_unique<SmaleMap>();
  }
  if (name == "henon") {
    if (params.size() != 2) throw std::invalid_argument("henon takes parameters a, b");
    return std::make_unique<HenonMap>(params[0], params[1]);
  }
  throw std::invalid_argument("unknown system: " + name);
}

}  // namespace hypcert
