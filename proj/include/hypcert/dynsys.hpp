#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hypcert/interval.hpp"
#include "hypcert/linalg.hpp"

namespace hypcert {

// A smooth map f: Rⁿ -> Rⁿ known through point and interval evaluations of
// the map and its derivative. Interval forms must enclose the point forms
// over every member of the argument box.
class MapSystem {
 public:
  virtual ~MapSystem() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;

  virtual Vector eval(const Vector& x) const = 0;
  virtual Matrix jac(const Vector& x) const = 0;
  virtual IntervalVector eval_i(const IntervalVector& box) const = 0;
  virtual IntervalMatrix jac_i(const IntervalVector& box) const = 0;
};

// s(x, y, t) = (0.1x + 0.5cos 2πt, 0.1y + 0.5sin 2πt, 2t). The third
// coordinate is returned unreduced; the cover's periodic dimension does the
// mod 1.
class SmaleMap final : public MapSystem {
 public:
  static constexpr double kContraction = 0.1;
  static constexpr double kRadius = 0.5;

  std::string name() const override { return "smale"; }
  std::size_t dimension() const override { return 3; }
  Vector eval(const Vector& x) const override;
  Matrix jac(const Vector& x) const override;
  IntervalVector eval_i(const IntervalVector& box) const override;
  IntervalMatrix jac_i(const IntervalVector& box) const override;
};

// H(x, y) = (1 + y - a x², b x).
class HenonMap final : public MapSystem {
 public:
  HenonMap(double a, double b) : a_(a), b_(b) {}

  double a() const { return a_; }
  double b() const { return b_; }

  std::string name() const override { return "henon"; }
  std::size_t dimension() const override { return 2; }
  Vector eval(const Vector& x) const override;
  Matrix jac(const Vector& x) const override;
  IntervalVector eval_i(const IntervalVector& box) const override;
  IntervalMatrix jac_i(const IntervalVector& box) const override;

 private:
  double a_;
  double b_;
};

// f(x) = A x + c with exactly representable coefficients.
class AffineMap final : public MapSystem {
 public:
  AffineMap(Matrix a, Vector offset);
  explicit AffineMap(Matrix a);

  std::string name() const override { return "affine"; }
  std::size_t dimension() const override { return static_cast<std::size_t>(a_.rows()); }
  Vector eval(const Vector& x) const override;
  Matrix jac(const Vector& x) const override;
  IntervalVector eval_i(const IntervalVector& box) const override;
  IntervalMatrix jac_i(const IntervalVector& box) const override;

 private:
  Matrix a_;
  Vector offset_;
};

// Point iterate fⁱ(x) and the chain-rule derivative Dfⁱ(x) accumulated
// left to right.
Vector iterate(const MapSystem& f, Vector x, int times);
Matrix iterate_jac(const MapSystem& f, Vector x, int times);

std::unique_ptr<MapSystem> make_system(const std::string& name, const std::vector<double>& params);

}  // namespace hypcert
