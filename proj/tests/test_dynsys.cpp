#include <cmath>
#include <random>

#include "doctest.h"
#include "hypcert/dynsys.hpp"

using namespace hypcert;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Samples the box and checks point forms against interval forms.
void check_enclosure(const MapSystem& f, const IntervalVector& box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const IntervalVector fy = f.eval_i(box);
  const IntervalMatrix dj = f.jac_i(box);
  for (int t = 0; t < 200; ++t) {
    Vector x(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) {
      x(static_cast<Eigen::Index>(i)) = box[i].lo() + u(rng) * (box[i].hi() - box[i].lo());
    }
    const Vector y = f.eval(x);
    const Matrix j = f.jac(x);
    for (std::size_t i = 0; i < box.size(); ++i) {
      CHECK(fy[i].contains(y(static_cast<Eigen::Index>(i))));
      for (std::size_t k = 0; k < box.size(); ++k) {
        CHECK(dj(i, k).contains(j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))));
      }
    }
  }
}

}  // namespace

TEST_CASE("solenoid map values") {
  const SmaleMap s;
  const Vector y = s.eval(vec({0.0, 0.0, 0.0}));
  CHECK(y(0) == doctest::Approx(0.5));
  CHECK(y(1) == doctest::Approx(0.0));
  CHECK(y(2) == 0.0);
  const Vector z = s.eval(vec({1.0, -1.0, 0.25}));
  CHECK(z(0) == doctest::Approx(0.1));
  CHECK(z(1) == doctest::Approx(0.4));
  CHECK(z(2) == 0.5);
  const Matrix j = s.jac(vec({0.3, 0.2, 0.0}));
  CHECK(j(0, 0) == doctest::Approx(0.1));
  CHECK(j(1, 1) == doctest::Approx(0.1));
  CHECK(j(2, 2) == 2.0);
  CHECK(j(0, 2) == doctest::Approx(0.0));
  CHECK(j(1, 2) == doctest::Approx(M_PI));
  // fixed point
  const Vector p = s.eval(vec({5.0 / 9.0, 0.0, 0.0}));
  CHECK(p(0) == doctest::Approx(5.0 / 9.0));
}

TEST_CASE("Henon map values") {
  const HenonMap h(5.4, -1.0);
  const Vector y = h.eval(vec({1.0, 2.0}));
  CHECK(y(0) == doctest::Approx(1.0 + 2.0 - 5.4));
  CHECK(y(1) == doctest::Approx(-1.0));
  const Matrix j = h.jac(vec({1.0, 2.0}));
  CHECK(j(0, 0) == doctest::Approx(-10.8));
  CHECK(j(0, 1) == 1.0);
  CHECK(j(1, 0) == -1.0);
  CHECK(j(1, 1) == 0.0);
}

TEST_CASE("interval forms enclose point forms") {
  const SmaleMap s;
  check_enclosure(s, IntervalVector{Interval(-0.3, 0.2), Interval(0.1, 0.4), Interval(0.2, 0.7)}, 1);
  check_enclosure(s, IntervalVector{Interval(-1, 1), Interval(-1, 1), Interval(-3, 3)}, 2);
  const HenonMap h(5.4, -1.0);
  check_enclosure(h, IntervalVector{Interval(-0.7, 0.3), Interval(-2, -1.5)}, 3);
  Matrix a(2, 2);
  a << 2, 1, 0, 0.5;
  const AffineMap aff(a, vec({0.25, -1.0}));
  check_enclosure(aff, IntervalVector{Interval(-1, 1), Interval(0, 2)}, 4);
}

TEST_CASE("iterates and chain rule") {
  const HenonMap h(1.4, 0.3);
  const Vector x = vec({0.1, 0.2});
  const Vector x3 = iterate(h, x, 3);
  CHECK((x3 - h.eval(h.eval(h.eval(x)))).norm() == 0.0);
  const Matrix d = iterate_jac(h, x, 3);
  const Matrix expect = h.jac(h.eval(h.eval(x))) * h.jac(h.eval(x)) * h.jac(x);
  CHECK((d - expect).norm() < 1e-12);
  // finite differences
  const double eps = 1e-6;
  for (int k = 0; k < 2; ++k) {
    Vector e = Vector::Zero(2);
    e(k) = eps;
    const Vector fd = (iterate(h, x + e, 3) - iterate(h, x - e, 3)) / (2 * eps);
    CHECK((fd - d.col(k)).norm() < 1e-5);
  }
  CHECK(iterate(h, x, 0) == x);
}

TEST_CASE("system factory") {
  CHECK(make_system("smale", {})->dimension() == 3);
  CHECK(make_system("henon", {5.4, -1})->dimension() == 2);
  CHECK_THROWS_AS(make_system("smale", {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_system("henon", {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_system("lorenz", {}), std::invalid_argument);
}
