#pragma once

#include <Eigen/Dense>

#include "hypcert/interval.hpp"

namespace hypcert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

IntervalMatrix to_interval(const Matrix& m);
IntervalVector to_interval(const Vector& v);
Matrix mid(const IntervalMatrix& m);
Vector to_vector(const std::vector<double>& v);
std::vector<double> to_std(const Vector& v);

// Rigorous enclosure of C⁻¹: approximate inverse B, residual R = I - B C in
// interval arithmetic, and the Neumann bound ‖R‖∞ < 1. Throws IntervalError
// ("inverse not verifiable") when the bound fails.
IntervalMatrix verified_inverse(const Matrix& c);

// Enclosure of {x : A x = b, A ∈ a, b ∈ rhs} by interval Gaussian elimination
// on the midpoint-preconditioned system. Throws IntervalError when a pivot
// contains zero.
IntervalVector interval_solve(const IntervalMatrix& a, const IntervalVector& rhs);

// Upper bound of the spectral norm via the Frobenius norm of magnitudes.
double norm_upper(const IntervalMatrix& m);
double norm_upper(const Matrix& m);

}  // namespace hypcert
