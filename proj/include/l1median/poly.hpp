#pragma once

#include <vector>

namespace l1m {

/// Real roots of a*t^2 + b*t + c = 0 in ascending order. Degenerates to the
/// linear case when a is negligible. Discriminants in [-1e-12, 0] (relative to
/// the coefficient scale) are clamped to 0 and give one double root.
std::vector<double> solve_quadratic(double a, double b, double c);

/// Real roots of c[0] + c[1] t + ... + c[k] t^k in ascending order, from the
/// companion-matrix eigenvalues polished by Newton steps. Leading
/// coefficients below 1e-13 of the largest are dropped. Roots whose
/// imaginary part exceeds 1e-7 (relative) are discarded.
std::vector<double> real_roots(std::vector<double> c);

}  // namespace l1m
