#pragma once

#include <complex>
#include <vector>

namespace magsphere {

/// Coefficients are ordered from the highest degree down: c[0] x^n + ... + c[n].
double polyval(const std::vector<double> &c, double x);
double polyder_val(const std::vector<double> &c, double x);

/// All complex roots via eigenvalues of the companion matrix of the rescaled polynomial.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double> &c);

struct RealRoot {
    double value = 0.0;
    /// Set when two numerically coincident roots were merged into this one.
    bool double_root = false;
};

/// Roots with |Im| <= imag_tol * max(1, |root|), Newton-polished, sorted, near-coincident ones merged.
std::vector<RealRoot> real_roots(const std::vector<double> &c, double imag_tol = 1e-6, double merge_tol = 1e-7);

} // namespace magsphere
