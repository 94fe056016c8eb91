#pragma once

#include <array>
#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <magsphere/core.hpp>
#include <magsphere/equilibria.hpp>

namespace magsphere {

enum class Stability { LinearlyStable, LinearlyUnstable, Degenerate };

std::string to_string(Stability s);

struct Signature {
    int n_plus = 0;
    int n_minus = 0;
    int n_zero = 0;

    bool operator==(const Signature &) const = default;
};

struct LinearizationReport {
    Mat5 jacobian;
    /// det(xI - J), highest degree first (6 entries, leading 1).
    std::array<double, 6> char_poly{};
    /// The quartic factor equals -(-x^4 + a x^2 + b) up to the odd terms, which vanish for Hamiltonian spectra.
    double a = 0.0;
    double b = 0.0;
    std::array<std::complex<double>, 5> eigenvalues{};
    Stability classification = Stability::Degenerate;
    Signature hessian_signature;
};

/// Characteristic polynomial det(xI - M) through sums of principal minors.
std::array<double, 6> characteristic_polynomial(const Mat5 &M);

LinearizationReport linearize(const EquilibriumRecord &record, const Potential &V,
                              const Tolerances &tol = default_tolerances());

/// Stable iff a < -tol, a^2 + 4b > tol and b < -tol; Degenerate if any of the three is within tol of zero.
Stability classify(double a, double b, double tol = 1e-10);

/// Linear stability boundary of Type I in the (q, B) plane, defined for q in (0, pi/2].
double type1_boundary(double q);

/// Class of the degenerate Type II point on the threshold curve, by the sign of 1 + 2 cos q0.
Stability threshold_stability(double q0, double tol = 1e-10);

/// Signature of the second variation of H on the Casimir level set through the record.
/// Uses Hess(H - lambda C) on grad(C)^perp with lambda the Lagrange multiplier.
Signature hessian_signature(const EquilibriumRecord &record, const Potential &V,
                            const Tolerances &tol = default_tolerances());

/// Restricted 4x4 matrix in an orthonormal basis of grad(C)^perp.
Eigen::Matrix4d restricted_hessian(const EquilibriumRecord &record, const Potential &V);

struct StabilityRow {
    double q = 0.0;
    double B = 0.0;
    Family family = Family::General;
    double a = 0.0;
    double b = 0.0;
    Stability cls = Stability::Degenerate;
    Signature sig;
};

StabilityRow stability_row(const EquilibriumRecord &record, const Potential &V);

/// Header q,B,family,a,b,class,n_plus,n_minus,n_zero.
void write_stability_csv(std::ostream &os, const std::vector<StabilityRow> &rows);

} // namespace magsphere
