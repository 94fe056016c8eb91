#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <magsphere/core.hpp>

namespace magsphere {

enum class Family { TypeI_plus, TypeI_minus, TypeII_plus, TypeII_minus, General, RightAngle };

std::string to_string(Family f);
Family family_from_string(const std::string &s);

/// A relative equilibrium: m1 = p = 0 and the reduced vector field vanishes.
struct EquilibriumRecord {
    Family family = Family::General;
    ReducedState state;
    SystemParams params;
    double H = 0.0;
    double C = 0.0;
    /// Max-norm of vector_field at state.
    double residual = 0.0;
    /// Double root of the defining equations (threshold or discriminant-zero point).
    bool degenerate = false;
    /// Sign of the square root that satisfies the un-squared m3 equation (General records only).
    int branch = 0;
};

EquilibriumRecord make_record(Family f, double q, double m2, double m3, const SystemParams &prm, const Potential &V,
                              bool degenerate = false);

/// Quartic in m3 obtained by squaring, highest degree first.
std::vector<double> quartic_coefficients(double q, const SystemParams &prm, const Potential &V);

/// Radicand A(m3) of the m2 formula; admissible m3 have A >= 0.
double admissibility(double q, double m3, const SystemParams &prm);

/// m2 = tan q (K m3 - B e1 mu2 + sign sqrt(A)) / (2 mu2).
double m2_from_m3(double q, double m3, int sign, const SystemParams &prm);

/// Un-squared m3 equation for the given sign of sqrt(A). Zero at equilibria.
double unsquared_m3_equation(double q, double m3, int sign, const SystemParams &prm, const Potential &V);

/// All relative equilibria at shape q, q != pi/2, found through the quartic.
std::vector<EquilibriumRecord> solve_general(double q, const SystemParams &prm, const Potential &V,
                                             const Tolerances &tol = default_tolerances());

/// One-parameter family m2 m3 = product at q = pi/2.
struct HyperbolaFamily {
    double product = 0.0;
    std::string description;
};

struct RightAngleResult {
    std::vector<EquilibriumRecord> records;
    std::optional<HyperbolaFamily> family;
    double discriminant = 0.0;
};

double right_angle_discriminant(const SystemParams &prm, const Potential &V);

RightAngleResult solve_right_angle(const SystemParams &prm, const Potential &V,
                                   const Tolerances &tol = default_tolerances());

/// Identical particles with V = cot: the (plus, minus) Type I pair.
std::pair<EquilibriumRecord, EquilibriumRecord> type1(double q, double B);

/// Identical particles with V = cot: 0, 1 (degenerate) or 2 Type II records.
std::vector<EquilibriumRecord> type2(double q, double B, double tol = 1e-12);

/// B^2 - 2 csc^2(q/2) csc q; Type II exists where it is nonnegative.
double type2_discriminant(double q, double B);

/// Type II existence threshold 2 sqrt(csc q / (1 - cos q)).
double threshold_B(double q);

/// Casimir along Type I in closed form.
double casimir_on_type1(double q, double B);

} // namespace magsphere
