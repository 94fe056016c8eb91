#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace magsphere {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Index of each reduced coordinate inside a Vec5.
enum Coord : int { M1 = 0, M2 = 1, M3 = 2, Q = 3, P = 4 };

/// Masses, charges and field strength.
struct SystemParams {
    double mu1 = 1.0;
    double mu2 = 1.0;
    double e1 = 1.0;
    double e2 = 1.0;
    double B = 0.0;

    /// Throws InvalidParams if a mass is not positive or a charge vanishes.
    void validate() const;

    /// Two identical unit particles.
    static SystemParams identical(double B);

    bool operator==(const SystemParams &) const = default;
};

/// Reduced coordinates (m1, m2, m3, q, p).
struct ReducedState {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double q = 0.0;
    double p = 0.0;

    Vec5 vec() const;
    static ReducedState from_vec(const Vec5 &v);
};

/// Inter-particle potential V(q) with its first two derivatives.
struct Potential {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    /// Optional; a central difference of derivative is used when empty.
    std::function<double(double)> second_derivative;

    double d2(double q) const;
};

struct BodyFrameVelocity {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double omega3 = 0.0;
    double qdot = 0.0;
};

/// Numerical policy shared by every module.
struct Tolerances {
    double residual = 1e-10;
    double eigen = 1e-8;
    double classify = 1e-10;
    double record_residual = 1e-9;
    double q_guard = 1e-8;
    double branch = 1e-7;
    double admissible = 1e-12;
    double degenerate = 1e-12;
    double right_angle = 1e-6;
    double hessian_det = 1e-10;
    bool operator==(const Tolerances &) const = default;
};

const Tolerances &default_tolerances();

/// V(q) = e1 e2 cot q.
Potential cot_potential(const SystemParams &params);

/// Rejects q outside [eps, pi - eps].
void check_q(double q, double eps = 1e-8);
bool q_in_domain(double q, double eps = 1e-8);

BodyFrameVelocity reduced_to_body_velocity(const ReducedState &state, const SystemParams &params);

/// Legendre map (omega, qdot) -> (m, p) at shape q.
ReducedState body_velocity_to_reduced(const BodyFrameVelocity &w, double q, const SystemParams &params);

inline double cot(double x) { return std::cos(x) / std::sin(x); }
inline double csc(double x) { return 1.0 / std::sin(x); }
inline double sec(double x) { return 1.0 / std::cos(x); }

constexpr double pi = 3.14159265358979323846;

} // namespace magsphere
