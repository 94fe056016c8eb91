#pragma once

#include <ostream>
#include <vector>

#include <magsphere/core.hpp>

namespace magsphere {

/// Positions and momenta of both particles in ambient space.
struct FullState {
    Vec3 q1 = Vec3(0, 0, -1);
    Vec3 q2 = Vec3(0, 1, 0);
    Vec3 p1 = Vec3::Zero();
    Vec3 p2 = Vec3::Zero();

    /// Throws DegenerateConfiguration / InvalidParams when the constraints fail by more than tol.
    void validate(double tol = 1e-10) const;
    double distance() const;
};

struct FullDerivative {
    Vec3 dq1, dq2, dp1, dp2;
};

struct MomentumValue {
    Vec3 phi;
};

struct FullTrajectory {
    std::vector<double> times;
    std::vector<FullState> states;
    std::vector<Vec3> phi;
    /// |phi(t) - phi(0)| per sample.
    std::vector<double> dphi;

    double max_dphi() const;
};

MomentumValue momentum_map(const FullState &s, const SystemParams &prm);

/// Lorentz force e B (v x q), central force along the tangent great circle, and constraint forces.
FullDerivative full_vector_field(const FullState &s, const SystemParams &prm, const Potential &V);

/// RK4 with per-step projection onto the sphere and tangent planes.
FullTrajectory full_integrate(const FullState &initial, const SystemParams &prm, const Potential &V, double t_end,
                              double dt, double q_guard = 1e-8);

/// Body frame g with g x1 = q1 and g x2 = q2 for the reference placement.
Mat3 body_frame(const FullState &s);

ReducedState reduce_state(const FullState &s, const SystemParams &prm);

/// Reference placement of a reduced state, rotated by g.
FullState lift(const ReducedState &s, const SystemParams &prm, const Mat3 &g = Mat3::Identity());

/// Rotation matrix in the (theta, phi, psi) Euler-angle form.
Mat3 euler_matrix(double theta, double phi, double psi);
/// Inverse of euler_matrix; theta in [0, pi].
Vec3 euler_angles(const Mat3 &g);

/// Rigid rotation of a relative equilibrium.
struct Reconstruction {
    FullState state;
    /// Angular velocity of the rigid rotation in the space frame.
    Vec3 omega;
    Vec3 phi;
    double angular_speed = 0.0;
    /// Cosines of the angles between each particle and the axis oriented as -omega.
    double cos_theta1 = 0.0;
    double cos_theta2 = 0.0;
};

Reconstruction reconstruct(const ReducedState &s, const SystemParams &prm, const Mat3 &g = Mat3::Identity());

void write_full_trajectory_csv(std::ostream &os, const FullTrajectory &traj);

/// One particle of mass mu and charge e on the sphere.
struct SingleParticleState {
    Vec3 q;
    Vec3 p;
};

struct CircleFit {
    Vec3 normal;
    /// Distance of the orbit plane from the origin.
    double offset = 0.0;
    double radius_sq = 0.0;
    /// Largest |n.x - offset| over the samples.
    double planarity = 0.0;
};

std::vector<SingleParticleState> single_particle_integrate(const SingleParticleState &initial, double mu, double e,
                                                           double B, double t_end, double dt);

/// Plane through the samples by smallest-eigenvector fit; radius squared is 1 - offset^2.
CircleFit fit_circle(const std::vector<Vec3> &points);

/// mu^2 |v|^2 / (B^2 e^2 + mu^2 |v|^2).
double one_particle_radius_sq(double mu, double e, double B, double speed);
/// 1 - e^2 B^2 / (mu^2 omega^2), omega the rate around the orbit axis.
double one_particle_radius_sq_from_rate(double mu, double e, double B, double omega);

} // namespace magsphere
