#pragma once

#include <ostream>
#include <vector>

#include <magsphere/core.hpp>

namespace magsphere {

/// Antisymmetric bracket matrix in (m1, m2, m3, q, p) order.
struct PoissonTensor {
    Mat5 matrix;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ReducedState> states;
    std::vector<double> H;
    std::vector<double> C;
    /// |H - H0| and |C - C0| per sample.
    std::vector<double> dH;
    std::vector<double> dC;

    double max_dH() const;
    double max_dC() const;
};

struct IntegrateOptions {
    /// Rescale the body momentum map back onto the initial Casimir sphere after each step.
    bool project_casimir = false;
    double q_guard = 1e-8;
};

double hamiltonian(const ReducedState &s, const SystemParams &prm, const Potential &V);
double casimir(const ReducedState &s, const SystemParams &prm);

/// Body-frame momentum map (m1, m2 - B e2 sin q, m3 + B(e1 + e2 cos q)); its square norm is the Casimir.
Vec3 body_momentum_map(const ReducedState &s, const SystemParams &prm);

Vec5 grad_hamiltonian(const ReducedState &s, const SystemParams &prm, const Potential &V);
Vec5 grad_casimir(const ReducedState &s, const SystemParams &prm);
Mat5 hessian_hamiltonian(const ReducedState &s, const SystemParams &prm, const Potential &V);
Mat5 hessian_casimir(const ReducedState &s, const SystemParams &prm);

PoissonTensor poisson_tensor(const ReducedState &s, const SystemParams &prm);

/// (dm1, dm2, dm3, dq, dp).
Vec5 vector_field(const ReducedState &s, const SystemParams &prm, const Potential &V);

/// Analytic derivative of vector_field.
Mat5 jacobian(const ReducedState &s, const SystemParams &prm, const Potential &V);

/// Central differences, step 1e-6 scaled by coordinate magnitude. Testing aid.
Vec5 numeric_gradient(const std::function<double(const Vec5 &)> &f, const Vec5 &x, double h = 1e-6);
Mat5 numeric_jacobian(const std::function<Vec5(const Vec5 &)> &f, const Vec5 &x, double h = 1e-6);

/// Classical RK4 with fixed step. Samples at every multiple of dt, including t = 0.
Trajectory integrate(const ReducedState &initial, const SystemParams &prm, const Potential &V, double t_end,
                     double dt, const IntegrateOptions &opt = {});

/// Header t,m1,m2,m3,q,p,H,C with 15 significant digits.
void write_trajectory_csv(std::ostream &os, const Trajectory &traj);

} // namespace magsphere
