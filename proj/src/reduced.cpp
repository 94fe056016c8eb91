#include <magsphere/errors.hpp>
#include <magsphere/reduced.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace magsphere {

double Trajectory::max_dH() const
{
    return dH.empty() ? 0.0 : *std::max_element(dH.begin(), dH.end());
}

double Trajectory::max_dC() const
{
    return dC.empty() ? 0.0 : *std::max_element(dC.begin(), dC.end());
}

double hamiltonian(const ReducedState &s, const SystemParams &prm, const Potential &V)
{
    const double mu1 = prm.mu1;
    const double mu2 = prm.mu2;
    const double k = cot(s.q);
    const double w = csc(s.q);
    const double dm = s.m1 - s.p;
    const double kin = mu2 * (dm * dm + s.m2 * s.m2) + s.m3 * (-2.0 * mu2 * s.m2 * k + mu1 * s.m3 * w * w + mu2 * s.m3 * k * k);
    return kin / (2.0 * mu1 * mu2) + s.p * s.p / (2.0 * mu2) + V.value(s.q);
}

Vec3 body_momentum_map(const ReducedState &s, const SystemParams &prm)
{
    const double B = prm.B;
    return Vec3(s.m1, s.m2 - B * prm.e2 * std::sin(s.q), s.m3 + B * (prm.e1 + prm.e2 * std::cos(s.q)));
}

double casimir(const ReducedState &s, const SystemParams &prm)
{
    return body_momentum_map(s, prm).squaredNorm();
}

Vec5 grad_hamiltonian(const ReducedState &s, const SystemParams &prm, const Potential &V)
{
    const double mu1 = prm.mu1;
    const double mu2 = prm.mu2;
    const double k = cot(s.q);
    const double w2 = csc(s.q) * csc(s.q);
    Vec5 g;
    g[M1] = (s.m1 - s.p) / mu1;
    g[M2] = (s.m2 - s.m3 * k) / mu1;
    g[M3] = -s.m2 * k / mu1 + s.m3 * w2 / mu2 + s.m3 * k * k / mu1;
    g[Q] = s.m3 * w2 * (mu2 * s.m2 - (mu1 + mu2) * s.m3 * k) / (mu1 * mu2) + V.derivative(s.q);
    g[P] = -(s.m1 - s.p) / mu1 + s.p / mu2;
    return g;
}

Vec5 grad_casimir(const ReducedState &s, const SystemParams &prm)
{
    const double Be2 = prm.B * prm.e2;
    const double sq = std::sin(s.q);
    const double cq = std::cos(s.q);
    const double u2 = s.m2 - Be2 * sq;
    const double u3 = s.m3 + prm.B * (prm.e1 + prm.e2 * cq);
    Vec5 g;
    g[M1] = 2.0 * s.m1;
    g[M2] = 2.0 * u2;
    g[M3] = 2.0 * u3;
    g[Q] = -2.0 * u2 * Be2 * cq - 2.0 * u3 * Be2 * sq;
    g[P] = 0.0;
    return g;
}

Mat5 hessian_hamiltonian(const ReducedState &s, const SystemParams &prm, const Potential &V)
{
    const double mu1 = prm.mu1;
    const double mu2 = prm.mu2;
    const double k = cot(s.q);
    const double w2 = csc(s.q) * csc(s.q);
    Mat5 h = Mat5::Zero();
    h(M1, M1) = 1.0 / mu1;
    h(M1, P) = h(P, M1) = -1.0 / mu1;
    h(P, P) = 1.0 / mu1 + 1.0 / mu2;
    h(M2, M2) = 1.0 / mu1;
    h(M2, M3) = h(M3, M2) = -k / mu1;
    h(M2, Q) = h(Q, M2) = s.m3 * w2 / mu1;
    h(M3, M3) = k * k / mu1 + w2 / mu2;
    h(M3, Q) = h(Q, M3) = s.m2 * w2 / mu1 - 2.0 * s.m3 * w2 * k / mu2 - 2.0 * s.m3 * k * w2 / mu1;
    h(Q, Q) = s.m3 * ((-2.0 * w2 * k) * (mu2 * s.m2 - (mu1 + mu2) * s.m3 * k) + w2 * (mu1 + mu2) * s.m3 * w2) / (mu1 * mu2) +
              V.d2(s.q);
    return h;
}

Mat5 hessian_casimir(const ReducedState &s, const SystemParams &prm)
{
    const double B = prm.B;
    const double Be2 = B * prm.e2;
    const double sq = std::sin(s.q);
    const double cq = std::cos(s.q);
    Mat5 h = Mat5::Zero();
    h(M1, M1) = h(M2, M2) = h(M3, M3) = 2.0;
    h(M2, Q) = h(Q, M2) = -2.0 * Be2 * cq;
    h(M3, Q) = h(Q, M3) = -2.0 * Be2 * sq;
    h(Q, Q) = 2.0 * Be2 * Be2 + 2.0 * Be2 * sq * (s.m2 - Be2 * sq) - 2.0 * Be2 * cq * (s.m3 + B * (prm.e1 + prm.e2 * cq));
    return h;
}

PoissonTensor poisson_tensor(const ReducedState &s, const SystemParams &prm)
{
    const double B = prm.B;
    const double sq = std::sin(s.q);
    const double cq = std::cos(s.q);
    Mat5 J = Mat5::Zero();
    J(M1, M2) = -s.m3 - B * (prm.e1 + prm.e2 * cq);
    J(M1, M3) = s.m2 - B * prm.e2 * sq;
    J(M2, M3) = -s.m1;
    J(M2, P) = B * prm.e2 * cq;
    J(M3, P) = B * prm.e2 * sq;
    J(Q, P) = 1.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < i; ++j) {
            J(i, j) = -J(j, i);
        }
    }
    return PoissonTensor{J};
}

Vec5 vector_field(const ReducedState &s, const SystemParams &prm, const Potential &V)
{
    const double mu1 = prm.mu1;
    const double mu2 = prm.mu2;
    const double B = prm.B;
    const double e1 = prm.e1;
    const double e2 = prm.e2;
    const double m1 = s.m1, m2 = s.m2, m3 = s.m3, q = s.q, p = s.p;
    const double k = cot(q);
    const double w = csc(q);
    const double mu = mu1 * mu2;

    Vec5 f;
    f[M1] = -(mu2 * (m2 - m3 * k) * (B * e1 + m2 * k + m3) + B * e2 * mu1 * m3 * w - mu1 * m2 * m3 * w * w) / mu;
    f[M2] = (mu2 * (m1 - p) * (B * e1 + m3) + B * e2 * mu1 * p * std::cos(q) + mu2 * m1 * k * (m2 - m3 * k) -
             mu1 * m1 * m3 * w * w) /
            mu;
    f[M3] = (mu1 * B * e2 * p * std::sin(q) + mu2 * (m2 * p - m1 * m3 * k)) / mu;
    f[Q] = (p * (mu1 + mu2) - mu2 * m1) / mu;
    f[P] = -(m3 * w * (B * e2 * mu1 + w * (mu2 * m2 - m3 * (mu1 + mu2) * k)) + mu * V.derivative(q)) / mu;
    return f;
}

Mat5 jacobian(const ReducedState &s, const SystemParams &prm, const Potential &V)
{
    const double mu1 = prm.mu1;
    const double mu2 = prm.mu2;
    const double Be1 = prm.B * prm.e1;
    const double Be2 = prm.B * prm.e2;
    const double m1 = s.m1, m2 = s.m2, m3 = s.m3, q = s.q, p = s.p;
    const double k = cot(q);
    const double w = csc(q);
    const double w2 = w * w;
    const double sq = std::sin(q);
    const double cq = std::cos(q);
    const double mu = mu1 * mu2;
    const double X = m2 - m3 * k;
    const double Y = Be1 + m2 * k + m3;

    Mat5 J = Mat5::Zero();

    J(M1, M2) = -(mu2 * (Y + X * k) - mu1 * m3 * w2) / mu;
    J(M1, M3) = -(mu2 * (-k * Y + X) + Be2 * mu1 * w - mu1 * m2 * w2) / mu;
    J(M1, Q) = -(mu2 * w2 * (m3 * Y - m2 * X) - Be2 * mu1 * m3 * w * k + 2.0 * mu1 * m2 * m3 * w2 * k) / mu;

    J(M2, M1) = (mu2 * (Be1 + m3) + mu2 * k * X - mu1 * m3 * w2) / mu;
    J(M2, M2) = mu2 * m1 * k / mu;
    J(M2, M3) = (mu2 * (m1 - p) - mu2 * m1 * k * k - mu1 * m1 * w2) / mu;
    J(M2, Q) = (-Be2 * mu1 * p * sq + mu2 * m1 * w2 * (m3 * k - X) + 2.0 * mu1 * m1 * m3 * w2 * k) / mu;
    J(M2, P) = (-mu2 * (Be1 + m3) + Be2 * mu1 * cq) / mu;

    J(M3, M1) = -mu2 * m3 * k / mu;
    J(M3, M2) = mu2 * p / mu;
    J(M3, M3) = -mu2 * m1 * k / mu;
    J(M3, Q) = (mu1 * Be2 * p * cq + mu2 * m1 * m3 * w2) / mu;
    J(M3, P) = (mu1 * Be2 * sq + mu2 * m2) / mu;

    J(Q, M1) = -mu2 / mu;
    J(Q, P) = (mu1 + mu2) / mu;

    J(P, M2) = -m3 * w2 * mu2 / mu;
    J(P, M3) = -(w * Be2 * mu1 + w2 * mu2 * m2 - 2.0 * m3 * w2 * (mu1 + mu2) * k) / mu;
    J(P, Q) = -(-Be2 * mu1 * m3 * w * k - 2.0 * mu2 * m2 * m3 * w2 * k + m3 * m3 * (mu1 + mu2) * (2.0 * w2 * k * k + w2 * w2) +
                mu * V.d2(q)) /
              mu;
    return J;
}

Vec5 numeric_gradient(const std::function<double(const Vec5 &)> &f, const Vec5 &x, double h)
{
    Vec5 g;
    for (int i = 0; i < 5; ++i) {
        const double step = h * std::max(1.0, std::abs(x[i]));
        Vec5 a = x;
        Vec5 b = x;
        a[i] += step;
        b[i] -= step;
        g[i] = (f(a) - f(b)) / (2.0 * step);
    }
    return g;
}

Mat5 numeric_jacobian(const std::function<Vec5(const Vec5 &)> &f, const Vec5 &x, double h)
{
    Mat5 J;
    for (int i = 0; i < 5; ++i) {
        const double step = h * std::max(1.0, std::abs(x[i]));
        Vec5 a = x;
        Vec5 b = x;
        a[i] += step;
        b[i] -= step;
        J.col(i) = (f(a) - f(b)) / (2.0 * step);
    }
    return J;
}

namespace {

void check_finite(const Vec5 &x, double t)
{
    if (!x.allFinite()) {
        std::ostringstream os;
        os << "non-finite reduced state at t = " << t;
        throw NonFiniteState(os.str());
    }
}

void project_onto_casimir(Vec5 &x, const SystemParams &prm, double C0)
{
    if (!(C0 > 0.0)) {
        return;
    }
    ReducedState s = ReducedState::from_vec(x);
    Vec3 u = body_momentum_map(s, prm);
    const double n = u.norm();
    if (n == 0.0) {
        return;
    }
    u *= std::sqrt(C0) / n;
    x[M1] = u[0];
    x[M2] = u[1] + prm.B * prm.e2 * std::sin(s.q);
    x[M3] = u[2] - prm.B * (prm.e1 + prm.e2 * std::cos(s.q));
}

} // namespace

Trajectory integrate(const ReducedState &initial, const SystemParams &prm, const Potential &V, double t_end, double dt,
                     const IntegrateOptions &opt)
{
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw InvalidParams("integrate requires dt > 0 and t_end > 0");
    }
    check_q(initial.q, opt.q_guard);

    const auto rhs = [&](const Vec5 &x) {
        const ReducedState s = ReducedState::from_vec(x);
        check_q(s.q, opt.q_guard);
        return vector_field(s, prm, V);
    };

    const long steps = std::max(1L, std::lround(t_end / dt));
    Trajectory tr;
    tr.times.reserve(steps + 1);
    tr.states.reserve(steps + 1);

    Vec5 x = initial.vec();
    const double H0 = hamiltonian(initial, prm, V);
    const double C0 = casimir(initial, prm);

    auto record = [&](double t) {
        const ReducedState s = ReducedState::from_vec(x);
        const double H = hamiltonian(s, prm, V);
        const double C = casimir(s, prm);
        tr.times.push_back(t);
        tr.states.push_back(s);
        tr.H.push_back(H);
        tr.C.push_back(C);
        tr.dH.push_back(std::abs(H - H0));
        tr.dC.push_back(std::abs(C - C0));
    };
    record(0.0);

    for (long n = 1; n <= steps; ++n) {
        const Vec5 k1 = rhs(x);
        const Vec5 k2 = rhs(x + 0.5 * dt * k1);
        const Vec5 k3 = rhs(x + 0.5 * dt * k2);
        const Vec5 k4 = rhs(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double t = n * dt;
        check_finite(x, t);
        check_q(x[Q], opt.q_guard);
        if (opt.project_casimir) {
            project_onto_casimir(x, prm, C0);
        }
        record(t);
    }
    return tr;
}

void write_trajectory_csv(std::ostream &os, const Trajectory &traj)
{
    os << "t,m1,m2,m3,q,p,H,C\n";
    os << std::setprecision(15);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto &s = traj.states[i];
        os << traj.times[i] << ',' << s.m1 << ',' << s.m2 << ',' << s.m3 << ',' << s.q << ',' << s.p << ',' << traj.H[i]
           << ',' << traj.C[i] << '\n';
    }
}

} // namespace magsphere
