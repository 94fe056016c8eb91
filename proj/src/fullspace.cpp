#include <magsphere/errors.hpp>
#include <magsphere/fullspace.hpp>
#include <magsphere/reduced.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace magsphere {

void FullState::validate(double tol) const
{
    if (std::abs(q1.norm() - 1.0) > tol || std::abs(q2.norm() - 1.0) > tol) {
        throw InvalidParams("positions must lie on the unit sphere");
    }
    if (std::abs(q1.dot(p1)) > tol || std::abs(q2.dot(p2)) > tol) {
        throw InvalidParams("momenta must be tangent to the sphere");
    }
    if (q1.cross(q2).norm() < tol) {
        throw DegenerateConfiguration("particles coincide or are antipodal");
    }
}

double FullState::distance() const
{
    return std::atan2(q1.cross(q2).norm(), q1.dot(q2));
}

double FullTrajectory::max_dphi() const
{
    return dphi.empty() ? 0.0 : *std::max_element(dphi.begin(), dphi.end());
}

MomentumValue momentum_map(const FullState &s, const SystemParams &prm)
{
    return MomentumValue{-prm.B * (prm.e1 * s.q1 + prm.e2 * s.q2) + s.q1.cross(s.p1) + s.q2.cross(s.p2)};
}

FullDerivative full_vector_field(const FullState &s, const SystemParams &prm, const Potential &V)
{
    const Vec3 v1 = s.p1 / prm.mu1;
    const Vec3 v2 = s.p2 / prm.mu2;
    const double c = std::clamp(s.q1.dot(s.q2), -1.0, 1.0);
    const double q = s.distance();
    const double sn = std::sin(q);
    const double dV = V.derivative(q);

    const Vec3 f1 = dV * (s.q2 - c * s.q1) / sn;
    const Vec3 f2 = dV * (s.q1 - c * s.q2) / sn;

    FullDerivative d;
    d.dq1 = v1;
    d.dq2 = v2;
    d.dp1 = prm.e1 * prm.B * v1.cross(s.q1) + f1 - (s.p1.squaredNorm() / prm.mu1) * s.q1;
    d.dp2 = prm.e2 * prm.B * v2.cross(s.q2) + f2 - (s.p2.squaredNorm() / prm.mu2) * s.q2;
    return d;
}

namespace {

using Vec12 = Eigen::Matrix<double, 12, 1>;

Vec12 pack(const FullState &s)
{
    Vec12 x;
    x << s.q1, s.q2, s.p1, s.p2;
    return x;
}

FullState unpack(const Vec12 &x)
{
    FullState s;
    s.q1 = x.segment<3>(0);
    s.q2 = x.segment<3>(3);
    s.p1 = x.segment<3>(6);
    s.p2 = x.segment<3>(9);
    return s;
}

Vec12 pack(const FullDerivative &d)
{
    Vec12 x;
    x << d.dq1, d.dq2, d.dp1, d.dp2;
    return x;
}

void project(FullState &s)
{
    s.q1.normalize();
    s.q2.normalize();
    s.p1 -= s.p1.dot(s.q1) * s.q1;
    s.p2 -= s.p2.dot(s.q2) * s.q2;
}

void guard(const FullState &s, double eps, double t)
{
    const double q = s.distance();
    if (!std::isfinite(q) || q < eps || q > pi - eps) {
        std::ostringstream os;
        os << "geodesic distance " << q << " left the admissible range at t = " << t;
        throw CollisionApproach(os.str());
    }
}

} // namespace

FullTrajectory full_integrate(const FullState &initial, const SystemParams &prm, const Potential &V, double t_end,
                              double dt, double q_guard)
{
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw InvalidParams("full_integrate requires dt > 0 and t_end > 0");
    }
    guard(initial, q_guard, 0.0);

    const auto rhs = [&](const Vec12 &x) { return pack(full_vector_field(unpack(x), prm, V)); };
    const long steps = std::max(1L, std::lround(t_end / dt));

    FullTrajectory tr;
    FullState s = initial;
    const Vec3 phi0 = momentum_map(s, prm).phi;
    auto record = [&](double t) {
        const Vec3 phi = momentum_map(s, prm).phi;
        tr.times.push_back(t);
        tr.states.push_back(s);
        tr.phi.push_back(phi);
        tr.dphi.push_back((phi - phi0).norm());
    };
    record(0.0);

    for (long n = 1; n <= steps; ++n) {
        const Vec12 x = pack(s);
        const Vec12 k1 = rhs(x);
        const Vec12 k2 = rhs(x + 0.5 * dt * k1);
        const Vec12 k3 = rhs(x + 0.5 * dt * k2);
        const Vec12 k4 = rhs(x + dt * k3);
        const Vec12 y = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double t = n * dt;
        if (!y.allFinite()) {
            std::ostringstream os;
            os << "non-finite full state at t = " << t;
            throw NonFiniteState(os.str());
        }
        s = unpack(y);
        project(s);
        guard(s, q_guard, t);
        record(t);
    }
    return tr;
}

Mat3 body_frame(const FullState &s)
{
    const double c = s.q1.dot(s.q2);
    const Vec3 perp = s.q2 - c * s.q1;
    const double n = perp.norm();
    if (n < 1e-12) {
        throw DegenerateConfiguration("q1 = +-q2, body frame undefined");
    }
    Mat3 g;
    g.col(2) = -s.q1;
    g.col(1) = perp / n;
    g.col(0) = g.col(1).cross(g.col(2));
    return g;
}

ReducedState reduce_state(const FullState &s, const SystemParams &prm)
{
    (void)prm;
    const Mat3 g = body_frame(s);
    const double q = s.distance();
    const Vec3 m = g.transpose() * (s.q1.cross(s.p1) + s.q2.cross(s.p2));
    const Vec3 tq(0.0, std::cos(q), std::sin(q));
    ReducedState r;
    r.m1 = m[0];
    r.m2 = m[1];
    r.m3 = m[2];
    r.q = q;
    r.p = tq.dot(g.transpose() * s.p2);
    return r;
}

FullState lift(const ReducedState &s, const SystemParams &prm, const Mat3 &g)
{
    const BodyFrameVelocity w = reduced_to_body_velocity(s, prm);
    const Vec3 om(w.omega1, w.omega2, w.omega3);
    const double c = std::cos(s.q);
    const double sn = std::sin(s.q);
    const Vec3 x1(0.0, 0.0, -1.0);
    const Vec3 x2(0.0, sn, -c);
    const Vec3 v1 = om.cross(x1);
    const Vec3 v2 = om.cross(x2) + Vec3(0.0, c, sn) * w.qdot;
    FullState f;
    f.q1 = g * x1;
    f.q2 = g * x2;
    f.p1 = g * (prm.mu1 * v1);
    f.p2 = g * (prm.mu2 * v2);
    return f;
}

Mat3 euler_matrix(double theta, double phi, double psi)
{
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cf = std::cos(phi), sf = std::sin(phi);
    const double cp = std::cos(psi), sp = std::sin(psi);
    Mat3 g;
    g << cf * cp - ct * sp * sf, -sf * cp - ct * sp * cf, st * sp,
         cf * sp + ct * cp * sf, -sf * sp + ct * cp * cf, -st * cp,
         st * sf, st * cf, ct;
    return g;
}

Vec3 euler_angles(const Mat3 &g)
{
    const double st = std::hypot(g(2, 0), g(2, 1));
    const double theta = std::atan2(st, g(2, 2));
    if (st < 1e-12) {
        // Gimbal lock: only phi + psi (theta = 0) or psi - phi (theta = pi) is defined.
        return Vec3(theta, 0.0, std::atan2(g(1, 0), g(0, 0)));
    }
    return Vec3(theta, std::atan2(g(2, 0), g(2, 1)), std::atan2(g(0, 2), -g(1, 2)));
}

Reconstruction reconstruct(const ReducedState &s, const SystemParams &prm, const Mat3 &g)
{
    const BodyFrameVelocity w = reduced_to_body_velocity(s, prm);
    const Vec3 om(w.omega1, w.omega2, w.omega3);
    Reconstruction r;
    r.state = lift(s, prm, g);
    r.omega = g * om;
    r.phi = momentum_map(r.state, prm).phi;
    r.angular_speed = om.norm();
    if (r.angular_speed > 0.0) {
        const Vec3 axis = -r.omega / r.angular_speed;
        r.cos_theta1 = axis.dot(r.state.q1);
        r.cos_theta2 = axis.dot(r.state.q2);
    }
    return r;
}

void write_full_trajectory_csv(std::ostream &os, const FullTrajectory &traj)
{
    os << "t,q1x,q1y,q1z,q2x,q2y,q2z,p1x,p1y,p1z,p2x,p2y,p2z,phix,phiy,phiz\n";
    os << std::setprecision(15);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto &s = traj.states[i];
        os << traj.times[i];
        for (const Vec3 *v : {&s.q1, &s.q2, &s.p1, &s.p2, &traj.phi[i]}) {
            os << ',' << (*v)[0] << ',' << (*v)[1] << ',' << (*v)[2];
        }
        os << '\n';
    }
}

std::vector<SingleParticleState> single_particle_integrate(const SingleParticleState &initial, double mu, double e,
                                                           double B, double t_end, double dt)
{
    if (!(mu > 0.0) || !(dt > 0.0) || !(t_end > 0.0)) {
        throw InvalidParams("single_particle_integrate requires mu, dt, t_end > 0");
    }
    using Vec6 = Eigen::Matrix<double, 6, 1>;
    const auto rhs = [&](const Vec6 &x) {
        const Vec3 q = x.head<3>();
        const Vec3 p = x.tail<3>();
        const Vec3 v = p / mu;
        Vec6 d;
        d << v, e * B * v.cross(q) - (p.squaredNorm() / mu) * q;
        return d;
    };
    const long steps = std::max(1L, std::lround(t_end / dt));
    std::vector<SingleParticleState> out;
    out.reserve(steps + 1);
    Vec6 x;
    x << initial.q, initial.p;
    out.push_back(initial);
    for (long n = 1; n <= steps; ++n) {
        const Vec6 k1 = rhs(x);
        const Vec6 k2 = rhs(x + 0.5 * dt * k1);
        const Vec6 k3 = rhs(x + 0.5 * dt * k2);
        const Vec6 k4 = rhs(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        Vec3 q = x.head<3>().normalized();
        Vec3 p = x.tail<3>();
        p -= p.dot(q) * q;
        x << q, p;
        out.push_back(SingleParticleState{q, p});
    }
    return out;
}

CircleFit fit_circle(const std::vector<Vec3> &points)
{
    if (points.size() < 3) {
        throw InvalidParams("circle fit needs at least three points");
    }
    Vec3 centroid = Vec3::Zero();
    for (const auto &x : points) {
        centroid += x;
    }
    centroid /= static_cast<double>(points.size());
    Mat3 cov = Mat3::Zero();
    for (const auto &x : points) {
        const Vec3 d = x - centroid;
        cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
    CircleFit fit;
    fit.normal = es.eigenvectors().col(0);
    fit.offset = fit.normal.dot(centroid);
    if (fit.offset < 0.0) {
        fit.normal = -fit.normal;
        fit.offset = -fit.offset;
    }
    fit.radius_sq = 1.0 - fit.offset * fit.offset;
    for (const auto &x : points) {
        fit.planarity = std::max(fit.planarity, std::abs(fit.normal.dot(x) - fit.offset));
    }
    return fit;
}

double one_particle_radius_sq(double mu, double e, double B, double speed)
{
    const double mv2 = mu * mu * speed * speed;
    return mv2 / (B * B * e * e + mv2);
}

double one_particle_radius_sq_from_rate(double mu, double e, double B, double omega)
{
    return 1.0 - e * e * B * B / (mu * mu * omega * omega);
}

} // namespace magsphere
