#include <magsphere/core.hpp>
#include <magsphere/errors.hpp>

#include <cmath>
#include <sstream>

namespace magsphere {

void SystemParams::validate() const
{
    if (!(mu1 > 0.0) || !(mu2 > 0.0)) {
        throw InvalidParams("masses must be positive");
    }
    if (e1 == 0.0 || e2 == 0.0) {
        throw InvalidParams("charges must be nonzero");
    }
    if (!std::isfinite(mu1) || !std::isfinite(mu2) || !std::isfinite(e1) || !std::isfinite(e2) || !std::isfinite(B)) {
        throw InvalidParams("parameters must be finite");
    }
}

SystemParams SystemParams::identical(double B)
{
    return SystemParams{1.0, 1.0, 1.0, 1.0, B};
}

Vec5 ReducedState::vec() const
{
    Vec5 v;
    v << m1, m2, m3, q, p;
    return v;
}

ReducedState ReducedState::from_vec(const Vec5 &v)
{
    return ReducedState{v[M1], v[M2], v[M3], v[Q], v[P]};
}

double Potential::d2(double q) const
{
    if (second_derivative) {
        return second_derivative(q);
    }
    const double h = 1e-5 * std::max(1.0, std::abs(q));
    return (derivative(q + h) - derivative(q - h)) / (2.0 * h);
}

const Tolerances &default_tolerances()
{
    static const Tolerances tol{};
    return tol;
}

Potential cot_potential(const SystemParams &params)
{
    const double k = params.e1 * params.e2;
    Potential V;
    V.name = "cot";
    V.value = [k](double q) { return k * cot(q); };
    V.derivative = [k](double q) {
        const double w = csc(q);
        return -k * w * w;
    };
    V.second_derivative = [k](double q) {
        const double w = csc(q);
        return 2.0 * k * w * w * cot(q);
    };
    return V;
}

bool q_in_domain(double q, double eps)
{
    return std::isfinite(q) && q >= eps && q <= pi - eps;
}

void check_q(double q, double eps)
{
    if (!q_in_domain(q, eps)) {
        std::ostringstream os;
        os << "q = " << q << " outside [" << eps << ", pi - " << eps << "]";
        throw CollisionApproach(os.str());
    }
}

BodyFrameVelocity reduced_to_body_velocity(const ReducedState &s, const SystemParams &prm)
{
    const double k = cot(s.q);
    const double w = csc(s.q);
    BodyFrameVelocity v;
    v.omega1 = (s.m1 - s.p) / prm.mu1;
    v.omega2 = (s.m2 - s.m3 * k) / prm.mu1;
    v.omega3 = k * (s.m3 * k - s.m2) / prm.mu1 + s.m3 * w * w / prm.mu2;
    v.qdot = (s.p * (prm.mu1 + prm.mu2) - prm.mu2 * s.m1) / (prm.mu1 * prm.mu2);
    return v;
}

ReducedState body_velocity_to_reduced(const BodyFrameVelocity &w, double q, const SystemParams &prm)
{
    const double c = std::cos(q);
    const double s = std::sin(q);
    const double proj = c * w.omega2 + s * w.omega3;
    ReducedState r;
    r.q = q;
    r.p = prm.mu2 * (w.omega1 + w.qdot);
    r.m1 = prm.mu1 * w.omega1 + r.p;
    r.m2 = prm.mu1 * w.omega2 + prm.mu2 * c * proj;
    r.m3 = prm.mu2 * s * proj;
    return r;
}

} // namespace magsphere
