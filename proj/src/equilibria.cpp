#include <magsphere/equilibria.hpp>
#include <magsphere/errors.hpp>
#include <magsphere/polynomial.hpp>
#include <magsphere/reduced.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace magsphere {

std::string to_string(Family f)
{
    switch (f) {
    case Family::TypeI_plus:
        return "TypeI_plus";
    case Family::TypeI_minus:
        return "TypeI_minus";
    case Family::TypeII_plus:
        return "TypeII_plus";
    case Family::TypeII_minus:
        return "TypeII_minus";
    case Family::General:
        return "General";
    case Family::RightAngle:
        return "RightAngle";
    }
    return "General";
}

Family family_from_string(const std::string &s)
{
    for (Family f : {Family::TypeI_plus, Family::TypeI_minus, Family::TypeII_plus, Family::TypeII_minus,
                     Family::General, Family::RightAngle}) {
        if (to_string(f) == s) {
            return f;
        }
    }
    throw InvalidParams("unknown family tag " + s);
}

EquilibriumRecord make_record(Family f, double q, double m2, double m3, const SystemParams &prm, const Potential &V,
                              bool degenerate)
{
    EquilibriumRecord r;
    r.family = f;
    r.state = ReducedState{0.0, m2, m3, q, 0.0};
    r.params = prm;
    r.H = hamiltonian(r.state, prm, V);
    r.C = casimir(r.state, prm);
    r.residual = vector_field(r.state, prm, V).cwiseAbs().maxCoeff();
    r.degenerate = degenerate;
    return r;
}

std::vector<double> quartic_coefficients(double q, const SystemParams &prm, const Potential &V)
{
    const double mu1 = prm.mu1, mu2 = prm.mu2, e1 = prm.e1, e2 = prm.e2, B = prm.B;
    const double v = V.derivative(q);
    const double c = std::cos(q);
    const double s = std::sin(q);
    const double w = 1.0 / s;
    const double w3 = w * w * w;
    const double w4 = w3 * w;
    const double sc = 1.0 / c;
    return {
        -4.0 * mu1 * w4,
        4.0 * B * w4 * (e1 * mu2 - e2 * mu1 * std::cos(2.0 * q) * sc),
        2.0 * w3 * sc * (2.0 * B * B * e2 * s * (e2 * mu1 * c - e1 * mu2) - 2.0 * mu2 * v * (mu2 + mu1 * std::cos(2.0 * q))),
        4.0 * B * mu2 * w * v * (2.0 * e2 * mu1 - e1 * mu2 * sc),
        4.0 * mu1 * mu2 * mu2 * v * v,
    };
}

namespace {

struct ACoef {
    double a2, a1, a0, K;
};

ACoef a_coefficients(double q, const SystemParams &prm)
{
    const double mu1 = prm.mu1, mu2 = prm.mu2;
    const double Be1 = prm.B * prm.e1, Be2 = prm.B * prm.e2;
    const double k = cot(q);
    const double w = csc(q);
    const double c = std::cos(q);
    const double K = mu1 * w * w + mu2 * k * k - mu2;
    const double kw = k * w;
    return ACoef{K * K + 4.0 * mu2 * mu2 * c * kw, -2.0 * K * mu2 * Be1 + 4.0 * mu2 * kw * (mu2 * c * Be1 - Be2 * mu1),
                 mu2 * mu2 * Be1 * Be1, K};
}

double a_scale(double q, double m3, const SystemParams &prm)
{
    const ACoef a = a_coefficients(q, prm);
    return std::abs(a.a2 * m3 * m3) + std::abs(a.a1 * m3) + std::abs(a.a0);
}

double unsquared_scale(double q, double m3, double sqrtA, const SystemParams &prm, const Potential &V)
{
    const double mu1 = prm.mu1, mu2 = prm.mu2;
    const double w = csc(q);
    const double c = std::cos(q);
    const double pre = std::abs(m3 * w / c);
    return pre * (std::abs(prm.B * prm.e1 * mu2) + std::abs(2.0 * prm.B * prm.e2 * mu1 * c) + std::abs(2.0 * mu1 * m3) +
                  std::abs(m3 * (mu1 + mu2) * w * w) + sqrtA) +
           std::abs(2.0 * mu1 * mu2 * V.derivative(q));
}

/// Newton on (dm1, dp) = 0 in (m2, m3) at m1 = p = 0.
void polish_equilibrium(double q, double &m2, double &m3, const SystemParams &prm, const Potential &V)
{
    auto res = [&](double a, double b) {
        return vector_field(ReducedState{0.0, a, b, q, 0.0}, prm, V).cwiseAbs().maxCoeff();
    };
    double r = res(m2, m3);
    for (int it = 0; it < 30 && r > 0.0; ++it) {
        const ReducedState s{0.0, m2, m3, q, 0.0};
        const Vec5 f = vector_field(s, prm, V);
        const Mat5 J = jacobian(s, prm, V);
        Eigen::Matrix2d A;
        A << J(M1, M2), J(M1, M3), J(P, M2), J(P, M3);
        const Eigen::Vector2d rhs(f[M1], f[P]);
        const Eigen::Vector2d step = A.fullPivLu().solve(rhs);
        if (!step.allFinite()) {
            break;
        }
        const double n2 = m2 - step[0];
        const double n3 = m3 - step[1];
        const double rn = res(n2, n3);
        if (!(rn < r)) {
            break;
        }
        m2 = n2;
        m3 = n3;
        r = rn;
    }
}

bool same_point(double a2, double a3, double b2, double b3, double tol)
{
    const double scale = std::max({1.0, std::abs(a2), std::abs(a3)});
    return std::abs(a2 - b2) <= tol * scale && std::abs(a3 - b3) <= tol * scale;
}

} // namespace

double admissibility(double q, double m3, const SystemParams &prm)
{
    const ACoef a = a_coefficients(q, prm);
    return a.a2 * m3 * m3 + a.a1 * m3 + a.a0;
}

double m2_from_m3(double q, double m3, int sign, const SystemParams &prm)
{
    const ACoef a = a_coefficients(q, prm);
    const double A = std::max(0.0, a.a2 * m3 * m3 + a.a1 * m3 + a.a0);
    return std::tan(q) * (a.K * m3 - prm.B * prm.e1 * prm.mu2 + sign * std::sqrt(A)) / (2.0 * prm.mu2);
}

double unsquared_m3_equation(double q, double m3, int sign, const SystemParams &prm, const Potential &V)
{
    const double mu1 = prm.mu1, mu2 = prm.mu2;
    const double w = csc(q);
    const double c = std::cos(q);
    const double A = std::max(0.0, admissibility(q, m3, prm));
    return m3 * w / c *
               (prm.B * prm.e1 * mu2 - 2.0 * prm.B * prm.e2 * mu1 * c - 2.0 * mu1 * m3 + m3 * (mu1 + mu2) * w * w +
                sign * std::sqrt(A)) -
           2.0 * mu1 * mu2 * V.derivative(q);
}

std::vector<EquilibriumRecord> solve_general(double q, const SystemParams &prm, const Potential &V,
                                             const Tolerances &tol)
{
    prm.validate();
    check_q(q, tol.q_guard);
    if (std::abs(q - pi / 2) < tol.right_angle) {
        throw NearRightAngle("solve_general is indeterminate near q = pi/2; use solve_right_angle");
    }
    if (V.derivative(q) == 0.0) {
        throw InvalidParams("V'(q) vanishes");
    }

    struct Candidate {
        double m2, m3;
        int branch;
        bool degenerate;
    };
    std::vector<Candidate> found;

    for (const RealRoot &root : real_roots(quartic_coefficients(q, prm, V))) {
        const double m3 = root.value;
        const double A = admissibility(q, m3, prm);
        if (A < -tol.admissible * std::max(1.0, a_scale(q, m3, prm))) {
            continue;
        }
        const double sqrtA = std::sqrt(std::max(0.0, A));
        const double fscale = std::max(1.0, unsquared_scale(q, m3, sqrtA, prm, V));
        for (int s : {1, -1}) {
            if (std::abs(unsquared_m3_equation(q, m3, s, prm, V)) > tol.branch * fscale) {
                continue;
            }
            // The vanishing un-squared branch pairs with the opposite root in the m2 formula.
            double m2 = m2_from_m3(q, m3, -s, prm);
            double m3p = m3;
            polish_equilibrium(q, m2, m3p, prm, V);
            const double r = vector_field(ReducedState{0.0, m2, m3p, q, 0.0}, prm, V).cwiseAbs().maxCoeff();
            if (r >= tol.record_residual) {
                continue;
            }
            bool dup = false;
            for (auto &c : found) {
                if (same_point(c.m2, c.m3, m2, m3p, 1e-7)) {
                    dup = true;
                    c.degenerate = c.degenerate || root.double_root;
                }
            }
            if (!dup) {
                found.push_back(Candidate{m2, m3p, s, root.double_root});
            }
        }
    }

    if (found.empty()) {
        std::ostringstream os;
        os << "no admissible equilibrium at q = " << q;
        throw NoAdmissibleRoot(os.str());
    }

    std::sort(found.begin(), found.end(), [](const Candidate &a, const Candidate &b) { return a.m3 < b.m3; });
    std::vector<EquilibriumRecord> out;
    for (const auto &c : found) {
        EquilibriumRecord r = make_record(Family::General, q, c.m2, c.m3, prm, V, c.degenerate);
        r.branch = c.branch;
        out.push_back(r);
    }
    return out;
}

double right_angle_discriminant(const SystemParams &prm, const Potential &V)
{
    const double v = V.derivative(pi / 2);
    const double B2 = prm.B * prm.B;
    const double ee = prm.e1 * prm.e2;
    const double dm = prm.mu1 - prm.mu2;
    return B2 * B2 * ee * ee + 2.0 * B2 * ee * (prm.mu1 + prm.mu2) * v + dm * dm * v * v;
}

RightAngleResult solve_right_angle(const SystemParams &prm, const Potential &V, const Tolerances &tol)
{
    prm.validate();
    const double q = pi / 2;
    const double mu1 = prm.mu1, mu2 = prm.mu2;
    const double v = V.derivative(q);
    const double B = prm.B;
    const double B2 = B * B;
    const double ee = prm.e1 * prm.e2;

    RightAngleResult out;
    out.discriminant = right_angle_discriminant(prm, V);
    const double dscale = B2 * B2 * ee * ee + std::abs(2.0 * B2 * ee * (mu1 + mu2) * v) +
                          (mu1 - mu2) * (mu1 - mu2) * v * v;
    const double disc_tol = tol.degenerate * std::max(1.0, dscale);

    if (B == 0.0) {
        if (mu1 == mu2) {
            std::ostringstream os;
            os << "m2*m3 = " << -mu1 * v << " (B = 0, equal masses, m1 = p = 0)";
            out.family = HyperbolaFamily{-mu1 * v, os.str()};
        }
        // Unequal masses force m3 = 0, which the second equation forbids.
        return out;
    }

    // Be2 mu1 m3^2 - mu2 (v (mu2 - mu1) + B^2 e1 e2) m3 - v mu2^2 B e1 = 0
    const double a = B * prm.e2 * mu1;
    const double b = -mu2 * (v * (mu2 - mu1) + B2 * ee);
    std::vector<std::pair<double, bool>> roots;
    if (out.discriminant < -disc_tol) {
        return out;
    }
    if (out.discriminant <= disc_tol) {
        roots.emplace_back(-b / (2.0 * a), true);
    } else {
        const double sq = std::abs(mu2) * std::sqrt(out.discriminant);
        // Stable quadratic formula.
        const double t = -0.5 * (b + std::copysign(sq, b));
        const double c0 = -v * mu2 * mu2 * B * prm.e1;
        roots.emplace_back(t / a, false);
        roots.emplace_back(c0 / t, false);
    }
    std::sort(roots.begin(), roots.end());
    for (const auto &[m3, deg] : roots) {
        const double m2 = -mu1 * v / m3 - B * prm.e2 * mu1 / mu2;
        out.records.push_back(make_record(Family::RightAngle, q, m2, m3, prm, V, deg));
    }
    return out;
}

std::pair<EquilibriumRecord, EquilibriumRecord> type1(double q, double B)
{
    check_q(q);
    if (std::abs(q - pi / 2) < 1e-6) {
        throw NearRightAngle("Type I equilibria do not exist at q = pi/2");
    }
    const SystemParams prm = SystemParams::identical(B);
    const Potential V = cot_potential(prm);
    const double h = 0.5 * q;
    const double sh = std::sin(h);
    const double ch = std::cos(h);
    const double sq = std::sin(q);
    const double cq = std::cos(q);
    const double tq = std::tan(q);
    const double R = std::sqrt(4.0 / sh + B * B / ch * sq * sq * tq * tq);
    const double den = sh - std::sin(1.5 * q);
    const double c32 = std::pow(ch, 1.5) * cq * R;
    const double base2 = 2.0 * B * sh * sh * sh * sq;
    const double m2p = (base2 + c32) / den;
    const double m2m = (base2 - c32) / den;
    const double m3p = 0.5 * (B * sq * tq - std::sqrt(ch) * R);
    const double m3m = 0.5 * (B * sq * tq + std::sqrt(ch) * R);
    return {make_record(Family::TypeI_plus, q, m2p, m3p, prm, V), make_record(Family::TypeI_minus, q, m2m, m3m, prm, V)};
}

double type2_discriminant(double q, double B)
{
    const double w = csc(0.5 * q);
    return B * B - 2.0 * w * w * csc(q);
}

std::vector<EquilibriumRecord> type2(double q, double B, double tol)
{
    check_q(q);
    const SystemParams prm = SystemParams::identical(B);
    const Potential V = cot_potential(prm);
    double d = type2_discriminant(q, B);
    if (d < -tol) {
        return {};
    }
    const double s2 = std::pow(std::sin(0.5 * q), 2);
    const double f2 = -2.0 * s2 * s2 * csc(q);
    if (std::abs(d) <= tol) {
        return {make_record(Family::TypeII_plus, q, f2 * B, s2 * B, prm, V, true)};
    }
    const double r = std::sqrt(d);
    return {make_record(Family::TypeII_plus, q, f2 * (B + r), s2 * (B + r), prm, V),
            make_record(Family::TypeII_minus, q, f2 * (B - r), s2 * (B - r), prm, V)};
}

double threshold_B(double q)
{
    check_q(q);
    return 2.0 * std::sqrt(csc(q) / (1.0 - std::cos(q)));
}

double casimir_on_type1(double q, double B)
{
    check_q(q);
    if (std::abs(q - pi / 2) < 1e-6) {
        throw NearRightAngle("Type I equilibria do not exist at q = pi/2");
    }
    const double sh = std::sin(0.5 * q);
    const double t = std::tan(q);
    return std::cos(0.5 * q) / (sh * sh * sh) * (1.0 + 0.5 * B * B * std::sin(q) * t * t);
}

} // namespace magsphere
