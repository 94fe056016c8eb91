#include <magsphere/errors.hpp>
#include <magsphere/reduced.hpp>
#include <magsphere/stability.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace magsphere {

std::string to_string(Stability s)
{
    switch (s) {
    case Stability::LinearlyStable:
        return "LinearlyStable";
    case Stability::LinearlyUnstable:
        return "LinearlyUnstable";
    case Stability::Degenerate:
        return "Degenerate";
    }
    return "Degenerate";
}

std::array<double, 6> characteristic_polynomial(const Mat5 &M)
{
    // E[k] = sum of k x k principal minors.
    std::array<double, 6> E{};
    E[0] = 1.0;
    for (int mask = 1; mask < 32; ++mask) {
        int idx[5];
        int k = 0;
        for (int i = 0; i < 5; ++i) {
            if (mask & (1 << i)) {
                idx[k++] = i;
            }
        }
        Eigen::MatrixXd sub(k, k);
        for (int r = 0; r < k; ++r) {
            for (int c = 0; c < k; ++c) {
                sub(r, c) = M(idx[r], idx[c]);
            }
        }
        E[k] += sub.determinant();
    }
    std::array<double, 6> c{};
    for (int k = 0; k <= 5; ++k) {
        c[k] = (k % 2 == 0 ? 1.0 : -1.0) * E[k];
    }
    return c;
}

Stability classify(double a, double b, double tol)
{
    const double disc = a * a + 4.0 * b;
    if (std::abs(a) <= tol || std::abs(b) <= tol || std::abs(disc) <= tol) {
        return Stability::Degenerate;
    }
    if (a < -tol && disc > tol && b < -tol) {
        return Stability::LinearlyStable;
    }
    return Stability::LinearlyUnstable;
}

double type1_boundary(double q)
{
    check_q(q);
    const double c = std::cos(q);
    const double s = std::sin(q);
    const double h = std::sin(0.5 * q);
    const double rad = c * c * c * (2.0 + c) / (2.0 * s * s * s * h * h);
    if (rad < 0.0) {
        std::ostringstream os;
        os << "Type I stability boundary undefined at q = " << q;
        throw OutsideDomain(os.str());
    }
    return std::sqrt(rad);
}

Stability threshold_stability(double q0, double tol)
{
    check_q(q0);
    const double g = 1.0 + 2.0 * std::cos(q0);
    if (std::abs(g) <= tol) {
        return Stability::Degenerate;
    }
    return g > 0.0 ? Stability::LinearlyStable : Stability::LinearlyUnstable;
}

Eigen::Matrix4d restricted_hessian(const EquilibriumRecord &record, const Potential &V)
{
    const auto &s = record.state;
    const auto &prm = record.params;
    const Vec5 gH = grad_hamiltonian(s, prm, V);
    const Vec5 gC = grad_casimir(s, prm);
    const double n2 = gC.squaredNorm();
    if (n2 == 0.0) {
        throw DegeneratePoint("grad C vanishes; level set is singular");
    }
    const double lambda = gH.dot(gC) / n2;
    const Mat5 L = hessian_hamiltonian(s, prm, V) - lambda * hessian_casimir(s, prm);

    Eigen::HouseholderQR<Vec5> qr(gC);
    const Mat5 Q = qr.householderQ() * Mat5::Identity();
    const Eigen::Matrix<double, 5, 4> T = Q.rightCols<4>();
    return T.transpose() * L * T;
}

namespace {

Signature signature_of(const Eigen::Matrix4d &R, double zero_tol)
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(R);
    const auto ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    Signature sig;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(ev[i]) <= zero_tol * scale) {
            ++sig.n_zero;
        } else if (ev[i] > 0.0) {
            ++sig.n_plus;
        } else {
            ++sig.n_minus;
        }
    }
    return sig;
}

} // namespace

Signature hessian_signature(const EquilibriumRecord &record, const Potential &V, const Tolerances &tol)
{
    const Eigen::Matrix4d R = restricted_hessian(record, V);
    if (std::abs(R.determinant()) < tol.hessian_det) {
        std::ostringstream os;
        os << "restricted Hessian is singular at q = " << record.state.q << ", B = " << record.params.B;
        throw DegeneratePoint(os.str());
    }
    return signature_of(R, 0.0);
}

LinearizationReport linearize(const EquilibriumRecord &record, const Potential &V, const Tolerances &tol)
{
    if (!(record.residual < tol.record_residual)) {
        std::ostringstream os;
        os << "equilibrium residual " << record.residual << " exceeds " << tol.record_residual;
        throw ResidualTooLarge(os.str());
    }
    LinearizationReport rep;
    rep.jacobian = jacobian(record.state, record.params, V);
    rep.char_poly = characteristic_polynomial(rep.jacobian);
    if (std::abs(rep.char_poly[5]) < 1e-12) {
        rep.char_poly[5] = 0.0;
    }
    // Quotient by x: x^4 + c1 x^3 + c2 x^2 + c3 x + c4.
    rep.a = -rep.char_poly[2];
    rep.b = -rep.char_poly[4];
    rep.classification = classify(rep.a, rep.b, tol.classify);

    Eigen::EigenSolver<Mat5> es(rep.jacobian, false);
    for (int i = 0; i < 5; ++i) {
        rep.eigenvalues[i] = es.eigenvalues()[i];
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](auto x, auto y) {
        return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y)
                                          : (x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag());
    });

    try {
        rep.hessian_signature = signature_of(restricted_hessian(record, V), 1e-9);
    } catch (const DegeneratePoint &) {
        rep.hessian_signature = Signature{0, 0, 4};
    }
    return rep;
}

StabilityRow stability_row(const EquilibriumRecord &record, const Potential &V)
{
    const LinearizationReport rep = linearize(record, V);
    StabilityRow row;
    row.q = record.state.q;
    row.B = record.params.B;
    row.family = record.family;
    row.a = rep.a;
    row.b = rep.b;
    row.cls = rep.classification;
    row.sig = rep.hessian_signature;
    return row;
}

void write_stability_csv(std::ostream &os, const std::vector<StabilityRow> &rows)
{
    os << "q,B,family,a,b,class,n_plus,n_minus,n_zero\n";
    os << std::setprecision(15);
    for (const auto &r : rows) {
        os << r.q << ',' << r.B << ',' << to_string(r.family) << ',' << r.a << ',' << r.b << ',' << to_string(r.cls) << ','
           << r.sig.n_plus << ',' << r.sig.n_minus << ',' << r.sig.n_zero << '\n';
    }
}

} // namespace magsphere
