#include <doctest.h>

#include <magsphere/atlas.hpp>
#include <magsphere/equilibria.hpp>
#include <magsphere/errors.hpp>
#include <magsphere/reduced.hpp>
#include <magsphere/stability.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

using namespace magsphere;

namespace {

const Potential V1 = cot_potential(SystemParams::identical(1.0));

std::array<double, 6> threshold_poly(double q0)
{
    const double w3 = std::pow(csc(q0), 3);
    const double g = 1.0 + 2.0 * std::cos(q0);
    return {1.0, 0.0, 2.0 * w3 + 2.0 * g * w3, 0.0, 4.0 * g * w3 * w3, 0.0};
}

} // namespace

TEST_CASE("characteristic polynomial from principal minors")
{
    Mat5 M;
    M << 1, 2, 0, -1, 3, 0, 1, 4, 2, -2, 5, 1, 0, 1, 1, -1, 0, 2, 3, 0, 2, 2, -3, 1, 4;
    const auto cp = characteristic_polynomial(M);
    const Eigen::VectorXcd ev = M.eigenvalues();
    for (int i = 0; i < 5; ++i) {
        std::complex<double> v = 0.0;
        for (double c : cp) {
            v = v * ev[i] + c;
        }
        CHECK(std::abs(v) < 1e-9);
    }
    CHECK(cp[0] == 1.0);
    CHECK(cp[1] == doctest::Approx(-M.trace()));
    CHECK(cp[5] == doctest::Approx(-M.determinant()));
}

TEST_CASE("classification rule")
{
    CHECK(classify(-3.0, -1.0) == Stability::LinearlyStable);
    CHECK(classify(3.0, -1.0) == Stability::LinearlyUnstable);
    CHECK(classify(-3.0, 1.0) == Stability::LinearlyUnstable);
    CHECK(classify(-1.0, -1.0) == Stability::LinearlyUnstable);
    CHECK(classify(-2.0, -1.0) == Stability::Degenerate);
    CHECK(classify(0.0, -1.0) == Stability::Degenerate);
    CHECK(classify(-1.0, 0.0) == Stability::Degenerate);
    CHECK(to_string(Stability::LinearlyStable) == "LinearlyStable");
}

TEST_CASE("linearization of an equilibrium")
{
    const auto [r, s] = type1(1.0, 3.0);
    const LinearizationReport rep = linearize(r, V1);
    CHECK(rep.char_poly[0] == 1.0);
    CHECK(rep.char_poly[5] == 0.0);
    CHECK(std::abs(rep.char_poly[1]) < 1e-9);
    CHECK(std::abs(rep.char_poly[3]) < 1e-9 * std::abs(rep.char_poly[2]));
    CHECK(rep.a == doctest::Approx(-rep.char_poly[2]));
    CHECK(rep.b == doctest::Approx(-rep.char_poly[4]));
    CHECK(std::abs(rep.eigenvalues[0]) < 1e-7);
    CHECK(rep.classification == classify(rep.a, rep.b));

    EquilibriumRecord bad = r;
    bad.residual = 1e-3;
    CHECK_THROWS_AS(linearize(bad, V1), ResidualTooLarge);
}

TEST_CASE("spectrum factorizes on the threshold curve")
{
    for (double q0 : {0.7, 1.2, 1.8, 2.3, 2.8}) {
        const double B = threshold_B(q0);
        const auto recs = type2(q0, B, 1e-9);
        REQUIRE(recs.size() == 1);
        const LinearizationReport rep = linearize(recs.front(), V1);
        const auto want = threshold_poly(q0);
        for (int k = 0; k < 6; ++k) {
            CHECK(std::abs(rep.char_poly[k] - want[k]) < 1e-8 * std::max(1.0, std::abs(want[k])));
        }
        CHECK(classify(rep.a, rep.b, 1e-8) == threshold_stability(q0));
    }
    CHECK(threshold_stability(2.0) == Stability::LinearlyStable);
    CHECK(threshold_stability(2.2) == Stability::LinearlyUnstable);
    CHECK(threshold_stability(2.0 * pi / 3) == Stability::Degenerate);
}

TEST_CASE("Type I boundary")
{
    CHECK_THROWS_AS(type1_boundary(2.0), OutsideDomain);
    CHECK(type1_boundary(pi / 2) == doctest::Approx(0.0).scale(1.0));
    for (double q : {0.4, 0.8, 1.2}) {
        const double Bb = type1_boundary(q);
        const auto lo = type1(q, 0.9 * Bb);
        const auto hi = type1(q, 1.1 * Bb);
        const auto c_lo = linearize(lo.first, V1).classification;
        const auto c_hi = linearize(hi.first, V1).classification;
        CHECK(c_lo != c_hi);
    }
}

TEST_CASE("restricted Hessian signature")
{
    const auto [r, s] = type1(1.0, 0.5);
    const Signature sig = hessian_signature(r, V1);
    CHECK(sig.n_plus + sig.n_minus + sig.n_zero == 4);
    const auto M = restricted_hessian(r, V1);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff()));
    /// A definite restricted Hessian certifies nonlinear stability, which implies linear stability.
    const auto rep = linearize(r, V1);
    if (sig.n_plus == 4 || sig.n_minus == 4) {
        CHECK(rep.classification == Stability::LinearlyStable);
    }
    CHECK(rep.hessian_signature == sig);

    const auto d = type2(2.0 * pi / 3, threshold_B(2.0 * pi / 3), 1e-9);
    REQUIRE(d.size() == 1);
    CHECK_THROWS_AS(hessian_signature(d.front(), V1), DegeneratePoint);
}

TEST_CASE("stability rows")
{
    const auto [r, s] = type1(1.2, 2.0);
    const StabilityRow row = stability_row(r, V1);
    CHECK(row.family == Family::TypeI_plus);
    CHECK(row.q == 1.2);
    CHECK(row.B == 2.0);
    std::ostringstream os;
    write_stability_csv(os, {row});
    CHECK(os.str().rfind("q,B,family,a,b,class,n_plus,n_minus,n_zero\n", 0) == 0);
}
