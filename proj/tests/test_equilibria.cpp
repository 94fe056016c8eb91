#include <doctest.h>

#include "oracles.hpp"

#include <magsphere/equilibria.hpp>
#include <magsphere/errors.hpp>
#include <magsphere/polynomial.hpp>
#include <magsphere/potential_table.hpp>
#include <magsphere/reduced.hpp>

#include <cmath>

using namespace magsphere;

namespace {

bool contains(const std::vector<EquilibriumRecord> &rs, const EquilibriumRecord &r, double tol)
{
    for (const auto &x : rs) {
        if (std::abs(x.state.m2 - r.state.m2) < tol * std::max(1.0, std::abs(r.state.m2)) &&
            std::abs(x.state.m3 - r.state.m3) < tol * std::max(1.0, std::abs(r.state.m3))) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("family tags")
{
    for (Family f : {Family::TypeI_plus, Family::TypeI_minus, Family::TypeII_plus, Family::TypeII_minus, Family::General,
                     Family::RightAngle}) {
        CHECK(family_from_string(to_string(f)) == f);
    }
    CHECK_THROWS_AS(family_from_string("TypeIII"), InvalidParams);
}

TEST_CASE("Type I closed forms are equilibria")
{
    for (double q : {0.3, 0.9, 1.4, 1.7, 2.2, 2.8}) {
        for (double B : {0.0, 0.5, 2.0, 7.0}) {
            const auto [a, b] = type1(q, B);
            CHECK(a.residual < 1e-9);
            CHECK(b.residual < 1e-9);
            CHECK(a.family == Family::TypeI_plus);
            CHECK(b.family == Family::TypeI_minus);
            CHECK(a.state.m1 == 0.0);
            CHECK(a.state.p == 0.0);
            CHECK(a.C == doctest::Approx(casimir_on_type1(q, B)).epsilon(1e-10));
            CHECK(a.C == doctest::Approx(b.C).epsilon(1e-10));
            CHECK(a.H == doctest::Approx(b.H).epsilon(1e-10));
            const Vec5 o = oracle::identical_field(a.state, B);
            CHECK(o.cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    CHECK(casimir_on_type1(pi / 3, 0.0) == doctest::Approx(4.0 * std::sqrt(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(type1(pi / 2, 1.0), NearRightAngle);
    CHECK_THROWS_AS(type1(0.0, 1.0), CollisionApproach);
}

TEST_CASE("Type II exists above the threshold")
{
    CHECK(threshold_B(pi / 2) == doctest::Approx(2.0).epsilon(1e-15));
    for (double q : {0.5, 1.2, 2.0, 2.5}) {
        const double Bt = threshold_B(q);
        CHECK(type2(q, 0.99 * Bt).empty());
        const auto two = type2(q, 1.01 * Bt);
        REQUIRE(two.size() == 2);
        for (const auto &r : two) {
            CHECK(r.residual < 1e-9);
            CHECK_FALSE(r.degenerate);
        }
        CHECK(type2_discriminant(q, Bt) == doctest::Approx(0.0).scale(1.0));
        const auto one = type2(q, Bt, 1e-9);
        REQUIRE(one.size() == 1);
        CHECK(one.front().degenerate);
    }
}

TEST_CASE("quartic contains every equilibrium and the un-squared equation selects them")
{
    const SystemParams prm{1.7, 0.6, 1.2, -0.8, 2.3};
    const Potential V = cot_potential(prm);
    for (double q : {0.5, 1.0, 2.0, 2.6}) {
        const auto recs = solve_general(q, prm, V);
        const auto coeffs = quartic_coefficients(q, prm, V);
        for (const auto &r : recs) {
            CHECK(r.residual < 1e-9);
            CHECK(admissibility(q, r.state.m3, prm) >= -1e-9);
            const double scale = std::abs(coeffs.front()) * std::pow(std::max(1.0, std::abs(r.state.m3)), 4);
            CHECK(std::abs(polyval(coeffs, r.state.m3)) < 1e-7 * std::max(1.0, scale));
            CHECK(std::abs(m2_from_m3(q, r.state.m3, -r.branch, prm) - r.state.m2) < 1e-7 * std::max(1.0, std::abs(r.state.m2)));
        }
    }
}

TEST_CASE("general solver reproduces the identical-particle closed forms")
{
    const SystemParams base = SystemParams::identical(0.0);
    for (double q : {0.4, 1.0, 1.3, 1.9, 2.4, 2.9}) {
        for (double B : {0.3, 1.0, 3.0, 8.0}) {
            SystemParams prm = base;
            prm.B = B;
            const auto recs = solve_general(q, prm, cot_potential(prm));
            std::vector<EquilibriumRecord> closed;
            const auto [a, b] = type1(q, B);
            closed.push_back(a);
            closed.push_back(b);
            for (const auto &r : type2(q, B)) {
                closed.push_back(r);
            }
            CHECK(recs.size() == closed.size());
            for (const auto &r : closed) {
                CHECK(contains(recs, r, 1e-9));
            }
        }
    }
}

TEST_CASE("general parameters always admit an equilibrium")
{
    oracle::Sampler rng(31);
    for (int i = 0; i < 100; ++i) {
        const SystemParams prm = rng.params(10.0);
        double q = rng.uniform(0.1, pi - 0.1);
        if (std::abs(q - pi / 2) < 1e-3) {
            q += 0.01;
        }
        const auto recs = solve_general(q, prm, cot_potential(prm));
        CHECK(recs.size() >= 1);
        for (const auto &r : recs) {
            CHECK(r.residual < 1e-9);
        }
    }
}

TEST_CASE("general solver with a tabulated potential")
{
    std::vector<double> x, y;
    for (int i = 0; i <= 400; ++i) {
        const double q = 0.05 + (pi - 0.1) * i / 400.0;
        x.push_back(q);
        y.push_back(cot(q));
    }
    const Potential V = table_potential(x, y);
    const SystemParams prm = SystemParams::identical(1.0);
    const auto recs = solve_general(1.0, prm, V);
    CHECK(recs.size() == 2);
    for (const auto &r : recs) {
        CHECK(r.residual < 1e-9);
    }
}

TEST_CASE("solver guards")
{
    const SystemParams prm = SystemParams::identical(1.0);
    const Potential V = cot_potential(prm);
    CHECK_THROWS_AS(solve_general(pi / 2, prm, V), NearRightAngle);
    Potential flat{"flat", [](double) { return 0.0; }, [](double) { return 0.0; }, {}};
    CHECK_THROWS_AS(solve_general(1.0, prm, flat), InvalidParams);
}

TEST_CASE("right angle counting for identical particles")
{
    const auto count = [](double B) {
        const SystemParams prm = SystemParams::identical(B);
        return solve_right_angle(prm, cot_potential(prm)).records.size();
    };
    for (double B : {0.5, 1.0, 1.9}) {
        CHECK(count(B) == 0);
    }
    CHECK(count(2.0) == 1);
    for (double B : {2.1, 3.0, 5.0}) {
        CHECK(count(B) == 2);
    }
    const SystemParams prm = SystemParams::identical(3.0);
    for (const auto &r : solve_right_angle(prm, cot_potential(prm)).records) {
        CHECK(r.residual < 1e-9);
        CHECK(r.state.q == pi / 2);
    }
    const auto deg = solve_right_angle(SystemParams::identical(2.0), cot_potential(SystemParams::identical(2.0)));
    CHECK(deg.records.front().degenerate);
}

TEST_CASE("right angle without field")
{
    const SystemParams same{1.5, 1.5, 1.0, 2.0, 0.0};
    const auto fam = solve_right_angle(same, cot_potential(same));
    REQUIRE(fam.family.has_value());
    /// V'(pi/2) = -e1 e2
    CHECK(fam.family->product == doctest::Approx(1.5 * 2.0));
    const SystemParams diff{1.0, 2.0, 1.0, 1.0, 0.0};
    const auto none = solve_right_angle(diff, cot_potential(diff));
    CHECK(none.records.empty());
    CHECK_FALSE(none.family.has_value());

    /// Any point of the family is an equilibrium.
    const Potential V = cot_potential(same);
    const ReducedState s{0.0, 0.7, fam.family->product / 0.7, pi / 2, 0.0};
    CHECK(vector_field(s, same, V).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("quartic sign structure")
{
    oracle::Sampler rng(33);
    for (int i = 0; i < 100; ++i) {
        const SystemParams prm = rng.params(5.0);
        const double q = rng.uniform(0.1, pi - 0.1);
        const Potential V = cot_potential(prm);
        const auto c = quartic_coefficients(q, prm, V);
        REQUIRE(c.size() == 5);
        CHECK(c.front() == doctest::Approx(-4.0 * prm.mu1 * std::pow(csc(q), 4)).epsilon(1e-12));
        CHECK(c.back() == doctest::Approx(4.0 * prm.mu1 * prm.mu2 * prm.mu2 * std::pow(V.derivative(q), 2)).epsilon(1e-12));
    }
}
