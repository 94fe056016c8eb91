#include <doctest.h>

#include "oracles.hpp"

#include <magsphere/atlas.hpp>
#include <magsphere/equilibria.hpp>
#include <magsphere/errors.hpp>
#include <magsphere/stability.hpp>

#include <cmath>
#include <sstream>

using namespace magsphere;

TEST_CASE("axes and grids")
{
    const Axis a = Axis::parse("grid_q", "0.5:2.5:5");
    CHECK(a.n == 5);
    const auto v = a.values();
    REQUIRE(v.size() == 5);
    CHECK(v.front() == 0.5);
    CHECK(v.back() == 2.5);
    CHECK(v[2] == doctest::Approx(1.5));
    CHECK(Axis::parse("x", a.spec()).values() == v);
    CHECK(Axis::parse("x", "1:1:1").values().size() == 1);
    CHECK_THROWS_AS(Axis::parse("x", "1:2"), InvalidParams);
    CHECK_THROWS_AS(Axis::parse("x", "a:2:3"), InvalidParams);
    CHECK_THROWS_AS(Axis::parse("x", "1:2:0"), InvalidParams);

    const auto c = clustered_grid(0.0, 1.0, 50);
    REQUIRE(c.size() == 50);
    CHECK(c.front() > 0.0);
    CHECK(c.back() < 1.0);
    CHECK(c[1] - c[0] < c[25] - c[24]);
    const auto d = default_q_grid(400);
    CHECK(d.size() == 400);
    for (double q : d) {
        CHECK(std::abs(q - pi / 2) > 1e-4);
        CHECK(q > 0.0);
        CHECK(q < pi);
    }
}

TEST_CASE("threshold curve and its minimum")
{
    const ThresholdCurve tc = threshold_curve(clustered_grid(0.1, 3.0, 50));
    for (const auto &p : tc.points) {
        CHECK(p.B == doctest::Approx(threshold_B(p.q)).epsilon(1e-14));
    }
    const auto m = threshold_minimum();
    CHECK(std::abs(m.q - 2.0 * pi / 3) < 1e-9);
    CHECK(std::abs(m.B - 4.0 / 3.0 * std::pow(3.0, 0.25)) < 1e-12);
    const double g = oracle::golden_min(threshold_B, 1.6, 3.0, 1e-10);
    CHECK(std::abs(g - m.q) < 1e-5);
}

TEST_CASE("Type II boundary by bisection")
{
    for (double q : {0.6, 1.4, 2.4}) {
        CHECK(std::abs(locate_type2_boundary(q) - threshold_B(q)) < 1e-8);
    }
    CHECK_FALSE(type2_window(1.7).has_value());
    const auto w = type2_window(2.5);
    REQUIRE(w.has_value());
    CHECK(threshold_B(w->first) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(threshold_B(w->second) == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("Type I flip by bisection")
{
    for (double q : {0.5, 1.0, 1.3}) {
        CHECK(std::abs(locate_type1_flip(q) - type1_boundary(q)) < 1e-6);
    }
}

TEST_CASE("identical atlas")
{
    const Axis qa{"q", 0.4, 2.8, 7};
    const Axis Ba{"B", 0.5, 5.0, 4};
    const AtlasGrid g = identical_atlas(qa, Ba, 4);
    CHECK(g.cells.size() == 28);
    for (const auto &c : g.cells) {
        int t1 = 0, t2 = 0;
        for (const auto &e : c.entries) {
            CHECK(e.residual < 1e-9);
            t1 += e.family == Family::TypeI_plus || e.family == Family::TypeI_minus;
            t2 += e.family == Family::TypeII_plus || e.family == Family::TypeII_minus;
        }
        CHECK(t1 == 2);
        CHECK(t2 == (c.B > threshold_B(c.q) ? 2 : 0));
    }
    std::ostringstream os;
    write_atlas_csv(os, g);
    CHECK(os.str().rfind("# mu1=", 0) == 0);
    CHECK(os.str().find("q,B,family,H,C,residual,class,n_plus,n_minus,n_zero") != std::string::npos);
    CHECK(os.str().find("timestamp=none") != std::string::npos);

    const AtlasGrid h = identical_atlas(qa, Ba, 1);
    std::ostringstream o2;
    write_atlas_csv(o2, h);
    CHECK(o2.str() == os.str());
}

TEST_CASE("general atlas")
{
    const SystemParams prm{2.0, 1.0, 1.0, 0.5, 0.0};
    const AtlasGrid g = general_atlas(Axis{"q", 0.5, 2.5, 5}, Axis{"B", 0.5, 3.0, 3}, prm, cot_potential(prm), 2);
    for (const auto &c : g.cells) {
        CHECK(c.entries.size() >= 1);
        for (const auto &e : c.entries) {
            CHECK(e.residual < 1e-9);
        }
    }
}

TEST_CASE("energy-Casimir diagram at B = 2.5")
{
    const EnergyCasimirDiagram d = energy_casimir_diagram(2.5, 400, 4);
    REQUIRE(d.branches.size() == 4);
    CHECK(d.branches[0].name == "TypeI_acute");
    CHECK(d.cusps.size() == 3);
    int acute = 0, typeII = 0;
    for (const auto &c : d.cusps) {
        acute += c.branch == "TypeI_acute";
        typeII += c.branch.rfind("TypeII", 0) == 0;
    }
    CHECK(acute == 1);
    CHECK(typeII == 2);
    CHECK(check_cusps_against_transitions(d).ok());

    std::ostringstream os;
    write_energy_casimir_csv(os, d, AtlasMetadata{});
    CHECK(os.str().find("kind,branch,q,C,H,class") != std::string::npos);
}

TEST_CASE("Type I Casimir covers the positive axis")
{
    for (double B : {0.5, 2.5}) {
        double lo = INFINITY, hi = 0.0;
        for (double q : default_q_grid(400)) {
            const double C = casimir_on_type1(q, B);
            CHECK(C > 0.0);
            lo = std::min(lo, C);
            hi = std::max(hi, C);
        }
        CHECK(lo < 0.01 * hi);
    }
}

TEST_CASE("no equilibria on the zero Casimir level")
{
    for (double B : {2.5, 0.1}) {
        const auto r = zero_casimir_no_equilibria(B, clustered_grid(0.01, pi - 0.01, 1000));
        CHECK(r.min_value > 0.0);
        CHECK(r.no_equilibria);
    }
    CHECK_THROWS_AS(zero_casimir_no_equilibria(0.0, {1.0}), InvalidParams);
    const auto h = image_halfplane_witness(0.0, 1.0);
    CHECK(h(1.0) == doctest::Approx(cot(1.0) + cot(0.5) * cot(0.5)));
}

TEST_CASE("(B, C) region of Type II")
{
    const BCRegion r = bc_region({1.9, 2.5, 4.0}, 400, 2);
    REQUIRE(r.slices.size() == 3);
    for (const auto &s : r.slices) {
        CHECK(s.C_min < s.C_max);
        CHECK(s.q_left < s.q_right);
    }
    std::ostringstream os;
    write_bc_region_csv(os, r, AtlasMetadata{});
    CHECK(os.str().find("slice") != std::string::npos);

    /// Inside the double cover: one stable and one unstable record.
    const BCSlice &s = r.slices[0];
    const double C = 0.5 * (s.C_min + std::max(s.C_threshold_left, s.C_threshold_right));
    const auto recs = type2_records_with_casimir(1.9, C);
    const Potential V = cot_potential(SystemParams::identical(1.0));
    if (C > std::max(s.C_threshold_left, s.C_threshold_right) || C < std::min(s.C_threshold_left, s.C_threshold_right)) {
        REQUIRE(recs.size() == 2);
        int stable = 0;
        for (const auto &x : recs) {
            CHECK(std::abs(x.C - C) < 1e-8 * C);
            stable += linearize(x, V).classification == Stability::LinearlyStable;
        }
        CHECK(stable == 1);
    }
}

TEST_CASE("degenerate meeting point")
{
    const DegenerateMeetingPoint d = degenerate_meeting_point();
    CHECK(std::abs(d.q - 2.0 * pi / 3) < 1e-9);
    CHECK(std::abs(d.B - 4.0 / 3.0 * std::pow(3.0, 0.25)) < 1e-10);
    const auto recs = type2(d.q, d.B, 1e-9);
    REQUIRE(recs.size() == 1);
    CHECK(d.C == doctest::Approx(recs.front().C).epsilon(1e-8));
    CHECK(d.C == doctest::Approx(100.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-8));
}

TEST_CASE("limits along linear field paths")
{
    for (double a : {0.0, 1.0, 2.0}) {
        const LimitReport r = appendix_limit_study(a);
        const double e2 = (a - std::sqrt(a * a + 4)) / 2;
        const double e3 = (-std::sqrt(a * a + 4) - a) / 2;
        CHECK(r.m2_expected == doctest::Approx(e2));
        CHECK(std::abs(r.m2_left - e2) < 1e-6);
        CHECK(std::abs(r.m2_right - e2) < 1e-6);
        CHECK(std::abs(r.m3_left - e3) < 1e-6);
        CHECK(std::abs(r.m3_right - e3) < 1e-6);
        CHECK(std::abs(r.product_left - 1) < 1e-6);
        CHECK(std::abs(r.product_right - 1) < 1e-6);
        CHECK(r.reversed_side == (a == 0.0 ? "none" : "left"));
    }
    CHECK(std::abs(nonuniformity_witness() - 1.0) > 0.1);
    std::ostringstream os;
    write_limit_csv(os, {appendix_limit_study(1.0)}, AtlasMetadata{});
    CHECK(os.str().find("time_reversed_side") != std::string::npos);
}

TEST_CASE("rotation axis geometry")
{
    for (double q : {0.5, 1.2, 2.0, 2.7}) {
        for (double B : {0.0, 0.7, 3.0}) {
            const Type1Geometry g = type1_geometry(q, B);
            CHECK(std::abs(g.difference - g.formula) < 1e-10);
            if (B == 0.0) {
                CHECK(std::abs(g.difference) < 1e-12);
            } else {
                CHECK(std::abs(g.difference) > 1e-6);
            }
        }
    }
    for (double q : {1.2, 2.0, 2.6}) {
        const double B = threshold_B(q) + 1.0;
        for (bool plus : {true, false}) {
            const Type2Geometry g = type2_geometry(q, B, plus);
            CHECK(std::abs(g.cos_theta1 - g.expected) < 1e-10);
            CHECK(std::abs(g.cos_theta2 - g.expected) < 1e-10);
            CHECK(g.expected == doctest::Approx(std::cos(q / 2)));
        }
    }
}

TEST_CASE("Type II stability boundary")
{
    const auto rows = type2_stability_boundary({2.5}, 400, 2);
    REQUIRE(rows.size() == 1);
    const EnergyCasimirDiagram d = energy_casimir_diagram(2.5, 400, 2);
    for (const auto &c : d.cusps) {
        if (c.branch == "TypeII_plus") {
            CHECK(std::abs(c.q - rows[0].q_plus) < c.cell);
        }
        if (c.branch == "TypeII_minus") {
            CHECK(std::abs(c.q - rows[0].q_minus) < c.cell);
        }
    }
    const auto none = type2_stability_boundary({1.0});
    CHECK(std::isnan(none[0].q_plus));
}
