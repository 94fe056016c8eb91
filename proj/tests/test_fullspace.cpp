#include <doctest.h>

#include "oracles.hpp"

#include <magsphere/equilibria.hpp>
#include <magsphere/errors.hpp>
#include <magsphere/fullspace.hpp>
#include <magsphere/reduced.hpp>

#include <cmath>
#include <sstream>

using namespace magsphere;

TEST_CASE("lift and reduce are inverse")
{
    oracle::Sampler rng(21);
    for (int i = 0; i < 30; ++i) {
        const SystemParams prm = rng.params();
        const ReducedState s = rng.state();
        const Mat3 g = euler_matrix(rng.uniform(0.1, 3.0), rng.uniform(-3, 3), rng.uniform(-3, 3));
        const FullState f = lift(s, prm, g);
        CHECK_NOTHROW(f.validate(1e-12));
        CHECK(f.distance() == doctest::Approx(s.q).epsilon(1e-13));
        CHECK((body_frame(f) - g).cwiseAbs().maxCoeff() < 1e-12);
        const ReducedState r = reduce_state(f, prm);
        CHECK(std::abs(r.m1 - s.m1) < 1e-12);
        CHECK(std::abs(r.m2 - s.m2) < 1e-12);
        CHECK(std::abs(r.m3 - s.m3) < 1e-12);
        CHECK(std::abs(r.q - s.q) < 1e-12);
        CHECK(std::abs(r.p - s.p) < 1e-12);
    }
}

TEST_CASE("momentum map is the rotated body momentum map")
{
    oracle::Sampler rng(22);
    for (int i = 0; i < 20; ++i) {
        const SystemParams prm = rng.params();
        const ReducedState s = rng.state();
        const Mat3 g = euler_matrix(rng.uniform(0.1, 3.0), rng.uniform(-3, 3), rng.uniform(-3, 3));
        const Vec3 phi = momentum_map(lift(s, prm, g), prm).phi;
        CHECK((g.transpose() * phi - body_momentum_map(s, prm)).norm() < 1e-12);
    }
}

TEST_CASE("full flow projects to the reduced flow")
{
    oracle::Sampler rng(23);
    for (int i = 0; i < 10; ++i) {
        const SystemParams prm = rng.params();
        const Potential V = cot_potential(prm);
        const ReducedState s = rng.state(0.6, 2.5, 0.5);
        const FullState f0 = lift(s, prm);
        const FullTrajectory ft = full_integrate(f0, prm, V, 0.5, 1e-3);
        const Trajectory tr = integrate(s, prm, V, 0.5, 1e-3);
        REQUIRE(ft.states.size() == tr.states.size());
        double err = 0.0;
        for (std::size_t k = 0; k < tr.states.size(); k += 50) {
            const Vec5 d = reduce_state(ft.states[k], prm).vec() - tr.states[k].vec();
            err = std::max(err, d.cwiseAbs().maxCoeff());
        }
        CHECK(err < 1e-6);
        CHECK(ft.max_dphi() < 1e-9);
    }
}

TEST_CASE("Euler angles")
{
    oracle::Sampler rng(24);
    for (int i = 0; i < 20; ++i) {
        const double t = rng.uniform(0.05, 3.0), f = rng.uniform(-3, 3), p = rng.uniform(-3, 3);
        const Mat3 g = euler_matrix(t, f, p);
        CHECK((g * g.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(g.determinant() == doctest::Approx(1.0));
        const Vec3 a = euler_angles(g);
        CHECK((euler_matrix(a[0], a[1], a[2]) - g).cwiseAbs().maxCoeff() < 1e-12);
    }
    const Mat3 lock = euler_matrix(0.0, 0.4, 0.3);
    const Vec3 a = euler_angles(lock);
    CHECK((euler_matrix(a[0], a[1], a[2]) - lock).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate configurations")
{
    FullState f;
    f.q2 = f.q1;
    CHECK_THROWS_AS(body_frame(f), DegenerateConfiguration);
    CHECK_THROWS_AS(f.validate(), DegenerateConfiguration);
    FullState g;
    g.p1 = Vec3(0, 0, 1);
    CHECK_THROWS_AS(g.validate(), InvalidParams);
}

TEST_CASE("reconstruction of a relative equilibrium is a rigid rotation")
{
    const double q = 1.1, B = 1.5;
    const auto recs = type1(q, B);
    for (const auto &r : {recs.first, recs.second}) {
        const Reconstruction rc = reconstruct(r.state, r.params);
        CHECK(rc.omega.cross(rc.phi).norm() < 1e-12 * std::max(1.0, rc.phi.norm()));
        const Potential V = cot_potential(r.params);
        const double T = 0.5;
        const FullTrajectory ft = full_integrate(rc.state, r.params, V, T, 1e-4);
        const Vec3 axis = rc.omega.normalized();
        const Eigen::AngleAxisd rot(rc.angular_speed * T, axis);
        CHECK((rot * rc.state.q1 - ft.states.back().q1).norm() < 1e-9);
        CHECK((rot * rc.state.q2 - ft.states.back().q2).norm() < 1e-9);
    }
}

TEST_CASE("one particle moves on a circle of the predicted radius")
{
    oracle::Sampler rng(25);
    for (int i = 0; i < 5; ++i) {
        const double mu = rng.uniform(0.5, 3), e = rng.uniform(0.5, 2), B = rng.uniform(0.2, 3);
        const Vec3 q = rng.unit();
        Vec3 v = rng.unit();
        v -= v.dot(q) * q;
        v = v.normalized() * rng.uniform(0.3, 2.0);
        const auto path = single_particle_integrate({q, mu * v}, mu, e, B, 20.0, 1e-3);
        std::vector<Vec3> pts;
        for (const auto &s : path) {
            pts.push_back(s.q);
        }
        const CircleFit fit = fit_circle(pts);
        CHECK(fit.planarity < 1e-9);
        const double r2 = one_particle_radius_sq(mu, e, B, v.norm());
        CHECK(std::abs(fit.radius_sq - r2) / r2 < 1e-6);
    }
    CHECK_THROWS_AS(fit_circle({Vec3(1, 0, 0)}), InvalidParams);
    CHECK(one_particle_radius_sq(1, 1, 0, 1) == 1.0);
}

TEST_CASE("trajectory CSV")
{
    const SystemParams prm = SystemParams::identical(1.0);
    const FullTrajectory ft = full_integrate(lift(ReducedState{0, 0.1, 0.1, 1.0, 0}, prm), prm, cot_potential(prm), 0.01, 1e-3);
    std::ostringstream os;
    write_full_trajectory_csv(os, ft);
    CHECK(os.str().rfind("t,q1x,q1y,q1z,q2x,q2y,q2z,p1x,p1y,p1z,p2x,p2y,p2z,phix,phiy,phiz\n", 0) == 0);
}
