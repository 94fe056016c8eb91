#include <doctest.h>

#include <magsphere/polynomial.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace magsphere;

TEST_CASE("evaluation")
{
    const std::vector<double> c{2, -3, 0, 1};
    CHECK(polyval(c, 2.0) == doctest::Approx(5.0));
    CHECK(polyder_val(c, 2.0) == doctest::Approx(12.0));
}

TEST_CASE("roots of known quartics")
{
    /// (x-1)(x+2)(x-3)(x+0.5)
    const std::vector<double> c{1, -1.5, -6, 3.5, 3};
    const auto r = real_roots(c);
    REQUIRE(r.size() == 4);
    const double expect[] = {-2, -0.5, 1, 3};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(r[i].value - expect[i]) < 1e-12);
    }
    /// x^2 + 1 has no real roots
    CHECK(real_roots({1, 0, 1}).empty());
    /// x (x - 2)
    const auto z = real_roots({1, -2, 0});
    REQUIRE(z.size() == 2);
    CHECK(z[0].value == 0.0);
    CHECK(z[1].value == doctest::Approx(2.0));
}

TEST_CASE("double roots merge")
{
    /// (x-1)^2 (x+1)
    const auto r = real_roots({1, -1, -1, 1});
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0].value + 1) < 1e-12);
    CHECK(std::abs(r[1].value - 1) < 1e-7);
    CHECK(r[1].double_root);
}

TEST_CASE("badly scaled coefficients")
{
    /// (x - 1e4)(x - 1e-3)
    const auto r = real_roots({1, -(1e4 + 1e-3), 10});
    REQUIRE(r.size() == 2);
    CHECK(r[0].value == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(r[1].value == doctest::Approx(1e4).epsilon(1e-12));
}

TEST_CASE("random polynomials reproduce their roots")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> roots{u(rng), u(rng), u(rng), u(rng)};
        std::sort(roots.begin(), roots.end());
        if (roots[1] - roots[0] < 1e-3 || roots[2] - roots[1] < 1e-3 || roots[3] - roots[2] < 1e-3) {
            continue;
        }
        std::vector<double> c{1.0};
        for (double x : roots) {
            std::vector<double> n(c.size() + 1, 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                n[i] += c[i];
                n[i + 1] -= x * c[i];
            }
            c = n;
        }
        const auto r = real_roots(c);
        REQUIRE(r.size() == 4);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(r[i].value - roots[i]) < 1e-9);
        }
    }
}
