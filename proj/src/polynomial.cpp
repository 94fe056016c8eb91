#include <magsphere/errors.hpp>
#include <magsphere/polynomial.hpp>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace magsphere {

double polyval(const std::vector<double> &c, double x)
{
    double r = 0.0;
    for (double a : c) {
        r = r * x + a;
    }
    return r;
}

double polyder_val(const std::vector<double> &c, double x)
{
    const std::size_t n = c.size();
    double r = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        r = r * x + c[i] * static_cast<double>(n - 1 - i);
    }
    return r;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double> &coeffs)
{
    std::vector<double> c = coeffs;
    while (!c.empty() && c.front() == 0.0) {
        c.erase(c.begin());
    }
    if (c.empty()) {
        throw InvalidParams("zero polynomial has no isolated roots");
    }
    std::vector<std::complex<double>> roots;
    while (c.size() > 1 && c.back() == 0.0) {
        roots.emplace_back(0.0, 0.0);
        c.pop_back();
    }
    const int n = static_cast<int>(c.size()) - 1;
    if (n == 0) {
        return roots;
    }

    // x = sigma y balances the leading and trailing coefficients.
    const double sigma = std::pow(std::abs(c[n] / c[0]), 1.0 / n);
    std::vector<double> d(n + 1);
    for (int k = 0; k <= n; ++k) {
        d[k] = c[k] / (c[0] * std::pow(sigma, k));
    }

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        comp(0, j) = -d[j + 1];
    }
    for (int i = 1; i < n; ++i) {
        comp(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < n; ++i) {
        roots.push_back(es.eigenvalues()[i] * sigma);
    }
    return roots;
}

namespace {

double polish(const std::vector<double> &c, double x)
{
    double fx = std::abs(polyval(c, x));
    for (int it = 0; it < 50 && fx > 0.0; ++it) {
        const double d = polyder_val(c, x);
        if (d == 0.0) {
            break;
        }
        const double y = x - polyval(c, x) / d;
        const double fy = std::abs(polyval(c, y));
        if (!(fy < fx)) {
            break;
        }
        x = y;
        fx = fy;
    }
    return x;
}

} // namespace

std::vector<RealRoot> real_roots(const std::vector<double> &c, double imag_tol, double merge_tol)
{
    std::vector<double> xs;
    for (const auto &z : polynomial_roots(c)) {
        if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) {
            xs.push_back(polish(c, z.real()));
        }
    }
    std::sort(xs.begin(), xs.end());

    std::vector<RealRoot> out;
    for (double x : xs) {
        if (!out.empty() && std::abs(x - out.back().value) <= merge_tol * std::max(1.0, std::abs(x))) {
            out.back().value = 0.5 * (out.back().value + x);
            out.back().double_root = true;
            continue;
        }
        out.push_back(RealRoot{x, false});
    }
    return out;
}

} // namespace magsphere
