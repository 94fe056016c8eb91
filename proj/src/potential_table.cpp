#include <magsphere/errors.hpp>
#include <magsphere/potential_table.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace magsphere {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
{
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw InvalidParams("potential table needs at least two rows of equal length");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw InvalidParams("potential table q column must be strictly increasing");
        }
    }

    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    }

    m_.assign(n, 0.0);
    if (n == 2) {
        m_[0] = m_[1] = d[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        m_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    }
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = m_[i + 1] = 0.0;
            continue;
        }
        const double a = m_[i] / d[i];
        const double b = m_[i + 1] / d[i];
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double t = 3.0 / std::sqrt(r);
            m_[i] = t * a * d[i];
            m_[i + 1] = t * b * d[i];
        }
    }
}

std::size_t MonotoneCubic::segment(double q) const
{
    if (q <= x_.front()) {
        return 0;
    }
    if (q >= x_.back()) {
        return x_.size() - 2;
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), q);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double MonotoneCubic::value(double q) const
{
    const std::size_t i = segment(q);
    const double h = x_[i + 1] - x_[i];
    const double t = (q - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
           (t3 - t2) * h * m_[i + 1];
}

double MonotoneCubic::derivative(double q) const
{
    const std::size_t i = segment(q);
    const double h = x_[i + 1] - x_[i];
    const double t = (q - x_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h + (3 * t2 - 4 * t + 1) * m_[i] +
           (3 * t2 - 2 * t) * m_[i + 1];
}

double MonotoneCubic::second_derivative(double q) const
{
    const std::size_t i = segment(q);
    const double h = x_[i + 1] - x_[i];
    const double t = (q - x_[i]) / h;
    return ((12 * t - 6) * y_[i] + (-12 * t + 6) * y_[i + 1]) / (h * h) + ((6 * t - 4) * m_[i] + (6 * t - 2) * m_[i + 1]) / h;
}

Potential table_potential(std::vector<double> q, std::vector<double> v, std::string name)
{
    auto spline = std::make_shared<MonotoneCubic>(std::move(q), std::move(v));

    // V' must not vanish anywhere on the table.
    const double lo = spline->x_min();
    const double hi = spline->x_max();
    const int probes = 4000;
    double sign = 0.0;
    for (int k = 0; k <= probes; ++k) {
        const double x = lo + (hi - lo) * k / probes;
        const double d = spline->derivative(x);
        if (d == 0.0 || (sign != 0.0 && d * sign < 0.0)) {
            std::ostringstream os;
            os << "tabulated potential has V'(q) = 0 near q = " << x;
            throw InvalidParams(os.str());
        }
        sign = d > 0 ? 1.0 : -1.0;
    }

    Potential V;
    V.name = std::move(name);
    V.value = [spline](double x) { return spline->value(x); };
    V.derivative = [spline](double x) { return spline->derivative(x); };
    V.second_derivative = [spline](double x) { return spline->second_derivative(x); };
    return V;
}

Potential load_table_potential(std::istream &in, std::string name)
{
    std::vector<double> q;
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0.0;
        double b = 0.0;
        if (!(row >> a)) {
            continue;
        }
        if (!(row >> b)) {
            throw InvalidParams("potential table row needs two columns: " + line);
        }
        q.push_back(a);
        v.push_back(b);
    }
    return table_potential(std::move(q), std::move(v), std::move(name));
}

Potential load_table_potential_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidParams("cannot open potential table " + path);
    }
    return load_table_potential(in, "custom-table");
}

} // namespace magsphere
