#pragma once

#include <istream>
#include <string>
#include <vector>

#include <magsphere/core.hpp>

namespace magsphere {

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double value(double q) const;
    double derivative(double q) const;
    double second_derivative(double q) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::size_t segment(double q) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

/// Builds a Potential from samples (q_i, V_i). Samples must be strictly monotone in V
/// so that V' does not vanish; throws InvalidParams otherwise.
Potential table_potential(std::vector<double> q, std::vector<double> v, std::string name = "custom-table");

/// Reads whitespace or comma separated "q V" rows; '#' starts a comment.
Potential load_table_potential(std::istream &in, std::string name = "custom-table");
Potential load_table_potential_file(const std::string &path);

} // namespace magsphere
