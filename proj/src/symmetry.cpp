#include <magsphere/symmetry.hpp>

#include <cmath>

namespace magsphere {

std::string to_string(MapKind k)
{
    switch (k) {
    case MapKind::Swap:
        return "Swap";
    case MapKind::TimeReversal:
        return "TimeReversal";
    case MapKind::OppositeCharge:
        return "OppositeCharge";
    }
    return "Swap";
}

Eigen::Matrix4d swap_matrix(double q)
{
    const double c = std::cos(q);
    const double s = std::sin(q);
    Eigen::Matrix4d S;
    S << -1, 0, 0, 0,
         0, -c, -s, 0,
         0, -s, c, 0,
         -1, 0, 0, 1;
    return S;
}

ReducedState swap(const ReducedState &state, double q_fixed)
{
    const Eigen::Vector4d x(state.m1, state.m2, state.m3, state.p);
    const Eigen::Vector4d y = swap_matrix(q_fixed) * x;
    return ReducedState{y[0], y[1], y[2], state.q, y[3]};
}

ReducedState swap(const ReducedState &state)
{
    return swap(state, state.q);
}

std::pair<ReducedState, SystemParams> time_reversal(const ReducedState &s, const SystemParams &prm)
{
    SystemParams out = prm;
    out.B = -prm.B;
    return {ReducedState{-s.m1, -s.m2, -s.m3, s.q, -s.p}, out};
}

std::pair<ReducedState, SystemParams> opposite_charge(const ReducedState &s, const SystemParams &prm)
{
    SystemParams out = prm;
    out.e2 = -prm.e2;
    return {ReducedState{-s.m1, -s.m2, s.m3, pi - s.q, -s.p}, out};
}

Potential opposite_charge_potential(const Potential &V)
{
    Potential W;
    W.name = V.name + "-opposite";
    W.value = [f = V.value](double q) { return f(pi - q); };
    W.derivative = [f = V.derivative](double q) { return -f(pi - q); };
    if (V.second_derivative) {
        W.second_derivative = [f = V.second_derivative](double q) { return f(pi - q); };
    } else {
        W.second_derivative = [V](double q) { return V.d2(pi - q); };
    }
    return W;
}

double opposite_threshold_B(double q)
{
    return 2.0 * std::sqrt(csc(q) / (1.0 + std::cos(q)));
}

ReducedMap make_map(MapKind k)
{
    switch (k) {
    case MapKind::Swap:
        return ReducedMap{k, [](const ReducedState &s) { return swap(s); }, [](const SystemParams &p) { return p; }};
    case MapKind::TimeReversal:
        return ReducedMap{k, [](const ReducedState &s) { return ReducedState{-s.m1, -s.m2, -s.m3, s.q, -s.p}; },
                          [](const SystemParams &p) {
                              SystemParams o = p;
                              o.B = -p.B;
                              return o;
                          }};
    case MapKind::OppositeCharge:
        return ReducedMap{k, [](const ReducedState &s) { return ReducedState{-s.m1, -s.m2, s.m3, pi - s.q, -s.p}; },
                          [](const SystemParams &p) {
                              SystemParams o = p;
                              o.e2 = -p.e2;
                              return o;
                          }};
    }
    return make_map(MapKind::Swap);
}

} // namespace magsphere
