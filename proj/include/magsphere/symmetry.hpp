#pragma once

#include <functional>
#include <string>
#include <utility>

#include <magsphere/core.hpp>

namespace magsphere {

enum class MapKind { Swap, TimeReversal, OppositeCharge };

std::string to_string(MapKind k);

/// A discrete symmetry acting on states and parameters.
struct ReducedMap {
    MapKind name;
    std::function<ReducedState(const ReducedState &)> action;
    std::function<SystemParams(const SystemParams &)> param_action;
};

/// Particle exchange on (m1, m2, m3, p) at shape q. Identical particles only.
Eigen::Matrix4d swap_matrix(double q);

/// Applies swap_matrix(q_fixed) to (m1, m2, m3, p); q passes through.
ReducedState swap(const ReducedState &state, double q_fixed);
ReducedState swap(const ReducedState &state);

/// Flips the signs of B, m1, m2, m3 and p.
std::pair<ReducedState, SystemParams> time_reversal(const ReducedState &state, const SystemParams &prm);

/// (m1, m2, m3, q, p) -> (-m1, -m2, m3, pi - q, -p) with e2 -> -e2.
std::pair<ReducedState, SystemParams> opposite_charge(const ReducedState &state, const SystemParams &prm);

/// Potential of the image system, V1(q) = V(pi - q).
Potential opposite_charge_potential(const Potential &V);

/// Threshold curve of the opposite-charge system, 2 sqrt(csc q / (1 + cos q)).
double opposite_threshold_B(double q);

ReducedMap make_map(MapKind k);

} // namespace magsphere
