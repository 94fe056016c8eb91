#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <magsphere/core.hpp>
#include <magsphere/equilibria.hpp>
#include <magsphere/stability.hpp>

namespace magsphere {

/// Inclusive uniform axis lo:hi:n.
struct Axis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    std::vector<double> values() const;
    /// Parses "a:b:n".
    static Axis parse(const std::string &name, const std::string &spec);
    std::string spec() const;
    bool operator==(const Axis &) const = default;
};

/// n points on (lo, hi) clustered toward both ends, endpoints excluded.
std::vector<double> clustered_grid(double lo, double hi, int n);

/// Default q sampling: clustered near 0, pi/2 and pi, pi/2 itself excluded.
std::vector<double> default_q_grid(int n = 400, double margin = 1e-3);

struct AtlasEntry {
    Family family = Family::General;
    double H = 0.0;
    double C = 0.0;
    double residual = 0.0;
    Stability cls = Stability::Degenerate;
    Signature sig;
};

struct AtlasCell {
    double q = 0.0;
    double B = 0.0;
    std::vector<AtlasEntry> entries;
};

struct AtlasMetadata {
    SystemParams params;
    std::string potential = "cot";
    Tolerances tol;
    std::string timestamp;
    std::string note;
};

/// A (q, B) sweep with per-cell equilibria; cells are row-major in B then q.
struct AtlasGrid {
    Axis q_axis;
    Axis B_axis;
    std::vector<AtlasCell> cells;
    AtlasMetadata metadata;
};

/// Identical-particle Type I and Type II equilibria on every cell, classified.
AtlasGrid identical_atlas(const Axis &q_axis, const Axis &B_axis, int workers = 1);

/// Equilibria from solve_general / solve_right_angle on every cell for arbitrary parameters.
AtlasGrid general_atlas(const Axis &q_axis, const Axis &B_axis, const SystemParams &base, const Potential &V,
                        int workers = 1);

/// One '#'-prefixed line with params, potential, tolerances and timestamp.
std::string metadata_line(const AtlasMetadata &m);

void write_atlas_csv(std::ostream &os, const AtlasGrid &g);

struct CurvePoint {
    double q = 0.0;
    double B = 0.0;
};

struct ThresholdCurve {
    std::vector<CurvePoint> points;
    CurvePoint minimum;
};

ThresholdCurve threshold_curve(const std::vector<double> &q_samples);

/// Minimum of the threshold curve, from the root of its logarithmic derivative.
CurvePoint threshold_minimum();

/// Smallest B at which solve_general finds more than the two Type I equilibria, by bisection.
double locate_type2_boundary(double q, double tol = 1e-12);

/// Type II existence window in q at fixed B; empty when B is below the threshold minimum.
std::optional<std::pair<double, double>> type2_window(double B);

/// Classification flip of the Type I pair along fixed q, by bisection on B in [lo, hi]; hi doubles until the class changes.
double locate_type1_flip(double q, double lo = 0.0, double hi = 50.0, double tol = 1e-12);

struct BranchPoint {
    double q = 0.0;
    double C = 0.0;
    double H = 0.0;
    Stability cls = Stability::Degenerate;
};

struct Branch {
    std::string name;
    std::vector<BranchPoint> points;
};

struct Cusp {
    std::string branch;
    /// Sub-grid location from a quadratic fit through the three samples around the extremum.
    double q = 0.0;
    double C = 0.0;
    double H = 0.0;
    bool is_minimum = false;
    /// Spacing of the grid cell that contains the cusp.
    double cell = 0.0;
};

struct Transition {
    std::string branch;
    double q_left = 0.0;
    double q_right = 0.0;
    Stability from = Stability::Degenerate;
    Stability to = Stability::Degenerate;
};

struct EnergyCasimirDiagram {
    double B = 0.0;
    std::vector<Branch> branches;
    std::vector<Cusp> cusps;
    std::vector<Transition> transitions;
};

/// Branches TypeI_acute, TypeI_obtuse, TypeII_minus, TypeII_plus, ordered by tag then q.
EnergyCasimirDiagram energy_casimir_diagram(double B, int samples_per_branch = 400, int workers = 1);

/// Extrema of C along a sampled branch.
std::vector<Cusp> find_cusps(const Branch &b);
std::vector<Transition> find_transitions(const Branch &b);

/// For each cusp, whether a class transition lies within one grid cell; and whether every transition has a cusp.
struct CuspTransitionCheck {
    int cusps = 0;
    int transitions = 0;
    int matched_cusps = 0;
    int matched_transitions = 0;
    bool ok() const { return cusps == matched_cusps && transitions == matched_transitions; }
};

CuspTransitionCheck check_cusps_against_transitions(const EnergyCasimirDiagram &d);

void write_energy_casimir_csv(std::ostream &os, const EnergyCasimirDiagram &d, const AtlasMetadata &meta);

/// H(q) = C0/2 + cot q + B^2 cot^2(q/2) on the slice m1 = sqrt(C0), p = 0 through the zero-momentum-map point.
std::function<double(double)> image_halfplane_witness(double C0, double B);

struct ZeroCasimirReport {
    double min_value = 0.0;
    double argmin = 0.0;
    bool no_equilibria = false;
};

/// Minimum of csc q + 2 B^2 cot^2(q/2) over the samples.
ZeroCasimirReport zero_casimir_no_equilibria(double B, const std::vector<double> &q_samples);

struct BCSlice {
    double B = 0.0;
    double q_left = 0.0;
    double q_right = 0.0;
    /// C at the two window ends, where the Type II branches meet on the threshold curve.
    double C_threshold_left = 0.0;
    double C_threshold_right = 0.0;
    double C_min = 0.0;
    double C_max = 0.0;
    std::vector<BranchPoint> plus;
    std::vector<BranchPoint> minus;
};

struct BCRegion {
    std::vector<BCSlice> slices;
};

BCRegion bc_region(const std::vector<double> &B_samples, int q_samples = 400, int workers = 1);

/// Type II records at fixed B whose Casimir equals C, located by root finding along both branches.
std::vector<EquilibriumRecord> type2_records_with_casimir(double B, double C, int q_samples = 400);

void write_bc_region_csv(std::ostream &os, const BCRegion &r, const AtlasMetadata &meta);

/// Degenerate Type II point where the threshold curve has its minimum.
struct DegenerateMeetingPoint {
    double q = 0.0;
    double B = 0.0;
    double C = 0.0;
};

DegenerateMeetingPoint degenerate_meeting_point();

struct LimitReport {
    double a = 0.0;
    /// Richardson-extrapolated limits at q = pi/2 along B = a (q - pi/2), per side.
    double m2_left = 0.0, m3_left = 0.0, product_left = 0.0;
    double m2_right = 0.0, m3_right = 0.0, product_right = 0.0;
    double m2_expected = 0.0;
    double m3_expected = 0.0;
    /// Side on which B(q) < 0 and the time-reversal map was applied: "left", "right" or "none".
    std::string reversed_side;
    std::vector<double> h;
};

/// Type I+ is the branch with m3 < 0 near pi/2.
LimitReport appendix_limit_study(double a, const std::vector<double> &h_samples = {});

/// m2 m3 of Type I+ at fixed B, at distance dq from pi/2.
double nonuniformity_witness(double B = 0.01, double dq = 1e-4);

void write_limit_csv(std::ostream &os, const std::vector<LimitReport> &rows, const AtlasMetadata &meta);

struct Type1Geometry {
    double cos_theta1 = 0.0;
    double cos_theta2 = 0.0;
    /// cos(theta1) - cos(pi - theta2).
    double difference = 0.0;
    /// B (sec q + 1) / sqrt(B^2 sec^2 q + 2 csc^3 q).
    double formula = 0.0;
};

/// Axis oriented as -omega.
Type1Geometry type1_geometry(double q, double B, bool plus = true);

struct Type2Geometry {
    double cos_theta1 = 0.0;
    double cos_theta2 = 0.0;
    double expected = 0.0;
};

Type2Geometry type2_geometry(double q, double B, bool plus = true);

/// Transition q of the Type II plus and minus branches at fixed B (NaN when absent).
struct Type2Boundary {
    double B = 0.0;
    double q_plus = 0.0;
    double q_minus = 0.0;
};

std::vector<Type2Boundary> type2_stability_boundary(const std::vector<double> &B_samples, int q_samples = 400,
                                                    int workers = 1);

} // namespace magsphere
