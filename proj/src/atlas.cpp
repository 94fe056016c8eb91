#include <magsphere/atlas.hpp>
#include <magsphere/errors.hpp>
#include <magsphere/fullspace.hpp>
#include <magsphere/parallel.hpp>
#include <magsphere/reduced.hpp>
#include <magsphere/symmetry.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace magsphere {

std::vector<double> Axis::values() const
{
    std::vector<double> v;
    if (n <= 0) {
        return v;
    }
    if (n == 1) {
        v.push_back(lo);
        return v;
    }
    v.reserve(n);
    for (int i = 0; i < n; ++i) {
        v.push_back(lo + (hi - lo) * i / (n - 1));
    }
    return v;
}

Axis Axis::parse(const std::string &name, const std::string &spec)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw InvalidParams("axis spec must be a:b:n, got " + spec);
    }
    Axis a;
    a.name = name;
    try {
        std::size_t pos = 0;
        a.lo = std::stod(parts[0], &pos);
        a.hi = std::stod(parts[1], &pos);
        a.n = std::stoi(parts[2], &pos);
    } catch (const std::exception &) {
        throw InvalidParams("axis spec must be a:b:n, got " + spec);
    }
    if (a.n <= 0 || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
        throw InvalidParams("axis spec needs finite bounds and n > 0: " + spec);
    }
    return a;
}

std::string Axis::spec() const
{
    std::ostringstream os;
    os << std::setprecision(17) << lo << ':' << hi << ':' << n;
    return os.str();
}

std::vector<double> clustered_grid(double lo, double hi, int n)
{
    std::vector<double> v;
    v.reserve(std::max(0, n));
    for (int i = 0; i < n; ++i) {
        const double t = 0.5 * (1.0 - std::cos(pi * (i + 0.5) / n));
        v.push_back(lo + (hi - lo) * t);
    }
    return v;
}

std::vector<double> default_q_grid(int n, double margin)
{
    const int left = n / 2;
    auto v = clustered_grid(margin, pi / 2 - margin, left);
    auto r = clustered_grid(pi / 2 + margin, pi - margin, n - left);
    v.insert(v.end(), r.begin(), r.end());
    return v;
}

namespace {

AtlasEntry entry_from(const EquilibriumRecord &r, const Potential &V)
{
    AtlasEntry e;
    e.family = r.family;
    e.H = r.H;
    e.C = r.C;
    e.residual = r.residual;
    const LinearizationReport rep = linearize(r, V);
    e.cls = rep.classification;
    e.sig = rep.hessian_signature;
    return e;
}

void add_entries(AtlasCell &cell, const std::vector<EquilibriumRecord> &recs, const Potential &V, double tol)
{
    for (const auto &r : recs) {
        if (r.residual < tol) {
            cell.entries.push_back(entry_from(r, V));
        }
    }
}

std::string fmt(double x)
{
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return os.str();
}

/// Bisection for the last point where pred holds when moving from a (pred true) to b (pred false).
template <class F>
double bisect(F pred, double a, double b, double tol)
{
    for (int it = 0; it < 200 && std::abs(b - a) > tol * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        if (pred(m)) {
            a = m;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

std::optional<EquilibriumRecord> type2_branch(double q, double B, bool plus)
{
    const auto recs = type2(q, B);
    if (recs.empty()) {
        return std::nullopt;
    }
    if (recs.size() == 1) {
        return recs.front();
    }
    return plus ? recs[0] : recs[1];
}

EquilibriumRecord type1_branch(double q, double B, bool plus)
{
    const auto [p, m] = type1(q, B);
    return plus ? p : m;
}

std::vector<BranchPoint> sample_branch(const std::vector<double> &qs, const std::function<EquilibriumRecord(double)> &rec,
                                       int workers, const Tolerances &tol = default_tolerances())
{
    std::vector<std::optional<BranchPoint>> slots(qs.size());
    const Potential V = cot_potential(SystemParams::identical(1.0));
    const double limit = tol.record_residual;
    parallel_for(qs.size(), workers, [&](std::size_t i) {
        const EquilibriumRecord r = rec(qs[i]);
        if (r.residual < limit) {
            slots[i] = BranchPoint{qs[i], r.C, r.H, linearize(r, V, tol).classification};
        }
    });
    /// Samples whose residual is at the rounding floor are left out.
    std::vector<BranchPoint> pts;
    for (const auto &s : slots) {
        if (s) {
            pts.push_back(*s);
        }
    }
    return pts;
}

double quad_vertex(double x0, double x1, double x2, double y0, double y1, double y2, double &yv, double &curv)
{
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double c2 = (d12 - d01) / (x2 - x0);
    const double c1 = d01 - c2 * (x0 + x1);
    const double c0 = y0 - c1 * x0 - c2 * x0 * x0;
    curv = c2;
    const double xv = (c2 != 0.0) ? -c1 / (2.0 * c2) : x1;
    yv = c0 + c1 * xv + c2 * xv * xv;
    return xv;
}

double quad_eval(double x0, double x1, double x2, double y0, double y1, double y2, double x)
{
    return y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) + y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
           y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
}

} // namespace

AtlasGrid identical_atlas(const Axis &q_axis, const Axis &B_axis, int workers)
{
    AtlasGrid g;
    g.q_axis = q_axis;
    g.B_axis = B_axis;
    g.metadata.params = SystemParams::identical(0.0);
    g.metadata.potential = "cot";
    const auto qs = q_axis.values();
    const auto Bs = B_axis.values();
    g.cells.resize(qs.size() * Bs.size());
    const Potential V = cot_potential(SystemParams::identical(1.0));
    const double tol = g.metadata.tol.record_residual;
    parallel_for(g.cells.size(), workers, [&](std::size_t k) {
        const double B = Bs[k / qs.size()];
        const double q = qs[k % qs.size()];
        AtlasCell &cell = g.cells[k];
        cell.q = q;
        cell.B = B;
        if (!q_in_domain(q)) {
            return;
        }
        if (std::abs(q - pi / 2) < 1e-6) {
            add_entries(cell, solve_right_angle(SystemParams::identical(B), V).records, V, tol);
            return;
        }
        const auto [p, m] = type1(q, B);
        add_entries(cell, {p, m}, V, tol);
        add_entries(cell, type2(q, B), V, tol);
    });
    return g;
}

AtlasGrid general_atlas(const Axis &q_axis, const Axis &B_axis, const SystemParams &base, const Potential &V,
                        int workers)
{
    AtlasGrid g;
    g.q_axis = q_axis;
    g.B_axis = B_axis;
    g.metadata.params = base;
    g.metadata.potential = V.name;
    const auto qs = q_axis.values();
    const auto Bs = B_axis.values();
    g.cells.resize(qs.size() * Bs.size());
    const double tol = g.metadata.tol.record_residual;
    parallel_for(g.cells.size(), workers, [&](std::size_t k) {
        SystemParams prm = base;
        prm.B = Bs[k / qs.size()];
        const double q = qs[k % qs.size()];
        AtlasCell &cell = g.cells[k];
        cell.q = q;
        cell.B = prm.B;
        if (!q_in_domain(q)) {
            return;
        }
        if (std::abs(q - pi / 2) < 1e-6) {
            add_entries(cell, solve_right_angle(prm, V).records, V, tol);
            return;
        }
        add_entries(cell, solve_general(q, prm, V), V, tol);
    });
    return g;
}

std::string metadata_line(const AtlasMetadata &m)
{
    std::ostringstream os;
    os << std::setprecision(15) << "# mu1=" << m.params.mu1 << " mu2=" << m.params.mu2 << " e1=" << m.params.e1
       << " e2=" << m.params.e2 << " B=" << m.params.B << " potential=" << m.potential << " tol_residual=" << m.tol.residual
       << " tol_eigen=" << m.tol.eigen << " tol_classify=" << m.tol.classify << " q_guard=" << m.tol.q_guard
       << " timestamp=" << (m.timestamp.empty() ? "none" : m.timestamp);
    if (!m.note.empty()) {
        os << " note=" << m.note;
    }
    return os.str();
}

void write_atlas_csv(std::ostream &os, const AtlasGrid &g)
{
    AtlasMetadata meta = g.metadata;
    if (meta.note.empty()) {
        meta.note = "grid_q=" + g.q_axis.spec() + ";grid_B=" + g.B_axis.spec();
    }
    os << metadata_line(meta) << '\n';
    os << "q,B,family,H,C,residual,class,n_plus,n_minus,n_zero\n";
    for (const auto &c : g.cells) {
        if (c.entries.empty()) {
            os << fmt(c.q) << ',' << fmt(c.B) << ",none,,,,,,,\n";
            continue;
        }
        for (const auto &e : c.entries) {
            os << fmt(c.q) << ',' << fmt(c.B) << ',' << to_string(e.family) << ',' << fmt(e.H) << ',' << fmt(e.C) << ','
               << fmt(e.residual) << ',' << to_string(e.cls) << ',' << e.sig.n_plus << ',' << e.sig.n_minus << ','
               << e.sig.n_zero << '\n';
        }
    }
}

CurvePoint threshold_minimum()
{
    const auto g = [](double q) { return -cot(q) - std::sin(q) / (1.0 - std::cos(q)); };
    double a = 1.6;
    double b = 3.0;
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double m = 0.5 * (a + b);
        if (g(m) < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    const double q = 0.5 * (a + b);
    return CurvePoint{q, threshold_B(q)};
}

ThresholdCurve threshold_curve(const std::vector<double> &q_samples)
{
    ThresholdCurve c;
    c.points.reserve(q_samples.size());
    for (double q : q_samples) {
        c.points.push_back(CurvePoint{q, threshold_B(q)});
    }
    c.minimum = threshold_minimum();
    return c;
}

double locate_type2_boundary(double q, double tol)
{
    const SystemParams base = SystemParams::identical(1.0);
    const Potential V = cot_potential(base);
    const auto many = [&](double B) { return solve_general(q, SystemParams::identical(B), V).size() > 2; };
    double lo = 0.0;
    double hi = 1.0;
    while (!many(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e8) {
            throw OutsideDomain("no Type II boundary found below B = 1e8");
        }
    }
    return bisect([&](double B) { return !many(B); }, lo, hi, tol);
}

std::optional<std::pair<double, double>> type2_window(double B)
{
    const CurvePoint m = threshold_minimum();
    if (B < m.B) {
        return std::nullopt;
    }
    const auto above = [B](double q) { return type2_discriminant(q, B) >= 0.0; };
    const double left = bisect([&](double q) { return !above(q); }, 1e-12, m.q, 1e-15);
    const double right = bisect([&](double q) { return above(q); }, m.q, pi - 1e-12, 1e-15);
    return std::make_pair(left, right);
}

double locate_type1_flip(double q, double lo, double hi, double tol)
{
    const Potential V = cot_potential(SystemParams::identical(1.0));
    const auto stable = [&](double B) {
        return linearize(type1_branch(q, B, true), V).classification == Stability::LinearlyStable;
    };
    while (stable(lo) == stable(hi) && hi < 1e6) {
        hi *= 2.0;
    }
    if (stable(lo) == stable(hi)) {
        throw OutsideDomain("Type I classification does not change on the bracket");
    }
    const bool lo_stable = stable(lo);
    return bisect([&](double B) { return stable(B) == lo_stable; }, lo, hi, tol);
}

std::vector<Cusp> find_cusps(const Branch &b)
{
    std::vector<Cusp> out;
    const auto &p = b.points;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const double d1 = p[i].C - p[i - 1].C;
        const double d2 = p[i + 1].C - p[i].C;
        if (d1 * d2 >= 0.0) {
            continue;
        }
        Cusp c;
        c.branch = b.name;
        double curv = 0.0;
        c.q = quad_vertex(p[i - 1].q, p[i].q, p[i + 1].q, p[i - 1].C, p[i].C, p[i + 1].C, c.C, curv);
        if (!(c.q > p[i - 1].q && c.q < p[i + 1].q)) {
            c.q = p[i].q;
            c.C = p[i].C;
        }
        c.H = quad_eval(p[i - 1].q, p[i].q, p[i + 1].q, p[i - 1].H, p[i].H, p[i + 1].H, c.q);
        c.is_minimum = d1 < 0.0;
        c.cell = std::max(p[i + 1].q - p[i].q, p[i].q - p[i - 1].q);
        out.push_back(c);
    }
    return out;
}

std::vector<Transition> find_transitions(const Branch &b)
{
    std::vector<Transition> out;
    const BranchPoint *last = nullptr;
    for (const auto &pt : b.points) {
        if (pt.cls == Stability::Degenerate) {
            continue;
        }
        if (last && last->cls != pt.cls) {
            out.push_back(Transition{b.name, last->q, pt.q, last->cls, pt.cls});
        }
        last = &pt;
    }
    return out;
}

CuspTransitionCheck check_cusps_against_transitions(const EnergyCasimirDiagram &d)
{
    CuspTransitionCheck chk;
    chk.cusps = static_cast<int>(d.cusps.size());
    chk.transitions = static_cast<int>(d.transitions.size());
    for (const auto &c : d.cusps) {
        for (const auto &t : d.transitions) {
            if (t.branch == c.branch && c.q >= t.q_left - c.cell && c.q <= t.q_right + c.cell) {
                ++chk.matched_cusps;
                break;
            }
        }
    }
    for (const auto &t : d.transitions) {
        for (const auto &c : d.cusps) {
            if (t.branch == c.branch && c.q >= t.q_left - c.cell && c.q <= t.q_right + c.cell) {
                ++chk.matched_transitions;
                break;
            }
        }
    }
    return chk;
}

EnergyCasimirDiagram energy_casimir_diagram(double B, int n, int workers)
{
    if (!(B > 0.0)) {
        throw InvalidParams("energy_casimir_diagram expects B > 0");
    }
    EnergyCasimirDiagram d;
    d.B = B;
    const double margin = 1e-3;
    d.branches.push_back(Branch{"TypeI_acute", sample_branch(clustered_grid(0.05, pi / 2 - margin, n),
                                                             [B](double q) { return type1_branch(q, B, true); }, workers)});
    d.branches.push_back(Branch{"TypeI_obtuse", sample_branch(clustered_grid(pi / 2 + margin, pi - 0.05, n),
                                                              [B](double q) { return type1_branch(q, B, true); }, workers)});
    if (const auto w = type2_window(B); w && w->second > w->first) {
        const auto qs = clustered_grid(w->first, w->second, n);
        d.branches.push_back(Branch{"TypeII_minus", sample_branch(qs, [B](double q) { return *type2_branch(q, B, false); },
                                                                  workers)});
        d.branches.push_back(Branch{"TypeII_plus", sample_branch(qs, [B](double q) { return *type2_branch(q, B, true); },
                                                                 workers)});
    }
    for (const auto &b : d.branches) {
        const auto c = find_cusps(b);
        d.cusps.insert(d.cusps.end(), c.begin(), c.end());
        const auto t = find_transitions(b);
        d.transitions.insert(d.transitions.end(), t.begin(), t.end());
    }
    return d;
}

void write_energy_casimir_csv(std::ostream &os, const EnergyCasimirDiagram &d, const AtlasMetadata &meta)
{
    os << metadata_line(meta) << '\n';
    os << "kind,branch,q,C,H,class\n";
    for (const auto &b : d.branches) {
        for (const auto &p : b.points) {
            os << "point," << b.name << ',' << fmt(p.q) << ',' << fmt(p.C) << ',' << fmt(p.H) << ',' << to_string(p.cls)
               << '\n';
        }
    }
    for (const auto &c : d.cusps) {
        os << "cusp," << c.branch << ',' << fmt(c.q) << ',' << fmt(c.C) << ',' << fmt(c.H) << ",Degenerate\n";
    }
}

std::function<double(double)> image_halfplane_witness(double C0, double B)
{
    if (!(C0 >= 0.0)) {
        throw InvalidParams("C0 must be nonnegative");
    }
    return [C0, B](double q) {
        const double k = cot(0.5 * q);
        return 0.5 * C0 + cot(q) + B * B * k * k;
    };
}

ZeroCasimirReport zero_casimir_no_equilibria(double B, const std::vector<double> &q_samples)
{
    if (B == 0.0) {
        throw InvalidParams("zero_casimir_no_equilibria expects B != 0");
    }
    ZeroCasimirReport r;
    r.min_value = std::numeric_limits<double>::infinity();
    for (double q : q_samples) {
        const double k = cot(0.5 * q);
        const double v = csc(q) + 2.0 * B * B * k * k;
        if (v < r.min_value) {
            r.min_value = v;
            r.argmin = q;
        }
    }
    r.no_equilibria = r.min_value > 0.0;
    return r;
}

BCRegion bc_region(const std::vector<double> &B_samples, int q_samples, int workers)
{
    BCRegion reg;
    for (double B : B_samples) {
        BCSlice s;
        s.B = B;
        const auto w = type2_window(B);
        if (!w) {
            reg.slices.push_back(s);
            continue;
        }
        s.q_left = w->first;
        s.q_right = w->second;
        s.C_threshold_left = type2(s.q_left, B, 1e-9).front().C;
        s.C_threshold_right = type2(s.q_right, B, 1e-9).front().C;
        if (s.q_right > s.q_left) {
            const auto qs = clustered_grid(s.q_left, s.q_right, q_samples);
            s.plus = sample_branch(qs, [B](double q) { return *type2_branch(q, B, true); }, workers);
            s.minus = sample_branch(qs, [B](double q) { return *type2_branch(q, B, false); }, workers);
        }
        s.C_min = std::min(s.C_threshold_left, s.C_threshold_right);
        s.C_max = std::max(s.C_threshold_left, s.C_threshold_right);
        for (const auto *pts : {&s.plus, &s.minus}) {
            for (const auto &p : *pts) {
                s.C_min = std::min(s.C_min, p.C);
                s.C_max = std::max(s.C_max, p.C);
            }
            for (const auto &c : find_cusps(Branch{"", *pts})) {
                s.C_min = std::min(s.C_min, c.C);
                s.C_max = std::max(s.C_max, c.C);
            }
        }
        reg.slices.push_back(std::move(s));
    }
    return reg;
}

std::vector<EquilibriumRecord> type2_records_with_casimir(double B, double C, int q_samples)
{
    std::vector<EquilibriumRecord> out;
    const auto w = type2_window(B);
    if (!w || !(w->second > w->first)) {
        return out;
    }
    const auto qs = clustered_grid(w->first, w->second, q_samples);
    for (bool plus : {true, false}) {
        const auto f = [&](double q) { return type2_branch(q, B, plus)->C - C; };
        for (std::size_t i = 0; i + 1 < qs.size(); ++i) {
            const double fa = f(qs[i]);
            const double fb = f(qs[i + 1]);
            if (fa == 0.0) {
                out.push_back(*type2_branch(qs[i], B, plus));
                continue;
            }
            if (fa * fb >= 0.0) {
                continue;
            }
            const bool neg = fa < 0.0;
            const double q = bisect([&](double x) { return (f(x) < 0.0) == neg; }, qs[i], qs[i + 1], 1e-15);
            out.push_back(*type2_branch(q, B, plus));
        }
    }
    return out;
}

void write_bc_region_csv(std::ostream &os, const BCRegion &r, const AtlasMetadata &meta)
{
    os << metadata_line(meta) << '\n';
    os << "kind,B,branch,q,C,class,q_left,q_right,C_threshold_left,C_threshold_right,C_min,C_max\n";
    for (const auto &s : r.slices) {
        os << "slice," << fmt(s.B) << ",,,,," << fmt(s.q_left) << ',' << fmt(s.q_right) << ',' << fmt(s.C_threshold_left)
           << ',' << fmt(s.C_threshold_right) << ',' << fmt(s.C_min) << ',' << fmt(s.C_max) << '\n';
        for (const auto &[name, pts] : {std::pair{"TypeII_plus", &s.plus}, std::pair{"TypeII_minus", &s.minus}}) {
            for (const auto &p : *pts) {
                os << "point," << fmt(s.B) << ',' << name << ',' << fmt(p.q) << ',' << fmt(p.C) << ',' << to_string(p.cls)
                   << ",,,,,,\n";
            }
        }
    }
}

DegenerateMeetingPoint degenerate_meeting_point()
{
    const CurvePoint m = threshold_minimum();
    const auto recs = type2(m.q, m.B, 1e-9);
    return DegenerateMeetingPoint{m.q, m.B, recs.front().C};
}

namespace {

double richardson(std::vector<double> v)
{
    // Errors expand in integer powers of h with h halved at each level.
    const std::size_t n = v.size();
    for (std::size_t j = 1; j < n; ++j) {
        const double f = std::pow(2.0, static_cast<double>(j)) - 1.0;
        for (std::size_t k = n - 1; k >= j; --k) {
            v[k] = v[k] + (v[k] - v[k - 1]) / f;
        }
    }
    return v.back();
}

/// Type I+ (m3 < 0) at (q, B); negative B goes through time reversal of the |B| records.
std::pair<double, double> type1_plus_signed(double q, double B)
{
    ReducedState a;
    ReducedState b;
    if (B >= 0.0) {
        const auto [p, m] = type1(q, B);
        a = p.state;
        b = m.state;
    } else {
        const auto [p, m] = type1(q, -B);
        a = time_reversal(p.state, p.params).first;
        b = time_reversal(m.state, m.params).first;
    }
    const ReducedState &s = (a.m3 < 0.0) ? a : b;
    return {s.m2, s.m3};
}

} // namespace

LimitReport appendix_limit_study(double a, const std::vector<double> &h_samples)
{
    LimitReport r;
    r.a = a;
    r.h = h_samples;
    if (r.h.empty()) {
        for (int k = 0; k < 8; ++k) {
            r.h.push_back(0.02 * std::pow(0.5, k));
        }
    }
    const double root = std::sqrt(a * a + 4.0);
    r.m2_expected = 0.5 * (a - root);
    r.m3_expected = 0.5 * (-root - a);
    r.reversed_side = a > 0.0 ? "left" : (a < 0.0 ? "right" : "none");

    for (int side : {-1, 1}) {
        std::vector<double> m2s, m3s, prods;
        for (double h : r.h) {
            const double q = pi / 2 + side * h;
            const auto [m2, m3] = type1_plus_signed(q, a * (q - pi / 2));
            m2s.push_back(m2);
            m3s.push_back(m3);
            prods.push_back(m2 * m3);
        }
        const double L2 = richardson(m2s);
        const double L3 = richardson(m3s);
        const double LP = richardson(prods);
        if (side < 0) {
            r.m2_left = L2;
            r.m3_left = L3;
            r.product_left = LP;
        } else {
            r.m2_right = L2;
            r.m3_right = L3;
            r.product_right = LP;
        }
    }
    return r;
}

double nonuniformity_witness(double B, double dq)
{
    const auto [m2, m3] = type1_plus_signed(pi / 2 + dq, B);
    return m2 * m3;
}

void write_limit_csv(std::ostream &os, const std::vector<LimitReport> &rows, const AtlasMetadata &meta)
{
    os << metadata_line(meta) << '\n';
    os << "a,side,m2_limit,m3_limit,product_limit,m2_expected,m3_expected,time_reversed_side\n";
    for (const auto &r : rows) {
        os << fmt(r.a) << ",left," << fmt(r.m2_left) << ',' << fmt(r.m3_left) << ',' << fmt(r.product_left) << ','
           << fmt(r.m2_expected) << ',' << fmt(r.m3_expected) << ',' << r.reversed_side << '\n';
        os << fmt(r.a) << ",right," << fmt(r.m2_right) << ',' << fmt(r.m3_right) << ',' << fmt(r.product_right) << ','
           << fmt(r.m2_expected) << ',' << fmt(r.m3_expected) << ',' << r.reversed_side << '\n';
    }
}

Type1Geometry type1_geometry(double q, double B, bool plus)
{
    const EquilibriumRecord rec = type1_branch(q, B, plus);
    const Reconstruction rc = reconstruct(rec.state, rec.params);
    Type1Geometry g;
    g.cos_theta1 = rc.cos_theta1;
    g.cos_theta2 = rc.cos_theta2;
    g.difference = rc.cos_theta1 - std::cos(pi - std::acos(std::clamp(rc.cos_theta2, -1.0, 1.0)));
    const double sc = sec(q);
    const double w = csc(q);
    g.formula = B * (sc + 1.0) / std::sqrt(B * B * sc * sc + 2.0 * w * w * w);
    return g;
}

Type2Geometry type2_geometry(double q, double B, bool plus)
{
    const auto rec = type2_branch(q, B, plus);
    if (!rec) {
        throw OutsideDomain("no Type II equilibrium at this (q, B)");
    }
    const Reconstruction rc = reconstruct(rec->state, rec->params);
    return Type2Geometry{rc.cos_theta1, rc.cos_theta2, std::cos(0.5 * q)};
}

std::vector<Type2Boundary> type2_stability_boundary(const std::vector<double> &B_samples, int q_samples, int workers)
{
    const Potential V = cot_potential(SystemParams::identical(1.0));
    /// Only boundary locations are emitted, so classification near q = pi accepts residuals above the record gate.
    Tolerances tol;
    tol.record_residual = 1e-6;
    std::vector<Type2Boundary> out;
    for (double B : B_samples) {
        Type2Boundary row{B, std::nan(""), std::nan("")};
        const auto w = type2_window(B);
        if (w && w->second > w->first) {
            const auto qs = clustered_grid(w->first, w->second, q_samples);
            for (bool plus : {true, false}) {
                Branch br{plus ? "TypeII_plus" : "TypeII_minus",
                          sample_branch(qs, [B, plus](double q) { return *type2_branch(q, B, plus); }, workers, tol)};
                const auto ts = find_transitions(br);
                if (ts.empty()) {
                    continue;
                }
                const auto stable = [&](double q) {
                    return linearize(*type2_branch(q, B, plus), V, tol).classification == Stability::LinearlyStable;
                };
                const bool left_stable = stable(ts.front().q_left);
                const double qt =
                    bisect([&](double q) { return stable(q) == left_stable; }, ts.front().q_left, ts.front().q_right, 1e-13);
                (plus ? row.q_plus : row.q_minus) = qt;
            }
        }
        out.push_back(row);
    }
    return out;
}

} // namespace magsphere
