#include <magsphere/cli.hpp>
#include <magsphere/equilibria.hpp>
#include <magsphere/errors.hpp>
#include <magsphere/fullspace.hpp>
#include <magsphere/io.hpp>
#include <magsphere/parallel.hpp>
#include <magsphere/potential_table.hpp>
#include <magsphere/reduced.hpp>
#include <magsphere/stability.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace magsphere {

using nlohmann::json;

namespace {

json axis_json(const std::optional<Axis> &a)
{
    if (!a) {
        return nullptr;
    }
    return json{{"lo", a->lo}, {"hi", a->hi}, {"n", a->n}};
}

std::optional<Axis> axis_from(const json &j, const std::string &name, std::optional<Axis> base)
{
    if (!j.contains(name)) {
        return base;
    }
    const json &v = j.at(name);
    if (v.is_null()) {
        return std::nullopt;
    }
    if (v.is_string()) {
        return Axis::parse(name, v.get<std::string>());
    }
    Axis a;
    a.name = name;
    a.lo = v.at("lo").get<double>();
    a.hi = v.at("hi").get<double>();
    a.n = v.at("n").get<int>();
    return a;
}

} // namespace

json to_json(const RunConfig &c)
{
    return json{{"command", c.command},
                {"params", to_json(c.params)},
                {"potential", c.potential},
                {"potential_file", c.potential_file},
                {"q", c.q ? json(*c.q) : json(nullptr)},
                {"grid_q", axis_json(c.grid_q)},
                {"grid_B", axis_json(c.grid_B)},
                {"dt", c.dt},
                {"t_end", c.t_end},
                {"tol", c.tol},
                {"tolerances", to_json(c.tolerances)},
                {"output_path", c.output_path},
                {"format", c.format},
                {"workers", c.workers},
                {"state", {{"m1", c.m1}, {"m2", c.m2}, {"m3", c.m3}, {"p", c.p}}},
                {"full", c.full},
                {"project", c.project},
                {"family", c.family},
                {"diagram", c.diagram},
                {"slopes", c.slopes},
                {"timestamp", c.timestamp}};
}

RunConfig run_config_from_json(const json &j, RunConfig c)
{
    if (!j.is_object()) {
        throw InvalidParams("config must be a JSON object");
    }
    try {
        c.command = j.value("command", c.command);
        if (j.contains("params")) {
            c.params = params_from_json(j.at("params"), c.params);
        }
        c.potential = j.value("potential", c.potential);
        c.potential_file = j.value("potential_file", c.potential_file);
        if (j.contains("q")) {
            c.q = j.at("q").is_null() ? std::nullopt : std::optional<double>(j.at("q").get<double>());
        }
        c.grid_q = axis_from(j, "grid_q", c.grid_q);
        c.grid_B = axis_from(j, "grid_B", c.grid_B);
        if (c.grid_q) {
            c.grid_q->name = "grid_q";
        }
        if (c.grid_B) {
            c.grid_B->name = "grid_B";
        }
        c.dt = j.value("dt", c.dt);
        c.t_end = j.value("t_end", c.t_end);
        c.tol = j.value("tol", c.tol);
        if (j.contains("tolerances")) {
            c.tolerances = tolerances_from_json(j.at("tolerances"), c.tolerances);
        }
        c.output_path = j.value("output_path", c.output_path);
        c.format = j.value("format", c.format);
        c.workers = j.value("workers", c.workers);
        if (j.contains("state")) {
            const json &s = j.at("state");
            c.m1 = s.value("m1", c.m1);
            c.m2 = s.value("m2", c.m2);
            c.m3 = s.value("m3", c.m3);
            c.p = s.value("p", c.p);
        }
        c.full = j.value("full", c.full);
        c.project = j.value("project", c.project);
        c.family = j.value("family", c.family);
        c.diagram = j.value("diagram", c.diagram);
        c.slopes = j.value("slopes", c.slopes);
        c.timestamp = j.value("timestamp", c.timestamp);
    } catch (const json::exception &e) {
        throw InvalidParams(std::string("bad config: ") + e.what());
    }
    return c;
}

namespace {

class Sink {
public:
    Sink(const std::string &path, std::ostream &fallback) : os_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw InvalidParams("cannot open output file " + path);
            }
            os_ = &file_;
        }
    }
    std::ostream &operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream *os_;
};

Potential make_potential(const RunConfig &c)
{
    if (c.potential == "cot") {
        return cot_potential(c.params);
    }
    if (c.potential == "custom-table") {
        if (c.potential_file.empty()) {
            throw InvalidParams("custom-table potential needs a table file");
        }
        return load_table_potential_file(c.potential_file);
    }
    throw InvalidParams("unknown potential " + c.potential);
}

AtlasMetadata metadata_for(const RunConfig &c, const std::string &note = "")
{
    AtlasMetadata m;
    m.params = c.params;
    m.potential = c.potential;
    m.tol = c.tolerances;
    m.timestamp = c.timestamp;
    m.note = note;
    return m;
}

std::string format_or(const RunConfig &c, const std::string &def)
{
    const std::string f = c.format.empty() ? def : c.format;
    if (f != "csv" && f != "json") {
        throw InvalidParams("format must be csv or json");
    }
    return f;
}

std::vector<double> q_values(const RunConfig &c)
{
    if (c.grid_q) {
        return c.grid_q->values();
    }
    if (c.q) {
        return {*c.q};
    }
    if (c.family == "right-angle") {
        return {pi / 2};
    }
    throw InvalidParams("this command needs --q or --grid-q");
}

std::vector<double> B_values(const RunConfig &c)
{
    if (c.grid_B) {
        return c.grid_B->values();
    }
    return {c.params.B};
}

bool is_identical_cot(const RunConfig &c)
{
    return c.potential == "cot" && c.params.mu1 == 1.0 && c.params.mu2 == 1.0 && c.params.e1 == 1.0 &&
           c.params.e2 == 1.0;
}

struct CellResult {
    double q = 0.0;
    double B = 0.0;
    std::vector<EquilibriumRecord> records;
    std::optional<HyperbolaFamily> family;
};

std::vector<CellResult> collect_equilibria(const RunConfig &c, const Potential &V)
{
    const auto qs = q_values(c);
    const auto Bs = B_values(c);
    const std::string fam = c.family;
    if (fam != "auto" && fam != "type1" && fam != "type2" && fam != "general" && fam != "right-angle") {
        throw InvalidParams("family must be auto, type1, type2, general or right-angle");
    }
    if ((fam == "type1" || fam == "type2") && !is_identical_cot(c)) {
        throw InvalidParams("closed-form families need identical particles with the cot potential");
    }
    for (double q : qs) {
        if (fam != "right-angle" && !q_in_domain(q, c.tolerances.q_guard)) {
            throw InvalidParams("q outside (0, pi)");
        }
    }

    std::vector<CellResult> cells(qs.size() * Bs.size());
    parallel_for(cells.size(), c.workers, [&](std::size_t k) {
        SystemParams prm = c.params;
        prm.B = Bs[k / qs.size()];
        const double q = qs[k % qs.size()];
        CellResult &cell = cells[k];
        cell.q = q;
        cell.B = prm.B;
        const bool right = fam == "right-angle" || std::abs(q - pi / 2) < c.tolerances.right_angle;
        if (right) {
            cell.q = pi / 2;
            if (fam == "type1" || fam == "type2") {
                if (fam == "type2") {
                    cell.records = type2(pi / 2, prm.B);
                }
                return;
            }
            auto ra = solve_right_angle(prm, V, c.tolerances);
            cell.records = std::move(ra.records);
            cell.family = ra.family;
            return;
        }
        const bool closed = fam == "type1" || fam == "type2" || (fam == "auto" && is_identical_cot(c));
        if (closed) {
            if (fam != "type2") {
                const auto [a, b] = type1(q, prm.B);
                cell.records.push_back(a);
                cell.records.push_back(b);
            }
            if (fam != "type1") {
                for (auto &r : type2(q, prm.B)) {
                    cell.records.push_back(r);
                }
            }
            return;
        }
        cell.records = solve_general(q, prm, V, c.tolerances);
    });
    return cells;
}

int runtime_failure(std::ostream &err, const std::string &what)
{
    err << "error: " << what << '\n';
    return ExitRuntime;
}

} // namespace

int cmd_simulate(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    c.params.validate();
    if (!c.q) {
        throw InvalidParams("simulate needs --q");
    }
    if (c.full && c.output_path.empty()) {
        throw InvalidParams("--full needs --out");
    }
    const Potential V = make_potential(c);
    const ReducedState s0{c.m1, c.m2, c.m3, *c.q, c.p};
    IntegrateOptions opt;
    opt.project_casimir = c.project;
    opt.q_guard = c.tolerances.q_guard;

    Trajectory tr;
    try {
        tr = integrate(s0, c.params, V, c.t_end, c.dt, opt);
    } catch (const CollisionApproach &e) {
        return runtime_failure(err, std::string("collision approach: ") + e.what());
    } catch (const NonFiniteState &e) {
        return runtime_failure(err, std::string("non-finite state: ") + e.what());
    }
    {
        Sink sink(c.output_path, out);
        if (format_or(c, "csv") == "json") {
            json rows = json::array();
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
                const auto &s = tr.states[i];
                rows.push_back({tr.times[i], s.m1, s.m2, s.m3, s.q, s.p, tr.H[i], tr.C[i]});
            }
            *sink << json{{"metadata", to_json(metadata_for(c))},
                          {"columns", {"t", "m1", "m2", "m3", "q", "p", "H", "C"}},
                          {"rows", rows}}
                         .dump(1)
                  << '\n';
        } else {
            write_trajectory_csv(*sink, tr);
        }
    }
    err << std::setprecision(6) << "simulate: steps=" << tr.times.size() - 1 << " max|dH|=" << tr.max_dH()
        << " max|dC|=" << tr.max_dC() << '\n';

    double dphi = 0.0;
    if (c.full) {
        try {
            const FullTrajectory ft = full_integrate(lift(s0, c.params), c.params, V, c.t_end, c.dt, c.tolerances.q_guard);
            std::ofstream f(c.output_path + ".full.csv");
            if (!f) {
                throw InvalidParams("cannot open " + c.output_path + ".full.csv");
            }
            write_full_trajectory_csv(f, ft);
            dphi = ft.max_dphi();
            err << "simulate: full-space max|dPhi|=" << dphi << '\n';
        } catch (const CollisionApproach &e) {
            return runtime_failure(err, std::string("collision approach (full space): ") + e.what());
        }
    }
    if (tr.max_dH() > c.tol || tr.max_dC() > c.tol || (c.full && dphi > 10.0 * c.tol)) {
        return runtime_failure(err, "invariant drift exceeds --tol");
    }
    return ExitOk;
}

int cmd_equilibria(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    c.params.validate();
    const Potential V = make_potential(c);
    const auto cells = collect_equilibria(c, V);
    Sink sink(c.output_path, out);
    std::size_t total = 0;
    if (format_or(c, "json") == "json") {
        json recs = json::array();
        json fams = json::array();
        for (const auto &cell : cells) {
            for (const auto &r : cell.records) {
                recs.push_back(to_json(r));
                ++total;
            }
            if (cell.family) {
                fams.push_back(to_json(*cell.family, cell.q, cell.B));
            }
        }
        *sink << json{{"metadata", to_json(metadata_for(c))}, {"records", recs}, {"families", fams}}.dump(1) << '\n';
    } else {
        *sink << metadata_line(metadata_for(c)) << '\n';
        *sink << "family,q,B,m2,m3,H,C,residual,degenerate\n" << std::setprecision(15);
        for (const auto &cell : cells) {
            for (const auto &r : cell.records) {
                *sink << to_string(r.family) << ',' << r.state.q << ',' << r.params.B << ',' << r.state.m2 << ','
                      << r.state.m3 << ',' << r.H << ',' << r.C << ',' << r.residual << ',' << (r.degenerate ? 1 : 0)
                      << '\n';
                ++total;
            }
        }
    }
    err << "equilibria: " << total << " records over " << cells.size() << " cells\n";
    return ExitOk;
}

int cmd_stability(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    c.params.validate();
    const Potential V = make_potential(c);
    const auto cells = collect_equilibria(c, V);
    std::vector<StabilityRow> rows;
    for (const auto &cell : cells) {
        for (const auto &r : cell.records) {
            rows.push_back(stability_row(r, V));
        }
    }
    Sink sink(c.output_path, out);
    if (format_or(c, "csv") == "json") {
        json arr = json::array();
        for (const auto &r : rows) {
            arr.push_back({{"q", r.q},
                           {"B", r.B},
                           {"family", to_string(r.family)},
                           {"a", r.a},
                           {"b", r.b},
                           {"class", to_string(r.cls)},
                           {"n_plus", r.sig.n_plus},
                           {"n_minus", r.sig.n_minus},
                           {"n_zero", r.sig.n_zero}});
        }
        *sink << json{{"metadata", to_json(metadata_for(c))}, {"rows", arr}}.dump(1) << '\n';
    } else {
        *sink << metadata_line(metadata_for(c)) << '\n';
        write_stability_csv(*sink, rows);
    }
    err << "stability: " << rows.size() << " rows\n";
    return ExitOk;
}

namespace {

std::vector<double> parse_list(const std::string &s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception &) {
            throw InvalidParams("bad number list: " + s);
        }
    }
    return v;
}

void emit_table(std::ostream &os, const std::string &format, const AtlasMetadata &meta,
                const std::vector<std::string> &cols, const std::vector<std::vector<json>> &rows)
{
    if (format == "json") {
        json arr = json::array();
        for (const auto &r : rows) {
            json o;
            for (std::size_t i = 0; i < cols.size(); ++i) {
                o[cols[i]] = r[i];
            }
            arr.push_back(o);
        }
        os << json{{"metadata", to_json(meta)}, {"rows", arr}}.dump(1) << '\n';
        return;
    }
    os << metadata_line(meta) << '\n';
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "") << cols[i];
    }
    os << '\n' << std::setprecision(15);
    for (const auto &r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            os << (i ? "," : "");
            if (r[i].is_string()) {
                os << r[i].get<std::string>();
            } else if (r[i].is_number_float()) {
                const double x = r[i].get<double>();
                if (std::isfinite(x)) {
                    os << x;
                }
            } else if (!r[i].is_null()) {
                os << r[i].dump();
            }
        }
        os << '\n';
    }
}

json num(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

} // namespace

int cmd_atlas(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    const std::string d = c.diagram;
    const std::string fmt = format_or(c, "csv");
    const int n = c.grid_q ? c.grid_q->n : 400;
    AtlasMetadata meta = metadata_for(c, "diagram=" + d);

    if (d == "threshold") {
        const auto qs = c.grid_q ? c.grid_q->values() : clustered_grid(0.05, pi - 0.05, n);
        const ThresholdCurve tc = threshold_curve(qs);
        std::vector<std::vector<json>> rows;
        for (const auto &p : tc.points) {
            rows.push_back({"sample", p.q, p.B});
        }
        rows.push_back({"minimum", tc.minimum.q, tc.minimum.B});
        Sink sink(c.output_path, out);
        emit_table(*sink, fmt, meta, {"kind", "q", "B"}, rows);
        err << std::setprecision(12) << "atlas threshold: minimum at q=" << tc.minimum.q << " B=" << tc.minimum.B << '\n';
        return ExitOk;
    }
    if (d == "type1-stability") {
        const auto qs = c.grid_q ? c.grid_q->values() : clustered_grid(0.2, pi / 2 - 0.02, 40);
        std::vector<std::vector<json>> rows(qs.size());
        parallel_for(qs.size(), c.workers, [&](std::size_t i) {
            const double q = qs[i];
            double b = std::nan("");
            double flip = std::nan("");
            try {
                b = type1_boundary(q);
                flip = locate_type1_flip(q, 0.0, std::max(1.0, 4.0 * b));
            } catch (const OutsideDomain &) {
            }
            rows[i] = {q, num(b), num(flip), num(std::abs(b - flip))};
        });
        Sink sink(c.output_path, out);
        emit_table(*sink, fmt, meta, {"q", "boundary", "flip_B", "abs_diff"}, rows);
        return ExitOk;
    }
    if (d == "type2-stability") {
        const auto Bs = c.grid_B ? c.grid_B->values() : std::vector<double>{1.9, 2.5, 5.0, 7.5, 10.0};
        const auto bd = type2_stability_boundary(Bs, n, c.workers);
        std::vector<std::vector<json>> rows;
        for (const auto &r : bd) {
            rows.push_back({r.B, num(r.q_plus), num(r.q_minus)});
        }
        Sink sink(c.output_path, out);
        emit_table(*sink, fmt, meta, {"B", "q_plus", "q_minus"}, rows);
        return ExitOk;
    }
    if (d == "grid") {
        const Axis qa = c.grid_q ? *c.grid_q : Axis{"grid_q", 0.1, pi - 0.1, 60};
        const Axis Ba = c.grid_B ? *c.grid_B : Axis{"grid_B", 0.05, 10.0, 200};
        c.params.validate();
        const Potential V = make_potential(c);
        AtlasGrid g = is_identical_cot(c) ? identical_atlas(qa, Ba, c.workers)
                                          : general_atlas(qa, Ba, c.params, V, c.workers);
        g.metadata.params = c.params;
        g.metadata.timestamp = c.timestamp;
        g.metadata.tol = c.tolerances;
        Sink sink(c.output_path, out);
        if (fmt == "json") {
            json cells = json::array();
            for (const auto &cell : g.cells) {
                json e = json::array();
                for (const auto &x : cell.entries) {
                    e.push_back({{"family", to_string(x.family)},
                                 {"H", x.H},
                                 {"C", x.C},
                                 {"residual", x.residual},
                                 {"class", to_string(x.cls)},
                                 {"n_plus", x.sig.n_plus},
                                 {"n_minus", x.sig.n_minus},
                                 {"n_zero", x.sig.n_zero}});
                }
                cells.push_back({{"q", cell.q}, {"B", cell.B}, {"entries", e}});
            }
            *sink << json{{"metadata", to_json(g.metadata)},
                          {"axes", {{"q", qa.spec()}, {"B", Ba.spec()}}},
                          {"cells", cells}}
                         .dump(1)
                  << '\n';
        } else {
            write_atlas_csv(*sink, g);
        }
        return ExitOk;
    }
    if (d == "ec") {
        const EnergyCasimirDiagram ec = energy_casimir_diagram(c.params.B, n, c.workers);
        Sink sink(c.output_path, out);
        if (fmt == "json") {
            json br = json::array();
            for (const auto &b : ec.branches) {
                json pts = json::array();
                for (const auto &p : b.points) {
                    pts.push_back({{"q", p.q}, {"C", p.C}, {"H", p.H}, {"class", to_string(p.cls)}});
                }
                br.push_back({{"name", b.name}, {"points", pts}});
            }
            json cs = json::array();
            for (const auto &cp : ec.cusps) {
                cs.push_back({{"branch", cp.branch}, {"q", cp.q}, {"C", cp.C}, {"H", cp.H}});
            }
            *sink << json{{"metadata", to_json(meta)}, {"B", ec.B}, {"branches", br}, {"cusps", cs}}.dump(1) << '\n';
        } else {
            write_energy_casimir_csv(*sink, ec, meta);
        }
        const auto chk = check_cusps_against_transitions(ec);
        err << "atlas ec: " << ec.cusps.size() << " cusps, " << ec.transitions.size() << " stability transitions, "
            << (chk.ok() ? "all matched" : "mismatch") << '\n';
        return ExitOk;
    }
    if (d == "bc-region") {
        const auto Bs = c.grid_B ? c.grid_B->values() : Axis{"grid_B", 1.76, 10.0, 50}.values();
        const BCRegion r = bc_region(Bs, n, c.workers);
        Sink sink(c.output_path, out);
        if (fmt == "json") {
            json sl = json::array();
            for (const auto &s : r.slices) {
                sl.push_back({{"B", s.B},
                              {"q_left", s.q_left},
                              {"q_right", s.q_right},
                              {"C_threshold_left", s.C_threshold_left},
                              {"C_threshold_right", s.C_threshold_right},
                              {"C_min", s.C_min},
                              {"C_max", s.C_max}});
            }
            *sink << json{{"metadata", to_json(meta)}, {"slices", sl}}.dump(1) << '\n';
        } else {
            write_bc_region_csv(*sink, r, meta);
        }
        return ExitOk;
    }
    if (d == "appendix-limits") {
        std::vector<LimitReport> reps;
        for (double a : parse_list(c.slopes)) {
            reps.push_back(appendix_limit_study(a));
        }
        meta.note += ";negative_B_side_uses_time_reversal";
        Sink sink(c.output_path, out);
        if (fmt == "json") {
            json arr = json::array();
            for (const auto &r : reps) {
                arr.push_back({{"a", r.a},
                               {"m2_left", r.m2_left},
                               {"m3_left", r.m3_left},
                               {"product_left", r.product_left},
                               {"m2_right", r.m2_right},
                               {"m3_right", r.m3_right},
                               {"product_right", r.product_right},
                               {"m2_expected", r.m2_expected},
                               {"m3_expected", r.m3_expected},
                               {"time_reversed_side", r.reversed_side}});
            }
            *sink << json{{"metadata", to_json(meta)},
                          {"limits", arr},
                          {"nonuniformity_witness", {{"B", 0.01}, {"dq", 1e-4}, {"m2m3", nonuniformity_witness()}}}}
                         .dump(1)
                  << '\n';
        } else {
            write_limit_csv(*sink, reps, meta);
        }
        return ExitOk;
    }
    if (d == "zero-casimir") {
        const auto qs = c.grid_q ? c.grid_q->values() : clustered_grid(0.01, pi - 0.01, 1000);
        const ZeroCasimirReport z = zero_casimir_no_equilibria(c.params.B, qs);
        Sink sink(c.output_path, out);
        emit_table(*sink, fmt, meta, {"B", "min_value", "argmin", "no_equilibria"},
                   {{c.params.B, z.min_value, z.argmin, z.no_equilibria ? "true" : "false"}});
        return ExitOk;
    }
    throw InvalidParams("unknown diagram '" + d +
                        "' (threshold, type1-stability, type2-stability, grid, ec, bc-region, appendix-limits, zero-casimir)");
}

int cmd_reconstruct(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    c.params.validate();
    const Potential V = make_potential(c);
    std::vector<EquilibriumRecord> recs;
    if (c.family == "state") {
        if (!c.q) {
            throw InvalidParams("reconstruct needs --q");
        }
        recs.push_back(make_record(Family::General, *c.q, c.m2, c.m3, c.params, V));
    } else {
        RunConfig one = c;
        one.grid_q.reset();
        one.grid_B.reset();
        for (const auto &cell : collect_equilibria(one, V)) {
            recs.insert(recs.end(), cell.records.begin(), cell.records.end());
        }
    }
    json arr = json::array();
    for (const auto &r : recs) {
        json o = to_json(r);
        o["reconstruction"] = to_json(reconstruct(r.state, r.params));
        arr.push_back(o);
    }
    Sink sink(c.output_path, out);
    *sink << json{{"metadata", to_json(metadata_for(c))}, {"equilibria", arr}}.dump(1) << '\n';
    err << "reconstruct: " << recs.size() << " equilibria\n";
    return ExitOk;
}

namespace {

void add_common(CLI::App *app, RunConfig &c, std::string &grid_q, std::string &grid_B, std::string &potential,
                std::string &config_path, std::optional<double> &q)
{
    app->add_option("--mu1", c.params.mu1, "mass of particle 1");
    app->add_option("--mu2", c.params.mu2, "mass of particle 2");
    app->add_option("--e1", c.params.e1, "charge of particle 1");
    app->add_option("--e2", c.params.e2, "charge of particle 2");
    app->add_option("--B", c.params.B, "magnetic field strength");
    app->add_option("--q", q, "inter-particle distance");
    app->add_option("--potential", potential, "cot or a path to a two-column table");
    app->add_option("--grid-q", grid_q, "q axis a:b:n");
    app->add_option("--grid-B", grid_B, "B axis a:b:n");
    app->add_option("--dt", c.dt, "time step");
    app->add_option("--t-end", c.t_end, "final time");
    app->add_option("--tol", c.tol, "invariant drift bound");
    app->add_option("--out", c.output_path, "output file (stdout if omitted)");
    app->add_option("--format", c.format, "csv or json");
    app->add_option("--workers", c.workers, "worker threads");
    app->add_option("--m1", c.m1);
    app->add_option("--m2", c.m2);
    app->add_option("--m3", c.m3);
    app->add_option("--p", c.p);
    app->add_flag("--full", c.full, "also integrate the unreduced system");
    app->add_flag("--project", c.project, "project onto the initial Casimir level each step");
    app->add_option("--family", c.family, "auto, type1, type2, general, right-angle (reconstruct: also state)");
    app->add_option("--diagram", c.diagram, "atlas diagram");
    app->add_option("--slopes", c.slopes, "comma separated slopes for appendix-limits");
    app->add_option("--timestamp", c.timestamp, "timestamp recorded in metadata");
    app->add_option("--config", config_path, "JSON config; its values override flags");
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Charged particles on a sphere in a magnetic field: dynamics, equilibria, stability, atlas"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.workers = default_workers();
    std::string grid_q, grid_B, potential = "cot", config_path;
    std::optional<double> q;

    const char *names[] = {"simulate", "equilibria", "stability", "atlas", "reconstruct"};
    const char *help[] = {"integrate the reduced (and optionally full) dynamics", "locate relative equilibria",
                          "classify equilibria", "emit diagram data", "rigid rotation of equilibria"};
    for (int i = 0; i < 5; ++i) {
        add_common(app.add_subcommand(names[i], help[i]), cfg, grid_q, grid_B, potential, config_path, q);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        std::ostringstream o, e2;
        const int rc = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return rc == 0 ? ExitOk : ExitConfig;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.q = q;
        if (!grid_q.empty()) {
            cfg.grid_q = Axis::parse("grid_q", grid_q);
        }
        if (!grid_B.empty()) {
            cfg.grid_B = Axis::parse("grid_B", grid_B);
        }
        if (potential != "cot") {
            cfg.potential = "custom-table";
            cfg.potential_file = potential;
        }
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw InvalidParams("cannot open config " + config_path);
            }
            json j;
            try {
                in >> j;
            } catch (const json::exception &e) {
                throw InvalidParams(std::string("config is not valid JSON: ") + e.what());
            }
            const std::string cmd = cfg.command;
            cfg = run_config_from_json(j, cfg);
            cfg.command = cmd;
        }
        if (cfg.workers < 1) {
            cfg.workers = 1;
        }

        if (cfg.command == "simulate") {
            return cmd_simulate(cfg, out, err);
        }
        if (cfg.command == "equilibria") {
            return cmd_equilibria(cfg, out, err);
        }
        if (cfg.command == "stability") {
            return cmd_stability(cfg, out, err);
        }
        if (cfg.command == "atlas") {
            return cmd_atlas(cfg, out, err);
        }
        return cmd_reconstruct(cfg, out, err);
    } catch (const InvalidParams &e) {
        err << "config error: " << e.what() << '\n';
        return ExitConfig;
    } catch (const OutsideDomain &e) {
        err << "config error: " << e.what() << '\n';
        return ExitConfig;
    } catch (const Error &e) {
        return runtime_failure(err, e.what());
    }
}

} // namespace magsphere
