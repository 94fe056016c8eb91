#include <magsphere/io.hpp>

namespace magsphere {

using nlohmann::json;

json to_json(const SystemParams &p)
{
    return json{{"mu1", p.mu1}, {"mu2", p.mu2}, {"e1", p.e1}, {"e2", p.e2}, {"B", p.B}};
}

SystemParams params_from_json(const json &j, SystemParams base)
{
    base.mu1 = j.value("mu1", base.mu1);
    base.mu2 = j.value("mu2", base.mu2);
    base.e1 = j.value("e1", base.e1);
    base.e2 = j.value("e2", base.e2);
    base.B = j.value("B", base.B);
    return base;
}

json to_json(const Tolerances &t)
{
    return json{{"residual", t.residual},       {"eigen", t.eigen},         {"classify", t.classify},
                {"record_residual", t.record_residual}, {"q_guard", t.q_guard}, {"branch", t.branch},
                {"admissible", t.admissible},   {"degenerate", t.degenerate}, {"right_angle", t.right_angle},
                {"hessian_det", t.hessian_det}};
}

Tolerances tolerances_from_json(const json &j, Tolerances t)
{
    t.residual = j.value("residual", t.residual);
    t.eigen = j.value("eigen", t.eigen);
    t.classify = j.value("classify", t.classify);
    t.record_residual = j.value("record_residual", t.record_residual);
    t.q_guard = j.value("q_guard", t.q_guard);
    t.branch = j.value("branch", t.branch);
    t.admissible = j.value("admissible", t.admissible);
    t.degenerate = j.value("degenerate", t.degenerate);
    t.right_angle = j.value("right_angle", t.right_angle);
    t.hessian_det = j.value("hessian_det", t.hessian_det);
    return t;
}

json to_json(const EquilibriumRecord &r)
{
    return json{{"family", to_string(r.family)}, {"q", r.state.q},   {"B", r.params.B},
                {"m2", r.state.m2},              {"m3", r.state.m3}, {"H", r.H},
                {"C", r.C},                      {"residual", r.residual}, {"degenerate", r.degenerate}};
}

json to_json(const HyperbolaFamily &f, double q, double B)
{
    return json{{"family", "RightAngleHyperbola"}, {"q", q}, {"B", B}, {"m2m3", f.product}, {"description", f.description}};
}

json to_json(const AtlasMetadata &m)
{
    return json{{"params", to_json(m.params)},
                {"potential", m.potential},
                {"tolerances", to_json(m.tol)},
                {"timestamp", m.timestamp.empty() ? "none" : m.timestamp},
                {"note", m.note}};
}

json to_json(const Vec3 &v)
{
    return json::array({v[0], v[1], v[2]});
}

json to_json(const Reconstruction &r)
{
    return json{{"q1", to_json(r.state.q1)},   {"q2", to_json(r.state.q2)},     {"p1", to_json(r.state.p1)},
                {"p2", to_json(r.state.p2)},   {"omega", to_json(r.omega)},     {"phi", to_json(r.phi)},
                {"angular_speed", r.angular_speed}, {"cos_theta1", r.cos_theta1}, {"cos_theta2", r.cos_theta2}};
}

} // namespace magsphere
