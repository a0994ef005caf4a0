#include "lbgame/json_io.hpp"

#include "lbgame/errors.hpp"

#include <string>

namespace lbg {

namespace {

template <class T>
T get(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("field '") + key + "': " + e.what());
    }
}

Json servers_json(const DeviationGraph& g, NodeSet s)
{
    Json out = Json::array();
    for (int i : s)
        out.push_back(g.server(i) + 1);
    return out;
}

Json per_node(const DeviationGraph& g, auto&& value)
{
    Json out = Json::object();
    for (int i = 0; i < g.size(); ++i)
        out[std::to_string(g.server(i) + 1)] = value(i);
    return out;
}

Json witness_json(const Witness& w)
{
    Json out = Json::object();
    if (!w.nodes.empty()) {
        out["nodes"] = Json::array();
        for (ServerId s : w.nodes)
            out["nodes"].push_back(s + 1);
    }
    if (!w.arcs.empty()) {
        out["arcs"] = Json::array();
        for (auto [u, v] : w.arcs)
            out["arcs"].push_back({u + 1, v + 1});
    }
    if (!w.note.empty())
        out["note"] = w.note;
    return out;
}

Json range_json(const IntRange& r)
{
    return Json::array({r.lo, r.hi});
}

IntRange range_from_json(const Json& j, const char* key)
{
    auto v = get<std::vector<std::int64_t>>(j, key);
    if (v.size() != 2)
        throw InputError(std::string("field '") + key + "' must be [lo, hi]");
    return {v[0], v[1]};
}

std::string key_minimum_name(KeyMinimum k)
{
    switch (k) {
    case KeyMinimum::Attained:
        return "attained";
    case KeyMinimum::NotAttained:
        return "not_attained";
    case KeyMinimum::Unknown:
        return "unknown";
    }
    return "?";
}

} // namespace

Json parse_json(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

Json to_json(const Instance& instance)
{
    return {{"m", instance.servers()}, {"jobs", std::vector<Load>(instance.lengths().begin(), instance.lengths().end())}};
}

Instance instance_from_json(const Json& j)
{
    return Instance(get<int>(j, "m"), get<std::vector<Load>>(j, "jobs"));
}

Json to_json(const Assignment& assignment)
{
    std::vector<int> server_of;
    for (ServerId s : assignment.servers_of())
        server_of.push_back(s + 1);
    return {{"server_of", server_of}, {"loads", std::vector<Load>(assignment.loads().begin(), assignment.loads().end())}};
}

Assignment assignment_from_json(const Instance& instance, const Json& j)
{
    std::vector<ServerId> server_of = get<std::vector<ServerId>>(j, "server_of");
    for (auto& s : server_of)
        --s;
    return compute_loads(instance, std::move(server_of));
}

Json to_json(const Deviation& deviation)
{
    Json moves = Json::object();
    for (const Move& mv : deviation.moves())
        moves[std::to_string(mv.job + 1)] = mv.target + 1;
    return {{"moves", moves}};
}

Deviation deviation_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("moves") || !j.at("moves").is_object())
        throw InputError("deviation needs a 'moves' object");
    std::vector<Move> moves;
    for (const auto& [key, value] : j.at("moves").items()) {
        int job = 0;
        try {
            std::size_t used = 0;
            job = std::stoi(key, &used);
            if (used != key.size())
                throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw InputError("deviation key '" + key + "' is not a job index");
        }
        if (!value.is_number_integer())
            throw InputError("deviation target for job " + key + " is not an integer");
        moves.push_back({job - 1, value.get<int>() - 1});
    }
    return Deviation(std::move(moves));
}

Json to_json(const Ratio& r)
{
    return r.str();
}

Ratio ratio_from_json(const Json& j)
{
    if (!j.is_string())
        throw InputError("ratio must be a \"p/q\" string");
    return Ratio::parse(j.get<std::string>());
}

Json to_json(const DeviationReport& report)
{
    Json per_job = Json::object();
    for (const auto& [job, ir] : report.per_job_ir)
        per_job[std::to_string(job + 1)] = ir.str();
    return {{"per_job_ir", per_job},
            {"min_ir", report.min_ir.str()},
            {"improving", report.improving},
            {"post_loads", report.post_loads}};
}

DeviationReport report_from_json(const Json& j)
{
    DeviationReport r;
    if (!j.contains("per_job_ir") || !j.at("per_job_ir").is_object())
        throw InputError("report needs a 'per_job_ir' object");
    for (const auto& [key, value] : j.at("per_job_ir").items())
        r.per_job_ir.emplace_back(std::stoi(key) - 1, ratio_from_json(value));
    std::sort(r.per_job_ir.begin(), r.per_job_ir.end());
    r.min_ir = ratio_from_json(j.at("min_ir"));
    r.improving = get<bool>(j, "improving");
    r.post_loads = get<std::vector<Load>>(j, "post_loads");
    return r;
}

Json to_json(const NashWitness& witness)
{
    if (witness.equilibrium())
        return {{"equilibrium", true}};
    const ImprovingMove& mv = *witness.move;
    return {{"equilibrium", false},
            {"improving_move",
             {{"job", mv.job + 1},
              {"from_server", mv.from + 1},
              {"to_server", mv.to + 1},
              {"old_cost", mv.old_cost},
              {"new_cost", mv.new_cost}}}};
}

Json to_json(const WorstDeviation& worst)
{
    Json out = {{"ratio", worst.ratio.str()}, {"sne", worst.strong_equilibrium()}};
    out["witness"] = worst.witness ? to_json(*worst.witness) : Json();
    return out;
}

Json to_json(const CheckList& checks)
{
    Json out = Json::array();
    for (const Check& c : checks.all()) {
        Json item = {{"name", c.name}, {"status", std::string(to_string(c.status))}};
        if (c.status != CheckStatus::Pass && !c.witness.empty())
            item["witness"] = witness_json(c.witness);
        out.push_back(std::move(item));
    }
    return out;
}

Json to_json(const DeviationGraph& g)
{
    Json arcs = Json::array();
    for (auto [u, v] : g.arcs())
        arcs.push_back({g.server(u) + 1, g.server(v) + 1});
    Json out = {{"game_servers", g.game_servers()},
                {"merged", g.merged()},
                {"nodes", servers_json(g, g.all())},
                {"arcs", arcs},
                {"a", per_node(g, [&](int i) { return g.jobs_at(i); })},
                {"out_deg", per_node(g, [&](int i) { return g.out_degree(i); })},
                {"in_deg", per_node(g, [&](int i) { return g.in_degree(i); })},
                {"loads", per_node(g, [&](int i) { return g.load(i); })},
                {"post_loads", per_node(g, [&](int i) { return g.post_load(i); })},
                {"Mprime", servers_json(g, g.all_leave())},
                {"Mdoubleprime", servers_json(g, g.one_stays())}};
    if (g.scaled_loads())
        out["scaled_loads"] = per_node(g, [&](int i) { return (*g.scaled_loads())[static_cast<std::size_t>(i)].str(); });
    else
        out["scaled_loads"] = nullptr;
    return out;
}

Json to_json(const DeviationGraph& g, const TildeClassification& c)
{
    Json tilde = Json::array();
    for (auto [u, v] : c.tilde.arcs())
        tilde.push_back({g.server(u) + 1, g.server(v) + 1});
    Json m_ab = Json::object();
    for (const auto& [ab, nodes] : c.m_ab)
        m_ab[std::to_string(ab.first) + "," + std::to_string(ab.second)] = nodes.size();
    Json X = {{"all", servers_json(g, c.X)}};
    Json Y = Json::object();
    for (int t = 1; t <= 6; ++t) {
        X["X" + std::to_string(t)] = servers_json(g, c.Xt[static_cast<std::size_t>(t)]);
        Y["Y" + std::to_string(t)] = servers_json(g, c.Yt[static_cast<std::size_t>(t)]);
    }
    X["X11"] = servers_json(g, c.X11);
    Json ell1 = Json::object();
    for (auto [l, l1] : c.ell1)
        ell1[std::to_string(g.server(l) + 1)] = g.server(l1) + 1;
    Json pi = Json::array();
    for (const TwoPath& p : c.Pi)
        pi.push_back({g.server(p.start) + 1, g.server(p.middle) + 1, g.server(p.end) + 1});
    auto key = c.key();
    return {{"tilde_arcs", tilde},
            {"b", per_node(g, [&](int i) { return c.b[static_cast<std::size_t>(i)]; })},
            {"W0", servers_json(g, c.W0)},
            {"W0tilde", servers_json(g, c.W0tilde)},
            {"W1", servers_json(g, c.W1)},
            {"W1tilde", servers_json(g, c.W1tilde)},
            {"W", servers_json(g, c.W)},
            {"m_ab", m_ab},
            {"M22tilde", servers_json(g, c.M22tilde)},
            {"Z1", servers_json(g, c.Z1)},
            {"Z2", servers_json(g, c.Z2)},
            {"Z", servers_json(g, c.Z)},
            {"ell1", ell1},
            {"X", X},
            {"Y", Y},
            {"Omega", servers_json(g, c.Omega)},
            {"Pi", pi},
            {"key", {key[0], key[1], key[2], key[3]}}};
}

Json to_json(const DeviationGraph& g, const InequalityReport& r)
{
    Json xy = Json::array();
    for (const XYBound& b : r.xy_bounds)
        xy.push_back({{"name", "X" + std::to_string(b.t)},
                      {"x", b.x_size},
                      {"coefficient", b.coefficient.str()},
                      {"y", b.y_size},
                      {"status", std::string(to_string(b.status))}});
    Json company = Json::object();
    for (auto [l, j] : r.company_witnesses)
        company[std::to_string(g.server(l) + 1)] = g.server(j) + 1;
    return {{"r", r.r_measured.str()},
            {"eq7_rhs", r.eq7_rhs.str()},
            {"chain_bound", r.chain_bound.str()},
            {"eq8_lhs", r.eq8_lhs.str()},
            {"eq8_rhs", r.eq8_rhs.str()},
            {"xy_bounds", xy},
            {"disjointness_pass", r.disjointness_pass},
            {"company_witnesses", company},
            {"checks", to_json(r.checks)},
            {"passed", r.passed()}};
}

Json to_json(const DeviationAnalysis& a)
{
    Json out = {{"deviation", to_json(a.source.deviation)},
                {"report", to_json(a.source.report)},
                {"minimal", a.minimal},
                {"graph", to_json(a.graph)},
                {"structure", to_json(a.structure)},
                {"key_minimum", key_minimum_name(a.key_minimum)}};
    if (a.classification)
        out["tilde"] = to_json(a.graph, *a.classification);
    if (a.inequalities)
        out["inequalities"] = to_json(a.graph, *a.inequalities);
    if (!a.tilde_error.empty())
        out["tilde_error"] = a.tilde_error;
    out["passed"] = a.passed();
    return out;
}

Json to_json(const EquilibriumAnalysis& a)
{
    Json minimal = Json::array();
    for (const auto& d : a.minimal)
        minimal.push_back(to_json(d));
    Json out = {{"worst", to_json(a.worst)}, {"checks", to_json(a.checks)}, {"minimal_deviations", minimal}};
    out["min_key"] = a.min_key ? Json(*a.min_key) : Json();
    out["structure_failures"] = a.structure_failures();
    out["tilde_failures"] = a.tilde_failures();
    out["passed"] = a.passed();
    return out;
}

SweepConfig sweep_config_from_json(const Json& j)
{
    if (!j.is_object())
        throw InputError("sweep config must be a JSON object");
    SweepConfig c;
    c.m_range = range_from_json(j, "m_range");
    c.n_range = range_from_json(j, "n_range");
    c.length_range = range_from_json(j, "length_range");
    c.count = get<int>(j, "count");
    c.seed = get<std::uint64_t>(j, "seed");
    if (j.contains("ne_source")) {
        c.ne_sources.clear();
        const Json& s = j.at("ne_source");
        if (s.is_string())
            c.ne_sources.push_back(parse_ne_source(s.get<std::string>()));
        else if (s.is_array())
            for (const Json& item : s)
                c.ne_sources.push_back(parse_ne_source(item.get<std::string>()));
        else
            throw InputError("ne_source must be a string or a list of strings");
    }
    if (j.contains("caps")) {
        const Json& caps = j.at("caps");
        if (caps.contains("search"))
            c.caps.search.cap = get<std::uint64_t>(caps, "search");
        if (caps.contains("tilde"))
            c.caps.tilde_cap = get<std::uint64_t>(caps, "tilde");
    }
    if (j.contains("workers"))
        c.workers = get<unsigned>(j, "workers");
    validate(c);
    return c;
}

Json to_json(const SweepConfig& c)
{
    Json sources = Json::array();
    for (NeSource s : c.ne_sources)
        sources.push_back(to_string(s));
    return {{"m_range", range_json(c.m_range)},
            {"n_range", range_json(c.n_range)},
            {"length_range", range_json(c.length_range)},
            {"count", c.count},
            {"seed", c.seed},
            {"ne_source", sources},
            {"caps", {{"search", c.caps.search.cap}, {"tilde", c.caps.tilde_cap}}},
            {"workers", c.workers}};
}

Json summary_json(const SweepReport& report)
{
    Json max_by_m = Json::object();
    for (const auto& [m, r] : report.max_ratio_by_m)
        max_by_m[std::to_string(m)] = r.str();
    std::size_t structure = 0;
    std::size_t tilde = 0;
    std::size_t gated = 0;
    for (const auto& row : report.rows) {
        structure += row.structure_failures;
        tilde += row.tilde_failures;
        gated += row.gated_deviations;
    }
    return {{"rows", report.rows.size()},
            {"skipped", report.skipped()},
            {"all_pass", report.all_pass()},
            {"max_ratio_by_m", max_by_m},
            {"minimal_deviations", report.minimal_deviations()},
            {"structure_failures", structure},
            {"tilde_failures", tilde},
            {"gated_deviations", gated},
            {"failures", report.failures}};
}

} // namespace lbg
