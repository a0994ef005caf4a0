#include "lbgame/deviation_graph.hpp"

#include "lbgame/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace lbg {

MergedGame merge_co_migrants(const Instance& instance, const Assignment& assignment, const Deviation& deviation)
{
    apply_deviation(instance, assignment, deviation);

    constexpr ServerId stays = -1;
    std::map<std::pair<ServerId, ServerId>, int> group_of;
    std::vector<std::vector<JobId>> origin;
    std::vector<Load> lengths;
    std::vector<ServerId> server_of;
    std::vector<Move> moves;
    for (JobId j = 0; j < instance.job_count(); ++j) {
        ServerId action = deviation.target_of(j).value_or(stays);
        auto [it, fresh] = group_of.try_emplace({assignment.server_of(j), action}, static_cast<int>(origin.size()));
        if (fresh) {
            origin.emplace_back();
            lengths.push_back(0);
            server_of.push_back(assignment.server_of(j));
            if (action != stays)
                moves.push_back({it->second, action});
        }
        origin[static_cast<std::size_t>(it->second)].push_back(j);
        lengths[static_cast<std::size_t>(it->second)] += instance.length(j);
    }
    Instance merged(instance.servers(), std::move(lengths));
    Assignment merged_assignment = compute_loads(merged, std::move(server_of));
    return {std::move(merged), std::move(merged_assignment), Deviation(std::move(moves)), std::move(origin)};
}

int DeviationGraph::node_of(ServerId s) const
{
    auto it = std::lower_bound(servers_.begin(), servers_.end(), s);
    return it != servers_.end() && *it == s ? static_cast<int>(it - servers_.begin()) : -1;
}

std::vector<std::pair<int, int>> DeviationGraph::arcs() const
{
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < size(); ++u)
        for (int v : out_[static_cast<std::size_t>(u)])
            out.emplace_back(u, v);
    return out;
}

std::size_t DeviationGraph::arc_count() const
{
    std::size_t total = 0;
    for (NodeSet s : out_)
        total += static_cast<std::size_t>(s.size());
    return total;
}

NodeSet DeviationGraph::out(NodeSet s) const
{
    NodeSet acc;
    for (int u : s)
        acc |= out(u);
    return acc;
}

DeviationGraph build_graph(const Instance& instance, const Assignment& assignment, const Deviation& deviation)
{
    Assignment after = apply_deviation(instance, assignment, deviation);

    DeviationGraph g;
    g.game_servers_ = instance.servers();
    for (const Move& mv : deviation.moves()) {
        g.servers_.push_back(assignment.server_of(mv.job));
        g.servers_.push_back(mv.target);
    }
    std::sort(g.servers_.begin(), g.servers_.end());
    g.servers_.erase(std::unique(g.servers_.begin(), g.servers_.end()), g.servers_.end());
    if (g.servers_.size() > 64)
        throw InputError("deviation graphs support at most 64 participating servers");

    const auto k = g.servers_.size();
    g.out_.assign(k, NodeSet{});
    g.in_.assign(k, NodeSet{});
    g.job_counts_.assign(k, 0);
    for (const Move& mv : deviation.moves()) {
        int u = g.node_of(assignment.server_of(mv.job));
        int v = g.node_of(mv.target);
        g.out_[static_cast<std::size_t>(u)].insert(v);
        g.in_[static_cast<std::size_t>(v)].insert(u);
    }

    g.merged_ = true;
    std::map<std::pair<ServerId, ServerId>, int> actions;
    for (JobId j = 0; j < instance.job_count(); ++j) {
        int node = g.node_of(assignment.server_of(j));
        if (node < 0)
            continue;
        ++g.job_counts_[static_cast<std::size_t>(node)];
        if (++actions[{assignment.server_of(j), deviation.target_of(j).value_or(-1)}] > 1)
            g.merged_ = false;
    }

    Load min_load = 0;
    for (std::size_t i = 0; i < k; ++i) {
        g.loads_.push_back(assignment.load(g.servers_[i]));
        g.post_loads_.push_back(after.load(g.servers_[i]));
        min_load = i == 0 ? g.loads_[i] : std::min(min_load, g.loads_[i]);
        int a = g.job_counts_[i];
        int d = g.out_[i].size();
        if (a == d)
            g.m_prime_.insert(static_cast<int>(i));
        else if (a == d + 1)
            g.m_double_prime_.insert(static_cast<int>(i));
    }
    if (min_load > 0) {
        std::vector<Ratio> scaled;
        for (Load l : g.loads_)
            scaled.emplace_back(l, min_load);
        g.scaled_ = std::move(scaled);
    }
    return g;
}

namespace {

NodeSet reachable(const DeviationGraph& g, int start, bool forward)
{
    NodeSet seen = NodeSet::single(start);
    NodeSet frontier = seen;
    while (!frontier.empty()) {
        NodeSet next;
        for (int u : frontier)
            next |= forward ? g.out(u) : g.in(u);
        frontier = next - seen;
        seen |= next;
    }
    return seen;
}

std::vector<ServerId> servers_of(const DeviationGraph& g, NodeSet s)
{
    std::vector<ServerId> out;
    for (int i : s)
        out.push_back(g.server(i));
    return out;
}

} // namespace

std::optional<std::vector<int>> spanning_cycle_cover(const DeviationGraph& graph)
{
    const int k = graph.size();
    std::vector<int> match_in(static_cast<std::size_t>(k), -1);

    // Kuhn's augmenting paths: left = out-copies, right = in-copies.
    auto augment = [&](auto& self, int u, NodeSet& visited) -> bool {
        for (int v : graph.out(u)) {
            if (visited.contains(v))
                continue;
            visited.insert(v);
            int& owner = match_in[static_cast<std::size_t>(v)];
            if (owner < 0 || self(self, owner, visited)) {
                owner = u;
                return true;
            }
        }
        return false;
    };
    for (int u = 0; u < k; ++u) {
        NodeSet visited;
        if (!augment(augment, u, visited))
            return std::nullopt;
    }
    std::vector<int> succ(static_cast<std::size_t>(k), -1);
    for (int v = 0; v < k; ++v)
        succ[static_cast<std::size_t>(match_in[static_cast<std::size_t>(v)])] = v;
    return succ;
}

StructureReport check_structure(const DeviationGraph& g, bool require_minimal)
{
    namespace sc = structure_check;
    StructureReport report;
    const NodeSet all = g.all();

    NodeSet no_out;
    NodeSet few_jobs;
    NodeSet no_in;
    for (int i = 0; i < g.size(); ++i) {
        if (g.out_degree(i) < 1)
            no_out.insert(i);
        if (g.jobs_at(i) < 2)
            few_jobs.insert(i);
        if (g.in_degree(i) < 1)
            no_in.insert(i);
    }
    report.expect(sc::out_degree_ge_1, no_out.empty(), {servers_of(g, no_out), {}, "nodes without out-arcs"});
    report.expect(sc::si_ge_2, few_jobs.empty(), {servers_of(g, few_jobs), {}, "servers holding fewer than 2 jobs"});

    if (require_minimal) {
        report.expect(sc::in_degree_ge_1, no_in.empty(), {servers_of(g, no_in), {}, "nodes without in-arcs"});
        NodeSet cut = (all - reachable(g, 0, true)) | (all - reachable(g, 0, false));
        report.expect(sc::strongly_connected, cut.empty(),
                      {servers_of(g, cut), {}, "not mutually reachable with server " + std::to_string(g.server(0) + 1)});
    } else {
        report.skip(sc::in_degree_ge_1, "graph not known to be minimal");
        report.skip(sc::strongly_connected, "graph not known to be minimal");
    }

    if (g.covers_all_servers()) {
        auto cover = spanning_cycle_cover(g);
        Witness w{{}, {}, "node-disjoint cycles covering every server"};
        if (cover)
            for (int u = 0; u < g.size(); ++u)
                w.arcs.emplace_back(g.server(u), g.server((*cover)[static_cast<std::size_t>(u)]));
        report.expect(sc::no_spanning_cycle_cover, !cover, std::move(w));
    } else {
        report.skip(sc::no_spanning_cycle_cover, "not every server participates");
    }

    if (g.merged()) {
        NodeSet bad;
        for (int i = 0; i < g.size(); ++i) {
            int a = g.jobs_at(i);
            int d = g.out_degree(i);
            if (a < 2 || a > g.size() || (d != a && d != a - 1))
                bad.insert(i);
        }
        report.expect(sc::degree_range, bad.empty(),
                      {servers_of(g, bad), {}, "need 2 <= a_i <= |V| and out-degree in {a_i - 1, a_i}"});
    } else {
        report.skip(sc::degree_range, "co-migrants not merged");
    }

    if (!g.scaled_loads()) {
        NodeSet empty;
        for (int i = 0; i < g.size(); ++i)
            if (g.load(i) == 0)
                empty.insert(i);
        report.fail(sc::scaled_load_bound, {servers_of(g, empty), {}, "participating server with zero load"});
    } else {
        NodeSet bad;
        for (int i = 0; i < g.size(); ++i) {
            int a = g.jobs_at(i);
            if (a < 2 || (*g.scaled_loads())[static_cast<std::size_t>(i)] > Ratio(a, a - 1))
                bad.insert(i);
        }
        report.expect(sc::scaled_load_bound, bad.empty(), {servers_of(g, bad), {}, "scaled load exceeds a_i/(a_i-1)"});
    }

    if (require_minimal) {
        Witness w{{}, {}, "arc leaves M' but does not enter M''"};
        for (auto [u, v] : g.arcs())
            if (g.all_leave().contains(u) && !g.one_stays().contains(v))
                w.arcs.emplace_back(g.server(u), g.server(v));
        report.expect(sc::arcs_Mprime_to_Mdoubleprime, w.arcs.empty(), std::move(w));
    } else {
        report.skip(sc::arcs_Mprime_to_Mdoubleprime, "graph not known to be minimal");
    }
    return report;
}

std::string to_dot(const DeviationGraph& g, std::span<const std::pair<int, int>> bold)
{
    std::ostringstream os;
    os << "digraph deviation {\n  node [shape=circle];\n";
    for (int i = 0; i < g.size(); ++i)
        os << "  s" << g.server(i) + 1 << " [label=\"" << g.server(i) + 1 << ':' << g.load(i) << '(' << g.jobs_at(i)
           << ")\"];\n";
    for (auto [u, v] : g.arcs()) {
        bool heavy = std::find(bold.begin(), bold.end(), std::pair{u, v}) != bold.end();
        os << "  s" << g.server(u) + 1 << " -> s" << g.server(v) + 1 << (heavy ? " [style=bold];\n" : ";\n");
    }
    os << "}\n";
    return os.str();
}

} // namespace lbg
