#pragma once

#include "lbgame/checks.hpp"
#include "lbgame/coalition.hpp"
#include "lbgame/node_set.hpp"
#include "lbgame/ratio.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lbg {

/// A game in which co-located jobs sharing an action have been fused.
struct MergedGame {
    Instance instance;
    Assignment assignment;
    Deviation deviation;
    /// origin[k] = original jobs fused into merged job k (ascending).
    std::vector<std::vector<JobId>> origin;
};

/// Fuses jobs that share a source server and an action (same target, or both
/// staying) into one job of summed length. Merged jobs are ordered by their
/// smallest original index.
MergedGame merge_co_migrants(const Instance& instance, const Assignment& assignment, const Deviation& deviation);

/// Directed deviation graph restricted to the participating servers.
///
/// Nodes are indexed 0..k-1 in increasing server order; `server(i)` maps an
/// index back to the game's server id. The graph is the induced sub-game: all
/// loads, counts and partitions refer to participating servers only.
class DeviationGraph {
public:
    [[nodiscard]] int size() const { return static_cast<int>(servers_.size()); }
    /// Server count of the game the deviation was taken from.
    [[nodiscard]] int game_servers() const { return game_servers_; }
    [[nodiscard]] bool covers_all_servers() const { return size() == game_servers_; }
    [[nodiscard]] bool merged() const { return merged_; }

    [[nodiscard]] ServerId server(int node) const { return servers_[static_cast<std::size_t>(node)]; }
    [[nodiscard]] std::span<const ServerId> servers() const { return servers_; }
    /// Node index of a server, or -1 if it does not participate.
    [[nodiscard]] int node_of(ServerId s) const;

    [[nodiscard]] bool has_arc(int u, int v) const { return out_[static_cast<std::size_t>(u)].contains(v); }
    [[nodiscard]] NodeSet out(int u) const { return out_[static_cast<std::size_t>(u)]; }
    [[nodiscard]] NodeSet in(int v) const { return in_[static_cast<std::size_t>(v)]; }
    [[nodiscard]] int out_degree(int u) const { return out(u).size(); }
    [[nodiscard]] int in_degree(int v) const { return in(v).size(); }
    /// Arcs as (u, v) node-index pairs in lexicographic order.
    [[nodiscard]] std::vector<std::pair<int, int>> arcs() const;
    [[nodiscard]] std::size_t arc_count() const;
    [[nodiscard]] NodeSet all() const { return NodeSet::first(size()); }
    /// Q+(S): union of out-neighbourhoods.
    [[nodiscard]] NodeSet out(NodeSet s) const;

    /// a_i: jobs on the server before the deviation.
    [[nodiscard]] int jobs_at(int node) const { return job_counts_[static_cast<std::size_t>(node)]; }
    [[nodiscard]] Load load(int node) const { return loads_[static_cast<std::size_t>(node)]; }
    [[nodiscard]] Load post_load(int node) const { return post_loads_[static_cast<std::size_t>(node)]; }
    /// Loads divided by the minimum participating load (so the minimum is 1).
    /// Empty when some participating server starts empty.
    [[nodiscard]] const std::optional<std::vector<Ratio>>& scaled_loads() const { return scaled_; }

    /// M': every job leaves (a_i = out-degree).
    [[nodiscard]] NodeSet all_leave() const { return m_prime_; }
    /// M'': exactly one job stays (a_i = out-degree + 1).
    [[nodiscard]] NodeSet one_stays() const { return m_double_prime_; }

private:
    friend DeviationGraph build_graph(const Instance&, const Assignment&, const Deviation&);

    int game_servers_ = 0;
    bool merged_ = false;
    std::vector<ServerId> servers_;
    std::vector<NodeSet> out_;
    std::vector<NodeSet> in_;
    std::vector<int> job_counts_;
    std::vector<Load> loads_;
    std::vector<Load> post_loads_;
    std::optional<std::vector<Ratio>> scaled_;
    NodeSet m_prime_;
    NodeSet m_double_prime_;
};

/// Throws InputError if more than 64 servers participate.
DeviationGraph build_graph(const Instance& instance, const Assignment& assignment, const Deviation& deviation);

/// Check names, in report order.
namespace structure_check {
inline constexpr const char* out_degree_ge_1 = "out_degree_ge_1";
inline constexpr const char* si_ge_2 = "si_ge_2";
inline constexpr const char* in_degree_ge_1 = "in_degree_ge_1";
inline constexpr const char* strongly_connected = "strongly_connected";
inline constexpr const char* no_spanning_cycle_cover = "no_spanning_cycle_cover";
inline constexpr const char* degree_range = "degree_range";
inline constexpr const char* scaled_load_bound = "scaled_load_bound";
inline constexpr const char* arcs_Mprime_to_Mdoubleprime = "arcs_Mprime_to_Mdoubleprime";
} // namespace structure_check

using StructureReport = CheckList;

/// Evaluates the structural properties every improving deviation graph on a
/// Nash equilibrium must have. In-degree, strong connectivity and the
/// M' -> M'' arc rule hold only for minimal graphs and are reported
/// not-applicable unless `require_minimal`. The spanning cycle-cover rule is
/// checked only when every server of the game participates.
StructureReport check_structure(const DeviationGraph& graph, bool require_minimal);

/// A family of node-disjoint directed cycles covering every node, as a
/// successor per node, or nullopt if none exists. Decided by bipartite
/// perfect matching between out-copies and in-copies of the nodes.
std::optional<std::vector<int>> spanning_cycle_cover(const DeviationGraph& graph);

/// Graphviz rendering. Nodes read `server:load(a_i)`; arcs in `bold` (node
/// index pairs) are drawn bold, the rest solid.
std::string to_dot(const DeviationGraph& graph, std::span<const std::pair<int, int>> bold = {});

} // namespace lbg
