#pragma once

#include "lbgame/coalition.hpp"
#include "lbgame/deviation_graph.hpp"
#include "lbgame/game.hpp"

#include <utility>
#include <vector>

namespace testing {

// Assignment from 1-based server numbers.
inline lbg::Assignment assign(const lbg::Instance& inst, std::vector<int> servers_1based)
{
    for (int& s : servers_1based)
        --s;
    return lbg::compute_loads(inst, std::move(servers_1based));
}

// Deviation from 1-based (job, server) pairs.
inline lbg::Deviation moves(std::initializer_list<std::pair<int, int>> pairs)
{
    std::vector<lbg::Move> out;
    for (auto [j, s] : pairs)
        out.push_back({j - 1, s - 1});
    return lbg::Deviation(std::move(out));
}

// A game realizing an arbitrary digraph on k servers: one unit job per arc,
// placed on the tail and moving to the head.
struct ArcGame {
    lbg::Instance instance;
    lbg::Assignment assignment;
    lbg::Deviation deviation;
};

inline ArcGame arc_game(int k, const std::vector<std::pair<int, int>>& arcs)
{
    std::vector<lbg::Load> jobs(arcs.size(), 1);
    lbg::Instance inst(k, jobs);
    std::vector<lbg::ServerId> server_of;
    std::vector<lbg::Move> mv;
    for (std::size_t j = 0; j < arcs.size(); ++j) {
        server_of.push_back(arcs[j].first);
        mv.push_back({static_cast<lbg::JobId>(j), arcs[j].second});
    }
    lbg::Assignment asg = lbg::compute_loads(inst, server_of);
    return {inst, asg, lbg::Deviation(mv)};
}

inline lbg::DeviationGraph graph_of(const ArcGame& g)
{
    return lbg::build_graph(g.instance, g.assignment, g.deviation);
}

inline std::vector<lbg::Load> sorted(std::span<const lbg::Load> v)
{
    std::vector<lbg::Load> out(v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace testing
