#include "helpers.hpp"

#include "lbgame/analysis.hpp"
#include "lbgame/errors.hpp"
#include "lbgame/experiments.hpp"
#include "lbgame/tilde.hpp"

#include <doctest.h>

#include <random>

using namespace lbg;
using testing::arc_game;
using testing::graph_of;

namespace {

std::vector<int> servers_1based(const DeviationGraph& g, NodeSet s)
{
    std::vector<int> out;
    for (int i : s)
        out.push_back(g.server(i) + 1);
    return out;
}

std::vector<std::pair<int, int>> arcs_1based(const DeviationGraph& g, const TildeArcSet& t)
{
    std::vector<std::pair<int, int>> out;
    for (auto [u, v] : t.arcs())
        out.emplace_back(g.server(u) + 1, g.server(v) + 1);
    std::sort(out.begin(), out.end());
    return out;
}

DeviationGraph figure1_graph()
{
    auto [inst, ne] = figure1_instance();
    return build_graph(inst, ne, figure1_deviation());
}

// Minimal deviation graphs from small random equilibria.
std::vector<DeviationGraph> sample_graphs(int instances)
{
    std::vector<DeviationGraph> out;
    for (std::uint64_t seed = 0; seed < static_cast<std::uint64_t>(instances); ++seed) {
        Instance inst = random_instance(3 + static_cast<int>(seed % 2), 5 + static_cast<int>(seed % 3), {1, 8}, seed);
        for (const Assignment& ne : enumerate_nash(inst).size() < 40 ? enumerate_nash(inst)
                                                                      : std::vector<Assignment>{lpt_assignment(inst)})
            for (const auto& d : enumerate_minimal_deviations(inst, ne)) {
                MergedGame mg = merge_co_migrants(inst, ne, d.deviation);
                out.push_back(build_graph(mg.instance, mg.assignment, mg.deviation));
            }
    }
    return out;
}

const std::vector<DeviationGraph>& samples()
{
    static const std::vector<DeviationGraph> graphs = sample_graphs(120);
    return graphs;
}

} // namespace

TEST_CASE("tilde enumeration on the lower-bound graph")
{
    DeviationGraph g = figure1_graph();
    auto sets = enumerate_tilde_sets(g);
    REQUIRE(sets.size() == 2);
    std::vector<std::vector<std::pair<int, int>>> got{arcs_1based(g, sets[0]), arcs_1based(g, sets[1])};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == std::vector<std::pair<int, int>>{{1, 3}, {3, 1}, {3, 2}});
    CHECK(got[1] == std::vector<std::pair<int, int>>{{2, 3}, {3, 1}, {3, 2}});
    for (const auto& t : sets)
        CHECK(t.valid_for(g));
}

TEST_CASE("tilde enumeration edge cases")
{
    DeviationGraph cycle = graph_of(arc_game(3, {{0, 1}, {1, 2}, {2, 0}}));
    auto sets = enumerate_tilde_sets(cycle);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].arcs().size() == 3);

    TildeClassification c = classify(cycle, sets[0]);
    CHECK(c.b == std::vector<int>{1, 1, 1});
    CHECK(c.W0.empty());
    InequalityReport r = verify_inequalities(cycle, c, Ratio(1), KeyMinimum::Unknown);
    CHECK(r.checks.at("W0_nonempty").status == CheckStatus::Fail);

    DeviationGraph source = graph_of(arc_game(2, {{0, 1}}));
    CHECK_THROWS_AS(enumerate_tilde_sets(source), InputError);

    // complete digraph on 5 nodes: 4^5 tilde sets
    std::vector<std::pair<int, int>> all;
    for (int u = 0; u < 5; ++u)
        for (int v = 0; v < 5; ++v)
            if (u != v)
                all.emplace_back(u, v);
    DeviationGraph k5 = graph_of(arc_game(5, all));
    CHECK(enumerate_tilde_sets(k5).size() == 1024);
    CHECK_THROWS_AS(enumerate_tilde_sets(k5, 1000), CapExceeded);
}

TEST_CASE("classification of the lower-bound graph")
{
    DeviationGraph g = figure1_graph();
    TildeArcSet t{{2, 2, 0}};  // (3,1), (3,2), (1,3)
    REQUIRE(t.valid_for(g));
    TildeClassification c = classify(g, t);
    CHECK(c.b == std::vector<int>{1, 0, 2});
    CHECK(servers_1based(g, c.W0) == std::vector<int>{2});
    CHECK(servers_1based(g, c.W0tilde) == std::vector<int>{3});
    CHECK(servers_1based(g, c.W1) == std::vector<int>{1});
    CHECK(servers_1based(g, c.W1tilde) == std::vector<int>{3});
    CHECK(servers_1based(g, c.W) == std::vector<int>{1, 2, 3});
    CHECK(servers_1based(g, c.M(2, 2)) == std::vector<int>{3});
    CHECK(servers_1based(g, c.M(2, 1)) == std::vector<int>{1});
    CHECK(servers_1based(g, c.M(2, 0)) == std::vector<int>{2});
    CHECK(servers_1based(g, c.X) == std::vector<int>{3});
    CHECK(servers_1based(g, c.Xt[1]) == std::vector<int>{3});
    for (int k = 2; k <= 6; ++k)
        CHECK(c.Xt[static_cast<std::size_t>(k)].empty());
    CHECK(servers_1based(g, c.Yt[1]) == std::vector<int>{1});
    CHECK(c.Omega.empty());
    CHECK(c.Pi.empty());
    CHECK(c.key() == SelectionKey{1, 1, 0, 0});
}

TEST_CASE("selection on the lower-bound graph")
{
    DeviationGraph g = figure1_graph();
    for (const auto& t : enumerate_tilde_sets(g))
        CHECK(classify(g, t).key() == SelectionKey{1, 1, 0, 0});
    TildeClassification c = select_tilde(g);
    CHECK(arcs_1based(g, c.tilde) == std::vector<std::pair<int, int>>{{1, 3}, {3, 1}, {3, 2}});

    DeviationGraph cycle = graph_of(arc_game(3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK(select_tilde(cycle).tilde == enumerate_tilde_sets(cycle)[0]);
}

TEST_CASE("inequalities on the lower-bound deviation")
{
    DeviationGraph g = figure1_graph();
    TildeClassification c = select_tilde(g);
    InequalityReport r = verify_inequalities(g, c, Ratio(5, 4), KeyMinimum::Attained);
    CHECK(r.r_measured == Ratio(5, 4));
    CHECK(r.eq7_rhs == Ratio(5, 4));
    CHECK(r.eq8_lhs == Ratio(1));
    CHECK(r.eq8_rhs == Ratio(1));
    REQUIRE(r.xy_bounds.size() == 6);
    CHECK(r.xy_bounds[0].x_size == 1);
    CHECK(r.xy_bounds[0].y_size == 1);
    CHECK(r.disjointness_pass);
    for (const Check& ck : r.checks.all())
        CHECK_MESSAGE(ck.status == CheckStatus::Pass, ck.name);

    // r above the bound must be flagged
    InequalityReport bad = verify_inequalities(g, c, Ratio(4, 3), KeyMinimum::Attained);
    CHECK(bad.checks.at("r_le_weighted_b_average").status == CheckStatus::Fail);
    CHECK(bad.checks.at("r_le_5_4").status == CheckStatus::Fail);
    CHECK_THROWS_AS(require_passed(bad.checks, "lower bound"), VerificationFailure);
}

TEST_CASE("company check is gated on the key minimum")
{
    DeviationGraph g = figure1_graph();
    TildeClassification c = select_tilde(g);
    CHECK(verify_inequalities(g, c, Ratio(5, 4), KeyMinimum::NotAttained).checks.at("company_exists").status
          == CheckStatus::NotApplicable);
    CHECK(verify_inequalities(g, c, Ratio(5, 4), KeyMinimum::Unknown).checks.at("company_exists").status
          == CheckStatus::NotApplicable);
}

TEST_CASE("enumerated tilde sets satisfy one in-arc per node and sum of b equals arc count")
{
    REQUIRE(!samples().empty());
    for (const DeviationGraph& g : samples()) {
        for (const auto& t : enumerate_tilde_sets(g)) {
            CHECK(t.valid_for(g));
            TildeClassification c = classify(g, t);
            int sum = 0;
            for (int b : c.b)
                sum += b;
            CHECK(sum == g.size());
            CHECK(c.W0.disjoint(c.W1));
        }
    }
}

TEST_CASE("selected classifications on minimal graphs")
{
    for (const DeviationGraph& g : samples()) {
        TildeClassification c = select_tilde(g);
        CHECK_FALSE(c.W0.empty());
        CHECK(c.Omega.empty());
        CHECK(c.W1.size() == c.W1tilde.size());
        CHECK(c.W1.size() > 0);
        for (int i : c.W1)
            CHECK(c.b[static_cast<std::size_t>(i)] == 1);
        bool small_b = std::all_of(c.b.begin(), c.b.end(), [](int b) { return b <= 1; });
        if (small_b) {
            InequalityReport r = verify_inequalities(g, c, Ratio(1), KeyMinimum::Unknown);
            Ratio top = *std::max_element(g.scaled_loads()->begin(), g.scaled_loads()->end());
            CHECK(r.eq7_rhs <= top);
        }
    }
}

TEST_CASE("exhaustive selection is never beaten by an arc swap")
{
    // Minimal deviation graphs plus random digraphs in which every node has
    // an in-arc; the latter are where Omega is non-empty.
    std::vector<DeviationGraph> graphs = samples();
    std::mt19937_64 rng(11);
    while (graphs.size() < samples().size() + 3000) {
        int k = 2 + static_cast<int>(rng() % 4);
        std::vector<std::pair<int, int>> arcs;
        for (int u = 0; u < k; ++u)
            for (int v = 0; v < k; ++v)
                if (u != v && rng() % 5 < 2)
                    arcs.emplace_back(u, v);
        if (arcs.empty())
            continue;
        DeviationGraph g = graph_of(arc_game(k, arcs));
        bool fed = true;
        for (int i = 0; i < g.size(); ++i)
            fed = fed && g.in_degree(i) > 0;
        if (fed && g.covers_all_servers())
            graphs.push_back(std::move(g));
    }
    int swaps = 0;
    for (const DeviationGraph& g : graphs) {
        if (g.size() > 5)
            continue;
        SelectionKey best = select_tilde(g).key();
        for (const auto& t : enumerate_tilde_sets(g)) {
            TildeClassification c = classify(g, t);
            for (int i : c.Omega) {
                for (int h : omega_swap_candidates(g, t, i)) {
                    TildeArcSet swapped = swap_in_arc(t, i, h);
                    REQUIRE(swapped.valid_for(g));
                    CHECK_FALSE(classify(g, swapped).key() < best);
                    ++swaps;
                }
            }
        }
    }
    CHECK(swaps > 0);
}

TEST_CASE("analysis of minimal deviations passes every check")
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Instance inst = random_instance(3, 6, {1, 6}, seed);
        for (const Assignment& ne : enumerate_nash(inst)) {
            EquilibriumAnalysis a = analyze_equilibrium(inst, ne);
            CHECK(a.passed());
            CHECK(a.worst.ratio <= Ratio(5, 4));
        }
    }
}

TEST_CASE("worst ratio is invariant under server relabeling")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Instance inst = random_instance(3, 6, {1, 8}, seed);
        Assignment ne = lpt_assignment(inst);
        std::vector<ServerId> perm{1, 2, 0};
        std::vector<ServerId> relabeled;
        for (ServerId s : ne.servers_of())
            relabeled.push_back(perm[static_cast<std::size_t>(s)]);
        Assignment other = compute_loads(inst, relabeled);
        CHECK(worst_min_ir(inst, ne).ratio == worst_min_ir(inst, other).ratio);
        CHECK(enumerate_minimal_deviations(inst, ne).size() == enumerate_minimal_deviations(inst, other).size());
    }
}
