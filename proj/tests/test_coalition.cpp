#include "helpers.hpp"
#include "oracle.hpp"

#include "lbgame/coalition.hpp"
#include "lbgame/errors.hpp"
#include "lbgame/experiments.hpp"

#include <doctest.h>

#include <set>

using namespace lbg;
using testing::assign;
using testing::moves;
using testing::sorted;

namespace {

Ratio to_ratio(oracle::Frac f)
{
    return Ratio(f.num, f.den);
}

Deviation to_deviation(const std::vector<int>& target)
{
    std::vector<Move> mv;
    for (std::size_t j = 0; j < target.size(); ++j)
        if (target[j] >= 0)
            mv.push_back({static_cast<JobId>(j), target[j]});
    return Deviation(mv);
}

} // namespace

TEST_CASE("deviation construction")
{
    CHECK_THROWS_AS(Deviation({}), InputError);
    CHECK_THROWS_AS(Deviation({{0, 1}, {0, 2}}), InputError);
    Deviation d({{3, 0}, {1, 2}});
    CHECK(d.moves()[0].job == 1);
    CHECK(d.target_of(3) == 0);
    CHECK_FALSE(d.target_of(2).has_value());
}

TEST_CASE("apply_deviation on the lower-bound instance")
{
    auto [inst, ne] = figure1_instance();
    Deviation star = figure1_deviation();
    CHECK(star == moves({{1, 3}, {3, 3}, {5, 1}, {6, 2}}));
    Assignment after = apply_deviation(inst, ne, star);
    CHECK(std::vector<Load>(after.loads().begin(), after.loads().end()) == std::vector<Load>{8, 8, 4});
    Assignment single = apply_deviation(inst, ne, moves({{5, 1}}));
    CHECK(std::vector<Load>(single.loads().begin(), single.loads().end()) == std::vector<Load>{10, 5, 5});
    CHECK(apply_deviation(inst, after, star.inverse(ne)) == ne);

    CHECK_THROWS_AS(apply_deviation(inst, ne, moves({{1, 1}})), InputError);
    CHECK_THROWS_AS(apply_deviation(inst, ne, moves({{1, 4}})), InputError);
    CHECK_THROWS_AS(apply_deviation(inst, ne, moves({{7, 1}})), InputError);
}

TEST_CASE("evaluate_deviation")
{
    auto [inst, ne] = figure1_instance();
    DeviationReport r = evaluate_deviation(inst, ne, figure1_deviation());
    CHECK(r.improving);
    CHECK(r.min_ir == Ratio(5, 4));
    REQUIRE(r.per_job_ir.size() == 4);
    for (auto [job, ir] : r.per_job_ir)
        CHECK(ir == Ratio(5, 4));
    CHECK(r.post_loads == std::vector<Load>{8, 8, 4});

    DeviationReport single = evaluate_deviation(inst, ne, moves({{5, 1}}));
    CHECK_FALSE(single.improving);
    CHECK(single.min_ir == Ratio(1));

    // equality case: a member whose cost does not change
    Instance eq(2, {2, 2});
    DeviationReport same = evaluate_deviation(eq, assign(eq, {1, 2}), moves({{1, 2}, {2, 1}}));
    CHECK(same.min_ir == Ratio(1));
    CHECK_FALSE(same.improving);
}

TEST_CASE("worst_min_ir examples")
{
    auto [inst, ne] = figure1_instance();
    WorstDeviation w = worst_min_ir(inst, ne);
    CHECK(w.ratio == Ratio(5, 4));
    REQUIRE(w.witness);
    DeviationReport r = evaluate_deviation(inst, ne, *w.witness);
    CHECK(r.improving);
    CHECK(r.min_ir == w.ratio);
    CHECK(sorted(r.post_loads) == std::vector<Load>{4, 8, 8});

    Instance ones(3, {1, 1, 1});
    WorstDeviation sne = worst_min_ir(ones, assign(ones, {1, 2, 3}));
    CHECK(sne.ratio == Ratio(1));
    CHECK(sne.strong_equilibrium());

    Instance two(2, {3, 3, 2, 2});
    Assignment ne2 = assign(two, {1, 2, 1, 2});
    REQUIRE(is_nash(two, ne2).equilibrium());
    WorstDeviation w2 = worst_min_ir(two, ne2);
    CHECK(w2.ratio == Ratio(1));
    CHECK_FALSE(w2.witness);
}

TEST_CASE("worst_min_ir agrees with the naive oracle and across worker counts")
{
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        int m = 2 + static_cast<int>(seed % 3);
        int n = 1 + static_cast<int>(seed % 6);
        Instance inst = random_instance(m, n, {1, 6}, seed);
        for (const Assignment& a : {lpt_assignment(inst), random_start(inst, seed)}) {
            WorstDeviation fast = worst_min_ir(inst, a);
            CHECK(fast.ratio == to_ratio(oracle::worst_min_ir(inst, a)));
            WorstDeviation par = worst_min_ir(inst, a, {100'000'000, 3});
            CHECK(par.ratio == fast.ratio);
            CHECK(par.witness == fast.witness);
            if (fast.witness)
                CHECK(evaluate_deviation(inst, a, *fast.witness).min_ir == fast.ratio);
        }
    }
}

TEST_CASE("search cap")
{
    Instance inst(4, std::vector<Load>(10, 1));
    Assignment a = lpt_assignment(inst);
    CHECK(search_space_size(inst) == 1'048'576);
    CHECK_THROWS_AS(worst_min_ir(inst, a, {1000, 1}), CapExceeded);
    CHECK_THROWS_AS(enumerate_minimal_deviations(inst, a, {1000, 1}), CapExceeded);
}

TEST_CASE("is_minimal examples")
{
    auto [inst, ne] = figure1_instance();
    CHECK(is_minimal(inst, ne, figure1_deviation()));
    CHECK_THROWS_AS(is_minimal(inst, ne, moves({{5, 1}})), InputError);

    // Any improving two-job deviation on an NE is minimal.
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Instance r = random_instance(3, 5, {1, 6}, seed);
        Assignment a = lpt_assignment(r);
        oracle::for_each_improving(r, a, [&](const oracle::NaiveDeviation& d) {
            if (std::count_if(d.target.begin(), d.target.end(), [](int t) { return t >= 0; }) == 2)
                CHECK(is_minimal(r, a, to_deviation(d.target)));
        });
    }
}

TEST_CASE("non-minimal deviations are detected")
{
    // Brute-force scan for an improving deviation containing an improving
    // sub-deviation with at least its ratio.
    int found = 0;
    for (std::uint64_t seed = 0; seed < 200 && found < 20; ++seed) {
        Instance r = random_instance(3, 5, {1, 6}, seed);
        Assignment a = random_start(r, seed);
        std::vector<oracle::NaiveDeviation> all;
        oracle::for_each_improving(r, a, [&](const oracle::NaiveDeviation& d) { all.push_back(d); });
        for (const auto& d : all) {
            bool dominated = std::any_of(all.begin(), all.end(), [&](const oracle::NaiveDeviation& e) {
                return oracle::is_proper_subset(e.target, d.target) && !oracle::less(e.min_ir, d.min_ir);
            });
            if (dominated) {
                CHECK_FALSE(is_minimal(r, a, to_deviation(d.target)));
                ++found;
            }
        }
    }
    CHECK(found > 0);
}

TEST_CASE("minimal deviation enumeration agrees with the oracle")
{
    auto [inst, ne] = figure1_instance();
    auto fig = enumerate_minimal_deviations(inst, ne);
    bool has_star = std::any_of(fig.begin(), fig.end(),
                                [](const EvaluatedDeviation& d) { return d.deviation == figure1_deviation(); });
    CHECK(has_star);
    for (const auto& d : fig)
        CHECK(d.report.min_ir == Ratio(5, 4));

    Instance ones(3, {1, 1, 1});
    CHECK(enumerate_minimal_deviations(ones, assign(ones, {1, 2, 3})).empty());

    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        int m = 2 + static_cast<int>(seed % 3);
        int n = 2 + static_cast<int>(seed % 5);
        Instance r = random_instance(m, n, {1, 6}, seed);
        for (const Assignment& a : {lpt_assignment(r), random_start(r, seed)}) {
            std::set<std::vector<int>> want;
            for (const auto& d : oracle::minimal_deviations(r, a))
                want.insert(d.target);
            std::set<std::vector<int>> got;
            for (const auto& d : enumerate_minimal_deviations(r, a, {100'000'000, 2})) {
                std::vector<int> t(static_cast<std::size_t>(n), -1);
                for (const Move& mv : d.deviation.moves())
                    t[static_cast<std::size_t>(mv.job)] = mv.target;
                got.insert(t);
                CHECK(is_minimal(r, a, d.deviation));
            }
            CHECK(got == want);
        }
    }
}

TEST_CASE("two-server equilibria admit no minimal deviation")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Instance r = random_instance(2, 1 + static_cast<int>(seed % 8), {1, 10}, seed);
        for (const Assignment& ne : enumerate_nash(r))
            CHECK(enumerate_minimal_deviations(r, ne).empty());
    }
}

TEST_CASE("arc-inducing migrations respect r times post load at most pre load")
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Instance r = random_instance(3, 6, {1, 8}, seed);
        for (const Assignment& ne : {lpt_assignment(r)}) {
            oracle::for_each_improving(r, ne, [&](const oracle::NaiveDeviation& d) {
                Deviation dev = to_deviation(d.target);
                DeviationReport rep = evaluate_deviation(r, ne, dev);
                for (const Move& mv : dev.moves()) {
                    Load pre = ne.load(ne.server_of(mv.job));
                    Load post = rep.post_loads[static_cast<std::size_t>(mv.target)];
                    CHECK(rep.min_ir * Ratio(post) <= Ratio(pre));
                }
            });
        }
    }
}
