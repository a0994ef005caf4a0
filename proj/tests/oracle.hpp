#pragma once

// Naive reference implementations used to cross-check the optimized code.
// Plain recursion, loads recomputed from scratch, no pruning, no shared
// helpers with the library beyond the input value types.

#include "lbgame/game.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using lbg::Load;

// Fraction num/den with den > 0, compared by cross multiplication.
struct Frac {
    std::int64_t num = 1;
    std::int64_t den = 1;
};

inline bool less(Frac a, Frac b)
{
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

inline bool equal(Frac a, Frac b)
{
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
}

inline Frac reduced(Frac f)
{
    std::int64_t g = std::gcd(f.num, f.den);
    return {f.num / g, f.den / g};
}

// target[j] == -1 means job j stays.
struct NaiveDeviation {
    std::vector<int> target;
    Frac min_ir;
};

// Calls visit for every improving deviation (every member strictly better).
inline void for_each_improving(const lbg::Instance& inst, const lbg::Assignment& asg,
                               const std::function<void(const NaiveDeviation&)>& visit)
{
    const int n = inst.job_count();
    const int m = inst.servers();
    std::vector<int> target(static_cast<std::size_t>(n), -1);
    std::function<void(int)> rec = [&](int j) {
        if (j == n) {
            std::vector<Load> post(static_cast<std::size_t>(m), 0);
            bool any = false;
            for (int k = 0; k < n; ++k) {
                int s = target[k] < 0 ? asg.server_of(k) : target[k];
                post[static_cast<std::size_t>(s)] += inst.length(k);
                any = any || target[k] >= 0;
            }
            if (!any)
                return;
            std::optional<Frac> worst;
            for (int k = 0; k < n; ++k) {
                if (target[k] < 0)
                    continue;
                Frac ir{asg.load(asg.server_of(k)), post[static_cast<std::size_t>(target[k])]};
                if (!less(Frac{1, 1}, ir))
                    return;
                if (!worst || less(ir, *worst))
                    worst = ir;
            }
            visit({target, reduced(*worst)});
            return;
        }
        target[j] = -1;
        rec(j + 1);
        for (int s = 0; s < m; ++s) {
            if (s == asg.server_of(j))
                continue;
            target[j] = s;
            rec(j + 1);
        }
        target[j] = -1;
    };
    rec(0);
}

// Largest min-IR over all improving deviations, 1/1 if there is none.
inline Frac worst_min_ir(const lbg::Instance& inst, const lbg::Assignment& asg)
{
    Frac best{1, 1};
    for_each_improving(inst, asg, [&](const NaiveDeviation& d) {
        if (less(best, d.min_ir))
            best = d.min_ir;
    });
    return best;
}

inline bool is_proper_subset(const std::vector<int>& small, const std::vector<int>& big)
{
    bool strict = false;
    for (std::size_t k = 0; k < small.size(); ++k) {
        if (small[k] >= 0 && big[k] < 0)
            return false;
        if (small[k] < 0 && big[k] >= 0)
            strict = true;
    }
    return strict;
}

// All minimal improving deviations: every improving deviation on a strictly
// smaller coalition has strictly smaller min-IR. Quadratic; tiny inputs only.
inline std::vector<NaiveDeviation> minimal_deviations(const lbg::Instance& inst, const lbg::Assignment& asg)
{
    std::vector<NaiveDeviation> all;
    for_each_improving(inst, asg, [&](const NaiveDeviation& d) { all.push_back(d); });
    std::vector<NaiveDeviation> out;
    for (const auto& d : all) {
        bool minimal = std::none_of(all.begin(), all.end(), [&](const NaiveDeviation& e) {
            return is_proper_subset(e.target, d.target) && !less(e.min_ir, d.min_ir);
        });
        if (minimal)
            out.push_back(d);
    }
    return out;
}

// Brute force: does some permutation pi with (i, pi(i)) an arc for all i exist?
inline bool has_cycle_cover(int k, const std::vector<std::pair<int, int>>& arcs)
{
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            ok = std::find(arcs.begin(), arcs.end(), std::pair{i, perm[static_cast<std::size_t>(i)]}) != arcs.end();
        if (ok)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// Every job assignment that is a Nash equilibrium, by direct filtering.
inline std::vector<std::vector<int>> nash_assignments(const lbg::Instance& inst)
{
    const int n = inst.job_count();
    const int m = inst.servers();
    std::vector<std::vector<int>> out;
    std::vector<int> s(static_cast<std::size_t>(n), 0);
    std::function<void(int)> rec = [&](int j) {
        if (j == n) {
            std::vector<Load> load(static_cast<std::size_t>(m), 0);
            for (int k = 0; k < n; ++k)
                load[static_cast<std::size_t>(s[k])] += inst.length(k);
            for (int k = 0; k < n; ++k)
                for (int t = 0; t < m; ++t)
                    if (t != s[k] && load[t] + inst.length(k) < load[s[k]])
                        return;
            out.push_back(s);
            return;
        }
        for (int t = 0; t < m; ++t) {
            s[j] = t;
            rec(j + 1);
        }
    };
    rec(0);
    return out;
}

} // namespace oracle
