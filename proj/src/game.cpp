#include "lbgame/game.hpp"

#include "lbgame/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace lbg {

Instance::Instance(int servers, std::vector<Load> jobs)
    : servers_(servers)
    , jobs_(std::move(jobs))
{
    if (servers_ < 1)
        throw InputError("server count must be at least 1");
    if (jobs_.empty())
        throw InputError("instance needs at least one job");
    for (std::size_t j = 0; j < jobs_.size(); ++j)
        if (jobs_[j] < 1)
            throw InputError("job " + std::to_string(j + 1) + " has non-positive length");
}

Load Instance::total_length() const
{
    return std::accumulate(jobs_.begin(), jobs_.end(), Load{0});
}

std::vector<JobId> Assignment::jobs_on(ServerId s) const
{
    std::vector<JobId> out;
    for (JobId j = 0; j < job_count(); ++j)
        if (server_of(j) == s)
            out.push_back(j);
    return out;
}

Assignment compute_loads(const Instance& instance, std::vector<ServerId> server_of)
{
    if (static_cast<int>(server_of.size()) != instance.job_count())
        throw InputError("assignment lists " + std::to_string(server_of.size()) + " jobs, instance has "
                         + std::to_string(instance.job_count()));
    Assignment a;
    a.loads_.assign(static_cast<std::size_t>(instance.servers()), 0);
    for (JobId j = 0; j < instance.job_count(); ++j) {
        ServerId s = server_of[static_cast<std::size_t>(j)];
        if (s < 0 || s >= instance.servers())
            throw InputError("job " + std::to_string(j + 1) + " assigned to server " + std::to_string(s + 1)
                             + " outside [1.." + std::to_string(instance.servers()) + "]");
        a.loads_[static_cast<std::size_t>(s)] += instance.length(j);
    }
    a.server_of_ = std::move(server_of);
    return a;
}

NashWitness is_nash(const Instance& instance, const Assignment& assignment)
{
    for (JobId j = 0; j < instance.job_count(); ++j) {
        ServerId from = assignment.server_of(j);
        Load cost = assignment.load(from);
        for (ServerId to = 0; to < instance.servers(); ++to) {
            if (to == from)
                continue;
            Load moved = assignment.load(to) + instance.length(j);
            if (moved < cost)
                return {ImprovingMove{j, from, to, cost, moved}};
        }
    }
    return {};
}

namespace {

// Cheapest alternative server for job j (lowest index on ties), if it strictly improves.
std::optional<ImprovingMove> best_move(const Instance& instance, std::span<const ServerId> server_of,
                                       std::span<const Load> loads, JobId j)
{
    ServerId from = server_of[static_cast<std::size_t>(j)];
    Load cost = loads[static_cast<std::size_t>(from)];
    std::optional<ImprovingMove> best;
    for (ServerId to = 0; to < instance.servers(); ++to) {
        if (to == from)
            continue;
        Load moved = loads[static_cast<std::size_t>(to)] + instance.length(j);
        if (moved < cost && (!best || moved < best->new_cost))
            best = ImprovingMove{j, from, to, cost, moved};
    }
    return best;
}

} // namespace

Assignment best_response_dynamics(const Instance& instance, Assignment start, OrderPolicy policy)
{
    std::vector<ServerId> server_of(start.servers_of().begin(), start.servers_of().end());
    std::vector<Load> loads(start.loads().begin(), start.loads().end());
    if (static_cast<int>(server_of.size()) != instance.job_count()
        || static_cast<int>(loads.size()) != instance.servers())
        throw InputError("start assignment does not match instance");

    auto apply = [&](const ImprovingMove& mv) {
        loads[static_cast<std::size_t>(mv.from)] -= instance.length(mv.job);
        loads[static_cast<std::size_t>(mv.to)] += instance.length(mv.job);
        server_of[static_cast<std::size_t>(mv.job)] = mv.to;
    };

    // Every strict improvement lowers the sorted load vector lexicographically
    // from the top, so both loops terminate.
    if (policy == OrderPolicy::RoundRobin) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (JobId j = 0; j < instance.job_count(); ++j) {
                if (auto mv = best_move(instance, server_of, loads, j)) {
                    apply(*mv);
                    moved = true;
                }
            }
        }
    } else {
        for (;;) {
            std::optional<ImprovingMove> pick;
            for (JobId j = 0; j < instance.job_count(); ++j) {
                auto mv = best_move(instance, server_of, loads, j);
                if (mv && (!pick || mv->old_cost - mv->new_cost > pick->old_cost - pick->new_cost))
                    pick = mv;
            }
            if (!pick)
                break;
            apply(*pick);
        }
    }
    return compute_loads(instance, std::move(server_of));
}

Assignment lpt_assignment(const Instance& instance)
{
    std::vector<JobId> order(static_cast<std::size_t>(instance.job_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](JobId a, JobId b) { return instance.length(a) > instance.length(b); });

    std::vector<Load> loads(static_cast<std::size_t>(instance.servers()), 0);
    std::vector<ServerId> server_of(order.size(), 0);
    for (JobId j : order) {
        auto it = std::min_element(loads.begin(), loads.end());
        *it += instance.length(j);
        server_of[static_cast<std::size_t>(j)] = static_cast<ServerId>(it - loads.begin());
    }
    return compute_loads(instance, std::move(server_of));
}

std::vector<Assignment> enumerate_nash(const Instance& instance)
{
    const int n = instance.job_count();
    const int m = instance.servers();
    std::vector<ServerId> digits(static_cast<std::size_t>(n), 0);
    std::vector<Assignment> out;
    for (;;) {
        Assignment a = compute_loads(instance, digits);
        if (is_nash(instance, a).equilibrium())
            out.push_back(std::move(a));
        int k = 0;
        while (k < n && ++digits[static_cast<std::size_t>(k)] == m)
            digits[static_cast<std::size_t>(k++)] = 0;
        if (k == n)
            break;
    }
    return out;
}

} // namespace lbg
