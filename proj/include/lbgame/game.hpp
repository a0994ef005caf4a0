#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lbg {

// Servers and jobs are 0-based inside the library. JSON and CLI surfaces are
// 1-based; conversion happens only in json_io.
using ServerId = int;
using JobId = int;
using Load = std::int64_t;

/// A load balancing game on identical servers: job lengths plus server count.
class Instance {
public:
    /// Throws InputError unless servers >= 1, jobs non-empty, every length >= 1.
    Instance(int servers, std::vector<Load> jobs);

    [[nodiscard]] int servers() const { return servers_; }
    [[nodiscard]] int job_count() const { return static_cast<int>(jobs_.size()); }
    [[nodiscard]] Load length(JobId j) const { return jobs_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] std::span<const Load> lengths() const { return jobs_; }
    [[nodiscard]] Load total_length() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    int servers_;
    std::vector<Load> jobs_;
};

/// Job-to-server map with cached server workloads.
class Assignment {
public:
    Assignment() = default;

    [[nodiscard]] int servers() const { return static_cast<int>(loads_.size()); }
    [[nodiscard]] int job_count() const { return static_cast<int>(server_of_.size()); }
    [[nodiscard]] ServerId server_of(JobId j) const { return server_of_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] Load load(ServerId s) const { return loads_[static_cast<std::size_t>(s)]; }
    [[nodiscard]] std::span<const ServerId> servers_of() const { return server_of_; }
    [[nodiscard]] std::span<const Load> loads() const { return loads_; }
    /// Jobs on server s in increasing index order.
    [[nodiscard]] std::vector<JobId> jobs_on(ServerId s) const;

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    friend Assignment compute_loads(const Instance&, std::vector<ServerId>);
    std::vector<ServerId> server_of_;
    std::vector<Load> loads_;
};

/// Builds an assignment; throws InputError on a wrong length or an index
/// outside [0, m).
Assignment compute_loads(const Instance& instance, std::vector<ServerId> server_of);

struct ImprovingMove {
    JobId job;
    ServerId from;
    ServerId to;
    Load old_cost;
    Load new_cost;

    friend bool operator==(const ImprovingMove&, const ImprovingMove&) = default;
};

/// Either an equilibrium certificate (no move) or one profitable unilateral move.
struct NashWitness {
    std::optional<ImprovingMove> move;

    [[nodiscard]] bool equilibrium() const { return !move.has_value(); }
};

/// First improving unilateral move by (job, target) order, or equilibrium.
NashWitness is_nash(const Instance& instance, const Assignment& assignment);

enum class OrderPolicy { RoundRobin, MaxGain };

/// Runs unilateral best responses until no job can improve.
///
/// RoundRobin sweeps jobs in index order and moves each to its cheapest
/// server (lowest index on ties) when that is a strict improvement. MaxGain
/// repeatedly applies the single move with the largest cost reduction.
Assignment best_response_dynamics(const Instance& instance, Assignment start, OrderPolicy policy);

/// Longest-processing-time list schedule: jobs by non-increasing length
/// (index order on ties), each to the least loaded server (lowest index).
Assignment lpt_assignment(const Instance& instance);

/// All m^n assignments that pass is_nash, in odometer order of server_of
/// (job 0 varies fastest).
std::vector<Assignment> enumerate_nash(const Instance& instance);

} // namespace lbg
