#pragma once

#include "lbgame/game.hpp"
#include "lbgame/ratio.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lbg {

struct Move {
    JobId job;
    ServerId target;

    friend auto operator<=>(const Move&, const Move&) = default;
};

/// Simultaneous migration of a coalition. Moves are kept sorted by job, so
/// the default ordering is the lexicographic order on (job, target) lists
/// used for every deterministic tie-break.
class Deviation {
public:
    /// Throws InputError on an empty move list or a repeated job.
    explicit Deviation(std::vector<Move> moves);

    [[nodiscard]] std::span<const Move> moves() const { return moves_; }
    [[nodiscard]] std::size_t size() const { return moves_.size(); }
    [[nodiscard]] std::optional<ServerId> target_of(JobId j) const;
    /// The inverse deviation with respect to the assignment it was applied to.
    [[nodiscard]] Deviation inverse(const Assignment& before) const;

    friend auto operator<=>(const Deviation&, const Deviation&) = default;

private:
    std::vector<Move> moves_;
};

struct DeviationReport {
    std::vector<std::pair<JobId, Ratio>> per_job_ir;
    Ratio min_ir;
    bool improving = false;
    std::vector<Load> post_loads;
};

struct SearchOptions {
    /// Upper bound on m^n (move maps visited by one exhaustive scan).
    std::uint64_t cap = 100'000'000;
    /// Threads for one scan; results do not depend on this.
    unsigned workers = 1;
};

/// Every member moves to its target; throws InputError if a member's target
/// is its current server or out of range.
Assignment apply_deviation(const Instance& instance, const Assignment& assignment, const Deviation& deviation);

/// Per-member improvement ratios (pre cost / post cost), their minimum, and
/// whether every member strictly improves.
DeviationReport evaluate_deviation(const Instance& instance, const Assignment& assignment,
                                   const Deviation& deviation);

struct WorstDeviation {
    /// Largest min-IR over all improving deviations, or 1 when none exists.
    Ratio ratio{1};
    std::optional<Deviation> witness;

    [[nodiscard]] bool strong_equilibrium() const { return !witness.has_value(); }
};

/// Exhaustive scan of all m^n move maps. Ties on the ratio keep the
/// lexicographically smallest move map. Throws CapExceeded past options.cap.
WorstDeviation worst_min_ir(const Instance& instance, const Assignment& assignment,
                            const SearchOptions& options = {});

/// True iff every improving deviation on a non-empty proper sub-coalition has
/// a strictly smaller min-IR. Throws InputError if `deviation` is not improving.
bool is_minimal(const Instance& instance, const Assignment& assignment, const Deviation& deviation,
                const SearchOptions& options = {});

struct EvaluatedDeviation {
    Deviation deviation;
    DeviationReport report;
};

/// All improving deviations that pass is_minimal, in move-map order.
/// Besides options.cap, needs n <= 22 for the per-coalition table.
std::vector<EvaluatedDeviation> enumerate_minimal_deviations(const Instance& instance,
                                                             const Assignment& assignment,
                                                             const SearchOptions& options = {});

/// m^n, saturating at UINT64_MAX.
std::uint64_t search_space_size(const Instance& instance);

} // namespace lbg
