#pragma once

#include "lbgame/analysis.hpp"
#include "lbgame/game.hpp"
#include "lbgame/ratio.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lbg {

struct IntRange {
    std::int64_t lo = 1;
    std::int64_t hi = 0;

    [[nodiscard]] bool empty() const { return lo > hi; }
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Job lengths are drawn independently from std::mt19937_64 seeded by `seed`.
/// Each draw is reduced to the range by rejection: raw values at or above the
/// largest multiple of the range width are redrawn, the rest taken modulo the
/// width. Unlike std::uniform_int_distribution this is identical across
/// standard libraries. Throws InputError on an empty range, lengths below 1,
/// n < 1 or m < 2.
Instance random_instance(int m, int n, IntRange lengths, std::uint64_t seed);

/// Three servers, jobs [2,3,2,3,5,5], paired onto servers 1,1,2,2,3,3
/// (loads 5, 5, 10).
/// Uniform random assignment used as the start of best-response dynamics in
/// sweeps; deterministic in seed.
Assignment random_start(const Instance& instance, std::uint64_t seed);

std::pair<Instance, Assignment> figure1_instance();

/// The four-job coalition on the figure-1 equilibrium: the two length-2 jobs
/// join server 3, the length-5 jobs go to servers 1 and 2.
Deviation figure1_deviation();

enum class NeSource { BestResponseFromRandom, Lpt, EnumerateAll };

std::string to_string(NeSource source);
/// Accepts "best-response-from-random", "lpt", "enumerate-all-NE".
NeSource parse_ne_source(const std::string& name);

struct SweepConfig {
    IntRange m_range{3, 3};
    IntRange n_range{1, 8};
    IntRange length_range{1, 10};
    int count = 1;
    std::uint64_t seed = 0;
    std::vector<NeSource> ne_sources{NeSource::BestResponseFromRandom};
    AnalysisOptions caps;
    unsigned workers = 1;
};

/// Throws InputError on count < 1, an empty length range, lengths < 1,
/// m < 2 or n < 1. An empty m or n range is allowed and yields no rows.
void validate(const SweepConfig& config);

struct SweepRow {
    int m = 0;
    int n = 0;
    int index = 0;
    std::uint64_t seed = 0;
    std::string instance_hash;
    std::vector<Load> jobs;
    NeSource ne_source = NeSource::Lpt;
    std::size_t ne_count = 0;
    std::vector<Load> ne_loads;
    std::optional<Ratio> worst_ratio;
    std::size_t minimal_deviations = 0;
    std::size_t structure_failures = 0;
    std::size_t tilde_failures = 0;
    // Minimal deviations with a non-empty X6 that do not attain the minimum
    // selection key; the company check does not apply to them.
    std::size_t gated_deviations = 0;
    bool checks_pass = true;
    bool skipped = false;
    std::string reason;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::map<int, Ratio> max_ratio_by_m;
    std::vector<std::string> failures;

    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] std::size_t skipped() const;
    [[nodiscard]] std::size_t minimal_deviations() const;
};

/// Seed of instance `index` in cell (m, n): splitmix64 folded over
/// (seed, m, n, index).
std::uint64_t cell_seed(std::uint64_t seed, int m, int n, int index);

/// FNV-1a 64 over "m=<m>;jobs=<l1>,<l2>,...", as 16 hex digits.
std::string instance_hash(const Instance& instance);

/// Generates `count` instances per (m, n) cell and runs the full analysis on
/// the equilibria chosen by each NE source. Rows are ordered by
/// (m, n, index, source) whatever the worker count. Throws InputError on an
/// invalid config; cap overruns become skipped rows.
SweepReport run_sweep(const SweepConfig& config);

/// One header line plus one line per row; ratios as p/q, lists space-separated.
std::string to_csv(const SweepReport& report);

} // namespace lbg
