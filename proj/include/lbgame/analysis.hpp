#pragma once

#include "lbgame/coalition.hpp"
#include "lbgame/deviation_graph.hpp"
#include "lbgame/tilde.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lbg {

struct AnalysisOptions {
    SearchOptions search;
    std::uint64_t tilde_cap = 1'000'000;
};

/// Graph, structure checks and tilde verification for one deviation.
struct DeviationAnalysis {
    EvaluatedDeviation source;
    MergedGame merged;
    DeviationGraph graph;
    bool minimal = false;
    StructureReport structure;
    std::optional<TildeClassification> classification;
    std::optional<InequalityReport> inequalities;
    KeyMinimum key_minimum = KeyMinimum::Unknown;
    /// Set when the tilde stage could not run (cap, missing in-arcs).
    std::string tilde_error;
    bool tilde_cap_exceeded = false;

    [[nodiscard]] bool passed() const;
};

/// Merges co-migrants, builds and checks the graph, and (for minimal
/// deviations) selects a tilde set and verifies the inequality chain.
/// Throws InputError if the deviation is not improving.
DeviationAnalysis analyze_deviation(const Instance& instance, const Assignment& assignment,
                                    const Deviation& deviation, bool minimal, KeyMinimum key_minimum,
                                    const AnalysisOptions& options = {});

/// Everything measured on one equilibrium.
struct EquilibriumAnalysis {
    WorstDeviation worst;
    std::vector<DeviationAnalysis> minimal;
    std::optional<SelectionKey> min_key;
    /// Equilibrium-level checks: Nash property, ratio bound, witness consistency.
    CheckList checks;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::size_t structure_failures() const;
    [[nodiscard]] std::size_t tilde_failures() const;
};

/// Full pipeline on one assignment. Throws CapExceeded if a search is too large.
EquilibriumAnalysis analyze_equilibrium(const Instance& instance, const Assignment& assignment,
                                        const AnalysisOptions& options = {});

/// Gate for the company rule on a single deviation: compares its selection key
/// against every minimal deviation of the same equilibrium.
KeyMinimum key_minimum_for(const Instance& instance, const Assignment& assignment, const Deviation& deviation,
                           const AnalysisOptions& options = {});

} // namespace lbg
