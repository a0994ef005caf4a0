#include "lbgame/analysis.hpp"

#include "lbgame/errors.hpp"

#include <algorithm>

namespace lbg {

bool DeviationAnalysis::passed() const
{
    return structure.passed() && tilde_error.empty() && (!inequalities || inequalities->passed());
}

DeviationAnalysis analyze_deviation(const Instance& instance, const Assignment& assignment,
                                    const Deviation& deviation, bool minimal, KeyMinimum key_minimum,
                                    const AnalysisOptions& options)
{
    DeviationReport report = evaluate_deviation(instance, assignment, deviation);
    if (!report.improving)
        throw InputError("deviation is not improving");
    MergedGame merged = merge_co_migrants(instance, assignment, deviation);
    DeviationGraph graph = build_graph(merged.instance, merged.assignment, merged.deviation);
    StructureReport structure = check_structure(graph, minimal);

    DeviationAnalysis out{{deviation, std::move(report)}, std::move(merged), std::move(graph), minimal,
                          std::move(structure), std::nullopt, std::nullopt, key_minimum, {}, false};
    if (!minimal)
        return out;
    try {
        out.classification = select_tilde(out.graph, options.tilde_cap);
        out.inequalities = verify_inequalities(out.graph, *out.classification, out.source.report.min_ir, key_minimum);
    } catch (const CapExceeded& e) {
        out.tilde_error = e.what();
        out.tilde_cap_exceeded = true;
    } catch (const InputError& e) {
        out.tilde_error = e.what();
    }
    return out;
}

bool EquilibriumAnalysis::passed() const
{
    return checks.passed() && structure_failures() == 0 && tilde_failures() == 0;
}

std::size_t EquilibriumAnalysis::structure_failures() const
{
    return static_cast<std::size_t>(
        std::count_if(minimal.begin(), minimal.end(), [](const DeviationAnalysis& d) { return !d.structure.passed(); }));
}

std::size_t EquilibriumAnalysis::tilde_failures() const
{
    return static_cast<std::size_t>(std::count_if(minimal.begin(), minimal.end(), [](const DeviationAnalysis& d) {
        return !d.tilde_error.empty() || (d.inequalities && !d.inequalities->passed());
    }));
}

EquilibriumAnalysis analyze_equilibrium(const Instance& instance, const Assignment& assignment,
                                        const AnalysisOptions& options)
{
    EquilibriumAnalysis out;
    NashWitness nash = is_nash(instance, assignment);
    out.checks.expect("assignment_is_nash", nash.equilibrium(), {{}, {}, "an individual job can improve"});

    out.worst = worst_min_ir(instance, assignment, options.search);
    if (instance.servers() == 2)
        out.checks.expect("two_servers_ratio_is_1", out.worst.ratio == Ratio(1),
                          {{}, {}, "ratio " + out.worst.ratio.str()});
    if (instance.servers() >= 3)
        out.checks.expect("ratio_le_5_4", out.worst.ratio <= Ratio(5, 4),
                          {{}, {}, "ratio " + out.worst.ratio.str()});
    if (out.worst.witness) {
        DeviationReport r = evaluate_deviation(instance, assignment, *out.worst.witness);
        out.checks.expect("witness_consistent", r.improving && r.min_ir == out.worst.ratio,
                          {{}, {}, "witness min-IR " + r.min_ir.str()});
    }

    std::vector<EvaluatedDeviation> minimal = enumerate_minimal_deviations(instance, assignment, options.search);

    // Some improving deviation with the worst ratio is always minimal.
    Ratio best_minimal(1);
    for (const auto& d : minimal)
        best_minimal = std::max(best_minimal, d.report.min_ir);
    out.checks.expect("worst_attained_by_minimal", best_minimal == out.worst.ratio,
                      {{}, {}, "max over minimal deviations " + best_minimal.str()});

    for (const auto& d : minimal) {
        out.minimal.push_back(analyze_deviation(instance, assignment, d.deviation, true, KeyMinimum::Unknown, options));
        if (out.minimal.back().tilde_cap_exceeded)
            throw CapExceeded(out.minimal.back().tilde_error);
    }

    for (const auto& d : out.minimal)
        if (d.classification && (!out.min_key || d.classification->key() < *out.min_key))
            out.min_key = d.classification->key();

    for (auto& d : out.minimal) {
        if (!d.classification)
            continue;
        d.key_minimum = d.classification->key() == *out.min_key ? KeyMinimum::Attained : KeyMinimum::NotAttained;
        d.inequalities = verify_inequalities(d.graph, *d.classification, d.source.report.min_ir, d.key_minimum);
    }
    return out;
}

KeyMinimum key_minimum_for(const Instance& instance, const Assignment& assignment, const Deviation& deviation,
                           const AnalysisOptions& options)
{
    try {
        std::optional<SelectionKey> own;
        std::optional<SelectionKey> best;
        for (const auto& d : enumerate_minimal_deviations(instance, assignment, options.search)) {
            MergedGame merged = merge_co_migrants(instance, assignment, d.deviation);
            DeviationGraph graph = build_graph(merged.instance, merged.assignment, merged.deviation);
            SelectionKey key = select_tilde(graph, options.tilde_cap).key();
            if (!best || key < *best)
                best = key;
            if (d.deviation == deviation)
                own = key;
        }
        if (!own)
            return KeyMinimum::Unknown;
        return *own == *best ? KeyMinimum::Attained : KeyMinimum::NotAttained;
    } catch (const CapExceeded&) {
        return KeyMinimum::Unknown;
    } catch (const InputError&) {
        return KeyMinimum::Unknown;
    }
}

} // namespace lbg
