#include "lbgame/lbgame.h"

#include "lbgame/analysis.hpp"
#include "lbgame/errors.hpp"
#include "lbgame/experiments.hpp"
#include "lbgame/json_io.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct lbg_instance {
    lbg::Instance value;
};

struct lbg_assignment {
    lbg::Assignment value;
};

namespace {

thread_local std::string last_error;

lbg_status fail(lbg_status status, const std::string& message)
{
    last_error = message;
    return status;
}

template <class F>
lbg_status guarded(F&& body)
{
    last_error.clear();
    try {
        return body();
    } catch (const lbg::InputError& e) {
        return fail(LBG_INPUT_ERROR, e.what());
    } catch (const lbg::CapExceeded& e) {
        return fail(LBG_CAP_EXCEEDED, e.what());
    } catch (const lbg::VerificationFailure& e) {
        return fail(LBG_VERIFY_FAILED, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(LBG_INPUT_ERROR, e.what());
    } catch (const std::bad_alloc&) {
        return fail(LBG_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(LBG_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(LBG_INTERNAL_ERROR, "unknown error");
    }
}

char* copy(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put(char** out, const std::string& s)
{
    if (out)
        *out = copy(s);
}

void put(char** out, const lbg::Json& j)
{
    put(out, j.dump(2));
}

void require(const void* p, const char* what)
{
    if (!p)
        throw lbg::InputError(std::string(what) + " is NULL");
}

lbg::AnalysisOptions convert(const lbg_options* options)
{
    lbg::AnalysisOptions out;
    if (options) {
        out.search.cap = options->search_cap;
        out.search.workers = options->workers == 0 ? 1 : options->workers;
        out.tilde_cap = options->tilde_cap;
    }
    return out;
}

lbg::Deviation parse_deviation(const char* text)
{
    require(text, "deviation");
    return lbg::deviation_from_json(lbg::parse_json(text));
}

std::vector<std::pair<int, int>> tilde_arcs(const lbg::TildeClassification& c)
{
    return c.tilde.arcs();
}

} // namespace

extern "C" {

const char* lbg_version(void)
{
    return "0.1.0";
}

const char* lbg_last_error(void)
{
    return last_error.c_str();
}

void lbg_string_free(char* s)
{
    std::free(s);
}

void lbg_options_default(lbg_options* options)
{
    if (!options)
        return;
    lbg::AnalysisOptions d;
    options->search_cap = d.search.cap;
    options->tilde_cap = d.tilde_cap;
    options->workers = d.search.workers;
}

lbg_status lbg_instance_from_json(const char* json, lbg_instance** out)
{
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new lbg_instance{lbg::instance_from_json(lbg::parse_json(json))};
        return LBG_OK;
    });
}

lbg_status lbg_instance_random(int m, int n, int64_t lo, int64_t hi, uint64_t seed, lbg_instance** out)
{
    return guarded([&] {
        require(out, "out");
        *out = new lbg_instance{lbg::random_instance(m, n, {lo, hi}, seed)};
        return LBG_OK;
    });
}

lbg_status lbg_instance_to_json(const lbg_instance* instance, char** json)
{
    return guarded([&] {
        require(instance, "instance");
        put(json, lbg::to_json(instance->value));
        return LBG_OK;
    });
}

int lbg_instance_servers(const lbg_instance* instance)
{
    return instance ? instance->value.servers() : 0;
}

int lbg_instance_jobs(const lbg_instance* instance)
{
    return instance ? instance->value.job_count() : 0;
}

void lbg_instance_free(lbg_instance* instance)
{
    delete instance;
}

lbg_status lbg_assignment_from_json(const lbg_instance* instance, const char* json, lbg_assignment** out)
{
    return guarded([&] {
        require(instance, "instance");
        require(json, "json");
        require(out, "out");
        *out = new lbg_assignment{lbg::assignment_from_json(instance->value, lbg::parse_json(json))};
        return LBG_OK;
    });
}

lbg_status lbg_assignment_to_json(const lbg_assignment* assignment, char** json)
{
    return guarded([&] {
        require(assignment, "assignment");
        put(json, lbg::to_json(assignment->value));
        return LBG_OK;
    });
}

void lbg_assignment_free(lbg_assignment* assignment)
{
    delete assignment;
}

lbg_status lbg_figure1(lbg_instance** instance, lbg_assignment** assignment)
{
    return guarded([&] {
        require(instance, "instance");
        require(assignment, "assignment");
        auto [inst, asg] = lbg::figure1_instance();
        *instance = new lbg_instance{std::move(inst)};
        *assignment = new lbg_assignment{std::move(asg)};
        return LBG_OK;
    });
}

lbg_status lbg_best_response(const lbg_instance* instance, uint64_t seed, lbg_assignment** out)
{
    return guarded([&] {
        require(instance, "instance");
        require(out, "out");
        const lbg::Instance& inst = instance->value;
        *out = new lbg_assignment{
            lbg::best_response_dynamics(inst, lbg::random_start(inst, seed), lbg::OrderPolicy::RoundRobin)};
        return LBG_OK;
    });
}

lbg_status lbg_lpt(const lbg_instance* instance, lbg_assignment** out)
{
    return guarded([&] {
        require(instance, "instance");
        require(out, "out");
        *out = new lbg_assignment{lbg::lpt_assignment(instance->value)};
        return LBG_OK;
    });
}

lbg_status lbg_check_nash(const lbg_instance* instance, const lbg_assignment* assignment, int* is_nash, char** json)
{
    return guarded([&] {
        require(instance, "instance");
        require(assignment, "assignment");
        lbg::NashWitness w = lbg::is_nash(instance->value, assignment->value);
        if (is_nash)
            *is_nash = w.equilibrium() ? 1 : 0;
        put(json, lbg::to_json(w));
        return LBG_OK;
    });
}

lbg_status lbg_worst_deviation(const lbg_instance* instance, const lbg_assignment* assignment,
                               const lbg_options* options, char** ratio, char** json)
{
    return guarded([&] {
        require(instance, "instance");
        require(assignment, "assignment");
        lbg::WorstDeviation w = lbg::worst_min_ir(instance->value, assignment->value, convert(options).search);
        lbg::Json j = lbg::to_json(w);
        if (w.witness)
            j["report"] = lbg::to_json(lbg::evaluate_deviation(instance->value, assignment->value, *w.witness));
        put(ratio, w.ratio.str());
        put(json, j);
        return LBG_OK;
    });
}

lbg_status lbg_minimal_deviations(const lbg_instance* instance, const lbg_assignment* assignment,
                                  const lbg_options* options, char** json)
{
    return guarded([&] {
        require(instance, "instance");
        require(assignment, "assignment");
        lbg::Json list = lbg::Json::array();
        for (const auto& d :
             lbg::enumerate_minimal_deviations(instance->value, assignment->value, convert(options).search)) {
            lbg::Json item = lbg::to_json(d.deviation);
            item["report"] = lbg::to_json(d.report);
            list.push_back(std::move(item));
        }
        put(json, list);
        return LBG_OK;
    });
}

lbg_status lbg_evaluate_deviation(const lbg_instance* instance, const lbg_assignment* assignment,
                                  const char* deviation, char** json)
{
    return guarded([&] {
        require(instance, "instance");
        require(assignment, "assignment");
        put(json, lbg::to_json(lbg::evaluate_deviation(instance->value, assignment->value, parse_deviation(deviation))));
        return LBG_OK;
    });
}

lbg_status lbg_analyze_graph(const lbg_instance* instance, const lbg_assignment* assignment, const char* deviation,
                             const lbg_options* options, char** json, char** dot)
{
    return guarded([&] {
        require(instance, "instance");
        require(assignment, "assignment");
        lbg::AnalysisOptions opts = convert(options);
        lbg::Deviation dev = parse_deviation(deviation);
        lbg::DeviationReport report = lbg::evaluate_deviation(instance->value, assignment->value, dev);
        if (!report.improving)
            throw lbg::InputError("deviation is not improving");
        bool minimal = lbg::is_minimal(instance->value, assignment->value, dev, opts.search);
        lbg::MergedGame merged = lbg::merge_co_migrants(instance->value, assignment->value, dev);
        lbg::DeviationGraph graph = lbg::build_graph(merged.instance, merged.assignment, merged.deviation);
        lbg::StructureReport structure = lbg::check_structure(graph, minimal);
        lbg::Json j = {{"deviation", lbg::to_json(dev)},
                       {"report", lbg::to_json(report)},
                       {"minimal", minimal},
                       {"graph", lbg::to_json(graph)},
                       {"structure", lbg::to_json(structure)},
                       {"passed", structure.passed()}};
        put(json, j);
        put(dot, lbg::to_dot(graph));
        return structure.passed() ? LBG_OK : LBG_VERIFY_FAILED;
    });
}

lbg_status lbg_verify(const lbg_instance* instance, const lbg_assignment* assignment, const char* deviation,
                      const lbg_options* options, char** json, char** dot)
{
    return guarded([&] {
        require(instance, "instance");
        require(assignment, "assignment");
        lbg::AnalysisOptions opts = convert(options);
        lbg::Deviation dev = parse_deviation(deviation);
        if (!lbg::evaluate_deviation(instance->value, assignment->value, dev).improving)
            throw lbg::InputError("deviation is not improving");
        if (!lbg::is_minimal(instance->value, assignment->value, dev, opts.search))
            throw lbg::InputError("deviation is not minimal; the tilde analysis needs a minimal deviation");
        lbg::KeyMinimum key = lbg::key_minimum_for(instance->value, assignment->value, dev, opts);
        lbg::DeviationAnalysis a = lbg::analyze_deviation(instance->value, assignment->value, dev, true, key, opts);
        if (a.tilde_cap_exceeded)
            throw lbg::CapExceeded(a.tilde_error);
        put(json, lbg::to_json(a));
        if (dot) {
            std::vector<std::pair<int, int>> bold;
            if (a.classification)
                bold = tilde_arcs(*a.classification);
            put(dot, lbg::to_dot(a.graph, bold));
        }
        return a.passed() ? LBG_OK : LBG_VERIFY_FAILED;
    });
}

lbg_status lbg_analyze_equilibrium(const lbg_instance* instance, const lbg_assignment* assignment,
                                   const lbg_options* options, char** json)
{
    return guarded([&] {
        require(instance, "instance");
        require(assignment, "assignment");
        lbg::EquilibriumAnalysis a = lbg::analyze_equilibrium(instance->value, assignment->value, convert(options));
        put(json, lbg::to_json(a));
        return a.passed() ? LBG_OK : LBG_VERIFY_FAILED;
    });
}

lbg_status lbg_sweep(const char* config, unsigned workers, char** csv, char** summary)
{
    return guarded([&] {
        require(config, "config");
        lbg::SweepConfig c = lbg::sweep_config_from_json(lbg::parse_json(config));
        if (workers != 0)
            c.workers = workers;
        lbg::SweepReport report = lbg::run_sweep(c);
        put(csv, lbg::to_csv(report));
        put(summary, lbg::summary_json(report));
        return report.all_pass() ? LBG_OK : LBG_VERIFY_FAILED;
    });
}

lbg_status lbg_figure1_pipeline(const lbg_options* options, char** json)
{
    return guarded([&] {
        auto [instance, assignment] = lbg::figure1_instance();
        lbg::AnalysisOptions opts = convert(options);
        lbg::EquilibriumAnalysis a = lbg::analyze_equilibrium(instance, assignment, opts);
        lbg::Deviation fig = lbg::figure1_deviation();
        lbg::DeviationReport report = lbg::evaluate_deviation(instance, assignment, fig);
        lbg::Json j = {{"instance", lbg::to_json(instance)},
                       {"assignment", lbg::to_json(assignment)},
                       {"nash", lbg::to_json(lbg::is_nash(instance, assignment))},
                       {"figure_deviation", lbg::to_json(fig)},
                       {"figure_report", lbg::to_json(report)},
                       {"analysis", lbg::to_json(a)}};
        put(json, j);
        bool ok = a.passed() && a.worst.ratio == lbg::Ratio(5, 4) && report.min_ir == lbg::Ratio(5, 4);
        return ok ? LBG_OK : LBG_VERIFY_FAILED;
    });
}

} // extern "C"
