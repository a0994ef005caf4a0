#include "lbgame/experiments.hpp"

#include "lbgame/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace lbg {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t draw_below(std::mt19937_64& engine, std::uint64_t span)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    for (;;) {
        std::uint64_t x = engine();
        if (x < limit)
            return x % span;
    }
}

std::string join(const std::vector<Load>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(values[i]);
    }
    return out;
}

// Random start for best-response dynamics: its own stream, derived from the
// instance seed so instance and start stay independent.
Assignment start_assignment(const Instance& instance, std::uint64_t seed)
{
    std::mt19937_64 engine(splitmix64(seed ^ 0x5157a27ull));
    std::vector<ServerId> server_of;
    for (int j = 0; j < instance.job_count(); ++j)
        server_of.push_back(static_cast<ServerId>(draw_below(engine, static_cast<std::uint64_t>(instance.servers()))));
    return compute_loads(instance, std::move(server_of));
}

void record(SweepRow& row, const EquilibriumAnalysis& a, const Assignment& ne, std::vector<std::string>& failures)
{
    if (!row.worst_ratio || *row.worst_ratio < a.worst.ratio) {
        row.worst_ratio = a.worst.ratio;
        row.ne_loads.assign(ne.loads().begin(), ne.loads().end());
    }
    row.minimal_deviations += a.minimal.size();
    row.structure_failures += a.structure_failures();
    row.tilde_failures += a.tilde_failures();
    for (const auto& d : a.minimal)
        if (d.classification && !d.classification->Xt[6].empty() && d.key_minimum != KeyMinimum::Attained)
            ++row.gated_deviations;
    if (a.passed())
        return;
    row.checks_pass = false;
    std::ostringstream os;
    os << "m=" << row.m << " n=" << row.n << " index=" << row.index << " source=" << to_string(row.ne_source)
       << " loads=[" << join(row.ne_loads) << "]:";
    for (const Check* c : a.checks.failures())
        os << ' ' << c->name;
    for (const auto& d : a.minimal) {
        for (const Check* c : d.structure.failures())
            os << ' ' << c->name;
        if (!d.tilde_error.empty())
            os << " tilde(" << d.tilde_error << ')';
        if (d.inequalities)
            for (const Check* c : d.inequalities->checks.failures())
                os << ' ' << c->name;
    }
    failures.push_back(os.str());
}

SweepRow run_row(const SweepConfig& config, int m, int n, int index, NeSource source,
                 std::vector<std::string>& failures)
{
    SweepRow row;
    row.m = m;
    row.n = n;
    row.index = index;
    row.seed = cell_seed(config.seed, m, n, index);
    row.ne_source = source;
    Instance instance = random_instance(m, n, config.length_range, row.seed);
    row.instance_hash = instance_hash(instance);
    row.jobs.assign(instance.lengths().begin(), instance.lengths().end());

    try {
        std::vector<Assignment> equilibria;
        switch (source) {
        case NeSource::BestResponseFromRandom:
            equilibria.push_back(
                best_response_dynamics(instance, start_assignment(instance, row.seed), OrderPolicy::RoundRobin));
            break;
        case NeSource::Lpt:
            equilibria.push_back(lpt_assignment(instance));
            break;
        case NeSource::EnumerateAll:
            if (n > 8 || m > 3) {
                row.skipped = true;
                row.reason = "enumerate-all-NE needs n <= 8 and m <= 3";
                return row;
            }
            equilibria = enumerate_nash(instance);
            break;
        }
        row.ne_count = equilibria.size();
        for (const Assignment& ne : equilibria)
            record(row, analyze_equilibrium(instance, ne, config.caps), ne, failures);
    } catch (const CapExceeded& e) {
        SweepRow fresh;
        fresh.m = row.m;
        fresh.n = row.n;
        fresh.index = row.index;
        fresh.seed = row.seed;
        fresh.instance_hash = row.instance_hash;
        fresh.jobs = row.jobs;
        fresh.ne_source = row.ne_source;
        row = std::move(fresh);
        row.skipped = true;
        row.reason = e.what();
    }
    return row;
}

} // namespace

Assignment random_start(const Instance& instance, std::uint64_t seed)
{
    return start_assignment(instance, seed);
}

Instance random_instance(int m, int n, IntRange lengths, std::uint64_t seed)
{
    if (m < 2)
        throw InputError("random instances need m >= 2");
    if (n < 1)
        throw InputError("random instances need n >= 1");
    if (lengths.empty())
        throw InputError("empty length range");
    if (lengths.lo < 1)
        throw InputError("job lengths must be at least 1");
    std::mt19937_64 engine(seed);
    const auto span = static_cast<std::uint64_t>(lengths.hi - lengths.lo) + 1;
    std::vector<Load> jobs;
    for (int j = 0; j < n; ++j)
        jobs.push_back(lengths.lo + static_cast<Load>(draw_below(engine, span)));
    return Instance(m, std::move(jobs));
}

std::pair<Instance, Assignment> figure1_instance()
{
    Instance instance(3, {2, 3, 2, 3, 5, 5});
    Assignment ne = compute_loads(instance, {0, 0, 1, 1, 2, 2});
    return {std::move(instance), std::move(ne)};
}

Deviation figure1_deviation()
{
    return Deviation({{0, 2}, {2, 2}, {4, 0}, {5, 1}});
}

std::string to_string(NeSource source)
{
    switch (source) {
    case NeSource::BestResponseFromRandom:
        return "best-response-from-random";
    case NeSource::Lpt:
        return "lpt";
    case NeSource::EnumerateAll:
        return "enumerate-all-NE";
    }
    return "?";
}

NeSource parse_ne_source(const std::string& name)
{
    if (name == "best-response-from-random")
        return NeSource::BestResponseFromRandom;
    if (name == "lpt")
        return NeSource::Lpt;
    if (name == "enumerate-all-NE")
        return NeSource::EnumerateAll;
    throw InputError("unknown ne_source '" + name + "'");
}

void validate(const SweepConfig& config)
{
    if (config.count < 1)
        throw InputError("count must be at least 1");
    if (config.length_range.empty())
        throw InputError("empty length range");
    if (config.length_range.lo < 1)
        throw InputError("job lengths must be at least 1");
    if (!config.m_range.empty() && config.m_range.lo < 2)
        throw InputError("sweeps need m >= 2");
    if (!config.n_range.empty() && config.n_range.lo < 1)
        throw InputError("sweeps need n >= 1");
    if (config.ne_sources.empty())
        throw InputError("no ne_source given");
}

bool SweepReport::all_pass() const
{
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.checks_pass; });
}

std::size_t SweepReport::skipped() const
{
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.skipped; }));
}

std::size_t SweepReport::minimal_deviations() const
{
    std::size_t total = 0;
    for (const auto& r : rows)
        total += r.minimal_deviations;
    return total;
}

std::uint64_t cell_seed(std::uint64_t seed, int m, int n, int index)
{
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ static_cast<std::uint64_t>(m));
    s = splitmix64(s ^ static_cast<std::uint64_t>(n));
    return splitmix64(s ^ static_cast<std::uint64_t>(index));
}

std::string instance_hash(const Instance& instance)
{
    std::string text = "m=" + std::to_string(instance.servers()) + ";jobs=";
    for (int j = 0; j < instance.job_count(); ++j)
        text += (j ? "," : "") + std::to_string(instance.length(j));
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SweepReport run_sweep(const SweepConfig& config)
{
    validate(config);
    struct Task {
        int m, n, index;
        NeSource source;
    };
    std::vector<Task> tasks;
    for (auto m = config.m_range.lo; m <= config.m_range.hi; ++m)
        for (auto n = config.n_range.lo; n <= config.n_range.hi; ++n)
            for (int i = 0; i < config.count; ++i)
                for (NeSource s : config.ne_sources)
                    tasks.push_back({static_cast<int>(m), static_cast<int>(n), i, s});

    SweepReport report;
    report.rows.resize(tasks.size());
    std::vector<std::vector<std::string>> failures(tasks.size());
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t t = first; t < tasks.size(); t += stride)
            report.rows[t] = run_row(config, tasks[t].m, tasks[t].n, tasks[t].index, tasks[t].source, failures[t]);
    };
    unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1))));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w, workers);
    }

    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const SweepRow& row = report.rows[t];
        for (auto& f : failures[t])
            report.failures.push_back(std::move(f));
        if (!row.worst_ratio)
            continue;
        auto [it, fresh] = report.max_ratio_by_m.try_emplace(row.m, *row.worst_ratio);
        if (!fresh && it->second < *row.worst_ratio)
            it->second = *row.worst_ratio;
    }
    return report;
}

std::string to_csv(const SweepReport& report)
{
    std::ostringstream os;
    os << "m,n,index,seed,instance_hash,jobs,ne_source,ne_count,ne_loads,worst_ratio,minimal_deviations,"
          "structure_failures,tilde_failures,gated_deviations,checks_pass,status,reason\n";
    for (const SweepRow& r : report.rows) {
        os << r.m << ',' << r.n << ',' << r.index << ',' << r.seed << ',' << r.instance_hash << ',' << join(r.jobs)
           << ',' << to_string(r.ne_source) << ',' << r.ne_count << ',' << join(r.ne_loads) << ','
           << (r.worst_ratio ? r.worst_ratio->str() : "") << ',' << r.minimal_deviations << ','
           << r.structure_failures << ',' << r.tilde_failures << ',' << r.gated_deviations << ','
           << (r.checks_pass ? "true" : "false") << ','
           << (r.skipped ? "skipped" : "ok") << ",\"" << r.reason << "\"\n";
    }
    return os.str();
}

} // namespace lbg
