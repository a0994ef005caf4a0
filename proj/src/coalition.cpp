#include "lbgame/coalition.hpp"

#include "lbgame/errors.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>
#include <thread>

namespace lbg {

Deviation::Deviation(std::vector<Move> moves)
    : moves_(std::move(moves))
{
    if (moves_.empty())
        throw InputError("deviation has no moves");
    std::sort(moves_.begin(), moves_.end());
    for (std::size_t k = 1; k < moves_.size(); ++k)
        if (moves_[k].job == moves_[k - 1].job)
            throw InputError("job " + std::to_string(moves_[k].job + 1) + " appears twice in deviation");
}

std::optional<ServerId> Deviation::target_of(JobId j) const
{
    auto it = std::lower_bound(moves_.begin(), moves_.end(), Move{j, std::numeric_limits<ServerId>::min()});
    if (it != moves_.end() && it->job == j)
        return it->target;
    return std::nullopt;
}

Deviation Deviation::inverse(const Assignment& before) const
{
    std::vector<Move> back;
    back.reserve(moves_.size());
    for (const Move& mv : moves_)
        back.push_back({mv.job, before.server_of(mv.job)});
    return Deviation(std::move(back));
}

std::uint64_t search_space_size(const Instance& instance)
{
    std::uint64_t total = 1;
    const auto m = static_cast<std::uint64_t>(instance.servers());
    for (int j = 0; j < instance.job_count(); ++j) {
        if (total > std::numeric_limits<std::uint64_t>::max() / m)
            return std::numeric_limits<std::uint64_t>::max();
        total *= m;
    }
    return total;
}

Assignment apply_deviation(const Instance& instance, const Assignment& assignment, const Deviation& deviation)
{
    std::vector<ServerId> server_of(assignment.servers_of().begin(), assignment.servers_of().end());
    for (const Move& mv : deviation.moves()) {
        if (mv.job < 0 || mv.job >= instance.job_count())
            throw InputError("deviation moves unknown job " + std::to_string(mv.job + 1));
        if (mv.target < 0 || mv.target >= instance.servers())
            throw InputError("deviation target " + std::to_string(mv.target + 1) + " out of range");
        if (mv.target == assignment.server_of(mv.job))
            throw InputError("job " + std::to_string(mv.job + 1) + " 'moves' to its current server");
        server_of[static_cast<std::size_t>(mv.job)] = mv.target;
    }
    return compute_loads(instance, std::move(server_of));
}

DeviationReport evaluate_deviation(const Instance& instance, const Assignment& assignment,
                                   const Deviation& deviation)
{
    Assignment after = apply_deviation(instance, assignment, deviation);
    DeviationReport report;
    report.improving = true;
    for (const Move& mv : deviation.moves()) {
        Ratio ir(assignment.load(assignment.server_of(mv.job)), after.load(mv.target));
        if (report.per_job_ir.empty() || ir < report.min_ir)
            report.min_ir = ir;
        if (ir <= Ratio(1))
            report.improving = false;
        report.per_job_ir.emplace_back(mv.job, ir);
    }
    report.post_loads.assign(after.loads().begin(), after.loads().end());
    return report;
}

namespace {

// Unreduced positive fraction for the hot loops; converted to Ratio on exit.
struct Frac {
    Load num = 0;
    Load den = 1;
};

bool operator<(Frac a, Frac b)
{
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

using Mask = std::uint64_t;

// Visits every profile in which the `free` jobs take any server and all other
// jobs stay put. Post-deviation loads are maintained incrementally along an
// odometer (free[0] is the fastest digit). A block fixes the most significant
// free job to one server so blocks can be scanned independently.
class ProfileWalker {
public:
    ProfileWalker(const Instance& instance, const Assignment& assignment, std::vector<JobId> free)
        : instance_(instance)
        , source_(assignment.servers_of().begin(), assignment.servers_of().end())
        , pre_(assignment.loads().begin(), assignment.loads().end())
        , free_(std::move(free))
    {
    }

    [[nodiscard]] int block_count() const { return free_.empty() ? 1 : instance_.servers(); }

    template <class Visit>
    void run_block(int block, Visit&& visit)
    {
        std::vector<ServerId> targets = source_;
        std::vector<Load> post = pre_;
        Mask mask = 0;
        auto place = [&](JobId j, ServerId t) {
            auto& cur = targets[static_cast<std::size_t>(j)];
            post[static_cast<std::size_t>(cur)] -= instance_.length(j);
            post[static_cast<std::size_t>(t)] += instance_.length(j);
            cur = t;
            if (t != source_[static_cast<std::size_t>(j)])
                mask |= Mask{1} << j;
            else
                mask &= ~(Mask{1} << j);
        };

        std::size_t digits = free_.size();
        if (!free_.empty()) {
            place(free_.back(), static_cast<ServerId>(block));
            --digits;
        }
        for (std::size_t d = 0; d < digits; ++d)
            place(free_[d], 0);

        const ServerId m = instance_.servers();
        for (;;) {
            visit(std::span<const ServerId>(targets), std::span<const Load>(post), mask);
            std::size_t d = 0;
            for (; d < digits; ++d) {
                JobId j = free_[d];
                ServerId t = targets[static_cast<std::size_t>(j)] + 1;
                if (t == m)
                    t = 0;
                place(j, t);
                if (t != 0)
                    break;
            }
            if (d == digits)
                break;
        }
    }

    // Min-IR of the coalition in `mask`, or nullopt if some member fails to
    // strictly improve (or the mask is empty).
    [[nodiscard]] std::optional<Frac> min_ir(std::span<const ServerId> targets, std::span<const Load> post,
                                             Mask mask) const
    {
        if (mask == 0)
            return std::nullopt;
        Frac best{1, 0};
        bool first = true;
        for (Mask rest = mask; rest != 0; rest &= rest - 1) {
            auto j = static_cast<std::size_t>(std::countr_zero(rest));
            Load before = pre_[static_cast<std::size_t>(source_[j])];
            Load after = post[static_cast<std::size_t>(targets[j])];
            if (after >= before)
                return std::nullopt;
            Frac ir{before, after};
            if (first || ir < best) {
                best = ir;
                first = false;
            }
        }
        return best;
    }

    [[nodiscard]] std::span<const ServerId> source() const { return source_; }

private:
    const Instance& instance_;
    std::vector<ServerId> source_;
    std::vector<Load> pre_;
    std::vector<JobId> free_;
};

// Lexicographic comparison of the (job, target) lists of two profiles.
bool move_map_less(std::span<const ServerId> a, std::span<const ServerId> b, std::span<const ServerId> source)
{
    const std::size_t n = source.size();
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (;;) {
        while (ia < n && a[ia] == source[ia])
            ++ia;
        while (ib < n && b[ib] == source[ib])
            ++ib;
        if (ia == n || ib == n)
            return ia == n && ib != n;
        if (ia != ib)
            return ia < ib;
        if (a[ia] != b[ib])
            return a[ia] < b[ib];
        ++ia;
        ++ib;
    }
}

Deviation deviation_from_profile(std::span<const ServerId> targets, std::span<const ServerId> source)
{
    std::vector<Move> moves;
    for (std::size_t j = 0; j < source.size(); ++j)
        if (targets[j] != source[j])
            moves.push_back({static_cast<JobId>(j), targets[j]});
    return Deviation(std::move(moves));
}

unsigned effective_workers(unsigned workers, int blocks)
{
    return std::max(1u, std::min(workers, static_cast<unsigned>(blocks)));
}

// Runs `work(worker, block)` for every block; worker w takes blocks w, w+W, ...
template <class Work>
void for_each_block(int blocks, unsigned workers, Work&& work)
{
    workers = effective_workers(workers, blocks);
    if (workers == 1) {
        for (int b = 0; b < blocks; ++b)
            work(0u, b);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int b = static_cast<int>(w); b < blocks; b += static_cast<int>(workers))
                work(w, b);
        });
}

void enforce_cap(const Instance& instance, const SearchOptions& options)
{
    if (instance.job_count() > 63)
        throw CapExceeded("coalition search supports at most 63 jobs");
    std::uint64_t size = search_space_size(instance);
    if (size > options.cap)
        throw CapExceeded("search space m^n = " + (size == std::numeric_limits<std::uint64_t>::max()
                                                       ? std::string("overflow")
                                                       : std::to_string(size))
                          + " exceeds cap " + std::to_string(options.cap));
}

std::vector<JobId> all_jobs(const Instance& instance)
{
    std::vector<JobId> jobs(static_cast<std::size_t>(instance.job_count()));
    for (JobId j = 0; j < instance.job_count(); ++j)
        jobs[static_cast<std::size_t>(j)] = j;
    return jobs;
}

} // namespace

WorstDeviation worst_min_ir(const Instance& instance, const Assignment& assignment, const SearchOptions& options)
{
    enforce_cap(instance, options);
    compute_loads(instance, {assignment.servers_of().begin(), assignment.servers_of().end()});

    struct Best {
        std::optional<Frac> ratio;
        std::vector<ServerId> targets;
    };
    ProfileWalker shape(instance, assignment, all_jobs(instance));
    const int blocks = shape.block_count();
    std::vector<Best> per_block(static_cast<std::size_t>(blocks));

    for_each_block(blocks, options.workers, [&](unsigned, int block) {
        ProfileWalker walker(instance, assignment, all_jobs(instance));
        Best& best = per_block[static_cast<std::size_t>(block)];
        walker.run_block(block, [&](std::span<const ServerId> targets, std::span<const Load> post, Mask mask) {
            auto ir = walker.min_ir(targets, post, mask);
            if (!ir)
                return;
            if (!best.ratio || *best.ratio < *ir
                || (!(*ir < *best.ratio) && move_map_less(targets, best.targets, walker.source()))) {
                best.ratio = ir;
                best.targets.assign(targets.begin(), targets.end());
            }
        });
    });

    const Best* winner = nullptr;
    for (const Best& b : per_block) {
        if (!b.ratio)
            continue;
        if (!winner || *winner->ratio < *b.ratio
            || (!(*b.ratio < *winner->ratio) && move_map_less(b.targets, winner->targets, shape.source())))
            winner = &b;
    }
    if (!winner)
        return {};
    return {Ratio(winner->ratio->num, winner->ratio->den), deviation_from_profile(winner->targets, shape.source())};
}

bool is_minimal(const Instance& instance, const Assignment& assignment, const Deviation& deviation,
                const SearchOptions& options)
{
    DeviationReport report = evaluate_deviation(instance, assignment, deviation);
    if (!report.improving)
        throw InputError("minimality is only defined for improving deviations");

    std::vector<JobId> members;
    for (const Move& mv : deviation.moves())
        members.push_back(mv.job);
    if (members.size() > 63)
        throw CapExceeded("coalition too large");
    std::uint64_t size = 1;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (size > options.cap / static_cast<std::uint64_t>(instance.servers()))
            throw CapExceeded("sub-coalition search m^|coalition| exceeds cap " + std::to_string(options.cap));
        size *= static_cast<std::uint64_t>(instance.servers());
    }

    Mask full = 0;
    for (JobId j : members)
        full |= Mask{1} << j;
    const Frac threshold{report.min_ir.num(), report.min_ir.den()};

    ProfileWalker shape(instance, assignment, members);
    std::vector<char> blocked(static_cast<std::size_t>(shape.block_count()), 0);
    for_each_block(shape.block_count(), options.workers, [&](unsigned, int block) {
        ProfileWalker walker(instance, assignment, members);
        bool found = false;
        walker.run_block(block, [&](std::span<const ServerId> targets, std::span<const Load> post, Mask mask) {
            if (found || mask == full)
                return;
            auto ir = walker.min_ir(targets, post, mask);
            if (ir && !(*ir < threshold))
                found = true;
        });
        blocked[static_cast<std::size_t>(block)] = found ? 1 : 0;
    });
    return std::none_of(blocked.begin(), blocked.end(), [](char c) { return c != 0; });
}

std::vector<EvaluatedDeviation> enumerate_minimal_deviations(const Instance& instance,
                                                             const Assignment& assignment,
                                                             const SearchOptions& options)
{
    enforce_cap(instance, options);
    const int n = instance.job_count();
    if (n > 22)
        throw CapExceeded("minimal-deviation enumeration supports at most 22 jobs");
    compute_loads(instance, {assignment.servers_of().begin(), assignment.servers_of().end()});

    const std::size_t masks = std::size_t{1} << n;
    ProfileWalker shape(instance, assignment, all_jobs(instance));
    const int blocks = shape.block_count();

    // Pass 1: best min-IR per exact coalition. Frac{0,1} marks "no improving deviation".
    std::vector<std::vector<Frac>> tables(effective_workers(options.workers, blocks));
    for (auto& table : tables)
        table.assign(masks, Frac{0, 1});
    for_each_block(blocks, options.workers, [&](unsigned worker, int block) {
        ProfileWalker walker(instance, assignment, all_jobs(instance));
        auto& table = tables[worker];
        walker.run_block(block, [&](std::span<const ServerId> targets, std::span<const Load> post, Mask mask) {
            auto ir = walker.min_ir(targets, post, mask);
            if (ir && table[mask] < *ir)
                table[mask] = *ir;
        });
    });
    std::vector<Frac> up_to = std::move(tables.front());
    for (std::size_t b = 1; b < tables.size(); ++b) {
        for (std::size_t s = 0; s < masks; ++s)
            if (up_to[s] < tables[b][s])
                up_to[s] = tables[b][s];
        std::vector<Frac>().swap(tables[b]);
    }
    // Subset-max transform: up_to[T] = max over S subset of T.
    for (int bit = 0; bit < n; ++bit)
        for (std::size_t s = 0; s < masks; ++s)
            if ((s >> bit) & 1u) {
                const Frac& sub = up_to[s ^ (std::size_t{1} << bit)];
                if (up_to[s] < sub)
                    up_to[s] = sub;
            }

    // Pass 2: improving deviations that beat every proper sub-coalition.
    std::vector<std::vector<std::vector<ServerId>>> found(static_cast<std::size_t>(blocks));
    for_each_block(blocks, options.workers, [&](unsigned, int block) {
        ProfileWalker walker(instance, assignment, all_jobs(instance));
        auto& out = found[static_cast<std::size_t>(block)];
        walker.run_block(block, [&](std::span<const ServerId> targets, std::span<const Load> post, Mask mask) {
            auto ir = walker.min_ir(targets, post, mask);
            if (!ir)
                return;
            for (Mask rest = mask; rest != 0; rest &= rest - 1) {
                Mask proper = mask & ~(rest & (~rest + 1));
                if (!(up_to[proper] < *ir))
                    return;
            }
            out.emplace_back(targets.begin(), targets.end());
        });
    });

    std::vector<EvaluatedDeviation> result;
    for (const auto& block : found)
        for (const auto& targets : block) {
            Deviation d = deviation_from_profile(targets, shape.source());
            DeviationReport r = evaluate_deviation(instance, assignment, d);
            result.push_back({std::move(d), std::move(r)});
        }
    std::sort(result.begin(), result.end(),
              [](const EvaluatedDeviation& a, const EvaluatedDeviation& b) { return a.deviation < b.deviation; });
    return result;
}

} // namespace lbg
