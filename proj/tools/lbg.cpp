// Command-line front end. Talks to the library only through the C API.

#include "lbgame/lbgame.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

namespace {

enum Exit { ExitOk = 0, ExitVerify = 1, ExitInput = 2, ExitInternal = 3 };

struct CliError {
    int code;
    std::string message;
};

int exit_code(lbg_status s)
{
    switch (s) {
    case LBG_OK:
        return ExitOk;
    case LBG_VERIFY_FAILED:
        return ExitVerify;
    case LBG_INPUT_ERROR:
    case LBG_CAP_EXCEEDED:
        return ExitInput;
    default:
        return ExitInternal;
    }
}

// Throws for hard errors; verification failures are returned so output can
// still be printed.
lbg_status check(lbg_status s)
{
    if (s != LBG_OK && s != LBG_VERIFY_FAILED)
        throw CliError{exit_code(s), lbg_last_error()};
    return s;
}

struct StringDeleter {
    void operator()(char* s) const { lbg_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct InstanceDeleter {
    void operator()(lbg_instance* p) const { lbg_instance_free(p); }
};
struct AssignmentDeleter {
    void operator()(lbg_assignment* p) const { lbg_assignment_free(p); }
};
using InstancePtr = std::unique_ptr<lbg_instance, InstanceDeleter>;
using AssignmentPtr = std::unique_ptr<lbg_assignment, AssignmentDeleter>;

std::string read_file(const std::string& path)
{
    if (path == "-")
        return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CliError{ExitInput, "cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw CliError{ExitInput, "cannot write " + path};
}

struct Inputs {
    std::string instance;
    std::string assignment;
    std::string deviation;
};

InstancePtr load_instance(const Inputs& in)
{
    if (in.instance.empty())
        throw CliError{ExitInput, "--instance is required"};
    lbg_instance* p = nullptr;
    check(lbg_instance_from_json(read_file(in.instance).c_str(), &p));
    return InstancePtr(p);
}

AssignmentPtr load_assignment(const Inputs& in, const lbg_instance* instance)
{
    if (in.assignment.empty())
        throw CliError{ExitInput, "--assignment is required"};
    lbg_assignment* p = nullptr;
    check(lbg_assignment_from_json(instance, read_file(in.assignment).c_str(), &p));
    return AssignmentPtr(p);
}

std::string load_deviation(const Inputs& in)
{
    if (in.deviation.empty())
        throw CliError{ExitInput, "--deviation is required"};
    return read_file(in.deviation);
}

void print(const CString& s)
{
    std::cout << s.get() << '\n';
}

void print_checks(const nlohmann::ordered_json& checks, const std::string& prefix)
{
    for (const auto& c : checks) {
        std::string status = c.at("status").get<std::string>();
        std::string tag = status == "pass" ? "PASS" : status == "fail" ? "FAIL" : "N/A ";
        std::cout << tag << ' ' << prefix << c.at("name").get<std::string>() << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Load balancing game: equilibria, coalitional deviations and their verification"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(lbg_version()));

    lbg_options options;
    lbg_options_default(&options);
    std::uint64_t seed = 0;
    app.add_option("--cap", options.search_cap, "Max target vectors m^n explored by coalition search")
        ->capture_default_str();
    app.add_option("--tilde-cap", options.tilde_cap, "Max tilde arc sets per deviation graph")->capture_default_str();
    auto* jobs_flag = app.add_option("--jobs", options.workers, "Worker threads")->capture_default_str();
    app.add_option("--seed", seed, "Seed for randomized behavior")->capture_default_str();

    Inputs in;
    auto add_inputs = [&](CLI::App* sub, bool assignment, bool deviation) {
        sub->add_option("--instance", in.instance, "Instance JSON file ('-' for stdin)")->required();
        if (assignment)
            sub->add_option("--assignment", in.assignment, "Assignment JSON file")->required();
        if (deviation)
            sub->add_option("--deviation", in.deviation, "Deviation JSON file")->required();
    };

    int servers = 3;
    int jobs = 6;
    std::int64_t min_length = 1;
    std::int64_t max_length = 10;
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("-m,--servers", servers, "Number of servers")->capture_default_str();
    gen->add_option("-n,--num-jobs", jobs, "Number of jobs")->capture_default_str();
    gen->add_option("--min-length", min_length, "Smallest job length")->capture_default_str();
    gen->add_option("--max-length", max_length, "Largest job length")->capture_default_str();

    std::string method = "brd";
    auto* ne = app.add_subcommand("ne", "Compute a Nash equilibrium");
    add_inputs(ne, false, false);
    ne->add_option("--method", method, "brd (best response from a seeded random start) or lpt")
        ->check(CLI::IsMember({"brd", "lpt"}))
        ->capture_default_str();

    auto* check_ne = app.add_subcommand("check-ne", "Check whether an assignment is a Nash equilibrium");
    add_inputs(check_ne, true, false);

    auto* worst = app.add_subcommand("worst-deviation", "Worst improvement ratio over all coalitional deviations");
    add_inputs(worst, true, false);

    auto* minimal = app.add_subcommand("minimal-deviations", "List all minimal improving deviations");
    add_inputs(minimal, true, false);

    std::string dot_path;
    auto* graph = app.add_subcommand("analyze-graph", "Deviation graph and structural checks");
    add_inputs(graph, true, true);
    graph->add_option("--dot", dot_path, "Write the graph in DOT format");

    auto* verify = app.add_subcommand("verify", "Tilde selection and inequality checks for a minimal deviation");
    add_inputs(verify, true, true);
    verify->add_option("--dot", dot_path, "Write the graph with the selected tilde arcs in bold");

    std::string config_path;
    std::string format = "csv";
    std::string csv_path;
    std::string summary_path;
    auto* sweep = app.add_subcommand("sweep", "Run a seeded experiment sweep");
    sweep->add_option("--config", config_path, "Sweep configuration JSON")->required();
    sweep->add_option("--format", format, "What to print on stdout")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sweep->add_option("--csv", csv_path, "Also write the CSV report here");
    sweep->add_option("--summary", summary_path, "Also write the JSON summary here");

    auto* fig1 = app.add_subcommand("fig1", "Run the full pipeline on the three-server lower-bound instance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ExitOk : ExitInput;
    }

    try {
        const lbg_options* opts = &options;
        if (gen->parsed()) {
            lbg_instance* p = nullptr;
            check(lbg_instance_random(servers, jobs, min_length, max_length, seed, &p));
            InstancePtr instance(p);
            char* out = nullptr;
            check(lbg_instance_to_json(instance.get(), &out));
            print(CString(out));
            return ExitOk;
        }
        if (ne->parsed()) {
            InstancePtr instance = load_instance(in);
            lbg_assignment* p = nullptr;
            if (method == "lpt")
                check(lbg_lpt(instance.get(), &p));
            else
                check(lbg_best_response(instance.get(), seed, &p));
            AssignmentPtr assignment(p);
            char* out = nullptr;
            check(lbg_assignment_to_json(assignment.get(), &out));
            print(CString(out));
            return ExitOk;
        }
        if (check_ne->parsed()) {
            InstancePtr instance = load_instance(in);
            AssignmentPtr assignment = load_assignment(in, instance.get());
            int is_nash = 0;
            char* out = nullptr;
            check(lbg_check_nash(instance.get(), assignment.get(), &is_nash, &out));
            print(CString(out));
            return ExitOk;
        }
        if (worst->parsed()) {
            InstancePtr instance = load_instance(in);
            AssignmentPtr assignment = load_assignment(in, instance.get());
            char* ratio = nullptr;
            char* out = nullptr;
            check(lbg_worst_deviation(instance.get(), assignment.get(), opts, &ratio, &out));
            CString r(ratio);
            CString j(out);
            std::cout << r.get() << '\n';
            if (nlohmann::ordered_json::parse(j.get()).at("sne").get<bool>())
                std::cout << "SNE\n";
            print(j);
            return ExitOk;
        }
        if (minimal->parsed()) {
            InstancePtr instance = load_instance(in);
            AssignmentPtr assignment = load_assignment(in, instance.get());
            char* out = nullptr;
            check(lbg_minimal_deviations(instance.get(), assignment.get(), opts, &out));
            print(CString(out));
            return ExitOk;
        }
        if (graph->parsed() || verify->parsed()) {
            InstancePtr instance = load_instance(in);
            AssignmentPtr assignment = load_assignment(in, instance.get());
            std::string deviation = load_deviation(in);
            char* out = nullptr;
            char* dot = nullptr;
            char** dot_out = dot_path.empty() ? nullptr : &dot;
            lbg_status s = graph->parsed()
                               ? lbg_analyze_graph(instance.get(), assignment.get(), deviation.c_str(), opts, &out,
                                                   dot_out)
                               : lbg_verify(instance.get(), assignment.get(), deviation.c_str(), opts, &out, dot_out);
            check(s);
            CString j(out);
            CString d(dot);
            print(j);
            if (d)
                write_file(dot_path, d.get());
            return exit_code(s);
        }
        if (sweep->parsed()) {
            std::string config = read_file(config_path);
            char* csv = nullptr;
            char* summary = nullptr;
            lbg_status s = check(lbg_sweep(config.c_str(), jobs_flag->count() ? options.workers : 0, &csv, &summary));
            CString c(csv);
            CString j(summary);
            if (!csv_path.empty())
                write_file(csv_path, c.get());
            if (!summary_path.empty())
                write_file(summary_path, std::string(j.get()) + "\n");
            if (format == "csv")
                std::cout << c.get();
            else
                print(j);
            return exit_code(s);
        }
        if (fig1->parsed()) {
            char* out = nullptr;
            lbg_status s = check(lbg_figure1_pipeline(opts, &out));
            CString j(out);
            auto doc = nlohmann::ordered_json::parse(j.get());
            const auto& analysis = doc.at("analysis");
            std::cout << "instance " << doc.at("instance").dump() << '\n';
            std::cout << "assignment " << doc.at("assignment").dump() << '\n';
            std::cout << "ratio " << analysis.at("worst").at("ratio").get<std::string>() << '\n';
            std::cout << "witness " << analysis.at("worst").at("witness").dump() << '\n';
            print_checks(analysis.at("checks"), "");
            int index = 0;
            for (const auto& d : analysis.at("minimal_deviations")) {
                std::string prefix = "deviation " + std::to_string(++index) + ": ";
                print_checks(d.at("structure"), prefix);
                if (d.contains("inequalities"))
                    print_checks(d.at("inequalities").at("checks"), prefix);
            }
            std::cout << (s == LBG_OK ? "PASS" : "FAIL") << " pipeline\n";
            return exit_code(s);
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitInternal;
    }
    return ExitInput;
}
