// kolmo: command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kolmo/cli.hpp"

namespace
{

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("kolmo");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("KOLMO_LOG");
    const std::string level = env ? env : "error";
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        spdlog::set_level(spdlog::level::err);
    }
}

void add_io(CLI::App* sub, kolmo::CliConfig& cfg)
{
    sub->add_option("-i,--input", cfg.input, "input JSON file (default stdin)");
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();
    kolmo::CliConfig cfg;

    CLI::App app{"Kolmogorov-type admissibility of derivative norm tuples on AM / MM classes"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("-o,--output", cfg.output, "output file (default stdout)");
    app.add_option("--tol", cfg.tol, "solver tolerance")->capture_default_str();
    app.add_option("--grid", cfg.grid_size, "oracle grid size")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();

    auto* classify = app.add_subcommand("classify", "boundary / interior / exterior of a moment vector");
    add_io(classify, cfg);
    classify->add_flag("--oracle", cfg.oracle, "include the grid oracle cross-check");

    auto* represent = app.add_subcommand("represent", "atomic representation (minimal index by default)");
    add_io(represent, cfg);
    auto* principal = represent->add_flag("--principal", cfg.principal, "principal representation");
    auto* canonical = represent->add_flag("--canonical", cfg.canonical, "canonical representation");
    principal->excludes(canonical);
    represent->add_option("--root", cfg.root, "prescribed root of the canonical representation");

    auto* spline_norms = app.add_subcommand("spline-norms", "derivative norms of an ideal spline");
    add_io(spline_norms, cfg);

    auto* decide = app.add_subcommand("decide", "admissibility of a norm tuple");
    add_io(decide, cfg);

    auto* random = app.add_subcommand("random", "random ideal spline");
    random->add_option("--family", cfg.family, "am or mm")->capture_default_str();
    random->add_option("--order", cfg.order, "order r")->capture_default_str();
    random->add_option("--knots", cfg.knots, "number of knots")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "CSV of status while one component varies");
    add_io(sweep, cfg);
    sweep->add_option("--component", cfg.component, "0-based component index")->capture_default_str();
    sweep->add_option("--from", cfg.from)->required();
    sweep->add_option("--to", cfg.to)->required();
    sweep->add_option("--steps", cfg.steps, "number of sample points")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "randomized property suites");
    std::string suite = "theorem-main";
    verify->add_option("--suite", suite, "lemma1 | oracle | roundtrip | correspondence | theorem-main")
        ->check(CLI::IsMember({"lemma1", "oracle", "roundtrip", "correspondence", "theorem-main"}))
        ->capture_default_str();
    verify->add_option("--cases", cfg.cases)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kolmo::exit_code::invalid_input;
    }

    using kolmo::Command;
    if (*classify) {
        cfg.command = Command::Classify;
    } else if (*represent) {
        cfg.command = Command::Represent;
    } else if (*spline_norms) {
        cfg.command = Command::SplineNorms;
    } else if (*decide) {
        cfg.command = Command::Decide;
    } else if (*random) {
        cfg.command = Command::Random;
    } else if (*sweep) {
        cfg.command = Command::Sweep;
    } else {
        cfg.command = Command::Verify;
        cfg.suite = kolmo::parse_suite(suite);
    }

    std::ifstream fin;
    if (!cfg.input.empty()) {
        fin.open(cfg.input);
        if (!fin) {
            std::cerr << "invalid input: cannot open " << cfg.input << "\n";
            return kolmo::exit_code::invalid_input;
        }
    }
    std::ofstream fout;
    if (!cfg.output.empty()) {
        fout.open(cfg.output);
        if (!fout) {
            std::cerr << "cannot write " << cfg.output << "\n";
            return kolmo::exit_code::invalid_input;
        }
    }
    std::istream& in = cfg.input.empty() ? std::cin : fin;
    std::ostream& out = cfg.output.empty() ? std::cout : fout;
    return kolmo::run(cfg, in, out, std::cerr);
}
