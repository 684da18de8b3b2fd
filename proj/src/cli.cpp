#include "kolmo/cli.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <ostream>

#include <spdlog/spdlog.h>

#include "kolmo/json_io.hpp"

namespace kolmo
{

namespace
{

std::string read_all(std::istream& in)
{
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

SolverOptions solver_options(const CliConfig& config)
{
    SolverOptions s;
    s.grid_size = config.grid_size;
    return s;
}

int classify_cmd(const CliConfig& config, const Json& doc, std::ostream& out)
{
    const MomentVector c = moments_from_json(doc);
    spdlog::info("classify: d = {}", c.size());
    const Classification result = classify(c, config.tol, solver_options(config));
    out << dump(to_json(result, config.oracle));
    return exit_code::ok;
}

int represent_cmd(const CliConfig& config, const Json& doc, std::ostream& out)
{
    const MomentVector c = moments_from_json(doc);
    const SolverOptions opts = solver_options(config);
    if (config.canonical) {
        if (!config.root) {
            throw InputError("--canonical requires --root");
        }
        out << dump(to_json(canonical_representation(c, *config.root, config.tol, opts)));
    } else if (config.principal) {
        out << dump(to_json(principal_representation(c, config.tol, opts)));
    } else {
        out << dump(to_json(minimal_index(c, config.tol, opts).representation));
    }
    return exit_code::ok;
}

int spline_norms_cmd(const Json& doc, std::ostream& out)
{
    if (!doc.is_object() || !doc.contains("k")) {
        throw InputError("spline-norms expects {\"spline\": {...}, \"k\": [...]}");
    }
    const IdealSpline spline = spline_from_json(doc.contains("spline") ? doc["spline"] : doc);
    std::vector<int> k;
    for (const Json& e : doc["k"]) {
        if (!e.is_number_integer()) {
            throw InputError("field \"k\" must contain only integers");
        }
        k.push_back(e.get<int>());
    }
    const int r = spline.family().r;
    const ExponentVector exps = [&] {
        try {
            return ExponentVector(k, std::max(r, k.empty() ? 0 : k.back()));
        } catch (const DomainError& e) {
            throw InputError(e.what());
        }
    }();
    out << dump(to_json(norms(spline, exps)));
    return exit_code::ok;
}

int decide_cmd(const CliConfig& config, const Json& doc, std::ostream& out)
{
    const NormVector m = problem_from_json(doc);
    spdlog::info("decide: family {}, r = {}, d = {}", to_string(m.family.kind), m.family.r, m.size());
    KolmogorovOptions ko;
    ko.solver = solver_options(config);
    out << dump(to_json(decide_admissible(m, config.tol, ko)));
    return exit_code::ok;
}

int random_cmd(const CliConfig& config, std::ostream& out)
{
    const FunctionFamily family = [&] {
        try {
            return FunctionFamily(parse_family(config.family), config.order);
        } catch (const DomainError& e) {
            throw InputError(e.what());
        }
    }();
    if (config.knots < 0) {
        throw InputError("--knots must be nonnegative");
    }
    out << dump(to_json(random_member(family, config.knots, config.seed)));
    return exit_code::ok;
}

int sweep_cmd(const CliConfig& config, const Json& doc, std::ostream& out)
{
    const NormVector base = problem_from_json(doc);
    if (config.component < 0 || config.component >= base.size()) {
        throw InputError("--component must index a component of M (0-based)");
    }
    if (config.steps < 1) {
        throw InputError("--steps must be at least 1");
    }
    if (!(config.from > 0.0) || !(config.to > 0.0)) {
        throw InputError("sweep range must be strictly positive");
    }
    KolmogorovOptions ko;
    ko.solver = solver_options(config);
    int code = exit_code::ok;
    out << "M_" << base.exponents[config.component] << ",status\n";
    for (int j = 0; j < config.steps; ++j) {
        const double x = config.steps == 1 ? config.from
                                           : config.from + (config.to - config.from) * j / (config.steps - 1);
        NormVector m = base;
        m.values(config.component) = x;
        std::string status;
        try {
            status = to_string(decide_admissible(m, config.tol, ko).status);
        } catch (const NumericalFailure& e) {
            spdlog::error("sweep: {} at M = {}", e.what(), x);
            status = "numerical_failure";
            code = exit_code::numerical_failure;
        }
        out << format_number(x) << "," << status << "\n";
    }
    return code;
}

int verify_cmd(const CliConfig& config, std::ostream& out)
{
    VerifyOptions vo;
    vo.cases = config.cases;
    vo.seed = config.seed;
    vo.tol = config.tol;
    vo.solver = solver_options(config);
    const SuiteReport report = run_suite(config.suite, vo);

    auto cases = [](const std::vector<CaseFailure>& list) {
        Json a = Json::array();
        for (const CaseFailure& f : list) {
            Json e;
            e["case"] = f.index;
            e["detail"] = f.detail;
            a.push_back(std::move(e));
        }
        return a;
    };
    Json j;
    j["suite"] = to_string(report.suite);
    j["seed"] = config.seed;
    j["cases"] = report.cases;
    j["passed"] = report.passed;
    j["failed"] = report.failed;
    j["skipped"] = report.skipped;
    j["result"] = report.ok() ? "pass" : "fail";
    j["counterexamples"] = cases(report.counterexamples);
    j["skipped_cases"] = cases(report.skipped_cases);
    out << dump(j);
    return report.ok() ? exit_code::ok : exit_code::verification_failed;
}

} // namespace

int run(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err)
{
    try {
        if (!(config.tol > 0.0)) {
            throw InputError("--tol must be positive");
        }
        if (config.grid_size < 2) {
            throw InputError("--grid must be at least 2");
        }
        switch (config.command) {
        case Command::Random:
            return random_cmd(config, out);
        case Command::Verify:
            return verify_cmd(config, out);
        default:
            break;
        }
        const Json doc = parse_document(read_all(in));
        switch (config.command) {
        case Command::Classify:
            return classify_cmd(config, doc, out);
        case Command::Represent:
            return represent_cmd(config, doc, out);
        case Command::SplineNorms:
            return spline_norms_cmd(doc, out);
        case Command::Decide:
            return decide_cmd(config, doc, out);
        case Command::Sweep:
            return sweep_cmd(config, doc, out);
        default:
            return exit_code::invalid_input;
        }
    } catch (const InputError& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const Json::exception& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const UnsupportedSystem& e) {
        err << "unsupported: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const PreconditionError& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const CoincidenceError& e) {
        err << "invalid input: " << e.what() << " (node " << format_number(e.node()) << ")\n";
    } catch (const NotInterior& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const NotBoundary& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << " (best residual " << format_number(e.best_residual()) << ")\n";
        return exit_code::numerical_failure;
    } catch (const InconsistencyError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_code::numerical_failure;
    }
    return exit_code::invalid_input;
}

} // namespace kolmo
