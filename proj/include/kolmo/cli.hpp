#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "kolmo/verify.hpp"

namespace kolmo
{

enum class Command
{
    Classify,
    Represent,
    SplineNorms,
    Decide,
    Random,
    Sweep,
    Verify
};

struct CliConfig
{
    Command command = Command::Decide;
    /// Empty means stdin / stdout.
    std::string input;
    std::string output;
    double tol = 1e-8;
    int grid_size = default_grid_size;
    std::uint64_t seed = 1;

    // classify
    bool oracle = false;
    // represent: minimal index unless one of these is set
    bool principal = false;
    bool canonical = false;
    std::optional<double> root;
    // random
    std::string family = "mm";
    int order = 2;
    int knots = 1;
    // sweep
    int component = 0;
    double from = 0.0;
    double to = 1.0;
    int steps = 10;
    // verify
    Suite suite = Suite::TheoremMain;
    int cases = 100;
};

namespace exit_code
{
inline constexpr int ok = 0;
/// verify found counterexamples
inline constexpr int verification_failed = 1;
inline constexpr int invalid_input = 2;
inline constexpr int numerical_failure = 3;
} // namespace exit_code

/// Reads the input document from `in` (ignored by random and verify), writes
/// the result to `out` and diagnostics to `err`.
int run(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace kolmo
