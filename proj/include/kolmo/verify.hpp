#pragma once

///
/// \file verify.hpp
///
/// Self-contained randomized checks behind `kolmo verify`. Every suite builds
/// its cases from the seed alone; case i uses seed + i, so reports are stable
/// under changes of the case count.
///

#include <cstdint>
#include <string>
#include <vector>

#include "kolmo/kolmogorov.hpp"

namespace kolmo
{

enum class Suite
{
    Lemma1,
    Oracle,
    Roundtrip,
    Correspondence,
    TheoremMain
};

/// "lemma1", "oracle", "roundtrip", "correspondence", "theorem-main".
std::string to_string(Suite suite);
/// Throws DomainError for unknown names.
Suite parse_suite(const std::string& name);

struct CaseFailure
{
    int index;
    std::string detail;
};

struct SuiteReport
{
    Suite suite;
    int cases = 0;
    int passed = 0;
    int failed = 0;
    /// Cases that prove nothing either way: solver non-convergence (lemma1) or
    /// disagreements within the boundary margin (oracle).
    int skipped = 0;
    std::vector<CaseFailure> counterexamples;
    std::vector<CaseFailure> skipped_cases;

    bool ok() const noexcept { return failed == 0; }
};

struct VerifyOptions
{
    int cases = 100;
    std::uint64_t seed = 1;
    double tol = 1e-8;
    SolverOptions solver;
};

SuiteReport run_suite(Suite suite, const VerifyOptions& options);

} // namespace kolmo
