#pragma once

///
/// \file kolmogorov.hpp
///
/// Admissibility of derivative-norm tuples M_k = (M_{k_1}, ..., M_{k_d}) on
/// the classes AM(R_-) and MM(r) (Williamson), i.e. whether some class member
/// x satisfies ||x^{(k_i)}|| = M_{k_i} for all i.
///
/// In moment coordinates (moment_coordinates()) the admissible set is the
/// moment cone of t^{k_1}, ..., t^{k_d}. When k_1 > 0 the measures are
/// reweighted by t^{k_1}, which turns the system into t^0, t^{k_2-k_1}, ...
/// with the extra constraint that no mass sits at the origin; every spline
/// constructor below works in these shifted coordinates.
///
/// decide_admissible() runs the recursive test: the status of M_k follows
/// from the status of (M_{k_2}, ..., M_{k_d}) and a comparison of M_{k_1}
/// with the k_1-th norm of the uniquely determined matching spline.
///

#include <optional>
#include <vector>

#include "kolmo/representations.hpp"
#include "kolmo/splines.hpp"

namespace kolmo
{

enum class AdmissibilityStatus
{
    NotAdmissible,
    AdmissibleBoundary,
    AdmissibleInterior
};

/// "not_admissible", "admissible_boundary", "admissible_interior".
std::string to_string(AdmissibilityStatus status);

struct Comparison
{
    /// M_{k_1}
    double lhs;
    /// ||phi^{(k_1)}|| of the comparison spline
    double rhs;
};

struct TraceRecord
{
    std::vector<int> k;
    AdmissibilityStatus classification;
    /// Absent for the base levels d = 1, 2.
    std::optional<Comparison> compared;
};

struct AdmissibilityResult
{
    AdmissibilityStatus status = AdmissibilityStatus::NotAdmissible;
    /// Class member realizing M. Absent for NotAdmissible and for the even-d
    /// equality case, whose boundary point is a limit of admissible tuples
    /// but not attained.
    std::optional<IdealSpline> witness;
    /// Outermost level first.
    std::vector<TraceRecord> trace;
};

struct KolmogorovOptions
{
    /// Relative band in which M_{k_1} and ||phi^{(k_1)}|| count as equal.
    double equality_band = 1e-7;
    SolverOptions solver;
};

/// Spline with d/2 knots and no constant matching all d = 2m norms of an
/// interior tuple. Throws NotInterior when no such spline exists.
IdealSpline interior_spline(const NormVector& norms, double tol = 1e-8, const SolverOptions& options = {});

/// interior_spline solved by continuation from a caller-chosen spline with the
/// same number of knots.
IdealSpline interior_spline_from(const NormVector& norms, const IdealSpline& initial, double tol = 1e-8,
                                 const SolverOptions& options = {});

/// Spline with at most [(d-1)/2] knots (plus a constant when k_1 = 0) matching
/// a boundary tuple; knot count minimal. Throws NotBoundary otherwise.
IdealSpline boundary_spline(const NormVector& norms, double tol = 1e-8, const SolverOptions& options = {});

/// Spline with (d+1)/2 knots, one of them exactly a_star, matching an interior
/// tuple of odd length.
IdealSpline canonical_spline(const NormVector& norms, double a_star, double tol = 1e-8,
                             const SolverOptions& options = {});

/// Requires k_d = r and strictly positive components.
AdmissibilityResult decide_admissible(const NormVector& norms, double tol = 1e-8,
                                      const KolmogorovOptions& options = {});

struct FamilyMember
{
    IdealSpline spline;
    /// Set for even d with C > 0: the constant is not needed to reach A_k.
    bool redundant_constant = false;
};

/// C + phi(a, lambda) with [d/2] knots, a_1 > ... > a_m > 0.
FamilyMember extremal_family_member(const FunctionFamily& family, const ExponentVector& k,
                                    const std::vector<double>& knots, const std::vector<double>& weights,
                                    double constant);

} // namespace kolmo
