#pragma once

///
/// \file cone_oracle.hpp
///
/// Brute-force membership test for the moment cone spanned by the curve
/// t -> (t^{k_1}, ..., t^{k_d}), t >= 0: discretize the curve on a geometric
/// grid and solve a nonnegative least-squares problem over the grid columns.
///
/// The oracle shares no code path with the Newton-based solvers in
/// representations.hpp and serves both as their initializer and as an
/// independent cross-check.
///

#include <vector>

#include "kolmo/moment_core.hpp"

namespace kolmo
{

/// Strictly increasing nonnegative nodes, at least two.
class Grid
{
public:
    explicit Grid(std::vector<double> nodes);

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    Index size() const noexcept { return static_cast<Index>(nodes_.size()); }

private:
    std::vector<double> nodes_;
};

inline constexpr int default_grid_size = 2000;

/// `count` geometrically spaced nodes from t_max * 1e-6 to t_max, with 0
/// prepended when `include_zero` is set.
Grid make_grid(double t_max, int count, bool include_zero);

/// Estimated largest atom location times ten: the maximum over consecutive
/// exponent pairs of (c_{i+1} / c_i)^{1 / (k_{i+1} - k_i)}, skipping pairs
/// with a nonpositive entry. Falls back to 10 when no pair qualifies.
double estimate_t_max(const MomentVector& c);

/// Grid used when the caller does not supply one.
Grid default_grid(const MomentVector& c, int count = default_grid_size);

struct NnlsResult
{
    Vector<double> weights;
    /// min ||A w - b||_2 / max(1, ||b||_2)
    double residual;
};

///
/// Lawson-Hanson active-set solver for min ||A w - b||_2 subject to w >= 0.
/// Columns of `a` are the generators.
///
NnlsResult nnls(const Matrix<double>& a, const Vector<double>& b);

/// Same problem with the generators given as moment vectors.
NnlsResult nnls(const std::vector<MomentVector>& columns, const MomentVector& target);

struct OracleOptions
{
    /// Feasible iff relative residual <= tol.
    double tol = 1e-7;
    /// Atoms below weight_floor * (largest weight) are dropped from the support.
    double weight_floor = 1e-9;
    /// Greedily drop smallest atoms while the residual stays below 1e-3 * tol.
    bool prune = true;
};

struct FeasibilityReport
{
    bool feasible = false;
    /// Relative 2-norm residual of the fit, rows equilibrated to the target's
    /// components and the target normalized to unit length.
    double residual = 0.0;
    /// Atoms on grid nodes carrying the fit.
    Representation support;
};

FeasibilityReport cone_membership(const MomentVector& c, const Grid& grid, const OracleOptions& options = {});

} // namespace kolmo
