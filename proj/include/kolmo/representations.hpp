#pragma once

///
/// \file representations.hpp
///
/// Atomic representations of points of the moment cone
///
///   M = { sum_s w_s (t_s^{k_1}, ..., t_s^{k_d}) : w_s > 0, t_s >= 0 },  k_1 = 0,
///
/// and the boundary / interior / exterior trichotomy. A nonzero point lies on
/// the boundary iff its index (atoms at t > 0 count one, an atom at 0 counts a
/// half) is below d/2. Interior points admit a principal representation of
/// index exactly d/2 and, for every t* > 0, a canonical representation of
/// index (d+1)/2 that has t* among its nodes.
///
/// All solves run damped Newton (or Gauss-Newton for overdetermined shapes)
/// on the moment-matching equations in log-weights and log-nodes, after the
/// substitution t = theta * s with theta the oracle's atom-scale estimate.
/// When Newton from the oracle-derived guess does not converge, the target is
/// reached by continuation along the segment from the moments of the guess,
/// which stays inside the (convex) cone for interior targets.
///

#include <optional>
#include <vector>

#include "kolmo/cone_oracle.hpp"
#include "kolmo/moment_core.hpp"

namespace kolmo
{

struct SolverOptions
{
    /// Newton stops once the componentwise relative residual is below this.
    double newton_tol = 1e-10;
    /// A representation is accepted when it reproduces the target within this.
    double accept_tol = 1e-8;
    int max_iter = 100;
    int grid_size = default_grid_size;
    /// Extra attempts with re-clustered initializations on doubled grids.
    int restarts = 5;
};

enum class ConeClass
{
    Zero,
    Exterior,
    Boundary,
    Interior
};

std::string to_string(ConeClass kind);

struct Classification
{
    ConeClass kind = ConeClass::Zero;
    /// Present for Boundary (index < d/2) and Interior (principal representation).
    std::optional<Representation> witness;
    /// Oracle report computed on the way; absent for the zero vector.
    std::optional<FeasibilityReport> oracle;
};

///
/// Structural shape of a representation: an optional atom at the origin,
/// `free_atoms` atoms at unknown positive nodes and atoms at prescribed
/// positive nodes. Unknown count = [zero_atom] + 2 free_atoms + |pinned|.
///
struct RepresentationShape
{
    bool zero_atom = false;
    int free_atoms = 0;
    std::vector<double> pinned;

    Index unknowns() const noexcept
    {
        return (zero_atom ? 1 : 0) + 2 * free_atoms + static_cast<Index>(pinned.size());
    }
    HalfInteger index() const noexcept
    {
        return HalfInteger::from_twice((zero_atom ? 1 : 0) + 2 * (free_atoms + static_cast<int>(pinned.size())));
    }

    /// Pinned-free shape of the given index.
    static RepresentationShape of_index(HalfInteger index);
};

/// max_i |m_i - c_i| / sigma_i with m = moments_of(rep), evaluated in the
/// theta-scaled coordinates, sigma_i = max(|c_i|, 1e-14 ||c||_inf).
double relative_residual(const Representation& rep, const MomentVector& c);

/// Scale theta used to condition the solves (estimated largest atom).
double conditioning_scale(const MomentVector& c);

///
/// Damped Newton on the square moment-matching system. `guess` fixes the shape:
/// atoms whose node equals one of `pinned_nodes` keep that node, an atom at 0
/// stays at 0, the remaining atoms are free.
///
/// \throws PreconditionError unknown count differs from d.
/// \throws DomainExit a weight vanishes or a free node collapses onto another
///         node, onto 0, or escapes to infinity.
/// \throws NumericalFailure residual above tol after max_iter iterations.
///
Representation newton_refine(const Representation& guess, const std::vector<double>& pinned_nodes,
                             const MomentVector& c, double tol, int max_iter);

///
/// Fits a representation of the given shape to c. Square shapes use Newton
/// with continuation fallback; overdetermined shapes use Gauss-Newton and
/// succeed only if the residual reaches `tol`. Returns nullopt on failure.
///
std::optional<Representation> fit_shape(const MomentVector& c, const RepresentationShape& shape, double tol,
                                        const SolverOptions& options = {});

/// Trichotomy of c relative to the moment cone; requires k_1 = 0.
/// `tol` is the boundary band: a representation of index < d/2 reproducing c
/// within tol makes c a boundary point.
Classification classify(const MomentVector& c, double tol = 1e-7, const SolverOptions& options = {});

struct IndexedRepresentation
{
    HalfInteger index;
    Representation representation;
};

/// Smallest index 1/2, 1, 3/2, ... <= (d+1)/2 admitting a representation
/// within tol. When `allow_zero_atom` is false only integer indices (no atom
/// at the origin) are tried.
IndexedRepresentation minimal_index(const MomentVector& c, double tol = 1e-8, const SolverOptions& options = {},
                                    bool allow_zero_atom = true);

/// Representation of index d/2: d/2 positive atoms for even d, an atom at 0
/// plus (d-1)/2 positive atoms for odd d.
Representation principal_representation(const MomentVector& c, double tol = 1e-8, const SolverOptions& options = {});

/// Representation of index (d+1)/2 containing t_star as a node (bit-exact).
Representation canonical_representation(const MomentVector& c, double t_star, double tol = 1e-8,
                                        const SolverOptions& options = {});

///
/// Principal representation computed by continuation from a caller-supplied
/// initial representation of the principal shape (used to check that distinct
/// starting points land on the same solution).
///
Representation principal_representation_from(const MomentVector& c, const Representation& initial, double tol = 1e-8,
                                             const SolverOptions& options = {});

} // namespace kolmo
