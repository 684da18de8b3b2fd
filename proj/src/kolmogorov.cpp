#include "kolmo/kolmogorov.hpp"

#include <algorithm>
#include <cmath>

namespace kolmo
{

std::string to_string(AdmissibilityStatus status)
{
    switch (status) {
    case AdmissibilityStatus::NotAdmissible:
        return "not_admissible";
    case AdmissibilityStatus::AdmissibleBoundary:
        return "admissible_boundary";
    case AdmissibilityStatus::AdmissibleInterior:
        return "admissible_interior";
    }
    return "unknown";
}

namespace
{

/// Moment coordinates reweighted by t^{k_1}: exponents k - k_1.
MomentVector shifted_moments(const NormVector& norms)
{
    return MomentVector(moment_coordinates(norms).values, norms.exponents.shifted_to_zero());
}

/// Shifted-system atoms back to the original measure: w = v / u^{k_1}.
Representation unshift(const Representation& rep, int k1)
{
    if (k1 == 0) {
        return rep;
    }
    std::vector<Atom> atoms;
    for (const Atom& a : rep.atoms()) {
        if (a.node == 0.0) {
            throw NotBoundary("representation needs mass at the origin, which k_1 > 0 cannot attain");
        }
        atoms.push_back({a.node, a.weight / ipow(a.node, k1)});
    }
    return Representation(std::move(atoms));
}

Representation shift(const Representation& rep, int k1)
{
    std::vector<Atom> atoms;
    for (const Atom& a : rep.atoms()) {
        atoms.push_back({a.node, a.weight * ipow(a.node, k1)});
    }
    return Representation(std::move(atoms));
}

NormVector subvector(const NormVector& norms, Index first, Index count)
{
    const std::vector<int>& k = norms.exponents.values();
    std::vector<int> sub(k.begin() + first, k.begin() + first + count);
    return NormVector(norms.values.segment(first, count), ExponentVector(std::move(sub), norms.exponents.order()),
                      norms.family);
}

void require_positive(const NormVector& norms, const char* who)
{
    if (!(norms.values.array() > 0.0).all()) {
        throw DomainError(std::string(who) + ": norms must be strictly positive");
    }
}

/// Exact one-knot spline through one or two positive norms.
IdealSpline single_knot(const NormVector& norms)
{
    const MomentVector c = moment_coordinates(norms);
    const ExponentVector& k = c.exponents;
    double u = 1.0;
    if (c.size() == 2) {
        u = std::pow(c.values(1) / c.values(0), 1.0 / (k[1] - k[0]));
    }
    const double w = c.values(0) / std::pow(u, k[0]);
    return spline_from_representation(Representation({{u, w}}), norms.family);
}

IdealSpline with_constant(const IdealSpline& s, double constant)
{
    return IdealSpline(s.family(), s.knots(), s.weights(), s.constant() + constant);
}

bool nearly_equal(double a, double b, double band)
{
    return std::abs(a - b) <= band * std::max(std::abs(a), std::abs(b));
}

} // namespace

IdealSpline interior_spline(const NormVector& norms, double tol, const SolverOptions& options)
{
    if (norms.size() % 2 != 0) {
        throw PreconditionError("interior_spline: needs an even number of norms");
    }
    require_positive(norms, "interior_spline");
    const MomentVector c = shifted_moments(norms);
    Representation rep;
    try {
        rep = principal_representation(c, tol, options);
    } catch (const PreconditionError& e) {
        throw NotInterior(std::string("interior_spline: ") + e.what());
    }
    return spline_from_representation(unshift(rep, norms.exponents.front()), norms.family);
}

IdealSpline interior_spline_from(const NormVector& norms, const IdealSpline& initial, double tol,
                                 const SolverOptions& options)
{
    if (norms.size() % 2 != 0) {
        throw PreconditionError("interior_spline_from: needs an even number of norms");
    }
    if (initial.constant() != 0.0 || 2 * initial.knot_count() != norms.size()) {
        throw PreconditionError("interior_spline_from: initial spline must have d/2 knots and no constant");
    }
    require_positive(norms, "interior_spline_from");
    const int k1 = norms.exponents.front();
    const MomentVector c = shifted_moments(norms);
    const Representation start = shift(representation_of(initial), k1);
    return spline_from_representation(unshift(principal_representation_from(c, start, tol, options), k1),
                                      norms.family);
}

IdealSpline boundary_spline(const NormVector& norms, double tol, const SolverOptions& options)
{
    const int k1 = norms.exponents.front();
    const MomentVector c = shifted_moments(norms);
    if (c.values.isZero(0.0)) {
        throw NotBoundary("boundary_spline: zero tuple is excluded from the admissible set");
    }
    IndexedRepresentation found;
    try {
        found = minimal_index(c, tol, options, k1 == 0);
    } catch (const InconsistencyError&) {
        throw NotBoundary("boundary_spline: no representation fits the tuple");
    }
    if (found.index.twice_value() >= static_cast<int>(norms.size())) {
        throw NotBoundary("boundary_spline: tuple is interior (index reaches d/2)");
    }
    return spline_from_representation(unshift(found.representation, k1), norms.family);
}

IdealSpline canonical_spline(const NormVector& norms, double a_star, double tol, const SolverOptions& options)
{
    if (!(a_star > 0.0) || !std::isfinite(a_star)) {
        throw DomainError("canonical_spline: pinned knot must be positive and finite");
    }
    if (norms.size() % 2 != 1) {
        throw PreconditionError("canonical_spline: needs an odd number of norms");
    }
    require_positive(norms, "canonical_spline");
    const int k1 = norms.exponents.front();
    const MomentVector c = shifted_moments(norms);
    const double u_star = 1.0 / a_star;
    const Representation rep = unshift(canonical_representation(c, u_star, tol, options), k1);
    const IdealSpline s = spline_from_representation(rep, norms.family);
    // The pinned atom sits at u* exactly; restore a* itself rather than 1/(1/a*).
    std::vector<double> knots = s.knots();
    const auto it = std::min_element(knots.begin(), knots.end(), [a_star](double x, double y) {
        return std::abs(x - a_star) < std::abs(y - a_star);
    });
    *it = a_star;
    return IdealSpline(s.family(), std::move(knots), s.weights(), s.constant());
}

namespace
{

struct LevelContext
{
    double tol;
    const KolmogorovOptions& options;
};

/// Realizing spline for an interior tuple of length d >= 3. `comparison` is
/// the interior spline of the tail used in the odd-d test.
IdealSpline interior_witness(const NormVector& norms, const IdealSpline& comparison, double excess,
                             const LevelContext& ctx)
{
    const Index d = norms.size();
    if (d % 2 == 0) {
        return interior_spline(norms, ctx.tol, ctx.options.solver);
    }
    if (norms.exponents.front() == 0) {
        return with_constant(comparison, excess);
    }
    // Odd d, k_1 > 0: (d+1)/2 knots, one pinned away from the comparison knots.
    std::vector<double> candidates;
    if (comparison.knot_count() > 0) {
        candidates.push_back(2.0 * comparison.knots().front());
        candidates.push_back(0.5 * comparison.knots().back());
    }
    candidates.push_back(1.0);
    for (double a_star : candidates) {
        try {
            return canonical_spline(norms, a_star, ctx.tol, ctx.options.solver);
        } catch (const CoincidenceError&) {
        } catch (const NumericalFailure&) {
        }
    }
    throw NumericalFailure("decide_admissible: no canonical witness for an interior tuple", 0.0);
}

struct LevelVerdict
{
    AdmissibilityStatus status;
    std::optional<IdealSpline> witness;
    Comparison compared;
};

/// Comparison against the interior spline of the tail. nullopt when the tail
/// turns out not to be interior.
std::optional<LevelVerdict> interior_branch(const NormVector& norms, const LevelContext& ctx)
{
    const Index d = norms.size();
    const bool odd = d % 2 == 1;
    const int k1 = norms.exponents.front();
    const double lhs = norms.values(0);
    const double band = ctx.options.equality_band;
    const NormVector basis = odd ? subvector(norms, 1, d - 1) : subvector(norms, 1, d - 2);
    std::optional<IdealSpline> phi;
    try {
        phi = interior_spline(basis, ctx.tol, ctx.options.solver);
    } catch (const NotInterior&) {
        return std::nullopt;
    }
    LevelVerdict v{AdmissibilityStatus::NotAdmissible, std::nullopt, {lhs, eval(*phi, 0.0, k1)}};
    const double rhs = v.compared.rhs;
    if (nearly_equal(lhs, rhs, band)) {
        v.status = AdmissibilityStatus::AdmissibleBoundary;
        if (odd) {
            v.witness = phi;
        } else {
            // Attained only when the full tuple has a boundary structure;
            // otherwise it is a limit of admissible tuples.
            try {
                v.witness = boundary_spline(norms, std::max(ctx.tol, band), ctx.options.solver);
            } catch (const NotBoundary&) {
            } catch (const NumericalFailure&) {
            }
            // Inside the band but on the interior side: the d/2-knot spline.
            if (!v.witness) {
                try {
                    v.witness = interior_spline(norms, ctx.tol, ctx.options.solver);
                } catch (const NotInterior&) {
                } catch (const NumericalFailure&) {
                }
            }
        }
    } else if (lhs > rhs) {
        v.status = AdmissibilityStatus::AdmissibleInterior;
        v.witness = interior_witness(norms, *phi, lhs - rhs, ctx);
    }
    return v;
}

/// Comparison against the boundary spline of the tail, which determines
/// x^{(k_2)} and hence x^{(k_1)} up to a constant that only survives when
/// k_1 = 0. nullopt when the tail has no boundary structure.
std::optional<LevelVerdict> boundary_branch(const NormVector& norms, const LevelContext& ctx)
{
    const int k1 = norms.exponents.front();
    const double lhs = norms.values(0);
    const double band = ctx.options.equality_band;
    std::optional<IdealSpline> psi;
    try {
        // a tail judged boundary within the band is fitted at that band
        psi = boundary_spline(subvector(norms, 1, norms.size() - 1), std::max(ctx.tol, band), ctx.options.solver);
    } catch (const NotBoundary&) {
        return std::nullopt;
    }
    LevelVerdict v{AdmissibilityStatus::NotAdmissible, std::nullopt, {lhs, eval(*psi, 0.0, k1)}};
    const double rhs = v.compared.rhs;
    if (nearly_equal(lhs, rhs, band)) {
        v.status = AdmissibilityStatus::AdmissibleBoundary;
        v.witness = psi;
    } else if (k1 == 0 && lhs > rhs) {
        v.status = AdmissibilityStatus::AdmissibleBoundary;
        v.witness = with_constant(*psi, lhs - rhs);
    }
    return v;
}

AdmissibilityResult decide_level(const NormVector& norms, const LevelContext& ctx)
{
    const Index d = norms.size();
    AdmissibilityResult result;
    if (d <= 2) {
        result.status = AdmissibilityStatus::AdmissibleInterior;
        result.witness = single_knot(norms);
        result.trace.push_back({norms.exponents.values(), result.status, std::nullopt});
        return result;
    }

    AdmissibilityResult sub = decide_level(subvector(norms, 1, d - 1), ctx);
    std::optional<Comparison> compared;
    if (sub.status == AdmissibilityStatus::NotAdmissible) {
        result.status = AdmissibilityStatus::NotAdmissible;
    } else {
        // Tails within the equality band of the boundary can land on either
        // side; the other branch decides when the preferred one does not apply.
        const bool interior_first = sub.status == AdmissibilityStatus::AdmissibleInterior;
        std::optional<LevelVerdict> v = interior_first ? interior_branch(norms, ctx) : boundary_branch(norms, ctx);
        if (!v) {
            v = interior_first ? boundary_branch(norms, ctx) : interior_branch(norms, ctx);
        }
        if (!v) {
            throw NumericalFailure("decide_admissible: tail is neither interior nor boundary to working precision",
                                   0.0);
        }
        result.status = v->status;
        result.witness = std::move(v->witness);
        compared = v->compared;
    }

    result.trace.push_back({norms.exponents.values(), result.status, compared});
    result.trace.insert(result.trace.end(), sub.trace.begin(), sub.trace.end());
    return result;
}

} // namespace

AdmissibilityResult decide_admissible(const NormVector& norms, double tol, const KolmogorovOptions& options)
{
    if (norms.exponents.back() != norms.family.r) {
        throw UnsupportedSystem("decide_admissible: the recursive test requires k_d = r");
    }
    require_positive(norms, "decide_admissible");
    return decide_level(norms, LevelContext{tol, options});
}

FamilyMember extremal_family_member(const FunctionFamily& family, const ExponentVector& k,
                                    const std::vector<double>& knots, const std::vector<double>& weights,
                                    double constant)
{
    const auto m = static_cast<std::size_t>(k.size() / 2);
    if (knots.size() != m || weights.size() != m) {
        throw DomainError("extremal_family_member: need exactly [d/2] knots and weights");
    }
    if (family.kind == FamilyKind::MM && k.back() > family.r) {
        throw DomainError("extremal_family_member: exponent exceeds the family order");
    }
    FamilyMember member{IdealSpline(family, knots, weights, constant), false};
    member.redundant_constant = k.size() % 2 == 0 && constant > 0.0;
    return member;
}

} // namespace kolmo
