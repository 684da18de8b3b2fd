#include "kolmo/moment_core.hpp"

#include <algorithm>
#include <cmath>

namespace kolmo
{

std::uint64_t factorial(int n)
{
    if (n < 0 || n > max_order) {
        throw DomainError("factorial: argument outside [0, 20]");
    }
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= static_cast<std::uint64_t>(i);
    }
    return f;
}

ExponentVector::ExponentVector(std::vector<int> exponents, int order)
    : exps_(std::move(exponents)), order_(order)
{
    if (exps_.empty()) {
        throw DomainError("exponent vector must be nonempty");
    }
    if (exps_.front() < 0) {
        throw DomainError("exponents must be nonnegative");
    }
    for (std::size_t i = 1; i < exps_.size(); ++i) {
        if (exps_[i] <= exps_[i - 1]) {
            throw DomainError("exponents must be strictly increasing");
        }
    }
    if (order_ < exps_.back()) {
        throw DomainError("order r must be at least the largest exponent");
    }
}

ExponentVector::ExponentVector(std::vector<int> exponents)
    : ExponentVector(exponents, exponents.empty() ? 0 : exponents.back())
{
}

ExponentVector ExponentVector::drop_first() const
{
    if (exps_.size() < 2) {
        throw DomainError("drop_first: need at least two exponents");
    }
    return ExponentVector({exps_.begin() + 1, exps_.end()}, order_);
}

ExponentVector ExponentVector::drop_first_and_last() const
{
    if (exps_.size() < 3) {
        throw DomainError("drop_first_and_last: need at least three exponents");
    }
    return ExponentVector({exps_.begin() + 1, exps_.end() - 1}, order_);
}

ExponentVector ExponentVector::shifted_to_zero() const
{
    std::vector<int> s(exps_);
    for (int& e : s) {
        e -= exps_.front();
    }
    return ExponentVector(std::move(s), order_);
}

ExponentVector ExponentVector::head(Index count) const
{
    if (count < 1 || count > size()) {
        throw DomainError("head: count out of range");
    }
    return ExponentVector({exps_.begin(), exps_.begin() + count}, order_);
}

MomentVector::MomentVector(Vector<double> v, ExponentVector k) : values(std::move(v)), exponents(std::move(k))
{
    if (values.size() != exponents.size()) {
        throw DomainError("moment vector length differs from exponent count");
    }
}

Representation::Representation(std::vector<Atom> atoms) : atoms_(std::move(atoms))
{
    for (const Atom& a : atoms_) {
        if (!std::isfinite(a.node) || a.node < 0.0) {
            throw DomainError("atom node must be finite and nonnegative");
        }
        if (!std::isfinite(a.weight) || !(a.weight > 0.0)) {
            throw DomainError("atom weight must be finite and positive");
        }
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.node < b.node; });
    if (atoms_.empty()) {
        return;
    }
    const double separation = 1e-8 * atoms_.back().node;
    for (std::size_t i = 1; i < atoms_.size(); ++i) {
        if (atoms_[i].node - atoms_[i - 1].node <= separation) {
            throw DomainError("representation has duplicate nodes; merge atoms first");
        }
    }
}

double Representation::total_mass() const noexcept
{
    double m = 0.0;
    for (const Atom& a : atoms_) {
        m += a.weight;
    }
    return m;
}

Representation Representation::scaled(double alpha) const
{
    if (!(alpha > 0.0)) {
        throw DomainError("scale factor must be positive");
    }
    std::vector<Atom> out(atoms_);
    for (Atom& a : out) {
        a.weight *= alpha;
    }
    return Representation(std::move(out));
}

std::string HalfInteger::to_string() const
{
    if (twice_ % 2 == 0) {
        return std::to_string(twice_ / 2);
    }
    return std::to_string(twice_) + "/2";
}

FunctionFamily::FunctionFamily(FamilyKind k, int order) : kind(k), r(order)
{
    if (r < 1 || r > max_order) {
        throw DomainError("family order r must lie in [1, 20]");
    }
}

std::string to_string(FamilyKind kind)
{
    return kind == FamilyKind::AM ? "am" : "mm";
}

NormVector::NormVector(Vector<double> v, ExponentVector k, FunctionFamily f)
    : values(std::move(v)), exponents(std::move(k)), family(f)
{
    if (values.size() != exponents.size()) {
        throw DomainError("norm vector length differs from exponent count");
    }
    for (Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values(i)) || values(i) < 0.0) {
            throw DomainError("norms must be finite and nonnegative");
        }
    }
}

MomentVector curve_point(double t, const ExponentVector& k)
{
    return MomentVector(curve_point<double>(t, k), k);
}

MomentVector moments_of(const Representation& rep, const ExponentVector& k)
{
    Vector<double> c = Vector<double>::Zero(k.size());
    for (const Atom& a : rep.atoms()) {
        c.noalias() += a.weight * curve_point<double>(a.node, k);
    }
    return MomentVector(std::move(c), k);
}

HalfInteger index_of(const Representation& rep)
{
    return HalfInteger::from_twice(static_cast<int>(2 * rep.positive_count() + (rep.has_zero_atom() ? 1 : 0)));
}

namespace
{

Vector<double> factorial_weights(const ExponentVector& k, int r)
{
    if (k.back() > r) {
        throw DomainError("exponent exceeds the family order r");
    }
    Vector<double> f(k.size());
    for (Index i = 0; i < k.size(); ++i) {
        f(i) = static_cast<double>(factorial(r - k[i]));
    }
    return f;
}

} // namespace

NormVector factorial_scale(const NormVector& norms, ScaleDirection direction)
{
    const Vector<double> f = factorial_weights(norms.exponents, norms.family.r);
    if (direction == ScaleDirection::MMtoAM) {
        if (norms.family.kind != FamilyKind::MM) {
            throw DomainError("MMtoAM expects an MM norm vector");
        }
        return NormVector(norms.values.cwiseProduct(f), norms.exponents, FunctionFamily(FamilyKind::AM, norms.family.r));
    }
    if (norms.family.kind != FamilyKind::AM) {
        throw DomainError("AMtoMM expects an AM norm vector");
    }
    return NormVector(norms.values.cwiseQuotient(f), norms.exponents, FunctionFamily(FamilyKind::MM, norms.family.r));
}

MomentVector moment_coordinates(const NormVector& norms)
{
    if (norms.family.kind == FamilyKind::AM) {
        return MomentVector(norms.values, norms.exponents);
    }
    const Vector<double> f = factorial_weights(norms.exponents, norms.family.r);
    return MomentVector(norms.values.cwiseProduct(f), norms.exponents);
}

NormVector norms_from_moments(const MomentVector& moments, const FunctionFamily& family)
{
    if (family.kind == FamilyKind::AM) {
        return NormVector(moments.values, moments.exponents, family);
    }
    const Vector<double> f = factorial_weights(moments.exponents, family.r);
    return NormVector(moments.values.cwiseQuotient(f), moments.exponents, family);
}

} // namespace kolmo
