#pragma once

///
/// \file moment_core.hpp
///
/// Power moment systems t^{k_1}, ..., t^{k_d} on [0, inf), atomic measures
/// and the diagonal factorial map between the norm scales of absolutely
/// monotone (AM) and Williamson multiply monotone (MM) functions.
///
/// Conventions used throughout the library:
///   - 0^0 = 1, so an atom at the origin contributes exactly e_1 when k_1 = 0;
///   - an atom at node 0 counts one half towards the index of a representation.
///

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kolmo/errors.hpp"

namespace kolmo
{

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::Index;

/// Largest supported spline order. 20! is the last factorial exact in 64 bits.
inline constexpr int max_order = 20;

/// x^n by repeated squaring with 0^0 = 1.
template <typename Scalar>
constexpr Scalar ipow(Scalar x, int n)
{
    Scalar result(1);
    Scalar base = x;
    while (n > 0) {
        if (n & 1) {
            result *= base;
        }
        base *= base;
        n >>= 1;
    }
    return result;
}

/// n! in exact integer arithmetic, 0 <= n <= 20.
std::uint64_t factorial(int n);

///
/// Strictly increasing exponents 0 <= k_1 < ... < k_d <= r of a power system,
/// together with the spline order r they are attached to.
///
class ExponentVector
{
public:
    ExponentVector(std::vector<int> exponents, int order);

    /// Order defaults to the largest exponent.
    explicit ExponentVector(std::vector<int> exponents);

    Index size() const noexcept { return static_cast<Index>(exps_.size()); }
    int operator[](Index i) const { return exps_[static_cast<std::size_t>(i)]; }
    int front() const noexcept { return exps_.front(); }
    int back() const noexcept { return exps_.back(); }
    int order() const noexcept { return order_; }
    const std::vector<int>& values() const noexcept { return exps_; }

    /// (k_2, ..., k_d).
    ExponentVector drop_first() const;
    /// (k_2, ..., k_{d-1}).
    ExponentVector drop_first_and_last() const;
    /// (0, k_2 - k_1, ..., k_d - k_1), same order.
    ExponentVector shifted_to_zero() const;
    /// First `count` exponents.
    ExponentVector head(Index count) const;

    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

private:
    std::vector<int> exps_;
    int order_;
};

///
/// Candidate moment vector c in R^d for the power system of `exponents`.
///
struct MomentVector
{
    MomentVector(Vector<double> values, ExponentVector exponents);

    Index size() const noexcept { return values.size(); }

    Vector<double> values;
    ExponentVector exponents;
};

/// Point mass of a discrete measure on [0, inf).
struct Atom
{
    double node;
    double weight;

    friend bool operator==(const Atom&, const Atom&) = default;
};

///
/// Finite atomic measure: atoms sorted by node, nodes pairwise distinct.
///
/// Nodes closer than 1e-8 * (largest node) are rejected as duplicates; callers
/// merge them before construction.
///
class Representation
{
public:
    Representation() = default;
    explicit Representation(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    Index size() const noexcept { return static_cast<Index>(atoms_.size()); }
    bool empty() const noexcept { return atoms_.empty(); }
    bool has_zero_atom() const noexcept { return !atoms_.empty() && atoms_.front().node == 0.0; }
    Index positive_count() const noexcept { return size() - (has_zero_atom() ? 1 : 0); }
    double total_mass() const noexcept;

    /// Multiplies every weight by alpha > 0.
    Representation scaled(double alpha) const;

    friend bool operator==(const Representation&, const Representation&) = default;

private:
    std::vector<Atom> atoms_;
};

///
/// Exact half-integer, stored doubled.
///
class HalfInteger
{
public:
    constexpr HalfInteger() = default;
    static constexpr HalfInteger from_twice(int twice)
    {
        HalfInteger h;
        h.twice_ = twice;
        return h;
    }

    constexpr int twice_value() const noexcept { return twice_; }
    constexpr double value() const noexcept { return 0.5 * twice_; }
    constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }

    /// "3/2", "1", "1/2".
    std::string to_string() const;

    friend constexpr auto operator<=>(const HalfInteger&, const HalfInteger&) = default;

private:
    int twice_ = 0;
};

enum class FamilyKind
{
    AM,
    MM
};

/// Absolutely monotone or multiply monotone (Williamson) class of order r.
struct FunctionFamily
{
    FunctionFamily(FamilyKind kind, int r);

    FamilyKind kind;
    int r;

    friend bool operator==(const FunctionFamily&, const FunctionFamily&) = default;
};

std::string to_string(FamilyKind kind);

/// Target derivative sup-norms M_{k_1}, ..., M_{k_d} for a function family.
struct NormVector
{
    NormVector(Vector<double> values, ExponentVector exponents, FunctionFamily family);

    Index size() const noexcept { return values.size(); }

    Vector<double> values;
    ExponentVector exponents;
    FunctionFamily family;
};

enum class ScaleDirection
{
    MMtoAM,
    AMtoMM
};

///
/// (t^{k_1}, ..., t^{k_d}) with 0^0 = 1.
///
template <typename Scalar>
Vector<Scalar> curve_point(Scalar t, const ExponentVector& k)
{
    if (!(t >= Scalar(0))) {
        throw DomainError("curve_point: node must be nonnegative");
    }
    Vector<Scalar> u(k.size());
    for (Index i = 0; i < k.size(); ++i) {
        u(i) = ipow(t, k[i]);
    }
    return u;
}

MomentVector curve_point(double t, const ExponentVector& k);

/// c_i = sum_s w_s t_s^{k_i}.
MomentVector moments_of(const Representation& rep, const ExponentVector& k);

HalfInteger index_of(const Representation& rep);

/// Multiplies (MMtoAM) or divides (AMtoMM) component i by (r - k_i)!.
NormVector factorial_scale(const NormVector& norms, ScaleDirection direction);

/// Coordinates in which admissibility coincides with moment-cone membership:
/// identity for AM, c_i = (r - k_i)! M_{k_i} for MM.
MomentVector moment_coordinates(const NormVector& norms);

/// Inverse of moment_coordinates for the given family.
NormVector norms_from_moments(const MomentVector& moments, const FunctionFamily& family);

} // namespace kolmo
