#pragma once

///
/// \file splines.hpp
///
/// Ideal splines on the negative half-line:
///
///   AM:     C + sum_s lambda_s a_s^r exp(t / a_s)
///   MM(r):  C + (1 / r!) sum_s lambda_s (a_s + t)_+^r
///
/// with knots -a_s (a_1 > ... > a_m > 0) and weights lambda_s > 0. A positive
/// constant C counts as an extra half knot. Both families are generated by
/// discrete measures: an atom (u, w) with u > 0 gives the knot a = 1/u with
/// weight lambda = w u^r, and an atom at the origin gives the constant.
///
/// Sup-norms of all derivatives are attained at t = 0.
///

#include <cstdint>
#include <vector>

#include "kolmo/moment_core.hpp"

namespace kolmo
{

class IdealSpline
{
public:
    /// Knots must be positive and strictly decreasing, weights positive and of
    /// the same length, the constant nonnegative.
    IdealSpline(FunctionFamily family, std::vector<double> knots, std::vector<double> weights, double constant);

    const FunctionFamily& family() const noexcept { return family_; }
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double constant() const noexcept { return constant_; }
    Index knot_count() const noexcept { return static_cast<Index>(knots_.size()); }

    friend bool operator==(const IdealSpline&, const IdealSpline&) = default;

private:
    FunctionFamily family_;
    std::vector<double> knots_;
    std::vector<double> weights_;
    double constant_;
};

IdealSpline spline_from_representation(const Representation& rep, const FunctionFamily& family);

Representation representation_of(const IdealSpline& spline);

/// j-th derivative at t <= 0. For MM, order r uses the right limit at knots
/// and orders above r return 0.
double eval(const IdealSpline& spline, double t, int j);

/// (||x^{(k_1)}||, ..., ||x^{(k_d)}||) = derivatives at 0.
NormVector norms(const IdealSpline& spline, const ExponentVector& k);

/// Deterministic random class member: knots log-uniform in [1e-2, 1e2] with
/// pairwise ratio >= 1.05, weights log-uniform in [0.1, 10], and with
/// probability 1/2 a constant log-uniform in [0.1, 10] (else 0).
IdealSpline random_member(const FunctionFamily& family, int knot_count, std::uint64_t seed);

} // namespace kolmo
