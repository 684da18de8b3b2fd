#include "kolmo/splines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace kolmo
{

IdealSpline::IdealSpline(FunctionFamily family, std::vector<double> knots, std::vector<double> weights,
                         double constant)
    : family_(family), knots_(std::move(knots)), weights_(std::move(weights)), constant_(constant)
{
    if (knots_.size() != weights_.size()) {
        throw DomainError("spline: knots and weights differ in length");
    }
    for (std::size_t s = 0; s < knots_.size(); ++s) {
        if (!std::isfinite(knots_[s]) || !(knots_[s] > 0.0)) {
            throw DomainError("spline: knots must be positive and finite");
        }
        if (!std::isfinite(weights_[s]) || !(weights_[s] > 0.0)) {
            throw DomainError("spline: weights must be positive and finite");
        }
        if (s > 0 && !(knots_[s] < knots_[s - 1])) {
            throw DomainError("spline: knots must be strictly decreasing");
        }
    }
    if (!std::isfinite(constant_) || constant_ < 0.0) {
        throw DomainError("spline: constant must be finite and nonnegative");
    }
}

IdealSpline spline_from_representation(const Representation& rep, const FunctionFamily& family)
{
    std::vector<double> knots;
    std::vector<double> weights;
    double constant = 0.0;
    // atoms ascend in node, so knots a = 1/u descend
    for (const Atom& a : rep.atoms()) {
        if (a.node == 0.0) {
            constant = family.kind == FamilyKind::AM ? a.weight
                                                     : a.weight / static_cast<double>(factorial(family.r));
            continue;
        }
        knots.push_back(1.0 / a.node);
        weights.push_back(a.weight * ipow(a.node, family.r));
    }
    return IdealSpline(family, std::move(knots), std::move(weights), constant);
}

Representation representation_of(const IdealSpline& spline)
{
    const FunctionFamily& f = spline.family();
    std::vector<Atom> atoms;
    if (spline.constant() > 0.0) {
        const double w = f.kind == FamilyKind::AM ? spline.constant()
                                                  : spline.constant() * static_cast<double>(factorial(f.r));
        atoms.push_back({0.0, w});
    }
    for (Index s = 0; s < spline.knot_count(); ++s) {
        const double a = spline.knots()[static_cast<std::size_t>(s)];
        atoms.push_back({1.0 / a, spline.weights()[static_cast<std::size_t>(s)] * ipow(a, f.r)});
    }
    return Representation(std::move(atoms));
}

double eval(const IdealSpline& spline, double t, int j)
{
    if (t > 0.0) {
        throw DomainError("eval: splines live on t <= 0");
    }
    if (j < 0) {
        throw DomainError("eval: derivative order must be nonnegative");
    }
    const int r = spline.family().r;
    double value = j == 0 ? spline.constant() : 0.0;
    if (spline.family().kind == FamilyKind::AM) {
        for (Index s = 0; s < spline.knot_count(); ++s) {
            const double a = spline.knots()[static_cast<std::size_t>(s)];
            const double lambda = spline.weights()[static_cast<std::size_t>(s)];
            value += lambda * std::pow(a, r - j) * std::exp(t / a);
        }
        return value;
    }
    if (j > r) {
        return value;
    }
    const double scale = 1.0 / static_cast<double>(factorial(r - j));
    double sum = 0.0;
    for (Index s = 0; s < spline.knot_count(); ++s) {
        const double a = spline.knots()[static_cast<std::size_t>(s)];
        const double lambda = spline.weights()[static_cast<std::size_t>(s)];
        const double x = a + t;
        if (j == r) {
            if (x >= 0.0) {
                sum += lambda;
            }
        } else if (x > 0.0) {
            sum += lambda * ipow(x, r - j);
        }
    }
    return value + scale * sum;
}

NormVector norms(const IdealSpline& spline, const ExponentVector& k)
{
    const FunctionFamily& f = spline.family();
    if (f.kind == FamilyKind::MM && k.back() > f.r) {
        throw DomainError("norms: exponent exceeds the spline order");
    }
    Vector<double> m(k.size());
    for (Index i = 0; i < k.size(); ++i) {
        m(i) = eval(spline, 0.0, k[i]);
    }
    return NormVector(std::move(m), ExponentVector(k.values(), std::max(f.r, k.back())), f);
}

namespace
{

double unit_uniform(std::mt19937_64& gen)
{
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double log_uniform(std::mt19937_64& gen, double lo, double hi)
{
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit_uniform(gen));
}

} // namespace

IdealSpline random_member(const FunctionFamily& family, int knot_count, std::uint64_t seed)
{
    if (knot_count < 0) {
        throw DomainError("random_member: knot count must be nonnegative");
    }
    std::mt19937_64 gen(seed);
    std::vector<double> knots;
    while (static_cast<int>(knots.size()) < knot_count) {
        const double a = log_uniform(gen, 1e-2, 1e2);
        const bool separated = std::all_of(knots.begin(), knots.end(), [a](double b) {
            return std::max(a, b) / std::min(a, b) >= 1.05;
        });
        if (separated) {
            knots.push_back(a);
        }
    }
    std::sort(knots.begin(), knots.end(), std::greater<>());
    std::vector<double> weights(knots.size());
    for (double& w : weights) {
        w = log_uniform(gen, 0.1, 10.0);
    }
    const double constant = unit_uniform(gen) < 0.5 ? log_uniform(gen, 0.1, 10.0) : 0.0;
    return IdealSpline(family, std::move(knots), std::move(weights), constant);
}

} // namespace kolmo
