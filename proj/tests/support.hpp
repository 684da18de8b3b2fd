#pragma once

// Hand-rolled generators and comparisons shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kolmo/moment_core.hpp"

namespace testing
{

class Rng
{
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin() { return integer(0, 1) == 1; }
    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

/// 0 = k_1 < k_2 < ... with increments in [1, max_step].
inline std::vector<int> exponents_from_zero(Rng& rng, int d, int max_step)
{
    std::vector<int> k{0};
    while (static_cast<int>(k.size()) < d) {
        k.push_back(k.back() + rng.integer(1, max_step));
    }
    return k;
}

/// `positive` nodes in [lo, hi] pairwise at least `gap` apart, weights in [0.5, 2].
inline kolmo::Representation separated_measure(Rng& rng, int positive, bool zero_atom, double lo, double hi,
                                               double gap)
{
    std::vector<double> nodes;
    while (static_cast<int>(nodes.size()) < positive) {
        const double t = rng.uniform(lo, hi);
        if (std::all_of(nodes.begin(), nodes.end(), [&](double s) { return std::abs(s - t) >= gap; })) {
            nodes.push_back(t);
        }
    }
    std::vector<kolmo::Atom> atoms;
    if (zero_atom) {
        atoms.push_back({0.0, rng.uniform(0.5, 2.0)});
    }
    for (double t : nodes) {
        atoms.push_back({t, rng.uniform(0.5, 2.0)});
    }
    return kolmo::Representation(std::move(atoms));
}

/// Index-(d+1)/2 measure with a root at t_star: the finite canonical
/// representation of its moments, so the root is reachable by construction.
inline kolmo::Representation canonical_measure(Rng& rng, int d, double t_star, double lo, double hi, double gap)
{
    const bool zero_atom = d % 2 == 0;
    const int free = zero_atom ? d / 2 - 1 : (d - 1) / 2;
    std::vector<double> nodes{t_star};
    while (static_cast<int>(nodes.size()) < free + 1) {
        const double t = rng.uniform(lo, hi);
        if (std::all_of(nodes.begin(), nodes.end(), [&](double s) { return std::abs(s - t) >= gap; })) {
            nodes.push_back(t);
        }
    }
    std::sort(nodes.begin(), nodes.end());
    std::vector<kolmo::Atom> atoms;
    if (zero_atom) {
        atoms.push_back({0.0, rng.uniform(0.5, 2.0)});
    }
    for (double t : nodes) {
        atoms.push_back({t, rng.uniform(0.5, 2.0)});
    }
    return kolmo::Representation(std::move(atoms));
}

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Largest componentwise relative difference.
inline double rel_diff(const kolmo::Vector<double>& a, const kolmo::Vector<double>& b)
{
    double worst = 0.0;
    for (kolmo::Index i = 0; i < a.size(); ++i) {
        worst = std::max(worst, rel_diff(a(i), b(i)));
    }
    return worst;
}

/// Atoms matched in order; infinity on a size mismatch.
inline double rel_diff(const kolmo::Representation& a, const kolmo::Representation& b)
{
    if (a.size() != b.size()) {
        return INFINITY;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.atoms().size(); ++i) {
        worst = std::max(worst, rel_diff(a.atoms()[i].node, b.atoms()[i].node));
        worst = std::max(worst, rel_diff(a.atoms()[i].weight, b.atoms()[i].weight));
    }
    return worst;
}

} // namespace testing
