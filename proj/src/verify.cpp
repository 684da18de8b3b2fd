#include "kolmo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

namespace kolmo
{

std::string to_string(Suite suite)
{
    switch (suite) {
    case Suite::Lemma1:
        return "lemma1";
    case Suite::Oracle:
        return "oracle";
    case Suite::Roundtrip:
        return "roundtrip";
    case Suite::Correspondence:
        return "correspondence";
    case Suite::TheoremMain:
        return "theorem-main";
    }
    return "unknown";
}

Suite parse_suite(const std::string& name)
{
    for (Suite s : {Suite::Lemma1, Suite::Oracle, Suite::Roundtrip, Suite::Correspondence, Suite::TheoremMain}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw DomainError("unknown verify suite \"" + name + "\"");
}

namespace
{

constexpr int oracle_grid_size = 20000;
constexpr double oracle_margin = 1e-4;

class Rng
{
public:
    /// Independent stream per (seed, case) pair.
    Rng(std::uint64_t seed, std::uint64_t stream) : gen_(seeded(seed, stream)) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    /// Inclusive range.
    int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin() { return (gen_() >> 63) != 0; }
    double normal() { return std::normal_distribution<double>()(gen_); }
    std::uint64_t bits() { return gen_(); }

private:
    static std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        return std::mt19937_64(seq);
    }

    std::mt19937_64 gen_;
};

/// 0 = k_1 < ... < k_d with increments in [1, max_step].
std::vector<int> chain_from_zero(Rng& rng, int d, int max_step)
{
    std::vector<int> k{0};
    while (static_cast<int>(k.size()) < d) {
        k.push_back(k.back() + rng.integer(1, max_step));
    }
    return k;
}

/// d distinct exponents in [0, r] ending at r.
std::vector<int> chain_to(Rng& rng, int d, int r)
{
    std::vector<int> pool(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        pool[static_cast<std::size_t>(i)] = i;
    }
    for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
        const auto j = i + static_cast<std::size_t>(rng.bits() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> k(pool.begin(), pool.begin() + (d - 1));
    k.push_back(r);
    std::sort(k.begin(), k.end());
    return k;
}

/// Positive nodes drawn log-uniformly with pairwise ratio >= min_ratio.
std::vector<double> separated_nodes(Rng& rng, int count, double lo, double hi, double min_ratio)
{
    std::vector<double> nodes;
    while (static_cast<int>(nodes.size()) < count) {
        const double t = rng.log_uniform(lo, hi);
        if (std::all_of(nodes.begin(), nodes.end(),
                        [&](double s) { return std::max(s, t) / std::min(s, t) >= min_ratio; })) {
            nodes.push_back(t);
        }
    }
    return nodes;
}

Representation random_representation(Rng& rng, int positive, bool zero_atom, double lo, double hi)
{
    std::vector<Atom> atoms;
    if (zero_atom) {
        atoms.push_back({0.0, rng.log_uniform(0.1, 10.0)});
    }
    for (double t : separated_nodes(rng, positive, lo, hi, 1.1)) {
        atoms.push_back({t, rng.log_uniform(0.1, 10.0)});
    }
    return Representation(std::move(atoms));
}

double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string describe(const std::vector<int>& k)
{
    std::ostringstream os;
    os << "k=(";
    for (std::size_t i = 0; i < k.size(); ++i) {
        os << (i ? "," : "") << k[i];
    }
    os << ")";
    return os.str();
}

std::string describe(const Representation& rep)
{
    std::ostringstream os;
    os.precision(17);
    os << "{";
    for (std::size_t i = 0; i < rep.atoms().size(); ++i) {
        os << (i ? "," : "") << "(" << rep.atoms()[i].node << "," << rep.atoms()[i].weight << ")";
    }
    os << "}";
    return os.str();
}

struct Verdict
{
    bool pass = false;
    bool skip = false;
    std::string detail;
};

Verdict roundtrip_case(Rng& rng, const VerifyOptions& opts)
{
    const int positive = rng.integer(1, 3);
    const bool zero_atom = rng.coin();
    const int d = 2 * positive + (zero_atom ? 1 : 0);
    const std::vector<int> k = chain_from_zero(rng, d, 2);

    std::vector<double> nodes;
    while (static_cast<int>(nodes.size()) < positive) {
        const double t = rng.uniform(0.2, 3.0);
        if (std::all_of(nodes.begin(), nodes.end(), [t](double s) { return std::abs(s - t) >= 0.1; })) {
            nodes.push_back(t);
        }
    }
    std::vector<Atom> atoms;
    if (zero_atom) {
        atoms.push_back({0.0, rng.uniform(0.5, 2.0)});
    }
    for (double t : nodes) {
        atoms.push_back({t, rng.uniform(0.5, 2.0)});
    }
    const Representation truth(std::move(atoms));
    const MomentVector c = moments_of(truth, ExponentVector(k));

    Verdict v;
    const std::string label = describe(k) + " " + describe(truth);
    std::optional<Representation> solved;
    try {
        solved = principal_representation(c, opts.tol, opts.solver);
    } catch (const NumericalFailure& e) {
        v.detail = label + ": " + e.what();
        return v;
    }
    const Representation& got = *solved;
    if (got.atoms().size() != truth.atoms().size()) {
        v.detail = label + ": atom count differs";
        return v;
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < got.atoms().size(); ++s) {
        const Atom& a = got.atoms()[s];
        const Atom& b = truth.atoms()[s];
        worst = std::max(worst, b.node == 0.0 ? std::abs(a.node) : rel_err(a.node, b.node));
        worst = std::max(worst, rel_err(a.weight, b.weight));
    }
    v.pass = worst <= 1e-6;
    v.detail = label + ": worst relative deviation " + std::to_string(worst);
    return v;
}

Verdict correspondence_case(Rng& rng, const VerifyOptions&)
{
    const int r = rng.integer(1, 10);
    const int d = rng.integer(1, std::min(5, r + 1));
    const std::vector<int> k = chain_to(rng, d, r);
    const Representation rep = random_representation(rng, rng.integer(1, 4), rng.coin(), 0.1, 10.0);

    const NormVector am = norms(spline_from_representation(rep, FunctionFamily(FamilyKind::AM, r)), ExponentVector(k, r));
    const NormVector mm = norms(spline_from_representation(rep, FunctionFamily(FamilyKind::MM, r)), ExponentVector(k, r));
    const NormVector scaled = factorial_scale(mm, ScaleDirection::MMtoAM);
    double worst = 0.0;
    for (Index i = 0; i < am.size(); ++i) {
        worst = std::max(worst, rel_err(scaled.values(i), am.values(i)));
    }
    Verdict v;
    v.pass = worst <= 1e-12;
    v.detail = describe(k) + " r=" + std::to_string(r) + ": worst relative deviation " + std::to_string(worst);
    return v;
}

Verdict lemma1_case(Rng& rng, const VerifyOptions& opts)
{
    const int d = rng.integer(2, 4);
    const int r = rng.integer(d, 8);
    const FunctionFamily family(FamilyKind::MM, r);
    // k_0 followed by the chain k_1 < ... < k_d = r
    const std::vector<int> full = chain_to(rng, d + 1, r);
    const int k0 = full.front();
    const std::vector<int> chain(full.begin() + 1, full.end());
    const int m = d / 2;
    const std::vector<int> head(chain.begin(), chain.begin() + 2 * m);

    const IdealSpline x = random_member(family, 6, rng.bits());
    const NormVector target = norms(x, ExponentVector(head, r));

    Verdict v;
    IdealSpline phi = x;
    try {
        phi = interior_spline(target, opts.tol, opts.solver);
    } catch (const std::runtime_error& e) {
        v.skip = true;
        v.detail = describe(full) + ": no matched spline (" + e.what() + ")";
        return v;
    }
    const double lhs = eval(phi, 0.0, k0);
    const double rhs = eval(x, 0.0, k0);
    bool ok = lhs <= rhs + 1e-9 * std::max(1.0, rhs);
    std::ostringstream os;
    os << describe(full) << ": |phi^(k0)| = " << lhs << " vs |x^(k0)| = " << rhs;
    if (d % 2 == 1) {
        const double lr = eval(phi, 0.0, r);
        const double rr = eval(x, 0.0, r);
        ok = ok && lr <= rr + 1e-9 * std::max(1.0, rr);
        os << "; |phi^(r)| = " << lr << " vs |x^(r)| = " << rr;
    }
    v.pass = ok;
    v.detail = os.str();
    return v;
}

/// True when points within relative distance `margin` of c receive both
/// oracle verdicts, i.e. the cone boundary passes within the margin.
bool near_boundary(const MomentVector& c, double margin, const Grid& grid)
{
    const double scale = margin * c.values.norm();
    bool seen_in = false;
    bool seen_out = false;
    auto probe = [&](const Vector<double>& x) {
        const bool in = cone_membership(MomentVector(x, c.exponents), grid).feasible;
        seen_in = seen_in || in;
        seen_out = seen_out || !in;
    };
    for (Index j = 0; j < c.size(); ++j) {
        Vector<double> e = Vector<double>::Zero(c.size());
        e(j) = scale;
        probe(c.values + e);
        probe(c.values - e);
    }
    // inward directions: small atoms added across the scale of c
    const double t_max = estimate_t_max(c);
    for (double t : {0.0, 1e-3 * t_max, 1e-2 * t_max, 1e-1 * t_max, t_max}) {
        const Vector<double> u = curve_point(t, c.exponents).values;
        probe(c.values + scale * u / u.norm());
    }
    return seen_in && seen_out;
}

Verdict oracle_case(Rng& rng, int index, const VerifyOptions& opts)
{
    const int d = rng.integer(2, 5);
    const ExponentVector k(chain_from_zero(rng, d, 2));
    Vector<double> c;
    std::string kind;
    switch (index % 4) {
    case 0:
        kind = "interior construction";
        c = moments_of(random_representation(rng, d / 2 + 1, rng.coin(), 0.1, 10.0), k).values;
        break;
    case 1: {
        kind = "boundary construction";
        const int positive = (d - 1) / 2;
        const bool zero_atom = positive == 0 || (2 * positive + 1 < d && rng.coin());
        c = moments_of(random_representation(rng, positive, zero_atom, 0.1, 10.0), k).values;
        break;
    }
    case 2: {
        kind = "perturbed construction";
        c = moments_of(random_representation(rng, d / 2 + 1, rng.coin(), 0.1, 10.0), k).values;
        const double eps = rng.log_uniform(1e-3, 0.3);
        for (Index i = 0; i < c.size(); ++i) {
            c(i) *= 1.0 + eps * rng.normal();
        }
        break;
    }
    default:
        kind = "random vector";
        c.resize(d);
        for (Index i = 0; i < c.size(); ++i) {
            c(i) = rng.log_uniform(1e-2, 1e2);
        }
        break;
    }
    const MomentVector mv(c, k);
    const Grid grid = default_grid(mv, oracle_grid_size);
    const bool oracle_in = cone_membership(mv, grid).feasible;
    const Classification cls = classify(mv, 1e-7, opts.solver);
    const bool classify_in = cls.kind == ConeClass::Boundary || cls.kind == ConeClass::Interior;

    Verdict v;
    v.detail = kind + " " + describe(k.values()) + ": classify " + to_string(cls.kind) + ", oracle " +
               (oracle_in ? "feasible" : "infeasible");
    if (oracle_in == classify_in) {
        v.pass = true;
    } else if (near_boundary(mv, oracle_margin, grid)) {
        v.skip = true;
        v.detail += " (within margin of the boundary)";
    }
    return v;
}

Verdict theorem_main_fixed(double m0)
{
    // MM, r = 2, k = (0,1,2), (M_1, M_2) = (2,2): the one-knot spline (1+t)_+^2
    // has ||x|| = 1, which is the threshold for M_0.
    const NormVector m(Vector<double>{{m0, 2.0, 2.0}}, ExponentVector({0, 1, 2}, 2),
                       FunctionFamily(FamilyKind::MM, 2));
    const AdmissibilityStatus want = m0 < 1.0   ? AdmissibilityStatus::NotAdmissible
                                     : m0 == 1.0 ? AdmissibilityStatus::AdmissibleBoundary
                                                 : AdmissibilityStatus::AdmissibleInterior;
    const AdmissibilityResult got = decide_admissible(m);
    Verdict v;
    v.pass = got.status == want;
    v.detail = "M_0 = " + std::to_string(m0) + ": " + to_string(got.status) + ", expected " + to_string(want);
    return v;
}

Verdict theorem_main_random(Rng& rng, const VerifyOptions& opts)
{
    const FamilyKind kind = rng.coin() ? FamilyKind::AM : FamilyKind::MM;
    const int r = rng.integer(2, 6);
    const int d = rng.integer(1, std::min(5, r + 1));
    const std::vector<int> kv = chain_to(rng, d, r);
    const FunctionFamily family(kind, r);
    IdealSpline x = random_member(family, d / 2 == 0 ? 1 : d / 2, rng.bits());
    if (d % 2 == 0) {
        x = IdealSpline(family, x.knots(), x.weights(), 0.0);
    }
    const ExponentVector k(kv, r);
    const NormVector target = norms(x, k);
    KolmogorovOptions ko;
    ko.solver = opts.solver;
    const AdmissibilityResult res = decide_admissible(target, opts.tol, ko);

    Verdict v;
    v.detail = to_string(kind) + " r=" + std::to_string(r) + " " + describe(kv) + ": " + to_string(res.status);
    if (res.status == AdmissibilityStatus::NotAdmissible) {
        return v;
    }
    if (!res.witness) {
        v.detail += ", no witness";
        return v;
    }
    const NormVector w = norms(*res.witness, k);
    double worst = 0.0;
    for (Index i = 0; i < w.size(); ++i) {
        worst = std::max(worst, rel_err(w.values(i), target.values(i)));
    }
    v.pass = worst <= 1e-6;
    v.detail += ", witness deviation " + std::to_string(worst);
    return v;
}

} // namespace

SuiteReport run_suite(Suite suite, const VerifyOptions& options)
{
    if (options.cases < 0) {
        throw DomainError("verify: case count must be nonnegative");
    }
    SuiteReport report;
    report.suite = suite;
    auto record = [&](int index, const Verdict& v) {
        ++report.cases;
        if (v.skip) {
            ++report.skipped;
            report.skipped_cases.push_back({index, v.detail});
        } else if (v.pass) {
            ++report.passed;
        } else {
            ++report.failed;
            report.counterexamples.push_back({index, v.detail});
        }
    };

    int index = 0;
    if (suite == Suite::TheoremMain) {
        for (double m0 : {0.5, 0.9, 0.99, 1.0, 1.01, 1.5, 10.0}) {
            record(index++, theorem_main_fixed(m0));
        }
    }
    for (int i = 0; i < options.cases; ++i, ++index) {
        Rng rng(options.seed, static_cast<std::uint64_t>(i));
        Verdict v;
        try {
            switch (suite) {
            case Suite::Lemma1:
                v = lemma1_case(rng, options);
                break;
            case Suite::Oracle:
                v = oracle_case(rng, i, options);
                break;
            case Suite::Roundtrip:
                v = roundtrip_case(rng, options);
                break;
            case Suite::Correspondence:
                v = correspondence_case(rng, options);
                break;
            case Suite::TheoremMain:
                v = theorem_main_random(rng, options);
                break;
            }
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        record(index, v);
    }
    return report;
}

} // namespace kolmo
