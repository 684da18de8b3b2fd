#include <doctest.h>

#include <numeric>

#include "kolmo/errors.hpp"
#include "kolmo/kolmogorov.hpp"
#include "support.hpp"

using namespace kolmo;

namespace
{

const FunctionFamily mm2(FamilyKind::MM, 2);
const FunctionFamily am2(FamilyKind::AM, 2);

NormVector problem(const FunctionFamily& f, std::vector<int> k, std::initializer_list<double> m)
{
    Vector<double> v(static_cast<Index>(m.size()));
    Index i = 0;
    for (double x : m) {
        v(i++) = x;
    }
    return NormVector(v, ExponentVector(std::move(k), f.r), f);
}

} // namespace

TEST_CASE("interior splines")
{
    const IdealSpline mm = interior_spline(problem(mm2, {1, 2}, {2, 2}));
    REQUIRE(mm.knot_count() == 1);
    CHECK(mm.knots()[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(mm.weights()[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(mm.constant() == 0.0);

    const IdealSpline am = interior_spline(problem(am2, {1, 2}, {2, 2}));
    CHECK(am.knots()[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(am.weights()[0] == doctest::Approx(2.0).epsilon(1e-10));

    CHECK_THROWS_AS(interior_spline(problem(mm2, {0, 1, 2}, {1, 2, 2})), PreconditionError);
    // (M_1, M_2, M_3, M_4) on the boundary: a single knot fits all four
    const FunctionFamily mm4(FamilyKind::MM, 4);
    const NormVector edge = norms(IdealSpline(mm4, {1}, {1}, 0), ExponentVector({1, 2, 3, 4}, 4));
    CHECK_THROWS_AS(interior_spline(edge), NotInterior);
}

TEST_CASE("boundary splines")
{
    const IdealSpline one = boundary_spline(problem(mm2, {0, 1, 2}, {1, 2, 2}));
    REQUIRE(one.knot_count() == 1);
    CHECK(one.knots()[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(one.weights()[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(one.constant() == 0.0);

    const IdealSpline constant = boundary_spline(problem(am2, {0, 1, 2}, {5, 0, 0}));
    CHECK(constant.knot_count() == 0);
    CHECK(constant.constant() == doctest::Approx(5.0));

    CHECK_THROWS_AS(boundary_spline(problem(mm2, {0, 1, 2}, {1.5, 2, 2})), NotBoundary);
}

TEST_CASE("canonical splines")
{
    const IdealSpline s = canonical_spline(problem(mm2, {0, 1, 2}, {1, 3, 5}), 1.0);
    REQUIRE(s.knot_count() == 2);
    CHECK(s.knots()[0] == 1.0);
    CHECK(s.knots()[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.weights()[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.weights()[1] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK_THROWS_AS(canonical_spline(problem(mm2, {0, 1, 2}, {1, 3, 5}), 0.0), DomainError);
    CHECK_THROWS_AS(canonical_spline(problem(mm2, {0, 1, 2}, {1, 3, 5}), -2.0), DomainError);
}

TEST_CASE("decide on the worked family")
{
    const AdmissibilityResult at = decide_admissible(problem(mm2, {0, 1, 2}, {1, 2, 2}));
    CHECK(at.status == AdmissibilityStatus::AdmissibleBoundary);
    REQUIRE(at.witness);
    CHECK(at.witness->knots()[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(at.witness->weights()[0] == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(at.trace.size() == 2);
    CHECK(at.trace[0].k == std::vector<int>{0, 1, 2});
    REQUIRE(at.trace[0].compared);
    CHECK(at.trace[0].compared->rhs == doctest::Approx(1.0));
    CHECK_FALSE(at.trace[1].compared);

    CHECK(decide_admissible(problem(mm2, {0, 1, 2}, {1.5, 2, 2})).status == AdmissibilityStatus::AdmissibleInterior);
    CHECK(decide_admissible(problem(mm2, {0, 1, 2}, {0.9, 2, 2})).status == AdmissibilityStatus::NotAdmissible);

    for (const FunctionFamily& f : {mm2, am2, FunctionFamily(FamilyKind::MM, 5)}) {
        const AdmissibilityResult single = decide_admissible(problem(f, {f.r}, {7}));
        CHECK(single.status == AdmissibilityStatus::AdmissibleInterior);
        REQUIRE(single.witness);
        CHECK(single.witness->knot_count() == 1);
        CHECK(norms(*single.witness, ExponentVector({f.r}, f.r)).values(0) == doctest::Approx(7.0));
    }

    CHECK_THROWS_AS(decide_admissible(problem(FunctionFamily(FamilyKind::MM, 3), {0, 1, 2}, {1, 2, 2})),
                    UnsupportedSystem);
    CHECK_THROWS_AS(decide_admissible(problem(mm2, {0, 1, 2}, {0, 2, 2})), DomainError);
    CHECK_THROWS_AS(decide_admissible(problem(mm2, {0, 1, 2}, {-1, 2, 2})), DomainError);
}

TEST_CASE("extremal family members")
{
    const ExponentVector k({0, 1, 2}, 2);
    const FamilyMember m = extremal_family_member(mm2, k, {1}, {2}, 0);
    CHECK(norms(m.spline, k).values == Vector<double>{{1, 2, 2}});
    CHECK_FALSE(m.redundant_constant);

    const FamilyMember even = extremal_family_member(mm2, ExponentVector({1, 2}, 2), {1}, {2}, 0.5);
    CHECK(even.redundant_constant);

    const FunctionFamily mm4(FamilyKind::MM, 4);
    CHECK_THROWS_AS(extremal_family_member(mm4, ExponentVector({0, 1, 2, 3, 4}, 4), {1, 2}, {1, 1}, 0), DomainError);
    CHECK_THROWS_AS(extremal_family_member(mm2, k, {1, 0.5}, {1, 1}, 0), DomainError);
}

TEST_CASE("witnesses realize decided tuples")
{
    testing::Rng rng(911);
    for (int trial = 0; trial < 80; ++trial) {
        const int r = rng.integer(2, 6);
        const int d = rng.integer(1, std::min(5, r + 1));
        const FunctionFamily fam(rng.coin() ? FamilyKind::AM : FamilyKind::MM, r);
        std::vector<int> pool(static_cast<std::size_t>(r));
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> k;
        for (int i = 0; i < d - 1; ++i) {
            const auto j = static_cast<std::size_t>(rng.integer(0, static_cast<int>(pool.size()) - 1));
            k.push_back(pool[j]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
        }
        std::sort(k.begin(), k.end());
        k.push_back(r);
        const ExponentVector exps(k, r);
        IdealSpline x = random_member(fam, std::max(1, d / 2), rng.bits());
        if (d % 2 == 0 || exps.front() > 0) {
            x = IdealSpline(fam, x.knots(), x.weights(), 0.0);
        }
        const NormVector m = norms(x, exps);
        const AdmissibilityResult res = decide_admissible(m);
        CHECK(res.status != AdmissibilityStatus::NotAdmissible);
        if (res.witness) {
            CHECK(testing::rel_diff(norms(*res.witness, exps).values, m.values) < 1e-6);
        }

        // family transport
        if (fam.kind == FamilyKind::MM) {
            CHECK(decide_admissible(factorial_scale(m, ScaleDirection::MMtoAM)).status == res.status);
        }
    }
}

TEST_CASE("status is monotone in the first norm")
{
    testing::Rng rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        const int r = rng.integer(2, 5);
        const FunctionFamily fam(FamilyKind::MM, r);
        const ExponentVector k({0, r - 1, r}, r);
        // a one-knot spline without constant sits exactly at the threshold
        const IdealSpline x = random_member(fam, 1, rng.bits());
        NormVector m = norms(IdealSpline(fam, x.knots(), x.weights(), 0.0), k);
        const double threshold = m.values(0);
        int last = 0;
        for (double f : {0.5, 0.9, 0.99, 1.0, 1.01, 1.5, 10.0}) {
            m.values(0) = threshold * f;
            const auto s = static_cast<int>(decide_admissible(m).status);
            CHECK(s >= last);
            if (f == 1.0) {
                CHECK(decide_admissible(m).status == AdmissibilityStatus::AdmissibleBoundary);
            }
            last = s;
        }
    }
}
