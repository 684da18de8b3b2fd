#include <doctest.h>

#include <numeric>

#include "kolmo/errors.hpp"
#include "kolmo/splines.hpp"
#include "support.hpp"

using namespace kolmo;

namespace
{

const FunctionFamily mm2(FamilyKind::MM, 2);
const FunctionFamily am2(FamilyKind::AM, 2);

} // namespace

TEST_CASE("splines from representations")
{
    const IdealSpline one = spline_from_representation(Representation({{1, 2}}), mm2);
    CHECK(one.knots() == std::vector<double>{1});
    CHECK(one.weights() == std::vector<double>{2});
    CHECK(one.constant() == 0.0);

    const IdealSpline constant = spline_from_representation(Representation({{0, 5}}), FunctionFamily(FamilyKind::AM, 3));
    CHECK(constant.knot_count() == 0);
    CHECK(constant.constant() == 5.0);
    // r! divides the zero atom for MM
    CHECK(spline_from_representation(Representation({{0, 6}}), FunctionFamily(FamilyKind::MM, 3)).constant() == 1.0);

    const IdealSpline two = spline_from_representation(Representation({{1, 1}, {2, 1}}), mm2);
    CHECK(two.knots() == std::vector<double>{1, 0.5});
    CHECK(two.weights() == std::vector<double>{1, 4});

    for (const IdealSpline& s : {one, constant, two}) {
        CHECK(spline_from_representation(representation_of(s), s.family()) == s);
    }
    const Representation half = representation_of(IdealSpline(FunctionFamily(FamilyKind::AM, 1), {2}, {1}, 0));
    CHECK(half == Representation({{0.5, 2}}));
    CHECK(representation_of(IdealSpline(mm2, {}, {}, 0)).empty());

    CHECK_THROWS_AS(IdealSpline(mm2, {1, 2}, {1, 1}, 0), DomainError);
    CHECK_THROWS_AS(IdealSpline(mm2, {1}, {1, 1}, 0), DomainError);
    CHECK_THROWS_AS(IdealSpline(mm2, {1}, {-1}, 0), DomainError);
    CHECK_THROWS_AS(IdealSpline(mm2, {1}, {1}, -1), DomainError);
}

TEST_CASE("evaluation")
{
    const IdealSpline phi(mm2, {1}, {2}, 0);
    CHECK(eval(phi, -2.0, 0) == 0.0);
    CHECK(eval(phi, -0.5, 1) == doctest::Approx(1.0));
    CHECK(eval(phi, -1.0, 2) == 2.0);
    CHECK(eval(phi, -0.5, 3) == 0.0);
    CHECK_THROWS_AS(eval(phi, 0.5, 0), DomainError);

    const IdealSpline x(am2, {1}, {2}, 0);
    for (int j = 0; j <= 4; ++j) {
        CHECK(eval(x, 0.0, j) == doctest::Approx(2.0));
    }
}

TEST_CASE("norms at zero")
{
    const ExponentVector k({0, 1, 2}, 2);
    const NormVector mm = norms(IdealSpline(mm2, {1}, {2}, 0), k);
    CHECK(mm.values == Vector<double>{{1, 2, 2}});
    const NormVector am = norms(IdealSpline(am2, {1}, {2}, 0), k);
    CHECK(am.values == Vector<double>{{2, 2, 2}});
    CHECK(factorial_scale(mm, ScaleDirection::MMtoAM).values == am.values);
}

TEST_CASE("random members")
{
    CHECK(random_member(mm2, 3, 9) == random_member(mm2, 3, 9));
    CHECK_THROWS_AS(random_member(mm2, -1, 9), DomainError);

    bool saw_constant = false;
    for (std::uint64_t seed = 0; seed < 100 && !saw_constant; ++seed) {
        const IdealSpline c = random_member(FunctionFamily(FamilyKind::AM, 4), 0, seed);
        if (c.constant() > 0.0) {
            saw_constant = true;
            const NormVector n = norms(c, ExponentVector({0, 1, 2, 4}, 4));
            CHECK(n.values(0) == c.constant());
            CHECK(n.values.tail(3).isZero(0.0));
        }
    }
    CHECK(saw_constant);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const FunctionFamily fam(seed % 2 ? FamilyKind::AM : FamilyKind::MM, 1 + static_cast<int>(seed % 6));
        const IdealSpline s = random_member(fam, 1 + static_cast<int>(seed % 4), seed);
        std::vector<int> all(static_cast<std::size_t>(fam.r + 1));
        std::iota(all.begin(), all.end(), 0);
        CHECK((norms(s, ExponentVector(all, fam.r)).values.array() > 0.0).all());
        for (std::size_t i = 1; i < s.knots().size(); ++i) {
            CHECK(s.knots()[i - 1] / s.knots()[i] >= 1.05);
        }
    }
}

TEST_CASE("class structure of generated splines")
{
    testing::Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const int r = rng.integer(1, 6);
        const IdealSpline mm = random_member(FunctionFamily(FamilyKind::MM, r), rng.integer(1, 4), rng.bits());
        const IdealSpline am = random_member(FunctionFamily(FamilyKind::AM, r), rng.integer(1, 4), rng.bits());
        const double reach = 2.0 * mm.knots().front();
        for (int j = 0; j <= r; ++j) {
            double sup_mm = 0.0;
            double sup_am = 0.0;
            for (int i = 0; i <= 400; ++i) {
                const double t = -reach * i / 400.0;
                const double h = reach / 800.0;
                const double v = eval(mm, t, j);
                sup_mm = std::max(sup_mm, std::abs(v));
                sup_am = std::max(sup_am, std::abs(eval(am, t, j)));
                CHECK(eval(am, t, j) >= 0.0);
                if (j < r && t - h >= -reach) {
                    // nondecreasing and convex
                    const double lo = eval(mm, t - h, j);
                    CHECK(lo <= v + 1e-12 * std::abs(v));
                    if (t + h <= 0.0) {
                        const double hi = eval(mm, t + h, j);
                        CHECK(lo + hi >= 2.0 * v - 1e-12 * std::max(1.0, std::abs(v)));
                    }
                }
            }
            // the sup sits at zero
            CHECK(sup_mm <= eval(mm, 0.0, j) * (1.0 + 1e-12));
            CHECK(sup_am <= eval(am, 0.0, j) * (1.0 + 1e-12));
        }

        // log-convexity of AM norms
        std::vector<int> all(static_cast<std::size_t>(r + 1));
        std::iota(all.begin(), all.end(), 0);
        const NormVector n = norms(am, ExponentVector(all, r));
        for (int j = 1; j < r; ++j) {
            CHECK(n.values(j) * n.values(j) <= n.values(j - 1) * n.values(j + 1) * (1.0 + 1e-12));
        }

        // representation round trip
        const IdealSpline mm_back = spline_from_representation(representation_of(mm), mm.family());
        REQUIRE(mm_back.knots().size() == mm.knots().size());
        for (std::size_t s = 0; s < mm.knots().size(); ++s) {
            CHECK(testing::rel_diff(mm_back.knots()[s], mm.knots()[s]) < 1e-15);
        }
        const IdealSpline back = spline_from_representation(representation_of(am), am.family());
        for (std::size_t s = 0; s < am.weights().size(); ++s) {
            CHECK(testing::rel_diff(back.weights()[s], am.weights()[s]) < 1e-14);
        }
        CHECK(testing::rel_diff(back.constant(), am.constant()) < 1e-14);
    }
}
