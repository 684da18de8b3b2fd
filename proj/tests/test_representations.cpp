#include <doctest.h>

#include "kolmo/errors.hpp"
#include "kolmo/representations.hpp"
#include "support.hpp"

using namespace kolmo;

namespace
{

const ExponentVector k012({0, 1, 2});

MomentVector mv(std::initializer_list<double> xs, const ExponentVector& k = k012)
{
    Vector<double> v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs) {
        v(i++) = x;
    }
    return MomentVector(v, k);
}

} // namespace

TEST_CASE("classify examples")
{
    CHECK(classify(mv({0, 0, 0})).kind == ConeClass::Zero);

    const Classification one = classify(mv({1, 1, 1}));
    CHECK(one.kind == ConeClass::Boundary);
    REQUIRE(one.witness);
    CHECK(testing::rel_diff(*one.witness, Representation({{1, 1}})) < 1e-8);
    CHECK(index_of(*one.witness) < HalfInteger::from_twice(3));

    const Classification two = classify(mv({2, 3, 5}));
    CHECK(two.kind == ConeClass::Interior);
    REQUIRE(two.witness);
    CHECK(index_of(*two.witness) == HalfInteger::from_twice(3));

    CHECK(classify(mv({1, 2, 3})).kind == ConeClass::Exterior);
    CHECK_THROWS_AS(classify(mv({1, 2, 3}, ExponentVector({1, 2, 3}))), UnsupportedSystem);
}

TEST_CASE("minimal index examples")
{
    const IndexedRepresentation z = minimal_index(mv({5, 0, 0}));
    CHECK(z.index == HalfInteger::from_twice(1));
    CHECK(testing::rel_diff(z.representation, Representation({{0, 5}})) < 1e-14);

    const IndexedRepresentation one = minimal_index(mv({1, 1, 1}));
    CHECK(one.index == HalfInteger::from_twice(2));
    CHECK(testing::rel_diff(one.representation, Representation({{1, 1}})) < 1e-8);

    const IndexedRepresentation three = minimal_index(mv({2, 3, 5}));
    CHECK(three.index == HalfInteger::from_twice(3));
    CHECK(testing::rel_diff(three.representation, Representation({{0, 0.2}, {5.0 / 3.0, 1.8}})) < 1e-8);

    CHECK_THROWS_AS(minimal_index(mv({1, 2, 3})), InconsistencyError);
}

TEST_CASE("principal representation examples")
{
    const Representation p = principal_representation(mv({2, 3, 5}));
    CHECK(testing::rel_diff(p, Representation({{0, 0.2}, {5.0 / 3.0, 1.8}})) < 1e-8);

    const Representation q = principal_representation(mv({3, 4, 6}));
    CHECK(q.has_zero_atom());
    CHECK(q.positive_count() == 1);
    CHECK(relative_residual(q, mv({3, 4, 6})) < 1e-8);

    const Representation truth({{1, 1}, {3, 2}});
    const ExponentVector k4({0, 1, 2, 3});
    CHECK(testing::rel_diff(principal_representation(moments_of(truth, k4)), truth) < 1e-8);

    CHECK_THROWS_AS(principal_representation(mv({1, 1, 1})), PreconditionError);
    CHECK_THROWS_AS(principal_representation(mv({1, 2, 3})), PreconditionError);
}

TEST_CASE("canonical representation examples")
{
    const Representation c = canonical_representation(mv({2, 3, 5}), 1.0);
    CHECK(testing::rel_diff(c, Representation({{1, 1}, {2, 1}})) < 1e-8);
    CHECK(c.atoms().front().node == 1.0);

    CHECK_THROWS_AS(canonical_representation(mv({2, 3, 5}), 0.0), DomainError);
    CHECK_THROWS_AS(canonical_representation(mv({2, 3, 5}), -1.0), DomainError);
    CHECK_THROWS_AS(canonical_representation(mv({2, 3, 5}), 5.0 / 3.0), CoincidenceError);

    // small roots approach the zero atom of the principal representation
    const Representation tiny = canonical_representation(mv({2, 3, 5}), 1e-4);
    REQUIRE(tiny.atoms().front().node == 1e-4);
    CHECK(std::abs(tiny.atoms().front().weight - 0.2) < 1e-3);
}

TEST_CASE("newton refinement")
{
    const MomentVector c = mv({2, 3, 5});
    const Representation exact({{0, 0.2}, {5.0 / 3.0, 1.8}});
    CHECK(testing::rel_diff(newton_refine(exact, {}, c, 1e-10, 1), exact) < 1e-12);

    const Representation refined = newton_refine(Representation({{0, 0.25}, {1.5, 1.75}}), {}, c, 1e-10, 20);
    CHECK(testing::rel_diff(refined, exact) < 1e-9);

    const Representation pinned = newton_refine(Representation({{1, 0.8}, {2.3, 1.2}}), {1.0}, c, 1e-10, 50);
    CHECK(pinned.atoms().front().node == 1.0);
    CHECK(testing::rel_diff(pinned, Representation({{1, 1}, {2, 1}})) < 1e-9);

    CHECK_THROWS_AS(newton_refine(Representation({{1, 1}}), {}, c, 1e-10, 20), PreconditionError);
}

TEST_CASE("round trip through random measures")
{
    testing::Rng rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const int positive = rng.integer(1, 3);
        const bool zero = rng.coin();
        const int d = 2 * positive + (zero ? 1 : 0);
        const ExponentVector k(testing::exponents_from_zero(rng, d, 2));
        const Representation truth = testing::separated_measure(rng, positive, zero, 0.2, 3.0, 0.1);
        const MomentVector c = moments_of(truth, k);
        const Representation got = principal_representation(c);
        CHECK(index_of(got) == HalfInteger::from_twice(d));
        CHECK(testing::rel_diff(got, truth) < 1e-6);
    }
}

TEST_CASE("canonical pins are exact")
{
    testing::Rng rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = rng.integer(2, 5);
        const ExponentVector k(testing::exponents_from_zero(rng, d, 2));
        const double t_star = rng.uniform(0.3, 2.5);
        const Representation truth = testing::canonical_measure(rng, d, t_star, 0.2, 3.0, 0.1);
        const MomentVector c = moments_of(truth, k);
        const Representation got = canonical_representation(c, t_star);
        CHECK(std::any_of(got.atoms().begin(), got.atoms().end(), [&](const Atom& a) { return a.node == t_star; }));
        CHECK(relative_residual(got, c) < 1e-8);
        CHECK(index_of(got) == HalfInteger::from_twice(d + 1));
        CHECK(testing::rel_diff(got, truth) < 1e-6);
    }
}

TEST_CASE("classification is scale invariant")
{
    testing::Rng rng(303);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = rng.integer(2, 5);
        const ExponentVector k(testing::exponents_from_zero(rng, d, 2));
        const Representation rep = testing::separated_measure(rng, rng.integer(1, 3), rng.coin(), 0.2, 5.0, 0.1);
        Vector<double> c = moments_of(rep, k).values;
        if (rng.coin()) {
            c(rng.integer(0, d - 1)) *= rng.uniform(0.5, 1.5);
        }
        const double alpha = rng.log_uniform(1e-3, 1e3);
        CHECK(classify(MomentVector(c, k)).kind == classify(MomentVector(alpha * c, k)).kind);
    }
}

TEST_CASE("independent initializations agree")
{
    testing::Rng rng(404);
    for (int trial = 0; trial < 30; ++trial) {
        const int positive = rng.integer(1, 3);
        const ExponentVector k(testing::exponents_from_zero(rng, 2 * positive, 2));
        const Representation truth = testing::separated_measure(rng, positive, false, 0.3, 3.0, 0.2);
        const MomentVector c = moments_of(truth, k);
        std::vector<Atom> perturbed;
        for (const Atom& a : truth.atoms()) {
            perturbed.push_back({a.node * rng.uniform(0.97, 1.03), a.weight * rng.uniform(0.8, 1.2)});
        }
        const Representation a = principal_representation(c);
        const Representation b = principal_representation_from(c, Representation(perturbed));
        CHECK(testing::rel_diff(a, b) < 1e-6);
    }
}
