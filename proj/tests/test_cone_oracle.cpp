#include <doctest.h>

#include "kolmo/cone_oracle.hpp"
#include "kolmo/errors.hpp"
#include "support.hpp"

using namespace kolmo;

TEST_CASE("geometric grids")
{
    const Grid g = make_grid(1.0, 2, false);
    REQUIRE(g.size() == 2);
    CHECK(g.nodes()[0] == doctest::Approx(1e-6));
    CHECK(g.nodes()[1] == 1.0);

    const Grid z = make_grid(1.0, 3, true);
    REQUIRE(z.size() == 4);
    CHECK(z.nodes()[0] == 0.0);
    CHECK(z.nodes()[2] == doctest::Approx(1e-3));
    CHECK(z.nodes()[3] == 1.0);

    CHECK_THROWS_AS(make_grid(0.0, 5, true), DomainError);
    CHECK_THROWS_AS(make_grid(1.0, 1, true), DomainError);
    CHECK_THROWS_AS(Grid({1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(Grid({0.0}), DomainError);
    CHECK(default_grid(MomentVector(Vector<double>{{2, 3, 5}}, ExponentVector({0, 1, 2}))).size() == 2001);
}

TEST_CASE("nonnegative least squares")
{
    const ExponentVector k2({0, 1});
    auto mv = [&](double a, double b) { return MomentVector(Vector<double>{{a, b}}, k2); };

    const NnlsResult exact = nnls({mv(1, 1), mv(1, 2)}, mv(2, 3));
    CHECK(exact.weights(0) == doctest::Approx(1.0));
    CHECK(exact.weights(1) == doctest::Approx(1.0));
    CHECK(exact.residual < 1e-14);

    const NnlsResult zero = nnls({mv(1, 1), mv(1, 2)}, mv(0, 0));
    CHECK(zero.weights.isZero(0.0));
    CHECK(zero.residual == 0.0);

    const NnlsResult blocked = nnls({mv(1, 0)}, mv(-1, 0));
    CHECK(blocked.weights(0) == 0.0);
    CHECK(blocked.residual == doctest::Approx(1.0));

    const MomentVector three(Vector<double>{{1, 2, 3}}, ExponentVector({0, 1, 2}));
    CHECK_THROWS_AS(nnls({mv(1, 1)}, three), DomainError);
}

TEST_CASE("membership examples")
{
    const ExponentVector k({0, 1, 2});
    const MomentVector in(Vector<double>{{2, 3, 5}}, k);
    const FeasibilityReport yes = cone_membership(in, default_grid(in));
    CHECK(yes.feasible);
    CHECK(yes.residual < 1e-6);

    const MomentVector out(Vector<double>{{1, 2, 3}}, k);
    CHECK_FALSE(cone_membership(out, default_grid(out)).feasible);

    const Grid g = make_grid(10.0, 50, true);
    for (double t : {g.nodes()[0], g.nodes()[7], g.nodes()[50]}) {
        const FeasibilityReport r = cone_membership(curve_point(t, k), g);
        CHECK(r.feasible);
        CHECK(r.residual < 1e-12);
    }
    OracleOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(cone_membership(in, g, bad), DomainError);
}

TEST_CASE("membership properties")
{
    testing::Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = rng.integer(2, 5);
        const ExponentVector k(testing::exponents_from_zero(rng, d, 2));
        const Grid grid = make_grid(rng.log_uniform(1.0, 100.0), 400, true);

        // measures supported on grid nodes are reproduced; nodes restricted to
        // the upper four decades, below which neighbouring columns agree to
        // round-off in every row but the first
        std::vector<Atom> atoms;
        std::vector<std::size_t> picked;
        const int count = rng.integer(1, 4);
        const int lowest = static_cast<int>(grid.size()) - 1 - 266;
        while (static_cast<int>(picked.size()) < count) {
            const auto j = static_cast<std::size_t>(rng.integer(lowest, static_cast<int>(grid.size()) - 1));
            if (std::find(picked.begin(), picked.end(), j) == picked.end()) {
                picked.push_back(j);
                atoms.push_back({grid.nodes()[j], rng.uniform(0.5, 2.0)});
            }
        }
        const MomentVector c = moments_of(Representation(atoms), k);
        const FeasibilityReport r = cone_membership(c, grid);
        CHECK(r.feasible);
        CHECK(r.residual <= 1e-10);
        OracleOptions raw;
        raw.prune = false;
        const FeasibilityReport u = cone_membership(c, grid, raw);
        CHECK(u.residual <= 1e-10);
        // Caratheodory bound after pruning
        CHECK(r.support.size() <= d + 1);

        // cone property
        const double alpha = rng.log_uniform(1e-3, 1e3);
        const MomentVector scaled(alpha * c.values, k);
        CHECK(cone_membership(scaled, grid).feasible);

        Vector<double> v(d);
        for (Index i = 0; i < d; ++i) {
            v(i) = rng.log_uniform(1e-2, 1e2);
        }
        const MomentVector random(v, k);
        const MomentVector random_scaled(alpha * v, k);
        CHECK(cone_membership(random, grid).feasible == cone_membership(random_scaled, grid).feasible);
    }
}
