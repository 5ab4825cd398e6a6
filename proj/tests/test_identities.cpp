#include <doctest.h>

#include "stochwave/errors.hpp"
#include "stochwave/fields.hpp"
#include "stochwave/identities.hpp"

using namespace stochwave;

TEST_CASE("all identities hold on random closure data")
{
    for (auto [M, N] : {std::pair{2, 2}, {3, 5}, {8, 8}, {16, 4}}) {
        const Grid g(M, N, 0.7);
        const IndexRange xs = g.space(SpaceMesh::Closure), ts = g.time(TimeMesh::Closure);
        for (std::uint64_t seed = 0; seed < 6; seed += 2) {
            const auto u = random_nodal(g, xs, ts, seed, 3.0);
            const auto v = random_nodal(g, xs, ts, seed + 1, 3.0);
            const ResidualTable t = identity_residuals(u, v, g);
            REQUIRE(t.rows.size() == 14);
            CHECK(t.skipped() == 0);
            CHECK(t.max_residual() <= 1e-12);
        }
    }
}

TEST_CASE("row order and lookup")
{
    const auto& ids = identity_ids();
    REQUIRE(ids.size() == 14);
    CHECK(ids.front() == "2.3");
    CHECK(ids.back() == "2.14");
    const Grid g(4, 4, 1.0);
    const auto u = random_nodal(g, g.space(SpaceMesh::Closure), g.time(TimeMesh::Closure), 9, 1.0);
    const ResidualTable t = identity_residuals(u, u, g);
    CHECK(t.at("2.8").residual.has_value());
    CHECK_FALSE(t.at("2.8").formula.empty());
}

TEST_CASE("identities without their meshes are skipped")
{
    const Grid g(4, 4, 1.0);
    const auto u = random_nodal(g, g.space(SpaceMesh::Closure),
                                IndexRange::between(node(0), node(g.N())), 1, 1.0);
    const ResidualTable t = identity_residuals(u, u, g);
    CHECK(t.skipped() > 0);
    CHECK(t.at("2.3").residual.has_value());
    CHECK_FALSE(t.at("2.12").residual.has_value());
    CHECK_FALSE(t.at("2.12").skip_reason.empty());
    CHECK(t.max_residual() <= 1e-12);
}

TEST_CASE("too-small grids and foreign grids are rejected")
{
    const Grid tiny(1, 4, 1.0);
    const auto u = random_nodal(tiny, tiny.space(SpaceMesh::Closure), tiny.time(TimeMesh::Closure), 1, 1.0);
    CHECK_THROWS_AS(identity_residuals(u, u, tiny), InvalidArgument);
    const Grid g(4, 4, 1.0), other(5, 4, 1.0);
    const auto w = random_nodal(g, g.space(SpaceMesh::Closure), g.time(TimeMesh::Closure), 1, 1.0);
    CHECK_THROWS_AS(identity_residuals(w, w, other), MeshMismatch);
}

TEST_CASE("slashed integral regions")
{
    const Grid g(3, 4, 1.0);
    const auto s = GridFunction::constant(g, IndexRange{node(1), 1}, g.time(TimeMesh::Dual), 1.0);
    CHECK(slashed_integral(s, Region::NStar) == doctest::Approx(g.N() * g.dt()));
    CHECK_THROWS_AS(slashed_integral(s, Region::N), InvalidArgument);
}
