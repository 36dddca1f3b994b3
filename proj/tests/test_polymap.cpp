#include "ballsym/autgroup.hpp"
#include "ballsym/errors.hpp"
#include "ballsym/polymap.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ballsym;
using ballsym::testing::inner;
using ballsym::testing::random_rational_point;
using ballsym::testing::random_unitary;
using ballsym::testing::rv;

namespace {

const RadScalar i4 = RadScalar::root_of_unity(4, 1);

PolyMap map_of(std::size_t n, std::vector<std::pair<MultiIndex, std::vector<RadScalar>>> terms, std::size_t N) {
    PolyMap f(n, N);
    for (auto& [a, c] : terms) f.add_term(a, c);
    return f;
}

RadScalar pow_scalar(RadScalar x, int m) {
    RadScalar r(1);
    for (int k = 0; k < m; ++k) r = r * x;
    return r;
}

}  // namespace

TEST_CASE("evaluate examples") {
    CHECK(evaluate(PolyMap::identity(2), rv({mpq_class(1, 2), 0})) == rv({mpq_class(1, 2), 0}));
    CHECK(evaluate(tensor_power(2, 2), rv({1, 0})) == rv({1, 0, 0}));
    const auto w = evaluate(whitney_map(), rv({mpq_class(3, 5), mpq_class(4, 5)}));
    CHECK(w == rv({mpq_class(3, 5), mpq_class(12, 25), mpq_class(16, 25)}));
    CHECK(inner(w, w) == RadScalar(1));
    CHECK_THROWS_AS(evaluate(PolyMap::identity(2), rv({1})), DimensionMismatch);
}

TEST_CASE("graded-lex order and multi-indices") {
    GradedLex lt;
    CHECK(lt(MultiIndex{2, 0}, MultiIndex{1, 1}));
    CHECK(lt(MultiIndex{1, 1}, MultiIndex{0, 2}));
    CHECK(lt(MultiIndex{0, 1}, MultiIndex{2, 0}));
    const auto idx = multi_indices_of_degree(3, 2);
    CHECK(idx.size() == 6);
    for (std::size_t k = 1; k < idx.size(); ++k) CHECK(lt(idx[k - 1], idx[k]));
}

TEST_CASE("compose_unitary examples") {
    const PolyMap w = whitney_map();
    CHECK(compose_unitary(w, RadMatrix::identity(2)) == w);

    RadMatrix d = RadMatrix::identity(2);
    d(0, 0) = i4;
    const PolyMap expect = map_of(2, {{{1, 0}, {i4, 0, 0}}, {{1, 1}, {0, i4, 0}}, {{0, 2}, {0, 0, 1}}}, 3);
    CHECK(compose_unitary(w, d) == expect);

    RadMatrix swap(2, 2);
    swap(0, 1) = RadScalar(1);
    swap(1, 0) = RadScalar(1);
    const PolyMap swapped = map_of(2, {{{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}}, 2);
    CHECK(compose_unitary(PolyMap::identity(2), swap) == swapped);

    RadMatrix bad = RadMatrix::identity(2);
    bad(0, 0) = RadScalar(2);
    CHECK_THROWS_AS(compose_unitary(w, bad), NonUnitary);
}

TEST_CASE("compose_unitary round trip") {
    std::mt19937_64 rng(11);
    const PolyMap f = partial_tensor(tensor_power(3, 2), {0, 3});
    for (int trial = 0; trial < 10; ++trial) {
        const RadMatrix u = random_unitary(rng, 3, trial % 2 == 1);
        const PolyMap g = compose_unitary(f, u);
        CHECK(g.degree() == f.degree());
        CHECK(compose_unitary(g, u.adjoint()) == f);
    }
}

TEST_CASE("compose_automorphism examples") {
    const PolyMap w = whitney_map();
    const RationalMap id = compose_automorphism(w, BallAutomorphism::identity(2));
    CHECK(id.is_polynomial());
    CHECK(id.numerator == w);

    const mpq_class a(3, 5);
    const BallAutomorphism phi = involution(rv({a}));
    const RationalMap g = compose_automorphism(PolyMap::identity(1), phi);
    CHECK(g.denominator.degree() == 1);
    const RationalMap mobius(map_of(1, {{{0}, {a}}, {{1}, {-1}}}, 1),
                             Polynomial::constant(1, RadScalar(1)) - Polynomial::monomial({1}, RadScalar(a)));
    CHECK(equal(g, mobius));
    for (int k = -2; k <= 2; ++k) {
        const auto z = rv({mpq_class(k, 5)});
        CHECK(evaluate(g, evaluate(g, z)) == z);
    }

    const RationalMap wd = compose_automorphism(w, aut_from_parts(RadMatrix::identity(2), rv({mpq_class(1, 3), 0})));
    CHECK(wd.denominator.degree() == w.degree());
    CHECK(wd.denominator.constant_term() == RadScalar(1));
}

TEST_CASE("compose_automorphism respects composition") {
    std::mt19937_64 rng(5);
    const PolyMap f = tensor_power(2, 2);
    for (int trial = 0; trial < 4; ++trial) {
        const auto g1 = aut_from_parts(random_unitary(rng, 2), random_rational_point(rng, 2));
        const auto g2 = aut_from_parts(random_unitary(rng, 2, true), random_rational_point(rng, 2));
        const RationalMap lhs = compose_automorphism(f, aut_compose(g1, g2));
        const RationalMap inner1 = compose_automorphism(f, g1);
        for (int s = 0; s < 3; ++s) {
            const auto z = random_rational_point(rng, 2);
            CHECK(evaluate(lhs, z) == evaluate(inner1, g2(z)));
        }
    }
}

TEST_CASE("tensor_power examples") {
    const PolyMap t = tensor_power(2, 2);
    const PolyMap expect =
        map_of(2, {{{2, 0}, {1, 0, 0}}, {{1, 1}, {0, RadScalar::radical(2), 0}}, {{0, 2}, {0, 0, 1}}}, 3);
    CHECK(t == expect);
    CHECK(tensor_power(1, 3) == map_of(1, {{{3}, {1}}}, 1));
    CHECK(tensor_power(2, 1) == PolyMap::identity(2));
    CHECK(tensor_power(3, 4).target_dim() == 15);
    CHECK_THROWS_AS(tensor_power(0, 2), InvalidArgument);
}

TEST_CASE("tensor_power preserves inner products to the m-th power") {
    std::mt19937_64 rng(7);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int m = 1; m <= 3; ++m) {
            const PolyMap t = tensor_power(n, m);
            for (int s = 0; s < 3; ++s) {
                const auto z = random_rational_point(rng, n);
                const auto w = random_rational_point(rng, n);
                CHECK(inner(evaluate(t, z), evaluate(t, w)) == pow_scalar(inner(z, w), m));
            }
        }
    }
}

TEST_CASE("partial_tensor examples") {
    CHECK(partial_tensor(PolyMap::identity(2), {1}) ==
          map_of(2, {{{1, 0}, {1, 0, 0}}, {{1, 1}, {0, 1, 0}}, {{0, 2}, {0, 0, 1}}}, 3));
    CHECK(partial_tensor(PolyMap::identity(2), {1}) == whitney_map());
    CHECK(partial_tensor(PolyMap::identity(1), {0}) == tensor_power(1, 2));
    CHECK_THROWS_AS(partial_tensor(PolyMap::identity(2), {}), EmptySplit);
    CHECK_THROWS_AS(partial_tensor(PolyMap::identity(2), {2}), DimensionMismatch);
    const PolyMap p = partial_tensor(tensor_power(2, 2), {0, 2});
    CHECK(p.target_dim() == 3 - 2 + 2 * 2);
}

TEST_CASE("direct_sum examples") {
    const PolyMap id1 = PolyMap::identity(1);
    const PolyMap w = whitney_map();
    const PolyMap i2 = PolyMap::identity(2);
    CHECK(direct_sum(w, i2, 1) == map_of(2, {{{1, 0}, {1, 0, 0, 0, 0}}, {{1, 1}, {0, 1, 0, 0, 0}}, {{0, 2}, {0, 0, 1, 0, 0}}}, 5));
    CHECK(direct_sum(w, i2, 0) == map_of(2, {{{1, 0}, {0, 0, 0, 1, 0}}, {{0, 1}, {0, 0, 0, 0, 1}}}, 5));
    const PolyMap h = direct_sum(id1, id1, mpq_class(1, 2));
    const RadScalar r = RadScalar::radical(2, CycloScalar(mpq_class(1, 2)));
    CHECK(h == map_of(1, {{{1}, {r, r}}}, 2));
    const auto z = rv({mpq_class(2, 7)});
    const auto v = evaluate(h, z);
    CHECK(inner(v, v) == inner(z, z));
    CHECK_THROWS_AS(direct_sum(id1, i2, mpq_class(1, 2)), DimensionMismatch);
    CHECK_THROWS_AS(direct_sum(id1, id1, 2), InvalidArgument);
}

TEST_CASE("pad and span_rank") {
    CHECK(pad(PolyMap::identity(1), 1) == map_of(1, {{{1}, {0, 1}}}, 2));
    CHECK(span_rank(PolyMap::identity(2)).rank == 2);
    CHECK(span_rank(pad(PolyMap::identity(2), 1)).rank == 2);
    CHECK_FALSE(is_minimal(pad(PolyMap::identity(2), 1)));
    CHECK(span_rank(whitney_map()).rank == 3);
    CHECK(is_minimal(whitney_map()));
    CHECK(span_rank(PolyMap(2, 3)).rank == 0);

    std::mt19937_64 rng(3);
    const std::vector<PolyMap> maps{whitney_map(), tensor_power(2, 3), direct_sum(whitney_map(), PolyMap::identity(2), mpq_class(1, 3)),
                                    compose_unitary(tensor_power(3, 2), random_unitary(rng, 3, true))};
    for (const auto& f : maps) {
        const auto r = span_rank(f);
        CHECK(r.rank <= std::min(f.target_dim(), f.terms().size()));
        CHECK(r.basis.size() == r.rank);
        for (std::size_t k = 1; k <= 3; ++k) CHECK(span_rank(pad(f, k)).rank == r.rank);
    }
}

TEST_CASE("rational maps") {
    Polynomial q = Polynomial::monomial({1, 0}, RadScalar(1));
    CHECK_THROWS_AS(RationalMap(PolyMap::identity(2), q), DenominatorZero);
    q.add_term({0, 0}, RadScalar(2));
    const RationalMap r(PolyMap::identity(2), q);
    CHECK(r.denominator.constant_term() == RadScalar(1));
    CHECK(evaluate(r, rv({0, 1})) == rv({0, mpq_class(1, 2)}));
    CHECK_THROWS_AS(evaluate(r, rv({-2, 0})), DenominatorZero);
    CHECK(sample_denominator_min(r) > 0.4);
}

TEST_CASE("exact and float evaluation agree") {
    std::mt19937_64 rng(17);
    const PolyMap f = compose_unitary(partial_tensor(tensor_power(2, 2), {1}), random_unitary(rng, 2, true));
    const RationalMap g = compose_automorphism(f, aut_from_parts(RadMatrix::identity(2), rv({mpq_class(1, 4), 0})));
    for (int s = 0; s < 100; ++s) {
        const auto z = random_rational_point(rng, 2);
        std::vector<FloatComplex> zf;
        for (const auto& x : z) zf.push_back(x.to_float());
        const auto exact = evaluate(f, z);
        const auto approx = evaluate(f, zf);
        const auto exact_r = evaluate(g, z);
        const auto approx_r = evaluate(g, zf);
        for (std::size_t i = 0; i < exact.size(); ++i) {
            CHECK(approx_equal(exact[i].to_float(), approx[i], 1e-9));
            CHECK(approx_equal(exact_r[i].to_float(), approx_r[i], 1e-9));
        }
    }
}
