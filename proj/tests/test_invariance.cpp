#include "ballsym/errors.hpp"
#include "ballsym/invariance.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace ballsym;
using ballsym::testing::random_unitary;
using ballsym::testing::rv;

namespace {

RadScalar zeta(std::int64_t m, std::int64_t k) { return RadScalar::root_of_unity(m, k); }

MultiIndex mi(std::initializer_list<int> e) { return MultiIndex(std::vector<int>(e)); }

RadMatrix diag(std::vector<RadScalar> d) { return RadMatrix::diagonal(d); }

BallAutomorphism unitary_aut(const RadMatrix& u) { return BallAutomorphism::from_unitary(u); }

// Single-component map sum_k (z1 z2)^k, k = 1..3.
PolyMap product_pattern() {
    PolyMap f(2, 1);
    for (int k = 1; k <= 3; ++k) f.add_term(mi({k, k}), rv({1}));
    return f;
}

std::vector<mpq_class> grid_fractions(int max_den) {
    std::set<mpq_class> s;
    for (int d = 1; d <= max_den; ++d) {
        for (int k = 0; k < d; ++k) s.insert(mpq_class(k, d));
    }
    return {s.begin(), s.end()};
}

bool is_integer(const mpq_class& x) {
    mpq_class y = x;
    y.canonicalize();
    return y.get_den() == 1;
}

// Direct Gram check: every coupled pair alpha, beta has theta.(alpha - beta) in Z.
bool grid_invariant(const PolyMap& f, const std::vector<mpq_class>& theta) {
    for (const auto& [a, ca] : f.terms()) {
        for (const auto& [b, cb] : f.terms()) {
            if (a == b || ballsym::testing::inner(ca, cb).is_zero()) continue;
            mpq_class dot = 0;
            for (std::size_t j = 0; j < theta.size(); ++j) dot += theta[j] * (a[j] - b[j]);
            if (!is_integer(dot)) return false;
        }
    }
    return true;
}

std::vector<std::vector<mpq_class>> enumerate_finite(const TorusSubgroup& t) {
    std::set<std::vector<mpq_class>> elems{std::vector<mpq_class>(t.dim, 0)};
    for (const auto& g : t.finite_generators) {
        std::set<std::vector<mpq_class>> next;
        for (const auto& e : elems) {
            for (mpz_class k = 0; k < g.order; ++k) {
                std::vector<mpq_class> x = e;
                for (std::size_t j = 0; j < t.dim; ++j) {
                    x[j] += mpq_class(k) * g.turns[j];
                    mpz_class fl;
                    mpz_fdiv_q(fl.get_mpz_t(), x[j].get_num_mpz_t(), x[j].get_den_mpz_t());
                    x[j] -= mpq_class(fl);
                    x[j].canonicalize();
                }
                next.insert(x);
            }
        }
        elems = next;
    }
    return {elems.begin(), elems.end()};
}

// x in R c + Z^2 for rational c in dimension 2: x . c_perp in Z after scaling c to a primitive integer vector.
bool on_line_mod_z(const std::vector<mpq_class>& x, const std::vector<mpq_class>& c) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), c[0].get_den_mpz_t(), c[1].get_den_mpz_t());
    mpz_class p = mpz_class(c[0] * l);
    mpz_class q = mpz_class(c[1] * l);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    p /= g;
    q /= g;
    return is_integer(x[0] * mpq_class(-q) + x[1] * mpq_class(p));
}

PolyMap random_five_term(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> deg(1, 4);
    std::uniform_int_distribution<int> c(-1, 1);
    PolyMap f(2, 2);
    std::set<MultiIndex, GradedLex> used;
    while (used.size() < 5) {
        const int d = deg(rng);
        std::uniform_int_distribution<int> first(0, d);
        const int a = first(rng);
        const MultiIndex alpha = mi({a, d - a});
        if (!used.insert(alpha).second) continue;
        std::vector<RadScalar> v;
        do {
            v = rv({c(rng), c(rng)});
        } while (v[0].is_zero() && v[1].is_zero());
        f.add_term(alpha, v);
    }
    return f;
}

RadMatrix random_torus(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> e(0, 11);
    std::vector<RadScalar> d;
    for (std::size_t j = 0; j < n; ++j) d.push_back(zeta(12, e(rng)));
    return diag(d);
}

}  // namespace

TEST_CASE("exponent lattice examples") {
    const ExponentLattice w = exponent_lattice(whitney_map(), LatticeMode::Support);
    CHECK(w.invariant_factors() == std::vector<mpz_class>{1, 1});
    const ExponentLattice t = exponent_lattice(tensor_power(2, 3), LatticeMode::Support);
    CHECK(t.basis.size() == 4);
    CHECK(t.invariant_factors() == std::vector<mpz_class>{1, 3});
    for (const auto& f : {whitney_map(), tensor_power(2, 3), tensor_power(3, 2), PolyMap::identity(3)}) {
        CHECK(exponent_lattice(f, LatticeMode::Gram).rank() == 0);
    }
}

TEST_CASE("torus invariance examples") {
    const TorusSubgroup full = torus_invariance_group(whitney_map());
    CHECK(full.continuous_dim() == 2);
    CHECK(full.finite_order() == 1);

    PolyMap coupled(2, 2);
    coupled.add_term(mi({2, 0}), rv({1, 0}));
    coupled.add_term(mi({1, 1}), rv({1, 0}));
    coupled.add_term(mi({0, 2}), rv({0, 1}));
    const TorusSubgroup c = torus_invariance_group(coupled);
    REQUIRE(c.continuous_dim() == 1);
    CHECK(c.continuous_basis[0] == std::vector<mpq_class>{1, 1});
    CHECK(c.finite_order() == 1);
    CHECK(c.contains({mpq_class(1, 7), mpq_class(1, 7)}));
    CHECK_FALSE(c.contains({mpq_class(1, 7), 0}));

    const TorusSubgroup e = torus_invariance_group(product_pattern());
    REQUIRE(e.continuous_dim() == 1);
    CHECK(e.continuous_basis[0] == std::vector<mpq_class>{1, -1});

    PolyMap shifted(1, 1);
    shifted.add_term(mi({0}), rv({mpq_class(1, 2)}));
    shifted.add_term(mi({1}), rv({mpq_class(1, 2)}));
    CHECK_THROWS_AS(torus_invariance_group(shifted), NonzeroOrigin);
}

TEST_CASE("torus group matches brute-force grid") {
    std::mt19937_64 rng(2024);
    const auto grid = grid_fractions(12);
    for (int trial = 0; trial < 25; ++trial) {
        const PolyMap f = random_five_term(rng);
        const TorusSubgroup t = torus_invariance_group(f);
        for (const auto& c : t.continuous_basis) {
            for (const auto& row : t.lattice) {
                mpq_class dot = 0;
                for (std::size_t j = 0; j < 2; ++j) dot += c[j] * mpq_class(row[j]);
                CHECK(dot == 0);
            }
        }
        const auto finite = enumerate_finite(t);
        CHECK(mpz_class(finite.size()) == t.finite_order());
        for (const auto& a : grid) {
            for (const auto& b : grid) {
                const std::vector<mpq_class> theta{a, b};
                const bool brute = grid_invariant(f, theta);
                CHECK(t.contains(theta) == brute);
                bool generated = false;
                if (t.continuous_dim() == 0) {
                    generated = std::find(finite.begin(), finite.end(), theta) != finite.end();
                } else if (t.continuous_dim() == 1) {
                    for (const auto& e : finite) {
                        generated = generated || on_line_mod_z({theta[0] - e[0], theta[1] - e[1]}, t.continuous_basis[0]);
                    }
                } else {
                    generated = true;
                }
                CHECK(generated == brute);
            }
        }
    }
}

TEST_CASE("diagonal fixing group") {
    for (int m = 2; m <= 6; ++m) {
        const TorusSubgroup t = diagonal_fixing_group(tensor_power(2, m));
        CHECK(t.continuous_dim() == 0);
        CHECK(t.finite_order() == m);
        REQUIRE(t.finite_generators.size() == 1);
        CHECK(t.finite_generators[0].turns == std::vector<mpq_class>{mpq_class(1, m), mpq_class(1, m)});
    }
    CHECK(diagonal_fixing_group(whitney_map()).finite_order() == 1);
    CHECK(diagonal_fixing_group(whitney_map()).continuous_dim() == 0);
    CHECK(diagonal_fixing_group(PolyMap::identity(2)).finite_order() == 1);
    // f o diag(e^{2 pi i theta}) = f checked by substitution.
    const PolyMap f = tensor_power(2, 4);
    for (const auto& e : enumerate_finite(diagonal_fixing_group(f))) {
        const RadMatrix d = diag({zeta(e[0].get_den().get_si(), e[0].get_num().get_si()),
                                  zeta(e[1].get_den().get_si(), e[1].get_num().get_si())});
        CHECK(compose_unitary(f, d) == f);
    }
}

TEST_CASE("hf group") {
    const std::vector<PolyMap> minimal{PolyMap::identity(2), whitney_map(), tensor_power(2, 2)};
    for (const auto& f : minimal) {
        CHECK(hf_group(f).k == 0);
        for (std::size_t k = 1; k <= 3; ++k) {
            const HfReport h = hf_group(pad(f, k));
            CHECK(h.k == k);
            REQUIRE(h.complement_basis.size() == k);
            for (const auto& v : h.complement_basis) {
                for (const auto& s : h.span_basis) CHECK(ballsym::testing::inner(s, v).is_zero());
            }
        }
    }
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const PolyMap g = pad(whitney_map(), 2);
        const RadMatrix a = random_unitary(rng, 5, true);
        CHECK(hf_group(left_multiply(a, g)).k == 2);
    }
    PolyMap shifted = PolyMap::identity(1);
    shifted.add_term(mi({0}), rv({mpq_class(1, 3)}));
    CHECK_THROWS_AS(hf_group(shifted), NonzeroOrigin);
}

TEST_CASE("membership examples") {
    const PolyMap w = whitney_map();
    const PhiResult r = gamma_membership(w, unitary_aut(diag({zeta(3, 1), zeta(5, 1)})));
    REQUIRE(r.member);
    CHECK(r.exact);
    CHECK(r.unique);
    CHECK(*r.psi == unitary_aut(diag({zeta(3, 1), zeta(15, 8), zeta(5, 2)})));

    const PhiResult t = gamma_membership(tensor_power(2, 2), unitary_aut(diag({zeta(4, 1), RadScalar(1)})));
    REQUIRE(t.member);
    CHECK(*t.psi == unitary_aut(diag({RadScalar(-1), zeta(4, 1), RadScalar(1)})));

    RadMatrix swap(2, 2);
    swap(0, 1) = RadScalar(1);
    swap(1, 0) = RadScalar(1);
    CHECK_FALSE(gamma_membership(w, unitary_aut(swap)).member);
    CHECK(gamma_membership(PolyMap::identity(2), unitary_aut(swap)).member);

    PolyMap shifted = PolyMap::identity(1);
    shifted.add_term(mi({0}), rv({mpq_class(1, 3)}));
    CHECK_THROWS_AS(gamma_membership(shifted, BallAutomorphism::identity(1)), NonzeroOrigin);
}

TEST_CASE("membership for automorphisms moving the origin") {
    const BallAutomorphism phi = involution(rv({mpq_class(3, 5), 0}));
    const PhiResult id = gamma_membership(PolyMap::identity(2), phi);
    REQUIRE(id.member);
    CHECK(*id.psi == phi);
    CHECK(equal(compose_automorphism(PolyMap::identity(2), phi), compose_target(*id.psi, PolyMap::identity(2))));

    const BallAutomorphism mixed = aut_compose(unitary_aut(diag({zeta(4, 1), zeta(3, 1)})), phi);
    const PhiResult m = gamma_membership(PolyMap::identity(2), mixed);
    REQUIRE(m.member);
    CHECK(*m.psi == mixed);

    const PolyMap one = PolyMap::identity(1);
    const BallAutomorphism mob = involution(rv({mpq_class(1, 2)}));
    const PhiResult d = gamma_membership(pad(one, 1), mob);
    CHECK(d.member);
    CHECK_FALSE(d.unique);

    // Homogeneous maps of degree >= 2 are only symmetric under unitaries.
    CHECK_FALSE(gamma_membership(tensor_power(2, 2), phi).member);
    CHECK_FALSE(gamma_membership(tensor_power(1, 3), mob).member);
}

TEST_CASE("homomorphism law on torus elements") {
    std::mt19937_64 rng(17);
    const PolyMap w = whitney_map();
    for (int trial = 0; trial < 20; ++trial) {
        const BallAutomorphism g1 = unitary_aut(random_torus(rng, 2));
        const BallAutomorphism g2 = unitary_aut(random_torus(rng, 2));
        const PhiResult r1 = gamma_membership(w, g1);
        const PhiResult r2 = gamma_membership(w, g2);
        const PhiResult r12 = gamma_membership(w, aut_compose(g2, g1));
        REQUIRE((r1.member && r2.member && r12.member));
        CHECK(r12.unique);
        CHECK(*r12.psi == aut_compose(*r2.psi, *r1.psi));
    }
    const BallAutomorphism phi = involution(rv({mpq_class(3, 5), 0}));
    const BallAutomorphism u = unitary_aut(random_unitary(rng, 2, true));
    const PolyMap id = PolyMap::identity(2);
    CHECK(*gamma_membership(id, aut_compose(u, phi)).psi ==
          aut_compose(*gamma_membership(id, u).psi, *gamma_membership(id, phi).psi));
}

TEST_CASE("non-unique psi differs by an element of H_f") {
    const PolyMap g = pad(whitney_map(), 2);
    const BallAutomorphism gamma = unitary_aut(diag({zeta(6, 1), zeta(4, 3)}));
    const PhiResult r = gamma_membership(g, gamma);
    REQUIRE(r.member);
    CHECK_FALSE(r.unique);
    const RadMatrix u = r.psi->unitary_part();
    const HfReport h = hf_group(g);
    REQUIRE(h.k == 2);
    // Act by a rotation on the complement of the span, identity on the span.
    RadMatrix hmat = RadMatrix::identity(5);
    const RadScalar s = RadScalar::radical(2, CycloScalar(mpq_class(1, 2)));
    hmat(0, 0) = s;
    hmat(0, 1) = -s;
    hmat(1, 0) = s;
    hmat(1, 1) = s;
    const PolyMap target = compose_unitary(g, gamma.unitary_part());
    CHECK(left_multiply(u, g) == target);
    CHECK(left_multiply(u * hmat, g) == target);
    CHECK(left_multiply(hmat, g) == g);
}

TEST_CASE("conjugation covariance") {
    std::mt19937_64 rng(99);
    const PolyMap w = whitney_map();
    for (int trial = 0; trial < 10; ++trial) {
        const RadMatrix a = random_unitary(rng, 3, trial % 2 == 0);
        const RadMatrix b = random_unitary(rng, 2, trial % 3 == 0);
        const PolyMap g = left_multiply(a, compose_unitary(w, b));
        const RadMatrix gamma = trial % 4 == 3 ? random_unitary(rng, 2) : random_torus(rng, 2);
        const PhiResult r = gamma_membership(w, unitary_aut(gamma));
        const PhiResult rc = gamma_membership(g, unitary_aut(b.adjoint() * gamma * b));
        CHECK(r.member == rc.member);
        if (r.member && rc.member) {
            CHECK(rc.psi->unitary_part() == a * r.psi->unitary_part() * a.adjoint());
        }
        CHECK(hf_group(g).k == 0);
    }
}

TEST_CASE("padding does not change membership") {
    std::mt19937_64 rng(123);
    for (const auto& f : {whitney_map(), tensor_power(2, 2), PolyMap::identity(2)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const BallAutomorphism gamma = unitary_aut(random_unitary(rng, 2, trial % 5 == 0));
            CHECK(gamma_membership(f, gamma).member == gamma_membership(pad(f, 2), gamma).member);
        }
    }
}

TEST_CASE("phi kernel") {
    const FiniteUnitaryGroup z3 = group_closure({diag({zeta(3, 1), zeta(3, 1)})}, 2);
    const FiniteUnitaryGroup k = phi_kernel(tensor_power(2, 3), z3);
    CHECK(k.order() == 3);
    CHECK(is_closed(k));
    CHECK(phi_kernel(whitney_map(), z3).order() == 1);
    const FiniteUnitaryGroup trivial = group_closure({}, 2);
    CHECK(phi_kernel(tensor_power(2, 3), trivial).order() == 1);

    const FiniteUnitaryGroup big = group_closure({diag({zeta(12, 1), RadScalar(1)}), diag({RadScalar(1), zeta(12, 1)})}, 2);
    for (const auto& f : {whitney_map(), tensor_power(2, 2), tensor_power(2, 3), tensor_power(2, 4)}) {
        const FiniteUnitaryGroup kf = phi_kernel(f, big);
        CHECK(is_closed(kf));
        for (const auto& e : kf.elements) CHECK(compose_unitary(f, e) == f);
    }
}

TEST_CASE("graded analysis") {
    const GradedReport e = graded_analysis(product_pattern(), {1, -1});
    CHECK(e.positive_indices == std::vector<std::size_t>{0});
    CHECK(e.restricted_degree == 0);
    REQUIRE(e.restricted_degree_bound);
    CHECK(e.within_bound);
    CHECK_THROWS_AS(graded_analysis(product_pattern(), {1, 1}), NotInvariant);

    PolyMap mono(2, 2);
    mono.add_term(mi({3, 0}), rv({1, 0}));
    mono.add_term(mi({1, 2}), rv({0, 1}));
    const GradedReport m = graded_analysis(mono, {1, 1});
    CHECK(m.positive_indices == std::vector<std::size_t>{0, 1});
    CHECK(*m.restricted_degree_bound == 3);

    const GradedReport w = graded_analysis(whitney_map(), {2, 1});
    CHECK(*w.restricted_degree_bound == 4);
    CHECK(w.restricted_degree == 2);
    CHECK(w.within_bound);

    const GradedReport none = graded_analysis(whitney_map(), {-1, 0});
    CHECK_FALSE(none.restricted_degree_bound);
    CHECK(none.positive_indices.empty());
}

TEST_CASE("monomial solver examples") {
    auto check_solution = [](const MonomialSolveResult& r) {
        REQUIRE(r.map);
        CHECK(is_proper(*r.map).proper);
    };
    const auto lin = monomial_proper_solve(2, {mi({1, 0}), mi({0, 1})});
    REQUIRE(lin.status == MonomialSolveResult::Status::Feasible);
    CHECK(lin.weights == std::vector<mpq_class>{1, 1});
    check_solution(lin);

    const auto quad = monomial_proper_solve(2, multi_indices_of_degree(2, 2));
    REQUIRE(quad.status == MonomialSolveResult::Status::Feasible);
    CHECK(quad.weights == std::vector<mpq_class>{1, 2, 1});
    check_solution(quad);

    const auto bad = monomial_proper_solve(2, {mi({2, 0}), mi({0, 2})});
    CHECK(bad.status == MonomialSolveResult::Status::Infeasible);
    CHECK_FALSE(bad.certificate.empty());

    const auto cubic = monomial_proper_solve(2, exponents_up_to(2, 3), CyclicConstraint{{1, 1}, 3});
    REQUIRE(cubic.status == MonomialSolveResult::Status::Feasible);
    CHECK(cubic.exponents == multi_indices_of_degree(2, 3));
    CHECK(cubic.weights == std::vector<mpq_class>{1, 3, 3, 1});
    check_solution(cubic);
    CHECK(diagonal_fixing_group(*cubic.map).contains({mpq_class(1, 3), mpq_class(1, 3)}));
    CHECK(diagonal_fixing_group(*cubic.map).finite_order() == 3);

    const auto wide = monomial_proper_solve(3, exponents_up_to(3, 3));
    CHECK(wide.status == MonomialSolveResult::Status::Undecided);

    CHECK_THROWS_AS(monomial_proper_solve(2, {}), InvalidArgument);
    CHECK_THROWS_AS(monomial_proper_solve(2, {mi({1, 0, 0})}), DimensionMismatch);
}

TEST_CASE("monomial solver solutions are proper and invariant") {
    std::mt19937_64 rng(8);
    const auto pool = exponents_up_to(2, 3);
    int feasible = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<MultiIndex> ex;
        std::bernoulli_distribution keep(0.6);
        for (const auto& a : pool) {
            if (keep(rng)) ex.push_back(a);
        }
        if (ex.empty()) continue;
        std::uniform_int_distribution<int> w(0, 4);
        std::uniform_int_distribution<int> ord(1, 4);
        const CyclicConstraint g{{w(rng), w(rng)}, ord(rng)};
        const auto r = monomial_proper_solve(2, ex, g);
        if (r.status != MonomialSolveResult::Status::Feasible) continue;
        ++feasible;
        REQUIRE(r.map);
        CHECK(is_proper(*r.map).proper);
        std::vector<mpq_class> turns{mpq_class(g.weights[0], g.order), mpq_class(g.weights[1], g.order)};
        CHECK(diagonal_fixing_group(*r.map).contains(turns));
        mpq_class total = 0;
        for (const auto& d : r.weights) {
            CHECK(d >= 0);
            total += d;
        }
        CHECK(total >= 1);
    }
    CHECK(feasible > 5);
}
