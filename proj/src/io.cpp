#include "ballsym/io.hpp"

#include "ballsym/errors.hpp"

#include <fstream>
#include <sstream>

namespace ballsym::io {

namespace {

[[noreturn]] void fail(const std::string& at, const std::string& what) {
    throw ParseError((at.empty() ? std::string("/") : at) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& at) {
    if (!j.is_object()) fail(at, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(at, std::string("missing field '") + key + "'");
    return *it;
}

std::size_t size_field(const Json& j, const char* key, const std::string& at) {
    const Json& v = field(j, key, at);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(at + "/" + key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

const Json& array_at(const Json& j, const std::string& at) {
    if (!j.is_array()) fail(at, "expected an array");
    return j;
}

mpq_class rational_from(const Json& j, const std::string& at) {
    try {
        if (j.is_number_integer()) return mpq_class(j.get<long>());
        if (j.is_string()) {
            mpq_class q(j.get<std::string>());
            if (q.get_den() == 0) fail(at, "zero denominator");
            q.canonicalize();
            return q;
        }
    } catch (const std::invalid_argument&) {
        fail(at, "malformed rational '" + j.get<std::string>() + "'");
    }
    fail(at, "expected a rational (integer or \"p/q\" string)");
}

std::string q_str(mpq_class q) {
    q.canonicalize();
    return q.get_str();
}

Json rationals(const std::vector<mpq_class>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(q_str(x));
    return a;
}

std::vector<mpq_class> rationals_from(const Json& j, const std::string& at) {
    std::vector<mpq_class> out;
    std::size_t i = 0;
    for (const auto& x : array_at(j, at)) out.push_back(rational_from(x, at + "/" + std::to_string(i++)));
    return out;
}

Json integers(const IntMatrix& m) {
    Json a = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(x.get_str());
        a.push_back(std::move(r));
    }
    return a;
}

mpz_class integer_from(const Json& j, const std::string& at) {
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (j.is_string()) {
        try {
            return mpz_class(j.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    fail(at, "expected an integer");
}

RadScalar scalar_at(const Json& j, const std::string& at);

std::vector<RadScalar> scalar_vector(const Json& j, const std::string& at) {
    std::vector<RadScalar> out;
    std::size_t i = 0;
    for (const auto& x : array_at(j, at)) out.push_back(scalar_at(x, at + "/" + std::to_string(i++)));
    return out;
}

RadScalar scalar_at(const Json& j, const std::string& at) {
    if (j.is_number_integer() || j.is_string()) return RadScalar(rational_from(j, at));
    const std::int64_t order = static_cast<std::int64_t>(size_field(j, "order", at));
    if (order < 1) fail(at + "/order", "order must be positive");
    RadScalar out;
    std::size_t i = 0;
    for (const auto& t : array_at(field(j, "terms", at), at + "/terms")) {
        const std::string here = at + "/terms/" + std::to_string(i++);
        const auto r = static_cast<std::int64_t>(size_field(t, "rad", here));
        if (r < 1 || !is_square_free(r)) fail(here + "/rad", "radicand must be a square-free positive integer");
        const auto coeffs = rationals_from(field(t, "coeffs", here), here + "/coeffs");
        out += RadScalar::radical(r, CycloScalar::from_raw(order, coeffs));
    }
    return out.canonical();
}

MultiIndex index_at(const Json& j, std::size_t n, const std::string& at) {
    std::vector<int> e;
    for (const auto& x : array_at(j, at)) {
        if (!x.is_number_integer() || x.get<long>() < 0) fail(at, "exponents must be non-negative integers");
        e.push_back(x.get<int>());
    }
    if (e.size() != n) fail(at, "multi-index has length " + std::to_string(e.size()) + ", expected " + std::to_string(n));
    return MultiIndex(e);
}

RadMatrix matrix_at(const Json& j, const std::string& at) {
    const Json& rows = array_at(j, at);
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : array_at(rows[0], at + "/0").size();
    RadMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        const auto row = scalar_vector(rows[i], at + "/" + std::to_string(i));
        if (row.size() != c) fail(at + "/" + std::to_string(i), "ragged matrix row");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = row[k];
    }
    return m;
}

Polynomial polynomial_at(const Json& j, std::size_t n, const std::string& at) {
    Polynomial p(n);
    std::size_t i = 0;
    for (const auto& t : array_at(field(j, "terms", at), at + "/terms")) {
        const std::string here = at + "/terms/" + std::to_string(i++);
        p.add_term(index_at(field(t, "alpha", here), n, here + "/alpha"), scalar_at(field(t, "coeff", here), here + "/coeff"));
    }
    return p;
}

}  // namespace

Json to_json(const RadScalar& s) {
    const RadScalar c = s.canonical();
    Json out;
    const std::int64_t order = c.empty() ? 1 : c.order();
    out["order"] = order;
    Json terms = Json::array();
    for (const auto& [r, q] : c.terms()) {
        terms.push_back(Json{{"rad", r}, {"coeffs", rationals(q.lift(order).coeffs())}});
    }
    out["terms"] = std::move(terms);
    return out;
}

RadScalar scalar_from_json(const Json& j) { return scalar_at(j, ""); }

Json to_json(const FloatComplex& x) {
    const int digits = static_cast<int>(bits_to_digits10(x.precision)) + 2;
    return Json{{"re", x.re.str(digits, std::ios_base::scientific)},
                {"im", x.im.str(digits, std::ios_base::scientific)},
                {"prec", x.precision}};
}

FloatComplex float_from_json(const Json& j) {
    const unsigned bits = static_cast<unsigned>(size_field(j, "prec", ""));
    if (bits < 53) fail("/prec", "precision must be at least 53 bits");
    PrecisionScope scope(bits);
    auto num = [&](const char* key) {
        const Json& v = field(j, key, "");
        if (v.is_number()) return Real(v.get<double>());
        if (!v.is_string()) fail(std::string("/") + key, "expected a decimal string");
        try {
            return Real(v.get<std::string>());
        } catch (const std::exception&) {
            fail(std::string("/") + key, "malformed decimal");
        }
    };
    return FloatComplex(num("re"), num("im"), bits);
}

Json to_json(const MultiIndex& a) { return Json(a.entries); }

MultiIndex multi_index_from_json(const Json& j, std::size_t n) { return index_at(j, n, ""); }

Json to_json(const Polynomial& p) {
    Json terms = Json::array();
    for (const auto& [a, c] : p.terms()) terms.push_back(Json{{"alpha", to_json(a)}, {"coeff", to_json(c)}});
    return Json{{"n", p.vars()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const Json& j, std::size_t n) { return polynomial_at(j, n, ""); }

Json to_json(const PolyMap& f) {
    Json terms = Json::array();
    for (const auto& [a, c] : f.terms()) {
        Json coeff = Json::array();
        for (const auto& x : c) coeff.push_back(to_json(x));
        terms.push_back(Json{{"alpha", to_json(a)}, {"coeff", std::move(coeff)}});
    }
    return Json{{"n", f.source_dim()}, {"N", f.target_dim()}, {"terms", std::move(terms)}};
}

Json to_json(const RationalMap& f) {
    Json out = to_json(f.numerator);
    if (f.denominator != Polynomial::constant(f.source_dim(), RadScalar(1))) out["denominator"] = to_json(f.denominator);
    return out;
}

RationalMap rational_map_from_json(const Json& j) {
    const std::size_t n = size_field(j, "n", "");
    const std::size_t N = size_field(j, "N", "");
    if (n < 1) fail("/n", "source dimension must be positive");
    PolyMap f(n, N);
    std::size_t i = 0;
    for (const auto& t : array_at(field(j, "terms", ""), "/terms")) {
        const std::string here = "/terms/" + std::to_string(i++);
        const auto c = scalar_vector(field(t, "coeff", here), here + "/coeff");
        if (c.size() != N) fail(here + "/coeff", "coefficient vector has length " + std::to_string(c.size()));
        f.add_term(index_at(field(t, "alpha", here), n, here + "/alpha"), c);
    }
    if (!j.contains("denominator")) return RationalMap::from_poly(f);
    return RationalMap(f, polynomial_at(j["denominator"], n, "/denominator"));
}

PolyMap polymap_from_json(const Json& j) {
    if (j.is_object() && j.contains("denominator")) {
        const RationalMap r = rational_map_from_json(j);
        if (r.denominator == Polynomial::constant(r.source_dim(), RadScalar(1))) return r.numerator;
        fail("/denominator", "a polynomial map is required here");
    }
    return rational_map_from_json(j).numerator;
}

Json to_json(const RadMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(to_json(m(i, k)));
        rows.push_back(std::move(r));
    }
    return rows;
}

RadMatrix matrix_from_json(const Json& j) { return matrix_at(j, ""); }

Json to_json(const FloatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(to_json(m(i, k)));
        rows.push_back(std::move(r));
    }
    return rows;
}

Json to_json(const BallAutomorphism& g) { return Json{{"dim", g.dim()}, {"matrix", to_json(g.matrix())}}; }

BallAutomorphism automorphism_from_json(const Json& j) {
    const std::size_t n = size_field(j, "dim", "");
    const RadMatrix m = matrix_at(field(j, "matrix", ""), "/matrix");
    if (m.rows() == n && m.cols() == n) return BallAutomorphism::from_unitary(m);
    if (m.rows() != n + 1 || m.cols() != n + 1) fail("/matrix", "expected an (n+1)x(n+1) or n x n matrix");
    return BallAutomorphism::from_matrix(m);
}

Json to_json(const FloatAutomorphism& g) { return Json{{"dim", g.dim}, {"matrix", to_json(g.matrix)}}; }

Json group_to_json(const FiniteUnitaryGroup& g) {
    Json gens = Json::array();
    for (const auto& m : g.generators) gens.push_back(to_json(m));
    return Json{{"dim", g.dim}, {"generators", std::move(gens)}};
}

FiniteUnitaryGroup group_generators_from_json(const Json& j) {
    FiniteUnitaryGroup g;
    g.dim = size_field(j, "dim", "");
    std::size_t i = 0;
    for (const auto& m : array_at(field(j, "generators", ""), "/generators")) {
        const std::string here = "/generators/" + std::to_string(i++);
        RadMatrix gen = matrix_at(m, here);
        if (gen.rows() != g.dim || gen.cols() != g.dim) fail(here, "generator has the wrong shape");
        g.generators.push_back(std::move(gen));
    }
    return g;
}

Json to_json(const HermitianPoly& h) {
    Json entries = Json::array();
    for (const auto& [k, v] : h.terms()) {
        entries.push_back(Json{{"alpha", to_json(h.alpha_of(k))}, {"beta", to_json(h.beta_of(k))}, {"value", to_json(v)}});
    }
    return Json{{"n", h.vars()}, {"entries", std::move(entries)}};
}

HermitianPoly hermitian_from_json(const Json& j) {
    const std::size_t n = size_field(j, "n", "");
    HermitianPoly h(n);
    std::size_t i = 0;
    for (const auto& e : array_at(field(j, "entries", ""), "/entries")) {
        const std::string here = "/entries/" + std::to_string(i++);
        h.add_term(index_at(field(e, "alpha", here), n, here + "/alpha"), index_at(field(e, "beta", here), n, here + "/beta"),
                   scalar_at(field(e, "value", here), here + "/value"));
    }
    return h;
}

Json to_json(const PolarizedForm& p) {
    Json entries = Json::array();
    const HermitianPoly& h = p.form;
    for (const auto& [k, v] : h.terms()) {
        const MultiIndex a = h.alpha_of(k);
        const MultiIndex b = h.beta_of(k);
        if (GradedLex{}(b, a)) continue;
        entries.push_back(Json{{"alpha", to_json(a)}, {"beta", to_json(b)}, {"value", to_json(v)}});
    }
    Json out{{"n", h.vars()}, {"entries", std::move(entries)}};
    if (p.denominator) out["denominator"] = to_json(*p.denominator);
    return out;
}

Json to_json(const TorusSubgroup& t) {
    Json cont = Json::array();
    for (const auto& v : t.continuous_basis) cont.push_back(rationals(v));
    Json fin = Json::array();
    for (const auto& g : t.finite_generators) fin.push_back(Json{{"turns", rationals(g.turns)}, {"order", g.order.get_str()}});
    return Json{{"dim", t.dim},
                {"continuous_dim", t.continuous_dim()},
                {"continuous_basis", std::move(cont)},
                {"finite_generators", std::move(fin)},
                {"finite_order", t.finite_order().get_str()},
                {"lattice", integers(t.lattice)}};
}

TorusSubgroup torus_from_json(const Json& j) {
    TorusSubgroup t;
    t.dim = size_field(j, "dim", "");
    std::size_t i = 0;
    for (const auto& v : array_at(field(j, "continuous_basis", ""), "/continuous_basis")) {
        t.continuous_basis.push_back(rationals_from(v, "/continuous_basis/" + std::to_string(i++)));
    }
    i = 0;
    for (const auto& g : array_at(field(j, "finite_generators", ""), "/finite_generators")) {
        const std::string here = "/finite_generators/" + std::to_string(i++);
        t.finite_generators.push_back({rationals_from(field(g, "turns", here), here + "/turns"),
                                       integer_from(field(g, "order", here), here + "/order")});
    }
    if (j.contains("lattice")) {
        i = 0;
        for (const auto& row : array_at(j["lattice"], "/lattice")) {
            std::vector<mpz_class> r;
            for (const auto& x : array_at(row, "/lattice/" + std::to_string(i))) r.push_back(integer_from(x, "/lattice"));
            t.lattice.push_back(std::move(r));
            ++i;
        }
    }
    return t;
}

Json to_json(const KernelClass& k) {
    Json out{{"tag", k.tag_name()}, {"params", k.params}, {"order", k.order}, {"exponents", k.exponents}};
    if (k.generator_power) out["generator_power"] = *k.generator_power;
    if (k.permutation) out["permutation"] = *k.permutation;
    return out;
}

Json to_json(const SpanReport& s) {
    Json basis = Json::array();
    for (const auto& v : s.basis) {
        Json col = Json::array();
        for (const auto& x : v) col.push_back(to_json(x));
        basis.push_back(std::move(col));
    }
    Json support = Json::array();
    for (const auto& a : s.basis_support) support.push_back(to_json(a));
    return Json{{"rank", s.rank}, {"basis", std::move(basis)}, {"basis_support", std::move(support)}};
}

Json to_json(const PropernessReport& r) {
    Json out{{"proper", r.proper}, {"quotient", to_json(r.quotient)}};
    if (!r.proper) out["remainder"] = to_json(r.remainder);
    return out;
}

Json to_json(const HfReport& h) {
    auto vecs = [](const std::vector<std::vector<RadScalar>>& vs) {
        Json a = Json::array();
        for (const auto& v : vs) {
            Json col = Json::array();
            for (const auto& x : v) col.push_back(to_json(x));
            a.push_back(std::move(col));
        }
        return a;
    };
    return Json{{"k", h.k}, {"span_basis", vecs(h.span_basis)}, {"complement_basis", vecs(h.complement_basis)}};
}

Json to_json(const PhiResult& r) {
    Json out{{"member", r.member}, {"exact", r.exact}, {"unique", r.unique}, {"gamma", to_json(r.gamma)}};
    if (r.psi) out["psi"] = to_json(*r.psi);
    if (r.psi_float) out["psi_float"] = to_json(*r.psi_float);
    if (!r.exact) out["residual"] = r.residual;
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

Json to_json(const GradedReport& g) {
    Json out{{"m", g.m}, {"positive_indices", g.positive_indices}};
    out["restricted_degree_bound"] = g.restricted_degree_bound ? Json(*g.restricted_degree_bound) : Json(nullptr);
    out["spanning_degree"] = g.spanning_degree;
    out["restricted_degree"] = g.restricted_degree;
    out["restriction_is_polynomial"] = g.restriction_is_polynomial;
    out["within_bound"] = g.within_bound;
    return out;
}

Json to_json(const MonomialSolveResult& r) {
    static const char* names[] = {"Feasible", "Infeasible", "Undecided"};
    Json ex = Json::array();
    for (const auto& a : r.exponents) ex.push_back(to_json(a));
    Json out{{"status", names[static_cast<int>(r.status)]}, {"exponents", std::move(ex)}, {"weights", rationals(r.weights)}};
    if (r.map) out["map"] = to_json(*r.map);
    if (!r.certificate.empty()) out["certificate"] = r.certificate;
    return out;
}

std::string library_version() { return BALLSYM_VERSION; }

Json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

void save_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot write file");
    out << dump(j);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ballsym::io
