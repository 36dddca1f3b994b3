#include "cli.hpp"

#include "ballsym/errors.hpp"
#include "ballsym/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace ballsym::cli {

namespace {

using io::Json;

struct Outcome {
    int code = Ok;
    std::string status = "ok";
    Json payload = Json::object();
    std::string summary;
    std::string backend_used;
};

Outcome ok(Json payload, std::string summary) { return {Ok, "ok", std::move(payload), std::move(summary), {}}; }
Outcome negative(Json payload, std::string summary) {
    return {Negative, "fail", std::move(payload), std::move(summary), {}};
}

struct Settings {
    std::string backend = "exact";
    unsigned precision = kDefaultPrecisionBits;
    double tolerance = kDefaultTolerance;
    bool timestamp = true;
    bool is_float() const { return backend == "float"; }
};

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

FloatComplex float_entry(const Json& j, unsigned bits) {
    if (j.is_object() && j.contains("re")) return io::float_from_json(j);
    return io::scalar_from_json(j).to_float(bits);
}

FloatMatrix float_matrix(const Json& rows, unsigned bits) {
    if (!rows.is_array()) throw ParseError("/matrix: expected an array");
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows[0].size();
    FloatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!rows[i].is_array() || rows[i].size() != c) throw ParseError("/matrix/" + std::to_string(i) + ": ragged row");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = float_entry(rows[i][k], bits);
    }
    return m;
}

FloatAutomorphism float_automorphism(const Json& j, unsigned bits) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("matrix")) throw ParseError("/: expected {\"dim\", \"matrix\"}");
    const std::size_t n = j["dim"].get<std::size_t>();
    FloatMatrix m = float_matrix(j["matrix"], bits);
    if (m.rows() == n && m.cols() == n) {
        FloatMatrix e = FloatMatrix::identity(n + 1);
        for (auto& x : e.data()) x = FloatComplex(Real(x.re), Real(x.im), bits);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) e(i, k) = m(i, k);
        }
        m = e;
    }
    if (m.rows() != n + 1 || m.cols() != n + 1) throw ParseError("/matrix: expected an (n+1)x(n+1) or n x n matrix");
    return FloatAutomorphism{n, m};
}

double norm2(const std::vector<FloatComplex>& v) {
    double s = 0;
    for (const auto& x : v) s += x.norm2().convert_to<double>();
    return s;
}

std::vector<FloatComplex> at_precision(std::vector<FloatComplex> z, unsigned bits) {
    for (auto& x : z) x = FloatComplex(x.re, x.im, bits);
    return z;
}

std::vector<MultiIndex> parse_exponents(const std::string& text, std::size_t n) {
    std::vector<MultiIndex> out;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::vector<int> e;
        std::stringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                e.push_back(std::stoi(cell));
            } catch (const std::exception&) {
                throw ParseError("--exponents: malformed entry '" + cell + "'");
            }
        }
        if (e.size() != n) throw ParseError("--exponents: row '" + row + "' does not have " + std::to_string(n) + " entries");
        out.emplace_back(e);
    }
    return out;
}

std::optional<CyclicConstraint> constraint(const std::vector<std::int64_t>& weights, std::int64_t order) {
    if (weights.empty()) return std::nullopt;
    return CyclicConstraint{weights, order};
}

Json group_payload(const FiniteUnitaryGroup& g) {
    Json out = io::group_to_json(g);
    out["order"] = g.order();
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings s;
    if (const char* env = std::getenv("BALLSYM_PRECISION")) s.precision = static_cast<unsigned>(std::strtoul(env, nullptr, 10));

    CLI::App app{"Exact symmetry computations for polynomial maps between complex unit balls", "ballsym"};
    app.require_subcommand(1);
    app.add_option("--backend", s.backend, "Scalar backend")->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--precision", s.precision, "Float precision in bits (env BALLSYM_PRECISION)")->check(CLI::Range(53u, 4096u));
    app.add_option("--tol", s.tolerance, "Float tolerance");
    app.add_flag("!--no-timestamp", s.timestamp, "Omit the timestamp field");

    std::string map_path, other_path, gamma_path, group_path, out_path, exponents_text;
    std::vector<std::int64_t> m_weights, weights;
    std::int64_t order = 1;
    std::size_t n = 0, k = 1, cap = kDefaultClosureCap;
    int degree = 0, max_degree = 0;
    std::string t_text = "1/2";
    std::vector<std::size_t> split;
    std::string kind;
    std::function<Outcome()> action;
    std::string verb;

    auto map_opt = [&](CLI::App* c) { c->add_option("--map", map_path, "Map JSON file")->required(); };
    auto group_opt = [&](CLI::App* c) { c->add_option("--group", group_path, "Group JSON file")->required(); };
    auto load_map = [&](const std::string& p) { return io::polymap_from_json(io::load_file(p)); };
    auto load_group = [&](const std::string& p) { return io::group_generators_from_json(io::load_file(p)); };

    auto* proper = app.add_subcommand("proper", "Certify that a map sends the sphere to the sphere");
    map_opt(proper);
    proper->callback([&] {
        verb = "proper";
        action = [&] {
            const RationalMap f = io::rational_map_from_json(io::load_file(map_path));
            if (s.is_float()) {
                PrecisionScope scope(s.precision);
                double worst = 0;
                for (std::uint64_t i = 0; i < 1000; ++i) {
                    const auto z = at_precision(random_sphere_point(f.source_dim(), i), s.precision);
                    worst = std::max(worst, std::abs(norm2(evaluate(f, z)) - 1.0));
                }
                Outcome o = worst < s.tolerance ? ok({}, "sphere sampling agrees") : negative({}, "NotProper (sampled)");
                o.payload = {{"proper", worst < s.tolerance}, {"max_deviation", worst}, {"samples", 1000}};
                return o;
            }
            const PropernessReport r = is_proper(f);
            Json p = io::to_json(r);
            p["verified"] = verify_certificate(f, r);
            if (f.denominator.degree() > 0) p["denominator_min_on_ball"] = sample_denominator_min(f);
            if (f.denominator.degree() > 0) p["denominator_check"] = "numeric check";
            return r.proper ? ok(p, "proper: certificate r with <p,p> - |q|^2 = r (<z,w> - 1)")
                            : negative(p, "NotProper: nonzero remainder");
        };
    });

    auto* neq = app.add_subcommand("norm-equal", "Compare |f|^2 and |g|^2");
    map_opt(neq);
    neq->add_option("--other", other_path, "Second map")->required();
    neq->callback([&] {
        verb = "norm-equal";
        action = [&] {
            const RationalMap f = io::rational_map_from_json(io::load_file(map_path));
            const RationalMap g = io::rational_map_from_json(io::load_file(other_path));
            if (f.source_dim() != g.source_dim()) throw DimensionMismatch("maps have different source dimensions");
            bool equal = false;
            Json p;
            if (s.is_float()) {
                PrecisionScope scope(s.precision);
                double worst = 0;
                for (std::uint64_t i = 0; i < 200; ++i) {
                    const auto z = at_precision(random_ball_point(f.source_dim(), i), s.precision);
                    worst = std::max(worst, std::abs(norm2(evaluate(f, z)) - norm2(evaluate(g, z))));
                }
                equal = worst < s.tolerance;
                p = {{"equal", equal}, {"max_deviation", worst}, {"samples", 200}};
            } else {
                equal = norm_equal(f, g);
                p = {{"equal", equal}};
            }
            return equal ? ok(p, "|f|^2 = |g|^2") : negative(p, "|f|^2 != |g|^2");
        };
    });

    auto* span = app.add_subcommand("span", "Rank of the coefficient span");
    map_opt(span);
    span->callback([&] {
        verb = "span";
        action = [&] {
            const PolyMap f = load_map(map_path);
            const SpanReport r = span_rank(f);
            Json p = io::to_json(r);
            p["N"] = f.target_dim();
            p["minimal"] = r.rank == f.target_dim();
            return ok(p, "span rank " + std::to_string(r.rank) + " of " + std::to_string(f.target_dim()));
        };
    });

    auto* torus = app.add_subcommand("torus", "Diagonal torus elements preserving |f|^2");
    map_opt(torus);
    torus->callback([&] {
        verb = "torus";
        action = [&] {
            const PolyMap f = load_map(map_path);
            const TorusSubgroup t = torus_invariance_group(f);
            return ok(io::to_json(t), "continuous dimension " + std::to_string(t.continuous_dim()) + ", finite part of order " +
                             t.finite_order().get_str());
        };
    });

    auto* fix = app.add_subcommand("fix-group", "Diagonal torus elements with f o gamma = f");
    map_opt(fix);
    fix->callback([&] {
        verb = "fix-group";
        action = [&] {
            const PolyMap f = load_map(map_path);
            const TorusSubgroup t = diagonal_fixing_group(f);
            return ok(io::to_json(t), "continuous dimension " + std::to_string(t.continuous_dim()) +
                                          ", finite part of order " + t.finite_order().get_str());
        };
    });

    auto* hf = app.add_subcommand("hf", "Left fixing group H_f");
    map_opt(hf);
    hf->callback([&] {
        verb = "hf";
        action = [&] {
            const HfReport h = hf_group(load_map(map_path));
            return ok(io::to_json(h), "H_f acts as U(" + std::to_string(h.k) + ") on the complement of the span");
        };
    });

    auto* member = app.add_subcommand("member", "Test gamma in Gamma_f and compute psi");
    map_opt(member);
    member->add_option("--gamma", gamma_path, "Automorphism JSON file")->required();
    member->callback([&] {
        verb = "member";
        action = [&] {
            const PolyMap f = load_map(map_path);
            const Json gj = io::load_file(gamma_path);
            const PhiResult r = s.is_float() ? gamma_membership_float(f, float_automorphism(gj, s.precision), s.precision)
                                             : gamma_membership(f, io::automorphism_from_json(gj));
            Json p = io::to_json(r);
            if (s.is_float()) p.erase("gamma");
            Outcome o = r.member ? ok(p, "member; psi verified") : negative(p, "NotMember");
            if (!r.exact) o.backend_used = "float";
            return o;
        };
    });

    auto* kernel = app.add_subcommand("phi-kernel", "Elements of a finite group with f o g = f");
    map_opt(kernel);
    group_opt(kernel);
    kernel->callback([&] {
        verb = "phi-kernel";
        action = [&] {
            const PolyMap f = load_map(map_path);
            const FiniteUnitaryGroup g = load_group(group_path);
            const FiniteUnitaryGroup c = group_closure(g.generators, g.dim);
            const FiniteUnitaryGroup kg = phi_kernel(f, c);
            Json p = group_payload(kg);
            p["candidate_order"] = c.order();
            p["closed"] = is_closed(kg);
            return ok(p, "kernel of order " + std::to_string(kg.order()) + " in a group of order " + std::to_string(c.order()));
        };
    });

    auto* graded = app.add_subcommand("graded", "One-parameter invariance and degree bound");
    map_opt(graded);
    graded->add_option("--m", m_weights, "Integer weights m_j")->required()->delimiter(',');
    graded->callback([&] {
        verb = "graded";
        action = [&] {
            try {
                const GradedReport r = graded_analysis(load_map(map_path), m_weights);
                return ok(io::to_json(r), r.restricted_degree_bound
                                              ? "invariant; degree bound " + std::to_string(*r.restricted_degree_bound)
                                              : std::string("invariant; no positive weights"));
            } catch (const NotInvariant& e) {
                return negative(Json{{"invariant", false}, {"reason", e.what()}}, "NotInvariant");
            }
        };
    });

    auto add_solver_options = [&](CLI::App* c) {
        c->add_option("--n", n, "Source dimension")->required()->check(CLI::PositiveNumber);
        c->add_option("--exponents", exponents_text, "Exponents as '1,0;0,1'");
        c->add_option("--max-degree", max_degree, "Use all exponents up to this degree");
        c->add_option("--weights", weights, "Cyclic group weights a_j")->delimiter(',');
        c->add_option("--order", order, "Cyclic group order")->check(CLI::PositiveNumber);
    };
    auto solve = [&] {
        std::vector<MultiIndex> ex;
        if (!exponents_text.empty()) ex = parse_exponents(exponents_text, n);
        if (max_degree > 0) {
            auto more = exponents_up_to(n, max_degree);
            ex.insert(ex.end(), more.begin(), more.end());
        }
        if (ex.empty()) throw InvalidArgument("give --exponents or --max-degree");
        return monomial_proper_solve(n, ex, constraint(weights, order));
    };

    auto* solver = app.add_subcommand("solve-monomial", "Invariant monomial proper map");
    add_solver_options(solver);
    solver->callback([&] {
        verb = "solve-monomial";
        action = [&] {
            const MonomialSolveResult r = solve();
            Json p = io::to_json(r);
            if (r.map) p["proper_verified"] = is_proper(*r.map).proper;
            switch (r.status) {
                case MonomialSolveResult::Status::Feasible: return ok(p, "feasible");
                case MonomialSolveResult::Status::Infeasible: return negative(p, "Infeasible");
                case MonomialSolveResult::Status::Undecided: break;
            }
            return Outcome{Undecided, "undecided", p, "Undecided: solution space too large", {}};
        };
    });

    auto* construct = app.add_subcommand("construct", "Build a map file");
    construct->add_option("kind", kind, "Construction")
        ->required()
        ->check(CLI::IsMember({"tensor", "whitney", "pad", "direct-sum", "partial-tensor", "monomial-from-solver"}));
    construct->add_option("--map", map_path, "Input map");
    construct->add_option("--other", other_path, "Second map (direct-sum)");
    construct->add_option("--m", degree, "Tensor degree");
    construct->add_option("--k", k, "Number of zero components (pad)");
    construct->add_option("--t", t_text, "Weight in [0, 1] (direct-sum)");
    construct->add_option("--split", split, "Components to tensor, 1-based")->delimiter(',');
    construct->add_option("--out", out_path, "Output file (default: standard output)");
    add_solver_options(construct);
    construct->get_option("--n")->required(false);
    construct->callback([&] {
        verb = "construct";
        action = [&]() -> Outcome {
            auto need = [](const std::string& v, const char* flag) {
                if (v.empty()) throw InvalidArgument(std::string("construct needs ") + flag);
            };
            PolyMap f;
            if (kind == "tensor") {
                if (n < 1 || degree < 1) throw InvalidArgument("construct tensor needs --n >= 1 and --m >= 1");
                f = tensor_power(n, degree);
            } else if (kind == "whitney") {
                f = whitney_map();
            } else if (kind == "pad") {
                need(map_path, "--map");
                if (k < 1) throw InvalidArgument("--k must be at least 1");
                f = pad(load_map(map_path), k);
            } else if (kind == "direct-sum") {
                need(map_path, "--map");
                need(other_path, "--other");
                mpq_class t;
                try {
                    t = mpq_class(t_text);
                    t.canonicalize();
                } catch (const std::invalid_argument&) {
                    throw ParseError("--t: malformed rational '" + t_text + "'");
                }
                f = direct_sum(load_map(map_path), load_map(other_path), t);
            } else if (kind == "partial-tensor") {
                need(map_path, "--map");
                std::set<std::size_t> sel;
                for (auto i : split) {
                    if (i < 1) throw InvalidArgument("--split indices are 1-based");
                    sel.insert(i - 1);
                }
                f = partial_tensor(load_map(map_path), sel);
            } else {
                const MonomialSolveResult r = solve();
                if (r.status == MonomialSolveResult::Status::Undecided) {
                    return Outcome{Undecided, "undecided", io::to_json(r), "Undecided", {}};
                }
                if (!r.map) return negative(io::to_json(r), "Infeasible");
                f = *r.map;
            }
            const Json mj = io::to_json(f);
            if (out_path.empty()) return Outcome{Ok, "raw", mj, {}, {}};
            io::save_file(out_path, mj);
            return ok(Json{{"written", out_path}, {"n", f.source_dim()}, {"N", f.target_dim()}}, "map written");
        };
    });

    auto* classify = app.add_subcommand("classify-kernel", "Match a cyclic group against the kernel templates");
    group_opt(classify);
    classify->callback([&] {
        verb = "classify-kernel";
        action = [&] {
            const FiniteUnitaryGroup g = load_group(group_path);
            const FiniteUnitaryGroup c = group_closure(g.generators, g.dim);
            try {
                const KernelClass kc = classify_cyclic_kernel(c);
                Json p = io::to_json(kc);
                return kc.tag == KernelTag::NotInList ? negative(p, "NotInList") : ok(p, kc.tag_name());
            } catch (const NotCyclicError&) {
                return negative(Json{{"tag", "NotInList"}, {"cyclic", false}, {"order", c.order()}}, "NotInList: group is not cyclic");
            }
        };
    });

    auto* closure = app.add_subcommand("closure", "Finite group generated by unitary matrices");
    group_opt(closure);
    closure->add_option("--cap", cap, "Maximum group order")->check(CLI::PositiveNumber);
    closure->callback([&] {
        verb = "closure";
        action = [&] {
            const FiniteUnitaryGroup g = load_group(group_path);
            const FiniteUnitaryGroup c = group_closure(g.generators, g.dim, cap);
            Json p = group_payload(c);
            p["closed"] = is_closed(c);
            const auto gen = is_cyclic(c);
            p["cyclic"] = gen.has_value();
            return ok(p, "group of order " + std::to_string(c.order()));
        };
    });

    auto* fpf = app.add_subcommand("fpf", "Fixed-point-free test");
    group_opt(fpf);
    fpf->callback([&] {
        verb = "fpf";
        action = [&] {
            const FiniteUnitaryGroup g = load_group(group_path);
            const FixedPointReport r = is_fixed_point_free(group_closure(g.generators, g.dim));
            Json p{{"fixed_point_free", r.fixed_point_free}};
            if (r.witness) p["witness"] = io::to_json(*r.witness);
            return r.fixed_point_free ? ok(p, "fixed-point-free") : negative(p, "element with eigenvalue 1 found");
        };
    });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return Usage;
    }

    Outcome o;
    try {
        o = action();
    } catch (const UnsupportedScalar& e) {
        o = {Undecided, "undecided", Json{{"error", e.kind()}, {"message", e.what()}}, "UnsupportedScalar: use --backend float", {}};
    } catch (const CapExceeded& e) {
        o = {Undecided, "undecided", Json{{"error", e.kind()}, {"message", e.what()}}, "CapExceeded", {}};
    } catch (const Error& e) {
        err << e.kind() << ": " << e.what() << "\n";
        return Usage;
    } catch (const nlohmann::json::exception& e) {
        err << "ParseError: " << e.what() << "\n";
        return Usage;
    }

    if (o.status == "raw") {
        out << io::dump(o.payload);
        return o.code;
    }
    Json report;
    report["version"] = io::library_version();
    report["backend"] = {{"scalar", o.backend_used.empty() ? s.backend : o.backend_used},
                         {"exact_fragment", "Q(zeta_L)[sqrt r]"},
                         {"precision_bits", s.precision},
                         {"tolerance", s.tolerance}};
    report["command"] = verb;
    report["status"] = o.status;
    report["summary"] = o.summary;
    report["payload"] = std::move(o.payload);
    if (s.timestamp) report["timestamp"] = utc_now();
    out << io::dump(report);
    return o.code;
}

}  // namespace ballsym::cli
