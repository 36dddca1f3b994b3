#include "ballsym/errors.hpp"
#include "ballsym/io.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ballsym;
using ballsym::testing::random_rad;
using ballsym::testing::random_unitary;
using ballsym::testing::rv;

namespace {

template <class T, class Read>
void round_trip(const T& x, Read read) {
    const io::Json j = io::to_json(x);
    const auto back = read(io::Json::parse(io::dump(j)));
    CHECK(back == x);
    CHECK(io::dump(io::to_json(back)) == io::dump(j));
}

}  // namespace

TEST_CASE("scalar round trip") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) round_trip(random_rad(rng, 3), io::scalar_from_json);
    round_trip(RadScalar(), io::scalar_from_json);
    CHECK(io::scalar_from_json(io::Json("3/6")) == RadScalar(mpq_class(1, 2)));
    CHECK(io::scalar_from_json(io::Json(-4)) == RadScalar(-4));
    const auto z8 = io::Json::parse(R"({"order": 8, "terms": [{"rad": 2, "coeffs": ["0", "1"]}]})");
    CHECK(io::scalar_from_json(z8) == RadScalar::radical(2, CycloScalar::root_of_unity(8, 1)));
    CHECK(io::to_json(RadScalar::root_of_unity(3, 1))["order"] == 3);
}

TEST_CASE("scalar parse errors carry a location") {
    auto message = [](const char* text) {
        try {
            io::scalar_from_json(io::Json::parse(text));
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"order": 4, "terms": [{"rad": 4, "coeffs": ["1"]}]})").find("/terms/0/rad") != std::string::npos);
    CHECK(message(R"({"terms": []})").find("order") != std::string::npos);
    CHECK(message(R"("1/x")").find("malformed") != std::string::npos);
    CHECK(message(R"({"order": 4, "terms": [{"rad": 1, "coeffs": [true]}]})").find("/terms/0/coeffs/0") != std::string::npos);
}

TEST_CASE("float round trip") {
    const FloatComplex x = RadScalar::radical(2, CycloScalar::root_of_unity(8, 1)).to_float(128);
    const FloatComplex y = io::float_from_json(io::to_json(x));
    CHECK(y.precision == 128);
    CHECK(abs_diff(x, y) < 1e-35);
    CHECK(io::dump(io::to_json(y)) == io::dump(io::to_json(x)));
}

TEST_CASE("map round trip") {
    std::mt19937_64 rng(4);
    for (const auto& f : {whitney_map(), tensor_power(3, 3), pad(tensor_power(2, 2), 2),
                          left_multiply(random_unitary(rng, 3, true), whitney_map())}) {
        round_trip(f, io::polymap_from_json);
    }
    const RationalMap r = compose_automorphism(whitney_map(), involution(rv({mpq_class(3, 5), 0})));
    const io::Json j = io::to_json(r);
    CHECK(j.contains("denominator"));
    const RationalMap back = io::rational_map_from_json(io::Json::parse(io::dump(j)));
    CHECK(equal(back, r));
    CHECK(io::dump(io::to_json(back)) == io::dump(j));
    CHECK_THROWS_AS(io::polymap_from_json(j), ParseError);

    // Readers accept any term order and shorthand scalars.
    const auto hand = io::Json::parse(R"({"n": 2, "N": 3, "terms": [
        {"alpha": [0, 2], "coeff": [0, 0, 1]},
        {"alpha": [1, 0], "coeff": [1, 0, 0]},
        {"alpha": [1, 1], "coeff": [0, "1", 0]}]})");
    CHECK(io::polymap_from_json(hand) == whitney_map());
    const auto bad = io::Json::parse(R"({"n": 2, "N": 3, "terms": [{"alpha": [1], "coeff": [1, 0, 0]}]})");
    CHECK_THROWS_AS(io::polymap_from_json(bad), ParseError);
}

TEST_CASE("automorphism and group round trip") {
    const BallAutomorphism phi = aut_compose(BallAutomorphism::from_unitary(RadMatrix::diagonal({RadScalar::root_of_unity(4, 1), RadScalar(1)})),
                                             involution(rv({mpq_class(3, 5), 0})));
    round_trip(phi, io::automorphism_from_json);
    const auto swap = io::Json::parse(R"({"dim": 2, "matrix": [[0, 1], [1, 0]]})");
    CHECK(io::automorphism_from_json(swap).is_unitary());

    FiniteUnitaryGroup g;
    g.dim = 3;
    g.generators = {RadMatrix::diagonal({RadScalar::root_of_unity(7, 1), RadScalar::root_of_unity(7, 2), RadScalar::root_of_unity(7, 4)})};
    const auto back = io::group_generators_from_json(io::Json::parse(io::dump(io::group_to_json(g))));
    CHECK(back.dim == 3);
    CHECK(back.generators == g.generators);
}

TEST_CASE("torus and hermitian round trip") {
    const TorusSubgroup t = diagonal_fixing_group(tensor_power(2, 4));
    const TorusSubgroup back = io::torus_from_json(io::Json::parse(io::dump(io::to_json(t))));
    CHECK(back.continuous_basis == t.continuous_basis);
    CHECK(back.finite_generators.size() == t.finite_generators.size());
    CHECK(back.lattice == t.lattice);
    CHECK(io::dump(io::to_json(back)) == io::dump(io::to_json(t)));

    const HermitianPoly q = is_proper(whitney_map()).quotient;
    round_trip(q, io::hermitian_from_json);

    const io::Json pf = io::to_json(polarized_form(tensor_power(2, 2)));
    CHECK(pf["entries"].size() == 3);
}
