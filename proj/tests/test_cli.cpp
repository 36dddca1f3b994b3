#include "ballsym/io.hpp"
#include "cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ballsym;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    io::Json json() const { return io::Json::parse(out); }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

fs::path workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "ballsym_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string write_json(const std::string& name, const io::Json& j) { return write(name, io::dump(j)); }

const char* kZ7 = R"({"dim": 3, "generators": [[
  [{"order": 7, "terms": [{"rad": 1, "coeffs": ["0", "1"]}]}, 0, 0],
  [0, {"order": 7, "terms": [{"rad": 1, "coeffs": ["0", "0", "1"]}]}, 0],
  [0, 0, {"order": 7, "terms": [{"rad": 1, "coeffs": ["0", "0", "0", "0", "1"]}]}]]]})";

}  // namespace

TEST_CASE("construct") {
    const Result t = run({"construct", "tensor", "--n", "2", "--m", "2"});
    REQUIRE(t.code == 0);
    CHECK(io::polymap_from_json(t.json()) == tensor_power(2, 2));
    CHECK(run({"construct", "tensor", "--n", "2", "--m", "2"}).out == t.out);

    const std::string id2 = write_json("id2.json", io::to_json(PolyMap::identity(2)));
    const Result p = run({"construct", "pad", "--map", id2, "--k", "1"});
    REQUIRE(p.code == 0);
    const PolyMap padded = io::polymap_from_json(p.json());
    CHECK(padded.target_dim() == 3);
    CHECK(padded.component(0).is_zero());

    const Result m = run({"construct", "monomial-from-solver", "--n", "2", "--weights", "1,1", "--order", "3", "--max-degree", "3"});
    REQUIRE(m.code == 0);
    CHECK(io::polymap_from_json(m.json()) == tensor_power(2, 3));

    const std::string out = (workdir() / "w.json").string();
    const Result w = run({"--no-timestamp", "construct", "whitney", "--out", out});
    CHECK(w.code == 0);
    CHECK(io::polymap_from_json(io::load_file(out)) == whitney_map());

    const Result pt = run({"construct", "partial-tensor", "--map", id2, "--split", "2"});
    REQUIRE(pt.code == 0);
    CHECK(io::polymap_from_json(pt.json()).target_dim() == 3);

    const Result ds = run({"construct", "direct-sum", "--map", id2, "--other", id2, "--t", "1/2"});
    REQUIRE(ds.code == 0);
    CHECK(io::polymap_from_json(ds.json()).target_dim() == 4);
    CHECK(run({"construct", "direct-sum", "--map", id2, "--other", id2, "--t", "x"}).code == 2);
    CHECK(run({"construct", "shape"}).code == 2);
}

TEST_CASE("verbs and exit codes") {
    const std::string w = write_json("whitney.json", io::to_json(whitney_map()));
    const Result pr = run({"--no-timestamp", "proper", "--map", w});
    CHECK(pr.code == 0);
    CHECK(pr.json()["payload"]["verified"] == true);

    PolyMap half(2, 2);
    half.add_term(MultiIndex({1, 0}), {RadScalar(mpq_class(1, 2)), RadScalar()});
    half.add_term(MultiIndex({0, 1}), {RadScalar(), RadScalar(1)});
    const std::string h = write_json("half.json", io::to_json(half));
    const Result np = run({"--no-timestamp", "proper", "--map", h});
    CHECK(np.code == 1);
    CHECK(np.json()["payload"]["proper"] == false);
    CHECK_FALSE(np.json()["payload"]["remainder"]["entries"].empty());

    const std::string z7 = write("z7.json", kZ7);
    const Result ck = run({"--no-timestamp", "classify-kernel", "--group", z7});
    CHECK(ck.code == 0);
    CHECK(ck.json()["payload"]["tag"] == "TypeIII");
    const std::string flip = write("flip.json", R"({"dim": 2, "generators": [[[1, 0], [0, -1]]]})");
    CHECK(run({"classify-kernel", "--group", flip}).code == 1);
    CHECK(run({"fpf", "--group", flip}).code == 1);
    CHECK(run({"fpf", "--group", z7}).code == 0);
    const Result cl = run({"--no-timestamp", "closure", "--group", z7});
    CHECK(cl.json()["payload"]["order"] == 7);
    CHECK(run({"closure", "--group", z7, "--cap", "3"}).code == 3);

    const std::string swap = write("swap.json", R"({"dim": 2, "matrix": [[0, 1], [1, 0]]})");
    const Result nm = run({"--no-timestamp", "member", "--map", w, "--gamma", swap});
    CHECK(nm.code == 1);
    CHECK(nm.json()["payload"]["member"] == false);
    const std::string d = write("d.json", R"({"dim": 2, "matrix": [[{"order": 4, "terms": [{"rad": 1, "coeffs": ["0", "1"]}]}, 0], [0, 1]]})");
    const Result mem = run({"--no-timestamp", "member", "--map", w, "--gamma", d});
    CHECK(mem.code == 0);
    CHECK(mem.json()["payload"]["unique"] == true);
    CHECK(run({"--backend", "float", "member", "--map", w, "--gamma", d}).code == 0);
    CHECK(run({"--backend", "float", "member", "--map", w, "--gamma", swap}).code == 1);
    CHECK(run({"--backend", "float", "proper", "--map", w}).code == 0);
    CHECK(run({"--backend", "float", "proper", "--map", h}).code == 1);

    CHECK(run({"norm-equal", "--map", w, "--other", w}).code == 0);
    CHECK(run({"norm-equal", "--map", w, "--other", h}).code == 1);

    const Result sp = run({"--no-timestamp", "span", "--map", w});
    CHECK(sp.json()["payload"]["rank"] == 3);
    const Result to = run({"--no-timestamp", "torus", "--map", w});
    CHECK(to.json()["payload"]["continuous_dim"] == 2);
    const std::string t3 = write_json("t3.json", io::to_json(tensor_power(2, 3)));
    const Result fg = run({"--no-timestamp", "fix-group", "--map", t3});
    CHECK(fg.json()["payload"]["finite_order"] == "3");
    const std::string pw = write_json("pw.json", io::to_json(pad(whitney_map(), 2)));
    CHECK(run({"--no-timestamp", "hf", "--map", pw}).json()["payload"]["k"] == 2);
    const std::string z3 = write("z3.json", R"({"dim": 2, "generators": [[
      [{"order": 3, "terms": [{"rad": 1, "coeffs": ["0", "1"]}]}, 0],
      [0, {"order": 3, "terms": [{"rad": 1, "coeffs": ["0", "1"]}]}]]]})");
    CHECK(run({"--no-timestamp", "phi-kernel", "--map", t3, "--group", z3}).json()["payload"]["order"] == 3);

    CHECK(run({"graded", "--map", w, "--m", "2,1"}).code == 0);
    PolyMap pattern(2, 1);
    for (int k = 1; k <= 3; ++k) pattern.add_term(MultiIndex({k, k}), {RadScalar(1)});
    const std::string pat = write_json("pattern.json", io::to_json(pattern));
    CHECK(run({"graded", "--map", pat, "--m", "1,-1"}).code == 0);
    CHECK(run({"graded", "--map", pat, "--m", "1,1"}).code == 1);

    CHECK(run({"solve-monomial", "--n", "2", "--exponents", "2,0;0,2"}).code == 1);
    CHECK(run({"solve-monomial", "--n", "2", "--exponents", "2,0;1,1;0,2"}).code == 0);
    CHECK(run({"solve-monomial", "--n", "3", "--max-degree", "3"}).code == 3);
}

TEST_CASE("usage and parse errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"proper"}).code == 2);
    CHECK(run({"--backend", "quantum", "proper", "--map", "x.json"}).code == 2);
    CHECK(run({"proper", "--map", (workdir() / "missing.json").string()}).code == 2);
    CHECK(run({"proper", "--map", write("broken.json", "{\"n\": 2,")}).code == 2);
    CHECK(run({"proper", "--map", write("wrong.json", R"({"n": 2, "N": 1, "terms": [{"alpha": [1], "coeff": [1]}]})")}).code == 2);
    CHECK(run({"solve-monomial", "--n", "2", "--exponents", "1,a"}).code == 2);
    const std::string shifted = write("shifted.json", R"({"n": 1, "N": 1, "terms": [{"alpha": [0], "coeff": ["1/2"]}, {"alpha": [1], "coeff": ["1/2"]}]})");
    CHECK(run({"hf", "--map", shifted}).code == 2);
}

TEST_CASE("reports are deterministic without the timestamp") {
    const std::string w = write_json("whitney2.json", io::to_json(whitney_map()));
    const Result a = run({"--no-timestamp", "proper", "--map", w});
    const Result b = run({"--no-timestamp", "proper", "--map", w});
    CHECK(a.out == b.out);
    CHECK_FALSE(a.json().contains("timestamp"));
    const io::Json stamped = run({"proper", "--map", w}).json();
    CHECK(stamped.contains("timestamp"));
    CHECK(stamped["version"] == io::library_version());
    CHECK(stamped["backend"]["scalar"] == "exact");
}
