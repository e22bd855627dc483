#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / "layerscatter_cli_tests";
    fs::create_directories(d);
    return d;
}();

struct Run {
    int code;
    std::string out;
    json report;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string& args, const std::string& tag) {
    const auto out = dir / (tag + ".csv"), rep = dir / (tag + ".json");
    fs::remove(out);
    fs::remove(rep);
    const std::string cmd = std::string(LAYERSCATTER_CLI) + " " + args + " --out " + out.string() +
                            " --report " + rep.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), json()};
    const auto text = slurp(rep);
    if (!text.empty()) r.report = json::parse(text);
    return r;
}

bool type_ok(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    return false;
}

// the subset of JSON Schema the report schema uses
void validate(const json& v, const json& s, const std::string& where, std::vector<std::string>& errs) {
    if (s.contains("type")) {
        bool ok = false;
        if (s["type"].is_array())
            for (const auto& t : s["type"]) ok = ok || type_ok(v, t.get<std::string>());
        else
            ok = type_ok(v, s["type"].get<std::string>());
        if (!ok) {
            errs.push_back(where + ": wrong type");
            return;
        }
    }
    if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end())
        errs.push_back(where + ": not in enum");
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
        errs.push_back(where + ": below minimum");
    if (s.contains("pattern") && v.is_string() &&
        !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>())))
        errs.push_back(where + ": pattern mismatch");
    if (v.is_object()) {
        if (s.contains("required"))
            for (const auto& k : s["required"])
                if (!v.contains(k.get<std::string>())) errs.push_back(where + ": missing " + k.get<std::string>());
        if (s.contains("properties"))
            for (auto it = v.begin(); it != v.end(); ++it)
                if (s["properties"].contains(it.key()))
                    validate(it.value(), s["properties"][it.key()], where + "." + it.key(), errs);
                else if (where == "$")
                    errs.push_back(where + ": unexpected key " + it.key());
    }
}

const json& schema() {
    static const json s = json::parse(slurp(LAYERSCATTER_SCHEMA));
    return s;
}

void check_schema(const Run& r) {
    std::vector<std::string> errs;
    validate(r.report, schema(), "$", errs);
    for (const auto& e : errs) INFO(e);
    CHECK(errs.empty());
}

std::vector<std::vector<double>> rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> out;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) row.push_back(std::stod(f));
        out.push_back(row);
    }
    return out;
}

}  // namespace

TEST_CASE("cli forward and invert") {
    const auto a = run("forward --profile paper53 --x0 0 --x1 30 --n 500", "fwd_a");
    const auto b = run("forward --profile paper53 --x0 0 --x1 30 --n 500 --threads 3", "fwd_b");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("t,d\n", 0) == 0);
    CHECK(rows(a.out).size() == 500);
    CHECK(a.report["n"] == 500);
    CHECK(a.report["status"] == "ok");
    CHECK(a.report["config_hash"] == b.report["config_hash"]);
    check_schema(a);

    const auto c = run("forward --profile const --x0 0 --x1 1 --n 20", "fwd_const");
    REQUIRE(c.code == 0);
    for (const auto& r : rows(c.out)) CHECK(r[1] == 0.0);
    CHECK(c.report["max_abs_a"] == 0.0);
    check_schema(c);

    // the exponential profile's first sample is the first reflectivity over 2 delta
    const auto e = run("forward --profile exp:0.05 --x0 0 --x1 1 --n 99", "fwd_exp");
    REQUIRE(e.code == 0);
    CHECK(rows(e.out)[0][1] == doctest::Approx(std::tanh(0.05 * 0.01) / 0.02).epsilon(1e-8));

    const auto data = (dir / "fwd_a.csv").string();
    const auto inv = run("invert --data " + data + " --x0 0 --zeta0 1 --truth paper53", "inv");
    REQUIRE(inv.code == 0);
    CHECK(inv.report["relative_l2_error"].get<double>() < 1e-10);
    CHECK(rows(inv.out).size() == 501);
    check_schema(inv);

    const auto noisy = run("invert --data " + data + " --noise 0.05 --seed 2 --truth paper53", "inv_noisy");
    const auto again = run("invert --data " + data + " --noise 0.05 --seed 2 --truth paper53", "inv_noisy2");
    CHECK(noisy.out == again.out);
    CHECK(noisy.report["config_hash"] != inv.report["config_hash"]);
}

TEST_CASE("cli exit codes") {
    const auto bad = run("forward --profile nonsense --n 10", "bad_profile");
    CHECK(bad.code == 2);
    CHECK(bad.report["error"]["kind"] == "config");
    check_schema(bad);
    CHECK(run("forward --profile const --n 0", "bad_n").code == 2);
    CHECK(run("forward --bogus-flag", "bad_flag").code == 2);
    CHECK(run("invert --data " + (dir / "nowhere.csv").string(), "bad_data").code == 2);

    // impossible data: a first coefficient beyond the disk
    std::ofstream(dir / "wild_data.csv") << "t,d\n1,3\n2,0\n3,0\n";
    const auto wild = run("invert --data " + (dir / "wild_data.csv").string(), "wild");
    CHECK(wild.code == 4);
    CHECK(wild.report["error"]["kind"] == "data-inconsistency");
    CHECK(wild.report["error"]["step"] == 1);
    check_schema(wild);

    const auto big = run("layerstrip --jumps 0.5,1 --values 1,2,1 --x0 0 --x1 2 --numeric --band 1e9", "big");
    CHECK(big.code == 5);
    check_schema(big);
}

TEST_CASE("cli identities") {
    const auto sz = run("szego --r 0.5 --delta 0.1", "szego");
    REQUIRE(sz.code == 0);
    CHECK(sz.report["rhs"].get<double>() == doctest::Approx(-std::log(0.75)));
    CHECK(sz.report["gap"].get<double>() < 1e-8);
    check_schema(sz);

    const auto tc = run("trace --profile const --x0 0 --x1 5 --n 100", "trace_const");
    REQUIRE(tc.code == 0);
    CHECK(tc.report["lhs"] == 0.0);
    CHECK(tc.report["rhs"] == 0.0);
    check_schema(tc);

    const auto ts = run("trace --jumps 0.5,1.9142135623730951 --values 1,0.5384615384615384,1.2564102564102564 --x0 0 --x1 3 --band 500 --count 100001", "trace_step");
    REQUIRE(ts.code == 0);
    CHECK(ts.report["rhs"].get<double>() == doctest::Approx(0.268653).epsilon(1e-5));
    CHECK(ts.report["gap"].get<double>() < 0.05 * 0.268653);

    const auto sp = run("spectrum --profile paper53 --x0 0 --x1 15 --n 400 --band 8 --count 101", "spectrum");
    REQUIRE(sp.code == 0);
    CHECK(rows(sp.out).size() == 101);
    check_schema(sp);

    const auto ls = run("layerstrip --jumps 0.7,1.3 --values 1,2,0.7 --x0 0 --x1 2", "strip");
    REQUIRE(ls.code == 0);
    CHECK(ls.report["layers"] == 2);
    CHECK(ls.report["complete"] == true);
    check_schema(ls);

    const auto bo = run("born --profile paper53 --x0 0 --x1 30 --n 1999", "born");
    REQUIRE(bo.code == 0);
    CHECK(bo.report["born_residual"].get<double>() == doctest::Approx(1.306).epsilon(0.03));
    check_schema(bo);

    const auto sr = run("shortrange --profile exp:0.05 --x0 0 --x1 1 --n 1000 --y 0.2,0.5 --order 4", "short");
    REQUIRE(sr.code == 0);
    const auto r = rows(sr.out);
    REQUIRE(r.size() == 2);
    CHECK(r[1][1] == doctest::Approx(std::exp(-0.05)).epsilon(1e-3));
    check_schema(sr);

    const auto ns = run("noise-sweep --profile paper53 --x0 0 --x1 30 --n 300 --seeds 4 --noise 0.05", "sweep");
    const auto ns2 = run("noise-sweep --profile paper53 --x0 0 --x1 30 --n 300 --seeds 4 --noise 0.05 --threads 1", "sweep2");
    REQUIRE(ns.code == 0);
    CHECK(ns.out == ns2.out);
    CHECK(ns.report["seeds"] == 4);
    check_schema(ns);
}
