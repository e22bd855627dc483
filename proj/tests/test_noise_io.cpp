#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "layerscatter/io.hpp"
#include "layerscatter/layerscatter.hpp"

using namespace layerscatter;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "layerscatter_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("counter normal") {
    const CounterNormal g(7);
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    const int N = 400000;
    for (int i = 0; i < N; ++i) {
        const double x = g(i);
        s += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    CHECK(std::abs(s / N) < 5.0 / std::sqrt(N));
    CHECK(std::abs(s2 / N - 1.0) < 0.01);
    CHECK(std::abs(s4 / N - 3.0) < 0.05);
    // correlation between neighbours and across seeds
    const CounterNormal h(8);
    double c1 = 0.0, c2 = 0.0;
    for (int i = 0; i + 1 < N; ++i) {
        c1 += g(i) * g(i + 1);
        c2 += g(i) * h(i);
    }
    CHECK(std::abs(c1 / N) < 0.01);
    CHECK(std::abs(c2 / N) < 0.01);
    CHECK(g(12345) == CounterNormal(7)(12345));
}

TEST_CASE("add noise") {
    std::vector<double> v(5000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.01 * i);
    const auto a = add_noise(v, 0.25, 3), b = add_noise(v, 0.25, 3), c = add_noise(v, 0.25, 4);
    CHECK(a == b);
    CHECK(a != c);
    double ss = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        ss += (a[i] - v[i]) * (a[i] - v[i]);
        sv += v[i] * v[i];
    }
    CHECK(std::sqrt(ss / sv) == doctest::Approx(0.25).epsilon(0.05));
    CHECK(add_noise(v, 0.0, 3) == v);
    CHECK(add_noise(std::vector<double>{}, 0.3, 1).empty());
}

TEST_CASE("format and csv") {
    CHECK(io::format_double(0.0) == "0");
    CHECK(io::format_double(-0.0) == "0");
    CHECK(io::format_double(0.5) == "0.5");
    for (double v : {0.1, 1.0 / 3.0, -2.718281828459045e-300, 6.02214076e23})
        CHECK(std::stod(io::format_double(v)) == v);

    const std::vector<double> x{0.1, 0.2, 1.0 / 3.0}, y{-1.0, 0.0, 1e-17};
    std::stringstream ss;
    io::write_csv(ss, {"t", "d"}, {x, y});
    CHECK(ss.str().rfind("t,d\n", 0) == 0);
    const auto cols = io::read_csv(ss, {"t", "d"});
    CHECK(cols[0] == x);
    CHECK(cols[1] == y);

    std::stringstream bad("x,zeta\n1,2\n");
    CHECK_THROWS_AS(io::read_csv(bad, {"t", "d"}), ArgumentError);
    std::stringstream short_row("t,d\n1,2\n3\n");
    CHECK_THROWS_AS(io::read_csv(short_row, {"t", "d"}), ArgumentError);
    std::stringstream junk("t,d\n1,abc\n");
    CHECK_THROWS_AS(io::read_csv(junk, {"t", "d"}), ArgumentError);
    std::stringstream empty;
    CHECK_THROWS_AS(io::read_csv(empty, {"t", "d"}), ArgumentError);
    std::stringstream out;
    CHECK_THROWS_AS(io::write_csv(out, {"a"}, {x, y}), ArgumentError);
    CHECK_THROWS_AS(io::read_csv(scratch("missing.csv").string(), {"t", "d"}), ArgumentError);
}

TEST_CASE("profile specs") {
    const auto c = io::load_profile("paper53", 0.0, 30.0);
    const ImpedanceProfile ref(Interval(0.0, 30.0), profiles::Chirp{});
    for (double x : {1.0, 7.3, 12.0, 29.0}) CHECK(c(x) == ref(x));
    const auto weak = io::load_profile("paper53:c=0.01,d=0.3", 0.0, 30.0);
    profiles::Chirp k;
    k.c = 0.01;
    k.d = 0.3;
    CHECK(weak(9.0) == ImpedanceProfile(Interval(0.0, 30.0), k)(9.0));
    CHECK(io::load_profile("chirp:c=0.01,d=0.3", 0.0, 30.0)(9.0) == weak(9.0));
    CHECK(io::load_profile("const", 0.0, 1.0)(0.5) == 1.0);
    CHECK(io::load_profile("const:2.5", 0.0, 1.0)(0.5) == 2.5);
    CHECK(io::load_profile("exp:0.05", 0.0, 1.0)(1.0) == doctest::Approx(std::exp(-0.1)));
    CHECK_THROWS_AS(io::load_profile("exp", 0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(io::load_profile("wave", 0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(io::load_profile("paper53:q=1", 0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(io::load_profile("const:abc", 0.0, 1.0), ArgumentError);

    const auto csv = scratch("profile.csv");
    write_file(csv, "x,zeta\n0,1\n0.5,2\n1,4\n");
    const auto p = io::load_profile(csv.string(), 0.0, 1.0);
    CHECK(p(0.5) == doctest::Approx(2.0));
    CHECK(p(0.25) == doctest::Approx(std::sqrt(2.0)));  // log-linear between samples
    CHECK(io::load_profile(csv.string(), 0.25, 0.75).interval().x1 == 0.75);
    write_file(csv, "x,zeta\n0,1\n0.4,2\n1,4\n");
    CHECK_THROWS_AS(io::load_profile(csv.string(), 0.0, 1.0), ArgumentError);

    const auto js = scratch("profile.json");
    write_file(js, R"({"kind": "exp", "params": {"alpha0": 0.2}, "x0": 0, "x1": 2})");
    CHECK(io::load_profile(js.string(), 0.0, 2.0)(1.0) == doctest::Approx(std::exp(-0.4)));
    write_file(js, R"({"kind": "samples", "params": {"zeta": [1, 2, 4]}, "x0": 0, "x1": 1})");
    CHECK(io::load_profile(js.string(), 0.0, 1.0)(0.5) == doctest::Approx(2.0));
    write_file(js, R"({"kind": "paper53", "params": {"c": 0.02}, "x0": 0, "x1": 30})");
    CHECK(io::load_profile(js.string(), 0.0, 15.0).interval().x1 == 15.0);
    write_file(js, R"({"kind": "spline", "x0": 0, "x1": 1})");
    CHECK_THROWS_AS(io::load_profile(js.string(), 0.0, 1.0), ArgumentError);
    write_file(js, R"({"kind": "exp", "x0": 0, "x1": 1})");
    CHECK_THROWS_AS(io::load_profile(js.string(), 0.0, 1.0), ArgumentError);
    write_file(js, "{not json");
    CHECK_THROWS_AS(io::load_profile(js.string(), 0.0, 1.0), ArgumentError);
}

TEST_CASE("series files") {
    const auto f = scratch("series.csv");
    write_file(f, "t,d\n0.5,0.1\n1,0.2\n1.5,-0.1\n");
    const auto s = io::load_series(f.string());
    CHECK(s.size() == 3);
    CHECK(s.delta == doctest::Approx(0.25));
    CHECK(s.a[1] == doctest::Approx(0.5 * 0.2));
    write_file(f, "t,d\n0.5,0.1\n1.2,0.2\n");
    CHECK_THROWS_AS(io::load_series(f.string()), ArgumentError);
}
