#include "layerscatter/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "layerscatter/errors.hpp"

namespace layerscatter::io {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
    const auto s = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ArgumentError("cannot parse " + what + " '" + text + "'");
    return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ImpedanceProfile chirp_profile(const Interval& X, const std::string& params) {
    profiles::Chirp c;
    for (const auto& kv : split(params, ',')) {
        if (trim(kv).empty()) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ArgumentError("expected key=value in '" + kv + "'");
        const auto key = trim(kv.substr(0, eq));
        const double v = parse_double(kv.substr(eq + 1), key);
        if (key == "a")
            c.a = v;
        else if (key == "b")
            c.b = v;
        else if (key == "c")
            c.c = v;
        else if (key == "d")
            c.d = v;
        else
            throw ArgumentError("unknown chirp parameter '" + key + "'");
    }
    return ImpedanceProfile(X, c);
}

ImpedanceProfile profile_from_samples(const Interval& X, const std::vector<double>& x,
                                      const std::vector<double>& zeta) {
    if (x.size() < 2) throw ArgumentError("sampled profile needs at least 2 samples");
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - (x.front() + h * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(x[i])))
            throw ArgumentError("profile samples must be equally spaced");
    const auto p = ImpedanceProfile::from_samples(Interval(x.front(), x.back()), zeta);
    const auto& S = p.interval();
    if (X.x0 == S.x0 && X.x1 == S.x1) return p;
    return p.restricted(X);
}

ImpedanceProfile profile_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(path + ": " + e.what());
    }
    try {
        const Interval X(j.at("x0").get<double>(), j.at("x1").get<double>());
        const auto kind = j.at("kind").get<std::string>();
        const auto params = j.value("params", nlohmann::json::object());
        if (kind == "paper53" || kind == "chirp") {
            profiles::Chirp c;
            c.a = params.value("a", c.a);
            c.b = params.value("b", c.b);
            c.c = params.value("c", c.c);
            c.d = params.value("d", c.d);
            return ImpedanceProfile(X, c);
        }
        if (kind == "const") return ImpedanceProfile(X, profiles::Constant{params.value("value", 1.0)});
        if (kind == "exp") return ImpedanceProfile(X, profiles::Exponential{params.at("alpha0").get<double>()});
        if (kind == "samples") {
            const auto zeta = params.at("zeta").get<std::vector<double>>();
            return ImpedanceProfile::from_samples(X, zeta);
        }
        throw ArgumentError("unknown profile kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(path + ": " + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns) {
    if (header.size() != columns.size()) throw ArgumentError("header and columns differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ArgumentError("columns differ in length");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << format_double(columns[i][r]);
        out << '\n';
    }
}

std::vector<std::vector<double>> read_csv(std::istream& in, const std::vector<std::string>& header) {
    std::string line;
    if (!std::getline(in, line)) throw ArgumentError("empty CSV");
    auto names = split(trim(line), ',');
    for (auto& n : names) n = trim(n);
    if (names != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw ArgumentError("CSV header must be '" + want + "'");
    }
    std::vector<std::vector<double>> cols(header.size());
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split(trim(line), ',');
        if (cells.size() != header.size())
            throw ArgumentError("CSV row " + std::to_string(row) + " has the wrong number of fields");
        for (std::size_t i = 0; i < cells.size(); ++i)
            cols[i].push_back(parse_double(cells[i], header[i] + " on row " + std::to_string(row)));
    }
    return cols;
}

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path);
    return read_csv(in, header);
}

ImpedanceProfile load_profile(const std::string& spec, double x0, double x1) {
    const Interval X(x0, x1);
    if (ends_with(spec, ".json")) {
        const auto p = profile_from_json(spec);
        const auto& S = p.interval();
        return (S.x0 == x0 && S.x1 == x1) ? p : p.restricted(X);
    }
    if (ends_with(spec, ".csv")) {
        const auto cols = read_csv(spec, {"x", "zeta"});
        return profile_from_samples(X, cols[0], cols[1]);
    }
    const auto colon = spec.find(':');
    const auto kind = spec.substr(0, colon);
    const auto arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    if (kind == "paper53" || kind == "chirp") return chirp_profile(X, arg);
    if (kind == "const")
        return ImpedanceProfile(X, profiles::Constant{arg.empty() ? 1.0 : parse_double(arg, "constant")});
    if (kind == "exp") {
        if (arg.empty()) throw ArgumentError("exp profile needs a rate, as in exp:0.05");
        return ImpedanceProfile(X, profiles::Exponential{parse_double(arg, "rate")});
    }
    throw ArgumentError("unknown profile '" + spec + "'");
}

ReflectionSeries load_series(const std::string& path) {
    const auto cols = read_csv(path, {"t", "d"});
    return ReflectionSeries::from_samples(cols[0], cols[1]);
}

}  // namespace layerscatter::io
