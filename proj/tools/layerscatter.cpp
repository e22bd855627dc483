#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "layerscatter/io.hpp"
#include "layerscatter/layerscatter.hpp"

using namespace layerscatter;
using nlohmann::json;

namespace {

enum Exit { ok = 0, config_error = 2, numeric_error = 3, data_error = 4, resource_error = 5 };

struct Common {
    std::string out = "-";
    std::string report = "-";
    std::size_t threads = 0;
};

struct Options {
    std::string profile = "paper53";
    std::string data;
    std::string truth;
    double x0 = 0.0, x1 = 30.0, zeta0 = 1.0;
    std::size_t n = 2000;
    std::size_t window = 1;
    double band = 8.0;
    std::size_t count = 1000;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::size_t seeds = 20;
    std::vector<double> r;
    double delta = 0.1;
    std::vector<double> jumps, values;
    bool numeric = false;
    double threshold = 0.0;
    std::vector<double> y;
    std::size_t order = 4;
    double l1 = -1.0, l2 = -1.0;
};

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// FNV-1a over the canonical dump of the configuration
std::string config_hash(const json& cfg) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : cfg.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return hex64(h);
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {}

    std::ostream& stream() {
        if (path_ == "-") return std::cout;
        if (!file_.is_open()) {
            file_.open(path_);
            if (!file_) throw ArgumentError("cannot write " + path_);
        }
        return file_;
    }

private:
    std::string path_;
    std::ofstream file_;
};

void write_report(const std::string& path, const json& report) {
    const auto text = report.dump(2) + "\n";
    if (path == "-") {
        std::cerr << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ArgumentError("cannot write " + path);
    f << text;
}

double rel_l2(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::vector<double> linspace(double a, double b, std::size_t count) {
    if (count < 2) throw ArgumentError("omega count must be at least 2");
    std::vector<double> w(count);
    for (std::size_t i = 0; i < count; ++i)
        w[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    return w;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const auto m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

void check_n(std::size_t n) {
    if (n < 1) throw ArgumentError("n must be at least 1");
}

// reported samples of the data series, with optional noise
ReflectionSeries noisy(ReflectionSeries s, double fraction, std::uint64_t seed) {
    if (fraction <= 0.0) return s;
    s.values = add_noise(s.values, fraction, seed);
    const double scale = s.raw ? 1.0 : 2.0 * s.delta;
    for (std::size_t j = 0; j < s.a.size(); ++j) s.a[j] = scale * s.values[j];
    return s;
}

std::vector<double> truth_layers(const ImpedanceProfile& p, double x0, double delta, std::size_t n) {
    std::vector<double> t(n + 1);
    for (std::size_t j = 0; j <= n; ++j) t[j] = p(x0 + (static_cast<double>(j) + 0.5) * delta);
    return t;
}

void cmd_forward(const Options& o, Output& out, json& rep) {
    check_n(o.n);
    const auto profile = io::load_profile(o.profile, o.x0, o.x1);
    auto s = forward_scatter(profile, o.x0, o.x1, o.n, ForwardOptions{o.window});
    s = noisy(std::move(s), o.noise, o.seed);
    const auto t = s.times();
    io::write_csv(out.stream(), {"t", "d"}, {t, s.values});
    double amax = 0.0;
    for (double a : s.a) amax = std::max(amax, std::abs(a));
    rep["n"] = o.n;
    rep["delta"] = s.delta;
    rep["max_abs_a"] = amax;
}

void cmd_invert(const Options& o, Output& out, json& rep) {
    if (o.data.empty()) throw ArgumentError("invert needs --data");
    const auto s = noisy(io::load_series(o.data), o.noise, o.seed);
    rep["n"] = s.size();
    rep["delta"] = s.delta;
    const auto inv = invert_scatter(s, o.x0, o.zeta0);
    std::vector<double> mid(inv.y.size());
    for (std::size_t j = 0; j < mid.size(); ++j) mid[j] = inv.y[j] + 0.5 * inv.delta;
    io::write_csv(out.stream(), {"x", "zeta"}, {mid, inv.zeta});
    rep["moment_residual"] = inv.moment_residual;
    rep["max_abs_r"] = inv.max_abs_r;
    if (!o.truth.empty()) {
        const double x1 = o.x0 + inv.delta * static_cast<double>(s.size() + 1);
        const auto p = io::load_profile(o.truth, o.x0, x1);
        rep["relative_l2_error"] = rel_l2(inv.zeta, truth_layers(p, o.x0, inv.delta, s.size()));
    }
}

void cmd_spectrum(const Options& o, Output& out, json& rep, std::size_t threads) {
    check_n(o.n);
    const auto profile = io::load_profile(o.profile, o.x0, o.x1);
    const auto w = linspace(-o.band, o.band, o.count);
    const auto R = spectrum(standard_approximant(profile, o.n), w, threads);
    std::vector<double> re(R.size()), im(R.size());
    double rmax = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) {
        re[i] = R[i].real();
        im[i] = R[i].imag();
        rmax = std::max(rmax, std::abs(R[i]));
    }
    io::write_csv(out.stream(), {"omega", "re", "im"}, {w, re, im});
    rep["n"] = o.n;
    rep["max_abs_R"] = rmax;
}

void identity(json& rep, double lhs, double rhs) {
    rep["lhs"] = lhs;
    rep["rhs"] = rhs;
    rep["gap"] = std::abs(lhs - rhs);
}

StepMedium step_from(const Options& o) {
    if (o.values.size() != o.jumps.size() + 1)
        throw ArgumentError("--values needs one more entry than --jumps");
    return StepMedium(Interval(o.x0, o.x1), o.jumps, o.values);
}

void cmd_trace(const Options& o, Output& out, json& rep, std::size_t threads) {
    const auto w = linspace(-o.band, o.band, o.count);
    std::vector<double> g(w.size());
    if (!o.jumps.empty() || !o.values.empty()) {
        // singular trace of a step medium: Cesaro mean against the sum over interfaces
        const auto m = step_from(o);
        const auto R = spectrum(m, w, threads);
        std::vector<double> a(R.size());
        for (std::size_t i = 0; i < R.size(); ++i) {
            a[i] = std::abs(R[i]);
            g[i] = -std::log1p(-a[i] * a[i]);
        }
        double rhs = 0.0;
        for (double r : m.reflectivities()) rhs -= std::log1p(-r * r);
        rep["kind"] = "singular";
        identity(rep, singular_trace(a, o.band).value.real(), rhs);
    } else {
        check_n(o.n);
        const auto profile = io::load_profile(o.profile, o.x0, o.x1);
        const auto R = spectrum(standard_approximant(profile, o.n), w, threads);
        for (std::size_t i = 0; i < R.size(); ++i) g[i] = -std::log1p(-std::norm(R[i]));
        const auto alpha = Sampled::from([&](double x) { return alpha_of(profile, x); }, o.x0, o.x1,
                                         std::max<std::size_t>(4 * o.n, 1000));
        const auto tc = classical_trace_check(w, R, alpha);
        rep["kind"] = "classical";
        identity(rep, tc.lhs, tc.rhs);
        rep["holds"] = tc.holds;
    }
    io::write_csv(out.stream(), {"omega", "value"}, {w, g});
}

void cmd_szego(const Options& o, Output& out, json& rep) {
    const auto s = szego_sum(o.r, o.delta);
    const double period = std::numbers::pi / (2.0 * o.delta);
    const auto w = linspace(-period, period, o.count);
    const auto q = opuc_recursion(o.r);
    std::vector<double> g(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        g[i] = -std::log1p(-std::norm(opuc_reflection(q, o.delta, w[i])));
    io::write_csv(out.stream(), {"omega", "value"}, {w, g});
    identity(rep, s.lhs, s.rhs);
    rep["nodes"] = s.nodes;
}

void write_step(Output& out, const StepMedium& m) {
    std::vector<double> x{m.interval().x0};
    x.insert(x.end(), m.jumps().begin(), m.jumps().end());
    io::write_csv(out.stream(), {"x", "zeta"}, {x, m.values()});
}

void cmd_layerstrip(const Options& o, Output& out, json& rep) {
    const auto m = step_from(o);
    const double zeta0 = m.values().front();
    const auto res = o.numeric
        ? layer_strip([&](double w) { return step_reflection(m, w); }, o.x0, o.x1, zeta0, o.band,
                      NumericStripOptions{o.threshold})
        : layer_strip(m, zeta0);
    write_step(out, res.medium);
    rep["mode"] = o.numeric ? "numeric" : "exact";
    rep["complete"] = res.complete;
    rep["layers"] = res.medium.size();
    rep["residual"] = res.residual;
    rep["lambda_tolerance"] = res.lambda_tolerance;
    rep["noise_floor"] = res.noise_floor;
    if (res.medium.size() == m.size()) {
        double jump_gap = 0.0, r_gap = 0.0;
        const auto r0 = m.reflectivities(), r1 = res.medium.reflectivities();
        for (std::size_t j = 0; j < m.size(); ++j) {
            jump_gap = std::max(jump_gap, std::abs(m.jumps()[j] - res.medium.jumps()[j]));
            r_gap = std::max(r_gap, std::abs(r0[j] - r1[j]));
        }
        identity(rep, r_gap, 0.0);
        rep["max_jump_error"] = jump_gap;
    }
}

void cmd_born(const Options& o, Output& out, json& rep) {
    check_n(o.n);
    const auto profile = io::load_profile(o.profile, o.x0, o.x1);
    const auto s = forward_scatter(profile, o.x0, o.x1, o.n);
    const auto born = born_approximation(profile, o.x0, s.times());
    const auto b = born_invert(s, o.x0, o.zeta0);
    io::write_csv(out.stream(), {"x", "zeta"}, {b.y, b.zeta});
    std::vector<double> truth(b.y.size());
    for (std::size_t j = 0; j < truth.size(); ++j) truth[j] = o.zeta0 / profile(o.x0) * profile(b.y[j]);
    rep["n"] = o.n;
    rep["born_residual"] = rel_l2(born, s.values);
    rep["born_inversion_error"] = rel_l2(b.zeta, truth);
}

void cmd_shortrange(const Options& o, Output& out, json& rep) {
    check_n(o.n);
    if (o.y.empty()) throw ArgumentError("shortrange needs --y");
    const auto profile = io::load_profile(o.profile, o.x0, o.x1);
    const auto s = o.data.empty() ? forward_scatter(profile, o.x0, o.x1, o.n) : io::load_series(o.data);
    const double l1 = o.l1 >= 0.0 ? o.l1 : alpha_l1(profile);
    const double l2 = o.l2 >= 0.0 ? o.l2 : alpha_l2sq(profile);
    std::vector<double> zeta, exact;
    ShortRangeResult last;
    for (double y : o.y) {
        last = short_range_invert(s, o.x0, o.zeta0, l1, l2, y, o.order);
        zeta.push_back(last.zeta);
        exact.push_back(o.zeta0 / profile(o.x0) * profile(y));
    }
    io::write_csv(out.stream(), {"x", "zeta"}, {o.y, zeta});
    identity(rep, zeta.back(), exact.back());
    rep["gamma"] = last.gamma;
    rep["order"] = last.order;
    rep["last_term"] = last.last_term;
    rep["operator_norm"] = last.operator_norm;
}

void cmd_noise_sweep(const Options& o, Output& out, json& rep, std::size_t threads) {
    check_n(o.n);
    const auto profile = io::load_profile(o.profile, o.x0, o.x1);
    const auto s = forward_scatter(profile, o.x0, o.x1, o.n);
    const auto truth = standard_approximant(profile, o.n).layer_values();
    std::vector<NoiseTrial> trials(o.seeds);
    parallel_for(o.seeds, threads, [&](std::size_t i) {
        trials[i] = noise_trial(s, o.noise, o.seed + i, o.x0, truth.front(), truth);
    });
    std::vector<double> seed(o.seeds), err(o.seeds), aborted(o.seeds), step(o.seeds), ok;
    for (std::size_t i = 0; i < o.seeds; ++i) {
        seed[i] = static_cast<double>(trials[i].seed);
        err[i] = trials[i].aborted ? std::nan("") : trials[i].error;
        aborted[i] = trials[i].aborted ? 1.0 : 0.0;
        step[i] = static_cast<double>(trials[i].abort_step);
        if (!trials[i].aborted) ok.push_back(trials[i].error);
    }
    io::write_csv(out.stream(), {"seed", "error", "aborted", "abort_step"}, {seed, err, aborted, step});
    rep["n"] = o.n;
    rep["seeds"] = o.seeds;
    rep["aborted"] = o.seeds - ok.size();
    rep["median_error"] = ok.empty() ? json(nullptr) : json(median(ok));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forward and inverse scattering in layered media"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);
    Common common;
    common.threads = default_threads();
    Options o;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", common.out, "CSV output path, - for stdout")->capture_default_str();
        c->add_option("--report", common.report, "JSON report path, - for stderr")->capture_default_str();
        c->add_option("--threads", common.threads, "worker threads (default LAYERSCATTER_THREADS)")
            ->check(CLI::PositiveNumber);
    };
    auto add_profile = [&](CLI::App* c) {
        c->add_option("--profile", o.profile, "chirp[:c=..] (alias paper53), const[:v], exp:rate, *.csv or *.json")
            ->capture_default_str();
        c->add_option("--x0", o.x0)->capture_default_str();
        c->add_option("--x1", o.x1)->capture_default_str();
        c->add_option("--n", o.n, "number of interior jumps")->capture_default_str();
    };
    auto add_step = [&](CLI::App* c) {
        c->add_option("--jumps", o.jumps, "interface positions")->delimiter(',');
        c->add_option("--values", o.values, "impedance on each layer")->delimiter(',');
    };

    auto* fwd = app.add_subcommand("forward", "echo data from an impedance profile");
    add_common(fwd);
    add_profile(fwd);
    fwd->add_option("--window", o.window, "averaging half-width k")->check(CLI::PositiveNumber);
    fwd->add_option("--noise", o.noise, "gaussian noise as a fraction of the data RMS");
    fwd->add_option("--seed", o.seed);

    auto* inv = app.add_subcommand("invert", "impedance from echo data");
    add_common(inv);
    inv->add_option("--data", o.data, "CSV with columns t,d")->required();
    inv->add_option("--x0", o.x0)->capture_default_str();
    inv->add_option("--zeta0", o.zeta0)->capture_default_str();
    inv->add_option("--noise", o.noise);
    inv->add_option("--seed", o.seed);
    inv->add_option("--truth", o.truth, "profile to compare against");

    auto* spec = app.add_subcommand("spectrum", "reflection coefficient on a frequency band");
    add_common(spec);
    add_profile(spec);
    spec->add_option("--band", o.band, "half-width of the frequency band")->capture_default_str();
    spec->add_option("--count", o.count)->capture_default_str();

    auto* tr = app.add_subcommand("trace", "trace identities");
    add_common(tr);
    add_profile(tr);
    add_step(tr);
    tr->add_option("--band", o.band)->capture_default_str();
    tr->add_option("--count", o.count)->capture_default_str();

    auto* sz = app.add_subcommand("szego", "Szego sum for a Verblunsky list");
    add_common(sz);
    sz->add_option("--r", o.r, "reflectivities")->delimiter(',')->required();
    sz->add_option("--delta", o.delta)->capture_default_str();
    sz->add_option("--count", o.count)->capture_default_str();

    auto* ls = app.add_subcommand("layerstrip", "recover a step medium from its reflection");
    add_common(ls);
    add_step(ls);
    ls->add_option("--x0", o.x0)->capture_default_str();
    ls->add_option("--x1", o.x1)->capture_default_str();
    ls->add_flag("--numeric", o.numeric, "Cesaro means of sampled data instead of exact series");
    ls->add_option("--band", o.band, "frequency half-band L for numeric mode")->capture_default_str();
    ls->add_option("--threshold", o.threshold, "detection threshold, 0 for 10x the noise floor");

    auto* bo = app.add_subcommand("born", "Born approximation and Born inversion");
    add_common(bo);
    add_profile(bo);
    bo->add_option("--zeta0", o.zeta0)->capture_default_str();

    auto* sr = app.add_subcommand("shortrange", "short-range inversion series");
    add_common(sr);
    add_profile(sr);
    sr->add_option("--data", o.data, "CSV with columns t,d instead of forward data");
    sr->add_option("--zeta0", o.zeta0)->capture_default_str();
    sr->add_option("--y", o.y, "evaluation points")->delimiter(',')->required();
    sr->add_option("--order", o.order)->capture_default_str();
    sr->add_option("--l1", o.l1, "int |alpha|, computed from the profile if omitted");
    sr->add_option("--l2", o.l2, "int alpha^2, computed from the profile if omitted");

    auto* ns = app.add_subcommand("noise-sweep", "reconstruction error over noise seeds");
    add_common(ns);
    add_profile(ns);
    ns->add_option("--noise", o.noise)->capture_default_str();
    ns->add_option("--seed", o.seed, "first seed")->capture_default_str();
    ns->add_option("--seeds", o.seeds)->capture_default_str();
    o.noise = 0.0;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : config_error;
    }
    auto* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "noise-sweep" && cmd->count("--noise") == 0) o.noise = 0.25;
    if (name == "noise-sweep" && cmd->count("--seed") == 0) o.seed = 1;

    json cfg;
    for (const auto* opt : cmd->get_options()) {
        const auto key = opt->get_name(false, true);
        if (key.empty() || key == "--help" || key == "--out" || key == "--report" || key == "--threads")
            continue;
        if (opt->get_type_size() == 0) {
            cfg[key.substr(2)] = opt->count() > 0;
            continue;
        }
        const auto res = opt->count() > 0 ? opt->reduced_results()
                                          : std::vector<std::string>{opt->get_default_str()};
        if (res.empty() || res.front().empty()) continue;
        cfg[key.substr(2)] = res.size() == 1 ? json(res.front()) : json(res);
    }
    json rep;
    rep["version"] = version;
    rep["subcommand"] = name;
    rep["config"] = cfg;
    rep["config_hash"] = config_hash(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    int code = ok;
    try {
        Output out(common.out);
        const std::size_t threads = std::max<std::size_t>(1, common.threads);
        if (name == "forward")
            cmd_forward(o, out, rep);
        else if (name == "invert")
            cmd_invert(o, out, rep);
        else if (name == "spectrum")
            cmd_spectrum(o, out, rep, threads);
        else if (name == "trace")
            cmd_trace(o, out, rep, threads);
        else if (name == "szego")
            cmd_szego(o, out, rep);
        else if (name == "layerstrip")
            cmd_layerstrip(o, out, rep);
        else if (name == "born")
            cmd_born(o, out, rep);
        else if (name == "shortrange")
            cmd_shortrange(o, out, rep);
        else
            cmd_noise_sweep(o, out, rep, threads);
    } catch (const DataInconsistencyError& e) {
        rep["error"] = {{"kind", "data-inconsistency"}, {"message", e.what()}, {"step", e.step()}};
        code = data_error;
    } catch (const NumericError& e) {
        rep["error"] = {{"kind", "numeric"}, {"message", e.what()}, {"achieved", e.achieved()}};
        code = numeric_error;
    } catch (const NotInvertibleError& e) {
        rep["error"] = {{"kind", "numeric"}, {"message", e.what()}};
        code = numeric_error;
    } catch (const ResourceError& e) {
        rep["error"] = {{"kind", "resource"}, {"message", e.what()}};
        code = resource_error;
    } catch (const Error& e) {
        rep["error"] = {{"kind", "config"}, {"message", e.what()}};
        code = config_error;
    }
    rep["status"] = code == ok ? "ok" : "error";
    rep["exit_code"] = code;
    rep["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        write_report(common.report, rep);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return config_error;
    }
    return code;
}
