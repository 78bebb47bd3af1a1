// scenario.hpp — JSON scenarios and the bounds / receivers / sweep runs
// driven by them. Used by the command-line tool.

#pragma once

#include "qdetlim/bounds.hpp"
#include "qdetlim/errors.hpp"
#include "qdetlim/optomech.hpp"
#include "qdetlim/options.hpp"
#include "qdetlim/receivers.hpp"
#include "qdetlim/spectral.hpp"
#include "qdetlim/waveform.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace qdetlim {

using json = nlohmann::ordered_json;

inline constexpr int kScenarioSchemaVersion = 1;

struct Scenario {
    OptomechDetector detector;
    Signal waveform = DeterministicWaveform{Sinusoid{0.02, 1.0, 0.0}};
    TimeGrid grid{0.0, 400.0 * std::numbers::pi, 8192};
    double p0 = 0.5;
    bool qnc = true;
    std::uint64_t seed = 0;
    std::size_t trials = 10000;
    std::optional<double> lambda;  // LLR threshold; Bayes ln(P0/P1) when absent
    NumericOptions tolerances;

    bool deterministic() const { return std::holds_alternative<DeterministicWaveform>(waveform); }
    Backaction backaction() const { return qnc ? Backaction::cancelled : Backaction::present; }
    double threshold() const { return lambda ? *lambda : bayes_threshold(p0); }
};

// ------------------------------------------------------------------ parsing

namespace detail {

class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail("", "expected an object");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw InvalidArgument(field(key) + ": " + what);
    }
    std::string field(const std::string& key) const {
        if (key.empty()) return path_.empty() ? "scenario" : path_;
        return path_.empty() ? key : path_ + "." + key;
    }

    bool has(const std::string& key) const { return obj_.contains(key); }
    const json& at(const std::string& key) const {
        seen_.insert(key);
        if (!obj_.contains(key)) fail(key, "required field missing");
        return obj_.at(key);
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            fail(key, "required field missing");
        }
        const json& v = at(key);
        if (!v.is_number()) fail(key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }
    std::uint64_t integer(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            fail(key, "required field missing");
        }
        const json& v = at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail(key, "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }
    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_boolean()) fail(key, "expected true or false");
        return v.get<bool>();
    }
    std::string string(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    void reject_unknown() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) fail(it.key(), "unknown field");
        }
    }

private:
    const json& obj_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

// Runs check(); rethrows InvalidArgument prefixed by the field path.
template <class F>
void checked(const std::string& path, F&& check) {
    try {
        check();
    } catch (const ReceiverUnavailable&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

inline OptomechDetector parse_detector(const json& j) {
    const Reader r(j, "detector");
    OptomechDetector d;
    d.gamma = r.number("gamma", d.gamma);
    d.omega0 = r.number("omega0", d.omega0);
    d.cav_length = r.number("cav_length", d.cav_length);
    d.mass = r.number("mass", d.mass);
    d.omega_m = r.number("omega_m", d.omega_m);
    d.gamma_m = r.number("gamma_m", d.gamma_m);
    d.hbar = r.number("hbar", d.hbar);
    d.s_eta_excess = r.number("s_eta_excess", d.s_eta_excess);
    if (r.has("mean_field")) {
        const json& a = r.at("mean_field");
        if (a.is_number()) {
            d.mean_field = a.get<double>();
        } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
            d.mean_field = {a[0].get<double>(), a[1].get<double>()};
        } else {
            r.fail("mean_field", "expected a number or [re, im]");
        }
    }
    r.reject_unknown();
    checked("detector", [&] { d.validate(); });
    return d;
}

inline TimeGrid parse_grid(const json& j) {
    const Reader r(j, "grid");
    const double t_i = r.number("t_i");
    const double t_f = r.number("t_f");
    const std::uint64_t n = r.integer("n");
    r.reject_unknown();
    if (n > (1u << 26)) r.fail("n", "too large");
    std::optional<TimeGrid> g;
    checked("grid", [&] { g.emplace(t_i, t_f, static_cast<std::size_t>(n)); });
    return *g;
}

inline Signal parse_waveform(const json& j, const TimeGrid& grid) {
    const Reader r(j, "waveform");
    const std::string kind = r.string("kind");
    Signal out;
    if (kind == "sinusoid") {
        out = DeterministicWaveform{Sinusoid{r.number("amplitude"), r.number("omega"), r.number("phase", 0.0)}};
    } else if (kind == "gaussian_pulse") {
        out = DeterministicWaveform{GaussianPulse{r.number("area"), r.number("center"), r.number("width")}};
    } else if (kind == "sampled") {
        const json& v = r.at("values");
        if (!v.is_array()) r.fail("values", "expected an array of numbers");
        if (v.size() != grid.n()) r.fail("values", "length must equal grid.n");
        RealSeries s(grid);
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!v[k].is_number()) r.fail("values", "expected an array of numbers");
            s.values[k] = v[k].get<double>();
        }
        out = DeterministicWaveform{Sampled{std::move(s)}};
    } else if (kind == "lorentzian") {
        out = StochasticPrior{Lorentzian{r.number("s0"), r.number("omega_c")}};
    } else if (kind == "flat_band") {
        out = StochasticPrior{FlatBand{r.number("s0"), r.number("omega_lo", 0.0), r.number("omega_hi")}};
    } else {
        r.fail("kind", "unknown waveform kind '" + kind +
                           "' (sinusoid, gaussian_pulse, sampled, lorentzian, flat_band)");
    }
    r.reject_unknown();
    checked("waveform", [&] {
        if (const auto* w = std::get_if<DeterministicWaveform>(&out)) {
            validate(*w);
        } else {
            validate(std::get<StochasticPrior>(out), grid);
        }
    });
    return out;
}

inline NumericOptions parse_tolerances(const json& j) {
    const Reader r(j, "tolerances");
    NumericOptions o;
    o.strict = r.boolean("strict", o.strict);
    o.tail_fraction = r.number("tail_fraction", o.tail_fraction);
    o.tail_ratio = r.number("tail_ratio", o.tail_ratio);
    o.symmetry_tol = r.number("symmetry_tol", o.symmetry_tol);
    o.psd_tol = r.number("psd_tol", o.psd_tol);
    o.kennedy_path_tol = r.number("kennedy_path_tol", o.kennedy_path_tol);
    o.warmup_decay_times = r.number("warmup_decay_times", o.warmup_decay_times);
    o.chernoff_s_tol = r.number("chernoff_s_tol", o.chernoff_s_tol);
    o.chernoff_prescan = static_cast<int>(r.integer("chernoff_prescan", static_cast<std::uint64_t>(o.chernoff_prescan)));
    r.reject_unknown();
    if (!(o.tail_fraction > 0.0 && o.tail_fraction <= 0.5)) r.fail("tail_fraction", "must lie in (0, 0.5]");
    for (auto [name, v] : {std::pair{"tail_ratio", o.tail_ratio}, {"symmetry_tol", o.symmetry_tol},
                           {"psd_tol", o.psd_tol}, {"kennedy_path_tol", o.kennedy_path_tol},
                           {"chernoff_s_tol", o.chernoff_s_tol}}) {
        if (!(v > 0.0)) r.fail(name, "must be > 0");
    }
    if (!(o.warmup_decay_times >= 0.0)) r.fail("warmup_decay_times", "must be >= 0");
    if (o.chernoff_prescan < 3 || o.chernoff_prescan > 1000000) r.fail("chernoff_prescan", "must lie in [3, 1e6]");
    return o;
}

}  // namespace detail

inline Scenario parse_scenario(const json& j) {
    const detail::Reader r(j, "");
    const std::uint64_t version = r.integer("schema_version");
    if (version != kScenarioSchemaVersion) {
        r.fail("schema_version", "unsupported version " + std::to_string(version));
    }
    Scenario s;
    s.grid = detail::parse_grid(r.at("grid"));
    s.detector = r.has("detector") ? detail::parse_detector(r.at("detector")) : OptomechDetector::natural_units();
    s.waveform = detail::parse_waveform(r.at("waveform"), s.grid);
    if (r.has("priors")) {
        const detail::Reader pr(r.at("priors"), "priors");
        s.p0 = pr.number("p0", 0.5);
        pr.reject_unknown();
        if (!(s.p0 > 0.0 && s.p0 < 1.0)) pr.fail("p0", "must lie in (0, 1)");
    }
    s.qnc = r.boolean("qnc", true);
    s.seed = r.integer("seed", 0);
    s.trials = static_cast<std::size_t>(r.integer("trials", 10000));
    if (s.trials == 0) r.fail("trials", "must be >= 1");
    if (r.has("lambda") && !r.at("lambda").is_null()) s.lambda = r.number("lambda");
    if (r.has("tolerances")) s.tolerances = detail::parse_tolerances(r.at("tolerances"));
    r.reject_unknown();
    return s;
}

inline Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("scenario is not valid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

// Full normalized form: every default made explicit. parse(to_json(s)) == s.
inline json to_json(const Scenario& s) {
    json j;
    j["schema_version"] = kScenarioSchemaVersion;
    const auto& d = s.detector;
    j["detector"] = {{"gamma", d.gamma},     {"omega0", d.omega0},
                     {"cav_length", d.cav_length},
                     {"mean_field", json::array({d.mean_field.real(), d.mean_field.imag()})},
                     {"mass", d.mass},       {"omega_m", d.omega_m},
                     {"gamma_m", d.gamma_m}, {"hbar", d.hbar},
                     {"s_eta_excess", d.s_eta_excess}};
    json w;
    if (const auto* det = std::get_if<DeterministicWaveform>(&s.waveform)) {
        if (const auto* x = std::get_if<Sinusoid>(det)) {
            w = {{"kind", "sinusoid"}, {"amplitude", x->amplitude}, {"omega", x->omega}, {"phase", x->phase}};
        } else if (const auto* p = std::get_if<GaussianPulse>(det)) {
            w = {{"kind", "gaussian_pulse"}, {"area", p->area}, {"center", p->center}, {"width", p->width}};
        } else {
            w = {{"kind", "sampled"}, {"values", std::get<Sampled>(*det).series.values}};
        }
    } else {
        const auto& prior = std::get<StochasticPrior>(s.waveform);
        if (const auto* l = std::get_if<Lorentzian>(&prior)) {
            w = {{"kind", "lorentzian"}, {"s0", l->s0}, {"omega_c", l->omega_c}};
        } else {
            const auto& f = std::get<FlatBand>(prior);
            w = {{"kind", "flat_band"}, {"s0", f.s0}, {"omega_lo", f.omega_lo}, {"omega_hi", f.omega_hi}};
        }
    }
    j["waveform"] = w;
    j["grid"] = {{"t_i", s.grid.t_i()}, {"t_f", s.grid.t_f()}, {"n", s.grid.n()}};
    j["priors"] = {{"p0", s.p0}};
    j["qnc"] = s.qnc;
    j["seed"] = s.seed;
    j["trials"] = s.trials;
    j["lambda"] = s.lambda ? json(*s.lambda) : json(nullptr);
    const auto& o = s.tolerances;
    j["tolerances"] = {{"strict", o.strict},
                       {"tail_fraction", o.tail_fraction},
                       {"tail_ratio", o.tail_ratio},
                       {"symmetry_tol", o.symmetry_tol},
                       {"psd_tol", o.psd_tol},
                       {"kennedy_path_tol", o.kennedy_path_tol},
                       {"warmup_decay_times", o.warmup_decay_times},
                       {"chernoff_s_tol", o.chernoff_s_tol},
                       {"chernoff_prescan", o.chernoff_prescan}};
    return j;
}

// ------------------------------------------------------------------- runs

enum class RunMode { analytic, mc, both };

inline RunMode parse_mode(const std::string& m) {
    if (m == "analytic") return RunMode::analytic;
    if (m == "mc") return RunMode::mc;
    if (m == "both") return RunMode::both;
    throw InvalidArgument("mode must be analytic, mc or both (got '" + m + "')");
}

inline const std::vector<std::string>& all_receivers() {
    static const std::vector<std::string> names{"homodyne", "kennedy", "dolinar"};
    return names;
}

// Fidelity for the scenario: frequency-domain for a known waveform, the
// circulant Gaussian average for a prior (the two coincide on the grid).
inline Fidelity scenario_fidelity(const Scenario& s, Diagnostics* diag) {
    if (const auto* w = std::get_if<DeterministicWaveform>(&s.waveform)) {
        return fidelity_optomech(s.detector, forward_transform(render(*w, s.grid)), s.tolerances, diag);
    }
    return gamma_f_stochastic(s.detector, std::get<StochasticPrior>(s.waveform), s.grid, s.tolerances, diag).fidelity;
}

namespace detail {

inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

inline json bounds_json(const BoundsReport& b) {
    json curve = json::array();
    for (const auto& p : b.np_curve) curve.push_back(json::array({num(p.p10), num(p.p01_lower)}));
    return {{"fidelity", num(b.fidelity.value())},
            {"log_fidelity", num(b.fidelity.log())},
            {"gamma_f", num(b.gamma_f)},
            {"p0", b.p0},
            {"bayes_bound", num(b.bayes_bound)},
            {"np_curve", curve}};
}

inline json analytic_json(const ReceiverResult& r) {
    return {{"p10", opt(r.p10)}, {"p01", opt(r.p01)}, {"p_e", opt(r.p_e)}, {"exponent", opt(r.exponent)}};
}

inline json mc_json(const ReceiverResult& r) {
    const auto& m = *r.mc;
    return {{"trials", m.trials},   {"p10_hat", num(m.p10_hat)}, {"p01_hat", num(m.p01_hat)},
            {"se10", num(m.se10)}, {"se01", num(m.se01)},       {"p_e_hat", opt(r.p_e)},
            {"warnings", m.warnings}};
}

// (mc - analytic) in units of the binomial SE at the analytic value.
inline json delta_json(const ReceiverResult& a, const ReceiverResult& m) {
    if (!a.p10 || !a.p01) return nullptr;
    const auto delta = [&](double pa, double pm) -> std::optional<double> {
        const double se = binomial_se(pa, m.mc->trials);
        if (se == 0.0) return pm == pa ? std::optional<double>(0.0) : std::nullopt;
        return (pm - pa) / se;
    };
    const auto d10 = delta(*a.p10, m.mc->p10_hat);
    const auto d01 = delta(*a.p01, m.mc->p01_hat);
    const bool ok = d10 && d01 && std::abs(*d10) <= 3.0 && std::abs(*d01) <= 3.0;
    return {{"p10", opt(d10)}, {"p01", opt(d01)}, {"within_3se", ok}};
}

}  // namespace detail

struct Analytic {
    std::optional<ReceiverResult> homodyne;
    std::optional<ReceiverResult> kennedy;
    ReceiverResult dolinar;
};

// Closed-form receiver results for the scenario.
inline Analytic analytic_receivers(const Scenario& s, Fidelity f, Diagnostics* diag) {
    Analytic a;
    const double T = s.grid.duration();
    a.dolinar = dolinar_analytic(f.value(), s.p0);
    if (!s.qnc) return a;
    if (const auto* w = std::get_if<DeterministicWaveform>(&s.waveform)) {
        const RealSeries x = render(*w, s.grid);
        const Spectrum xs = forward_transform(x);
        a.homodyne = homodyne_analytic(s.detector, xs, s.backaction(), s.threshold(), s.p0, s.tolerances, diag);
        a.kennedy = kennedy_analytic(kennedy_p01_deterministic(s.detector, x, s.backaction(), s.tolerances, diag),
                                     s.p0, T);
    } else {
        const auto& prior = std::get<StochasticPrior>(s.waveform);
        ReceiverResult h;
        h.receiver = "homodyne";
        h.p0 = s.p0;
        h.exponent = chernoff_exponent_stochastic(s.detector, prior, s.grid, s.backaction(), s.tolerances, diag).gamma;
        a.homodyne = h;
        a.kennedy = kennedy_analytic(
            kennedy_p01_stochastic(s.detector, prior, s.grid, s.backaction(), 0, s.seed, 0, s.tolerances, diag), s.p0,
            T);
    }
    return a;
}

inline json run_bounds(const Scenario& s, Diagnostics& diag) {
    const Fidelity f = scenario_fidelity(s, &diag);
    return detail::bounds_json(make_bounds_report(f, s.p0, s.grid.duration()));
}

inline json run_receivers(const Scenario& s, const std::vector<std::string>& which, RunMode mode,
                          Diagnostics& diag) {
    for (const auto& name : which) {
        if (std::find(all_receivers().begin(), all_receivers().end(), name) == all_receivers().end()) {
            throw InvalidArgument("unknown receiver '" + name + "' (homodyne, kennedy, dolinar)");
        }
        if (!s.qnc && name != "dolinar") {
            throw ReceiverUnavailable("receiver '" + name +
                                      "' needs quantum-noise cancellation; set \"qnc\": true in the scenario");
        }
    }
    const Fidelity f = scenario_fidelity(s, &diag);
    const bool want_analytic = mode != RunMode::mc;
    const bool want_mc = mode != RunMode::analytic;
    const Analytic a = analytic_receivers(s, f, &diag);

    json out = json::array();
    for (const auto& name : all_receivers()) {
        if (std::find(which.begin(), which.end(), name) == which.end()) continue;
        json entry;
        entry["receiver"] = name;
        entry["p0"] = s.p0;
        std::optional<ReceiverResult> an;
        std::optional<ReceiverResult> mc;
        if (name == "dolinar") {
            an = a.dolinar;
            entry["note"] = s.deterministic() ? "achieves the Bayes bound"
                                              : "Bayes bound; a lower bound for a stochastic waveform";
        } else {
            an = name == "homodyne" ? a.homodyne : a.kennedy;
            if (want_mc) {
                mc = name == "homodyne"
                         ? simulate_homodyne_mc(s.detector, s.waveform, s.grid, s.backaction(), s.trials,
                                                s.threshold(), s.seed, 0, s.p0)
                         : simulate_kennedy_mc(s.detector, s.waveform, s.grid, s.backaction(), s.trials, s.seed, 0,
                                               s.p0, s.tolerances);
            }
        }
        entry["analytic"] = (want_analytic || name == "dolinar") && an ? detail::analytic_json(*an) : json(nullptr);
        entry["mc"] = mc ? detail::mc_json(*mc) : json(nullptr);
        entry["delta_se"] = (mode == RunMode::both && an && mc) ? detail::delta_json(*an, *mc) : json(nullptr);
        out.push_back(entry);
    }
    return out;
}

inline std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(epoch, &end, 10);
        if (end != epoch) t = static_cast<std::time_t>(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

#ifndef QDETLIM_VERSION
#define QDETLIM_VERSION "0.0.0"
#endif

// RunOutput: {payload: {scenario, bounds, receivers, warnings}, provenance}.
// The payload depends only on the scenario.
inline json make_run_output(const Scenario& s, const json& bounds, const json& receivers,
                            const Diagnostics& diag) {
    json payload;
    payload["scenario"] = to_json(s);
    payload["bounds"] = bounds;
    payload["receivers"] = receivers;
    payload["warnings"] = diag.warnings();
    json out;
    out["payload"] = std::move(payload);
    out["provenance"] = {{"tool", "qdetlim"}, {"version", QDETLIM_VERSION}, {"seed", s.seed},
                         {"timestamp", iso_timestamp()}};
    return out;
}

// -------------------------------------------------------------------- sweep

struct SweepRow {
    double value;
    Fidelity fidelity;
    double gamma_f;
    double bayes_bound;
    std::optional<double> gamma_hom, gamma_ken, hom_p10, hom_p01, ken_p01;
    double dolinar_pe;
};

// Replaces the scalar at a dotted path (e.g. "detector.s_eta_excess").
inline Scenario with_parameter(const Scenario& s, const std::string& path, double value) {
    json j = to_json(s);
    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty() || !node->is_object() || !node->contains(key)) {
            throw InvalidArgument("sweep: unknown parameter path '" + path + "'");
        }
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (!node->is_number()) throw InvalidArgument("sweep: '" + path + "' is not a scalar number");
    if (node->is_number_integer() || node->is_number_unsigned()) {
        if (value < 0.0 || value != std::floor(value)) {
            throw InvalidArgument("sweep: '" + path + "' needs non-negative integer values");
        }
        *node = static_cast<std::uint64_t>(value);
    } else {
        *node = value;
    }
    return parse_scenario(j);
}

inline std::vector<SweepRow> run_sweep(const Scenario& base, const std::string& path,
                                       const std::vector<double>& values, Diagnostics& diag) {
    if (values.empty()) throw InvalidArgument("sweep: no values given");
    std::vector<SweepRow> rows;
    for (double v : values) {
        const Scenario s = with_parameter(base, path, v);
        const double T = s.grid.duration();
        const Fidelity f = scenario_fidelity(s, &diag);
        SweepRow row{v, f, f.exponent() / T, helstrom_bayes_bound(f.value(), s.p0), {}, {}, {}, {}, {}, 0.0};
        const Analytic a = analytic_receivers(s, f, &diag);
        row.dolinar_pe = *a.dolinar.p_e;
        if (a.homodyne) {
            row.gamma_hom = a.homodyne->exponent;
            row.hom_p10 = a.homodyne->p10;
            row.hom_p01 = a.homodyne->p01;
        }
        if (a.kennedy) {
            row.gamma_ken = a.kennedy->exponent;
            row.ken_p01 = a.kennedy->p01;
        }
        rows.push_back(row);
    }
    return rows;
}

// RFC 4180 field: quoted when it contains a separator, quote or line break.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_number(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_number(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

inline const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols{"value",        "fidelity",  "log_fidelity", "gamma_f",
                                               "gamma_hom",    "gamma_ken", "bayes_bound",  "homodyne_p10",
                                               "homodyne_p01", "kennedy_p01", "dolinar_pe"};
    return cols;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    const auto& cols = sweep_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << csv_field(cols[c]);
    out << "\r\n";
    for (const auto& r : rows) {
        const std::vector<std::string> f{csv_number(r.value),       csv_number(r.fidelity.value()),
                                         csv_number(r.fidelity.log()), csv_number(r.gamma_f),
                                         csv_number(r.gamma_hom),   csv_number(r.gamma_ken),
                                         csv_number(r.bayes_bound), csv_number(r.hom_p10),
                                         csv_number(r.hom_p01),     csv_number(r.ken_p01),
                                         csv_number(r.dolinar_pe)};
        for (std::size_t c = 0; c < f.size(); ++c) out << (c ? "," : "") << csv_field(f[c]);
        out << "\r\n";
    }
    return out.str();
}

inline json sweep_json(const std::string& path, const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"value", r.value},
                       {"fidelity", detail::num(r.fidelity.value())},
                       {"log_fidelity", detail::num(r.fidelity.log())},
                       {"gamma_f", detail::num(r.gamma_f)},
                       {"gamma_hom", detail::opt(r.gamma_hom)},
                       {"gamma_ken", detail::opt(r.gamma_ken)},
                       {"bayes_bound", detail::num(r.bayes_bound)},
                       {"homodyne_p10", detail::opt(r.hom_p10)},
                       {"homodyne_p01", detail::opt(r.hom_p01)},
                       {"kennedy_p01", detail::opt(r.ken_p01)},
                       {"dolinar_pe", detail::num(r.dolinar_pe)}});
    }
    return {{"parameter", path}, {"rows", arr}};
}

}  // namespace qdetlim
