// qdetlim — command-line front end.
//
//   qdetlim bounds    --scenario s.json [--out f] [--format json|csv] [--strict]
//   qdetlim receivers --scenario s.json [--which homodyne,kennedy,dolinar] [--mode analytic|mc|both]
//                     [--trials N] [--seed N]
//   qdetlim sweep     --scenario s.json --param detector.s_eta_excess --values 1,2,4
//   qdetlim selftest
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include "qdetlim/scenario.hpp"
#include "qdetlim/selftest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qdetlim;

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kConfig = 2;

struct Common {
    std::string scenario_path;
    std::string out_path;
    std::string format = "json";
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    bool strict = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_mc) {
    cmd->add_option("--scenario", c.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--out", c.out_path, "Output file (default: stdout)");
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--strict", c.strict, "Treat bandwidth warnings as errors");
    if (with_mc) {
        cmd->add_option("--trials", c.trials, "Monte Carlo trials (overrides the scenario)");
        cmd->add_option("--seed", c.seed, "Random seed (overrides the scenario)");
    }
}

Scenario load(const Common& c) {
    std::ifstream in(c.scenario_path);
    if (!in) throw InvalidArgument("cannot open scenario file '" + c.scenario_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Scenario s = parse_scenario(buf.str());
    if (c.trials) {
        if (*c.trials == 0) throw InvalidArgument("--trials must be >= 1");
        s.trials = static_cast<std::size_t>(*c.trials);
    }
    if (c.seed) s.seed = *c.seed;
    if (c.strict) s.tolerances.strict = true;
    return s;
}

void emit(const Common& c, const std::string& text) {
    if (c.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.out_path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + c.out_path + "'");
    out << text;
}

void report_warnings(const Diagnostics& d) {
    for (const auto& w : d.warnings()) std::cerr << "warning: " << w << '\n';
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_values(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || !std::isfinite(v)) throw InvalidArgument("--values: bad number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidArgument("--values: no values given");
    return out;
}

std::string bounds_csv(const json& b) {
    std::ostringstream out;
    out << "p10,p01_lower\r\n";
    for (const auto& p : b["np_curve"]) {
        out << csv_number(p[0].get<double>()) << ',' << csv_number(p[1].get<double>()) << "\r\n";
    }
    return out.str();
}

std::string receivers_csv(const json& receivers) {
    std::ostringstream out;
    out << "receiver,p10,p01,p_e,exponent,mc_trials,mc_p10,mc_p01,mc_se10,mc_se01\r\n";
    const auto field = [](const json& obj, const char* key) -> std::string {
        if (obj.is_null() || !obj.contains(key) || obj[key].is_null()) return "";
        return obj[key].is_number_float() ? csv_number(obj[key].get<double>()) : obj[key].dump();
    };
    for (const auto& r : receivers) {
        const json& a = r["analytic"];
        const json& m = r["mc"];
        out << csv_field(r["receiver"].get<std::string>()) << ',' << field(a, "p10") << ',' << field(a, "p01") << ','
            << field(a, "p_e") << ',' << field(a, "exponent") << ',' << field(m, "trials") << ','
            << field(m, "p10_hat") << ',' << field(m, "p01_hat") << ',' << field(m, "se10") << ','
            << field(m, "se01") << "\r\n";
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum limits of classical waveform detection with an optomechanical force sensor"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(QDETLIM_VERSION));

    Common bounds_opts, recv_opts, sweep_opts;
    auto* bounds_cmd = app.add_subcommand("bounds", "Fidelity, Bayes and Neyman-Pearson bounds");
    add_common(bounds_cmd, bounds_opts, false);

    auto* recv_cmd = app.add_subcommand("receivers", "Homodyne, Kennedy and Dolinar receiver performance");
    add_common(recv_cmd, recv_opts, true);
    std::string which = "homodyne,kennedy,dolinar";
    std::string mode = "analytic";
    recv_cmd->add_option("--which", which, "Comma-separated receivers");
    recv_cmd->add_option("--mode", mode, "analytic, mc or both")->check(CLI::IsMember({"analytic", "mc", "both"}));

    auto* sweep_cmd = app.add_subcommand("sweep", "Bounds and analytic exponents over one scenario parameter");
    add_common(sweep_cmd, sweep_opts, false);
    sweep_opts.format = "csv";
    std::string param, values;
    sweep_cmd->add_option("--param", param, "Dotted scalar path, e.g. detector.s_eta_excess")->required();
    sweep_cmd->add_option("--values", values, "Comma-separated values")->required();

    auto* self_cmd = app.add_subcommand("selftest", "Run the built-in oracle checks at reduced scale");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*self_cmd) {
            const auto results = run_selftest();
            bool ok = true;
            for (const auto& r : results) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
                ok = ok && r.pass;
            }
            return ok ? kOk : kNumerical;
        }
        if (*bounds_cmd) {
            const Scenario s = load(bounds_opts);
            Diagnostics diag;
            const json b = run_bounds(s, diag);
            report_warnings(diag);
            emit(bounds_opts, bounds_opts.format == "csv"
                                  ? bounds_csv(b)
                                  : make_run_output(s, b, json::array(), diag).dump(2) + "\n");
            return kOk;
        }
        if (*recv_cmd) {
            const Scenario s = load(recv_opts);
            Diagnostics diag;
            const json b = run_bounds(s, diag);
            const json r = run_receivers(s, split(which, ','), parse_mode(mode), diag);
            report_warnings(diag);
            emit(recv_opts, recv_opts.format == "csv" ? receivers_csv(r)
                                                      : make_run_output(s, b, r, diag).dump(2) + "\n");
            return kOk;
        }
        if (*sweep_cmd) {
            const Scenario s = load(sweep_opts);
            Diagnostics diag;
            const auto rows = run_sweep(s, param, parse_values(values), diag);
            report_warnings(diag);
            emit(sweep_opts, sweep_opts.format == "csv" ? sweep_csv(rows) : sweep_json(param, rows).dump(2) + "\n");
            return kOk;
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kConfig;
}
