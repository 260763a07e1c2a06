#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "qsusy/families.hpp"
#include "qsusy/models.hpp"
#include "qsusy/parse.hpp"
#include "qsusy/report.hpp"
#include "qsusy/spectral.hpp"
#include "qsusy/suite.hpp"

using namespace qsusy;

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::optional<double> tol;
    std::string json_path;
    std::string md_path;
    std::string bind;
    std::string format = "json";
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

Binding parse_bind(const std::string& text) {
    Binding b;
    for (const auto& kv : split(text, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("binding '" + kv + "' is not key=value");
        try {
            std::size_t used = 0;
            const std::string value = kv.substr(eq + 1);
            b.params[kv.substr(0, eq)] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::logic_error&) {
            throw ConfigError("binding '" + kv + "' has no numeric value");
        }
    }
    return b;
}

void add_common(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--tol", c.tol, "residual tolerance of sampled checks");
    app->add_option("--json", c.json_path, "write the JSON report here");
    app->add_option("--md", c.md_path, "write the markdown report here");
    app->add_option("--bind", c.bind, "parameter values k=v,...");
    app->add_option("--format", c.format, "stdout format when no report path is given")
        ->check(CLI::IsMember({"json", "markdown"}));
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

int emit(const Report& r, const Common& c) {
    if (!c.json_path.empty()) write_file(c.json_path, emit_json(r));
    if (!c.md_path.empty()) write_file(c.md_path, emit_markdown(r));
    if (c.json_path.empty() && c.md_path.empty()) {
        std::cout << (c.format == "markdown" ? emit_markdown(r) : emit_json(r));
    } else {
        const Summary s = r.summary();
        for (const auto& ch : r.checks) {
            if (ch.outcome != Outcome::Pass) std::cout << to_string(ch.outcome) << "  " << ch.id << "  " << ch.detail << "\n";
        }
        std::cout << "pass " << s.pass << "  fail " << s.fail << "  skipped " << s.skipped << "  total " << s.total()
                  << "\n";
    }
    return r.exit_code();
}

Report make_report(const Common& c, nlohmann::json config, std::vector<CheckResult> checks) {
    Report r;
    r.seed = c.seed;
    config["seed"] = c.seed;
    if (c.tol) config["tol"] = *c.tol;
    r.config = std::move(config);
    r.checks = std::move(checks);
    r.sort();
    return r;
}

Expr parse_f(const std::string& text) {
    try {
        Expr f = parse(text);
        require_admissible(f);
        return f;
    } catch (const ParseError& e) {
        throw ConfigError("cannot parse f: " + std::string(e.what()));
    } catch (const PreconditionError& e) {
        throw ConfigError("inadmissible f: " + std::string(e.what()));
    }
}

/// Reads key = value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        line = line.substr(0, line.find('#'));
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(n) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r\"");
            const auto e = s.find_last_not_of(" \t\r\"");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

void print_catalog() {
    std::cout << "suites:\n";
    for (const auto& s : suite_names()) std::cout << "  " << s << "\n";
    std::cout << "operators:\n"
                 "  J1..J8   preserve <1, z, f>\n"
                 "  K1..K8   preserve <1, f', z f' - f>/f''\n"
                 "  J'1..J'8, K'1..K'8   Wronskian-frame forms\n"
                 "examples:\n";
    const std::map<int, std::map<std::string, double>> admissible{
        {1, {{"alpha", 1}, {"nu", 1}, {"b0", 5}}},
        {2, {{"alpha", 1.7}, {"nu", 0.6}, {"b0", -0.4}}},
        {3, {{"alpha", 1}, {"beta", 1}, {"nu", 1}, {"b0", 0.5}}},
    };
    for (const auto& [id, values] : admissible) {
        ModelSpec m = build_example(id, {values, {}});
        std::cout << "  " << id << "  parameters:";
        for (const auto& p : m.parameters()) std::cout << " " << p;
        std::cout << "\n     V- = " << m.V_minus << "\n     V+ = " << m.V_plus << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-solvable operators and type B 3-fold supersymmetry checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    Common common;

    auto* catalog = app.add_subcommand("catalog", "list suites, operator families and example models");

    auto* verify = app.add_subcommand("verify", "verify operator identities for one f");
    std::string what;
    std::string f_text = "z^3";
    std::string ops_text;
    verify->add_option("what", what, "invariance | kernels | commutators | closure")
        ->required()
        ->check(CLI::IsMember({"invariance", "kernels", "commutators", "closure"}));
    verify->add_option("--f", f_text, "f(z)");
    verify->add_option("--ops", ops_text, "operators to check, e.g. J1,K3 (default all)");
    add_common(verify, common);

    auto* model = app.add_subcommand("model", "verify an example model");
    int example = 1;
    model->add_option("--example", example, "1, 2 or 3")->check(CLI::Range(1, 3));
    add_common(model, common);

    auto* x2 = app.add_subcommand("x2", "X2 Wronskian operators and identities");
    std::string x2_action;
    std::vector<std::string> alphas;
    std::string side = "both";
    x2->add_option("action", x2_action, "verify")->required()->check(CLI::IsMember({"verify"}));
    x2->add_option("--alpha", alphas, "alpha values, e.g. 5/2")->delimiter(',');
    x2->add_option("--side", side, "J | K | both")->check(CLI::IsMember({"J", "K", "both"}));
    add_common(x2, common);

    auto* spectrum = app.add_subcommand("spectrum", "finite-difference spectrum of an example potential");
    int grid = 4000, levels = 6;
    double lo = NAN, hi = NAN;
    spectrum->add_option("--example", example, "1, 2 or 3")->check(CLI::Range(1, 3));
    spectrum->add_option("--grid", grid, "grid points");
    spectrum->add_option("--k", levels, "number of eigenvalues");
    spectrum->add_option("--lo", lo, "left end of the grid");
    spectrum->add_option("--hi", hi, "right end of the grid");
    add_common(spectrum, common);

    auto* suite = app.add_subcommand("suite", "run verification suites");
    std::string suites_text, config_path, suite_f;
    int suite_example = 0;
    suite->add_option("--suites", suites_text, "comma-separated suite names (default all)");
    suite->add_option("--config", config_path, "key = value file; flags override");
    suite->add_option("--f", suite_f, "single f(z) for the families and commutators suites");
    suite->add_option("--alpha", alphas, "X2 alpha values")->delimiter(',');
    suite->add_option("--example", suite_example, "restrict models to one example")->check(CLI::Range(0, 3));
    add_common(suite, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const checks::Context ctx{common.seed, common.tol};
        if (*catalog) {
            print_catalog();
            return 0;
        }
        if (*verify) {
            const Expr f = parse_f(f_text);
            nlohmann::json config{{"command", "verify " + what}, {"f", f_text}};
            std::vector<CheckResult> out;
            if (what == "invariance") {
                const std::vector<std::string> ops = split(ops_text, ',');
                for (const auto& o : ops) {
                    const bool ok = o.size() == 2 && (o[0] == 'J' || o[0] == 'K') && o[1] >= '1' && o[1] <= '8';
                    if (!ok) throw ConfigError("unknown operator '" + o + "' (expected J1..J8 or K1..K8)");
                }
                if (!ops.empty()) config["ops"] = ops;
                for (auto& c : checks::invariance({f}, ctx)) {
                    const std::string name = c.id.substr(std::string("families.invariance.").size(), 2);
                    if (ops.empty() || std::find(ops.begin(), ops.end(), name) != ops.end()) out.push_back(std::move(c));
                }
            } else if (what == "kernels") {
                out = checks::kernels({f}, ctx);
            } else if (what == "commutators") {
                out = checks::commutators({f}, ctx);
            } else {
                out = checks::lie_closure(ctx);
            }
            return emit(make_report(common, config, std::move(out)), common);
        }
        if (*model) {
            std::optional<Binding> b;
            if (!common.bind.empty()) {
                b = parse_bind(common.bind);
                try {
                    build_example(example, *b);
                } catch (const PreconditionError& e) {
                    throw ConfigError(std::string("inadmissible parameters: ") + e.what());
                }
            }
            nlohmann::json config{{"command", "model"}, {"example", example}};
            if (b) config["bind"] = b->params;
            return emit(make_report(common, config, checks::models({example}, ctx, 1, b)), common);
        }
        if (*x2) {
            std::vector<Expr> as;
            for (const auto& a : alphas) {
                try {
                    as.push_back(parse(a));
                } catch (const ParseError& e) {
                    throw ConfigError("cannot parse alpha: " + std::string(e.what()));
                }
            }
            if (as.empty()) as = checks::x2_default_alphas();
            std::vector<CheckResult> out;
            for (auto& c : checks::x2(as, ctx)) {
                const bool is_j = c.id.find("J'") != std::string::npos || c.id.find("identity.J") != std::string::npos;
                const bool is_k = c.id.find("K'") != std::string::npos || c.id.find("identity.K") != std::string::npos;
                if ((is_j && side != "K") || (is_k && side != "J")) out.push_back(std::move(c));
            }
            nlohmann::json config{{"command", "x2 verify"}, {"side", side}};
            if (!alphas.empty()) config["alphas"] = alphas;
            return emit(make_report(common, config, std::move(out)), common);
        }
        if (*spectrum) {
            const Binding b = parse_bind(common.bind);
            ModelSpec m;
            try {
                m = build_example(example, b);
            } catch (const PreconditionError& e) {
                throw ConfigError(std::string("inadmissible parameters: ") + e.what());
            }
            if (std::isnan(lo)) lo = example == 1 ? 1e-3 : m.q_lo;
            if (std::isnan(hi)) hi = example == 1 ? 12.0 : m.q_hi;
            FdSpectrum fd;
            try {
                fd = fd_spectrum(m.V_minus, Grid{lo, hi, grid}, levels, m.binding);
            } catch (const PreconditionError& e) {
                throw ConfigError(e.what());
            }
            std::cerr << "fd eigenvalues of H- on [" << lo << ", " << hi << "], n = " << grid << "\n";
            for (std::size_t k = 0; k < fd.eigenvalues.size(); ++k) {
                std::cerr << "  E" << k << " = " << fd.eigenvalues[k];
                if (k < fd.error_estimates.size()) std::cerr << "  +- " << fd.error_estimates[k];
                std::cerr << "\n";
            }
            AlgebraicSpectrum s = algebraic_spectrum(m, Side::Minus, m.plan());
            std::cerr << "algebraic levels of H-\n";
            for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
                std::cerr << "  " << s.eigenvalues[i].real();
                if (!s.real(i)) {
                    std::cerr << " + " << s.eigenvalues[i].imag() << "i\n";
                    continue;
                }
                const auto n = normalizability_probe(eigenfunction(s, m.sector_minus, i), {lo, INFINITY}, m.binding);
                std::cerr << "  " << to_string(n.verdict) << "\n";
            }
            nlohmann::json config{{"command", "spectrum"}, {"example", example}, {"grid", grid}, {"k", levels}};
            if (!b.params.empty()) config["bind"] = b.params;
            std::vector<CheckResult> out;
            if (example == 1) out = checks::spectrum(ctx, b.params.empty() ? std::nullopt : std::optional<Binding>(b));
            return emit(make_report(common, config, std::move(out)), common);
        }
        if (*suite) {
            SuiteConfig cfg;
            if (!config_path.empty()) {
                for (const auto& [k, v] : read_config(config_path)) {
                    if (k == "suites") cfg.suites = split(v, ',');
                    else if (k == "seed") cfg.seed = std::stoull(v);
                    else if (k == "tol") cfg.tol = std::stod(v);
                    else if (k == "f") cfg.f = v;
                    else if (k == "alphas" || k == "alpha") cfg.alphas = split(v, ',');
                    else if (k == "example") cfg.example = std::stoi(v);
                    else if (k == "bind") cfg.binding = parse_bind(v);
                    else if (k == "format") cfg.format = v;
                    else if (k == "json" && common.json_path.empty()) common.json_path = v;
                    else if (k == "md" && common.md_path.empty()) common.md_path = v;
                    else if (k != "json" && k != "md") throw ConfigError("unknown config key '" + k + "'");
                }
            }
            if (suite->count("--suites")) cfg.suites = split(suites_text, ',');
            if (suite->count("--seed") || config_path.empty()) cfg.seed = common.seed;
            if (common.tol) cfg.tol = common.tol;
            if (suite->count("--f")) cfg.f = suite_f;
            if (!alphas.empty()) cfg.alphas = alphas;
            if (suite->count("--example")) cfg.example = suite_example;
            if (!common.bind.empty()) cfg.binding = parse_bind(common.bind);
            if (suite->count("--format")) cfg.format = common.format;
            common.format = cfg.format;
            common.seed = cfg.seed;
            return emit(run_suite(cfg), common);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
