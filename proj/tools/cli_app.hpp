#pragma once

// symtherm command-line front end. `run` is the whole program minus main().
// Exit codes: 0 success, 1 internal or I/O error, 2 invalid input.

#include "symtherm/combinatorics.hpp"
#include "symtherm/curie_weiss.hpp"
#include "symtherm/entropy.hpp"
#include "symtherm/oracle.hpp"
#include "symtherm/report.hpp"
#include "symtherm/sector_cache.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace symtherm::cli {

/// Parameters shared by the model subcommands. Filled from defaults, then a
/// JSON config file, then command-line flags.
struct RunConfig {
    int n = 100;
    double omega = 0.5;
    double alpha = 1.0;
    double beta = 2.0;
    std::string method = "all";
    double beta_min = 0.2, beta_max = 3.2;
    int beta_count = 40;
    double alpha_min = -2.0, alpha_max = 2.0;
    int alpha_count = 40;
    unsigned threads = 1;
    bool paper_constant = false;
    bool no_cache = false;
    std::string out;
    std::string svg;

    void overlay(const nlohmann::json& doc) {
        if (!doc.is_object()) throw DomainError("config file must hold a JSON object");
        for (const auto& [key, value] : doc.items()) {
            try {
                if (key == "n") n = value.get<int>();
                else if (key == "omega") omega = value.get<double>();
                else if (key == "alpha") alpha = value.get<double>();
                else if (key == "beta") beta = value.get<double>();
                else if (key == "method") method = value.get<std::string>();
                else if (key == "beta-min") beta_min = value.get<double>();
                else if (key == "beta-max") beta_max = value.get<double>();
                else if (key == "beta-count") beta_count = value.get<int>();
                else if (key == "alpha-min") alpha_min = value.get<double>();
                else if (key == "alpha-max") alpha_max = value.get<double>();
                else if (key == "alpha-count") alpha_count = value.get<int>();
                else if (key == "threads") threads = value.get<unsigned>();
                else if (key == "paper-constant") paper_constant = value.get<bool>();
                else if (key == "no-cache") no_cache = value.get<bool>();
                else if (key == "out") out = value.get<std::string>();
                else if (key == "svg") svg = value.get<std::string>();
                else throw DomainError("unknown config key '" + key + "'");
            } catch (const nlohmann::json::exception&) {
                throw DomainError("config key '" + key + "' has the wrong type");
            }
        }
    }

    void validate() const {
        for (double v : {omega, alpha, beta, beta_min, beta_max, alpha_min, alpha_max})
            if (!std::isfinite(v)) throw DomainError("numeric parameters must be finite");
        if (beta_count < 1 || alpha_count < 1) throw DomainError("grid counts must be >= 1");
        if (beta_max < beta_min || alpha_max < alpha_min) throw DomainError("grid max must not be below min");
        if (threads < 1) throw DomainError("--threads must be >= 1");
    }
};

inline std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return v;
}

inline void add_model_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--n", cfg.n, "Number of spins N");
    app.add_option("--omega", cfg.omega, "Transverse field");
    app.add_option("--threads", cfg.threads, "Worker threads for sector solves");
    app.add_flag("--no-cache", cfg.no_cache, "Do not read or write the spectra cache");
    app.add_flag("--paper-constant", cfg.paper_constant,
                 "Also evaluate the ordered branch with the -omega^2/(2 alpha) constant");
    app.add_option("--out", cfg.out, "CSV output path (stdout when omitted)");
    app.add_option("--svg", cfg.svg, "SVG plot output path");
    app.add_option("--config", "JSON config file; flags take precedence");
}

/// Progress on stderr, roughly every 10%.
inline std::function<void(std::size_t, std::size_t)> progress_to(std::ostream& err, const std::string& label) {
    return [&err, label, last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
        const std::size_t decile = done * 10 / std::max<std::size_t>(total, 1);
        if (decile != last || done == total) {
            last = decile;
            err << label << ": " << done << "/" << total << " sectors\n";
        }
    };
}

inline void emit_csv(const CsvTable& table, const std::string& path, std::ostream& out) {
    if (path.empty())
        out << to_csv(table);
    else
        write_csv(table, path);
}

inline std::optional<nlohmann::json> load_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
        else
            continue;
        std::ifstream in(path);
        if (!in) throw DomainError("cannot read config file " + path);
        try {
            return nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw DomainError("config file " + path + " is not valid JSON: " + e.what());
        }
    }
    return std::nullopt;
}

inline BlockSpectrum block_from_json(const nlohmann::json& j) {
    BlockSpectrum b;
    b.lambda = Partition(j.at("lambda").get<std::vector<int>>());
    b.p = j.at("p").get<double>();
    b.dim = BigInt(j.at("dim").get<std::string>());
    b.deg = BigInt(j.at("deg").get<std::string>());
    b.coarse_spectrum = j.at("spectrum").get<std::vector<double>>();
    return b;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symmetry-resolved thermodynamics of permutation-invariant spin ensembles", "symtherm"};
    app.require_subcommand(1);
    RunConfig cfg;

    // combo
    auto* combo = app.add_subcommand("combo", "Symmetric-group combinatorics queries");
    combo->require_subcommand(1);
    std::string shape, content, x_text;
    int combo_n = 1, combo_d = 2;
    auto* c_dim = combo->add_subcommand("dim", "Irrep dimension (hook-length formula)");
    c_dim->add_option("--shape", shape, "Partition, e.g. 2,1")->required();
    auto* c_logdim = combo->add_subcommand("logdim", "Natural log of the irrep dimension");
    c_logdim->add_option("--shape", shape)->required();
    auto* c_kostka = combo->add_subcommand("kostka", "Kostka number K(shape, content)");
    c_kostka->add_option("--shape", shape)->required();
    c_kostka->add_option("--content", content)->required();
    auto* c_schur = combo->add_subcommand("schur", "Schur polynomial at d ones (multiplicity)");
    c_schur->add_option("--shape", shape)->required();
    c_schur->add_option("--d", combo_d)->required();
    auto* c_sector = combo->add_subcommand("sector-dim", "Dimension of the occupation sector M_mu");
    c_sector->add_option("--shape", shape)->required();
    auto* c_parts = combo->add_subcommand("partitions", "Partitions of n with at most d parts");
    c_parts->add_option("--n", combo_n)->required();
    c_parts->add_option("--d", combo_d)->required();
    auto* c_count = combo->add_subcommand("count", "Number of partitions of n with at most d parts");
    c_count->add_option("--n", combo_n)->required();
    c_count->add_option("--d", combo_d)->required();
    auto* c_rate = combo->add_subcommand("rate", "Rate entropy -sum x ln x of a rescaled shape");
    c_rate->add_option("--x", x_text, "Comma-separated weights")->required();

    // entropy
    auto* entropy = app.add_subcommand("entropy", "Block entropy decomposition of a JSON block file");
    std::string blocks_path;
    int entropy_d = 2;
    entropy->add_option("--blocks", blocks_path, "JSON array of blocks")->required();
    entropy->add_option("--d", entropy_d, "Local dimension used to count irreps");

    // potential
    auto* potential = app.add_subcommand("potential", "Free-energy potential f(l)");
    add_model_options(*potential, cfg);
    potential->add_option("--alpha", cfg.alpha, "Ising coupling");
    potential->add_option("--beta", cfg.beta, "Inverse temperature");
    potential->add_option("--method", cfg.method, "exact | asymptotic | analytic | all");

    // phase
    auto* phase = app.add_subcommand("phase", "Minimizer l* on a (beta, alpha) grid");
    add_model_options(*phase, cfg);
    phase->add_option("--method", cfg.method, "exact | asymptotic | analytic");
    phase->add_option("--beta-min", cfg.beta_min);
    phase->add_option("--beta-max", cfg.beta_max);
    phase->add_option("--beta-count", cfg.beta_count);
    phase->add_option("--alpha-min", cfg.alpha_min);
    phase->add_option("--alpha-max", cfg.alpha_max);
    phase->add_option("--alpha-count", cfg.alpha_count);

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Dense small-N cross-checks");
    oracle_cmd->add_option("--n", cfg.n)->required();
    oracle_cmd->add_option("--omega", cfg.omega);
    oracle_cmd->add_option("--alpha", cfg.alpha);
    oracle_cmd->add_option("--beta", cfg.beta);

    // cache
    auto* cache = app.add_subcommand("cache", "Inspect or clear the spectra cache");
    cache->require_subcommand(1);
    std::string cache_dir;
    cache->add_option("--dir", cache_dir, "Cache directory (default $SYMTHERM_CACHE_DIR or ./.symtherm-cache)");
    auto* c_inspect = cache->add_subcommand("inspect", "Summarize cache contents");
    auto* c_clear = cache->add_subcommand("clear", "Delete all cache records");

    try {
        if (auto doc = load_config(args)) cfg.overlay(*doc);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (combo->parsed()) {
            if (c_dim->parsed()) out << dim_irrep(Partition::parse(shape)) << "\n";
            if (c_logdim->parsed()) out << format_double(log_dim_irrep(Partition::parse(shape))) << "\n";
            if (c_kostka->parsed()) out << kostka(Partition::parse(shape), Partition::parse(content)) << "\n";
            if (c_schur->parsed()) out << schur_at_ones(Partition::parse(shape), combo_d) << "\n";
            if (c_sector->parsed()) out << sector_dim(Partition::parse(shape)) << "\n";
            if (c_parts->parsed())
                for (const auto& p : enumerate_partitions(combo_n, combo_d)) out << p.to_string() << "\n";
            if (c_count->parsed()) out << count_irreps(combo_n, combo_d) << "\n";
            if (c_rate->parsed()) {
                std::vector<double> x;
                std::stringstream in(x_text);
                std::string item;
                while (std::getline(in, item, ',')) {
                    try {
                        x.push_back(std::stod(item));
                    } catch (const std::exception&) {
                        throw DomainError("invalid weight '" + item + "'");
                    }
                }
                out << format_double(rate_entropy(RescaledShape(std::move(x)))) << "\n";
            }
            return 0;
        }

        if (entropy->parsed()) {
            std::ifstream in(blocks_path);
            if (!in) throw DomainError("cannot read block file " + blocks_path);
            std::vector<BlockSpectrum> blocks;
            try {
                const auto doc = nlohmann::json::parse(in);
                if (!doc.is_array()) throw DomainError("block file must hold a JSON array");
                for (const auto& j : doc) blocks.push_back(block_from_json(j));
            } catch (const nlohmann::json::exception& e) {
                throw DomainError(std::string("malformed block file: ") + e.what());
            } catch (const std::runtime_error& e) {
                if (dynamic_cast<const Error*>(&e)) throw;
                throw DomainError(std::string("malformed block file: ") + e.what());
            }
            if (blocks.empty()) throw DomainError("block file is empty");
            const auto breakdown = block_entropy(blocks);
            const auto bounds = verify_bounds(blocks, count_irreps(blocks.front().lambda.size(), entropy_d));
            nlohmann::ordered_json j;
            j["dim_term"] = breakdown.dim_term;
            j["coarse_term"] = breakdown.coarse_term;
            j["shannon_term"] = breakdown.shannon_term;
            j["total"] = breakdown.total;
            j["block_slack"] = bounds.block_slack;
            j["shannon_slack"] = bounds.shannon_slack;
            j["bounds_ok"] = bounds.ok();
            out << j.dump(2) << "\n";
            return 0;
        }

        std::optional<SectorCache> store;
        auto solve_options = [&](const std::string& label) {
            cfg.validate();
            SolveOptions opts;
            opts.threads = cfg.threads;
            if (!cfg.no_cache) {
                store.emplace(default_cache_dir());
                opts.store = &*store;
            }
            opts.progress = progress_to(err, label);
            return opts;
        };

        if (potential->parsed()) {
            ModelParams params{cfg.n, cfg.omega, cfg.alpha, cfg.beta};
            params.validate();
            const bool all = cfg.method == "all";
            const CurveMethod single = all ? CurveMethod::exact : parse_method(cfg.method);
            const auto grid = attainable_l_grid(cfg.n);
            const auto opts = solve_options("potential");

            PotentialSet set;
            if (all || single != CurveMethod::analytic) {
                const auto spectra = compute_sector_spectra(cfg.n, cfg.omega, cfg.alpha, opts);
                if (all || single == CurveMethod::exact)
                    set.exact = potential_curve(spectra, cfg.beta, CurveMethod::exact, grid);
                if (all || single == CurveMethod::asymptotic)
                    set.asymptotic = potential_curve(spectra, cfg.beta, CurveMethod::asymptotic, grid);
            }
            if (all || single == CurveMethod::analytic)
                set.analytic = potential_curve(params, CurveMethod::analytic, grid);
            if (cfg.paper_constant)
                set.analytic_printed =
                    potential_curve(params, CurveMethod::analytic, grid, {{}, AnalyticConstant::printed});

            emit_csv(potential_table(set), cfg.out, out);
            if (!cfg.svg.empty()) {
                std::vector<ThermoCurve> curves;
                for (const auto* c : set.present()) curves.push_back(*c);
                render_svg(curves, cfg.svg);
            }
            return 0;
        }

        if (phase->parsed()) {
            const CurveMethod method = cfg.method == "all" ? CurveMethod::exact : parse_method(cfg.method);
            const auto opts = solve_options("phase");
            const auto betas = linspace(cfg.beta_min, cfg.beta_max, cfg.beta_count);
            const auto alphas = linspace(cfg.alpha_min, cfg.alpha_max, cfg.alpha_count);
            CurveOptions curve_opts{opts, cfg.paper_constant ? AnalyticConstant::printed : AnalyticConstant::derived};
            const auto points = phase_diagram(betas, alphas, cfg.omega, cfg.n, method, curve_opts);
            emit_csv(phase_table(points), cfg.out, out);
            if (!cfg.svg.empty()) render_svg(points, betas.size(), alphas.size(), cfg.svg);
            return 0;
        }

        if (oracle_cmd->parsed()) {
            ModelParams params{cfg.n, cfg.omega, cfg.alpha, cfg.beta};
            const auto report = oracle::run_checks(params);
            for (const auto& c : report.checks)
                out << (c.pass ? "PASS " : "FAIL ") << c.name << " deviation=" << format_double(c.deviation)
                    << " tolerance=" << format_double(c.tolerance) << "\n";
            return report.ok() ? 0 : 1;
        }

        if (cache->parsed()) {
            SectorCache sc(cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir));
            if (c_inspect->parsed()) {
                const auto s = sc.inspect();
                out << "directory " << sc.directory().string() << "\n"
                    << "records " << s.records << "\n"
                    << "invalid " << s.invalid << "\n"
                    << "bytes " << s.bytes << "\n";
            }
            if (c_clear->parsed()) out << "removed " << sc.clear() << "\n";
            return 0;
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace symtherm::cli
