#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "biruin/biruin.hpp"

namespace {

using namespace biruin;

// Working widths on the menu: 64 (IEEE double), 128, 256, 512 bits of
// mantissa. A requested width rounds up to the next entry.
template <class Fn>
int with_precision(unsigned requested, Fn&& fn) {
    if (requested <= 64) return fn(double{});
    if (requested <= 128) return fn(Real128{});
    if (requested <= 256) return fn(Real256{});
    if (requested <= 512) return fn(Real512{});
    throw ParameterError("precision_bits above 512 is not supported");
}

std::string svg_path_for(const std::string& out) {
    const auto dot = out.rfind('.');
    if (dot != std::string::npos && out.substr(dot) == ".csv") return out.substr(0, dot) + ".svg";
    return out + ".svg";
}

template <class Real>
int run_compute(const RunConfig& cfg, unsigned requested) {
    WindowOptions w;
    w.trunc_eps = cfg.trunc_eps;
    w.window_cap = cfg.window_cap;
    w.min_index = cfg.u_max + cfg.N + 2;
    const JointMatrix<Real> m = build_joint<Real>(cfg.model, w);
    const RuinTable<Real> table = survival_table(m, cfg.u_max, cfg.N);

    std::cout << "model: " << describe(cfg.model) << "\n";
    std::cout << "precision: " << mantissa_bits<Real>() << "-bit mantissa (requested " << requested
              << ")\n";
    std::cout << "class: " << model_class_name(table.klass) << "\n";
    std::cout << "expected claims per pair: " << format_sig(table.es, 10) << "\n";
    std::cout << "window: " << m.max_i() + 1 << " x " << m.max_j() + 1 << ", tail mass "
              << format_sig(m.tail_mass(), 3) << "\n";
    const auto corr = pearson_correlation(m);
    std::cout << "correlation: " << (corr ? format_sig(*corr, 10) : std::string("undefined"))
              << "\n";
    std::cout << "psi(0) = " << format_fixed_half_even(table.psi[0], 4)
              << ", delta = " << format_sig(table.delta, 10) << "\n";

    const std::string csv = psi_csv(table.psi);
    if (cfg.out.empty()) {
        std::cout << csv;
    } else {
        write_text_file(cfg.out, csv);
        std::cout << "wrote CSV: " << cfg.out << "\n";
        if (cfg.svg) {
            const std::string path = svg_path_for(cfg.out);
            write_text_file(path, psi_svg(table.psi, describe(cfg.model)));
            std::cout << "wrote SVG: " << path << "\n";
        }
    }
    return 0;
}

int cmd_compute(const std::string& config_path, const std::string& out_override, bool svg) {
    RunConfig cfg = load_config(config_path);
    if (!out_override.empty()) cfg.out = out_override;
    if (svg) cfg.svg = true;
    if (cfg.svg && cfg.out.empty())
        throw ParameterError("--svg needs an output path (--out or \"out\" in the config)");
    return with_precision(cfg.precision_bits, [&](auto tag) {
        return run_compute<decltype(tag)>(cfg, cfg.precision_bits);
    });
}

int cmd_reproduce(int table, const std::string& reference_path) {
    const auto reference = load_reference_csv(reference_path);
    const TableComparison cmp = compare_table<Real256>(table, reference);

    std::cout << "table " << table << ": " << benchmark_title(table) << "\n";
    std::cout << "reference: " << reference_path << ", tolerance " << format_sig(cmp.tolerance, 3)
              << "\n";
    for (const SettingComparison& s : cmp.settings) {
        std::cout << "\nsetting " << s.label << " (delta = " << format_sig(s.delta, 4)
                  << ", correlation = " << s.corr << ")\n";
        std::cout << "   u   computed  reference      |diff|\n";
        for (const ComparedCell& c : s.cells) {
            char line[96];
            std::snprintf(line, sizeof line, "%4d %10s %10.4f   %9.3e%s\n", c.u,
                          format_fixed_half_even(c.computed, 4).c_str(), c.reference, c.diff,
                          c.diff > cmp.tolerance ? "  exceeds" : "");
            std::cout << line;
        }
    }
    std::cout << "\nmax |diff| = " << format_sig(cmp.max_diff, 3) << " vs tolerance "
              << format_sig(cmp.tolerance, 3) << " -> " << (cmp.pass ? "PASS" : "FAIL") << "\n";
    return cmp.pass ? 0 : 1;
}

template <class Real>
int run_oracle(const RunConfig& cfg, int pairs, std::uint64_t paths, std::uint64_t seed,
               unsigned requested) {
    WindowOptions we;
    we.trunc_eps = cfg.trunc_eps;
    we.window_cap = cfg.window_cap;
    we.min_index = cfg.u_max + cfg.N + 2;
    const JointMatrix<Real> m = build_joint<Real>(cfg.model, we);
    const RuinTable<Real> table = survival_table(m, cfg.u_max, cfg.N);

    // the finite-horizon checks run in double; the window covers every
    // capital level reachable within the horizon so the dynamic program
    // is exact there
    WindowOptions wo = we;
    wo.min_index = cfg.u_max + 2 * pairs;
    const JointMatrix<double> md = build_joint<double>(cfg.model, wo);
    const DPResult dp = finite_horizon_survival(md, cfg.u_max, pairs);

    std::cout << "model: " << describe(cfg.model) << "\n";
    std::cout << "precision: " << mantissa_bits<Real>() << "-bit mantissa (requested " << requested
              << "); finite-horizon checks in double\n";
    std::cout << "generator: splitmix64, seed: " << seed << "\n";
    std::cout << "horizon: " << pairs << " claim pairs, " << paths << " paths per estimate\n";
    if (md.tail_mass() > 1e-6)
        std::cout << "note: window tail mass " << format_sig(md.tail_mass(), 3)
                  << " counts as ruin in dp and mc\n";
    std::cout << "   u        engine       dp(" << pairs << ")            mc       mc se\n";
    for (int u = 0; u <= cfg.u_max; ++u) {
        const MCResult mc = monte_carlo_ruin(md, u, pairs, paths, seed);
        char line[128];
        std::snprintf(line, sizeof line, "%4d  %12.10f  %12.10f  %12.10f  %9.3e\n", u,
                      to_double(table.psi[u]), 1.0 - dp.phi[u], mc.estimate, mc.std_error);
        std::cout << line;
    }
    std::cout << "engine psi is the infinite-horizon limit; dp and mc share the " << pairs
              << "-pair horizon\n";
    return 0;
}

int cmd_oracle(const std::string& config_path, int pairs, std::uint64_t paths,
               std::uint64_t seed) {
    const RunConfig cfg = load_config(config_path);
    if (pairs < 1) throw ParameterError("--pairs must be >= 1");
    if (paths < 1) throw ParameterError("--paths must be >= 1");
    return with_precision(cfg.precision_bits, [&](auto tag) {
        return run_oracle<decltype(tag)>(cfg, pairs, paths, seed, cfg.precision_bits);
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ultimate ruin probabilities for two-season claim pairs"};
    app.require_subcommand(1);

    std::string config_path, out_override, reference_path = "data/reference_tables.csv";
    bool svg = false;
    int table = 0, pairs = 400;
    std::uint64_t paths = 1000000, seed = 1;

    CLI::App* compute = app.add_subcommand("compute", "ruin table for a model config");
    compute->add_option("--config", config_path, "JSON model config")->required();
    compute->add_option("--out", out_override, "CSV output path");
    compute->add_flag("--svg", svg, "also write an SVG line chart next to the CSV");

    CLI::App* reproduce = app.add_subcommand("reproduce", "recompute a benchmark table");
    reproduce->add_option("--table", table, "benchmark table id")
        ->required()
        ->check(CLI::Range(1, 4));
    reproduce->add_option("--tables", reference_path, "reference CSV path");

    CLI::App* oracle = app.add_subcommand("oracle", "cross-check engine vs dp and monte carlo");
    oracle->add_option("--config", config_path, "JSON model config")->required();
    oracle->add_option("--pairs", pairs, "finite horizon in claim pairs")->required();
    oracle->add_option("--paths", paths, "monte carlo paths per estimate")->required();
    oracle->add_option("--seed", seed, "monte carlo seed")->required();

    try {
        app.parse(argc, argv);
        if (compute->parsed()) return cmd_compute(config_path, out_override, svg);
        if (reproduce->parsed()) return cmd_reproduce(table, reference_path);
        if (oracle->parsed()) return cmd_oracle(config_path, pairs, paths, seed);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const biruin::PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 3;
    } catch (const biruin::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
