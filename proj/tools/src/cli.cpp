#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "fdrec/csv.hpp"
#include "fdrec/errors.hpp"
#include "fdrec/estimator.hpp"
#include "fdrec/experiments.hpp"
#include "fdrec/factor_count.hpp"
#include "fdrec/serialize.hpp"
#include "fdrec/simulation.hpp"

namespace fdrec::cli {

namespace {

namespace fs = std::filesystem;

std::string format_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

fs::path prepare_output_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) {
        throw InvalidInput("cannot create output directory '" + dir + "': " + ec.message());
    }
    return path;
}

struct GlobalOpts {
    std::optional<std::uint64_t> seed;  // overrides the seed in any config
    int threads = 0;                    // 0 means hardware concurrency
    std::string output_dir = ".";

    int effective_threads() const {
        if (threads > 0) {
            return threads;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
};

void cmd_simulate(const std::string& config_path, const GlobalOpts& global) {
    SimConfig cfg = sim_config_from_json(read_text_file(config_path));
    if (global.seed) {
        cfg.seed = *global.seed;
    }
    const fs::path dir = prepare_output_dir(global.output_dir);
    const GroundTruth truth = simulate(cfg);
    write_panel_csv(truth.observed, dir / "observed.csv");
    write_panel_csv(truth.signal, dir / "signal.csv");
    write_panel_csv(truth.noise, dir / "noise.csv");
    write_text_file(dir / "resolved_config.json", to_json(cfg) + "\n");
    std::cout << "simulated " << cfg.num_curves << " curves on " << cfg.num_points
              << " points (seed " << cfg.seed << ") -> " << dir.string() << "\n";
}

void cmd_recover(const std::string& input_path, int num_factors, const std::string& auto_method,
                 int k_max, bool no_center, const GlobalOpts& global) {
    const Panel observed = read_panel_csv(input_path, PanelRole::Observed);
    const fs::path dir = prepare_output_dir(global.output_dir);

    int l = num_factors;
    std::optional<FactorCountResult> selection;
    if (!auto_method.empty()) {
        const int cap = k_max > 0 ? k_max
                                  : default_k_max(observed.num_curves(), observed.num_points());
        if (auto_method == "ratio") {
            const Eigen::VectorXd mean = estimate_mean(observed);
            const Eigen::MatrixXd centered = observed.values().rowwise() - mean.transpose();
            const EigenSystem es =
                gram_eigen(Panel(centered, observed.grid(), PanelRole::Observed));
            selection = eigenvalue_ratio(es, cap);
        } else if (auto_method == "ic") {
            selection = info_criterion(observed, cap);
        } else {
            throw InvalidInput("unknown selection method '" + auto_method +
                               "', expected 'ratio' or 'ic'");
        }
        l = selection->chosen;
    } else if (l < 1) {
        throw InvalidInput("either --num-factors or --auto-l is required");
    }

    const auto [fit, es] = recover(observed, l, !no_center);
    write_panel_csv(fit.recovered, dir / "recovered.csv");
    write_text_file(dir / "fit.json", fit_summary_json(fit) + "\n");
    if (selection) {
        write_text_file(dir / "factor_count.json", to_json(*selection) + "\n");
    }
    std::cout << "recovered with " << fit.num_factors << " factors -> " << dir.string() << "\n";
    for (const auto& w : fit.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
}

void cmd_select_l(const std::string& input_path, const std::string& method, int k_max,
                  const GlobalOpts& global) {
    const Panel observed = read_panel_csv(input_path, PanelRole::Observed);
    const fs::path dir = prepare_output_dir(global.output_dir);
    const int cap = k_max > 0 ? k_max
                              : default_k_max(observed.num_curves(), observed.num_points());
    FactorCountResult result;
    if (method == "ratio") {
        const Eigen::VectorXd mean = estimate_mean(observed);
        const Eigen::MatrixXd centered = observed.values().rowwise() - mean.transpose();
        const EigenSystem es = gram_eigen(Panel(centered, observed.grid(), PanelRole::Observed));
        result = eigenvalue_ratio(es, cap);
    } else if (method == "ic") {
        result = info_criterion(observed, cap);
    } else {
        throw InvalidInput("unknown selection method '" + method + "', expected 'ratio' or 'ic'");
    }
    write_text_file(dir / "factor_count.json", to_json(result) + "\n");
    std::cout << "selected " << result.chosen << " factors (" << to_string(result.method)
              << ") -> " << dir.string() << "\n";
    for (const auto& w : result.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
}

void cmd_rates(const std::string& config_path, const GlobalOpts& global) {
    RateStudyConfig cfg = rate_study_config_from_json(read_text_file(config_path));
    if (global.seed) {
        cfg.base.seed = *global.seed;
    }
    const fs::path dir = prepare_output_dir(global.output_dir);
    const RateStudyResult result = run_rate_study(cfg, global.effective_threads());
    write_text_file(dir / "rates_result.json", to_json(result) + "\n");

    std::string table = "t,p,l,median,quartile1,quartile3\n";
    for (const auto& s : result.summaries) {
        table += std::to_string(s.num_curves) + "," + std::to_string(s.num_points) + "," +
                 std::to_string(s.num_factors) + "," + format_full(s.median) + "," +
                 format_full(s.quartile1) + "," + format_full(s.quartile3) + "\n";
    }
    write_text_file(dir / "rates_summary.csv", table);

    std::string long_table = "t,p,l,replication,value\n";
    for (std::size_t i = 0; i < result.summaries.size(); ++i) {
        const auto& s = result.summaries[i];
        const auto& vals = result.values[i];
        for (std::size_t r = 0; r < vals.size(); ++r) {
            long_table += std::to_string(s.num_curves) + "," + std::to_string(s.num_points) +
                          "," + std::to_string(s.num_factors) + "," + std::to_string(r) + "," +
                          format_full(vals[r]) + "\n";
        }
    }
    write_text_file(dir / "rates_long.csv", long_table);
    std::cout << to_string(result.statistic) << " log-log slope vs T: "
              << format_full(result.log_slope) << " -> " << dir.string() << "\n";
}

void cmd_acf_check(const std::string& config_path, const GlobalOpts& global) {
    AcfCheckConfig cfg = acf_check_config_from_json(read_text_file(config_path));
    if (global.seed) {
        cfg.base.seed = *global.seed;
    }
    const fs::path dir = prepare_output_dir(global.output_dir);
    const AcfCheckResult result = run_acf_check(cfg, global.effective_threads());
    write_text_file(dir / "acf_result.json", to_json(result) + "\n");

    std::string table = "t,p,lag,median,quartile1,quartile3\n";
    for (const auto& s : result.sizes) {
        for (const auto& lag : s.lags) {
            table += std::to_string(s.num_curves) + "," + std::to_string(s.num_points) + "," +
                     std::to_string(lag.lag) + "," + format_full(lag.median) + "," +
                     format_full(lag.quartile1) + "," + format_full(lag.quartile3) + "\n";
        }
    }
    write_text_file(dir / "acf_summary.csv", table);
    std::cout << "autocovariance drift over " << result.sizes.size() << " sizes -> "
              << dir.string() << "\n";
}

void cmd_compare(const std::string& config_path, const GlobalOpts& global) {
    CompareConfig cfg = compare_config_from_json(read_text_file(config_path));
    if (global.seed) {
        cfg.base.seed = *global.seed;
    }
    const fs::path dir = prepare_output_dir(global.output_dir);
    const CompareResult result = run_compare_study(cfg, global.effective_threads());
    write_text_file(dir / "compare_result.json", to_json(result) + "\n");

    std::string table = "seed,l_hat,mse_factor,mse_smoother\n";
    for (const auto& row : result.replications) {
        table += std::to_string(row.seed) + "," + std::to_string(row.l_hat) + "," +
                 format_full(row.mse_factor) + "," + format_full(row.mse_smoother) + "\n";
    }
    write_text_file(dir / "compare_table.csv", table);
    std::cout << "factor recovery beat the smoother in "
              << format_full(100.0 * result.factor_win_fraction) << "% of replications -> "
              << dir.string() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Latent signal recovery from noisy functional panels"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts global;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the seed of any config");
    app.add_option("--threads", global.threads, "Worker threads (default: hardware)");
    app.add_option("--output-dir", global.output_dir, "Directory for output files");

    std::string config_path;
    std::string input_path;
    int num_factors = 0;
    std::string auto_method;
    int k_max = 0;
    bool no_center = false;
    std::string method = "ratio";

    auto* sim = app.add_subcommand("simulate", "Draw one panel and write its components as CSV");
    sim->add_option("--config", config_path, "Simulation config (JSON)")->required();

    auto* rec = app.add_subcommand("recover", "Project an observed panel on its leading factors");
    rec->add_option("--input", input_path, "Observed panel CSV")->required();
    rec->add_option("--num-factors", num_factors, "Number of factors to keep");
    rec->add_option("--auto-l,--auto-L", auto_method,
                    "Choose the factor count: 'ratio' or 'ic'");
    rec->add_option("--k-max", k_max,
                    "Candidate cap for --auto-l (default: min(T,p)/4, at most 50)");
    rec->add_flag("--no-center", no_center, "Skip mean estimation and centering");

    auto* sel = app.add_subcommand("select-l", "Estimate the number of factors");
    sel->add_option("--input", input_path, "Observed panel CSV")->required();
    sel->add_option("--method", method, "'ratio' or 'ic'")->capture_default_str();
    sel->add_option("--k-max", k_max, "Candidate cap (default: min(T,p)/4, at most 50)");

    auto* rates = app.add_subcommand("rates", "Replicated error-vs-size study");
    rates->add_option("--config", config_path, "Rate study config (JSON)")->required();

    auto* acf = app.add_subcommand("acf-check", "Autocovariance drift of recovered panels");
    acf->add_option("--config", config_path, "ACF check config (JSON)")->required();

    auto* cmp = app.add_subcommand("compare", "Factor recovery versus per-curve smoothing");
    cmp->add_option("--config", config_path, "Compare study config (JSON)")->required();

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("fdrec");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_storage) {
        argv.push_back(s.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (seed_opt->count() > 0) {
        global.seed = seed_value;
    }
    if (global.threads < 0) {
        std::cerr << "error: --threads must be positive\n";
        return 1;
    }

    try {
        if (app.got_subcommand(sim)) {
            cmd_simulate(config_path, global);
        } else if (app.got_subcommand(rec)) {
            if (num_factors > 0 && !auto_method.empty()) {
                throw InvalidInput("--num-factors and --auto-l are mutually exclusive");
            }
            cmd_recover(input_path, num_factors, auto_method, k_max, no_center, global);
        } else if (app.got_subcommand(sel)) {
            cmd_select_l(input_path, method, k_max, global);
        } else if (app.got_subcommand(rates)) {
            cmd_rates(config_path, global);
        } else if (app.got_subcommand(acf)) {
            cmd_acf_check(config_path, global);
        } else if (app.got_subcommand(cmp)) {
            cmd_compare(config_path, global);
        }
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InsufficientRank& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const BandwidthTooSmall& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SingularEigenvalue& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace fdrec::cli
