// coopmimo: command-line front end of the cooperative MIMO-OFDM link simulator.
//
//   coopmimo run      --config cfg.txt --scheme dlst --strategy pi --out point.csv
//   coopmimo sweep    --vary n --values 10,20,50,100 --schemes alamouti,golden,dlst --out fig.csv
//   coopmimo validate
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 invariant failure.

#include "coopmimo/coopmimo.hpp"
#include "coopmimo/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int exit_config = 1;
constexpr int exit_io = 2;
constexpr int exit_invariant = 3;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<std::string> strategy;
    std::optional<std::size_t> n_relays;
    std::optional<double> ps_db;
    std::optional<double> sigma2_db;
    std::optional<std::size_t> frames;
    std::optional<unsigned> iterations;
    std::optional<unsigned> workers;
    std::vector<std::string> overrides;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* app, CommonOptions& o)
{
    app->add_option("--config", o.config_path, "key = value scenario file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--scheme", o.scheme, "alamouti | golden | dlst");
    app->add_option("--strategy", o.strategy, "pi | random");
    app->add_option("--n-relays", o.n_relays, "number of candidate relays N");
    app->add_option("--ps-db", o.ps_db, "BS transmit power (dB)");
    app->add_option("--sigma2-db", o.sigma2_db, "noise variance (dB)");
    app->add_option("--frames", o.frames, "coded frames per point");
    app->add_option("--iterations", o.iterations, "receiver iterations (1-8)");
    app->add_option("--workers", o.workers, "worker threads");
    app->add_option("--set", o.overrides, "extra key=value override, repeatable");
    app->add_option("--out", o.out, "output path (default: stdout for csv)");
    app->add_option("--format", o.format, "csv | svg")->check(CLI::IsMember({"csv", "svg"}));
}

coopmimo::ScenarioConfig build_config(const CommonOptions& o)
{
    coopmimo::ScenarioConfig cfg;
    if (!o.config_path.empty()) {
        cfg = coopmimo::load_config_file(o.config_path, cfg);
    }
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw coopmimo::ConfigError("--set expects key=value, got '" + kv + "'");
        }
        cfg.set(coopmimo::detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.scheme) {
        cfg.set("scheme", *o.scheme);
    }
    if (o.strategy) {
        cfg.set("strategy", *o.strategy);
    }
    if (o.n_relays) {
        cfg.geometry.n_relays = *o.n_relays;
    }
    if (o.ps_db) {
        cfg.ps_db = *o.ps_db;
    }
    if (o.sigma2_db) {
        cfg.set("sigma2_db", std::to_string(*o.sigma2_db));
    }
    if (o.frames) {
        cfg.frames = *o.frames;
    }
    if (o.iterations) {
        cfg.iterations = *o.iterations;
    }
    if (o.workers) {
        cfg.workers = *o.workers;
    }
    return cfg;
}

void write_records(const std::vector<coopmimo::BerRecord>& records, const CommonOptions& o,
                   coopmimo::SweepVariable axis)
{
    const auto format = o.format == "svg" ? coopmimo::OutputFormat::svg : coopmimo::OutputFormat::csv;
    if (o.out.empty()) {
        std::cout << (format == coopmimo::OutputFormat::csv ? coopmimo::to_csv(records)
                                                           : coopmimo::to_svg(records, axis));
        return;
    }
    coopmimo::emit_results(records, format, o.out, axis);
}

std::vector<double> parse_values(const std::string& list)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const std::string item = coopmimo::detail::trim(list.substr(start, comma - start));
        if (!item.empty()) {
            out.push_back(coopmimo::detail::parse_double("values", item));
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::vector<std::string> split_names(const std::string& list)
{
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = coopmimo::detail::trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cooperative AF MIMO-OFDM link simulator with position-based relay selection"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::string trace_path;
    auto* run = app.add_subcommand("run", "simulate one scenario point");
    add_common(run, run_opts);
    run->add_option("--trace", trace_path, "write per-position errors (CSV) to this path");

    CommonOptions sweep_opts;
    std::string vary = "n";
    std::string values = "10,20,50,100,150,200";
    std::string schemes;
    std::string strategies;
    auto* sweep = app.add_subcommand("sweep", "sweep N or Ps over schemes and strategies");
    add_common(sweep, sweep_opts);
    sweep->add_option("--vary", vary, "n | ps")->check(CLI::IsMember({"n", "ps"}));
    sweep->add_option("--values", values, "comma-separated sweep values");
    sweep->add_option("--schemes", schemes, "comma-separated schemes (default: the configured one)");
    sweep->add_option("--strategies", strategies, "comma-separated strategies (default: the configured one)");

    std::uint64_t validate_seed = 1;
    auto* validate = app.add_subcommand("validate", "run the invariant self-check suite");
    validate->add_option("--seed", validate_seed, "seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*run) {
            const coopmimo::ScenarioConfig cfg = build_config(run_opts);
            const coopmimo::PointResult result = coopmimo::simulate_point(cfg);
            write_records({result.record}, run_opts, coopmimo::SweepVariable::n_relays);
            if (!trace_path.empty()) {
                std::ofstream trace(trace_path);
                if (!trace) {
                    throw coopmimo::IoError("cannot open '" + trace_path + "' for writing");
                }
                trace << "position,along_track_m,bits,bit_errors\n";
                for (std::size_t i = 0; i < result.position_bits.size(); ++i) {
                    trace << i << ',' << coopmimo::detail::format_double(static_cast<double>(i) * cfg.geometry.update_step)
                          << ',' << result.position_bits[i] << ',' << result.position_errors[i] << '\n';
                }
            }
        } else if (*sweep) {
            coopmimo::SweepSpec spec;
            spec.base = build_config(sweep_opts);
            spec.variable = vary == "n" ? coopmimo::SweepVariable::n_relays : coopmimo::SweepVariable::ps_db;
            spec.values = parse_values(values);
            spec.schemes = split_names(schemes);
            for (const auto& s : split_names(strategies)) {
                spec.strategies.push_back(coopmimo::strategy_from_string(s));
            }
            write_records(coopmimo::run_sweep(spec), sweep_opts, spec.variable);
        } else if (*validate) {
            bool ok = true;
            for (const auto& check : coopmimo::validation::run_invariant_suite(validate_seed)) {
                std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
                ok = ok && check.passed;
            }
            return ok ? 0 : exit_invariant;
        }
    } catch (const coopmimo::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const coopmimo::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const coopmimo::FramingError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        // Anything else escaping the core means a broken internal invariant.
        std::cerr << "invariant failure: " << e.what() << '\n';
        return exit_invariant;
    }
    return 0;
}
