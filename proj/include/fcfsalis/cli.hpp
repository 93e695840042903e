#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fcfsalis/config.hpp"
#include "fcfsalis/design.hpp"
#include "fcfsalis/rates.hpp"
#include "fcfsalis/report_io.hpp"
#include "fcfsalis/simcore.hpp"
#include "fcfsalis/stats.hpp"

namespace fcfsalis::cli {

// Exit codes: 0 ok, 1 usage/parse error, 2 resource pooling violation,
// 3 validation failure.
enum ExitCode { kOk = 0, kUsage = 1, kCrpViolation = 2, kValidationFailure = 3 };

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
    std::optional<std::int64_t> customers;
    std::optional<std::int64_t> warmup;
    int threads = 0; // 0 = hardware concurrency
    std::string tolerance_file;
    double max_events = 2e9;
};

namespace detail {

inline std::string server_set_names(const ScenarioConfig& config, ServerSet set) {
    std::string out = "{";
    bool first = true;
    for (int j : set) {
        if (!first) out += ",";
        out += config.servers[static_cast<std::size_t>(j)];
        first = false;
    }
    return out + "}";
}

inline std::string customer_set_names(const ScenarioConfig& config, CustomerSet set) {
    std::string out = "{";
    bool first = true;
    for (int i : set) {
        if (!first) out += ",";
        out += config.customers[static_cast<std::size_t>(i)].name;
        first = false;
    }
    return out + "}";
}

inline void warn_if_large_enumeration(const ScenarioConfig& config, std::ostream& err) {
    if (config.servers.size() > 8)
        err << "note: exact rates enumerate " << config.servers.size()
            << "! server-type permutations; this may take a while\n";
}

// The type mix the chosen regime feeds to the rate formula (ED thins by
// impatience first) together with the full design output.
struct PlainDesign {
    QoSTarget target;
    DesignResult result;
};

inline PlainDesign run_plain_design(const ScenarioConfig& config, double lambda) {
    SystemSpec spec = config.system_spec(lambda);
    QoSTarget target = config.target();
    return PlainDesign{target, design_for(spec, config.beta_vector(), target)};
}

inline SystemSpec sim_spec_for_graph(const ScenarioConfig& config, double lambda,
                                     const CompatibilityGraph& graph) {
    std::vector<double> alpha;
    std::vector<Distribution> patience;
    for (const auto& c : config.customers) {
        alpha.push_back(c.alpha);
        patience.push_back(c.patience);
    }
    std::vector<std::tuple<int, int, Distribution>> service;
    for (const auto& e : config.edges) {
        int i = config.customer_index(e.customer);
        int j = config.server_index(e.server);
        if (graph.has_edge(i, j)) service.emplace_back(i, j, e.service);
    }
    return SystemSpec(graph, lambda, ProbabilityVector(std::move(alpha)),
                      SystemSpec::interarrival_for(config.interarrival_shape, lambda),
                      std::move(service), std::move(patience));
}

inline std::string format_workforce_row(double lambda, const std::vector<int>& n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%10.6g", lambda);
    std::string row = buf;
    int total = 0;
    for (int v : n) {
        std::snprintf(buf, sizeof buf, "%8d", v);
        row += buf;
        total += v;
    }
    std::snprintf(buf, sizeof buf, "%10d", total);
    row += buf;
    return row;
}

inline void print_rate_matrix(std::ostream& out, const RateMatrix& rates,
                              const ScenarioConfig& config) {
    char buf[64];
    out << "        ";
    for (std::size_t j = 0; j < config.servers.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%10s", config.servers[j].c_str());
        out << buf;
    }
    out << "\n";
    for (std::size_t i = 0; i < config.customers.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%-8s", config.customers[i].name.c_str());
        out << buf;
        for (std::size_t j = 0; j < config.servers.size(); ++j) {
            double r = rates.at(static_cast<int>(i), static_cast<int>(j));
            if (r == 0.0)
                std::snprintf(buf, sizeof buf, "%10s", ".");
            else
                std::snprintf(buf, sizeof buf, "%10.4f", r);
            out << buf;
        }
        out << "\n";
    }
}

} // namespace detail

inline int cmd_rates(const ScenarioConfig& config, const Options& opt, std::ostream& out,
                     std::ostream& err) {
    detail::warn_if_large_enumeration(config, err);
    double lambda = config.lambdas.front();
    if (config.mode == ScenarioConfig::DesignMode::kDiff) {
        SystemSpec spec = config.system_spec(lambda);
        DifferentiatedDesign design = design_differentiated(spec, config.partition());
        out << "matching rates (per-class designs combined by service share):\n";
        detail::print_rate_matrix(out, design.combined_rates, config);
        out << "capacity mu = " << io::num(capacity(design.combined_rates, spec)) << "\n";
        out << "resource pooling: holds within each class\n";
        if (!opt.out_dir.empty()) {
            auto csv = io::open_csv(opt.out_dir, "rates_theory.csv");
            csv << "customer,server,rate\n";
            for (auto [i, j] : design.redesigned.edges())
                csv << config.customers[static_cast<std::size_t>(i)].name << ','
                    << config.servers[static_cast<std::size_t>(j)] << ','
                    << io::num(design.combined_rates.at(i, j)) << "\n";
        }
        return kOk;
    }
    detail::PlainDesign plain = detail::run_plain_design(config, lambda);
    SystemSpec spec = config.system_spec(lambda);
    double b = compute_b(plain.result.adjusted_alpha, plain.result.beta_used, spec.graph());
    out << "matching rates (" << regime_name(plain.target.regime) << " design):\n";
    detail::print_rate_matrix(out, plain.result.rates_used, config);
    out << "resource pooling: pooled\n";
    out << "normalizing constant B = " << io::num(b) << "\n";
    out << "capacity mu = " << io::num(capacity(plain.result.rates_used, spec)) << "\n";
    if (!opt.out_dir.empty()) {
        auto csv = io::open_csv(opt.out_dir, "rates_theory.csv");
        csv << "customer,server,rate\n";
        for (auto [i, j] : spec.graph().edges())
            csv << config.customers[static_cast<std::size_t>(i)].name << ','
                << config.servers[static_cast<std::size_t>(j)] << ','
                << io::num(plain.result.rates_used.at(i, j)) << "\n";
    }
    return kOk;
}

inline int cmd_crp(const ScenarioConfig& config, std::ostream& out) {
    double lambda = config.lambdas.front();
    if (config.mode == ScenarioConfig::DesignMode::kDiff) {
        SystemSpec spec = config.system_spec(lambda);
        design_differentiated(spec, config.partition()); // throws on any class violation
        out << "resource pooling holds within every priority class\n";
        return kOk;
    }
    detail::PlainDesign plain = detail::run_plain_design(config, lambda);
    out << "pooled (" << regime_name(plain.target.regime) << " design inputs)\n";
    return kOk;
}

inline int cmd_decompose(const ScenarioConfig& config, std::ostream& out) {
    double lambda = config.lambdas.front();
    std::vector<double> alpha;
    for (const auto& c : config.customers) alpha.push_back(c.alpha);
    ProbabilityVector alpha_vec{alpha};

    CompatibilityGraph graph = config.graph();
    ProbabilityVector beta = [&] {
        if (config.mode == ScenarioConfig::DesignMode::kDiff) {
            SystemSpec spec = config.system_spec(lambda);
            DifferentiatedDesign design = design_differentiated(spec, config.partition());
            graph = design.redesigned;
            return design.global_beta;
        }
        return config.beta_vector();
    }();

    Decomposition d = decompose(alpha_vec, beta, graph);
    out << d.subsystems.size() << " subsystem(s), service ratios increasing:\n";
    for (std::size_t l = 0; l < d.subsystems.size(); ++l) {
        const Subsystem& sub = d.subsystems[l];
        out << "  " << l + 1 << ". customers " << detail::customer_set_names(config, sub.customers)
            << "  servers " << detail::server_set_names(config, sub.servers)
            << "  beta/alpha = " << io::num(sub.ratio()) << "\n";
    }
    return kOk;
}

inline int cmd_design(const ScenarioConfig& config, const Options& opt, std::ostream& out,
                      std::ostream& err) {
    detail::warn_if_large_enumeration(config, err);
    const bool diff = config.mode == ScenarioConfig::DesignMode::kDiff;
    char buf[64];
    out << "    lambda";
    for (const auto& s : config.servers) {
        std::snprintf(buf, sizeof buf, "%8s", s.c_str());
        out << buf;
    }
    out << "     total\n";

    std::filesystem::path dir = opt.out_dir;
    std::ofstream workforce_csv, summary_csv;
    if (!opt.out_dir.empty()) {
        workforce_csv = io::open_csv(dir, "workforce.csv");
        workforce_csv << "lambda,server,workforce_real,workforce\n";
        summary_csv = io::open_csv(dir, "summary.csv");
        summary_csv << "lambda,effective_lambda,total\n";
    }
    bool wrote_static = false;
    for (double lambda : config.lambdas) {
        std::vector<int> staff;
        std::vector<double> staff_real;
        double effective = lambda;
        if (diff) {
            SystemSpec spec = config.system_spec(lambda);
            DifferentiatedDesign design = design_differentiated(spec, config.partition());
            staff = design.workforce;
            staff_real = design.workforce_real;
            effective = 0.0;
            for (double le : design.class_effective_lambda) effective += le;
            if (!opt.out_dir.empty() && !wrote_static) {
                auto rates_csv = io::open_csv(dir, "rates_theory.csv");
                rates_csv << "customer,server,rate\n";
                for (auto [i, j] : design.redesigned.edges())
                    rates_csv << config.customers[static_cast<std::size_t>(i)].name << ','
                              << config.servers[static_cast<std::size_t>(j)] << ','
                              << io::num(design.combined_rates.at(i, j)) << "\n";
                auto cls_csv = io::open_csv(dir, "classes.csv");
                cls_csv << "class,regime,target,share_of_services\n";
                double total_eff = effective;
                for (std::size_t l = 0; l < design.per_class.size(); ++l) {
                    const auto& cls = config.classes[l];
                    cls_csv << (cls.name.empty() ? std::to_string(l + 1) : cls.name) << ','
                            << regime_name(cls.target.regime) << ','
                            << io::num(cls.target.value) << ','
                            << io::num(design.class_effective_lambda[l] / total_eff) << "\n";
                }
                wrote_static = true;
            }
        } else {
            detail::PlainDesign plain = detail::run_plain_design(config, lambda);
            staff = plain.result.workforce;
            staff_real = plain.result.workforce_real;
            effective = plain.result.effective_lambda;
            if (!opt.out_dir.empty() && !wrote_static) {
                auto rates_csv = io::open_csv(dir, "rates_theory.csv");
                rates_csv << "customer,server,rate\n";
                for (auto [i, j] : config.graph().edges())
                    rates_csv << config.customers[static_cast<std::size_t>(i)].name << ','
                              << config.servers[static_cast<std::size_t>(j)] << ','
                              << io::num(plain.result.rates_used.at(i, j)) << "\n";
                auto alpha_csv = io::open_csv(dir, "adjusted_alpha.csv");
                alpha_csv << "customer,alpha_adjusted,abandon_prediction\n";
                for (std::size_t i = 0; i < config.customers.size(); ++i)
                    alpha_csv << config.customers[i].name << ','
                              << io::num(plain.result.adjusted_alpha[static_cast<int>(i)]) << ','
                              << io::num(plain.result.abandonment_prediction[i]) << "\n";
                wrote_static = true;
            }
        }
        out << detail::format_workforce_row(lambda, staff) << "\n";
        if (!opt.out_dir.empty()) {
            for (std::size_t j = 0; j < staff.size(); ++j)
                workforce_csv << io::num(lambda) << ',' << config.servers[j] << ','
                              << io::num(staff_real[j]) << ',' << staff[j] << "\n";
            int total = 0;
            for (int n : staff) total += n;
            summary_csv << io::num(lambda) << ',' << io::num(effective) << ',' << total << "\n";
        }
    }
    return kOk;
}

namespace detail {

struct SimulationOutcome {
    SimulationReport report;
    std::optional<DeviationTable> deviations;
};

inline SimulationOutcome run_simulation(const ScenarioConfig& config, const Options& opt,
                                        const ComparisonTolerances& tol, std::ostream& err) {
    if (config.lambdas.size() != 1)
        throw std::invalid_argument("simulate: exactly one lambda required (design can take a list)");
    double lambda = config.lambdas.front();

    std::int64_t total = opt.customers.value_or(config.sim_customers);
    std::int64_t warmup = opt.warmup.value_or(config.sim_warmup);
    int reps = opt.replications.value_or(config.sim_replications);
    std::uint64_t seed = opt.seed.value_or(config.sim_seed);
    double est_events = 3.0 * static_cast<double>(total) * static_cast<double>(reps);
    if (est_events > opt.max_events)
        throw std::invalid_argument(
            "simulate: estimated event count " + std::to_string(est_events) +
            " exceeds the --max-events budget; lower replications/customers or raise it");

    int threads = opt.threads > 0 ? opt.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    const bool diff = config.mode == ScenarioConfig::DesignMode::kDiff;
    const bool has_design = config.mode != ScenarioConfig::DesignMode::kNone;
    if (!has_design && config.workforce.empty())
        throw std::invalid_argument("simulate: need a design block or an explicit workforce");

    SimConfig sim{[&] {
                      if (diff) {
                          SystemSpec spec = config.system_spec(lambda);
                          DifferentiatedDesign d = design_differentiated(spec, config.partition());
                          return sim_spec_for_graph(config, lambda, d.redesigned);
                      }
                      return config.system_spec(lambda);
                  }(),
                  {},
                  total,
                  warmup,
                  seed};

    std::optional<DifferentiatedDesign> diff_design;
    std::optional<PlainDesign> plain;
    if (diff) {
        SystemSpec spec = config.system_spec(lambda);
        diff_design = design_differentiated(spec, config.partition());
        sim.workforce = diff_design->workforce;
    } else if (has_design) {
        plain = run_plain_design(config, lambda);
        sim.workforce = plain->result.workforce;
    }
    if (!config.workforce.empty()) sim.workforce = config.workforce_vector();

    // Histogram bins default to a twentieth of the design target.
    sim.wait_bin_width = config.sim_wait_bin > 0.0 ? config.sim_wait_bin : 0.05;
    sim.idle_bin_width = config.sim_idle_bin > 0.0 ? config.sim_idle_bin : 0.05;
    if (plain && config.sim_wait_bin <= 0.0 &&
        plain->target.regime == ServiceRegime::kEfficiencyDriven)
        sim.wait_bin_width = plain->target.value / 20.0;
    if (plain && config.sim_idle_bin <= 0.0 &&
        plain->target.regime == ServiceRegime::kQualityDriven)
        sim.idle_bin_width = plain->target.value / 20.0;

    err << "running " << reps << " replication(s) x " << total << " customers on " << threads
        << " thread(s)\n";
    std::vector<RawReplicationStats> raw = run_replications(sim, reps, threads);
    SimulationOutcome outcome{aggregate(raw), std::nullopt};
    if (diff)
        outcome.deviations = compare_to_design(outcome.report, *diff_design, config.partition(), tol);
    else if (has_design)
        outcome.deviations =
            compare_to_design(outcome.report, plain->result, plain->target, sim.spec, tol);
    return outcome;
}

} // namespace detail

inline int cmd_simulate(const ScenarioConfig& config, const Options& opt, std::ostream& out,
                        std::ostream& err) {
    detail::SimulationOutcome outcome = detail::run_simulation(config, opt, {}, err);
    out << report_text(outcome.report);
    if (!opt.out_dir.empty()) {
        write_report_csvs(outcome.report, opt.out_dir);
        if (outcome.deviations) write_deviation_csv(*outcome.deviations, opt.out_dir);
    }
    if (outcome.deviations) {
        out << "\ndesign deviations:\n" << deviation_text(*outcome.deviations);
    }
    return kOk;
}

inline int cmd_validate(const ScenarioConfig& config, const Options& opt, std::ostream& out,
                        std::ostream& err) {
    ComparisonTolerances tol;
    if (!opt.tolerance_file.empty()) {
        std::ifstream in(opt.tolerance_file);
        if (!in) throw std::runtime_error("cannot open tolerance file " + opt.tolerance_file);
        std::ostringstream buf;
        buf << in.rdbuf();
        tol = parse_tolerances(buf.str());
    }
    detail::SimulationOutcome outcome = detail::run_simulation(config, opt, tol, err);
    if (!outcome.deviations)
        throw std::invalid_argument("validate: a design block is required");
    if (!opt.out_dir.empty()) {
        write_report_csvs(outcome.report, opt.out_dir);
        write_deviation_csv(*outcome.deviations, opt.out_dir);
    }
    for (const DeviationRow& row : outcome.deviations->rows)
        out << (row.pass ? "PASS " : "FAIL ") << row.name << ": expected " << io::num(row.expected)
            << ", got " << io::num(row.actual) << " (tolerance " << io::num(row.tolerance)
            << ")\n";
    bool ok = outcome.deviations->all_pass();
    out << (ok ? "validation passed\n" : "validation FAILED\n");
    return ok ? kOk : kValidationFailure;
}

/// Entry point shared by the binary and the tests.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"staffing design and simulation for multi-skill FCFS-ALIS service systems"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", opt.config_path, "scenario config file")->required();
        cmd->add_option("--out", opt.out_dir, "directory for CSV output (empty to skip)")
            ->capture_default_str();
        return cmd;
    };
    auto add_sim = [&](CLI::App* cmd) {
        cmd->add_option("--seed", opt.seed, "override the config seed");
        cmd->add_option("--reps", opt.replications, "override the replication count");
        cmd->add_option("--customers", opt.customers, "override customers per replication");
        cmd->add_option("--warmup", opt.warmup, "override warm-up customers");
        cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
        cmd->add_option("--tolerance-file", opt.tolerance_file, "tolerance overrides");
        cmd->add_option("--max-events", opt.max_events, "refuse runs above this event estimate")
            ->capture_default_str();
        return cmd;
    };

    CLI::App* rates = add_common(app.add_subcommand("rates", "theoretical matching rates, B, capacity"));
    CLI::App* crp = add_common(app.add_subcommand("crp", "complete resource pooling check"));
    CLI::App* dec = add_common(app.add_subcommand("decompose", "pooled-subsystem decomposition"));
    CLI::App* design = add_common(app.add_subcommand("design", "staffing levels for each lambda"));
    CLI::App* simulate =
        add_sim(add_common(app.add_subcommand("simulate", "run replications and report")));
    CLI::App* validate =
        add_sim(add_common(app.add_subcommand("validate", "design, simulate and check tolerances")));

    std::vector<char*> argv;
    std::string prog = "fcfsalis";
    argv.push_back(prog.data());
    std::vector<std::string> owned = args;
    for (auto& a : owned) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        ScenarioConfig config = parse_scenario_file(opt.config_path);
        if (rates->parsed()) return cmd_rates(config, opt, out, err);
        if (crp->parsed()) return cmd_crp(config, out);
        if (dec->parsed()) return cmd_decompose(config, out);
        if (design->parsed()) return cmd_design(config, opt, out, err);
        if (simulate->parsed()) return cmd_simulate(config, opt, out, err);
        if (validate->parsed()) return cmd_validate(config, opt, out, err);
        err << "error: no command\n";
        return kUsage;
    } catch (const CrpViolationError& e) {
        err << "error: " << e.what() << "\n";
        err << "witness server subset bits: " << e.witness().bits() << "\n";
        return kCrpViolation;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kCrpViolation;
    } catch (const ParseError& e) {
        err << "error: " << opt.config_path << ": " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace fcfsalis::cli
