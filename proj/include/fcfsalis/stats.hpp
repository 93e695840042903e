#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcfsalis/design.hpp"
#include "fcfsalis/rates.hpp"
#include "fcfsalis/simcore.hpp"

namespace fcfsalis {

/// Aggregate of all replications.  Point estimates are pooled (total counts
/// over total services), which makes them exactly permutation-invariant;
/// standard errors come from the across-replication spread.
struct SimulationReport {
    int replications = 0;
    int customer_types = 0;
    int server_types = 0;

    RateMatrix rates;              // pooled empirical matching rates
    std::vector<double> rate_se;   // I*J, NaN when replications < 2
    std::uint64_t total_services = 0;

    double wait_mean = 0.0;
    double wait_sd = 0.0;
    std::uint64_t wait_count = 0;
    std::vector<double> wait_mean_by_type;
    std::vector<std::uint64_t> wait_count_by_type;

    std::vector<double> abandon_frac;            // per customer type
    std::vector<std::uint64_t> measured_arrivals;

    double idle_mean = 0.0;
    double idle_sd = 0.0;
    std::uint64_t idle_count = 0;
    std::vector<double> idle_mean_by_server_type;

    double no_wait_frac = 0.0;
    double no_idle_frac = 0.0;

    Histogram wait_hist;
    Histogram idle_hist;

    double rate(int i, int j) const { return rates.at(i, j); }
};

inline SimulationReport aggregate(const std::vector<RawReplicationStats>& reps) {
    if (reps.empty()) throw std::invalid_argument("aggregate: no replications");
    const int ni = reps.front().customer_types;
    const int nj = reps.front().server_types;
    for (const auto& r : reps)
        if (r.customer_types != ni || r.server_types != nj)
            throw std::invalid_argument("aggregate: replication dimensions differ");

    RawReplicationStats pooled = reps.front();
    for (std::size_t r = 1; r < reps.size(); ++r) pooled.merge(reps[r]);

    SimulationReport rep{static_cast<int>(reps.size()),
                         ni,
                         nj,
                         RateMatrix(ni, nj),
                         {},
                         0,
                         0.0,
                         0.0,
                         0,
                         {},
                         {},
                         {},
                         {},
                         0.0,
                         0.0,
                         0,
                         {},
                         0.0,
                         0.0,
                         pooled.wait_hist,
                         pooled.idle_hist};

    rep.total_services = pooled.measured_services();
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j)
            rep.rates.at(i, j) =
                rep.total_services
                    ? static_cast<double>(
                          pooled.match_counts[static_cast<std::size_t>(i * nj + j)]) /
                          static_cast<double>(rep.total_services)
                    : 0.0;

    // Per-entry standard error of the mean across per-replication ratios.
    rep.rate_se.assign(static_cast<std::size_t>(ni * nj),
                       std::numeric_limits<double>::quiet_NaN());
    if (reps.size() >= 2) {
        for (int k = 0; k < ni * nj; ++k) {
            double sum = 0.0, sum_sq = 0.0;
            for (const auto& r : reps) {
                double total = static_cast<double>(r.measured_services());
                double ratio = total > 0.0
                                   ? static_cast<double>(r.match_counts[static_cast<std::size_t>(k)]) / total
                                   : 0.0;
                sum += ratio;
                sum_sq += ratio * ratio;
            }
            double n = static_cast<double>(reps.size());
            double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
            rep.rate_se[static_cast<std::size_t>(k)] = std::sqrt(var / n);
        }
    }

    rep.wait_mean = pooled.wait_overall.mean();
    rep.wait_sd = pooled.wait_overall.stddev();
    rep.wait_count = pooled.wait_overall.count;
    for (int i = 0; i < ni; ++i) {
        rep.wait_mean_by_type.push_back(pooled.wait_by_type[static_cast<std::size_t>(i)].mean());
        rep.wait_count_by_type.push_back(pooled.wait_by_type[static_cast<std::size_t>(i)].count);
        double arr = static_cast<double>(pooled.measured_arrivals[static_cast<std::size_t>(i)]);
        rep.abandon_frac.push_back(
            arr > 0.0 ? static_cast<double>(pooled.abandoned[static_cast<std::size_t>(i)]) / arr
                      : 0.0);
        rep.measured_arrivals.push_back(pooled.measured_arrivals[static_cast<std::size_t>(i)]);
    }
    rep.idle_mean = pooled.idle_overall.mean();
    rep.idle_sd = pooled.idle_overall.stddev();
    rep.idle_count = pooled.idle_overall.count;
    for (int j = 0; j < nj; ++j)
        rep.idle_mean_by_server_type.push_back(
            pooled.idle_by_server_type[static_cast<std::size_t>(j)].mean());
    rep.no_wait_frac = pooled.wait_overall.count
                           ? static_cast<double>(pooled.no_wait) /
                                 static_cast<double>(pooled.wait_overall.count)
                           : 0.0;
    rep.no_idle_frac = pooled.completions_measured
                           ? static_cast<double>(pooled.no_idle) /
                                 static_cast<double>(pooled.completions_measured)
                           : 0.0;
    return rep;
}

/// 95% normal-approximation half-width for a pooled rate entry.
inline double rate_ci_halfwidth(const SimulationReport& rep, int i, int j) {
    double se = rep.rate_se[static_cast<std::size_t>(i * rep.server_types + j)];
    return 1.96 * se;
}

struct DeviationRow {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double deviation = 0.0; // actual - expected
    double tolerance = 0.0; // absolute bound that was applied
    bool pass = true;
};

struct DeviationTable {
    std::vector<DeviationRow> rows;
    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

/// Tolerances for design-versus-simulation comparison; absolute on rates and
/// abandonment, relative on the wait/idle targets, floors on the no-wait
/// fraction (QD) and no-idle fraction (ED).
struct ComparisonTolerances {
    double rate_abs = 0.005;
    double wait_rel = 0.05;
    double idle_rel = 0.10;
    double abandon_abs = 0.01;
    double no_wait_min = 0.96;
    double no_idle_min = 0.96;
};

namespace detail {

inline void add_rate_rows(DeviationTable& table, const SimulationReport& report,
                          const RateMatrix& theory, const CompatibilityGraph& graph,
                          double rate_abs) {
    for (auto [i, j] : graph.edges()) {
        DeviationRow row;
        row.name = "rate(c" + std::to_string(i + 1) + ",s" + std::to_string(j + 1) + ")";
        row.expected = theory.at(i, j);
        row.actual = report.rate(i, j);
        row.deviation = row.actual - row.expected;
        row.tolerance = rate_abs;
        row.pass = std::fabs(row.deviation) <= rate_abs;
        table.rows.push_back(row);
    }
}

inline void add_target_rows(DeviationTable& table, const QoSTarget& target, double wait_mean,
                            double idle_mean, double no_wait, double no_idle,
                            const ComparisonTolerances& tol, const std::string& prefix) {
    switch (target.regime) {
    case ServiceRegime::kEfficiencyDriven: {
        DeviationRow wait;
        wait.name = prefix + "mean_wait";
        wait.expected = target.value;
        wait.actual = wait_mean;
        wait.deviation = wait_mean - target.value;
        wait.tolerance = tol.wait_rel * target.value;
        wait.pass = std::fabs(wait.deviation) <= wait.tolerance;
        table.rows.push_back(wait);
        DeviationRow busy;
        busy.name = prefix + "no_idle_frac";
        busy.expected = 1.0;
        busy.actual = no_idle;
        busy.deviation = no_idle - 1.0;
        busy.tolerance = 1.0 - tol.no_idle_min;
        busy.pass = no_idle >= tol.no_idle_min;
        table.rows.push_back(busy);
        break;
    }
    case ServiceRegime::kQualityDriven: {
        DeviationRow idle;
        idle.name = prefix + "mean_idle";
        idle.expected = target.value;
        idle.actual = idle_mean;
        idle.deviation = idle_mean - target.value;
        idle.tolerance = tol.idle_rel * target.value;
        idle.pass = std::fabs(idle.deviation) <= idle.tolerance;
        table.rows.push_back(idle);
        DeviationRow fresh;
        fresh.name = prefix + "no_wait_frac";
        fresh.expected = 1.0;
        fresh.actual = no_wait;
        fresh.deviation = no_wait - 1.0;
        fresh.tolerance = 1.0 - tol.no_wait_min;
        fresh.pass = no_wait >= tol.no_wait_min;
        table.rows.push_back(fresh);
        break;
    }
    case ServiceRegime::kQualityEfficiencyDriven:
        break; // no wait or idle target to hold the simulation to
    }
}

} // namespace detail

/// Deviation table for a pooled design: per-edge rate deviations, the
/// wait/idle target when the regime has one, and per-type abandonment against
/// the design prediction.
inline DeviationTable compare_to_design(const SimulationReport& report, const DesignResult& design,
                                        const QoSTarget& target, const SystemSpec& spec,
                                        const ComparisonTolerances& tol = {}) {
    if (report.customer_types != spec.graph().customer_count() ||
        report.server_types != spec.graph().server_count())
        throw std::invalid_argument("compare: report and spec dimensions differ");
    DeviationTable table;
    detail::add_rate_rows(table, report, design.rates_used, spec.graph(), tol.rate_abs);
    detail::add_target_rows(table, target, report.wait_mean, report.idle_mean,
                            report.no_wait_frac, report.no_idle_frac, tol, "");
    for (int i = 0; i < report.customer_types; ++i) {
        DeviationRow row;
        row.name = "abandon(c" + std::to_string(i + 1) + ")";
        row.expected = design.abandonment_prediction[static_cast<std::size_t>(i)];
        row.actual = report.abandon_frac[static_cast<std::size_t>(i)];
        row.deviation = row.actual - row.expected;
        row.tolerance = tol.abandon_abs;
        row.pass = std::fabs(row.deviation) <= tol.abandon_abs;
        table.rows.push_back(row);
    }
    return table;
}

/// Deviation table for a differentiated design: rates against the combined
/// theoretical matrix, then per-class wait or idle targets computed from the
/// per-type statistics of that class.
inline DeviationTable compare_to_design(const SimulationReport& report,
                                        const DifferentiatedDesign& design,
                                        const PriorityPartition& partition,
                                        const ComparisonTolerances& tol = {}) {
    DeviationTable table;
    detail::add_rate_rows(table, report, design.combined_rates, design.redesigned, tol.rate_abs);
    for (std::size_t l = 0; l < partition.classes.size(); ++l) {
        const PriorityClass& cls = partition.classes[l];
        double wait_sum = 0.0, idle_sum = 0.0;
        std::uint64_t wait_n = 0, idle_n = 0;
        for (int i : cls.customers) {
            wait_sum += report.wait_mean_by_type[static_cast<std::size_t>(i)] *
                        static_cast<double>(report.wait_count_by_type[static_cast<std::size_t>(i)]);
            wait_n += report.wait_count_by_type[static_cast<std::size_t>(i)];
        }
        for (int j : cls.servers) {
            // Per-type idle means are weighted equally here; class servers
            // share one idle-time distribution under ALIS.
            idle_sum += report.idle_mean_by_server_type[static_cast<std::size_t>(j)];
            ++idle_n;
        }
        double wait_mean = wait_n ? wait_sum / static_cast<double>(wait_n) : 0.0;
        double idle_mean = idle_n ? idle_sum / static_cast<double>(idle_n) : 0.0;
        std::string prefix = "class" + std::to_string(l + 1) + "_";
        detail::add_target_rows(table, cls.target, wait_mean, idle_mean,
                                /*no_wait=*/1.0, /*no_idle=*/1.0, tol, prefix);
        // Per-class no-wait/no-idle fractions are not tracked; the floors
        // above are fed neutral values so only the mean targets are judged.
        if (cls.target.regime == ServiceRegime::kEfficiencyDriven) {
            const DesignResult& d = design.per_class[l];
            int local = 0;
            for (int i : cls.customers) {
                DeviationRow row;
                row.name = prefix + "abandon(c" + std::to_string(i + 1) + ")";
                row.expected = d.abandonment_prediction[static_cast<std::size_t>(local++)];
                row.actual = report.abandon_frac[static_cast<std::size_t>(i)];
                row.deviation = row.actual - row.expected;
                row.tolerance = tol.abandon_abs;
                row.pass = std::fabs(row.deviation) <= tol.abandon_abs;
                table.rows.push_back(row);
            }
        }
    }
    return table;
}

} // namespace fcfsalis
