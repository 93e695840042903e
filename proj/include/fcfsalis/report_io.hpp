#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcfsalis/stats.hpp"

namespace fcfsalis {

namespace io {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::ofstream open_csv(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary); // '\n' endings on every platform
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

} // namespace io

/// One CSV per report section under `dir`: rates, waits, abandonment, idle
/// gaps, the no-wait/no-idle fractions, and the two histograms.  Rows are
/// emitted in type-index order so identical runs give identical bytes.
inline void write_report_csvs(const SimulationReport& rep, const std::filesystem::path& dir) {
    {
        auto out = io::open_csv(dir, "rates.csv");
        out << "customer,server,rate,stderr\n";
        for (int i = 0; i < rep.customer_types; ++i)
            for (int j = 0; j < rep.server_types; ++j) {
                double se = rep.rate_se[static_cast<std::size_t>(i * rep.server_types + j)];
                out << "c" << i + 1 << ",s" << j + 1 << ',' << io::num(rep.rate(i, j)) << ','
                    << (std::isnan(se) ? "" : io::num(se)) << "\n";
            }
    }
    {
        auto out = io::open_csv(dir, "waits.csv");
        out << "scope,mean,sd,count\n";
        out << "overall," << io::num(rep.wait_mean) << ',' << io::num(rep.wait_sd) << ','
            << rep.wait_count << "\n";
        for (int i = 0; i < rep.customer_types; ++i)
            out << "c" << i + 1 << ',' << io::num(rep.wait_mean_by_type[static_cast<std::size_t>(i)])
                << ",," << rep.wait_count_by_type[static_cast<std::size_t>(i)] << "\n";
    }
    {
        auto out = io::open_csv(dir, "abandonment.csv");
        out << "customer,fraction,measured_arrivals\n";
        for (int i = 0; i < rep.customer_types; ++i)
            out << "c" << i + 1 << ',' << io::num(rep.abandon_frac[static_cast<std::size_t>(i)])
                << ',' << rep.measured_arrivals[static_cast<std::size_t>(i)] << "\n";
    }
    {
        auto out = io::open_csv(dir, "idle.csv");
        out << "scope,mean,sd,count\n";
        out << "overall," << io::num(rep.idle_mean) << ',' << io::num(rep.idle_sd) << ','
            << rep.idle_count << "\n";
        for (int j = 0; j < rep.server_types; ++j)
            out << "s" << j + 1 << ','
                << io::num(rep.idle_mean_by_server_type[static_cast<std::size_t>(j)]) << ",,\n";
    }
    {
        auto out = io::open_csv(dir, "fractions.csv");
        out << "statistic,value\n";
        out << "no_wait," << io::num(rep.no_wait_frac) << "\n";
        out << "no_idle," << io::num(rep.no_idle_frac) << "\n";
        out << "replications," << rep.replications << "\n";
        out << "total_services," << rep.total_services << "\n";
    }
    auto write_hist = [&](const Histogram& h, const std::string& name) {
        auto out = io::open_csv(dir, name);
        out << "bin_start,bin_end,count\n";
        out << "0,0," << h.zero_count << "\n";
        for (std::size_t k = 0; k < h.bins.size(); ++k)
            if (h.bins[k])
                out << io::num(static_cast<double>(k) * h.width) << ','
                    << io::num(static_cast<double>(k + 1) * h.width) << ',' << h.bins[k] << "\n";
    };
    write_hist(rep.wait_hist, "wait_hist.csv");
    write_hist(rep.idle_hist, "idle_hist.csv");
}

inline void write_deviation_csv(const DeviationTable& table, const std::filesystem::path& dir,
                                const std::string& name = "deviations.csv") {
    auto out = io::open_csv(dir, name);
    out << "name,expected,actual,deviation,tolerance,pass\n";
    for (const DeviationRow& r : table.rows)
        out << r.name << ',' << io::num(r.expected) << ',' << io::num(r.actual) << ','
            << io::num(r.deviation) << ',' << io::num(r.tolerance) << ','
            << (r.pass ? "yes" : "no") << "\n";
}

/// Human-readable summary of a report.
inline std::string report_text(const SimulationReport& rep) {
    std::ostringstream out;
    char buf[160];
    out << "replications: " << rep.replications << ", services measured: " << rep.total_services
        << "\n\nmatching rates (stderr):\n      ";
    for (int j = 0; j < rep.server_types; ++j) {
        std::snprintf(buf, sizeof buf, "%12s", ("s" + std::to_string(j + 1)).c_str());
        out << buf;
    }
    out << "\n";
    for (int i = 0; i < rep.customer_types; ++i) {
        std::snprintf(buf, sizeof buf, "%-6s", ("c" + std::to_string(i + 1)).c_str());
        out << buf;
        for (int j = 0; j < rep.server_types; ++j) {
            double r = rep.rate(i, j);
            if (r == 0.0)
                std::snprintf(buf, sizeof buf, "%12s", ".");
            else
                std::snprintf(buf, sizeof buf, "%12.4f", r);
            out << buf;
        }
        out << "\n";
    }
    std::snprintf(buf, sizeof buf, "\nwaits:  mean %.6g  sd %.6g  (n=%llu, zero-wait %.4f)\n",
                  rep.wait_mean, rep.wait_sd,
                  static_cast<unsigned long long>(rep.wait_count), rep.no_wait_frac);
    out << buf;
    std::snprintf(buf, sizeof buf, "idles:  mean %.6g  sd %.6g  (n=%llu, zero-idle %.4f)\n",
                  rep.idle_mean, rep.idle_sd,
                  static_cast<unsigned long long>(rep.idle_count), rep.no_idle_frac);
    out << buf;
    out << "abandonment:";
    for (int i = 0; i < rep.customer_types; ++i) {
        std::snprintf(buf, sizeof buf, "  c%d %.4f", i + 1,
                      rep.abandon_frac[static_cast<std::size_t>(i)]);
        out << buf;
    }
    out << "\n";
    return out.str();
}

inline std::string deviation_text(const DeviationTable& table) {
    std::ostringstream out;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-24s %12s %12s %12s %12s  %s\n", "check", "expected",
                  "actual", "deviation", "tolerance", "pass");
    out << buf;
    for (const DeviationRow& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%-24s %12.5g %12.5g %12.5g %12.5g  %s\n", r.name.c_str(),
                      r.expected, r.actual, r.deviation, r.tolerance, r.pass ? "yes" : "NO");
        out << buf;
    }
    return out.str();
}

} // namespace fcfsalis
