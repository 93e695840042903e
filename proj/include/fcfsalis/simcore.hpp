#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fcfsalis/model.hpp"
#include "fcfsalis/rng.hpp"

namespace fcfsalis {

/// One replication of the full system: spec, integer staffing per server
/// type, run length in customers, warm-up removal, seed.
struct SimConfig {
    SystemSpec spec;
    std::vector<int> workforce;
    std::int64_t total_customers = 100000;
    std::int64_t warmup_customers = 20000;
    std::uint64_t seed = 1;
    double wait_bin_width = 0.05;
    double idle_bin_width = 0.05;
    bool validate_invariants = false; // per-event work-conservation check, tests only
    bool record_trace = false;        // per-service records, tests only

    void validate() const {
        if (static_cast<int>(workforce.size()) != spec.graph().server_count())
            throw std::invalid_argument("sim config: one workforce entry per server type");
        for (int n : workforce)
            if (n < 1) throw std::invalid_argument("sim config: workforce entries must be >= 1");
        if (total_customers < 1)
            throw std::invalid_argument("sim config: total customers must be positive");
        if (warmup_customers < 0 || warmup_customers >= total_customers)
            throw std::invalid_argument("sim config: need 0 <= warmup < total customers");
        if (!(wait_bin_width > 0.0) || !(idle_bin_width > 0.0))
            throw std::invalid_argument("sim config: histogram bin widths must be positive");
    }
};

/// Running sum/sum-of-squares accumulator.
struct StreamStats {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    void merge(const StreamStats& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
    double variance() const {
        if (count < 2) return 0.0;
        double n = static_cast<double>(count);
        return std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    }
    double stddev() const { return std::sqrt(variance()); }
};

/// Fixed-width histogram of positive values; exact zeros are kept as a
/// separate scalar.  The bin range grows to cover whatever is observed.
struct Histogram {
    double width = 0.05;
    std::uint64_t zero_count = 0;
    std::vector<std::uint64_t> bins; // bin k covers (k*width, (k+1)*width] for k>0 at v>0

    void add(double v) {
        if (v <= 0.0) {
            ++zero_count;
            return;
        }
        auto idx = static_cast<std::size_t>(v / width);
        if (idx >= bins.size()) bins.resize(idx + 1, 0);
        ++bins[idx];
    }
    void merge(const Histogram& o) {
        zero_count += o.zero_count;
        if (o.bins.size() > bins.size()) bins.resize(o.bins.size(), 0);
        for (std::size_t k = 0; k < o.bins.size(); ++k) bins[k] += o.bins[k];
    }
    std::uint64_t total() const {
        std::uint64_t t = zero_count;
        for (auto b : bins) t += b;
        return t;
    }
};

struct ServiceRecord {
    double arrival = 0.0;
    double start = 0.0;
    int customer_type = 0;
    int server_type = 0;
};

/// Everything measured in one replication, restricted to post-warm-up
/// customers (a service or idle gap belongs to the customer it serves).
/// The *_total counters cover the whole run for conservation checks.
struct RawReplicationStats {
    int customer_types = 0;
    int server_types = 0;

    std::vector<std::uint64_t> match_counts;      // I*J, counted at completion
    std::vector<std::uint64_t> measured_arrivals; // per customer type
    std::vector<std::uint64_t> abandoned;         // per customer type
    StreamStats wait_overall;
    std::vector<StreamStats> wait_by_type;
    StreamStats idle_overall;
    std::vector<StreamStats> idle_by_server_type;
    std::uint64_t no_wait = 0;              // measured service entries with zero wait
    std::uint64_t no_idle = 0;              // measured completions followed immediately by work
    std::uint64_t completions_measured = 0;
    Histogram wait_hist;
    Histogram idle_hist;

    std::vector<std::uint64_t> arrivals_total;  // whole run, per customer type
    std::vector<std::uint64_t> served_total;    // completions, whole run
    std::vector<std::uint64_t> abandoned_total; // whole run

    std::vector<ServiceRecord> trace;

    std::uint64_t measured_services() const {
        std::uint64_t t = 0;
        for (auto c : match_counts) t += c;
        return t;
    }

    void merge(const RawReplicationStats& o) {
        for (std::size_t k = 0; k < match_counts.size(); ++k) match_counts[k] += o.match_counts[k];
        for (std::size_t k = 0; k < measured_arrivals.size(); ++k) {
            measured_arrivals[k] += o.measured_arrivals[k];
            abandoned[k] += o.abandoned[k];
            arrivals_total[k] += o.arrivals_total[k];
            served_total[k] += o.served_total[k];
            abandoned_total[k] += o.abandoned_total[k];
            wait_by_type[k].merge(o.wait_by_type[k]);
        }
        for (std::size_t k = 0; k < idle_by_server_type.size(); ++k)
            idle_by_server_type[k].merge(o.idle_by_server_type[k]);
        wait_overall.merge(o.wait_overall);
        idle_overall.merge(o.idle_overall);
        no_wait += o.no_wait;
        no_idle += o.no_idle;
        completions_measured += o.completions_measured;
        wait_hist.merge(o.wait_hist);
        idle_hist.merge(o.idle_hist);
    }

    bool operator==(const RawReplicationStats& o) const {
        return match_counts == o.match_counts && measured_arrivals == o.measured_arrivals &&
               abandoned == o.abandoned && wait_overall.sum == o.wait_overall.sum &&
               wait_overall.count == o.wait_overall.count &&
               idle_overall.sum == o.idle_overall.sum &&
               idle_overall.count == o.idle_overall.count && no_wait == o.no_wait &&
               no_idle == o.no_idle && completions_measured == o.completions_measured &&
               arrivals_total == o.arrivals_total && served_total == o.served_total &&
               abandoned_total == o.abandoned_total;
    }
};

namespace detail {

// Event-driven core for one replication.  FCFS: a freeing server takes the
// longest-waiting compatible customer.  ALIS: an arriving customer takes the
// longest-idle compatible server.  Events are processed in (time, sequence)
// order so runs are deterministic for a given seed.
class SimulationEngine {
public:
    SimulationEngine(const SimConfig& config, std::uint64_t replication)
        : cfg_(config),
          interarrival_rng_(SplitMix64::substream(config.seed, replication, 0)),
          type_rng_(SplitMix64::substream(config.seed, replication, 1)),
          service_rng_(SplitMix64::substream(config.seed, replication, 2)),
          patience_rng_(SplitMix64::substream(config.seed, replication, 3)) {
        cfg_.validate();
        const CompatibilityGraph& g = cfg_.spec.graph();
        ni_ = g.customer_count();
        nj_ = g.server_count();
        alpha_cum_.resize(static_cast<std::size_t>(ni_));
        double acc = 0.0;
        for (int i = 0; i < ni_; ++i) alpha_cum_[static_cast<std::size_t>(i)] = (acc += cfg_.spec.alpha()[i]);
        compat_mask_.resize(static_cast<std::size_t>(nj_));
        for (int j = 0; j < nj_; ++j) compat_mask_[static_cast<std::size_t>(j)] = g.customers_of(j).bits();

        stats_.customer_types = ni_;
        stats_.server_types = nj_;
        stats_.match_counts.assign(static_cast<std::size_t>(ni_ * nj_), 0);
        stats_.measured_arrivals.assign(static_cast<std::size_t>(ni_), 0);
        stats_.abandoned.assign(static_cast<std::size_t>(ni_), 0);
        stats_.wait_by_type.assign(static_cast<std::size_t>(ni_), StreamStats{});
        stats_.idle_by_server_type.assign(static_cast<std::size_t>(nj_), StreamStats{});
        stats_.arrivals_total.assign(static_cast<std::size_t>(ni_), 0);
        stats_.served_total.assign(static_cast<std::size_t>(ni_), 0);
        stats_.abandoned_total.assign(static_cast<std::size_t>(ni_), 0);
        stats_.wait_hist.width = cfg_.wait_bin_width;
        stats_.idle_hist.width = cfg_.idle_bin_width;

        int total_servers = 0;
        for (int n : cfg_.workforce) total_servers += n;
        servers_.reserve(static_cast<std::size_t>(total_servers));
        for (int j = 0; j < nj_; ++j)
            for (int k = 0; k < cfg_.workforce[static_cast<std::size_t>(j)]; ++k)
                servers_.push_back(Server{j});
        idle_next_.assign(servers_.size(), -1);
        idle_prev_.assign(servers_.size(), -1);
        customers_.reserve(static_cast<std::size_t>(cfg_.total_customers));
    }

    RawReplicationStats run() {
        // Empty start: every server idle since time zero, in index order.
        for (std::size_t s = 0; s < servers_.size(); ++s) idle_push_back(static_cast<int>(s));
        schedule(cfg_.spec.interarrival().sample(interarrival_rng_), kArrival, 0);
        while (!events_.empty()) {
            Event ev = events_.top();
            events_.pop();
            now_ = ev.time;
            switch (ev.kind) {
            case kArrival: handle_arrival(); break;
            case kCompletion: handle_completion(ev.target); break;
            case kAbandonment: handle_abandonment(ev.target); break;
            }
            if (cfg_.validate_invariants) assert_work_conservation();
        }
        return std::move(stats_);
    }

private:
    static constexpr int kArrival = 0;
    static constexpr int kCompletion = 1;
    static constexpr int kAbandonment = 2;

    enum class CustomerStatus : std::uint8_t { kWaiting, kInService, kAbandoned, kServed };

    struct Customer {
        int type = 0;
        double arrival = 0.0;
        double deadline = 0.0;
        CustomerStatus status = CustomerStatus::kWaiting;
        bool measured = false;
    };

    struct Server {
        int type = 0;
        bool busy = false;
        std::int64_t customer = -1;
        double last_completion = 0.0;
        bool gap_pending = false;     // a completion awaiting its next start
        bool gap_measured = false;    // the completed service was measured
    };

    struct Event {
        double time;
        std::uint64_t seq;
        int kind;
        std::int64_t target;
    };
    struct EventAfter {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    void schedule(double time, int kind, std::int64_t target) {
        events_.push(Event{time, next_seq_++, kind, target});
    }

    int draw_customer_type() {
        double u = type_rng_.next_double();
        for (std::size_t i = 0; i + 1 < alpha_cum_.size(); ++i)
            if (u < alpha_cum_[i]) return static_cast<int>(i);
        return ni_ - 1;
    }

    void handle_arrival() {
        std::int64_t id = static_cast<std::int64_t>(customers_.size());
        Customer cust;
        cust.type = draw_customer_type();
        cust.arrival = now_;
        cust.deadline = now_ + cfg_.spec.patience(cust.type).sample(patience_rng_);
        cust.measured = arrivals_seen_ >= cfg_.warmup_customers;
        customers_.push_back(cust);
        ++arrivals_seen_;
        ++stats_.arrivals_total[static_cast<std::size_t>(cust.type)];
        if (cust.measured) ++stats_.measured_arrivals[static_cast<std::size_t>(cust.type)];

        int server = find_longest_idle_compatible(cust.type);
        if (server >= 0) {
            idle_remove(server);
            start_service(server, id);
        } else {
            line_.push_back(id);
            ++line_live_;
            schedule(cust.deadline, kAbandonment, id);
        }
        if (arrivals_seen_ < cfg_.total_customers)
            schedule(now_ + cfg_.spec.interarrival().sample(interarrival_rng_), kArrival, 0);
    }

    void handle_completion(std::int64_t server_id) {
        Server& srv = servers_[static_cast<std::size_t>(server_id)];
        Customer& done = customers_[static_cast<std::size_t>(srv.customer)];
        done.status = CustomerStatus::kServed;
        ++stats_.served_total[static_cast<std::size_t>(done.type)];
        if (done.measured) {
            ++stats_.match_counts[static_cast<std::size_t>(done.type * nj_ + srv.type)];
            ++stats_.completions_measured;
        }
        srv.busy = false;
        srv.customer = -1;
        srv.last_completion = now_;
        srv.gap_pending = true;
        srv.gap_measured = done.measured;

        std::int64_t next = pop_longest_waiting_compatible(srv.type);
        if (next >= 0) {
            start_service(static_cast<int>(server_id), next);
        } else {
            idle_push_back(static_cast<int>(server_id));
        }
    }

    void handle_abandonment(std::int64_t customer_id) {
        Customer& cust = customers_[static_cast<std::size_t>(customer_id)];
        if (cust.status != CustomerStatus::kWaiting) return; // already in service or served
        cust.status = CustomerStatus::kAbandoned;
        --line_live_;
        ++stats_.abandoned_total[static_cast<std::size_t>(cust.type)];
        if (cust.measured) ++stats_.abandoned[static_cast<std::size_t>(cust.type)];
        maybe_compact_line();
    }

    void start_service(int server_id, std::int64_t customer_id) {
        Server& srv = servers_[static_cast<std::size_t>(server_id)];
        Customer& cust = customers_[static_cast<std::size_t>(customer_id)];
        if (srv.gap_pending) {
            double gap = now_ - srv.last_completion;
            if (srv.gap_measured) {
                stats_.idle_overall.add(gap);
                stats_.idle_by_server_type[static_cast<std::size_t>(srv.type)].add(gap);
                stats_.idle_hist.add(gap);
                if (gap == 0.0) ++stats_.no_idle;
            }
            srv.gap_pending = false;
        }
        double wait = now_ - cust.arrival;
        if (cust.measured) {
            stats_.wait_overall.add(wait);
            stats_.wait_by_type[static_cast<std::size_t>(cust.type)].add(wait);
            stats_.wait_hist.add(wait);
            if (wait == 0.0) ++stats_.no_wait;
        }
        if (cfg_.record_trace)
            stats_.trace.push_back(ServiceRecord{cust.arrival, now_, cust.type, srv.type});
        cust.status = CustomerStatus::kInService;
        srv.busy = true;
        srv.customer = customer_id;
        double duration = cfg_.spec.service(cust.type, srv.type).sample(service_rng_);
        schedule(now_ + duration, kCompletion, server_id);
    }

    // Idle servers form a FIFO linked over server ids; the head has been idle
    // the longest.  Idle-since values are nondecreasing along the list.
    void idle_push_back(int s) {
        idle_prev_[static_cast<std::size_t>(s)] = idle_tail_;
        idle_next_[static_cast<std::size_t>(s)] = -1;
        if (idle_tail_ >= 0)
            idle_next_[static_cast<std::size_t>(idle_tail_)] = s;
        else
            idle_head_ = s;
        idle_tail_ = s;
    }

    void idle_remove(int s) {
        int p = idle_prev_[static_cast<std::size_t>(s)];
        int n = idle_next_[static_cast<std::size_t>(s)];
        if (p >= 0)
            idle_next_[static_cast<std::size_t>(p)] = n;
        else
            idle_head_ = n;
        if (n >= 0)
            idle_prev_[static_cast<std::size_t>(n)] = p;
        else
            idle_tail_ = p;
        idle_prev_[static_cast<std::size_t>(s)] = -1;
        idle_next_[static_cast<std::size_t>(s)] = -1;
    }

    int find_longest_idle_compatible(int customer_type) const {
        for (int s = idle_head_; s >= 0; s = idle_next_[static_cast<std::size_t>(s)])
            if ((compat_mask_[static_cast<std::size_t>(servers_[static_cast<std::size_t>(s)].type)] >>
                 customer_type) &
                1u)
                return s;
        return -1;
    }

    std::int64_t pop_longest_waiting_compatible(int server_type) {
        std::uint32_t mask = compat_mask_[static_cast<std::size_t>(server_type)];
        while (line_head_ < line_.size() &&
               customers_[static_cast<std::size_t>(line_[line_head_])].status !=
                   CustomerStatus::kWaiting)
            ++line_head_;
        for (std::size_t k = line_head_; k < line_.size(); ++k) {
            const Customer& cust = customers_[static_cast<std::size_t>(line_[k])];
            if (cust.status != CustomerStatus::kWaiting) continue;
            if ((mask >> cust.type) & 1u) {
                std::int64_t id = line_[k];
                if (k == line_head_)
                    ++line_head_;
                else
                    // Mid-line removal: tombstone the slot; start_service sets
                    // the same status right after.
                    customers_[static_cast<std::size_t>(id)].status = CustomerStatus::kInService;
                --line_live_;
                maybe_compact_line();
                return id;
            }
        }
        return -1;
    }

    void maybe_compact_line() {
        if (line_.size() - line_head_ <= 2 * line_live_ + 64) {
            if (line_head_ > 4096 && line_head_ > line_.size() / 2) {
                line_.erase(line_.begin(), line_.begin() + static_cast<std::ptrdiff_t>(line_head_));
                line_head_ = 0;
            }
            return;
        }
        std::vector<std::int64_t> fresh;
        fresh.reserve(line_live_ + 16);
        for (std::size_t k = line_head_; k < line_.size(); ++k)
            if (customers_[static_cast<std::size_t>(line_[k])].status == CustomerStatus::kWaiting)
                fresh.push_back(line_[k]);
        line_ = std::move(fresh);
        line_head_ = 0;
    }

    void assert_work_conservation() const {
        for (int s = idle_head_; s >= 0; s = idle_next_[static_cast<std::size_t>(s)]) {
            std::uint32_t mask =
                compat_mask_[static_cast<std::size_t>(servers_[static_cast<std::size_t>(s)].type)];
            for (std::size_t k = line_head_; k < line_.size(); ++k) {
                const Customer& cust = customers_[static_cast<std::size_t>(line_[k])];
                if (cust.status == CustomerStatus::kWaiting && ((mask >> cust.type) & 1u))
                    throw std::logic_error("work conservation violated: idle compatible server "
                                           "coexists with a waiting customer");
            }
        }
    }

    SimConfig cfg_;
    SplitMix64 interarrival_rng_;
    SplitMix64 type_rng_;
    SplitMix64 service_rng_;
    SplitMix64 patience_rng_;

    int ni_ = 0;
    int nj_ = 0;
    std::vector<double> alpha_cum_;
    std::vector<std::uint32_t> compat_mask_; // per server type

    std::vector<Customer> customers_;
    std::vector<Server> servers_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::uint64_t next_seq_ = 0;
    double now_ = 0.0;
    std::int64_t arrivals_seen_ = 0;

    std::vector<std::int64_t> line_; // FIFO with tombstones
    std::size_t line_head_ = 0;
    std::size_t line_live_ = 0;

    std::vector<int> idle_next_;
    std::vector<int> idle_prev_;
    int idle_head_ = -1;
    int idle_tail_ = -1;

    RawReplicationStats stats_;
};

} // namespace detail

/// Runs one replication to completion: exactly total_customers arrivals are
/// generated and every started service is allowed to finish, so served plus
/// abandoned equals arrivals by the end.  Deterministic given the seed and
/// replication index.
inline RawReplicationStats run_replication(const SimConfig& config, std::uint64_t replication) {
    detail::SimulationEngine engine(config, replication);
    return engine.run();
}

/// Independent replications 0..count-1, optionally in parallel.  Each owns
/// its generator substreams; results are returned in replication order, so
/// the aggregate does not depend on the thread count.
inline std::vector<RawReplicationStats> run_replications(const SimConfig& config, int count,
                                                         int threads = 1) {
    if (count < 1) throw std::invalid_argument("run replications: count must be positive");
    config.validate();
    std::vector<RawReplicationStats> results(static_cast<std::size_t>(count));
    if (threads <= 1) {
        for (int r = 0; r < count; ++r)
            results[static_cast<std::size_t>(r)] = run_replication(config, static_cast<std::uint64_t>(r));
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int n_threads = std::min(threads, count);
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int r = next.fetch_add(1);
                if (r >= count) return;
                results[static_cast<std::size_t>(r)] =
                    run_replication(config, static_cast<std::uint64_t>(r));
            }
        });
    for (auto& th : pool) th.join();
    return results;
}

} // namespace fcfsalis
