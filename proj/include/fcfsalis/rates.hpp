#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fcfsalis/model.hpp"
#include "fcfsalis/rng.hpp"

namespace fcfsalis {

/// Matching rates r(c_i, s_j): the long-run fraction of services in which a
/// type-i customer is served by a type-j server.  Supported on graph edges;
/// rows sum to alpha, columns to beta, total to one.
class RateMatrix {
public:
    RateMatrix(int customer_count, int server_count)
        : rows_(customer_count), cols_(server_count),
          r_(static_cast<std::size_t>(customer_count) * static_cast<std::size_t>(server_count),
             0.0) {}

    int customer_count() const { return rows_; }
    int server_count() const { return cols_; }

    double at(int i, int j) const { return r_[index(i, j)]; }
    double& at(int i, int j) { return r_[index(i, j)]; }

    double row_sum(int i) const {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += at(i, j);
        return s;
    }
    double col_sum(int j) const {
        double s = 0.0;
        for (int i = 0; i < rows_; ++i) s += at(i, j);
        return s;
    }
    double total() const {
        double s = 0.0;
        for (double v : r_) s += v;
        return s;
    }

    double max_abs_diff(const RateMatrix& other) const {
        double m = 0.0;
        for (std::size_t k = 0; k < r_.size(); ++k)
            m = std::max(m, std::fabs(r_[k] - other.r_[k]));
        return m;
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::invalid_argument("rate matrix: index out of range");
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

    int rows_;
    int cols_;
    std::vector<double> r_;
};

struct CrpResult {
    bool pooled = false;
    ServerSet witness; // a subset with beta(S) <= alpha(U(S)) when not pooled
};

class CrpViolationError : public std::runtime_error {
public:
    CrpViolationError(ServerSet witness, const std::string& what)
        : std::runtime_error(what), witness_(witness) {}
    ServerSet witness() const { return witness_; }

private:
    ServerSet witness_;
};

namespace detail {

// Subset-indexed caches over server subsets.  Permutation prefixes collapse
// to 2^J distinct subsets, so all prefix quantities are table lookups.
struct SubsetTables {
    int customer_count = 0;
    int server_count = 0;
    std::vector<double> beta_mass;          // [mask]
    std::vector<std::uint32_t> unique_mask; // [mask] U(S) as customer bits
    std::vector<double> unique_mass;        // [mask] alpha(U(S))
    std::vector<double> unique_cap_server;  // [mask * J + j] alpha(U(S) & C(s_j))
};

inline SubsetTables build_subset_tables(const ProbabilityVector& alpha,
                                        const ProbabilityVector& beta,
                                        const CompatibilityGraph& graph) {
    if (alpha.size() != graph.customer_count() || beta.size() != graph.server_count())
        throw std::invalid_argument("matching rates: dimension mismatch");
    const int ni = graph.customer_count();
    const int nj = graph.server_count();
    const std::uint32_t nmask = 1u << nj;
    SubsetTables t;
    t.customer_count = ni;
    t.server_count = nj;
    t.beta_mass.assign(nmask, 0.0);
    t.unique_mask.assign(nmask, 0u);
    t.unique_mass.assign(nmask, 0.0);
    t.unique_cap_server.assign(static_cast<std::size_t>(nmask) * static_cast<std::size_t>(nj),
                               0.0);

    std::vector<std::uint32_t> compat(nmask, 0u); // C(S) per server subset
    for (std::uint32_t m = 1; m < nmask; ++m) {
        std::uint32_t low = m & (~m + 1u);
        int j = std::countr_zero(low);
        compat[m] = compat[m ^ low] | graph.customers_of(j).bits();
        t.beta_mass[m] = t.beta_mass[m ^ low] + beta[j];
    }
    const std::uint32_t all_c = CustomerSet::full(ni).bits();
    auto cust_mass = [&](std::uint32_t bits) {
        double s = 0.0;
        while (bits) {
            s += alpha[std::countr_zero(bits)];
            bits &= bits - 1;
        }
        return s;
    };
    for (std::uint32_t m = 0; m < nmask; ++m) {
        std::uint32_t u = all_c & ~compat[(nmask - 1u) ^ m];
        t.unique_mask[m] = u;
        t.unique_mass[m] = cust_mass(u);
        for (int j = 0; j < nj; ++j)
            t.unique_cap_server[static_cast<std::size_t>(m) * nj + j] =
                cust_mass(u & graph.customers_of(j).bits());
    }
    return t;
}

inline std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
    return f;
}

// Permutation of {0..n-1} at a given lexicographic rank.
inline void unrank_permutation(std::uint64_t rank, int n, std::vector<int>& out) {
    std::vector<int> avail(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) avail[static_cast<std::size_t>(k)] = k;
    out.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::uint64_t f = factorial(n - 1 - k);
        std::uint64_t d = rank / f;
        rank %= f;
        out[static_cast<std::size_t>(k)] = avail[static_cast<std::size_t>(d)];
        avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(d));
    }
}

} // namespace detail

/// Tests complete resource pooling: beta(S) > alpha(U(S)) must hold for every
/// nonempty proper server subset S.  On violation the returned witness is a
/// subset attaining the worst margin.
inline CrpResult check_crp(const ProbabilityVector& alpha, const ProbabilityVector& beta,
                           const CompatibilityGraph& graph) {
    detail::SubsetTables t = detail::build_subset_tables(alpha, beta, graph);
    const std::uint32_t nmask = 1u << graph.server_count();
    CrpResult result;
    result.pooled = true;
    double worst = 0.0;
    for (std::uint32_t m = 1; m + 1 < nmask; ++m) {
        double margin = t.beta_mass[m] - t.unique_mass[m];
        if (margin <= 0.0 && (result.pooled || margin < worst)) {
            result.pooled = false;
            result.witness = ServerSet(m);
            worst = margin;
        }
    }
    return result;
}

/// Normalizing constant B of the permutation-sum matching-rate formula:
/// 1/B is the sum over all server-type permutations of the product of
/// (beta(prefix) - alpha(U(prefix)))^-1 over proper prefixes.
inline double compute_b(const ProbabilityVector& alpha, const ProbabilityVector& beta,
                        const CompatibilityGraph& graph) {
    CrpResult crp = check_crp(alpha, beta, graph);
    if (!crp.pooled)
        throw CrpViolationError(crp.witness,
                                "matching rates require complete resource pooling");
    detail::SubsetTables t = detail::build_subset_tables(alpha, beta, graph);
    const int nj = graph.server_count();
    std::vector<int> perm(static_cast<std::size_t>(nj));
    for (int j = 0; j < nj; ++j) perm[static_cast<std::size_t>(j)] = j;
    double b_inv = 0.0;
    do {
        double prod = 1.0;
        std::uint32_t prefix = 0;
        for (int k = 0; k + 1 < nj; ++k) {
            prefix |= 1u << perm[static_cast<std::size_t>(k)];
            prod /= t.beta_mass[prefix] - t.unique_mass[prefix];
        }
        b_inv += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return 1.0 / b_inv;
}

/// Exact matching rates for FCFS infinite bipartite matching under complete
/// resource pooling, by full enumeration of server-type permutations.
///
/// Enumeration work is shared: prefix masses and the per-permutation
/// (beta-alpha)^-1 product are computed once per permutation and reused for
/// every edge.  The permutation space is split into fixed blocks summed in
/// index order, so results are bit-identical for any worker count.
/// Refuses above 12 server types; use mc_matching_oracle there instead.
inline RateMatrix matching_rates(const ProbabilityVector& alpha, const ProbabilityVector& beta,
                                 const CompatibilityGraph& graph, int workers = 1) {
    static constexpr int kMaxEnumerable = 12;
    const int ni = graph.customer_count();
    const int nj = graph.server_count();
    if (nj > kMaxEnumerable)
        throw std::invalid_argument(
            "matching rates: enumeration capped at 12 server types; "
            "use the Monte Carlo matching oracle for larger systems");
    CrpResult crp = check_crp(alpha, beta, graph);
    if (!crp.pooled)
        throw CrpViolationError(crp.witness,
                                "matching rates require complete resource pooling");
    if (workers < 1) workers = 1;

    const detail::SubsetTables t = detail::build_subset_tables(alpha, beta, graph);
    const auto& edges = graph.edges();
    const std::size_t ne = edges.size();
    const std::uint32_t full_mask = (1u << nj) - 1u;

    // alpha(C(s_j)) for the terminal term of the inner bracket.
    std::vector<double> alpha_compat(static_cast<std::size_t>(nj));
    for (int j = 0; j < nj; ++j)
        alpha_compat[static_cast<std::size_t>(j)] =
            t.unique_cap_server[static_cast<std::size_t>(full_mask) * nj + j];

    const std::uint64_t nperm = detail::factorial(nj);
    const std::uint64_t block_size =
        std::max<std::uint64_t>(4096, (nperm + 4095) / 4096);
    const std::uint64_t nblocks = (nperm + block_size - 1) / block_size;

    struct BlockSum {
        double b_inv = 0.0;
        std::vector<double> edge_sum;
    };
    std::vector<BlockSum> blocks(static_cast<std::size_t>(nblocks));

    auto run_block = [&](std::uint64_t b) {
        BlockSum& out = blocks[static_cast<std::size_t>(b)];
        out.edge_sum.assign(ne, 0.0);
        std::vector<int> perm;
        detail::unrank_permutation(b * block_size, nj, perm);
        const std::uint64_t count = std::min(block_size, nperm - b * block_size);

        std::vector<std::uint32_t> prefix(static_cast<std::size_t>(nj));
        std::vector<double> a_k(static_cast<std::size_t>(nj));
        std::vector<double> b_k(static_cast<std::size_t>(nj));
        for (std::uint64_t step = 0; step < count; ++step) {
            std::uint32_t p = 0;
            double inv_prod = 1.0;
            for (int k = 0; k < nj; ++k) {
                p |= 1u << perm[static_cast<std::size_t>(k)];
                prefix[static_cast<std::size_t>(k)] = p;
                a_k[static_cast<std::size_t>(k)] = t.unique_mass[p];
                b_k[static_cast<std::size_t>(k)] = t.beta_mass[p];
                if (k + 1 < nj)
                    inv_prod /= b_k[static_cast<std::size_t>(k)] - a_k[static_cast<std::size_t>(k)];
            }
            out.b_inv += inv_prod;
            for (std::size_t e = 0; e < ne; ++e) {
                const int ci = edges[e].first;
                const int sj = edges[e].second;
                const double alpha_i = alpha[ci];
                double running = 1.0; // product of (b-a)/(b-a+phi+psi) over l<k
                double acc = 0.0;
                for (int k = 0; k + 1 < nj; ++k) {
                    const std::uint32_t pm = prefix[static_cast<std::size_t>(k)];
                    const double a = a_k[static_cast<std::size_t>(k)];
                    const double bb = b_k[static_cast<std::size_t>(k)];
                    // phi_k alpha_(k) and psi_k alpha_(k); both zero when the
                    // prefix has no uniquely servable mass, which keeps the
                    // formula continuous there (term 0, factor 1).
                    const double phi_num =
                        (t.unique_mask[pm] >> ci) & 1u ? alpha_i : 0.0;
                    const double psi_num =
                        t.unique_cap_server[static_cast<std::size_t>(pm) * nj + sj] - phi_num;
                    const double denom = bb - a + phi_num + psi_num;
                    acc += phi_num / denom * running;
                    running *= (bb - a) / denom;
                }
                acc += alpha_i / alpha_compat[static_cast<std::size_t>(sj)] * running;
                out.edge_sum[e] += inv_prod * acc;
            }
            std::next_permutation(perm.begin(), perm.end());
        }
    };

    if (workers == 1 || nblocks == 1) {
        for (std::uint64_t b = 0; b < nblocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        int n_threads = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), nblocks);
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::uint64_t b = next.fetch_add(1);
                    if (b >= nblocks) return;
                    run_block(b);
                }
            });
        for (auto& th : pool) th.join();
    }

    double b_inv = 0.0;
    std::vector<double> edge_total(ne, 0.0);
    for (const BlockSum& blk : blocks) {
        b_inv += blk.b_inv;
        for (std::size_t e = 0; e < ne; ++e) edge_total[e] += blk.edge_sum[e];
    }

    RateMatrix rates(ni, nj);
    for (std::size_t e = 0; e < ne; ++e)
        rates.at(edges[e].first, edges[e].second) =
            beta[edges[e].second] * edge_total[e] / b_inv;
    return rates;
}

/// Closed form for the almost complete graph (I = J, server j serving every
/// customer type except j).  Requires alpha_j + beta_j < 1 for all j, which
/// is exactly complete resource pooling on this graph.
inline RateMatrix matching_rates_almost_complete(const ProbabilityVector& alpha,
                                                 const ProbabilityVector& beta) {
    const int n = alpha.size();
    if (beta.size() != n)
        throw std::invalid_argument("almost complete rates: need I = J");
    for (int j = 0; j < n; ++j)
        if (!(alpha[j] + beta[j] < 1.0))
            throw CrpViolationError(
                ServerSet::full(n).without(j),
                "almost complete rates: alpha_j + beta_j must be below 1 (type " +
                    std::to_string(j) + ")");
    double norm = 1.0;
    for (int k = 0; k < n; ++k) norm += alpha[k] * beta[k] / (1.0 - alpha[k] - beta[k]);
    RateMatrix rates(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double numer = (1.0 - alpha[i]) * (1.0 - beta[j]) - alpha[j] * beta[i];
            double denom = (1.0 - alpha[i] - beta[i]) * (1.0 - alpha[j] - beta[j]);
            rates.at(i, j) = alpha[i] * beta[j] * numer / (denom * norm);
        }
    return rates;
}

/// One pooled piece of a decomposed system, with its type masses renormalized
/// to probability vectors on the induced subgraph.
struct Subsystem {
    CustomerSet customers;
    ServerSet servers;
    double alpha_mass = 0.0;
    double beta_mass = 0.0;
    std::vector<double> alpha; // renormalized, ascending global customer index
    std::vector<double> beta;  // renormalized, ascending global server index
    double ratio() const { return beta_mass / alpha_mass; }
};

struct Decomposition {
    std::vector<Subsystem> subsystems; // ratios strictly increasing
};

namespace detail {

inline CompatibilityGraph induced_subgraph(const CompatibilityGraph& graph, CustomerSet customers,
                                           ServerSet servers, std::vector<int>* customer_map,
                                           std::vector<int>* server_map) {
    std::vector<int> ci, sj;
    for (int i : customers) ci.push_back(i);
    for (int j : servers) sj.push_back(j);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 0; a < ci.size(); ++a)
        for (std::size_t b = 0; b < sj.size(); ++b)
            if (graph.has_edge(ci[a], sj[b]))
                edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    if (customer_map) *customer_map = ci;
    if (server_map) *server_map = sj;
    return CompatibilityGraph(static_cast<int>(ci.size()), static_cast<int>(sj.size()),
                              std::move(edges));
}

} // namespace detail

/// Checks the decomposition contract: the subsystems partition both type
/// sets, their service ratios increase strictly, and each piece has complete
/// resource pooling on its induced subgraph.  Throws with a reason otherwise.
inline void validate_decomposition(const ProbabilityVector& alpha, const ProbabilityVector& beta,
                                   const CompatibilityGraph& graph, const Decomposition& d) {
    if (d.subsystems.empty()) throw std::domain_error("decomposition: empty");
    CustomerSet seen_c;
    ServerSet seen_s;
    double prev_ratio = -1.0;
    for (const Subsystem& sub : d.subsystems) {
        if (!(seen_c & sub.customers).empty() || !(seen_s & sub.servers).empty())
            throw std::domain_error("decomposition: overlapping subsystems");
        seen_c = seen_c | sub.customers;
        seen_s = seen_s | sub.servers;
        if (sub.customers.empty() || sub.servers.empty())
            throw std::domain_error("decomposition: empty subsystem");
        if (!(sub.ratio() > prev_ratio))
            throw std::domain_error("decomposition: service ratios not strictly increasing");
        prev_ratio = sub.ratio();
        CompatibilityGraph sg =
            detail::induced_subgraph(graph, sub.customers, sub.servers, nullptr, nullptr);
        CrpResult crp = check_crp(ProbabilityVector(sub.alpha), ProbabilityVector(sub.beta), sg);
        if (!crp.pooled)
            throw std::domain_error("decomposition: subsystem without complete resource pooling");
    }
    if (seen_c != graph.all_customers() || seen_s != graph.all_servers())
        throw std::domain_error("decomposition: subsystems do not cover all types");
}

/// Unique decomposition of a (possibly non-pooled) system into pooled
/// subsystems with strictly increasing service ratios beta/alpha.
///
/// Construction is greedy: repeatedly extract the remaining server subset S
/// minimizing beta(S)/alpha(U(S)) together with its uniquely served
/// customers, renormalize, and continue.  Ties take the union of all
/// minimizers.  The result is validated against the contract above and the
/// operation fails rather than return an unverified answer.
inline Decomposition decompose(const ProbabilityVector& alpha, const ProbabilityVector& beta,
                               const CompatibilityGraph& graph) {
    if (alpha.size() != graph.customer_count() || beta.size() != graph.server_count())
        throw std::invalid_argument("decompose: dimension mismatch");
    Decomposition result;
    CustomerSet rem_c = graph.all_customers();
    ServerSet rem_s = graph.all_servers();

    while (!rem_s.empty()) {
        std::vector<int> servers;
        for (int j : rem_s) servers.push_back(j);
        const int nr = static_cast<int>(servers.size());

        // U within the remaining subgraph, per subset of remaining servers.
        std::vector<ServerSet> rem_servers_of(static_cast<std::size_t>(graph.customer_count()));
        for (int i : rem_c) rem_servers_of[static_cast<std::size_t>(i)] = graph.servers_of(i) & rem_s;

        double best_ratio = 0.0;
        bool found = false;
        ServerSet best;
        const std::uint32_t nmask = 1u << nr;
        for (std::uint32_t m = 1; m < nmask; ++m) {
            ServerSet s;
            for (int b = 0; b < nr; ++b)
                if ((m >> b) & 1u) s = s.with(servers[static_cast<std::size_t>(b)]);
            double unique = 0.0;
            for (int i : rem_c)
                if (rem_servers_of[static_cast<std::size_t>(i)].is_subset_of(s))
                    unique += alpha[i];
            if (unique <= 0.0) continue; // never a bottleneck class
            double ratio = beta.mass(s) / unique;
            if (!found || ratio < best_ratio * (1.0 - 1e-12)) {
                best_ratio = ratio;
                best = s;
                found = true;
            } else if (ratio <= best_ratio * (1.0 + 1e-12)) {
                best = best | s; // tie: union of minimizers
            }
        }
        if (!found)
            throw std::domain_error(
                "decompose: remaining customer mass is zero, ratio ordering undefined");

        CustomerSet taken_c;
        for (int i : rem_c)
            if (rem_servers_of[static_cast<std::size_t>(i)].is_subset_of(best))
                taken_c = taken_c.with(i);

        Subsystem sub;
        sub.customers = taken_c;
        sub.servers = best;
        sub.alpha_mass = alpha.mass(taken_c);
        sub.beta_mass = beta.mass(best);
        for (int i : taken_c) sub.alpha.push_back(alpha[i] / sub.alpha_mass);
        for (int j : best) sub.beta.push_back(beta[j] / sub.beta_mass);
        result.subsystems.push_back(std::move(sub));

        rem_c = rem_c & taken_c.complement_in(graph.customer_count());
        rem_s = rem_s & best.complement_in(graph.server_count());
    }
    if (!rem_c.empty())
        throw std::domain_error("decompose: leftover customer types with zero-mass servers");
    validate_decomposition(alpha, beta, graph, result);
    return result;
}

/// Total service capacity mu = sum over edges of r(c_i,s_j) / m(c_i,s_j),
/// in services per unit time per matched service.
inline double capacity(const RateMatrix& rates, const SystemSpec& spec) {
    if (rates.customer_count() != spec.graph().customer_count() ||
        rates.server_count() != spec.graph().server_count())
        throw std::invalid_argument("capacity: dimension mismatch");
    double mu = 0.0;
    for (auto [i, j] : spec.graph().edges()) mu += rates.at(i, j) / spec.service_mean(i, j);
    return mu;
}

/// Monte Carlo oracle: simulates the FCFS infinite matching definition
/// directly.  The n-th server takes the earliest unmatched compatible
/// customer; customers are generated lazily per type.  Runs with or without
/// resource pooling; returns match counts divided by the match count.
inline RateMatrix mc_matching_oracle(const ProbabilityVector& alpha,
                                     const ProbabilityVector& beta,
                                     const CompatibilityGraph& graph, std::int64_t match_count,
                                     std::uint64_t seed) {
    if (alpha.size() != graph.customer_count() || beta.size() != graph.server_count())
        throw std::invalid_argument("matching oracle: dimension mismatch");
    if (match_count < 1) throw std::invalid_argument("matching oracle: need at least one match");
    const int ni = graph.customer_count();
    const int nj = graph.server_count();

    SplitMix64 customer_rng = SplitMix64::substream(seed, 0, 0);
    SplitMix64 server_rng = SplitMix64::substream(seed, 0, 1);
    std::vector<double> alpha_cum(static_cast<std::size_t>(ni));
    std::vector<double> beta_cum(static_cast<std::size_t>(nj));
    double acc = 0.0;
    for (int i = 0; i < ni; ++i) alpha_cum[static_cast<std::size_t>(i)] = (acc += alpha[i]);
    acc = 0.0;
    for (int j = 0; j < nj; ++j) beta_cum[static_cast<std::size_t>(j)] = (acc += beta[j]);
    auto draw = [](SplitMix64& g, const std::vector<double>& cum) {
        double u = g.next_double();
        for (std::size_t k = 0; k + 1 < cum.size(); ++k)
            if (u < cum[k]) return static_cast<int>(k);
        return static_cast<int>(cum.size() - 1);
    };

    std::vector<std::deque<std::int64_t>> unmatched(static_cast<std::size_t>(ni));
    std::int64_t next_customer = 0;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(ni) * static_cast<std::size_t>(nj),
                                     0);
    for (std::int64_t m = 0; m < match_count; ++m) {
        int sj = draw(server_rng, beta_cum);
        CustomerSet compat = graph.customers_of(sj);
        int chosen = -1;
        std::int64_t earliest = 0;
        for (int i : compat) {
            auto& q = unmatched[static_cast<std::size_t>(i)];
            if (!q.empty() && (chosen < 0 || q.front() < earliest)) {
                chosen = i;
                earliest = q.front();
            }
        }
        if (chosen < 0) {
            // Generate fresh customers until one is compatible; the earlier
            // incompatible ones stay queued for later servers.
            for (;;) {
                int ci = draw(customer_rng, alpha_cum);
                std::int64_t id = next_customer++;
                if (compat.contains(ci)) {
                    chosen = ci;
                    break;
                }
                unmatched[static_cast<std::size_t>(ci)].push_back(id);
            }
        } else {
            unmatched[static_cast<std::size_t>(chosen)].pop_front();
        }
        ++counts[static_cast<std::size_t>(chosen) * static_cast<std::size_t>(nj) +
                 static_cast<std::size_t>(sj)];
    }
    RateMatrix rates(ni, nj);
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j)
            rates.at(i, j) = static_cast<double>(counts[static_cast<std::size_t>(i) *
                                                            static_cast<std::size_t>(nj) +
                                                        static_cast<std::size_t>(j)]) /
                             static_cast<double>(match_count);
    return rates;
}

} // namespace fcfsalis
