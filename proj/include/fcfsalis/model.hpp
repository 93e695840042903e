#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fcfsalis/distributions.hpp"

namespace fcfsalis {

/// Subset of type indices held as a bitmask.  Tagged so customer-type sets
/// and server-type sets cannot be mixed up.
template <class Tag>
class TypeSet {
public:
    constexpr TypeSet() = default;
    constexpr explicit TypeSet(std::uint32_t bits) : bits_(bits) {}

    static constexpr TypeSet single(int index) { return TypeSet(1u << index); }
    static constexpr TypeSet full(int count) {
        return TypeSet(count >= 32 ? ~0u : (1u << count) - 1u);
    }

    constexpr std::uint32_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int count() const { return std::popcount(bits_); }
    constexpr bool contains(int index) const { return (bits_ >> index) & 1u; }

    constexpr TypeSet with(int index) const { return TypeSet(bits_ | (1u << index)); }
    constexpr TypeSet without(int index) const { return TypeSet(bits_ & ~(1u << index)); }
    constexpr TypeSet complement_in(int count) const {
        return TypeSet(full(count).bits() & ~bits_);
    }

    constexpr TypeSet operator|(TypeSet o) const { return TypeSet(bits_ | o.bits_); }
    constexpr TypeSet operator&(TypeSet o) const { return TypeSet(bits_ & o.bits_); }
    constexpr bool is_subset_of(TypeSet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool operator==(const TypeSet&) const = default;

    // Iterates set bits in ascending index order.
    class iterator {
    public:
        constexpr explicit iterator(std::uint32_t rest) : rest_(rest) {}
        constexpr int operator*() const { return std::countr_zero(rest_); }
        constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
        constexpr bool operator!=(const iterator& o) const { return rest_ != o.rest_; }
    private:
        std::uint32_t rest_;
    };
    constexpr iterator begin() const { return iterator(bits_); }
    constexpr iterator end() const { return iterator(0); }

private:
    std::uint32_t bits_ = 0;
};

using CustomerSet = TypeSet<struct CustomerTypeTag>;
using ServerSet = TypeSet<struct ServerTypeTag>;

/// Nonnegative entries summing to one.  Inputs off by more than the tolerance
/// are rejected rather than renormalized, so user errors surface.
class ProbabilityVector {
public:
    static constexpr double kSumTolerance = 1e-12;

    explicit ProbabilityVector(std::vector<double> entries) : entries_(std::move(entries)) {
        if (entries_.empty())
            throw std::invalid_argument("probability vector: empty");
        double sum = 0.0;
        for (double e : entries_) {
            if (!(e >= 0.0) || !std::isfinite(e))
                throw std::invalid_argument("probability vector: entries must be nonnegative");
            sum += e;
        }
        if (std::fabs(sum - 1.0) > kSumTolerance)
            throw std::invalid_argument("probability vector: entries sum to " +
                                        std::to_string(sum) + ", not 1");
    }

    int size() const { return static_cast<int>(entries_.size()); }
    double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& entries() const { return entries_; }

    /// Sum of entries over a subset; the empty subset has mass 0.
    template <class Tag>
    double mass(TypeSet<Tag> subset) const {
        if (!subset.is_subset_of(TypeSet<Tag>::full(size())))
            throw std::invalid_argument("subset mass: index out of range");
        double sum = 0.0;
        for (int i : subset) sum += entries_[static_cast<std::size_t>(i)];
        return sum;
    }

    bool operator==(const ProbabilityVector&) const = default;

private:
    std::vector<double> entries_;
};

/// Bipartite compatibility structure between customer types and server types.
/// Every type must have at least one incident edge; at most 16 types per side
/// so subset algebra stays in 32-bit masks.
class CompatibilityGraph {
public:
    static constexpr int kMaxTypes = 16;

    CompatibilityGraph(int customer_count, int server_count,
                       std::vector<std::pair<int, int>> edges)
        : customer_count_(customer_count), server_count_(server_count) {
        if (customer_count <= 0 || server_count <= 0)
            throw std::invalid_argument("graph: type counts must be positive");
        if (customer_count > kMaxTypes || server_count > kMaxTypes)
            throw std::invalid_argument("graph: at most 16 types per side");
        customers_of_.assign(static_cast<std::size_t>(server_count), CustomerSet());
        servers_of_.assign(static_cast<std::size_t>(customer_count), ServerSet());
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (auto [i, j] : edges) {
            if (i < 0 || i >= customer_count || j < 0 || j >= server_count)
                throw std::invalid_argument("graph: edge index out of range");
            customers_of_[static_cast<std::size_t>(j)] =
                customers_of_[static_cast<std::size_t>(j)].with(i);
            servers_of_[static_cast<std::size_t>(i)] =
                servers_of_[static_cast<std::size_t>(i)].with(j);
        }
        for (int i = 0; i < customer_count; ++i)
            if (servers_of_[static_cast<std::size_t>(i)].empty())
                throw std::invalid_argument("graph: customer type " + std::to_string(i) +
                                            " has no compatible server type");
        for (int j = 0; j < server_count; ++j)
            if (customers_of_[static_cast<std::size_t>(j)].empty())
                throw std::invalid_argument("graph: server type " + std::to_string(j) +
                                            " has no compatible customer type");
        edges_ = std::move(edges);
    }

    int customer_count() const { return customer_count_; }
    int server_count() const { return server_count_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    CustomerSet all_customers() const { return CustomerSet::full(customer_count_); }
    ServerSet all_servers() const { return ServerSet::full(server_count_); }

    bool has_edge(int customer, int server) const {
        check_customer(customer);
        check_server(server);
        return customers_of_[static_cast<std::size_t>(server)].contains(customer);
    }

    CustomerSet customers_of(int server) const {
        check_server(server);
        return customers_of_[static_cast<std::size_t>(server)];
    }

    ServerSet servers_of(int customer) const {
        check_customer(customer);
        return servers_of_[static_cast<std::size_t>(customer)];
    }

    /// C(S): customer types compatible with at least one server type in S.
    CustomerSet compatible_customers(ServerSet servers) const {
        if (!servers.is_subset_of(all_servers()))
            throw std::invalid_argument("compatible_customers: server index out of range");
        CustomerSet result;
        for (int j : servers) result = result | customers_of_[static_cast<std::size_t>(j)];
        return result;
    }

    /// S(C): server types compatible with at least one customer type in C.
    ServerSet compatible_servers(CustomerSet customers) const {
        if (!customers.is_subset_of(all_customers()))
            throw std::invalid_argument("compatible_servers: customer index out of range");
        ServerSet result;
        for (int i : customers) result = result | servers_of_[static_cast<std::size_t>(i)];
        return result;
    }

    /// U(S): customer types servable only by server types in S, i.e. the
    /// complement of C(complement of S).
    CustomerSet uniquely_servable(ServerSet servers) const {
        CustomerSet reachable_elsewhere =
            compatible_customers(servers.complement_in(server_count_));
        return reachable_elsewhere.complement_in(customer_count_);
    }

    bool operator==(const CompatibilityGraph& o) const {
        return customer_count_ == o.customer_count_ && server_count_ == o.server_count_ &&
               edges_ == o.edges_;
    }

private:
    void check_customer(int i) const {
        if (i < 0 || i >= customer_count_)
            throw std::invalid_argument("customer type index out of range");
    }
    void check_server(int j) const {
        if (j < 0 || j >= server_count_)
            throw std::invalid_argument("server type index out of range");
    }

    int customer_count_;
    int server_count_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<CustomerSet> customers_of_; // per server type
    std::vector<ServerSet> servers_of_;     // per customer type
};

/// Full description of a parallel service system: compatibility graph,
/// arrival rate and type mix, renewal inter-arrival law (already scaled so
/// its mean is 1/lambda), per-edge service laws and per-type patience laws.
class SystemSpec {
public:
    SystemSpec(CompatibilityGraph graph, double lambda, ProbabilityVector alpha,
               Distribution interarrival,
               std::vector<std::tuple<int, int, Distribution>> service,
               std::vector<Distribution> patience)
        : graph_(std::move(graph)), lambda_(lambda), alpha_(std::move(alpha)),
          interarrival_(interarrival) {
        if (!(lambda_ > 0.0) || !std::isfinite(lambda_))
            throw std::invalid_argument("system: lambda must be positive");
        if (alpha_.size() != graph_.customer_count())
            throw std::invalid_argument("system: alpha dimension mismatch");
        if (static_cast<int>(patience.size()) != graph_.customer_count())
            throw std::invalid_argument("system: one patience law per customer type required");
        double target = 1.0 / lambda_;
        if (std::fabs(interarrival_.mean() - target) > 1e-9 * target)
            throw std::invalid_argument("system: inter-arrival mean must equal 1/lambda");
        service_.assign(graph_.edges().size(), std::nullopt);
        for (auto& [i, j, law] : service) {
            int e = edge_index(i, j);
            if (e < 0)
                throw std::invalid_argument("system: service law on non-edge (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            if (service_[static_cast<std::size_t>(e)])
                throw std::invalid_argument("system: duplicate service law on an edge");
            if (!(law.mean() > 0.0) || !std::isfinite(law.mean()))
                throw std::invalid_argument("system: service means must be positive and finite");
            service_[static_cast<std::size_t>(e)] = law;
        }
        for (std::size_t e = 0; e < service_.size(); ++e)
            if (!service_[e])
                throw std::invalid_argument("system: missing service law on an edge");
        patience_ = std::move(patience);
    }

    /// Scales an inter-arrival shape so its mean becomes 1/lambda.
    static Distribution interarrival_for(const Distribution& shape, double lambda) {
        return shape.scaled_by(1.0 / (lambda * shape.mean()));
    }

    const CompatibilityGraph& graph() const { return graph_; }
    double lambda() const { return lambda_; }
    const ProbabilityVector& alpha() const { return alpha_; }
    const Distribution& interarrival() const { return interarrival_; }
    const Distribution& patience(int customer) const {
        return patience_[static_cast<std::size_t>(customer)];
    }

    const Distribution& service(int customer, int server) const {
        int e = edge_index(customer, server);
        if (e < 0) throw std::invalid_argument("service: not an edge");
        return *service_[static_cast<std::size_t>(e)];
    }

    double service_mean(int customer, int server) const { return service(customer, server).mean(); }

    /// Same system at a different arrival rate; the inter-arrival law keeps
    /// its shape and is rescaled.
    SystemSpec with_lambda(double new_lambda) const {
        std::vector<std::tuple<int, int, Distribution>> service;
        for (std::size_t e = 0; e < graph_.edges().size(); ++e)
            service.emplace_back(graph_.edges()[e].first, graph_.edges()[e].second,
                                 *service_[e]);
        return SystemSpec(graph_, new_lambda, alpha_,
                          interarrival_.scaled_by(lambda_ / new_lambda), std::move(service),
                          patience_);
    }

private:
    int edge_index(int customer, int server) const {
        auto it = std::lower_bound(graph_.edges().begin(), graph_.edges().end(),
                                   std::make_pair(customer, server));
        if (it == graph_.edges().end() || *it != std::make_pair(customer, server)) return -1;
        return static_cast<int>(it - graph_.edges().begin());
    }

    CompatibilityGraph graph_;
    double lambda_;
    ProbabilityVector alpha_;
    Distribution interarrival_;
    std::vector<std::optional<Distribution>> service_; // aligned with graph_.edges()
    std::vector<Distribution> patience_;
};

} // namespace fcfsalis
