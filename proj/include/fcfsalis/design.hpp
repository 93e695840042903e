#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcfsalis/model.hpp"
#include "fcfsalis/rates.hpp"

namespace fcfsalis {

enum class ServiceRegime { kEfficiencyDriven, kQualityDriven, kQualityEfficiencyDriven };

inline const char* regime_name(ServiceRegime r) {
    switch (r) {
    case ServiceRegime::kEfficiencyDriven: return "ed";
    case ServiceRegime::kQualityDriven: return "qd";
    case ServiceRegime::kQualityEfficiencyDriven: return "qed";
    }
    return "?";
}

/// Quality-of-service target: mean customer waiting time W in ED mode, mean
/// server idle time after each service T in QD mode, neither in QED mode.
struct QoSTarget {
    ServiceRegime regime = ServiceRegime::kQualityEfficiencyDriven;
    double value = 0.0;

    static QoSTarget ed(double mean_wait) {
        if (!(mean_wait > 0.0)) throw std::invalid_argument("ED target: W must be positive");
        return {ServiceRegime::kEfficiencyDriven, mean_wait};
    }
    static QoSTarget qd(double mean_idle) {
        if (!(mean_idle > 0.0)) throw std::invalid_argument("QD target: T must be positive");
        return {ServiceRegime::kQualityDriven, mean_idle};
    }
    static QoSTarget qed() { return {ServiceRegime::kQualityEfficiencyDriven, 0.0}; }
};

/// Staffing output: real and rounded per-server-type workforce, plus the ED
/// intermediates (thinned arrival rate, adjusted type mix, predicted
/// abandonment) and the rate matrix the staffing was computed from.
struct DesignResult {
    double lambda = 0.0;
    std::vector<double> workforce_real;
    std::vector<int> workforce;
    int total = 0;
    ProbabilityVector adjusted_alpha;
    double effective_lambda = 0.0;
    std::vector<double> abandonment_prediction; // F_i(W) in ED, zero otherwise
    RateMatrix rates_used;
    ProbabilityVector beta_used;
};

/// Round half-up per entry with a floor of one server.
inline std::vector<int> round_workforce(const std::vector<double>& real) {
    std::vector<int> out;
    out.reserve(real.size());
    for (double v : real) {
        if (!(v > 0.0)) throw std::invalid_argument("round workforce: entries must be positive");
        out.push_back(std::max(1, static_cast<int>(std::floor(v + 0.5))));
    }
    return out;
}

namespace detail {

inline DesignResult finish_design(const SystemSpec& spec, const ProbabilityVector& beta,
                                  const ProbabilityVector& used_alpha, double used_lambda,
                                  std::vector<double> abandonment, double idle_target) {
    CrpResult crp = check_crp(used_alpha, beta, spec.graph());
    if (!crp.pooled)
        throw CrpViolationError(crp.witness, "design: complete resource pooling fails");
    RateMatrix rates = matching_rates(used_alpha, beta, spec.graph());
    const int nj = spec.graph().server_count();
    std::vector<double> real(static_cast<std::size_t>(nj), 0.0);
    for (auto [i, j] : spec.graph().edges())
        real[static_cast<std::size_t>(j)] +=
            used_lambda * rates.at(i, j) * (spec.service_mean(i, j) + idle_target);
    DesignResult result{spec.lambda(),
                        real,
                        round_workforce(real),
                        0,
                        used_alpha,
                        used_lambda,
                        std::move(abandonment),
                        std::move(rates),
                        beta};
    for (int n : result.workforce) result.total += n;
    return result;
}

} // namespace detail

/// Quality-driven staffing: servers idle a mean time T after each service.
/// n_j = sum over compatible customers of lambda r(i,j) (m(i,j) + T).
/// Patience plays no role; nobody waits in this regime.
inline DesignResult design_qd(const SystemSpec& spec, const ProbabilityVector& beta,
                              double mean_idle) {
    if (!(mean_idle > 0.0)) throw std::invalid_argument("QD design: T must be positive");
    return detail::finish_design(spec, beta, spec.alpha(), spec.lambda(),
                                 std::vector<double>(spec.graph().customer_count(), 0.0),
                                 mean_idle);
}

/// Efficiency-driven staffing: customers wait a mean time W and a fraction
/// F_i(W) of each type abandons.  The arrival stream is thinned to the
/// patient customers, the type mix adjusted accordingly, and staffing covers
/// exactly the offered work: n_j = sum. of lambda~ r(i,j) m(i,j).
inline DesignResult design_ed(const SystemSpec& spec, const ProbabilityVector& beta,
                              double mean_wait) {
    if (!(mean_wait > 0.0)) throw std::invalid_argument("ED design: W must be positive");
    const int ni = spec.graph().customer_count();
    std::vector<double> abandonment(static_cast<std::size_t>(ni));
    std::vector<double> thinned(static_cast<std::size_t>(ni));
    double effective = 0.0;
    for (int i = 0; i < ni; ++i) {
        abandonment[static_cast<std::size_t>(i)] = spec.patience(i).cdf(mean_wait);
        thinned[static_cast<std::size_t>(i)] =
            spec.alpha()[i] * spec.lambda() * (1.0 - abandonment[static_cast<std::size_t>(i)]);
        effective += thinned[static_cast<std::size_t>(i)];
    }
    if (!(effective > 0.0))
        throw std::domain_error("ED design: W exceeds all patience support, nobody is served");
    for (double& v : thinned) v /= effective;
    return detail::finish_design(spec, beta, ProbabilityVector(thinned), effective,
                                 std::move(abandonment), 0.0);
}

/// Quality-and-efficiency-driven staffing: the QD/ED formulas at T = W = 0,
/// using the unadjusted lambda and alpha.
inline DesignResult design_qed(const SystemSpec& spec, const ProbabilityVector& beta) {
    return detail::finish_design(spec, beta, spec.alpha(), spec.lambda(),
                                 std::vector<double>(spec.graph().customer_count(), 0.0), 0.0);
}

inline DesignResult design_for(const SystemSpec& spec, const ProbabilityVector& beta,
                               const QoSTarget& target) {
    switch (target.regime) {
    case ServiceRegime::kEfficiencyDriven: return design_ed(spec, beta, target.value);
    case ServiceRegime::kQualityDriven: return design_qd(spec, beta, target.value);
    case ServiceRegime::kQualityEfficiencyDriven: return design_qed(spec, beta);
    }
    throw std::logic_error("unreachable");
}

/// One priority class: its customer and server types, its QoS target, and the
/// service-fraction split over its own servers (full-length vector, zero off
/// the class, summing to one on it).
struct PriorityClass {
    CustomerSet customers;
    ServerSet servers;
    QoSTarget target;
    std::vector<double> beta;
};

/// Priority classes listed highest priority first.  Service quality must
/// degrade down the list: a leading run of QD classes with strictly
/// decreasing idle targets, at most one QED class, then ED classes with
/// strictly increasing wait targets.
struct PriorityPartition {
    std::vector<PriorityClass> classes;
};

namespace detail {

inline void validate_partition(const CompatibilityGraph& graph, const PriorityPartition& p) {
    if (p.classes.empty()) throw std::invalid_argument("partition: no classes");
    CustomerSet seen_c;
    ServerSet seen_s;
    for (const PriorityClass& cls : p.classes) {
        if (cls.customers.empty() || cls.servers.empty())
            throw std::invalid_argument("partition: class with empty side");
        if (!(seen_c & cls.customers).empty() || !(seen_s & cls.servers).empty())
            throw std::invalid_argument("partition: classes overlap");
        seen_c = seen_c | cls.customers;
        seen_s = seen_s | cls.servers;
        for (int i : cls.customers)
            if ((graph.servers_of(i) & cls.servers).empty())
                throw std::invalid_argument("partition: customer type " + std::to_string(i) +
                                            " has no compatible server in its class");
        if (static_cast<int>(cls.beta.size()) != graph.server_count())
            throw std::invalid_argument("partition: class beta must have one entry per server type");
        double sum = 0.0;
        for (int j = 0; j < graph.server_count(); ++j) {
            double b = cls.beta[static_cast<std::size_t>(j)];
            if (!(b >= 0.0)) throw std::invalid_argument("partition: beta entries must be >= 0");
            if (b > 0.0 && !cls.servers.contains(j))
                throw std::invalid_argument("partition: beta mass outside the class servers");
            sum += b;
        }
        if (std::fabs(sum - 1.0) > ProbabilityVector::kSumTolerance)
            throw std::invalid_argument("partition: class beta must sum to 1");
    }
    if (seen_c != graph.all_customers() || seen_s != graph.all_servers())
        throw std::invalid_argument("partition: classes must cover all types");

    // QoS ordering, highest priority first: QD prefix with decreasing T,
    // optional single QED, ED suffix with increasing W.
    int phase = 0; // 0 = QD run, 1 = QED seen, 2 = ED run
    double prev = 0.0;
    for (const PriorityClass& cls : p.classes) {
        switch (cls.target.regime) {
        case ServiceRegime::kQualityDriven:
            if (phase > 0 || (prev != 0.0 && !(cls.target.value < prev)))
                throw std::invalid_argument(
                    "partition: QD idle targets must lead and strictly decrease with priority");
            prev = cls.target.value;
            break;
        case ServiceRegime::kQualityEfficiencyDriven:
            if (phase >= 1)
                throw std::invalid_argument("partition: at most one QED class, between QD and ED");
            phase = 1;
            prev = 0.0;
            break;
        case ServiceRegime::kEfficiencyDriven:
            if (phase == 2 && !(cls.target.value > prev))
                throw std::invalid_argument(
                    "partition: ED wait targets must strictly increase down the priorities");
            phase = 2;
            prev = cls.target.value;
            break;
        }
    }
}

inline int class_of_customer(const PriorityPartition& p, int customer) {
    for (std::size_t l = 0; l < p.classes.size(); ++l)
        if (p.classes[l].customers.contains(customer)) return static_cast<int>(l);
    return -1;
}

inline int class_of_server(const PriorityPartition& p, int server) {
    for (std::size_t l = 0; l < p.classes.size(); ++l)
        if (p.classes[l].servers.contains(server)) return static_cast<int>(l);
    return -1;
}

} // namespace detail

/// Removes the links that would let a lower-priority class's servers serve
/// higher-priority customers, so each class keeps its own service level:
/// edge (c,s) is dropped when the class index of c is smaller (higher
/// priority) than the class index of s.  Links from servers to
/// lower-priority customers are preserved; under FCFS they are almost never
/// used.  Fails if a removal isolates a type.
inline CompatibilityGraph redesign_graph(const CompatibilityGraph& graph,
                                         const PriorityPartition& partition) {
    detail::validate_partition(graph, partition);
    std::vector<std::pair<int, int>> kept;
    for (auto [i, j] : graph.edges()) {
        int kc = detail::class_of_customer(partition, i);
        int ks = detail::class_of_server(partition, j);
        if (kc < ks) continue;
        kept.emplace_back(i, j);
    }
    try {
        return CompatibilityGraph(graph.customer_count(), graph.server_count(), std::move(kept));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("redesign: link removal isolates a type (") +
                                    e.what() + ")");
    }
}

/// Differentiated-service design: per-class staffing plus the redesigned
/// graph to operate, and the global theoretical rate matrix combining the
/// class designs weighted by their effective service shares.
struct DifferentiatedDesign {
    double lambda = 0.0;
    CompatibilityGraph redesigned;
    std::vector<DesignResult> per_class;              // class-local type indices
    std::vector<std::vector<int>> class_customers;    // global indices, ascending
    std::vector<std::vector<int>> class_servers;
    std::vector<double> class_lambda;                 // class arrival rates
    std::vector<double> class_effective_lambda;
    RateMatrix combined_rates;                        // fractions of all services
    ProbabilityVector global_beta;                    // column sums of combined_rates
    std::vector<double> workforce_real;               // global per server type
    std::vector<int> workforce;
    int total = 0;
};

/// Runs the appropriate single-class design on each priority class in
/// isolation.  Class arrival rates split lambda by the unadjusted type mix;
/// ED thinning happens inside the per-class design.  Preserved cross-class
/// edges are excluded from the per-class rate computation and appear only in
/// the redesigned graph.
inline DifferentiatedDesign design_differentiated(const SystemSpec& spec,
                                                  const PriorityPartition& partition) {
    const CompatibilityGraph& graph = spec.graph();
    CompatibilityGraph redesigned = redesign_graph(graph, partition);

    DifferentiatedDesign out{spec.lambda(),
                             redesigned,
                             {},
                             {},
                             {},
                             {},
                             {},
                             RateMatrix(graph.customer_count(), graph.server_count()),
                             ProbabilityVector(std::vector<double>{1.0}),
                             std::vector<double>(static_cast<std::size_t>(graph.server_count()),
                                                 0.0),
                             {},
                             0};

    for (std::size_t l = 0; l < partition.classes.size(); ++l) {
        const PriorityClass& cls = partition.classes[l];
        std::vector<int> cmap, smap;
        CompatibilityGraph sub =
            detail::induced_subgraph(graph, cls.customers, cls.servers, &cmap, &smap);

        double class_mass = spec.alpha().mass(cls.customers);
        double class_lambda = class_mass * spec.lambda();
        std::vector<double> sub_alpha, sub_beta;
        for (int i : cmap) sub_alpha.push_back(spec.alpha()[i] / class_mass);
        for (int j : smap) sub_beta.push_back(cls.beta[static_cast<std::size_t>(j)]);
        std::vector<std::tuple<int, int, Distribution>> sub_service;
        for (auto [si, sj] : sub.edges())
            sub_service.emplace_back(si, sj,
                                     spec.service(cmap[static_cast<std::size_t>(si)],
                                                  smap[static_cast<std::size_t>(sj)]));
        std::vector<Distribution> sub_patience;
        for (int i : cmap) sub_patience.push_back(spec.patience(i));

        SystemSpec sub_spec(sub, class_lambda, ProbabilityVector(sub_alpha),
                            SystemSpec::interarrival_for(Distribution::exponential(1.0),
                                                         class_lambda),
                            std::move(sub_service), std::move(sub_patience));
        DesignResult cls_design = [&]() -> DesignResult {
            try {
                return design_for(sub_spec, ProbabilityVector(sub_beta), cls.target);
            } catch (const CrpViolationError& e) {
                throw std::domain_error("differentiated design: class " + std::to_string(l + 1) +
                                        ": " + e.what());
            }
        }();
        out.class_lambda.push_back(class_lambda);
        out.class_effective_lambda.push_back(cls_design.effective_lambda);
        for (std::size_t k = 0; k < smap.size(); ++k) {
            out.workforce_real[static_cast<std::size_t>(smap[k])] = cls_design.workforce_real[k];
        }
        out.per_class.push_back(std::move(cls_design));
        out.class_customers.push_back(std::move(cmap));
        out.class_servers.push_back(std::move(smap));
    }

    // Global rates: class rates weighted by the class share of all services.
    double total_effective = 0.0;
    for (double le : out.class_effective_lambda) total_effective += le;
    for (std::size_t l = 0; l < out.per_class.size(); ++l) {
        double share = out.class_effective_lambda[l] / total_effective;
        const RateMatrix& sub = out.per_class[l].rates_used;
        for (int si = 0; si < sub.customer_count(); ++si)
            for (int sj = 0; sj < sub.server_count(); ++sj)
                out.combined_rates.at(out.class_customers[l][static_cast<std::size_t>(si)],
                                      out.class_servers[l][static_cast<std::size_t>(sj)]) =
                    share * sub.at(si, sj);
    }
    std::vector<double> gb(static_cast<std::size_t>(graph.server_count()));
    for (int j = 0; j < graph.server_count(); ++j)
        gb[static_cast<std::size_t>(j)] = out.combined_rates.col_sum(j);
    out.global_beta = ProbabilityVector(gb);
    out.workforce = round_workforce(out.workforce_real);
    for (int n : out.workforce) out.total += n;
    return out;
}

} // namespace fcfsalis
