#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fcfsalis/rng.hpp"

namespace fcfsalis {

enum class DistKind { kExponential, kUniform, kPareto, kDeterministic };

/// The parametric laws used for inter-arrival, service and patience times:
/// exp(rate), uniform(a,b), pareto(k,a) with F(t) = 1 - (k/t)^a for t > k,
/// and det(c).  Pareto requires shape a > 1 so the mean is finite; the
/// staffing formulas depend on finite means.
class Distribution {
public:
    static Distribution exponential(double rate) {
        if (!(rate > 0.0) || !std::isfinite(rate))
            throw std::invalid_argument("exp(rate): rate must be positive and finite");
        return Distribution(DistKind::kExponential, rate, 0.0);
    }

    static Distribution uniform(double a, double b) {
        if (!(a >= 0.0) || !(a < b) || !std::isfinite(b))
            throw std::invalid_argument("uniform(a,b): need 0 <= a < b < inf");
        return Distribution(DistKind::kUniform, a, b);
    }

    static Distribution pareto(double scale, double shape) {
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw std::invalid_argument("pareto(k,a): scale k must be positive and finite");
        if (!(shape > 1.0) || !std::isfinite(shape))
            throw std::invalid_argument("pareto(k,a): shape a must exceed 1 (finite mean)");
        return Distribution(DistKind::kPareto, scale, shape);
    }

    static Distribution deterministic(double c) {
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("det(c): c must be nonnegative and finite");
        return Distribution(DistKind::kDeterministic, c, 0.0);
    }

    DistKind kind() const { return kind_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }

    double mean() const {
        switch (kind_) {
        case DistKind::kExponential: return 1.0 / p1_;
        case DistKind::kUniform: return 0.5 * (p1_ + p2_);
        case DistKind::kPareto: return p1_ * p2_ / (p2_ - 1.0);
        case DistKind::kDeterministic: return p1_;
        }
        return 0.0;
    }

    double cdf(double t) const {
        switch (kind_) {
        case DistKind::kExponential:
            return t <= 0.0 ? 0.0 : -std::expm1(-p1_ * t);
        case DistKind::kUniform:
            if (t <= p1_) return 0.0;
            if (t >= p2_) return 1.0;
            return (t - p1_) / (p2_ - p1_);
        case DistKind::kPareto:
            return t <= p1_ ? 0.0 : 1.0 - std::pow(p1_ / t, p2_);
        case DistKind::kDeterministic:
            return t >= p1_ ? 1.0 : 0.0;
        }
        return 0.0;
    }

    // Inverse CDF at u in [0,1).  Used for sampling so that every event
    // consumes exactly one generator step.
    double quantile(double u) const {
        switch (kind_) {
        case DistKind::kExponential: return -std::log1p(-u) / p1_;
        case DistKind::kUniform: return p1_ + (p2_ - p1_) * u;
        case DistKind::kPareto: return p1_ * std::pow(1.0 - u, -1.0 / p2_);
        case DistKind::kDeterministic: return p1_;
        }
        return 0.0;
    }

    double sample(SplitMix64& rng) const { return quantile(rng.next_double()); }

    // The same family scaled by a positive factor; scaling maps each family
    // onto itself, so renewal streams can be rescaled to a target rate without
    // changing shape.
    Distribution scaled_by(double factor) const {
        if (!(factor > 0.0) || !std::isfinite(factor))
            throw std::invalid_argument("scale factor must be positive and finite");
        switch (kind_) {
        case DistKind::kExponential: return exponential(p1_ / factor);
        case DistKind::kUniform: return uniform(p1_ * factor, p2_ * factor);
        case DistKind::kPareto: return pareto(p1_ * factor, p2_);
        case DistKind::kDeterministic: return deterministic(p1_ * factor);
        }
        throw std::logic_error("unreachable");
    }

    std::string to_string() const {
        char buf[64];
        switch (kind_) {
        case DistKind::kExponential:
            std::snprintf(buf, sizeof buf, "exp(%.17g)", p1_);
            break;
        case DistKind::kUniform:
            std::snprintf(buf, sizeof buf, "uniform(%.17g,%.17g)", p1_, p2_);
            break;
        case DistKind::kPareto:
            std::snprintf(buf, sizeof buf, "pareto(%.17g,%.17g)", p1_, p2_);
            break;
        case DistKind::kDeterministic:
            std::snprintf(buf, sizeof buf, "det(%.17g)", p1_);
            break;
        }
        return buf;
    }

    /// Parses the textual syntax: exp(rate), uniform(a,b), pareto(k,a),
    /// det(c); case-insensitive, whitespace tolerated between tokens.
    static Distribution parse(std::string_view text) {
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        };
        skip_ws();
        std::string name;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
            name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[pos++]))));
        skip_ws();
        if (name.empty() || pos >= text.size() || text[pos] != '(')
            throw std::invalid_argument("distribution: expected name(args): '" + std::string(text) + "'");
        ++pos;
        std::vector<double> args;
        for (;;) {
            skip_ws();
            std::size_t end = pos;
            while (end < text.size() && text[end] != ',' && text[end] != ')') ++end;
            std::string_view num = text.substr(pos, end - pos);
            while (!num.empty() && std::isspace(static_cast<unsigned char>(num.back())))
                num.remove_suffix(1);
            double v = 0.0;
            auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
            if (ec != std::errc() || p != num.data() + num.size())
                throw std::invalid_argument("distribution: bad number '" + std::string(num) + "'");
            args.push_back(v);
            pos = end;
            if (pos >= text.size())
                throw std::invalid_argument("distribution: missing ')'");
            if (text[pos] == ')') { ++pos; break; }
            ++pos; // ','
        }
        skip_ws();
        if (pos != text.size())
            throw std::invalid_argument("distribution: trailing input '" + std::string(text) + "'");
        return from_parts(name, args);
    }

    static Distribution from_parts(const std::string& lower_name, const std::vector<double>& args) {
        auto need = [&](std::size_t n) {
            if (args.size() != n)
                throw std::invalid_argument("distribution " + lower_name + ": expected " +
                                            std::to_string(n) + " argument(s)");
        };
        if (lower_name == "exp") { need(1); return exponential(args[0]); }
        if (lower_name == "uniform") { need(2); return uniform(args[0], args[1]); }
        if (lower_name == "pareto") { need(2); return pareto(args[0], args[1]); }
        if (lower_name == "det") { need(1); return deterministic(args[0]); }
        throw std::invalid_argument("unknown distribution '" + lower_name + "'");
    }

    bool operator==(const Distribution& other) const {
        return kind_ == other.kind_ && p1_ == other.p1_ && p2_ == other.p2_;
    }

private:
    Distribution(DistKind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

    DistKind kind_;
    double p1_;
    double p2_;
};

} // namespace fcfsalis
