#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fcfsalis/design.hpp"
#include "fcfsalis/model.hpp"
#include "fcfsalis/simcore.hpp"
#include "fcfsalis/stats.hpp"

namespace fcfsalis {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace cfg {

enum class TokenKind { kWord, kNumber, kPunct, kNewline, kEnd };

struct Token {
    TokenKind kind = TokenKind::kEnd;
    std::string text;
    double number = 0.0;
    int line = 0;
};

// Scenario files are line oriented: one entry per line, nested blocks in
// braces.  Numbers may be written as fractions (1/3).  '#' starts a comment.
inline std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    std::size_t pos = 0;
    auto peek = [&]() -> char { return pos < text.size() ? text[pos] : '\0'; };
    while (pos < text.size()) {
        char c = text[pos];
        if (c == '\n') {
            if (!out.empty() && out.back().kind != TokenKind::kNewline)
                out.push_back({TokenKind::kNewline, "\n", 0.0, line});
            ++line;
            ++pos;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
            continue;
        }
        if (c == '#') {
            while (pos < text.size() && text[pos] != '\n') ++pos;
            continue;
        }
        if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',') {
            out.push_back({TokenKind::kPunct, std::string(1, c), 0.0, line});
            ++pos;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
            std::size_t start = pos;
            if (c == '-') ++pos;
            while (pos < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                    text[pos] == 'e' || text[pos] == 'E' ||
                    ((text[pos] == '+' || text[pos] == '-') && pos > start &&
                     (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
                ++pos;
            std::string_view n(text.data() + start, pos - start);
            double v = 0.0;
            auto [p, ec] = std::from_chars(n.data(), n.data() + n.size(), v);
            if (ec != std::errc() || p != n.data() + n.size())
                throw ParseError(line, "bad number '" + std::string(n) + "'");
            if (peek() == '/') {
                ++pos;
                std::size_t dstart = pos;
                while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                             text[pos] == '.'))
                    ++pos;
                std::string_view d(text.data() + dstart, pos - dstart);
                double denom = 0.0;
                auto [dp, dec] = std::from_chars(d.data(), d.data() + d.size(), denom);
                if (dec != std::errc() || dp != d.data() + d.size() || denom == 0.0)
                    throw ParseError(line, "bad fraction denominator");
                v /= denom;
            }
            out.push_back({TokenKind::kNumber, std::string(n), v, line});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                         text[pos] == '_'))
                ++pos;
            out.push_back({TokenKind::kWord, text.substr(start, pos - start), 0.0, line});
            continue;
        }
        throw ParseError(line, std::string("unexpected character '") + c + "'");
    }
    out.push_back({TokenKind::kEnd, "", 0.0, line});
    return out;
}

struct Value {
    enum class Kind { kNumber, kWord, kDistribution };
    Kind kind = Kind::kWord;
    double number = 0.0;
    std::string word;
    std::optional<Distribution> dist;
    int line = 0;
};

struct Node {
    std::string name;
    std::vector<Value> args;
    std::vector<Node> children;
    bool is_block = false;
    int line = 0;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::vector<Node> parse_document() {
        std::vector<Node> nodes = parse_items(/*top=*/true);
        if (current().kind != TokenKind::kEnd)
            throw ParseError(current().line, "unexpected '" + current().text + "'");
        return nodes;
    }

private:
    const Token& current() const { return tokens_[pos_]; }
    void advance() { ++pos_; }
    void skip_newlines() {
        while (current().kind == TokenKind::kNewline) advance();
    }

    std::vector<Node> parse_items(bool top) {
        std::vector<Node> items;
        for (;;) {
            skip_newlines();
            if (current().kind == TokenKind::kEnd) {
                if (!top) throw ParseError(current().line, "missing '}'");
                return items;
            }
            if (current().kind == TokenKind::kPunct && current().text == "}") {
                if (top) throw ParseError(current().line, "unmatched '}'");
                return items;
            }
            items.push_back(parse_item());
        }
    }

    Node parse_item() {
        if (current().kind != TokenKind::kWord)
            throw ParseError(current().line, "expected an entry name, got '" + current().text + "'");
        Node node;
        node.name = current().text;
        node.line = current().line;
        advance();
        while (current().kind == TokenKind::kWord || current().kind == TokenKind::kNumber)
            node.args.push_back(parse_value());
        if (current().kind == TokenKind::kPunct && current().text == "{") {
            advance();
            node.is_block = true;
            node.children = parse_items(/*top=*/false);
            advance(); // '}'
            return node;
        }
        if (current().kind == TokenKind::kNewline || current().kind == TokenKind::kEnd) {
            if (current().kind == TokenKind::kNewline) advance();
            return node;
        }
        throw ParseError(current().line, "unexpected '" + current().text + "' in entry '" +
                                             node.name + "'");
    }

    Value parse_value() {
        Value v;
        v.line = current().line;
        if (current().kind == TokenKind::kNumber) {
            v.kind = Value::Kind::kNumber;
            v.number = current().number;
            advance();
            return v;
        }
        std::string word = current().text;
        advance();
        if (current().kind == TokenKind::kPunct && current().text == "(") {
            advance();
            std::vector<double> args;
            for (;;) {
                if (current().kind != TokenKind::kNumber)
                    throw ParseError(current().line, "expected a number in " + word + "(...)");
                args.push_back(current().number);
                advance();
                if (current().kind == TokenKind::kPunct && current().text == ",") {
                    advance();
                    continue;
                }
                if (current().kind == TokenKind::kPunct && current().text == ")") {
                    advance();
                    break;
                }
                throw ParseError(current().line, "expected ',' or ')' in " + word + "(...)");
            }
            std::string lower;
            for (char c : word) lower.push_back(static_cast<char>(std::tolower(
                static_cast<unsigned char>(c))));
            v.kind = Value::Kind::kDistribution;
            try {
                v.dist = Distribution::from_parts(lower, args);
            } catch (const std::invalid_argument& e) {
                throw ParseError(v.line, e.what());
            }
            return v;
        }
        v.kind = Value::Kind::kWord;
        v.word = word;
        return v;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace cfg

/// Parsed scenario file: the system (types, mix, laws, arrival rates), an
/// optional design block, an optional simulate block and optional explicit
/// workforce.  Strict: unknown entries are rejected with their line number.
struct ScenarioConfig {
    struct CustomerDecl {
        std::string name;
        double alpha = 0.0;
        Distribution patience = Distribution::deterministic(0.0);
    };
    struct EdgeDecl {
        std::string customer;
        std::string server;
        Distribution service = Distribution::deterministic(0.0);
    };
    struct ClassDecl {
        std::string name;
        std::vector<std::string> customers;
        std::vector<std::string> servers;
        QoSTarget target;
        std::vector<std::pair<std::string, double>> beta;
    };
    enum class DesignMode { kNone, kEd, kQd, kQed, kDiff };

    std::vector<double> lambdas;
    Distribution interarrival_shape = Distribution::exponential(1.0);
    std::vector<CustomerDecl> customers;
    std::vector<std::string> servers;
    std::vector<EdgeDecl> edges;

    DesignMode mode = DesignMode::kNone;
    double wait_target = 0.0;
    double idle_target = 0.0;
    std::vector<std::pair<std::string, double>> beta;
    std::vector<ClassDecl> classes;

    bool has_simulate = false;
    std::int64_t sim_customers = 100000;
    std::int64_t sim_warmup = 20000;
    int sim_replications = 20;
    std::uint64_t sim_seed = 1;
    double sim_wait_bin = 0.0; // 0 = derive from the design target
    double sim_idle_bin = 0.0;

    std::vector<std::pair<std::string, int>> workforce;

    int customer_index(const std::string& name) const {
        for (std::size_t i = 0; i < customers.size(); ++i)
            if (customers[i].name == name) return static_cast<int>(i);
        return -1;
    }
    int server_index(const std::string& name) const {
        for (std::size_t j = 0; j < servers.size(); ++j)
            if (servers[j] == name) return static_cast<int>(j);
        return -1;
    }

    CompatibilityGraph graph() const {
        std::vector<std::pair<int, int>> e;
        for (const auto& edge : edges)
            e.emplace_back(customer_index(edge.customer), server_index(edge.server));
        return CompatibilityGraph(static_cast<int>(customers.size()),
                                  static_cast<int>(servers.size()), std::move(e));
    }

    SystemSpec system_spec(double lambda) const {
        std::vector<double> alpha;
        std::vector<Distribution> patience;
        for (const auto& c : customers) {
            alpha.push_back(c.alpha);
            patience.push_back(c.patience);
        }
        std::vector<std::tuple<int, int, Distribution>> service;
        for (const auto& edge : edges)
            service.emplace_back(customer_index(edge.customer), server_index(edge.server),
                                 edge.service);
        return SystemSpec(graph(), lambda, ProbabilityVector(std::move(alpha)),
                          SystemSpec::interarrival_for(interarrival_shape, lambda),
                          std::move(service), std::move(patience));
    }

    ProbabilityVector beta_vector() const {
        std::vector<double> b(servers.size(), 0.0);
        for (const auto& [name, value] : beta) {
            int j = server_index(name);
            if (j < 0) throw std::invalid_argument("beta: unknown server type '" + name + "'");
            b[static_cast<std::size_t>(j)] = value;
        }
        return ProbabilityVector(std::move(b));
    }

    QoSTarget target() const {
        switch (mode) {
        case DesignMode::kEd: return QoSTarget::ed(wait_target);
        case DesignMode::kQd: return QoSTarget::qd(idle_target);
        case DesignMode::kQed: return QoSTarget::qed();
        default: throw std::invalid_argument("config: no single-regime design present");
        }
    }

    PriorityPartition partition() const {
        PriorityPartition p;
        for (const auto& cls : classes) {
            PriorityClass pc;
            pc.target = cls.target;
            for (const auto& cname : cls.customers) {
                int i = customer_index(cname);
                if (i < 0)
                    throw std::invalid_argument("class " + cls.name + ": unknown customer '" +
                                                cname + "'");
                pc.customers = pc.customers.with(i);
            }
            for (const auto& sname : cls.servers) {
                int j = server_index(sname);
                if (j < 0)
                    throw std::invalid_argument("class " + cls.name + ": unknown server '" +
                                                sname + "'");
                pc.servers = pc.servers.with(j);
            }
            pc.beta.assign(servers.size(), 0.0);
            for (const auto& [sname, value] : cls.beta) {
                int j = server_index(sname);
                if (j < 0)
                    throw std::invalid_argument("class " + cls.name + ": unknown server '" +
                                                sname + "' in beta");
                pc.beta[static_cast<std::size_t>(j)] = value;
            }
            p.classes.push_back(std::move(pc));
        }
        return p;
    }

    std::vector<int> workforce_vector() const {
        std::vector<int> w(servers.size(), 0);
        for (const auto& [name, n] : workforce) {
            int j = server_index(name);
            if (j < 0) throw std::invalid_argument("workforce: unknown server type '" + name + "'");
            w[static_cast<std::size_t>(j)] = n;
        }
        return w;
    }
};

namespace cfg {

inline double want_number(const Node& node, std::size_t k) {
    if (k >= node.args.size() || node.args[k].kind != Value::Kind::kNumber)
        throw ParseError(node.line, "'" + node.name + "': expected a number");
    return node.args[k].number;
}

inline const std::string& want_word(const Node& node, std::size_t k) {
    if (k >= node.args.size() || node.args[k].kind != Value::Kind::kWord)
        throw ParseError(node.line, "'" + node.name + "': expected a name");
    return node.args[k].word;
}

inline Distribution want_dist(const Node& node, std::size_t k) {
    if (k >= node.args.size() || node.args[k].kind != Value::Kind::kDistribution)
        throw ParseError(node.line, "'" + node.name + "': expected a distribution such as exp(1)");
    return *node.args[k].dist;
}

inline void want_argc(const Node& node, std::size_t n) {
    if (node.args.size() != n)
        throw ParseError(node.line,
                         "'" + node.name + "': expected " + std::to_string(n) + " value(s)");
}

inline void want_leaf(const Node& node) {
    if (node.is_block) throw ParseError(node.line, "'" + node.name + "' takes no block");
}

inline void parse_system_block(const Node& block, ScenarioConfig& out) {
    for (const Node& item : block.children) {
        if (item.name == "lambda") {
            want_leaf(item);
            if (item.args.empty()) throw ParseError(item.line, "lambda: at least one value");
            for (std::size_t k = 0; k < item.args.size(); ++k)
                out.lambdas.push_back(want_number(item, k));
        } else if (item.name == "interarrival") {
            want_leaf(item);
            want_argc(item, 1);
            out.interarrival_shape = want_dist(item, 0);
        } else if (item.name == "customer") {
            want_leaf(item);
            // customer <name> alpha <p> patience <dist>
            want_argc(item, 5);
            ScenarioConfig::CustomerDecl c;
            c.name = want_word(item, 0);
            if (want_word(item, 1) != "alpha")
                throw ParseError(item.line, "customer: expected 'alpha'");
            c.alpha = want_number(item, 2);
            if (want_word(item, 3) != "patience")
                throw ParseError(item.line, "customer: expected 'patience'");
            c.patience = want_dist(item, 4);
            out.customers.push_back(std::move(c));
        } else if (item.name == "server") {
            want_leaf(item);
            want_argc(item, 1);
            out.servers.push_back(want_word(item, 0));
        } else if (item.name == "edge") {
            want_leaf(item);
            // edge <customer> <server> service <dist>
            want_argc(item, 4);
            ScenarioConfig::EdgeDecl e;
            e.customer = want_word(item, 0);
            e.server = want_word(item, 1);
            if (want_word(item, 2) != "service")
                throw ParseError(item.line, "edge: expected 'service'");
            e.service = want_dist(item, 3);
            out.edges.push_back(std::move(e));
        } else {
            throw ParseError(item.line, "unknown system entry '" + item.name + "'");
        }
    }
}

inline QoSTarget parse_target(const Node& item) {
    const std::string& kind = want_word(item, 0);
    if (kind == "ed") {
        want_argc(item, 2);
        return QoSTarget::ed(want_number(item, 1));
    }
    if (kind == "qd") {
        want_argc(item, 2);
        return QoSTarget::qd(want_number(item, 1));
    }
    if (kind == "qed") {
        want_argc(item, 1);
        return QoSTarget::qed();
    }
    throw ParseError(item.line, "target: expected ed <W>, qd <T> or qed");
}

inline void parse_class_block(const Node& block, ScenarioConfig& out) {
    ScenarioConfig::ClassDecl cls;
    if (block.args.size() == 1)
        cls.name = want_word(block, 0);
    else if (!block.args.empty())
        throw ParseError(block.line, "class: at most one name");
    bool has_target = false;
    for (const Node& item : block.children) {
        if (item.name == "customers") {
            want_leaf(item);
            for (std::size_t k = 0; k < item.args.size(); ++k)
                cls.customers.push_back(want_word(item, k));
        } else if (item.name == "servers") {
            want_leaf(item);
            for (std::size_t k = 0; k < item.args.size(); ++k)
                cls.servers.push_back(want_word(item, k));
        } else if (item.name == "target") {
            want_leaf(item);
            cls.target = parse_target(item);
            has_target = true;
        } else if (item.name == "beta") {
            want_leaf(item);
            want_argc(item, 2);
            cls.beta.emplace_back(want_word(item, 0), want_number(item, 1));
        } else {
            throw ParseError(item.line, "unknown class entry '" + item.name + "'");
        }
    }
    if (!has_target) throw ParseError(block.line, "class: missing target");
    out.classes.push_back(std::move(cls));
}

inline void parse_design_block(const Node& block, ScenarioConfig& out) {
    for (const Node& item : block.children) {
        if (item.name == "mode") {
            want_leaf(item);
            want_argc(item, 1);
            const std::string& m = want_word(item, 0);
            if (m == "ed")
                out.mode = ScenarioConfig::DesignMode::kEd;
            else if (m == "qd")
                out.mode = ScenarioConfig::DesignMode::kQd;
            else if (m == "qed")
                out.mode = ScenarioConfig::DesignMode::kQed;
            else if (m == "diff")
                out.mode = ScenarioConfig::DesignMode::kDiff;
            else
                throw ParseError(item.line, "mode: expected ed, qd, qed or diff");
        } else if (item.name == "wait") {
            want_leaf(item);
            want_argc(item, 1);
            out.wait_target = want_number(item, 0);
        } else if (item.name == "idle") {
            want_leaf(item);
            want_argc(item, 1);
            out.idle_target = want_number(item, 0);
        } else if (item.name == "beta") {
            want_leaf(item);
            want_argc(item, 2);
            out.beta.emplace_back(want_word(item, 0), want_number(item, 1));
        } else if (item.name == "class") {
            if (!item.is_block) throw ParseError(item.line, "class: expected a block");
            parse_class_block(item, out);
        } else {
            throw ParseError(item.line, "unknown design entry '" + item.name + "'");
        }
    }
    if (out.mode == ScenarioConfig::DesignMode::kNone)
        throw ParseError(block.line, "design: missing mode");
    if (out.mode == ScenarioConfig::DesignMode::kDiff && out.classes.empty())
        throw ParseError(block.line, "design: diff mode needs class blocks");
}

inline void parse_simulate_block(const Node& block, ScenarioConfig& out) {
    out.has_simulate = true;
    for (const Node& item : block.children) {
        want_leaf(item);
        want_argc(item, 1);
        if (item.name == "customers")
            out.sim_customers = static_cast<std::int64_t>(want_number(item, 0));
        else if (item.name == "warmup")
            out.sim_warmup = static_cast<std::int64_t>(want_number(item, 0));
        else if (item.name == "replications")
            out.sim_replications = static_cast<int>(want_number(item, 0));
        else if (item.name == "seed")
            out.sim_seed = static_cast<std::uint64_t>(want_number(item, 0));
        else if (item.name == "wait_bin")
            out.sim_wait_bin = want_number(item, 0);
        else if (item.name == "idle_bin")
            out.sim_idle_bin = want_number(item, 0);
        else
            throw ParseError(item.line, "unknown simulate entry '" + item.name + "'");
    }
}

inline void parse_workforce_block(const Node& block, ScenarioConfig& out) {
    for (const Node& item : block.children) {
        want_leaf(item);
        want_argc(item, 1);
        out.workforce.emplace_back(item.name, static_cast<int>(want_number(item, 0)));
    }
}

} // namespace cfg

inline ScenarioConfig parse_scenario(const std::string& text) {
    cfg::Parser parser(cfg::tokenize(text));
    std::vector<cfg::Node> nodes = parser.parse_document();
    ScenarioConfig out;
    bool saw_system = false;
    for (const cfg::Node& node : nodes) {
        if (!node.is_block) throw ParseError(node.line, "expected a block '" + node.name + " { ... }'");
        if (node.name == "system") {
            cfg::parse_system_block(node, out);
            saw_system = true;
        } else if (node.name == "design") {
            cfg::parse_design_block(node, out);
        } else if (node.name == "simulate") {
            cfg::parse_simulate_block(node, out);
        } else if (node.name == "workforce") {
            cfg::parse_workforce_block(node, out);
        } else {
            throw ParseError(node.line, "unknown block '" + node.name + "'");
        }
    }
    if (!saw_system) throw ParseError(1, "missing system block");
    if (out.lambdas.empty()) throw ParseError(1, "system: missing lambda");
    if (out.customers.empty()) throw ParseError(1, "system: no customer types");
    if (out.servers.empty()) throw ParseError(1, "system: no server types");
    for (const auto& e : out.edges) {
        if (out.customer_index(e.customer) < 0)
            throw ParseError(1, "edge: unknown customer type '" + e.customer + "'");
        if (out.server_index(e.server) < 0)
            throw ParseError(1, "edge: unknown server type '" + e.server + "'");
    }
    return out;
}

inline ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace cfg {

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace cfg

/// Canonical text form; parsing it back yields a semantically identical
/// configuration.
inline std::string to_canonical_text(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "system {\n";
    out << "  lambda";
    for (double l : c.lambdas) out << ' ' << cfg::format_number(l);
    out << "\n";
    out << "  interarrival " << c.interarrival_shape.to_string() << "\n";
    for (const auto& cust : c.customers)
        out << "  customer " << cust.name << " alpha " << cfg::format_number(cust.alpha)
            << " patience " << cust.patience.to_string() << "\n";
    for (const auto& s : c.servers) out << "  server " << s << "\n";
    for (const auto& e : c.edges)
        out << "  edge " << e.customer << ' ' << e.server << " service "
            << e.service.to_string() << "\n";
    out << "}\n";
    if (c.mode != ScenarioConfig::DesignMode::kNone) {
        out << "design {\n";
        switch (c.mode) {
        case ScenarioConfig::DesignMode::kEd:
            out << "  mode ed\n  wait " << cfg::format_number(c.wait_target) << "\n";
            break;
        case ScenarioConfig::DesignMode::kQd:
            out << "  mode qd\n  idle " << cfg::format_number(c.idle_target) << "\n";
            break;
        case ScenarioConfig::DesignMode::kQed:
            out << "  mode qed\n";
            break;
        case ScenarioConfig::DesignMode::kDiff:
            out << "  mode diff\n";
            break;
        case ScenarioConfig::DesignMode::kNone:
            break;
        }
        for (const auto& [name, value] : c.beta)
            out << "  beta " << name << ' ' << cfg::format_number(value) << "\n";
        for (const auto& cls : c.classes) {
            out << "  class";
            if (!cls.name.empty()) out << ' ' << cls.name;
            out << " {\n";
            out << "    customers";
            for (const auto& n : cls.customers) out << ' ' << n;
            out << "\n    servers";
            for (const auto& n : cls.servers) out << ' ' << n;
            out << "\n    target ";
            switch (cls.target.regime) {
            case ServiceRegime::kEfficiencyDriven:
                out << "ed " << cfg::format_number(cls.target.value);
                break;
            case ServiceRegime::kQualityDriven:
                out << "qd " << cfg::format_number(cls.target.value);
                break;
            case ServiceRegime::kQualityEfficiencyDriven:
                out << "qed";
                break;
            }
            out << "\n";
            for (const auto& [name, value] : cls.beta)
                out << "    beta " << name << ' ' << cfg::format_number(value) << "\n";
            out << "  }\n";
        }
        out << "}\n";
    }
    if (c.has_simulate) {
        out << "simulate {\n";
        out << "  customers " << c.sim_customers << "\n";
        out << "  warmup " << c.sim_warmup << "\n";
        out << "  replications " << c.sim_replications << "\n";
        out << "  seed " << c.sim_seed << "\n";
        if (c.sim_wait_bin > 0.0) out << "  wait_bin " << cfg::format_number(c.sim_wait_bin) << "\n";
        if (c.sim_idle_bin > 0.0) out << "  idle_bin " << cfg::format_number(c.sim_idle_bin) << "\n";
        out << "}\n";
    }
    if (!c.workforce.empty()) {
        out << "workforce {\n";
        for (const auto& [name, n] : c.workforce) out << "  " << name << ' ' << n << "\n";
        out << "}\n";
    }
    return out.str();
}

/// Flat key/value tolerance file for the validate command.
inline ComparisonTolerances parse_tolerances(const std::string& text) {
    cfg::Parser parser(cfg::tokenize(text));
    ComparisonTolerances tol;
    for (const cfg::Node& node : parser.parse_document()) {
        cfg::want_leaf(node);
        cfg::want_argc(node, 1);
        double v = cfg::want_number(node, 0);
        if (node.name == "rate_abs")
            tol.rate_abs = v;
        else if (node.name == "wait_rel")
            tol.wait_rel = v;
        else if (node.name == "idle_rel")
            tol.idle_rel = v;
        else if (node.name == "abandon_abs")
            tol.abandon_abs = v;
        else if (node.name == "no_wait_min")
            tol.no_wait_min = v;
        else if (node.name == "no_idle_min")
            tol.no_idle_min = v;
        else
            throw ParseError(node.line, "unknown tolerance '" + node.name + "'");
    }
    return tol;
}

} // namespace fcfsalis
