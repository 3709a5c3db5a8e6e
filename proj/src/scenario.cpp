#include "ovp/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ovp/errors.hpp"

namespace ovp {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct KeyValue {
    std::string value;
    int line = 0;
};

using SectionMap = std::map<std::string, std::map<std::string, KeyValue>>;

SectionMap read_sections(const std::string& text) {
    SectionMap out;
    std::istringstream in(text);
    std::string line;
    std::string section = "problem";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("unterminated section header", lineno, 1);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value", lineno, 1);
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", lineno, 1);
        out[section][key] = {trim(line.substr(eq + 1)), lineno};
    }
    return out;
}

double to_double(const std::string& field, const KeyValue& kv) {
    try {
        size_t pos = 0;
        const double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(field, "field '" + field + "' is not a number: '" +
                                         kv.value + "'");
    }
}

long to_long(const std::string& field, const KeyValue& kv) {
    try {
        size_t pos = 0;
        const long v = std::stol(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(field, "field '" + field + "' is not an integer: '" +
                                         kv.value + "'");
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> to_double_list(const std::string& field, const KeyValue& kv) {
    std::vector<double> out;
    for (const std::string& item : split_list(kv.value)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError(field, "field '" + field + "' has a bad entry '" +
                                             item + "'");
        }
    }
    return out;
}

// Validates an expression string under the given variable set by parsing it.
void check_expression(const std::string& field, const std::string& text,
                      const std::vector<std::string>& vars) {
    if (trim(text).empty())
        throw ValidationError(field, "field '" + field + "' is empty");
    Expression::parse(text, vars);  // throws ParseError on bad syntax/identifier
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
    SectionMap sections = read_sections(text);
    Scenario sc;
    sc.source_path = name;
    sc.raw_text = text;

    auto& prob = sections["problem"];
    auto need = [&](std::map<std::string, KeyValue>& sec, const std::string& key) -> KeyValue& {
        auto it = sec.find(key);
        if (it == sec.end())
            throw ValidationError(key, "missing required field '" + key + "'");
        return it->second;
    };
    auto maybe = [&](std::map<std::string, KeyValue>& sec,
                     const std::string& key) -> std::optional<KeyValue> {
        auto it = sec.find(key);
        if (it == sec.end()) return std::nullopt;
        return it->second;
    };

    sc.a = to_double("a", need(prob, "a"));
    sc.b = to_double("b", need(prob, "b"));
    if (!(sc.a < sc.b)) throw ValidationError("b", "need a < b");
    sc.A = to_double("A", need(prob, "A"));
    sc.B = to_double("B", need(prob, "B"));
    sc.lagrangian_expr = need(prob, "L").value;
    check_expression("L", sc.lagrangian_expr, {"x", "u", "v"});
    if (auto kv = maybe(prob, "L_v")) {
        check_expression("L_v", kv->value, {"x", "u", "v"});
        sc.lagrangian_v_expr = kv->value;
    }
    if (auto kv = maybe(prob, "L_vv")) {
        check_expression("L_vv", kv->value, {"x", "u", "v"});
        sc.lagrangian_vv_expr = kv->value;
    }
    sc.fd_warning = !sc.lagrangian_v_expr || !sc.lagrangian_vv_expr;
    sc.mu = to_double("mu", need(prob, "mu"));
    if (!(sc.mu > 0)) throw ValidationError("mu", "mu must be positive");
    sc.f_expr = need(prob, "f").value;
    check_expression("f", sc.f_expr, {"x"});
    sc.g_expr = need(prob, "g").value;
    check_expression("g", sc.g_expr, {"x"});
    if (auto kv = maybe(prob, "f_prime")) {
        check_expression("f_prime", kv->value, {"x"});
        sc.f_prime_expr = kv->value;
    }
    if (auto kv = maybe(prob, "g_prime")) {
        check_expression("g_prime", kv->value, {"x"});
        sc.g_prime_expr = kv->value;
    }
    if (auto kv = maybe(prob, "margin")) {
        sc.margin = to_double("margin", *kv);
        if (sc.margin < 0) throw ValidationError("margin", "margin must be >= 0");
    }

    auto& solver = sections["solver"];
    if (auto kv = maybe(solver, "n")) {
        sc.n = static_cast<int>(to_long("n", *kv));
        if (sc.n < 2) throw ValidationError("n", "n must be >= 2");
    }
    if (auto kv = maybe(solver, "tol")) {
        sc.tol = to_double("tol", *kv);
        if (!(sc.tol > 0)) throw ValidationError("tol", "tol must be positive");
    }
    if (auto kv = maybe(solver, "max_iter")) {
        sc.max_iter = to_long("max_iter", *kv);
        if (sc.max_iter < 1) throw ValidationError("max_iter", "max_iter must be >= 1");
    }
    if (auto kv = maybe(solver, "seed"))
        sc.seed = static_cast<std::uint64_t>(to_long("seed", *kv));

    auto& checks = sections["checks"];
    if (auto kv = maybe(checks, "pairs_per_scale")) {
        sc.pairs_per_scale = static_cast<int>(to_long("pairs_per_scale", *kv));
        if (sc.pairs_per_scale < 1)
            throw ValidationError("pairs_per_scale", "must be >= 1");
    }
    if (auto kv = maybe(checks, "scales")) {
        sc.scales = static_cast<int>(to_long("scales", *kv));
        if (sc.scales < 1) throw ValidationError("scales", "must be >= 1");
    }
    if (auto kv = maybe(checks, "k_grid")) {
        sc.k_grid = to_double_list("k_grid", *kv);
        if (sc.k_grid.empty() || !std::is_sorted(sc.k_grid.begin(), sc.k_grid.end()))
            throw ValidationError("k_grid", "k_grid must be ascending and nonempty");
    }
    if (auto kv = maybe(checks, "eps_ladder")) {
        sc.eps_ladder = to_double_list("eps_ladder", *kv);
        for (size_t i = 0; i + 1 < sc.eps_ladder.size(); ++i)
            if (!(sc.eps_ladder[i] > sc.eps_ladder[i + 1]))
                throw ValidationError("eps_ladder", "eps_ladder must strictly decrease");
    }
    if (auto kv = maybe(checks, "thetas")) sc.thetas = to_double_list("thetas", *kv);
    if (auto kv = maybe(checks, "refinement_ladder")) {
        sc.refinement_ladder.clear();
        for (double v : to_double_list("refinement_ladder", *kv))
            sc.refinement_ladder.push_back(static_cast<int>(v));
        if (sc.refinement_ladder.size() < 3)
            throw ValidationError("refinement_ladder", "need at least 3 levels");
    }

    auto& sweep = sections["sweep"];
    for (auto& [key, kv] : sweep) {
        if (key == "action") {
            sc.sweep_action = kv.value;
            if (sc.sweep_action != "solve" && sc.sweep_action != "verify" &&
                sc.sweep_action != "theory" && sc.sweep_action != "dini")
                throw ValidationError("action", "sweep action must be solve|verify|theory|dini");
        } else {
            sc.sweep_params.emplace_back(key, split_list(kv.value));
        }
    }

    auto& output = sections["output"];
    if (auto kv = maybe(output, "dir")) sc.out_dir = kv->value;
    return sc;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    Scenario sc = parse_scenario_text(buf.str(), path);
    sc.source_path = path;
    return sc;
}

Lagrangian build_lagrangian(const Scenario& sc) {
    const std::vector<std::string> vars{"x", "u", "v"};
    Expression L = Expression::parse(sc.lagrangian_expr, vars);
    Lagrangian::Fn eval = [L](double x, double u, double v) { return L.eval3(x, u, v); };
    Lagrangian::Fn eval_v, eval_vv;
    if (sc.lagrangian_v_expr) {
        Expression Lv = Expression::parse(*sc.lagrangian_v_expr, vars);
        eval_v = [Lv](double x, double u, double v) { return Lv.eval3(x, u, v); };
    }
    if (sc.lagrangian_vv_expr) {
        Expression Lvv = Expression::parse(*sc.lagrangian_vv_expr, vars);
        eval_vv = [Lvv](double x, double u, double v) { return Lvv.eval3(x, u, v); };
    }
    return make_lagrangian(std::move(eval), std::move(eval_v), std::move(eval_vv), sc.mu,
                           sc.lagrangian_expr);
}

ObstaclePair build_obstacles(const Scenario& sc) {
    Expression f = Expression::parse(sc.f_expr, {"x"});
    Expression g = Expression::parse(sc.g_expr, {"x"});
    ObstaclePair::Fn1 ffn = [f](double x) { return f.eval1(x); };
    ObstaclePair::Fn1 gfn = [g](double x) { return g.eval1(x); };
    ObstaclePair::Fn1 fpfn, gpfn;
    if (sc.f_prime_expr) {
        Expression fp = Expression::parse(*sc.f_prime_expr, {"x"});
        fpfn = [fp](double x) { return fp.eval1(x); };
    }
    if (sc.g_prime_expr) {
        Expression gp = Expression::parse(*sc.g_prime_expr, {"x"});
        gpfn = [gp](double x) { return gp.eval1(x); };
    }
    return ObstaclePair::from_functions(sc.a, sc.b, std::move(ffn), std::move(gfn),
                                        std::move(fpfn), std::move(gpfn), sc.n, sc.margin);
}

ProblemSpec build_problem(const Scenario& sc) {
    return ProblemSpec(sc.a, sc.b, sc.A, sc.B, build_lagrangian(sc), build_obstacles(sc),
                       sc.n);
}

}  // namespace ovp
