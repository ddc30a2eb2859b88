#include "skewsim/drift_config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace skewsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& s) {
    const std::string t = trim(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected a number, got '" + t + "'");
    }
    if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument("expected a number, got '" + t + "'");
    return v;
}

struct Term {
    enum Kind { poly, sin, cos } kind;
    std::vector<double> c;  // poly coefficients, or (A, w, p)

    double value(double x) const {
        switch (kind) {
            case poly: {
                double s = 0.0;
                for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
                return s;
            }
            case sin: return c[0] * std::sin(c[1] * x + c[2]);
            case cos: return c[0] * std::cos(c[1] * x + c[2]);
        }
        return 0.0;
    }
    double derivative(double x) const {
        switch (kind) {
            case poly: {
                double s = 0.0;
                for (std::size_t i = c.size(); i-- > 1;) s = s * x + static_cast<double>(i) * c[i];
                return s;
            }
            case sin: return c[0] * c[1] * std::cos(c[1] * x + c[2]);
            case cos: return -c[0] * c[1] * std::sin(c[1] * x + c[2]);
        }
        return 0.0;
    }
    double primitive(double x) const {
        switch (kind) {
            case poly: {
                double s = 0.0;
                for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i] / static_cast<double>(i + 1);
                return s * x;
            }
            case sin:
                if (c[1] == 0.0) return c[0] * std::sin(c[2]) * x;
                return -c[0] / c[1] * std::cos(c[1] * x + c[2]);
            case cos:
                if (c[1] == 0.0) return c[0] * std::cos(c[2]) * x;
                return c[0] / c[1] * std::sin(c[1] * x + c[2]);
        }
        return 0.0;
    }
};

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth < 0) throw std::invalid_argument("unbalanced parentheses in '" + s + "'");
        if (ch == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (depth != 0) throw std::invalid_argument("unbalanced parentheses in '" + s + "'");
    out.push_back(trim(cur));
    return out;
}

Term parse_term(const std::string& s) {
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') throw std::invalid_argument("malformed term '" + s + "'");
    const std::string name = trim(s.substr(0, open));
    const std::string args = s.substr(open + 1, s.size() - open - 2);
    Term t{Term::poly, {}};
    for (const auto& a : split_top_level(args, ',')) t.c.push_back(to_number(a));
    if (name == "poly") {
        if (t.c.empty()) throw std::invalid_argument("poly() needs at least one coefficient");
    } else if (name == "sin" || name == "cos") {
        t.kind = name == "sin" ? Term::sin : Term::cos;
        if (t.c.size() != 3) throw std::invalid_argument(name + "() takes exactly (A, w, p)");
    } else {
        throw std::invalid_argument("unknown term '" + name + "' (expected poly, sin or cos)");
    }
    return t;
}

}  // namespace

DriftPiece parse_piece(const std::string& expr, bool must_be_bounded) {
    if (trim(expr).empty()) throw std::invalid_argument("empty piece expression");
    auto terms = std::make_shared<std::vector<Term>>();
    for (const auto& s : split_top_level(expr, '+')) {
        if (s.empty()) throw std::invalid_argument("empty term in '" + expr + "'");
        terms->push_back(parse_term(s));
    }
    if (must_be_bounded)
        for (const auto& t : *terms)
            if (t.kind == Term::poly)
                for (std::size_t i = 1; i < t.c.size(); ++i)
                    if (t.c[i] != 0.0)
                        throw std::invalid_argument("outer pieces must be bounded: poly of degree >= 1 in '" + expr + "'");
    auto sum = [terms](double (Term::*f)(double) const) {
        return [terms, f](double x) {
            double s = 0.0;
            for (const auto& t : *terms) s += (t.*f)(x);
            return s;
        };
    };
    return {sum(&Term::value), sum(&Term::derivative), sum(&Term::primitive)};
}

DriftSpec parse_drift_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("drift config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (kv.count(key))
            throw std::invalid_argument("drift config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = trim(line.substr(eq + 1));
    }
    auto take = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto reject_leftovers = [&] {
        if (!kv.empty()) throw std::invalid_argument("drift config: unexpected key '" + kv.begin()->first + "'");
    };

    if (const auto builtin = take("builtin")) {
        if (*builtin == "b1" || *builtin == "b2") {
            reject_leftovers();
            return *builtin == "b1" ? drifts::indicator() : drifts::trigonometric();
        }
        if (*builtin == "constant") {
            const auto mu = take("mu");
            if (!mu) throw std::invalid_argument("drift config: builtin constant needs mu");
            const auto z1 = take("z1"), z2 = take("z2");
            reject_leftovers();
            return drifts::constant(to_number(*mu), z1 ? to_number(*z1) : 0.0, z2 ? to_number(*z2) : 1.0);
        }
        throw std::invalid_argument("drift config: unknown builtin '" + *builtin + "' (expected b1, b2 or constant)");
    }

    const auto z1 = take("z1"), z2 = take("z2");
    const auto left = take("left"), middle = take("middle"), right = take("right");
    if (!z1 || !z2 || !left || !middle || !right)
        throw std::invalid_argument("drift config: custom drifts need z1, z2, left, middle and right");
    reject_leftovers();
    return make_drift({parse_piece(*left, true), parse_piece(*middle), parse_piece(*right, true)}, to_number(*z1),
                      to_number(*z2));
}

DriftSpec load_drift_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open drift config " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_drift_config(ss.str());
}

DriftSpec resolve_drift(const std::string& name) {
    if (name == "b1") return drifts::indicator();
    if (name == "b2") return drifts::trigonometric();
    if (name.rfind("constant:", 0) == 0) return drifts::constant(to_number(name.substr(9)));
    return load_drift_config(name);
}

}  // namespace skewsim
