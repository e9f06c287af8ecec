#include "sexp.hpp"

#include <json.hpp>

#include <cctype>
#include <sstream>

namespace affop::sx {

namespace {

bool bare(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || std::string("+-*/^_.<>=!?:^").find(c) != std::string::npos)) return false;
    return true;
}

void print_to(const Sexp& s, std::string& out) {
    if (s.atom) {
        if (bare(s.text)) {
            out += s.text;
            return;
        }
        out += '"';
        for (char c : s.text) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += '"';
        return;
    }
    out += '(';
    for (size_t k = 0; k < s.items.size(); ++k) {
        if (k) out += ' ';
        print_to(s.items[k], out);
    }
    out += ')';
}

struct Reader {
    const std::string& t;
    size_t i = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw Error("ParseError", what + " at offset " + std::to_string(i));
    }
    void skip() {
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    }
    Sexp read() {
        skip();
        if (i >= t.size()) fail("unexpected end of input");
        if (t[i] == ')') fail("unexpected ')'");
        if (t[i] == '(') {
            ++i;
            Sexp l = Sexp::list();
            for (;;) {
                skip();
                if (i >= t.size()) fail("unterminated list");
                if (t[i] == ')') {
                    ++i;
                    return l;
                }
                l.items.push_back(read());
            }
        }
        if (t[i] == '"') {
            ++i;
            std::string s;
            while (i < t.size() && t[i] != '"') {
                if (t[i] == '\\' && i + 1 < t.size()) ++i;
                s += t[i++];
            }
            if (i >= t.size()) fail("unterminated string");
            ++i;
            return Sexp::sym(s);
        }
        size_t j = i;
        while (j < t.size() && !std::isspace(static_cast<unsigned char>(t[j])) && t[j] != '(' && t[j] != ')' && t[j] != '"') ++j;
        Sexp a = Sexp::sym(t.substr(i, j - i));
        i = j;
        return a;
    }
};

bool is_record(const Sexp& s) {
    if (s.atom || s.items.empty() || !s.items[0].atom) return false;
    for (size_t k = 1; k < s.items.size(); ++k) {
        const Sexp& f = s.items[k];
        if (f.atom || f.items.size() != 2 || !f.items[0].atom) return false;
    }
    return true;
}

nlohmann::ordered_json json_of(const Sexp& s) {
    if (s.atom) return s.text;
    if (is_record(s)) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        o["_"] = s.items[0].text;
        for (size_t k = 1; k < s.items.size(); ++k) o[s.items[k].items[0].text] = json_of(s.items[k].items[1]);
        return o;
    }
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const Sexp& x : s.items) a.push_back(json_of(x));
    return a;
}

void pretty_to(const Sexp& s, int depth, std::string& out) {
    const std::string pad(2 * depth, ' ');
    if (!is_record(s)) {
        out += pad + print(s) + "\n";
        return;
    }
    out += pad + s.items[0].text + "\n";
    for (size_t k = 1; k < s.items.size(); ++k) {
        const Sexp& key = s.items[k].items[0];
        const Sexp& v = s.items[k].items[1];
        if (is_record(v)) {
            out += pad + "  " + key.text + ":\n";
            pretty_to(v, depth + 2, out);
        } else {
            out += pad + "  " + key.text + " = " + print(v) + "\n";
        }
    }
}

using Terms = std::map<Mono, RatFunc>;

void add_term(Terms& t, const Mono& m, const RatFunc& f) {
    if (f.is_zero()) return;
    auto [it, ins] = t.emplace(m, f);
    if (!ins) {
        it->second += f;
        if (it->second.is_zero()) t.erase(it);
    }
}

Terms mul(const Terms& a, const Terms& b) {
    Terms r;
    for (const auto& [ma, fa] : a)
        for (const auto& [mb, fb] : b) add_term(r, mono_mul(ma, mb), fa * fb);
    return r;
}

Terms constant(const RatFunc& f) {
    Terms t;
    add_term(t, Mono(), f);
    return t;
}

RatFunc scalar_of(const Terms& t, const std::string& op) {
    if (t.empty()) return RatFunc();
    if (t.size() == 1 && t.begin()->first.empty()) return t.begin()->second;
    throw Error("ParseError", "operand of '" + op + "' must not contain modes");
}

long integer_of(const Sexp& e, const std::string& what) {
    if (!e.atom) throw Error("ParseError", what + " must be an integer");
    const Q q = parse_q(e.text);
    if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw Error("ParseError", what + " must be an integer");
    return q.get_num().get_si();
}

Terms eval(const CartanData& cd, const Sexp& e) {
    if (e.atom) {
        if (e.text == "z") return constant(RatFunc::z());
        if (e.text.find('z') != std::string::npos || e.text.find('(') != std::string::npos) return constant(parse_ratfunc(e.text));
        return constant(RatFunc(parse_q(e.text)));
    }
    if (e.items.empty() || !e.items[0].atom) throw Error("ParseError", "expression must start with an operator");
    const std::string& op = e.items[0].text;
    const size_t n = e.items.size() - 1;
    auto arg = [&](size_t k) { return eval(cd, e.items[k]); };
    if (op == "+") {
        Terms r;
        for (size_t k = 1; k <= n; ++k)
            for (const auto& [m, f] : arg(k)) add_term(r, m, f);
        return r;
    }
    if (op == "*") {
        Terms r = constant(RatFunc(Q(1)));
        for (size_t k = 1; k <= n; ++k) r = mul(r, arg(k));
        return r;
    }
    if (op == "-") {
        if (n == 0) throw Error("ParseError", "'-' needs an operand");
        Terms r = n == 1 ? Terms{} : arg(1);
        for (size_t k = n == 1 ? 1 : 2; k <= n; ++k)
            for (const auto& [m, f] : arg(k)) add_term(r, m, -f);
        return r;
    }
    if (op == "/") {
        if (n != 2) throw Error("ParseError", "'/' takes two operands");
        const RatFunc d = scalar_of(arg(2), "/");
        if (d.is_zero()) throw Error("ParseError", "division by zero");
        return mul(arg(1), constant(RatFunc(Q(1)) / d));
    }
    if (op == "^") {
        if (n != 2) throw Error("ParseError", "'^' takes two operands");
        const long k = integer_of(e.items[2], "exponent");
        if (k < 0) throw Error("ParseError", "negative exponent");
        Terms r = constant(RatFunc(Q(1))), b = arg(1);
        for (long q = 0; q < k; ++q) r = mul(r, b);
        return r;
    }
    if (op == "b") {
        if (n != 2) throw Error("ParseError", "(b i n) takes two operands");
        const long i = integer_of(e.items[1], "basis index"), m = integer_of(e.items[2], "mode");
        if (i < 0 || i >= static_cast<long>(cd.dim())) throw Error("ParseError", "basis index out of range");
        if (m >= 0 || m < -255) throw Error("ParseError", "mode must be a negative integer");
        Terms t;
        add_term(t, Mono(1, mode_code(static_cast<int>(i), static_cast<int>(m))), RatFunc(Q(1)));
        return t;
    }
    if (op == "pole") {
        if (n != 2 || !e.items[1].atom) throw Error("ParseError", "(pole x k) takes two operands");
        const long k = integer_of(e.items[2], "pole order");
        if (k < 1) throw Error("ParseError", "pole order must be positive");
        return constant(RatFunc::pole(parse_q(e.items[1].text), static_cast<int>(k)));
    }
    throw Error("ParseError", "unknown operator '" + op + "'");
}

template <class C, class F>
Sexp sum_expr(const std::map<Mono, C>& terms, F coeff) {
    Sexp s = Sexp::list({Sexp::sym("+")});
    for (const auto& [m, c] : terms) {
        Sexp t = Sexp::list({Sexp::sym("*"), coeff(c)});
        for (char16_t x : m) t.items.push_back(Sexp::list({Sexp::sym("b"), num(code_index(x)), num(code_mode(x))}));
        s.items.push_back(t);
    }
    return s;
}

}  // namespace

Sexp num(const Q& q) { return Sexp::sym(qstr(q)); }
Sexp num(long v) { return Sexp::sym(std::to_string(v)); }
Sexp boolean(bool b) { return Sexp::sym(b ? "true" : "false"); }
Sexp field(const std::string& key, Sexp value) { return Sexp::list({Sexp::sym(key), std::move(value)}); }

Sexp record(const std::string& tag, std::vector<Sexp> fields) {
    Sexp r = Sexp::list({Sexp::sym(tag)});
    for (auto& f : fields) r.items.push_back(std::move(f));
    return r;
}

std::string print(const Sexp& s) {
    std::string out;
    print_to(s, out);
    return out;
}

Sexp parse(const std::string& text) {
    Reader r{text};
    Sexp s = r.read();
    r.skip();
    if (r.i != text.size()) r.fail("trailing input");
    return s;
}

std::string to_json(const Sexp& s, int indent) { return json_of(s).dump(indent); }

std::string to_pretty(const Sexp& s) {
    std::string out;
    pretty_to(s, 0, out);
    return out;
}

Sexp vector_expr(const CartanVector& v) {
    Sexp s = Sexp::list({Sexp::sym("vec")});
    for (const Q& q : v.c) s.items.push_back(num(q));
    return s;
}

Sexp ratfunc_expr(const RatFunc& f) { return Sexp::sym(ratfunc_str(f)); }

Sexp state_expr(const CState& v) { return sum_expr(v.terms, [](const Q& q) { return num(q); }); }

Sexp section_expr(const GlobalSection& s) { return sum_expr(s.terms, [](const RatFunc& f) { return ratfunc_expr(f); }); }

GlobalSection section_from_expr(const CartanData& cd, const Sexp& e, int weight) {
    GlobalSection s;
    s.j = weight;
    for (const auto& [m, f] : eval(cd, e)) s.add(m, f);
    return s;
}

}  // namespace affop::sx
