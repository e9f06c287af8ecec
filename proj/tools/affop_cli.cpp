#include "sexp.hpp"
#include "verify.hpp"

#include "affop/global.hpp"
#include "affop/iom.hpp"
#include "affop/oper.hpp"
#include "affop/screening.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace affop;
using sx::field;
using sx::num;
using sx::record;
using sx::Sexp;

namespace {

// Input problems detected before any computation; reported with exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    std::optional<std::string> type, matrix, chi, section, format, config;
    std::optional<int> grade, exponent, truncate, weight;
    bool aff = false;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
void fill(std::optional<T>& slot, const nlohmann::json& j, const std::string& key) {
    if (slot) return;  // command-line flags win
    try {
        slot = j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

void load_config(Opts& o) {
    const std::string text = slurp(*o.config);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError("config file is empty");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (k == "type") fill(o.type, v, k);
        else if (k == "matrix") fill(o.matrix, v, k);
        else if (k == "chi") fill(o.chi, v, k);
        else if (k == "section") fill(o.section, v, k);
        else if (k == "format") fill(o.format, v, k);
        else if (k == "grade") fill(o.grade, v, k);
        else if (k == "exponent") fill(o.exponent, v, k);
        else if (k == "truncate") fill(o.truncate, v, k);
        else if (k == "weight") fill(o.weight, v, k);
        else if (k == "aff") {
            if (!v.is_boolean()) throw ConfigError("config key 'aff' must be a boolean");
            o.aff = o.aff || v.get<bool>();
        } else
            throw ConfigError("unknown config key '" + k + "'");
    }
}

Q rational_of(const nlohmann::json& v) {
    if (v.is_number_integer()) return Q(v.get<long>());
    if (v.is_string()) {
        try {
            return parse_q(v.get<std::string>());
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("rationals must be integers or strings such as \"-3/7\"");
}

// [{"point": "0", "coeffs": [[...], ...]}, ...], coefficients on the basis {α̌_0, …, α̌_ℓ, ρ̌}.
ChiSection load_chi(const CartanData& cd, const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(slurp(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("chi file is not valid JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw ConfigError("chi file must be a non-empty list of marked points");
    ChiSection c;
    for (const auto& p : j) {
        if (!p.is_object() || !p.contains("point") || !p.contains("coeffs") || !p["coeffs"].is_array() || p["coeffs"].empty())
            throw ConfigError("each marked point needs 'point' and a non-empty 'coeffs' list");
        c.points.push_back(rational_of(p["point"]));
        std::vector<CartanVector> row;
        for (const auto& v : p["coeffs"]) {
            if (!v.is_array() || v.size() != cd.dim())
                throw ConfigError("each coefficient needs " + std::to_string(cd.dim()) + " entries");
            CartanVector x = cd.zero();
            for (size_t k = 0; k < cd.dim(); ++k) x[k] = rational_of(v[k]);
            row.push_back(x);
        }
        c.coeffs.push_back(row);
    }
    return c;
}

IMat parse_matrix(const std::string& s) {
    IMat A;
    std::stringstream rows(s);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::vector<long> r;
        std::stringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                size_t used = 0;
                r.push_back(std::stol(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::logic_error&) {
                throw ConfigError("bad matrix entry '" + cell + "'");
            }
        }
        A.push_back(r);
    }
    for (const auto& r : A)
        if (r.size() != A.size()) throw ConfigError("matrix must be square, rows separated by ';'");
    if (A.empty()) throw ConfigError("empty matrix");
    return A;
}

CartanData cartan_of(const Opts& o) {
    if (o.type && o.matrix) throw ConfigError("give either --type or --matrix");
    try {
        if (o.matrix) return build_cartan(parse_matrix(*o.matrix), "matrix");
        if (o.type) return build_cartan(*o.type);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("a Cartan type is required (--type or --matrix)");
}

enum class Format { Pretty, Sexpr, Json };

Format format_of(const Opts& o) {
    const std::string f = o.format.value_or("pretty");
    if (f == "pretty") return Format::Pretty;
    if (f == "sexpr") return Format::Sexpr;
    if (f == "json") return Format::Json;
    throw ConfigError("unknown format '" + f + "' (pretty, sexpr, json)");
}

std::string render(const Sexp& s, Format f) {
    switch (f) {
        case Format::Sexpr: return sx::print(s) + "\n";
        case Format::Json: return sx::to_json(s) + "\n";
        default: return sx::to_pretty(s);
    }
}

Sexp int_list(const std::vector<int>& xs) {
    Sexp l = Sexp::list();
    for (int x : xs) l.items.push_back(num(static_cast<long>(x)));
    return l;
}

Sexp long_list(const std::vector<long>& xs) {
    Sexp l = Sexp::list();
    for (long x : xs) l.items.push_back(num(x));
    return l;
}

int nonnegative(const std::optional<int>& v, int dflt, const std::string& what) {
    const int x = v.value_or(dflt);
    if (x < 0) throw ConfigError(what + " must be non-negative");
    return x;
}

// Each command validates its inputs first (ConfigError) and returns a closure doing the computation.
using Job = std::function<Sexp()>;

Job cmd_cartan(const Opts& o) {
    const CartanData cd = cartan_of(o);
    const int N = nonnegative(o.grade, 7, "--grade");
    return [cd, N] {
        std::vector<Sexp> f{field("label", Sexp::sym(cd.label)), field("rank", num(static_cast<long>(cd.ell))),
                            field("h", num(cd.h)), field("hv", num(cd.hv)), field("marks", long_list(cd.marks)),
                            field("comarks", long_list(cd.comarks)), field("range", num(static_cast<long>(N)))};
        f.push_back(field("exponents", int_list(exponents(cd, N))));
        return record("cartan", f);
    };
}

Job cmd_kernel(const Opts& o) {
    const CartanData cd = cartan_of(o);
    const int n = nonnegative(o.grade, 2, "--grade");
    const bool aff = o.aff;
    return [cd, n, aff] {
        FockContext fc(cd);
        const auto basis = kernel_basis(fc, n, aff ? Subspace::Aff : Subspace::Full);
        Sexp b = Sexp::list();
        for (const CState& v : basis) b.items.push_back(sx::state_expr(v));
        return record("kernel", {field("label", Sexp::sym(cd.label)), field("grade", num(static_cast<long>(n))),
                                 field("subspace", Sexp::sym(aff ? "aff" : "full")), field("dim", num(static_cast<long>(basis.size()))),
                                 field("basis", b)});
    };
}

Job cmd_iom(const Opts& o) {
    const CartanData cd = cartan_of(o);
    const int j = o.exponent.value_or(1);
    if (j < 1) throw ConfigError("--exponent must be positive");
    return [cd, j] {
        FockContext fc(cd);
        Sexp classes = Sexp::list();
        for (const IomClass& c : iom_density(fc, j)) {
            const IomReport r = verify_class(fc, c);
            Sexp w = Sexp::list(), checks = Sexp::list();
            for (const CState& x : c.witnesses) w.items.push_back(sx::state_expr(x));
            for (const auto& s : r.checks) checks.items.push_back(Sexp::sym(s));
            classes.items.push_back(record("class", {field("representative", sx::state_expr(c.rep)), field("witnesses", w),
                                                     field("tag", Sexp::sym(r.tag)), field("checks", checks)}));
        }
        return record("iom", {field("label", Sexp::sym(cd.label)), field("j", num(static_cast<long>(j))),
                              field("count", num(static_cast<long>(classes.items.size()))), field("classes", classes)});
    };
}

Job cmd_miura2oper(const Opts& o) {
    const CartanData cd = cartan_of(o);
    const int J = o.exponent.value_or(1), T = nonnegative(o.truncate, 3, "--truncate");
    if (J < 1) throw ConfigError("--exponent must be positive");
    std::optional<ChiSection> chi;
    if (o.chi) chi = load_chi(cd, *o.chi);
    return [cd, J, T, chi] {
        const int n = loop_type(cd).n;
        Sexp vs = Sexp::list();
        if (chi) {
            chi_validate(cd, *chi);
            std::vector<RatFunc> u(cd.dim());  // u = −χ
            for (size_t i = 0; i < chi->points.size(); ++i)
                for (size_t k = 0; k < chi->coeffs[i].size(); ++k)
                    for (size_t d = 0; d < cd.dim(); ++d)
                        u[d] -= RatFunc(chi->coeffs[i][k][d]) * RatFunc::pole(chi->points[i], static_cast<int>(k) + 1);
            const auto qc = quasi_canonical(cd, miura_connection(cd, u), J);
            for (const auto& [j, v] : qc.v)
                for (size_t k = 0; k < v.size(); ++k)
                    vs.items.push_back(record("v", {field("j", num(static_cast<long>(j))), field("component", num(static_cast<long>(k))),
                                                    field("value", sx::ratfunc_expr(v[k]))}));
            return record("oper", {field("label", Sexp::sym(cd.label)), field("mode", Sexp::sym("rational")),
                                   field("phi", sx::ratfunc_expr(qc.phi)), field("v", vs)});
        }
        const auto qc = quasi_canonical(cd, miura_connection(cd, symbolic_miura(cd, T + J + 2, -1)), J);
        auto coeffs = [&](const Series<FunPoly>& s) {
            Sexp l = Sexp::list();
            for (int p = 0; p <= T && p < s.order; ++p) l.items.push_back(sx::state_expr(s.coeff(p).to_state(cd.zero())));
            return l;
        };
        for (const auto& [j, v] : qc.v)
            for (size_t k = 0; k < v.size(); ++k)
                vs.items.push_back(record("v", {field("j", num(static_cast<long>(j))), field("component", num(static_cast<long>(k))),
                                                field("coefficients", coeffs(v[k]))}));
        return record("oper", {field("label", Sexp::sym(cd.label)), field("mode", Sexp::sym("disc")),
                               field("loop_rank", num(static_cast<long>(n))), field("phi", coeffs(qc.phi)), field("v", vs)});
    };
}

Job cmd_fchi(const Opts& o) {
    const CartanData cd = cartan_of(o);
    if (!o.chi) throw ConfigError("fchi needs --chi FILE");
    if (!o.section) throw ConfigError("fchi needs --section EXPR");
    const ChiSection chi = load_chi(cd, *o.chi);
    const int w = nonnegative(o.weight, 0, "--weight");
    GlobalSection s;
    try {
        s = sx::section_from_expr(cd, sx::parse(*o.section), w);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return [cd, chi, s] {
        chi_validate(cd, chi);
        FockContext fc(cd);
        const RatFunc value = f_chi(cd, s, chi);
        const RatFunc moved = f_chi(cd, nabla_aff(fc, s), chi);
        return record("fchi", {field("label", Sexp::sym(cd.label)), field("weight", num(static_cast<long>(s.j))),
                               field("section", sx::section_expr(s)), field("value", sx::ratfunc_expr(value)),
                               field("connection", sx::ratfunc_expr(moved)),
                               field("intertwines", sx::boolean(moved == nabla_aff_chi(cd, value, s.j, chi)))});
    };
}

Job cmd_fc_compare(const Opts& o) {
    const CartanData cd = cartan_of(o);
    if (!o.chi) throw ConfigError("fc-compare needs --chi FILE");
    const ChiSection chi = load_chi(cd, *o.chi);
    const int j = o.exponent.value_or(1);
    if (j < 1) throw ConfigError("--exponent must be positive");
    return [cd, chi, j] {
        chi_validate(cd, chi);
        FockContext fc(cd);
        const FcReport r = fc_compare(fc, j, chi);
        return record("fc-compare", {field("label", Sexp::sym(cd.label)), field("j", num(static_cast<long>(j))),
                                     field("kappa", num(r.kappa)), field("from_density", sx::ratfunc_expr(r.from_density)),
                                     field("from_oper", sx::ratfunc_expr(r.from_oper)), field("equal", sx::boolean(r.equal)),
                                     field("exact", sx::boolean(r.from_oper == RatFunc(r.kappa) * r.from_density)),
                                     field("witness", sx::ratfunc_expr(r.coh.witness))});
    };
}

int run_verify(const Opts& o, Format fmt) {
    VerifyOptions vo;
    if (o.matrix) throw ConfigError("verify takes --type A1^1 or A2^1");
    if (o.type) {
        if (*o.type != "A1^1" && *o.type != "A2^1") throw Error("UnsupportedType", "verify covers A1^1 and A2^1");
        vo.type = *o.type;
    }
    vo.grade_cap = nonnegative(o.grade, 6, "--grade");
    int unexpected = 0, known = 0;
    Sexp all = Sexp::list();
    auto results = run_acceptance(vo, [&](const CriterionResult& r) {
        if (!r.pass) (r.known_failure ? known : unexpected)++;
        if (fmt == Format::Pretty) std::cout << format_result(r) << std::endl;
    });
    for (const auto& r : results)
        all.items.push_back(record("criterion", {field("id", num(static_cast<long>(r.id))), field("name", Sexp::sym(r.name)),
                                                 field("pass", sx::boolean(r.pass)), field("known_failure", sx::boolean(r.known_failure)),
                                                 field("detail", Sexp::sym(r.detail))}));
    if (fmt == Format::Pretty)
        std::cout << "unexpected failures: " << unexpected << ", known failures: " << known << "\n";
    else
        std::cout << render(record("verify", {field("criteria", all), field("unexpected_failures", num(static_cast<long>(unexpected))),
                                              field("known_failures", num(static_cast<long>(known)))}),
                            fmt);
    return unexpected ? 1 : 0;
}

void diagnose(const std::string& kind, std::string what, Format fmt) {
    if (what.rfind(kind + ": ", 0) == 0) what.erase(0, kind.size() + 2);
    std::cerr << render(record("error", {field("kind", Sexp::sym(kind)), field("message", Sexp::sym(what))}), fmt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affine opers, screenings and integrals of motion"};
    app.require_subcommand(1);
    Opts o;
    auto common = [&](CLI::App* s) {
        s->add_option("--type", o.type, "Cartan type label, e.g. A1^1");
        s->add_option("--matrix", o.matrix, "Cartan matrix, rows separated by ';'");
        s->add_option("--format", o.format, "pretty | sexpr | json");
        s->add_option("--config", o.config, "JSON file supplying any of the options");
    };
    auto* cartan = app.add_subcommand("cartan", "Cartan data and exponents");
    common(cartan);
    cartan->add_option("--grade", o.grade, "exponent range [1, N]");
    auto* kernel = app.add_subcommand("kernel", "basis of the screening kernel at one grade");
    common(kernel);
    kernel->add_option("--grade", o.grade, "grade n");
    kernel->add_flag("--aff", o.aff, "restrict to the aff subspace");
    auto* iom = app.add_subcommand("iom", "integral-of-motion densities");
    common(iom);
    iom->add_option("--exponent", o.exponent, "exponent j");
    auto* m2o = app.add_subcommand("miura2oper", "quasi-canonical form of a Miura oper");
    common(m2o);
    m2o->add_option("--exponent", o.exponent, "highest grade N");
    m2o->add_option("--truncate", o.truncate, "highest series order on the disc");
    m2o->add_option("--chi", o.chi, "rational data file (JSON)");
    auto* fchi = app.add_subcommand("fchi", "evaluate a section through a rational datum");
    common(fchi);
    fchi->add_option("--chi", o.chi, "rational data file (JSON)");
    fchi->add_option("--section", o.section, "section as an s-expression");
    fchi->add_option("--weight", o.weight, "form degree j");
    auto* fcc = app.add_subcommand("fc-compare", "compare evaluated densities with oper coefficients");
    common(fcc);
    fcc->add_option("--chi", o.chi, "rational data file (JSON)");
    fcc->add_option("--exponent", o.exponent, "exponent j");
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    common(verify);
    verify->add_option("--grade", o.grade, "grade cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        diagnose("ConfigError", e.what(), Format::Pretty);
        return 2;
    }

    Format fmt = Format::Pretty;
    const std::string name = app.get_subcommands().front()->get_name();
    Job job;
    try {
        if (o.config) load_config(o);
        fmt = format_of(o);
        if (name == "verify") return run_verify(o, fmt);
        if (name == "cartan") job = cmd_cartan(o);
        else if (name == "kernel") job = cmd_kernel(o);
        else if (name == "iom") job = cmd_iom(o);
        else if (name == "miura2oper") job = cmd_miura2oper(o);
        else if (name == "fchi") job = cmd_fchi(o);
        else job = cmd_fc_compare(o);
    } catch (const ConfigError& e) {
        diagnose("ConfigError", e.what(), fmt);
        return 2;
    } catch (const Error& e) {
        diagnose(e.kind, e.what(), fmt);
        return 1;
    }
    try {
        std::cout << render(job(), fmt);
    } catch (const Error& e) {
        diagnose(e.kind, e.what(), fmt);
        return 1;
    }
    return 0;
}
