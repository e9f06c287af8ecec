#pragma once

#include "affop/fock.hpp"
#include "affop/global.hpp"
#include "affop/poly.hpp"

#include <string>
#include <vector>

namespace affop::sx {

// Atom or list; atoms needing quotes are written as "..." with \" and \\ escapes.
struct Sexp {
    bool atom = true;
    std::string text;
    std::vector<Sexp> items;

    static Sexp sym(std::string s) { return Sexp{true, std::move(s), {}}; }
    static Sexp list(std::vector<Sexp> xs = {}) { return Sexp{false, {}, std::move(xs)}; }
    friend bool operator==(const Sexp& a, const Sexp& b) {
        return a.atom == b.atom && (a.atom ? a.text == b.text : a.items == b.items);
    }
};

Sexp num(const Q& q);
Sexp num(long v);
Sexp boolean(bool b);
// (key value)
Sexp field(const std::string& key, Sexp value);
// (tag (key value) ...)
Sexp record(const std::string& tag, std::vector<Sexp> fields);

std::string print(const Sexp& s);
Sexp parse(const std::string& text);  // throws Error("ParseError")

// Records become objects with the tag under "_"; atoms stay strings so rationals remain exact.
std::string to_json(const Sexp& s, int indent = 2);
std::string to_pretty(const Sexp& s);

Sexp vector_expr(const CartanVector& v);
Sexp ratfunc_expr(const RatFunc& f);
// (+ (* c (b i n) ...) ...), the same grammar read by section_from_expr.
Sexp state_expr(const CState& v);
Sexp section_expr(const GlobalSection& s);

// Evaluates (+ …), (* …), (- …), (/ f g), (^ f k), (b i n), (pole x k), z, rationals and quoted rational functions.
GlobalSection section_from_expr(const CartanData& cd, const Sexp& e, int weight);

}  // namespace affop::sx
