#include "sosreg/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sosreg {

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
    return d;
}

double Polynomial::coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, double c) {
    if (alpha.size() != n_) throw std::invalid_argument("term dimension mismatch");
    for (int e : alpha.exps)
        if (e < 0) throw std::invalid_argument("negative exponent");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

namespace {

double pow_int(double x, int e) {
    double r = 1.0, b = x;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace

double Polynomial::eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("eval dimension mismatch");
    double s = 0.0;
    for (const auto& [a, c] : terms_) {
        double t = c;
        for (int i = 0; i < n_; ++i)
            if (a[i] != 0) t *= pow_int(x[static_cast<size_t>(i)], a[i]);
        s += t;
    }
    return s;
}

bool Polynomial::is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = terms_.begin()->first.degree();
    for (const auto& [a, c] : terms_)
        if (a.degree() != d) return false;
    return true;
}

Polynomial Polynomial::operator+(const Polynomial& q) const {
    if (n_ != q.n_) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r = *this;
    for (const auto& [a, c] : q.terms_) r.add_term(a, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& q) const {
    if (n_ != q.n_) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r = *this;
    for (const auto& [a, c] : q.terms_) r.add_term(a, -c);
    return r;
}

Polynomial Polynomial::operator*(double s) const {
    Polynomial r(n_);
    if (s == 0.0) return r;
    for (const auto& [a, c] : terms_) r.add_term(a, c * s);
    return r;
}

Polynomial Polynomial::constant(int n, double c) {
    Polynomial p(n);
    p.add_term(MultiIndex(std::vector<int>(static_cast<size_t>(n), 0)), c);
    return p;
}

Polynomial Polynomial::monomial(int n, const MultiIndex& alpha, double c) {
    Polynomial p(n);
    p.add_term(alpha, c);
    return p;
}

Polynomial multiply(const Polynomial& p, const Polynomial& q) {
    if (p.vars() != q.vars()) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r(p.vars());
    for (const auto& [a, ca] : p.terms())
        for (const auto& [b, cb] : q.terms()) r.add_term(a + b, ca * cb);
    return r;
}

namespace {

bool blank_or_comment(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

Polynomial parse_poly_lines(const std::vector<std::string>& lines) {
    size_t i = 0;
    while (i < lines.size() && blank_or_comment(lines[i])) ++i;
    if (i == lines.size()) throw std::runtime_error("polynomial text: missing header line");

    std::istringstream head(lines[i]);
    std::string kw_n, kw_deg;
    int n = 0, maxdeg = 0;
    if (!(head >> kw_n >> n >> kw_deg >> maxdeg) || kw_n != "n" || kw_deg != "deg")
        throw std::runtime_error("polynomial text: header must be 'n <vars> deg <maxdeg>'");
    if (n < 1 || maxdeg < 0) throw std::runtime_error("polynomial text: bad header values");

    Polynomial p(n);
    for (++i; i < lines.size(); ++i) {
        if (blank_or_comment(lines[i])) continue;
        std::istringstream ls(lines[i]);
        double c = 0.0;
        if (!(ls >> c)) throw std::runtime_error("polynomial text: bad coefficient: " + lines[i]);
        std::vector<int> e(static_cast<size_t>(n), 0);
        for (int k = 0; k < n; ++k)
            if (!(ls >> e[static_cast<size_t>(k)]))
                throw std::runtime_error("polynomial text: expected " + std::to_string(n) +
                                         " exponents: " + lines[i]);
        std::string extra;
        if (ls >> extra) throw std::runtime_error("polynomial text: trailing tokens: " + lines[i]);
        MultiIndex a(e);
        if (a.degree() > maxdeg)
            throw std::runtime_error("polynomial text: term degree exceeds declared deg");
        p.add_term(a, c);
    }
    return p;
}

}  // namespace

Polynomial parse_polynomial(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return parse_poly_lines(lines);
}

Polynomial parse_polynomial_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open polynomial file: " + path);
    return parse_polynomial(f);
}

std::string format_polynomial(const Polynomial& p) {
    std::ostringstream out;
    out << "n " << p.vars() << " deg " << p.degree() << "\n";
    char buf[64];
    for (const auto& [a, c] : p.terms()) {
        std::snprintf(buf, sizeof(buf), "%.17g", c);
        out << buf;
        for (int i = 0; i < a.size(); ++i) out << " " << a[i];
        out << "\n";
    }
    return out.str();
}

std::vector<Polynomial> parse_polynomial_sections(std::istream& in) {
    std::vector<std::vector<std::string>> sections(1);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("---", 0) == 0)
            sections.emplace_back();
        else
            sections.back().push_back(line);
    }
    std::vector<Polynomial> polys;
    for (const auto& lines : sections) {
        bool nonempty = false;
        for (const auto& l : lines)
            if (!blank_or_comment(l)) nonempty = true;
        if (nonempty) polys.push_back(parse_poly_lines(lines));
    }
    return polys;
}

std::vector<Polynomial> parse_polynomial_sections_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open constraints file: " + path);
    return parse_polynomial_sections(f);
}

}  // namespace sosreg
