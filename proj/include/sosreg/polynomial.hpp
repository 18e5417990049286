#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "sosreg/multiindex.hpp"

namespace sosreg {

/// Sparse multivariate polynomial with real coefficients. Terms are kept in
/// graded order and exact zeros are never stored.
class Polynomial {
  public:
    using TermMap = std::map<MultiIndex, double, GradedLess>;

    Polynomial() = default;
    explicit Polynomial(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("polynomial needs n >= 1");
    }

    int vars() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int degree() const;

    double coeff(const MultiIndex& alpha) const;
    /// Adds c * x^alpha, pruning the term if the sum cancels exactly.
    void add_term(const MultiIndex& alpha, double c);

    double eval(const std::vector<double>& x) const;

    bool is_homogeneous() const;

    Polynomial operator+(const Polynomial& q) const;
    Polynomial operator-(const Polynomial& q) const;
    Polynomial operator*(double s) const;

    static Polynomial constant(int n, double c);
    static Polynomial monomial(int n, const MultiIndex& alpha, double c = 1.0);

  private:
    int n_ = 0;
    TermMap terms_;
};

Polynomial multiply(const Polynomial& p, const Polynomial& q);

/// Text format: first line "n <vars> deg <maxdeg>", then one term per line
/// as "coeff e1 e2 ... en"; '#' starts a comment.
Polynomial parse_polynomial(std::istream& in);
Polynomial parse_polynomial_file(const std::string& path);
std::string format_polynomial(const Polynomial& p);

/// One polynomial per section, sections separated by a line "---".
std::vector<Polynomial> parse_polynomial_sections(std::istream& in);
std::vector<Polynomial> parse_polynomial_sections_file(const std::string& path);

}  // namespace sosreg
