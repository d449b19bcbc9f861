#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace invcnx {

using Rational = mpq_class;

std::string to_string(const Rational& q);

/// Power product of named parameters, e.g. alpha^2*c111. Entries are kept
/// sorted by name with strictly positive exponents.
class PowerProduct {
public:
    PowerProduct() = default;
    static PowerProduct var(const std::string& name, int exp = 1);

    const std::vector<std::pair<std::string, int>>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }
    int degree(const std::string& name) const;
    int total_degree() const;

    PowerProduct operator*(const PowerProduct& o) const;
    /// Exact quotient; nullopt when `o` does not divide *this.
    std::optional<PowerProduct> divide(const PowerProduct& o) const;
    PowerProduct without(const std::string& name) const;

    /// Lexicographic order, variables ranked by name (alphabetically first is
    /// most significant).
    std::strong_ordering operator<=>(const PowerProduct& o) const;
    bool operator==(const PowerProduct& o) const = default;

private:
    std::vector<std::pair<std::string, int>> factors_;
};

/// Sparse multivariate polynomial with rational coefficients in named
/// parameters. Zero coefficients are never stored.
class Polynomial {
public:
    using TermMap = std::map<PowerProduct, Rational>;

    Polynomial() = default;
    Polynomial(const Rational& c);  // NOLINT(implicit)
    Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(implicit)
    static Polynomial var(const std::string& name);
    static Polynomial term(const PowerProduct& m, const Rational& c);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Value of a constant polynomial (0 for the zero polynomial).
    Rational constant_value() const;
    std::set<std::string> variables() const;
    int degree(const std::string& name) const;
    int total_degree() const;
    std::size_t size() const { return terms_.size(); }

    const PowerProduct& leading_monomial() const { return terms_.rbegin()->first; }
    const Rational& leading_coefficient() const { return terms_.rbegin()->second; }

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    Polynomial pow(unsigned n) const;

    /// Exact division; nullopt when the division leaves a remainder.
    std::optional<Polynomial> exact_divide(const Polynomial& d) const;

    /// View as a univariate polynomial in `name` with coefficients free of it.
    std::map<int, Polynomial> coefficients_in(const std::string& name) const;
    static Polynomial from_coefficients(const std::string& name,
                                        const std::map<int, Polynomial>& coeffs);

    Polynomial substitute(const std::string& name, const Rational& value) const;
    Rational evaluate(const std::map<std::string, Rational>& values) const;
    double evaluate(const std::map<std::string, double>& values) const;

    /// Divides by the leading coefficient (zero stays zero).
    Polynomial monic() const;

    std::string to_string() const;

private:
    TermMap terms_;
};

/// Greatest common divisor over Q, normalized monic; gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Rational roots of a univariate polynomial (sorted, without multiplicity).
/// Returns an empty list for constant polynomials.
std::vector<Rational> rational_roots(const Polynomial& p);

}  // namespace invcnx
