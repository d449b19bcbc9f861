#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "invcnx/param_scalar.hpp"

namespace invcnx {

/// Building blocks of the closed function class on the plane.
///
///   X, Y      coordinate functions x and y
///   XMinusY   x - y
///   Sphere    1 + x^2 + y^2
///   ExpAX     exp(r*x) for a fixed rate r in Q(params) (r = alpha by default)
///
/// Derivatives: dX/dx = 1, dY/dy = 1, d(XMinusY)/dx = 1, d(XMinusY)/dy = -1,
/// d(Sphere)/dx = 2x, d(Sphere)/dy = 2y, d(ExpAX)/dx = r*ExpAX; all others 0.
enum class Atom : int { X = 0, Y = 1, XMinusY = 2, Sphere = 3, ExpAX = 4 };

inline constexpr std::array<Atom, 5> kAllAtoms{Atom::X, Atom::Y, Atom::XMinusY, Atom::Sphere,
                                                Atom::ExpAX};
std::string atom_name(Atom a);

enum class Var : int { X = 0, Y = 1 };

/// Signed exponent vector over the atoms.
///
/// Total order (used for canonical term order): compare ExpAX, then XMinusY,
/// then Sphere, then X, then Y exponents, each ascending.
struct Monomial {
    std::array<int, 5> exps{};

    int operator[](Atom a) const { return exps[static_cast<int>(a)]; }
    int& operator[](Atom a) { return exps[static_cast<int>(a)]; }
    bool is_one() const { return exps == std::array<int, 5>{}; }
    std::strong_ordering operator<=>(const Monomial& o) const;
    bool operator==(const Monomial& o) const = default;
    std::string to_string(const std::string& exp_token = "exp(alpha*x)") const;
};

/// Polynomial in x and y with coefficients in Q(params). Exponents are >= 0.
class CoordPoly {
public:
    using Key = std::pair<int, int>;  // (deg x, deg y), lexicographic order
    using TermMap = std::map<Key, ParamScalar>;

    CoordPoly() = default;
    explicit CoordPoly(const ParamScalar& c);
    static CoordPoly monomial(int a, int b, const ParamScalar& c = 1);
    /// Polynomial form of a denominator atom (X, Y, XMinusY or Sphere).
    static const CoordPoly& of_atom(Atom a);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    CoordPoly operator-() const;
    CoordPoly& operator+=(const CoordPoly& o);
    CoordPoly& operator*=(const ParamScalar& c);
    friend CoordPoly operator+(CoordPoly a, const CoordPoly& b) { return a += b; }
    friend CoordPoly operator*(const CoordPoly& a, const CoordPoly& b);
    bool operator==(const CoordPoly& o) const { return terms_ == o.terms_; }

    CoordPoly pow(unsigned n) const;
    CoordPoly derivative(Var v) const;
    /// Exact quotient by `d`, or nullopt if `d` does not divide.
    std::optional<CoordPoly> divide(const CoordPoly& d) const;
    CoordPoly substitute(const std::string& name, const Rational& value) const;
    ParamScalar value_at(const Rational& x, const Rational& y) const;
    double value_at(double x, double y, const std::map<std::string, double>& params) const;

private:
    void add_term(const Key& k, const ParamScalar& c);
    TermMap terms_;
};

struct Point {
    Rational x;
    Rational y;
    bool operator==(const Point&) const = default;
};

using ParamBindings = std::map<std::string, Rational>;

/// Result of evaluating an expression: exact when no exponential atom
/// contributes, floating otherwise.
using EvalValue = std::variant<Rational, double>;
double to_double(const EvalValue& v);

/// Exact symbolic expression in the closed class
///   sum_m exp(r x)^m * N_m(x, y) / (x^A y^B (x-y)^C (1+x^2+y^2)^E),
/// one reduced fraction per exponential power m.
///
/// Canonical form: for each m the numerator N_m is a nonzero polynomial not
/// divisible by any denominator atom carried with a positive exponent.
/// Because x, y, x-y and 1+x^2+y^2 are pairwise non-associate irreducibles
/// over Q(params)[x, y], the reduced fraction is unique; and distinct powers
/// of exp(r x), r != 0, are linearly independent over the rational function
/// field. Structural equality is therefore a complete zero test.
///
/// In particular non-negative powers of x - y are always expanded into x, y
/// monomials and only negative powers survive as an atom.
class Expr {
public:
    struct Part {
        CoordPoly numerator;
        std::array<int, 4> denominator{};  // exponents of X, Y, XMinusY, Sphere
        bool operator==(const Part&) const = default;
    };

    Expr() = default;
    Expr(const ParamScalar& c);  // NOLINT(implicit)
    Expr(long c) : Expr(ParamScalar(c)) {}  // NOLINT(implicit)
    Expr(int c) : Expr(ParamScalar(c)) {}  // NOLINT(implicit)

    static Expr x();
    static Expr y();
    static Expr atom_power(Atom a, int n, const ParamScalar& rate = ParamScalar::param("alpha"));
    static Expr exp_ax(const ParamScalar& rate = ParamScalar::param("alpha"), int n = 1);
    static Expr from_part(int exp_power, Part part, std::optional<ParamScalar> rate = std::nullopt);
    static Expr from_monomial(const Monomial& m, const ParamScalar& coeff = 1,
                              const ParamScalar& rate = ParamScalar::param("alpha"));

    bool is_zero() const { return parts_.empty(); }
    bool is_constant() const;
    ParamScalar constant_value() const;  // requires is_constant()
    const std::map<int, Part>& parts() const { return parts_; }
    const std::optional<ParamScalar>& exp_rate() const { return rate_; }
    bool has_exp() const { return rate_.has_value(); }
    /// True when no denominator atom and no exponential occurs.
    bool is_polynomial() const;
    std::set<std::string> parameters() const;

    /// Canonical term list (Monomial order ascending).
    std::vector<std::pair<Monomial, ParamScalar>> terms() const;
    /// Atoms that occur with negative powers (domain restrictions), e.g. "x-y".
    std::vector<std::string> domain_notes() const;

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o);
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(Expr a, const Expr& b) { return a *= b; }
    bool operator==(const Expr& o) const { return parts_ == o.parts_ && rate_ == o.rate_; }
    bool operator!=(const Expr& o) const { return !(*this == o); }

    /// Multiplicative inverse; only units of the class (c * monomial in atoms)
    /// are invertible, anything else throws ClosureError.
    Expr inverse() const;
    Expr pow(int n) const;

    Expr differentiate(Var v) const;
    Expr substitute(const std::string& param, const Rational& value) const;
    Expr substitute(const ParamBindings& values) const;

    /// Value at a rational point with parameters left symbolic.
    /// Throws EvalSingular on a vanishing denominator atom and ClosureError
    /// if an exponential term cannot be evaluated exactly (x != 0).
    ParamScalar value_at(const Point& p) const;
    /// Exact when no exponential contributes, floating otherwise.
    /// Throws EvalSingular / ParamSingular.
    EvalValue eval(const Point& p, const ParamBindings& params) const;
    double eval_numeric(double x, double y, const std::map<std::string, double>& params) const;

    std::string to_string() const;

private:
    void add_part(int m, Part p);
    void check_rate(const std::optional<ParamScalar>& other);
    void drop_rate_if_unused();

    std::map<int, Part> parts_;
    std::optional<ParamScalar> rate_;
};

/// Coefficient rows of a family of expressions: after clearing a common
/// denominator per exponential power, row r holds the coefficient of one
/// (exp power, x^a y^b) numerator monomial in every expression. The family
/// sum_i c_i e_i vanishes identically iff sum_i c_i row[i] = 0 for every row.
struct CoefficientRow {
    Monomial monomial;
    std::vector<ParamScalar> coeffs;
};
std::vector<CoefficientRow> coefficient_rows(std::span<const Expr> exprs);

/// Parses the plain-text grammar: integers, declared parameter names, x, y,
/// exp(<scalar>*x), parentheses, + - * /, and ^ with integer exponents.
/// Division and negative powers require a unit of the class as divisor.
/// Throws ParseError, UnknownParameter.
Expr parse_expr(std::string_view text, const std::set<std::string>& params);
/// Parses a parameter-only expression.
ParamScalar parse_scalar(std::string_view text, const std::set<std::string>& params);

}  // namespace invcnx
