#pragma once

#include <map>
#include <set>
#include <string>

#include <Eigen/Core>

#include "invcnx/polynomial.hpp"

namespace invcnx {

/// Element of the rational function field Q(params).
///
/// Canonical form: numerator and denominator coprime, denominator monic with
/// respect to the lexicographic order on parameter power products. Two
/// canonical ParamScalars are equal iff their numerators and denominators are
/// identical, so operator== is structural.
class ParamScalar {
public:
    ParamScalar() : den_(1) {}
    ParamScalar(const Rational& c) : num_(c), den_(1) {}  // NOLINT(implicit)
    ParamScalar(long c) : num_(Rational(c)), den_(1) {}    // NOLINT(implicit)
    ParamScalar(int c) : ParamScalar(static_cast<long>(c)) {}  // NOLINT(implicit)
    ParamScalar(const Polynomial& p) : num_(p), den_(1) {}  // NOLINT(implicit)
    ParamScalar(Polynomial num, Polynomial den);

    static ParamScalar param(const std::string& name) { return ParamScalar(Polynomial::var(name)); }

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    bool is_one() const { return is_constant() && constant_value() == 1; }
    /// Only meaningful when is_constant().
    Rational constant_value() const { return num_.constant_value(); }
    std::set<std::string> parameters() const;
    /// Rough size measure used for pivot selection.
    int complexity() const;

    ParamScalar operator-() const;
    ParamScalar& operator+=(const ParamScalar& o);
    ParamScalar& operator-=(const ParamScalar& o);
    ParamScalar& operator*=(const ParamScalar& o);
    ParamScalar& operator/=(const ParamScalar& o);
    friend ParamScalar operator+(ParamScalar a, const ParamScalar& b) { return a += b; }
    friend ParamScalar operator-(ParamScalar a, const ParamScalar& b) { return a -= b; }
    friend ParamScalar operator*(ParamScalar a, const ParamScalar& b) { return a *= b; }
    friend ParamScalar operator/(ParamScalar a, const ParamScalar& b) { return a /= b; }
    bool operator==(const ParamScalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const ParamScalar& o) const { return !(*this == o); }

    ParamScalar inverse() const;

    /// Binds one parameter; throws ParamSingular if the denominator vanishes.
    ParamScalar substitute(const std::string& name, const Rational& value) const;
    ParamScalar substitute(const std::map<std::string, Rational>& values) const;
    /// All parameters must be bound; throws ParamSingular on a vanishing denominator.
    Rational evaluate(const std::map<std::string, Rational>& values) const;
    double evaluate(const std::map<std::string, double>& values) const;

    /// Grammar-compatible text: "3/4", "alpha", "(alpha^2 + 1)/(alpha - 2)".
    std::string to_string() const;
    /// Same, but wrapped in parentheses unless it is an atom-like token.
    std::string to_factor_string() const;

private:
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

}  // namespace invcnx

namespace Eigen {

template <>
struct NumTraits<invcnx::ParamScalar> : GenericNumTraits<invcnx::ParamScalar> {
    using Real = invcnx::ParamScalar;
    using NonInteger = invcnx::ParamScalar;
    using Nested = invcnx::ParamScalar;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 50,
        MulCost = 50
    };
};

}  // namespace Eigen
