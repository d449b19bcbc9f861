#include "invcnx/param_scalar.hpp"

#include <stdexcept>

#include "invcnx/errors.hpp"

namespace invcnx {

ParamScalar::ParamScalar(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ParamSingular("zero denominator");
    normalize();
}

void ParamScalar::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial(1);
        return;
    }
    if (den_.is_constant()) {
        if (den_.constant_value() != 1) {
            num_ *= Rational(1) / den_.constant_value();
            den_ = Polynomial(1);
        }
        return;
    }
    Polynomial g = gcd(num_, den_);
    if (!g.is_constant()) {
        num_ = *num_.exact_divide(g);
        den_ = *den_.exact_divide(g);
    }
    Rational lc = den_.leading_coefficient();
    if (lc != 1) {
        num_ *= Rational(1) / lc;
        den_ *= Rational(1) / lc;
    }
}

std::set<std::string> ParamScalar::parameters() const {
    auto vs = num_.variables();
    auto vd = den_.variables();
    vs.insert(vd.begin(), vd.end());
    return vs;
}

int ParamScalar::complexity() const {
    return static_cast<int>(num_.size() + den_.size()) + num_.total_degree() + den_.total_degree();
}

ParamScalar ParamScalar::operator-() const {
    ParamScalar r = *this;
    r.num_ = -r.num_;
    return r;
}

ParamScalar& ParamScalar::operator+=(const ParamScalar& o) {
    if (o.is_zero()) return *this;
    if (den_.is_constant() && o.den_.is_constant()) {
        num_ += o.num_;
        return *this;
    }
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
    }
    normalize();
    return *this;
}

ParamScalar& ParamScalar::operator-=(const ParamScalar& o) {
    return *this += -o;
}

ParamScalar& ParamScalar::operator*=(const ParamScalar& o) {
    if (is_zero()) return *this;
    if (o.is_zero()) {
        *this = ParamScalar();
        return *this;
    }
    if (o.is_constant()) {
        num_ *= o.constant_value();
        return *this;
    }
    if (is_constant()) {
        Rational c = constant_value();
        *this = o;
        num_ *= c;
        return *this;
    }
    num_ = num_ * o.num_;
    den_ = den_ * o.den_;
    normalize();
    return *this;
}

ParamScalar ParamScalar::inverse() const {
    if (is_zero()) throw ParamSingular("inverse of zero");
    return ParamScalar(den_, num_);
}

ParamScalar& ParamScalar::operator/=(const ParamScalar& o) {
    return *this *= o.inverse();
}

ParamScalar ParamScalar::substitute(const std::string& name, const Rational& value) const {
    Polynomial d = den_.substitute(name, value);
    if (d.is_zero())
        throw ParamSingular("denominator " + den_.to_string() + " vanishes at " + name + " = " +
                            value.get_str());
    return ParamScalar(num_.substitute(name, value), d);
}

ParamScalar ParamScalar::substitute(const std::map<std::string, Rational>& values) const {
    ParamScalar r = *this;
    for (const auto& [name, v] : values) r = r.substitute(name, v);
    return r;
}

Rational ParamScalar::evaluate(const std::map<std::string, Rational>& values) const {
    Rational d = den_.evaluate(values);
    if (d == 0) throw ParamSingular("denominator " + den_.to_string() + " vanishes");
    return num_.evaluate(values) / d;
}

double ParamScalar::evaluate(const std::map<std::string, double>& values) const {
    double d = den_.evaluate(values);
    if (d == 0.0) throw ParamSingular("denominator " + den_.to_string() + " vanishes");
    return num_.evaluate(values) / d;
}

std::string ParamScalar::to_string() const {
    if (den_.is_constant()) return num_.to_string();
    std::string n = num_.size() == 1 && num_.leading_coefficient() > 0 ? num_.to_string()
                                                                       : "(" + num_.to_string() + ")";
    if (num_.is_constant()) n = num_.to_string();
    return n + "/(" + den_.to_string() + ")";
}

std::string ParamScalar::to_factor_string() const {
    std::string s = to_string();
    if (is_constant()) {
        Rational c = constant_value();
        if (c >= 0 && c.get_den() == 1) return s;
        return "(" + s + ")";
    }
    if (den_.is_constant() && num_.size() == 1 && num_.leading_coefficient() == 1) return s;
    return "(" + s + ")";
}

}  // namespace invcnx
