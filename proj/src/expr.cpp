#include "invcnx/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "invcnx/errors.hpp"

namespace invcnx {

std::string atom_name(Atom a) {
    switch (a) {
        case Atom::X: return "x";
        case Atom::Y: return "y";
        case Atom::XMinusY: return "x-y";
        case Atom::Sphere: return "1+x^2+y^2";
        case Atom::ExpAX: return "exp";
    }
    return "?";
}

double to_double(const EvalValue& v) {
    if (const auto* q = std::get_if<Rational>(&v)) return q->get_d();
    return std::get<double>(v);
}

// ---------------------------------------------------------------------------
// Monomial

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
    for (Atom a : {Atom::ExpAX, Atom::XMinusY, Atom::Sphere, Atom::X, Atom::Y}) {
        if ((*this)[a] != o[a]) return (*this)[a] <=> o[a];
    }
    return std::strong_ordering::equal;
}

std::string Monomial::to_string(const std::string& exp_token) const {
    std::vector<std::string> parts;
    auto emit = [&](const std::string& base, int e) {
        if (e == 0) return;
        parts.push_back(e == 1 ? base : base + "^" + std::to_string(e));
    };
    emit("x", (*this)[Atom::X]);
    emit("y", (*this)[Atom::Y]);
    emit("(x-y)", (*this)[Atom::XMinusY]);
    emit("(1+x^2+y^2)", (*this)[Atom::Sphere]);
    emit(exp_token, (*this)[Atom::ExpAX]);
    if (parts.empty()) return "1";
    std::string s = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) s += "*" + parts[i];
    return s;
}

// ---------------------------------------------------------------------------
// CoordPoly

CoordPoly::CoordPoly(const ParamScalar& c) {
    if (!c.is_zero()) terms_.emplace(Key{0, 0}, c);
}

CoordPoly CoordPoly::monomial(int a, int b, const ParamScalar& c) {
    CoordPoly p;
    if (!c.is_zero()) p.terms_.emplace(Key{a, b}, c);
    return p;
}

const CoordPoly& CoordPoly::of_atom(Atom a) {
    static const CoordPoly px = monomial(1, 0);
    static const CoordPoly py = monomial(0, 1);
    static const CoordPoly pxmy = monomial(1, 0) + monomial(0, 1, -1);
    static const CoordPoly psphere = monomial(0, 0) + monomial(2, 0) + monomial(0, 2);
    switch (a) {
        case Atom::X: return px;
        case Atom::Y: return py;
        case Atom::XMinusY: return pxmy;
        case Atom::Sphere: return psphere;
        default: throw ClosureError("exp has no polynomial form");
    }
}

void CoordPoly::add_term(const Key& k, const ParamScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

CoordPoly CoordPoly::operator-() const {
    CoordPoly r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

CoordPoly& CoordPoly::operator+=(const CoordPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

CoordPoly& CoordPoly::operator*=(const ParamScalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

CoordPoly operator*(const CoordPoly& a, const CoordPoly& b) {
    CoordPoly r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_)
            r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
}

CoordPoly CoordPoly::pow(unsigned n) const {
    CoordPoly r(1);
    for (unsigned i = 0; i < n; ++i) r = r * *this;
    return r;
}

CoordPoly CoordPoly::derivative(Var v) const {
    CoordPoly r;
    for (const auto& [k, c] : terms_) {
        int e = v == Var::X ? k.first : k.second;
        if (e == 0) continue;
        Key nk = v == Var::X ? Key{k.first - 1, k.second} : Key{k.first, k.second - 1};
        r.add_term(nk, c * ParamScalar(e));
    }
    return r;
}

std::optional<CoordPoly> CoordPoly::divide(const CoordPoly& d) const {
    if (d.is_zero()) throw ClosureError("division by the zero polynomial");
    CoordPoly q, r = *this;
    const auto& [lk, lc] = *d.terms_.rbegin();
    while (!r.is_zero()) {
        const auto& [rk, rc] = *r.terms_.rbegin();
        if (rk.first < lk.first || rk.second < lk.second) return std::nullopt;
        CoordPoly t = monomial(rk.first - lk.first, rk.second - lk.second, rc / lc);
        q += t;
        r += -(t * d);
    }
    return q;
}

CoordPoly CoordPoly::substitute(const std::string& name, const Rational& value) const {
    CoordPoly r;
    for (const auto& [k, c] : terms_) r.add_term(k, c.substitute(name, value));
    return r;
}

ParamScalar CoordPoly::value_at(const Rational& x, const Rational& y) const {
    ParamScalar s;
    for (const auto& [k, c] : terms_) {
        Rational m = 1;
        for (int i = 0; i < k.first; ++i) m *= x;
        for (int i = 0; i < k.second; ++i) m *= y;
        if (m != 0) s += c * ParamScalar(m);
    }
    return s;
}

double CoordPoly::value_at(double x, double y, const std::map<std::string, double>& params) const {
    double s = 0;
    for (const auto& [k, c] : terms_)
        s += c.evaluate(params) * std::pow(x, k.first) * std::pow(y, k.second);
    return s;
}

// ---------------------------------------------------------------------------
// Expr helpers

namespace {

constexpr std::array<Atom, 4> kDenAtoms{Atom::X, Atom::Y, Atom::XMinusY, Atom::Sphere};

// Removes every denominator atom that divides the numerator. Returns false
// when the part is zero.
bool normalize(Expr::Part& p) {
    if (p.numerator.is_zero()) return false;
    for (int f = 0; f < 4; ++f) {
        while (p.denominator[f] > 0) {
            if (f < 2) {
                bool divisible = true;
                for (const auto& [k, c] : p.numerator.terms())
                    if ((f == 0 ? k.first : k.second) == 0) {
                        divisible = false;
                        break;
                    }
                if (!divisible) break;
                CoordPoly shifted;
                for (const auto& [k, c] : p.numerator.terms())
                    shifted += CoordPoly::monomial(k.first - (f == 0), k.second - (f == 1), c);
                p.numerator = std::move(shifted);
            } else {
                auto q = p.numerator.divide(CoordPoly::of_atom(kDenAtoms[f]));
                if (!q) break;
                p.numerator = std::move(*q);
            }
            --p.denominator[f];
        }
    }
    return true;
}

CoordPoly scaled_numerator(const Expr::Part& p, const std::array<int, 4>& target) {
    CoordPoly n = p.numerator;
    for (int f = 0; f < 4; ++f) {
        int diff = target[f] - p.denominator[f];
        if (diff > 0) n = n * CoordPoly::of_atom(kDenAtoms[f]).pow(static_cast<unsigned>(diff));
    }
    return n;
}

std::array<int, 4> max_den(const std::array<int, 4>& a, const std::array<int, 4>& b) {
    std::array<int, 4> r{};
    for (int f = 0; f < 4; ++f) r[f] = std::max(a[f], b[f]);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr(const ParamScalar& c) {
    if (!c.is_zero()) parts_.emplace(0, Part{CoordPoly(c), {}});
}

Expr Expr::x() {
    return from_part(0, Part{CoordPoly::monomial(1, 0), {}});
}

Expr Expr::y() {
    return from_part(0, Part{CoordPoly::monomial(0, 1), {}});
}

Expr Expr::exp_ax(const ParamScalar& rate, int n) {
    if (rate.is_zero() || n == 0) return Expr(1);
    return from_part(n, Part{CoordPoly(1), {}}, rate);
}

Expr Expr::atom_power(Atom a, int n, const ParamScalar& rate) {
    if (a == Atom::ExpAX) return exp_ax(rate, n);
    int f = static_cast<int>(a);
    Part p;
    if (n >= 0) {
        p.numerator = CoordPoly::of_atom(a).pow(static_cast<unsigned>(n));
    } else {
        p.numerator = CoordPoly(1);
        p.denominator[f] = -n;
    }
    return from_part(0, std::move(p));
}

Expr Expr::from_part(int exp_power, Part part, std::optional<ParamScalar> rate) {
    Expr e;
    if (exp_power != 0) {
        if (!rate) rate = ParamScalar::param("alpha");
        if (rate->is_zero()) exp_power = 0;
        else e.rate_ = rate;
    }
    e.add_part(exp_power, std::move(part));
    e.drop_rate_if_unused();
    return e;
}

Expr Expr::from_monomial(const Monomial& m, const ParamScalar& coeff, const ParamScalar& rate) {
    Expr e(coeff);
    for (Atom a : kAllAtoms)
        if (m[a] != 0) e *= atom_power(a, m[a], rate);
    return e;
}

void Expr::add_part(int m, Part p) {
    if (!normalize(p)) return;
    auto it = parts_.find(m);
    if (it == parts_.end()) {
        parts_.emplace(m, std::move(p));
        return;
    }
    Part& q = it->second;
    auto d = max_den(p.denominator, q.denominator);
    Part sum{scaled_numerator(p, d) + scaled_numerator(q, d), d};
    if (normalize(sum)) q = std::move(sum);
    else parts_.erase(it);
}

void Expr::check_rate(const std::optional<ParamScalar>& other) {
    if (!other) return;
    if (rate_ && *rate_ != *other)
        throw ClosureError("exponentials with different rates: " + rate_->to_string() + " vs " +
                           other->to_string());
    rate_ = other;
}

void Expr::drop_rate_if_unused() {
    for (const auto& [m, p] : parts_)
        if (m != 0) return;
    rate_.reset();
}

bool Expr::is_constant() const {
    if (parts_.empty()) return true;
    if (parts_.size() != 1 || parts_.begin()->first != 0) return false;
    const Part& p = parts_.begin()->second;
    return p.denominator == std::array<int, 4>{} && p.numerator.size() == 1 &&
           p.numerator.terms().begin()->first == CoordPoly::Key{0, 0};
}

ParamScalar Expr::constant_value() const {
    if (parts_.empty()) return ParamScalar();
    if (!is_constant()) throw ClosureError("expression is not constant: " + to_string());
    return parts_.begin()->second.numerator.terms().begin()->second;
}

bool Expr::is_polynomial() const {
    if (parts_.empty()) return true;
    return parts_.size() == 1 && parts_.begin()->first == 0 &&
           parts_.begin()->second.denominator == std::array<int, 4>{};
}

std::set<std::string> Expr::parameters() const {
    std::set<std::string> out;
    for (const auto& [m, p] : parts_)
        for (const auto& [k, c] : p.numerator.terms()) {
            auto ps = c.parameters();
            out.insert(ps.begin(), ps.end());
        }
    if (rate_) {
        auto ps = rate_->parameters();
        out.insert(ps.begin(), ps.end());
    }
    return out;
}

std::vector<std::pair<Monomial, ParamScalar>> Expr::terms() const {
    std::vector<std::pair<Monomial, ParamScalar>> out;
    for (const auto& [m, p] : parts_) {
        for (const auto& [k, c] : p.numerator.terms()) {
            Monomial mono;
            mono[Atom::X] = k.first - p.denominator[0];
            mono[Atom::Y] = k.second - p.denominator[1];
            mono[Atom::XMinusY] = -p.denominator[2];
            mono[Atom::Sphere] = -p.denominator[3];
            mono[Atom::ExpAX] = m;
            out.emplace_back(mono, c);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::vector<std::string> Expr::domain_notes() const {
    std::array<bool, 4> seen{};
    for (const auto& [m, p] : parts_)
        for (int f = 0; f < 4; ++f) seen[f] = seen[f] || p.denominator[f] > 0;
    std::vector<std::string> out;
    for (int f = 0; f < 4; ++f)
        if (seen[f]) out.push_back(atom_name(kDenAtoms[f]) + " != 0");
    return out;
}

Expr Expr::operator-() const {
    Expr r = *this;
    for (auto& [m, p] : r.parts_) p.numerator = -p.numerator;
    return r;
}

Expr& Expr::operator+=(const Expr& o) {
    check_rate(o.rate_);
    for (const auto& [m, p] : o.parts_) add_part(m, p);
    drop_rate_if_unused();
    return *this;
}

Expr& Expr::operator-=(const Expr& o) {
    return *this += -o;
}

Expr& Expr::operator*=(const Expr& o) {
    check_rate(o.rate_);
    Expr r;
    r.rate_ = rate_;
    for (const auto& [ma, pa] : parts_) {
        for (const auto& [mb, pb] : o.parts_) {
            Part p{pa.numerator * pb.numerator, {}};
            for (int f = 0; f < 4; ++f) p.denominator[f] = pa.denominator[f] + pb.denominator[f];
            r.add_part(ma + mb, std::move(p));
        }
    }
    r.drop_rate_if_unused();
    *this = std::move(r);
    return *this;
}

Expr Expr::inverse() const {
    if (is_zero()) throw ClosureError("inverse of zero");
    if (parts_.size() != 1) throw ClosureError("not a unit: " + to_string());
    const auto& [m, p] = *parts_.begin();
    int amin = INT32_MAX, bmin = INT32_MAX;
    for (const auto& [k, c] : p.numerator.terms()) {
        amin = std::min(amin, k.first);
        bmin = std::min(bmin, k.second);
    }
    CoordPoly n;
    for (const auto& [k, c] : p.numerator.terms())
        n += CoordPoly::monomial(k.first - amin, k.second - bmin, c);
    int kxy = 0, ksph = 0;
    while (auto q = n.divide(CoordPoly::of_atom(Atom::XMinusY))) {
        n = std::move(*q);
        ++kxy;
    }
    while (auto q = n.divide(CoordPoly::of_atom(Atom::Sphere))) {
        n = std::move(*q);
        ++ksph;
    }
    if (n.size() != 1 || n.terms().begin()->first != CoordPoly::Key{0, 0})
        throw ClosureError("not a unit of the expression class: " + to_string());
    ParamScalar rate = rate_ ? *rate_ : ParamScalar::param("alpha");
    Expr r(n.terms().begin()->second.inverse());
    r *= atom_power(Atom::X, p.denominator[0] - amin);
    r *= atom_power(Atom::Y, p.denominator[1] - bmin);
    r *= atom_power(Atom::XMinusY, p.denominator[2] - kxy);
    r *= atom_power(Atom::Sphere, p.denominator[3] - ksph);
    r *= exp_ax(rate, -m);
    return r;
}

Expr Expr::pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    Expr r(1), base = *this;
    while (n) {
        if (n & 1) r *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return r;
}

Expr Expr::differentiate(Var v) const {
    Expr out;
    for (const auto& [m, p] : parts_) {
        std::optional<ParamScalar> rate = m != 0 ? rate_ : std::nullopt;
        out += from_part(m, Part{p.numerator.derivative(v), p.denominator}, rate);
        for (int f = 0; f < 4; ++f) {
            if (p.denominator[f] == 0) continue;
            CoordPoly datom = CoordPoly::of_atom(kDenAtoms[f]).derivative(v);
            if (datom.is_zero()) continue;
            Part q{p.numerator * datom, p.denominator};
            q.numerator *= ParamScalar(-p.denominator[f]);
            ++q.denominator[f];
            out += from_part(m, std::move(q), rate);
        }
        if (v == Var::X && m != 0) {
            Part q = p;
            q.numerator *= *rate_ * ParamScalar(m);
            out += from_part(m, std::move(q), rate);
        }
    }
    return out;
}

Expr Expr::substitute(const std::string& param, const Rational& value) const {
    Expr out;
    std::optional<ParamScalar> rate;
    if (rate_) rate = rate_->substitute(param, value);
    for (const auto& [m, p] : parts_) {
        Part q{p.numerator.substitute(param, value), p.denominator};
        out += from_part(rate && rate->is_zero() ? 0 : m, std::move(q), m != 0 ? rate : std::nullopt);
    }
    return out;
}

Expr Expr::substitute(const ParamBindings& values) const {
    Expr r = *this;
    for (const auto& [name, v] : values) r = r.substitute(name, v);
    return r;
}

ParamScalar Expr::value_at(const Point& pt) const {
    ParamScalar sum;
    for (const auto& [m, p] : parts_) {
        if (m != 0 && pt.x != 0)
            throw ClosureError("exp(" + rate_->to_string() + "*x) is not rational at x = " +
                               pt.x.get_str());
        Rational den = 1;
        const Rational vals[4] = {pt.x, pt.y, pt.x - pt.y, 1 + pt.x * pt.x + pt.y * pt.y};
        for (int f = 0; f < 4; ++f) {
            if (p.denominator[f] == 0) continue;
            if (vals[f] == 0)
                throw EvalSingular(atom_name(kDenAtoms[f]) + " vanishes at (" + pt.x.get_str() +
                                   ", " + pt.y.get_str() + ")");
            for (int k = 0; k < p.denominator[f]; ++k) den *= vals[f];
        }
        sum += p.numerator.value_at(pt.x, pt.y) * ParamScalar(Rational(1) / den);
    }
    return sum;
}

EvalValue Expr::eval(const Point& pt, const ParamBindings& params) const {
    for (const auto& [m, p] : parts_) {
        const Rational vals[4] = {pt.x, pt.y, pt.x - pt.y, 1 + pt.x * pt.x + pt.y * pt.y};
        for (int f = 0; f < 4; ++f)
            if (p.denominator[f] > 0 && vals[f] == 0)
                throw EvalSingular(atom_name(kDenAtoms[f]) + " vanishes at (" + pt.x.get_str() +
                                   ", " + pt.y.get_str() + ")");
    }
    Expr bound = substitute(params);
    for (const auto& name : bound.parameters())
        throw UnknownParameter("no value bound for '" + name + "'");
    if (!bound.has_exp() || pt.x == 0) return bound.value_at(pt).constant_value();
    return bound.eval_numeric(pt.x.get_d(), pt.y.get_d(), {});
}

double Expr::eval_numeric(double x, double y, const std::map<std::string, double>& params) const {
    double sum = 0;
    const double vals[4] = {x, y, x - y, 1 + x * x + y * y};
    for (const auto& [m, p] : parts_) {
        double den = 1;
        for (int f = 0; f < 4; ++f) {
            if (p.denominator[f] == 0) continue;
            if (vals[f] == 0.0) throw EvalSingular(atom_name(kDenAtoms[f]) + " vanishes");
            den *= std::pow(vals[f], p.denominator[f]);
        }
        double term = p.numerator.value_at(x, y, params) / den;
        if (m != 0) term *= std::exp(rate_->evaluate(params) * x * m);
        sum += term;
    }
    return sum;
}

std::string Expr::to_string() const {
    if (parts_.empty()) return "0";
    std::string exp_token = "exp(x)";
    if (rate_ && !rate_->is_one()) exp_token = "exp(" + rate_->to_factor_string() + "*x)";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, c] : terms()) {
        std::string ms = mono.is_one() ? "" : mono.to_string(exp_token);
        if (c.is_constant()) {
            Rational v = c.constant_value();
            if (first) os << (v < 0 ? "-" : "");
            else os << (v < 0 ? " - " : " + ");
            Rational mag = abs(v);
            if (ms.empty()) os << mag.get_str();
            else if (mag == 1) os << ms;
            else os << mag.get_str() << "*" << ms;
        } else {
            if (!first) os << " + ";
            os << c.to_factor_string();
            if (!ms.empty()) os << "*" << ms;
        }
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

std::vector<CoefficientRow> coefficient_rows(std::span<const Expr> exprs) {
    std::optional<ParamScalar> rate;
    std::map<int, std::array<int, 4>> dens;
    for (const Expr& e : exprs) {
        if (e.exp_rate()) {
            if (rate && *rate != *e.exp_rate())
                throw ClosureError("exponentials with different rates in one family");
            rate = e.exp_rate();
        }
        for (const auto& [m, p] : e.parts()) {
            auto [it, inserted] = dens.emplace(m, p.denominator);
            if (!inserted) it->second = max_den(it->second, p.denominator);
        }
    }
    std::vector<CoefficientRow> rows;
    for (const auto& [m, d] : dens) {
        std::map<CoordPoly::Key, std::vector<ParamScalar>> acc;
        for (std::size_t i = 0; i < exprs.size(); ++i) {
            auto it = exprs[i].parts().find(m);
            if (it == exprs[i].parts().end()) continue;
            CoordPoly scaled = scaled_numerator(it->second, d);
            for (const auto& [k, c] : scaled.terms()) {
                auto& row = acc[k];
                if (row.empty()) row.resize(exprs.size());
                row[i] = c;
            }
        }
        for (auto& [k, coeffs] : acc) {
            CoefficientRow r;
            r.monomial[Atom::X] = k.first - d[0];
            r.monomial[Atom::Y] = k.second - d[1];
            r.monomial[Atom::XMinusY] = -d[2];
            r.monomial[Atom::Sphere] = -d[3];
            r.monomial[Atom::ExpAX] = m;
            r.coeffs = std::move(coeffs);
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::set<std::string>& params) : s_(text), params_(params) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        Expr e = term();
        while (true) {
            if (accept('+')) e += term();
            else if (accept('-')) e -= term();
            else return e;
        }
    }

    Expr term() {
        Expr e = unary();
        while (true) {
            if (accept('*')) {
                e *= unary();
            } else if (accept('/')) {
                Expr d = unary();
                if (d.is_zero()) fail("division by zero");
                try {
                    e *= d.inverse();
                } catch (const ClosureError& err) {
                    fail(std::string("divisor is not invertible in the expression class (") +
                         err.what() + ")");
                }
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    int integer_exponent() {
        bool paren = accept('(');
        int sign = 1;
        if (accept('-')) sign = -1;
        else accept('+');
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        int v = std::stoi(std::string(s_.substr(start, pos_ - start)));
        if (paren) expect(')');
        return sign * v;
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) {
            int n = integer_exponent();
            try {
                return base.pow(n);
            } catch (const ClosureError& err) {
                fail(std::string("negative power of a non-unit (") + err.what() + ")");
            }
        }
        return base;
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Expr(ParamScalar(Rational(std::string(s_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string id(s_.substr(start, pos_ - start));
            if (id == "x") return Expr::x();
            if (id == "y") return Expr::y();
            if (id == "exp") return exponential();
            if (!params_.count(id)) {
                pos_ = start;
                throw UnknownParameter("'" + id + "' is not a declared parameter in \"" +
                                       std::string(s_) + "\"");
            }
            return Expr(ParamScalar::param(id));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    Expr exponential() {
        expect('(');
        Expr arg = expr();
        expect(')');
        if (arg.is_zero()) return Expr(1);
        auto ts = arg.terms();
        Monomial just_x;
        just_x[Atom::X] = 1;
        if (ts.size() != 1 || ts[0].first != just_x)
            fail("exp argument must be <scalar>*x, got " + arg.to_string());
        return Expr::exp_ax(ts[0].second);
    }

    std::string_view s_;
    const std::set<std::string>& params_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const std::set<std::string>& params) {
    return Parser(text, params).parse();
}

ParamScalar parse_scalar(std::string_view text, const std::set<std::string>& params) {
    Expr e = parse_expr(text, params);
    if (!e.is_constant()) throw ParseError("expected a parameter expression, got \"" + std::string(text) + "\"");
    return e.constant_value();
}

}  // namespace invcnx
