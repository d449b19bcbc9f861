#include "invcnx/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace invcnx {

std::string to_string(const Rational& q) {
    return q.get_str();
}

// ---------------------------------------------------------------------------
// PowerProduct

PowerProduct PowerProduct::var(const std::string& name, int exp) {
    PowerProduct p;
    if (exp > 0) p.factors_.emplace_back(name, exp);
    return p;
}

int PowerProduct::degree(const std::string& name) const {
    for (const auto& [n, e] : factors_)
        if (n == name) return e;
    return 0;
}

int PowerProduct::total_degree() const {
    int d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
}

PowerProduct PowerProduct::operator*(const PowerProduct& o) const {
    PowerProduct r;
    auto a = factors_.begin(), b = o.factors_.begin();
    while (a != factors_.end() || b != o.factors_.end()) {
        if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
            r.factors_.push_back(*a++);
        } else if (a == factors_.end() || b->first < a->first) {
            r.factors_.push_back(*b++);
        } else {
            r.factors_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return r;
}

std::optional<PowerProduct> PowerProduct::divide(const PowerProduct& o) const {
    PowerProduct r;
    auto a = factors_.begin();
    for (const auto& [name, e] : o.factors_) {
        while (a != factors_.end() && a->first < name) r.factors_.push_back(*a++);
        if (a == factors_.end() || a->first != name || a->second < e) return std::nullopt;
        if (a->second > e) r.factors_.emplace_back(name, a->second - e);
        ++a;
    }
    while (a != factors_.end()) r.factors_.push_back(*a++);
    return r;
}

PowerProduct PowerProduct::without(const std::string& name) const {
    PowerProduct r;
    for (const auto& f : factors_)
        if (f.first != name) r.factors_.push_back(f);
    return r;
}

std::strong_ordering PowerProduct::operator<=>(const PowerProduct& o) const {
    auto a = factors_.begin(), b = o.factors_.begin();
    while (a != factors_.end() && b != o.factors_.end()) {
        if (a->first < b->first) return std::strong_ordering::greater;
        if (b->first < a->first) return std::strong_ordering::less;
        if (a->second != b->second) return a->second <=> b->second;
        ++a;
        ++b;
    }
    if (a != factors_.end()) return std::strong_ordering::greater;
    if (b != o.factors_.end()) return std::strong_ordering::less;
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& c) {
    if (c != 0) terms_.emplace(PowerProduct{}, c);
}

Polynomial Polynomial::var(const std::string& name) {
    return term(PowerProduct::var(name), 1);
}

Polynomial Polynomial::term(const PowerProduct& m, const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(m, c);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
    auto it = terms_.find(PowerProduct{});
    return it == terms_.end() ? Rational(0) : it->second;
}

std::set<std::string> Polynomial::variables() const {
    std::set<std::string> vs;
    for (const auto& [m, c] : terms_)
        for (const auto& f : m.factors()) vs.insert(f.first);
    return vs;
}

int Polynomial::degree(const std::string& name) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree(name));
    return d;
}

int Polynomial::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) {
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) {
        auto [it, inserted] = terms_.emplace(m, -c);
        if (!inserted) {
            it->second -= c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Rational c = ca * cb;
            auto [it, inserted] = r.terms_.emplace(ma * mb, c);
            if (!inserted) {
                it->second += c;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    }
    return r;
}

Polynomial Polynomial::pow(unsigned n) const {
    Polynomial r(1), base = *this;
    while (n) {
        if (n & 1u) r = r * base;
        n >>= 1u;
        if (n) base = base * base;
    }
    return r;
}

std::optional<Polynomial> Polynomial::exact_divide(const Polynomial& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    if (d.is_constant()) {
        Polynomial q = *this;
        q *= Rational(1) / d.constant_value();
        return q;
    }
    Polynomial q, r = *this;
    const PowerProduct& lm = d.leading_monomial();
    const Rational& lc = d.leading_coefficient();
    while (!r.is_zero()) {
        auto quot = r.leading_monomial().divide(lm);
        if (!quot) return std::nullopt;
        Polynomial t = term(*quot, r.leading_coefficient() / lc);
        q += t;
        r -= t * d;
    }
    return q;
}

std::map<int, Polynomial> Polynomial::coefficients_in(const std::string& name) const {
    std::map<int, Polynomial> out;
    for (const auto& [m, c] : terms_) out[m.degree(name)] += term(m.without(name), c);
    return out;
}

Polynomial Polynomial::from_coefficients(const std::string& name,
                                         const std::map<int, Polynomial>& coeffs) {
    Polynomial r;
    for (const auto& [d, c] : coeffs) r += c * term(PowerProduct::var(name, d), 1);
    return r;
}

Polynomial Polynomial::substitute(const std::string& name, const Rational& value) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
        int d = m.degree(name);
        if (d == 0) {
            r += term(m, c);
            continue;
        }
        Rational v;
        mpz_pow_ui(v.get_num_mpz_t(), value.get_num_mpz_t(), static_cast<unsigned long>(d));
        mpz_pow_ui(v.get_den_mpz_t(), value.get_den_mpz_t(), static_cast<unsigned long>(d));
        r += term(m.without(name), c * v);
    }
    return r;
}

Rational Polynomial::evaluate(const std::map<std::string, Rational>& values) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (const auto& [name, e] : m.factors()) {
            auto it = values.find(name);
            if (it == values.end())
                throw std::out_of_range("no value bound for parameter '" + name + "'");
            for (int k = 0; k < e; ++k) t *= it->second;
        }
        sum += t;
    }
    return sum;
}

double Polynomial::evaluate(const std::map<std::string, double>& values) const {
    double sum = 0;
    for (const auto& [m, c] : terms_) {
        double t = c.get_d();
        for (const auto& [name, e] : m.factors()) {
            auto it = values.find(name);
            if (it == values.end())
                throw std::out_of_range("no value bound for parameter '" + name + "'");
            t *= std::pow(it->second, e);
        }
        sum += t;
    }
    return sum;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return *this;
    Polynomial r = *this;
    r *= Rational(1) / leading_coefficient();
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool need_star = false;
        if (m.is_one() || mag != 1) {
            os << mag.get_str();
            need_star = true;
        }
        for (const auto& [name, e] : m.factors()) {
            if (need_star) os << "*";
            os << name;
            if (e != 1) os << "^" << e;
            need_star = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// gcd over Q[params], recursive on the alphabetically first variable.

namespace {

Polynomial content_in(const Polynomial& p, const std::string& v);

Polynomial pseudo_remainder(const Polynomial& f, const Polynomial& g, const std::string& v) {
    auto gc = g.coefficients_in(v);
    int dg = gc.rbegin()->first;
    Polynomial lc = gc.rbegin()->second;
    Polynomial r = f;
    while (!r.is_zero()) {
        auto rc = r.coefficients_in(v);
        int dr = rc.rbegin()->first;
        if (dr < dg) break;
        Polynomial shift = rc.rbegin()->second * Polynomial::term(PowerProduct::var(v, dr - dg), 1);
        r = lc * r - shift * g;
    }
    return r;
}

Polynomial primitive_part(const Polynomial& p, const std::string& v) {
    Polynomial c = content_in(p, v);
    return *p.exact_divide(c);
}

Polynomial content_in(const Polynomial& p, const std::string& v) {
    Polynomial g;
    for (const auto& [d, c] : p.coefficients_in(v)) {
        g = gcd(g, c);
        if (g.is_constant() && !g.is_zero()) return Polynomial(1);
    }
    return g;
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Polynomial(1);
    if (a == b) return a.monic();

    auto va = a.variables(), vb = b.variables();
    std::string v = std::min(*va.begin(), *vb.begin());
    if (!va.count(v)) return gcd(a, content_in(b, v));
    if (!vb.count(v)) return gcd(content_in(a, v), b);

    Polynomial ca = content_in(a, v), cb = content_in(b, v);
    Polynomial g = gcd(ca, cb);
    Polynomial f = *a.exact_divide(ca), h = *b.exact_divide(cb);
    if (f.degree(v) < h.degree(v)) std::swap(f, h);
    while (true) {
        Polynomial r = pseudo_remainder(f, h, v);
        if (r.is_zero()) break;
        if (r.degree(v) == 0) {
            h = Polynomial(1);
            break;
        }
        f = h;
        h = primitive_part(r, v);
    }
    if (h.degree(v) > 0) h = primitive_part(h, v);
    return (g * h).monic();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<mpz_class> positive_divisors(mpz_class n) {
    n = abs(n);
    std::vector<mpz_class> small, large;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d * d != n) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

}  // namespace

std::vector<Rational> rational_roots(const Polynomial& p) {
    auto vars = p.variables();
    if (vars.size() != 1) {
        if (vars.empty()) return {};
        throw std::invalid_argument("rational_roots needs a univariate polynomial");
    }
    const std::string v = *vars.begin();
    auto coeffs = p.coefficients_in(v);
    mpz_class lcm_den = 1;
    for (const auto& [d, c] : coeffs) {
        Rational q = c.constant_value();
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den_mpz_t());
    }
    std::map<int, mpz_class> ints;
    for (const auto& [d, c] : coeffs) {
        Rational q = c.constant_value() * lcm_den;
        ints[d] = q.get_num();
    }
    std::vector<Rational> roots;
    int low = ints.begin()->first;
    if (low > 0) roots.emplace_back(0);
    mpz_class a_low = ints.begin()->second, a_high = ints.rbegin()->second;
    if (ints.rbegin()->first == low) return roots;
    auto eval = [&](const Rational& x) {
        Rational s = 0, xp = 1;
        int prev = low;
        for (const auto& [d, c] : ints) {
            for (int k = prev; k < d; ++k) xp *= x;
            prev = d;
            s += xp * c;
        }
        return s;
    };
    for (const auto& num : positive_divisors(a_low)) {
        for (const auto& den : positive_divisors(a_high)) {
            for (int sign : {1, -1}) {
                Rational cand(num * sign, den);
                cand.canonicalize();
                if (eval(cand) == 0) roots.push_back(cand);
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace invcnx
