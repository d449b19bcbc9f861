#include "invcnx/geometry.hpp"

#include <Eigen/Dense>
#include <cctype>
#include <cmath>
#include <regex>
#include <sstream>

#include "invcnx/errors.hpp"
#include "invcnx/linear.hpp"

namespace invcnx {

namespace {

constexpr Var kVars[2] = {Var::X, Var::Y};

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// d_l X^k for all k, l.
std::array<std::array<Expr, 2>, 2> jacobian(const VectorField& X) {
    std::array<std::array<Expr, 2>, 2> d;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) d[k][l] = X[k].differentiate(kVars[l]);
    return d;
}

template <class Tag>
EndValuedOneForm tensor_part(const VectorField& X, const ThreeIndex<Tag>& T) {
    auto dX = jacobian(X);
    EndValuedOneForm r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                Expr v;
                for (int l = 0; l < 2; ++l) {
                    v += X[l] * T(i, j, k).differentiate(kVars[l]);
                    v -= T(i, j, l) * dX[k][l];
                    v += T(l, j, k) * dX[l][i];
                    v += T(i, l, k) * dX[l][j];
                }
                r(i, j, k) = v;
            }
    return r;
}

}  // namespace

std::set<std::string> VectorField::parameters() const {
    auto s = comp[0].parameters();
    auto t = comp[1].parameters();
    s.insert(t.begin(), t.end());
    return s;
}

std::string VectorField::to_string() const {
    std::string out;
    const char* names[2] = {"dx", "dy"};
    for (int k = 0; k < 2; ++k) {
        if (comp[k].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + comp[k].to_string() + ") " + names[k];
    }
    return out.empty() ? "0" : out;
}

std::string component_label(std::size_t n) {
    return "G[" + std::to_string(n / 4 + 1) + "][" + std::to_string(n / 2 % 2 + 1) + "][" +
           std::to_string(n % 2 + 1) + "]";
}

EndValuedOneForm difference(const Christoffel& a, const Christoffel& b) {
    EndValuedOneForm r;
    for (std::size_t n = 0; n < 8; ++n) r.t[n] = a.t[n] - b.t[n];
    return r;
}

Christoffel translate(const Christoffel& g, const EndValuedOneForm& t) {
    Christoffel r;
    for (std::size_t n = 0; n < 8; ++n) r.t[n] = g.t[n] + t.t[n];
    return r;
}

LieAlgebraAction LieAlgebraAction::substitute(const ParamBindings& values) const {
    LieAlgebraAction r = *this;
    for (auto& X : r.generators) X = X.substitute(values);
    std::erase_if(r.params, [&](const std::string& p) { return values.count(p) > 0; });
    return r;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    VectorField r;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            r[k] += X[l] * Y[k].differentiate(kVars[l]) - Y[l] * X[k].differentiate(kVars[l]);
    return r;
}

EndValuedOneForm lie_derivative_connection(const VectorField& X, const Christoffel& G) {
    EndValuedOneForm r = tensor_part(X, G);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                r(i, j, k) += X[k].differentiate(kVars[i]).differentiate(kVars[j]);
    return r;
}

EndValuedOneForm lie_derivative_tensor(const VectorField& X, const EndValuedOneForm& T) {
    return tensor_part(X, T);
}

std::string InvarianceReport::to_string(const LieAlgebraAction& g) const {
    if (residuals.empty()) return "invariant";
    std::ostringstream os;
    for (const auto& r : residuals) {
        os << "generator " << r.generator + 1;
        if (r.generator < g.generators.size()) os << " [" << g.generators[r.generator].to_string() << "]";
        os << ": (L nabla)" << component_label(r.component).substr(1) << " = " << r.value.to_string() << "\n";
    }
    return os.str();
}

InvarianceReport verify_invariance(const LieAlgebraAction& g, const Christoffel& G) {
    InvarianceReport rep;
    for (std::size_t a = 0; a < g.generators.size(); ++a) {
        EndValuedOneForm r = lie_derivative_connection(g.generators[a], G);
        for (std::size_t n = 0; n < 8; ++n)
            if (!r.t[n].is_zero()) rep.residuals.push_back({a, n, r.t[n]});
    }
    return rep;
}

Jet2 jet2_at(const VectorField& X, const Point& p) {
    Jet2 j;
    try {
        for (int k = 0; k < 2; ++k) {
            j.value(k) = X[k].value_at(p);
            for (int l = 0; l < 2; ++l) {
                Expr d = X[k].differentiate(kVars[l]);
                j.jacobian(k, l) = d.value_at(p);
                for (int m = 0; m < 2; ++m) j.hessians[k](l, m) = d.differentiate(kVars[m]).value_at(p);
            }
        }
    } catch (const EvalSingular& e) {
        throw JetSingular(e.what());
    } catch (const ClosureError& e) {
        throw JetSingular(e.what());
    }
    return j;
}

std::optional<std::vector<ParamScalar>> span_coefficients(const std::vector<VectorField>& basis,
                                                          const VectorField& Z) {
    const int n = static_cast<int>(basis.size());
    std::vector<SparseRow<ParamScalar>> rows;
    for (int k = 0; k < 2; ++k) {
        std::vector<Expr> family;
        for (const auto& B : basis) family.push_back(B[k]);
        family.push_back(Z[k]);
        for (const auto& cr : coefficient_rows(family)) {
            SparseRow<ParamScalar> r;
            for (int c = 0; c < n; ++c)
                if (!cr.coeffs[static_cast<std::size_t>(c)].is_zero())
                    r.entries.emplace(c, cr.coeffs[static_cast<std::size_t>(c)]);
            r.rhs = cr.coeffs.back();
            rows.push_back(std::move(r));
        }
    }
    auto e = eliminate(rows, n);
    if (!e.consistent()) return std::nullopt;
    return particular_solution(e, n);
}

std::optional<StructureConstants> structure_constants(const LieAlgebraAction& g) {
    const std::size_t n = g.generators.size();
    StructureConstants c(n, std::vector<std::vector<ParamScalar>>(n, std::vector<ParamScalar>(n)));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            auto co = span_coefficients(g.generators, lie_bracket(g.generators[a], g.generators[b]));
            if (!co) return std::nullopt;
            c[a][b] = *co;
            for (std::size_t k = 0; k < n; ++k) c[b][a][k] = -(*co)[k];
        }
    return c;
}

Christoffel parse_christoffel(std::string_view text, const std::set<std::string>& params) {
    static const std::regex line_re(R"(^\s*G\s*\[\s*(\d)\s*\]\s*\[\s*(\d)\s*\]\s*\[\s*(\d)\s*\]\s*=(.*)$)");
    Christoffel g;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (trim(line).empty()) continue;
        std::smatch m;
        if (!std::regex_match(line, m, line_re))
            throw ParseError("line " + std::to_string(lineno) + ": expected 'G[i][j][k] = <expr>'");
        int idx[3];
        for (int q = 0; q < 3; ++q) {
            idx[q] = std::stoi(m[q + 1].str());
            if (idx[q] < 1 || idx[q] > 2)
                throw ParseError("line " + std::to_string(lineno) + ": index out of range");
        }
        g(idx[0] - 1, idx[1] - 1, idx[2] - 1) = parse_expr(m[4].str(), params);
    }
    return g;
}

std::string format_christoffel(const Christoffel& G) {
    std::string out;
    for (std::size_t n = 0; n < 8; ++n) out += component_label(n) + " = " + G.t[n].to_string() + "\n";
    return out;
}

VectorField parse_vector_field(std::string_view text, const std::set<std::string>& params) {
    VectorField X;
    if (trim(text) == "0") return X;
    int depth = 0;
    std::size_t seg = 0;
    bool any = false;
    auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        if (depth != 0 || c != 'd' || i + 1 >= text.size()) continue;
        char v = text[i + 1];
        if (v != 'x' && v != 'y') continue;
        if (i > 0 && is_ident(text[i - 1])) continue;
        if (i + 2 < text.size() && is_ident(text[i + 2])) continue;
        std::string coef = trim(text.substr(seg, i - seg));
        bool negate = false;
        if (!coef.empty() && (coef[0] == '+' || coef[0] == '-')) {
            negate = coef[0] == '-';
            coef = trim(std::string_view(coef).substr(1));
        } else if (any) {
            throw ParseError("missing '+' between terms in \"" + std::string(text) + "\"");
        }
        Expr e = coef.empty() ? Expr(1) : parse_expr(coef, params);
        if (negate) e = -e;
        X[v == 'x' ? 0 : 1] += e;
        any = true;
        seg = i + 2;
        ++i;
    }
    if (!any || !trim(text.substr(seg)).empty())
        throw ParseError("expected '(expr) dx + (expr) dy', got \"" + std::string(text) + "\"");
    return X;
}

std::vector<VectorField> parse_generators(std::string_view text, const std::set<std::string>& params) {
    std::vector<VectorField> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (trim(line).empty()) continue;
        out.push_back(parse_vector_field(line, params));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Flow oracle

namespace {

struct NumericField {
    std::array<Expr, 2> f;
    std::array<std::array<Expr, 2>, 2> df;                   // df[k][l] = d_l X^k
    std::array<std::array<std::array<Expr, 2>, 2>, 2> ddf;  // ddf[k][a][b]
    std::map<std::string, double> params;

    double eval(const Expr& e, double x, double y) const {
        double v;
        try {
            v = e.eval_numeric(x, y, params);
        } catch (const Error& err) {
            throw OracleSingular(err.what());
        }
        if (!std::isfinite(v)) throw OracleSingular("non-finite value at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        return v;
    }
};

// State: position, first variation J (2x2), second variation H (H[c] 2x2).
struct FlowState {
    Eigen::Vector2d phi;
    Eigen::Matrix2d J;
    std::array<Eigen::Matrix2d, 2> H;

    FlowState operator+(const FlowState& o) const {
        return {phi + o.phi, J + o.J, {H[0] + o.H[0], H[1] + o.H[1]}};
    }
    FlowState operator*(double s) const { return {phi * s, J * s, {H[0] * s, H[1] * s}}; }
};

FlowState rhs(const NumericField& X, const FlowState& s) {
    const double x = s.phi(0), y = s.phi(1);
    FlowState d;
    Eigen::Matrix2d DX;
    for (int k = 0; k < 2; ++k) {
        d.phi(k) = X.eval(X.f[k], x, y);
        for (int l = 0; l < 2; ++l) DX(k, l) = X.eval(X.df[k][l], x, y);
    }
    d.J = DX * s.J;
    for (int c = 0; c < 2; ++c) {
        Eigen::Matrix2d D2;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) D2(a, b) = X.eval(X.ddf[c][a][b], x, y);
        d.H[c] = s.J.transpose() * D2 * s.J;
        for (int a = 0; a < 2; ++a) d.H[c] += DX(c, a) * s.H[a];
    }
    return d;
}

FlowState integrate(const NumericField& X, FlowState s, double t, double max_step) {
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / max_step)));
    const double dt = t / steps;
    for (int n = 0; n < steps; ++n) {
        FlowState k1 = rhs(X, s);
        FlowState k2 = rhs(X, s + k1 * (dt / 2));
        FlowState k3 = rhs(X, s + k2 * (dt / 2));
        FlowState k4 = rhs(X, s + k3 * dt);
        s = s + (k1 + k2 * 2 + k3 * 2 + k4) * (dt / 6);
    }
    return s;
}

// Symbols of the pulled-back connection at p after flowing for time t.
std::array<double, 8> pulled_back(const NumericField& X, const Christoffel& G, double px, double py, double t,
                                  double max_step) {
    FlowState s0{{px, py}, Eigen::Matrix2d::Identity(), {Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()}};
    FlowState s = integrate(X, s0, t, max_step);
    std::array<Eigen::Matrix2d, 2> Gq;  // Gq[c](a, b) = G^c_ab at phi
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) Gq[c](a, b) = X.eval(G(a, b, c), s.phi(0), s.phi(1));
    const Eigen::Matrix2d Jinv = s.J.inverse();
    std::array<double, 8> out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Eigen::Vector2d w;
            for (int c = 0; c < 2; ++c) w(c) = s.H[c](i, j) + s.J.col(i).dot(Gq[c] * s.J.col(j));
            Eigen::Vector2d v = Jinv * w;
            for (int k = 0; k < 2; ++k) out[Christoffel::flat(i, j, k)] = v(k);
        }
    return out;
}

}  // namespace

std::array<double, 8> numeric_flow_oracle(const VectorField& Xf, const Christoffel& G, double px, double py,
                                          const std::map<std::string, double>& params,
                                          const FlowOracleOptions& opt) {
    NumericField X;
    X.params = params;
    for (int k = 0; k < 2; ++k) {
        X.f[k] = Xf[k];
        for (int l = 0; l < 2; ++l) {
            X.df[k][l] = Xf[k].differentiate(kVars[l]);
            for (int m = 0; m < 2; ++m) X.ddf[k][l][m] = X.df[k][l].differentiate(kVars[m]);
        }
    }
    auto central = [&](double h) {
        auto plus = pulled_back(X, G, px, py, h, opt.t_step);
        auto minus = pulled_back(X, G, px, py, -h, opt.t_step);
        std::array<double, 8> d{};
        for (std::size_t n = 0; n < 8; ++n) d[n] = (plus[n] - minus[n]) / (2 * h);
        return d;
    };
    // One Richardson step removes the h^2 term of the central difference.
    auto coarse = central(opt.h);
    auto fine = central(opt.h / 2);
    std::array<double, 8> out{};
    for (std::size_t n = 0; n < 8; ++n) out[n] = (4 * fine[n] - coarse[n]) / 3;
    return out;
}

}  // namespace invcnx
