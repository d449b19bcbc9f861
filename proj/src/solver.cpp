#include "invcnx/solver.hpp"

#include <algorithm>
#include <sstream>

#include "invcnx/errors.hpp"

namespace invcnx {

namespace {

EndValuedOneForm unit_tensor(std::size_t component, const Expr& e) {
    EndValuedOneForm t;
    t.t[component] = e;
    return t;
}

template <class Tag>
ThreeIndex<Tag> combine(const Ansatz& ansatz, const std::vector<ParamScalar>& coeffs) {
    ThreeIndex<Tag> r;
    for (std::size_t c = 0; c < ansatz.columns.size(); ++c)
        if (!coeffs[c].is_zero()) r.t[ansatz.columns[c].component] += Expr(coeffs[c]) * ansatz.columns[c].basis;
    return r;
}

// Keeps the candidates that are linearly independent of the ones before.
std::vector<Expr> independent_subset(const std::vector<Expr>& candidates) {
    auto rows = coefficient_rows(candidates);
    std::vector<SparseRow<ParamScalar>> vecs(candidates.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (!rows[r].coeffs[i].is_zero()) vecs[i].entries.emplace(static_cast<int>(r), rows[r].coeffs[i]);
    auto e = eliminate(vecs, static_cast<int>(rows.size()));
    std::vector<std::size_t> keep = e.pivot_rows;
    std::sort(keep.begin(), keep.end());
    std::vector<Expr> out;
    for (std::size_t i : keep) out.push_back(candidates[i]);
    return out;
}

bool contains_translation(const LieAlgebraAction& g, int k) {
    VectorField t;
    t[k] = Expr(1);
    return span_coefficients(g.generators, t).has_value();
}

std::optional<ParamScalar> generator_exp_rate(const LieAlgebraAction& g) {
    for (const auto& X : g.generators)
        for (int k = 0; k < 2; ++k)
            if (X[k].has_exp()) return X[k].exp_rate();
    return std::nullopt;
}

// Linear factors (alpha - r) for rational roots r, then the remaining cofactor.
std::vector<Polynomial> split_factor(const Polynomial& p) {
    std::vector<Polynomial> out;
    Polynomial rest = p.monic();
    if (rest.variables().size() == 1) {
        const std::string v = *rest.variables().begin();
        for (const Rational& r : rational_roots(rest)) {
            Polynomial lin = Polynomial::var(v) - Polynomial(r);
            while (auto q = rest.exact_divide(lin)) rest = *q;
            out.push_back(lin);
        }
    }
    if (!rest.is_constant()) out.push_back(rest.monic());
    return out;
}

bool all_constant(const AffineSystem& sys) {
    for (const auto& r : sys.rows) {
        if (!r.rhs.is_constant()) return false;
        for (const auto& [c, v] : r.entries)
            if (!v.is_constant()) return false;
    }
    return true;
}

struct Reduced {
    bool consistent = true;
    std::size_t bad_row = 0;
    ParamScalar bad_value;
    std::vector<ParamScalar> particular;
    std::vector<std::vector<ParamScalar>> kernel;
    std::vector<ParamScalar> pivots;
};

template <class F>
Reduced reduce(const std::vector<SparseRow<F>>& rows, int ncols) {
    auto e = eliminate(rows, ncols);
    Reduced out;
    auto lift = [](const std::vector<F>& v) { return std::vector<ParamScalar>(v.begin(), v.end()); };
    out.pivots = lift(e.pivot_values);
    if (!e.consistent()) {
        out.consistent = false;
        out.bad_row = *e.inconsistent_row;
        out.bad_value = ParamScalar(e.inconsistent_value);
        return out;
    }
    out.particular = lift(particular_solution(e, ncols));
    for (const auto& v : kernel_basis(e, ncols)) out.kernel.push_back(lift(v));
    return out;
}

Reduced reduce_system(const AffineSystem& sys) {
    if (!all_constant(sys)) return reduce(sys.rows, sys.ncols);
    std::vector<SparseRow<Rational>> rows;
    rows.reserve(sys.rows.size());
    for (const auto& r : sys.rows) {
        SparseRow<Rational> q;
        for (const auto& [c, v] : r.entries) q.entries.emplace(c, v.constant_value());
        q.rhs = r.rhs.constant_value();
        rows.push_back(std::move(q));
    }
    return reduce(rows, sys.ncols);
}

std::optional<AffineSystem> substitute_system(const AffineSystem& sys, const std::string& param, const Rational& v) {
    AffineSystem out;
    out.ncols = sys.ncols;
    out.labels = sys.labels;
    try {
        for (const auto& r : sys.rows) {
            SparseRow<ParamScalar> q;
            for (const auto& [c, e] : r.entries) {
                ParamScalar s = e.substitute(param, v);
                if (!s.is_zero()) q.entries.emplace(c, s);
            }
            q.rhs = r.rhs.substitute(param, v);
            out.rows.push_back(std::move(q));
        }
    } catch (const ParamSingular&) {
        return std::nullopt;
    }
    return out;
}

}  // namespace

std::string to_string(AnsatzProfile::Kind k) {
    switch (k) {
        case AnsatzProfile::Kind::Auto: return "auto";
        case AnsatzProfile::Kind::Constants: return "constants";
        case AnsatzProfile::Kind::LaurentY: return "laurent-y";
        case AnsatzProfile::Kind::LaurentX: return "laurent-x";
        case AnsatzProfile::Kind::Mixed: return "mixed";
    }
    return "?";
}

std::vector<std::string> Ansatz::unknowns() const {
    std::vector<std::string> names;
    for (std::size_t c = 0; c < columns.size(); ++c) names.push_back("u" + std::to_string(c + 1));
    return names;
}

Christoffel Ansatz::template_symbols() const {
    Christoffel r;
    auto names = unknowns();
    for (std::size_t c = 0; c < columns.size(); ++c)
        r.t[columns[c].component] += Expr(ParamScalar::param(names[c])) * columns[c].basis;
    return r;
}

Christoffel Ansatz::instantiate(const std::vector<ParamScalar>& coeffs) const {
    return combine<ChristoffelTag>(*this, coeffs);
}

Ansatz build_ansatz(const LieAlgebraAction& g, const AnsatzProfile& profile) {
    for (const auto& X : g.generators)
        for (int k = 0; k < 2; ++k)
            for (const auto& [m, part] : X[k].parts())
                if (part.denominator != std::array<int, 4>{})
                    throw ProfileUnsupported("generator " + X.to_string() + " has a pole");

    Ansatz a;
    a.kind = profile.kind;
    if (a.kind == AnsatzProfile::Kind::Auto) {
        const bool tx = contains_translation(g, 0);
        const bool ty = contains_translation(g, 1);
        if (tx && ty) a.kind = AnsatzProfile::Kind::Constants;
        else if (tx) a.kind = AnsatzProfile::Kind::LaurentY;
        else if (ty) a.kind = AnsatzProfile::Kind::LaurentX;
        else a.kind = AnsatzProfile::Kind::Mixed;
    }
    const int w = profile.window;
    std::vector<Expr> basis;
    std::ostringstream desc;
    switch (a.kind) {
        case AnsatzProfile::Kind::Constants:
            basis.push_back(Expr(1));
            desc << "constants";
            break;
        case AnsatzProfile::Kind::LaurentY:
            for (int p = -w; p <= w; ++p) basis.push_back(Expr::atom_power(Atom::Y, p));
            desc << "y^p, p in [" << -w << ", " << w << "]";
            break;
        case AnsatzProfile::Kind::LaurentX: {
            auto rate = generator_exp_rate(g);
            const int mw = rate ? profile.exp_window : 0;
            for (int m = -mw; m <= mw; ++m)
                for (int p = -w; p <= w; ++p) {
                    Expr e = Expr::atom_power(Atom::X, p);
                    if (m != 0) e *= Expr::exp_ax(*rate, m);
                    basis.push_back(e);
                }
            desc << "x^p, p in [" << -w << ", " << w << "]";
            if (rate) desc << " times exp(" << rate->to_string() << "*x)^m, m in [" << -mw << ", " << mw << "]";
            break;
        }
        case AnsatzProfile::Kind::Mixed: {
            std::vector<Expr> cand;
            for (int c = 0; c >= -w; --c)
                for (int i = 0; i <= 2; ++i)
                    for (int j = 0; j <= 2; ++j)
                        cand.push_back(Expr::x().pow(i) * Expr::y().pow(j) * Expr::atom_power(profile.mixed_atom, c));
            basis = independent_subset(cand);
            desc << "x^a y^b " << atom_name(profile.mixed_atom) << "^c, a, b in [0, 2], c in [" << -w
                 << ", 0], " << basis.size() << " independent";
            break;
        }
        case AnsatzProfile::Kind::Auto: break;
    }
    for (std::size_t n = 0; n < 8; ++n)
        for (const auto& b : basis) a.columns.push_back({n, b});
    a.description = desc.str();
    return a;
}

std::string RowLabel::to_string() const {
    std::string mono = monomial.is_one() ? "1" : monomial.to_string();
    return "generator " + std::to_string(generator + 1) + ", (L nabla)" + component_label(component).substr(1) +
           ", coefficient of " + mono;
}

AffineSystem assemble_system(const LieAlgebraAction& g, const Ansatz& ansatz) {
    AffineSystem sys;
    sys.ncols = static_cast<int>(ansatz.columns.size());
    const std::size_t nc = ansatz.columns.size();
    for (std::size_t a = 0; a < g.generators.size(); ++a) {
        const VectorField& A = g.generators[a];
        EndValuedOneForm inhomogeneous = lie_derivative_connection(A, Christoffel{});
        std::vector<EndValuedOneForm> images;
        images.reserve(nc);
        for (const auto& col : ansatz.columns)
            images.push_back(lie_derivative_tensor(A, unit_tensor(col.component, col.basis)));
        for (std::size_t m = 0; m < 8; ++m) {
            std::vector<Expr> family;
            family.reserve(nc + 1);
            bool any = !inhomogeneous.t[m].is_zero();
            for (const auto& img : images) {
                family.push_back(img.t[m]);
                any = any || !img.t[m].is_zero();
            }
            if (!any) continue;
            family.push_back(inhomogeneous.t[m]);
            for (const auto& cr : coefficient_rows(family)) {
                SparseRow<ParamScalar> row;
                for (std::size_t c = 0; c < nc; ++c)
                    if (!cr.coeffs[c].is_zero()) row.entries.emplace(static_cast<int>(c), cr.coeffs[c]);
                row.rhs = -cr.coeffs[nc];
                sys.rows.push_back(std::move(row));
                sys.labels.push_back({a, m, cr.monomial});
            }
        }
    }
    return sys;
}

std::string InconsistencyCertificate::to_string(const LieAlgebraAction* g) const {
    std::string s = row.to_string();
    if (g && row.generator < g->generators.size()) s += " [" + g->generators[row.generator].to_string() + "]";
    return s + ": reduces to " + value.to_string() + " = 0";
}

bool SolutionSpace::contains(const Christoffel& G) const {
    if (empty) return false;
    std::vector<SparseRow<ParamScalar>> rows;
    const int n = static_cast<int>(basis.size());
    for (std::size_t m = 0; m < 8; ++m) {
        std::vector<Expr> family;
        for (const auto& b : basis) family.push_back(b.t[m]);
        family.push_back(G.t[m] - particular.t[m]);
        for (const auto& cr : coefficient_rows(family)) {
            SparseRow<ParamScalar> r;
            for (int c = 0; c < n; ++c)
                if (!cr.coeffs[static_cast<std::size_t>(c)].is_zero())
                    r.entries.emplace(c, cr.coeffs[static_cast<std::size_t>(c)]);
            r.rhs = cr.coeffs.back();
            rows.push_back(std::move(r));
        }
    }
    return eliminate(rows, n).consistent();
}

SolutionSpace solve_affine(const AffineSystem& sys, const Ansatz& ansatz, const SolveOptions& opt) {
    Reduced red = reduce_system(sys);
    SolutionSpace out;
    for (const auto& p : red.pivots) {
        if (p.is_constant()) continue;
        for (const auto& f : split_factor(p.numerator()))
            if (std::find(out.pivot_denominators.begin(), out.pivot_denominators.end(), f) ==
                out.pivot_denominators.end())
                out.pivot_denominators.push_back(f);
    }
    if (!red.consistent) {
        out.empty = true;
        out.certificate = InconsistencyCertificate{sys.labels[red.bad_row], red.bad_value};
    } else {
        out.particular = ansatz.instantiate(red.particular);
        for (const auto& k : red.kernel) out.basis.push_back(combine<OneFormTag>(ansatz, k));
        std::set<std::string> notes;
        auto collect = [&](const auto& t) {
            for (const auto& e : t.t)
                for (const auto& s : e.domain_notes()) notes.insert(s);
        };
        collect(out.particular);
        for (const auto& b : out.basis) collect(b);
        out.domain_notes.assign(notes.begin(), notes.end());
    }
    if (opt.probe_exceptional) {
        for (const auto& f : out.pivot_denominators) {
            if (f.variables().size() != 1 || f.degree(*f.variables().begin()) != 1) continue;
            const std::string v = *f.variables().begin();
            const Rational root = rational_roots(f).front();
            auto sub = substitute_system(sys, v, root);
            if (!sub) continue;
            Reduced r = reduce_system(*sub);
            ExceptionalValue ev{v, root, !r.consistent, r.consistent ? r.kernel.size() : 0};
            if (ev.empty != out.empty || ev.dimension != out.dimension()) out.exceptional.push_back(ev);
        }
        std::sort(out.exceptional.begin(), out.exceptional.end(),
                  [](const auto& a, const auto& b) { return std::tie(a.param, a.value) < std::tie(b.param, b.value); });
    }
    return out;
}

SolutionSpace invariant_connection_space(const LieAlgebraAction& g, const AnsatzProfile& profile,
                                         const SolveOptions& opt) {
    Ansatz a = build_ansatz(g, profile);
    return solve_affine(assemble_system(g, a), a, opt);
}

Eigen::Matrix<ParamScalar, Eigen::Dynamic, Eigen::Dynamic> case1_matrix() {
    const std::set<std::string> params{"alpha"};
    VectorField X = parse_vector_field("(alpha*x + y) dx + (alpha*y - x) dy", params);
    Eigen::Matrix<ParamScalar, Eigen::Dynamic, Eigen::Dynamic> m(8, 8);
    for (std::size_t c = 0; c < 8; ++c) {
        EndValuedOneForm img = lie_derivative_tensor(X, unit_tensor(c, Expr(1)));
        for (std::size_t n = 0; n < 8; ++n)
            m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) =
                img.t[n].is_zero() ? ParamScalar() : img.t[n].constant_value();
    }
    return m;
}

ParamScalar case1_determinant() { return bareiss_determinant(case1_matrix()); }

CharacterizationResult verify_characterization(int case_id, const LieAlgebraAction& g, const Expr& xi,
                                               const Christoffel& sample) {
    CharacterizationResult res;
    std::vector<std::size_t> zero;
    Var frozen = Var::X;
    bool relation = false;
    switch (case_id) {
        case 9: break;
        case 10: zero = {0, 1, 3, 5, 6}; break;
        case 20:
            frozen = Var::Y;
            zero = {Christoffel::flat(1, 1, 0), Christoffel::flat(1, 0, 0), Christoffel::flat(0, 1, 0),
                    Christoffel::flat(1, 1, 1)};
            relation = true;
            break;
        case 21:
            frozen = Var::Y;
            zero = {Christoffel::flat(1, 1, 0), Christoffel::flat(1, 0, 0), Christoffel::flat(0, 1, 0),
                    Christoffel::flat(1, 1, 1), Christoffel::flat(0, 0, 1)};
            relation = true;
            break;
        default: throw UnknownCase("no characterization for case " + std::to_string(case_id));
    }
    const std::string other = frozen == Var::X ? "x" : "y";
    for (std::size_t n = 0; n < 8 && res.violated.empty(); ++n) {
        if (std::find(zero.begin(), zero.end(), n) != zero.end()) {
            if (!sample.t[n].is_zero()) res.violated = component_label(n) + " = 0";
        } else if (!sample.t[n].differentiate(frozen).is_zero()) {
            res.violated = component_label(n) + " independent of " + other;
        }
    }
    if (res.violated.empty() && relation) {
        Expr d1 = xi.differentiate(Var::X);
        Expr lhs = sample(0, 1, 1) + sample(1, 0, 1) - sample(0, 0, 0);
        if (!(lhs * d1 + d1.differentiate(Var::X)).is_zero())
            res.violated = "G[1][2][2] + G[2][1][2] - G[1][1][1] = -xi''/xi'";
    }
    res.relations_hold = res.violated.empty();
    InvarianceReport rep = verify_invariance(g, sample);
    res.invariant = rep.invariant();
    if (res.relations_hold && !res.invariant) res.violated = "invariance: " + rep.to_string(g);
    return res;
}

}  // namespace invcnx
