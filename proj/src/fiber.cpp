#include "invcnx/fiber.hpp"

#include "invcnx/errors.hpp"
#include "invcnx/linear.hpp"

namespace invcnx {

namespace {

using Row = SparseRow<ParamScalar>;

void add(Row& r, int c, const ParamScalar& v) {
    if (v.is_zero()) return;
    ParamScalar& slot = r.entries[c];
    slot += v;
    if (slot.is_zero()) r.entries.erase(c);
}

// Row of the 0-jet at p of (L_X nabla)^k_ij in the fiber unknowns G(p):
// -G^l_ij J^k_l + G^k_lj J^l_i + G^k_il J^l_j = -H^k_ij.
Row fiber_row(const Jet2& jet, int i, int j, int k) {
    Row r;
    for (int l = 0; l < 2; ++l) {
        add(r, static_cast<int>(Christoffel::flat(i, j, l)), -jet.jacobian(k, l));
        add(r, static_cast<int>(Christoffel::flat(l, j, k)), jet.jacobian(l, i));
        add(r, static_cast<int>(Christoffel::flat(i, l, k)), jet.jacobian(l, j));
    }
    r.rhs = -jet.hessians[static_cast<std::size_t>(k)](i, j);
    return r;
}

std::vector<Jet2> jets_at(const LieAlgebraAction& g, const Point& p) {
    std::vector<Jet2> out;
    for (const auto& X : g.generators) out.push_back(jet2_at(X, p));
    return out;
}

Jet2 combine(const std::vector<Jet2>& jets, const std::vector<ParamScalar>& c) {
    Jet2 out;
    out.value.setConstant(ParamScalar(0));
    out.jacobian.setConstant(ParamScalar(0));
    for (auto& h : out.hessians) h.setConstant(ParamScalar(0));
    for (std::size_t a = 0; a < jets.size(); ++a) {
        if (c[a].is_zero()) continue;
        out.value += jets[a].value * c[a];
        out.jacobian += jets[a].jacobian * c[a];
        for (int k = 0; k < 2; ++k) out.hessians[k] += jets[a].hessians[k] * c[a];
    }
    return out;
}

std::vector<std::vector<ParamScalar>> isotropy_coefficients(const std::vector<Jet2>& jets, std::size_t* rank) {
    const int n = static_cast<int>(jets.size());
    std::vector<Row> rows(2);
    for (int k = 0; k < 2; ++k)
        for (int a = 0; a < n; ++a) add(rows[k], a, jets[static_cast<std::size_t>(a)].value(k));
    auto e = eliminate(rows, n);
    if (rank) *rank = e.rank();
    return kernel_basis(e, n);
}

std::vector<Row> isotropy_rows(const std::vector<Jet2>& iso, bool with_translation) {
    std::vector<Row> rows;
    for (const auto& jet : iso)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    Row r = fiber_row(jet, i, j, k);
                    if (!with_translation) r.rhs = ParamScalar(0);
                    if (!r.entries.empty() || !r.rhs.is_zero()) rows.push_back(std::move(r));
                }
    return rows;
}

FiberVector first8(const std::vector<ParamScalar>& v) {
    FiberVector out;
    for (std::size_t n = 0; n < 8; ++n) out[n] = v[n];
    return out;
}

std::vector<std::vector<ParamScalar>> as_rows(const std::vector<FiberVector>& vs) {
    std::vector<std::vector<ParamScalar>> out;
    for (const auto& v : vs) out.emplace_back(v.begin(), v.end());
    return out;
}

bool in_span(const std::vector<FiberVector>& basis, const FiberVector& v) {
    auto rows = as_rows(basis);
    std::size_t r0 = rank_of(rows);
    rows.emplace_back(v.begin(), v.end());
    return rank_of(rows) == r0;
}

FiberVector minus(const FiberVector& a, const FiberVector& b) {
    FiberVector out;
    for (std::size_t n = 0; n < 8; ++n) out[n] = a[n] - b[n];
    return out;
}

}  // namespace

FiberPoint fiber_value(const Christoffel& G, const Point& p) {
    FiberPoint out;
    for (std::size_t n = 0; n < 8; ++n) out.values[n] = G.t[n].value_at(p);
    return out;
}

bool is_transitive_at(const LieAlgebraAction& g, const Point& p) {
    std::size_t rank = 0;
    isotropy_coefficients(jets_at(g, p), &rank);
    return rank == 2;
}

std::vector<VectorField> isotropy_basis(const LieAlgebraAction& g, const Point& p) {
    std::vector<VectorField> out;
    for (const auto& c : isotropy_coefficients(jets_at(g, p), nullptr)) {
        VectorField X;
        for (std::size_t a = 0; a < c.size(); ++a)
            if (!c[a].is_zero()) X = X + Expr(c[a]) * g.generators[a];
        out.push_back(std::move(X));
    }
    return out;
}

IsotropyAction isotropy_action(const LieAlgebraAction& g, const Point& p) {
    IsotropyAction act{p, isotropy_basis(g, p), {}, {}};
    for (const auto& X : act.generators) {
        Jet2 jet = jet2_at(X, p);
        FiberMatrix m;
        m.setConstant(ParamScalar(0));
        FiberVector t;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    Row r = fiber_row(jet, i, j, k);
                    const auto n = static_cast<Eigen::Index>(Christoffel::flat(i, j, k));
                    for (const auto& [c, v] : r.entries) m(n, c) = v;
                    t[static_cast<std::size_t>(n)] = -r.rhs;
                }
        act.linear.push_back(std::move(m));
        act.translation.push_back(std::move(t));
    }
    return act;
}

bool FiberSpace::contains(const FiberPoint& v) const {
    if (empty) return false;
    return in_span(basis, minus(v.values, particular.values));
}

FiberSpace fiber_fixed_space(const LieAlgebraAction& g, const Point& p) {
    std::vector<Jet2> jets = jets_at(g, p);
    std::size_t rank = 0;
    auto coeffs = isotropy_coefficients(jets, &rank);
    if (rank != 2) throw NotTransitive("generator values at the base point have rank " + std::to_string(rank));

    std::vector<Jet2> iso;
    for (const auto& c : coeffs) iso.push_back(combine(jets, c));

    FiberSpace out;
    out.p = p;
    out.isotropy_dimension = iso.size();

    auto e1 = eliminate(isotropy_rows(iso, true), 8);
    out.linear_dimension = eliminate(isotropy_rows(iso, false), 8).free_columns.size();
    if (!e1.consistent()) {
        out.empty = true;
    } else {
        out.particular.values = first8(particular_solution(e1, 8));
        for (const auto& v : kernel_basis(e1, 8)) out.basis.push_back(first8(v));
    }

    // Second route: every generator, with the 16 first derivatives
    // d_l G_n(p) as unknowns in column 8 + 2n + l.
    std::vector<Row> rows;
    for (const auto& jet : jets)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    Row r = fiber_row(jet, i, j, k);
                    const int n = static_cast<int>(Christoffel::flat(i, j, k));
                    for (int l = 0; l < 2; ++l) add(r, 8 + 2 * n + l, jet.value(l));
                    rows.push_back(std::move(r));
                }
    auto e2 = eliminate(rows, 24);
    if (!e2.consistent()) {
        out.routes_agree = out.empty;
        return out;
    }
    if (out.empty) return out;
    FiberVector part2 = first8(particular_solution(e2, 24));
    std::vector<FiberVector> basis2;
    for (const auto& v : kernel_basis(e2, 24)) basis2.push_back(first8(v));
    bool agree = rank_of(as_rows(basis2)) == out.dimension() && out.contains(FiberPoint{part2});
    for (const auto& b : basis2) agree = agree && in_span(out.basis, b);
    out.routes_agree = agree;
    return out;
}

}  // namespace invcnx
