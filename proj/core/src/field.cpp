#include "foliation/field.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace foliation {

PolyVectorField::PolyVectorField(std::vector<Scalar> components, Polydisc domain)
    : components_(std::move(components)), domain_(std::move(domain))
{
    const int n = dim();
    if (n == 0) throw std::invalid_argument("vector field needs at least one component");
    if (domain_.dim() != n) throw std::invalid_argument("field dimension does not match its domain");
    for (const auto& c : components_)
        if (c.nvars() != n) throw std::invalid_argument("component uses a different number of variables");
    partials_.reserve(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) partials_.push_back(components_[i].derivative(j));
}

PolyVectorField PolyVectorField::from_polynomials(const std::vector<Polynomial>& components, Polydisc domain)
{
    std::vector<Scalar> s(components.begin(), components.end());
    return PolyVectorField(std::move(s), std::move(domain));
}

PolyVectorField PolyVectorField::parse(std::string_view literal, Polydisc domain)
{
    return PolyVectorField(parse_components(literal), std::move(domain));
}

bool PolyVectorField::is_polynomial() const
{
    for (const auto& c : components_)
        if (!c.is_polynomial()) return false;
    return true;
}

Tangent PolyVectorField::operator()(const Point& p) const
{
    if (p.size() != dim()) throw std::invalid_argument("point dimension does not match the field");
    Tangent v(dim());
    for (int i = 0; i < dim(); ++i) v(i) = components_[i](p);
    return v;
}

CMatrix PolyVectorField::jacobian_matrix(const Point& p) const
{
    if (p.size() != dim()) throw std::invalid_argument("point dimension does not match the field");
    const int n = dim();
    CMatrix J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = partials_[i * n + j](p);
    return J;
}

std::optional<RVector> PolyVectorField::majorant(const Point& z, double rho) const
{
    const RVector abs_z = z.cwiseAbs();
    RVector m(dim());
    for (int i = 0; i < dim(); ++i) {
        auto b = components_[i].majorant(abs_z, rho);
        if (!b) return std::nullopt;
        m(i) = *b;
    }
    return m;
}

PolyVectorField PolyVectorField::with_domain(Polydisc domain) const { return PolyVectorField(components_, std::move(domain)); }

std::string PolyVectorField::to_string() const
{
    std::string out;
    for (int i = 0; i < dim(); ++i) out += (i ? " ; " : "") + components_[i].to_string();
    return out;
}

PolyVectorField linear_combination(Complex a, const PolyVectorField& x, Complex b, const PolyVectorField& y)
{
    if (x.dim() != y.dim()) throw std::invalid_argument("field dimension mismatch");
    std::vector<Scalar> comps;
    for (int i = 0; i < x.dim(); ++i) {
        const auto* px = x.component(i).polynomial();
        const auto* py = y.component(i).polynomial();
        if (px && py) {
            comps.emplace_back(px->scaled(a) + py->scaled(b));
        } else {
            comps.emplace_back(Expr::constant(a) * x.component(i).as_expr() + Expr::constant(b) * y.component(i).as_expr(),
                               x.dim());
        }
    }
    return PolyVectorField(std::move(comps), x.domain());
}

FieldValue eval_field(const PolyVectorField& field, const Point& p)
{
    if (p.size() != field.dim())
        throw std::invalid_argument(fmt::format("dimension mismatch: field has n={}, point has {}", field.dim(), p.size()));
    return {field(p), !field.domain().contains(p)};
}

namespace {

bool is_triangular(const CMatrix& m)
{
    bool upper = true, lower = true;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i > j && m(i, j) != Complex(0.0)) upper = false;
            if (i < j && m(i, j) != Complex(0.0)) lower = false;
        }
    return upper || lower;
}

}  // namespace

JacobianResult jacobian(const PolyVectorField& field, const Point& p)
{
    JacobianResult r;
    r.matrix = field.jacobian_matrix(p);
    if (is_triangular(r.matrix)) {
        // keep the coordinate order so the index reads off the normal form directly
        r.eigenvalues = r.matrix.diagonal();
    } else {
        Eigen::ComplexEigenSolver<CMatrix> es(r.matrix, false);
        r.eigenvalues = es.eigenvalues();
    }
    if (field.dim() == 2 && r.eigenvalues(0) != Complex(0.0)) r.index = r.eigenvalues(1) / r.eigenvalues(0);
    return r;
}

namespace {

bool is_positive_integer(Complex c)
{
    if (c.imag() != 0.0 || c.real() < 1.0) return false;
    return std::abs(c.real() - std::round(c.real())) == 0.0;
}

Polynomial var2(int j) { return Polynomial::variable(2, j); }

}  // namespace

PolyVectorField linearizable_form(Complex alpha)
{
    if (alpha == Complex(0.0)) throw std::invalid_argument("linearizable form: index must be nonzero");
    if (alpha.imag() == 0.0 && alpha.real() < 0.0)
        throw std::invalid_argument("linearizable form: index must not be a negative real");
    if (is_positive_integer(alpha) || is_positive_integer(1.0 / alpha))
        throw std::invalid_argument("linearizable form: index and its inverse must not be positive integers");
    return PolyVectorField::from_polynomials({var2(0), var2(1).scaled(alpha)}, Polydisc::unit(2));
}

PolyVectorField resonant_negative_form(double alpha, const Polynomial& f)
{
    if (!(alpha < 0.0)) throw std::invalid_argument("resonant form: index must be a negative real");
    if (f.nvars() != 2) throw std::invalid_argument("resonant form: f must be a polynomial in x, y");
    if (!f.divisible_by_monomial({1, 0}) || !f.divisible_by_monomial({0, 1}))
        throw std::invalid_argument("resonant form: f must be divisible by both x and y");
    const Polynomial one = Polynomial::constant(2, 1.0);
    return PolyVectorField::from_polynomials({var2(0), (var2(1) * (one + f)).scaled(alpha)}, Polydisc::unit(2));
}

PolyVectorField poincare_dulac_form(int n, Complex a)
{
    if (n < 1) throw std::invalid_argument("Poincare-Dulac form: n must be a positive integer");
    Polynomial second = var2(1).scaled(static_cast<double>(n)) + Polynomial::monomial(2, {n, 0}, a);
    return PolyVectorField::from_polynomials({var2(0), second}, Polydisc::unit(2));
}

PolyVectorField pd_swapped_form(int n, Complex a)
{
    if (n < 1) throw std::invalid_argument("Poincare-Dulac form: n must be a positive integer");
    Polynomial first = var2(0).scaled(static_cast<double>(n)) + Polynomial::monomial(2, {0, n}, a);
    return PolyVectorField::from_polynomials({first, var2(1)}, Polydisc::unit(2));
}

PolyVectorField normal_form(NormalFormKind kind, const NormalFormParams& params)
{
    switch (kind) {
    case NormalFormKind::linearizable: return linearizable_form(params.alpha);
    case NormalFormKind::resonant_negative:
        if (params.alpha.imag() != 0.0) throw std::invalid_argument("resonant form: index must be real");
        return resonant_negative_form(params.alpha.real(), params.f);
    case NormalFormKind::poincare_dulac: return poincare_dulac_form(params.n, params.a);
    case NormalFormKind::pd_swapped: return pd_swapped_form(params.n, params.a);
    }
    throw std::invalid_argument("unknown normal form");
}

}  // namespace foliation
