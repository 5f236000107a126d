#pragma once

#include "foliation/expr.hpp"
#include "foliation/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace foliation {

// Holomorphic vector field with polynomial (or expression) components on a polydisc.
class PolyVectorField {
public:
    PolyVectorField(std::vector<Scalar> components, Polydisc domain);
    static PolyVectorField from_polynomials(const std::vector<Polynomial>& components, Polydisc domain);
    static PolyVectorField parse(std::string_view literal, Polydisc domain);

    int dim() const { return static_cast<int>(components_.size()); }
    const Polydisc& domain() const { return domain_; }
    const Scalar& component(int i) const { return components_[i]; }
    const Scalar& partial(int i, int j) const { return partials_[i * dim() + j]; }
    bool is_polynomial() const;

    // Raw evaluation without domain checks.
    Tangent operator()(const Point& p) const;
    CMatrix jacobian_matrix(const Point& p) const;

    // Per-component upper bound of |X_i| on the polydisc of radius rho around z, when available.
    std::optional<RVector> majorant(const Point& z, double rho) const;

    PolyVectorField with_domain(Polydisc domain) const;
    std::string to_string() const;

private:
    std::vector<Scalar> components_;
    std::vector<Scalar> partials_;
    Polydisc domain_;
};

// a*X + b*Y for polynomial fields on the same domain.
PolyVectorField linear_combination(Complex a, const PolyVectorField& x, Complex b, const PolyVectorField& y);

struct FieldValue {
    Tangent value;
    bool outside_domain = false;
};

FieldValue eval_field(const PolyVectorField& field, const Point& p);

struct JacobianResult {
    CMatrix matrix;
    CVector eigenvalues;
    // For n = 2: ratio of the second eigenvalue to the first; empty when the first vanishes.
    std::optional<Complex> index;
};

JacobianResult jacobian(const PolyVectorField& field, const Point& p);

enum class NormalFormKind { linearizable, resonant_negative, poincare_dulac, pd_swapped };

struct NormalFormParams {
    Complex alpha = 0.0;          // linearizable, resonant_negative (real negative)
    Polynomial f{2};              // resonant_negative: truncation divisible by x and y
    int n = 1;                    // poincare_dulac, pd_swapped
    Complex a = 0.0;              // poincare_dulac, pd_swapped
};

PolyVectorField normal_form(NormalFormKind kind, const NormalFormParams& params);

PolyVectorField linearizable_form(Complex alpha);
PolyVectorField resonant_negative_form(double alpha, const Polynomial& f);
PolyVectorField poincare_dulac_form(int n, Complex a);
PolyVectorField pd_swapped_form(int n, Complex a);

}  // namespace foliation
