#pragma once

#include "foliation/types.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace foliation {

// Sparse polynomial in n complex variables; zero coefficients are never stored.
class Polynomial {
public:
    using Exponent = std::vector<int>;

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(int nvars, Complex c);
    static Polynomial variable(int nvars, int j);
    static Polynomial monomial(int nvars, Exponent e, Complex c = 1.0);

    int nvars() const { return nvars_; }
    const std::map<Exponent, Complex>& terms() const { return terms_; }
    void add_term(const Exponent& e, Complex c);

    Complex operator()(const CVector& z) const;
    Polynomial derivative(int j) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const { return scaled(-1.0); }
    Polynomial scaled(Complex c) const;
    Polynomial pow(int k) const;

    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    int degree() const;
    double max_abs_coefficient() const;
    // True iff every term's exponent dominates `e` componentwise.
    bool divisible_by_monomial(const Exponent& e) const;

    // Upper bound of |p| on the polydisc of radius rho about a point with |z_j| = abs_center_j.
    double majorant(const RVector& abs_center, double rho) const;

    std::string to_string() const;

private:
    int nvars_ = 0;
    std::map<Exponent, Complex> terms_;
};

// Immutable expression tree with symbolic differentiation.
class Expr {
public:
    enum class Kind { constant, variable, add, sub, mul, div, neg, pow, exp };

    Expr();  // the constant 0
    static Expr constant(Complex c);
    static Expr variable(int j);
    static Expr from_polynomial(const Polynomial& p);

    Kind kind() const;
    Complex evaluate(const CVector& z) const;
    Expr derivative(int j) const;
    std::optional<Polynomial> to_polynomial(int nvars) const;
    std::optional<double> majorant(const RVector& abs_center, double rho) const;
    std::optional<Complex> constant_value() const;
    int max_variable() const;  // -1 when constant
    std::string to_string() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& a, int k);
    friend Expr exp(const Expr& a);

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Scalar component: a polynomial when possible, a general expression otherwise.
class Scalar {
public:
    Scalar() : Scalar(Polynomial(0)) {}
    Scalar(Polynomial p);  // NOLINT(google-explicit-constructor)
    Scalar(const Expr& e, int nvars);

    int nvars() const { return nvars_; }
    Complex operator()(const CVector& z) const;
    Scalar derivative(int j) const;
    bool is_polynomial() const { return std::holds_alternative<Polynomial>(rep_); }
    const Polynomial* polynomial() const { return std::get_if<Polynomial>(&rep_); }
    const Expr* expression() const { return std::get_if<Expr>(&rep_); }
    Expr as_expr() const;
    std::optional<double> majorant(const RVector& abs_center, double rho) const;
    std::string to_string() const;

private:
    int nvars_ = 0;
    std::variant<Polynomial, Expr> rep_;
};

// Variables are x1..xn; for n <= 3 also x, y, z. Imaginary unit `i`, suffix form `2i`.
Expr parse_expression(std::string_view text, int nvars);
Scalar parse_scalar(std::string_view text, int nvars);
// Components separated by ';', dimension = number of components.
std::vector<Scalar> parse_components(std::string_view text);

std::string variable_name(int j, int nvars);

}  // namespace foliation
