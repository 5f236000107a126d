#include "foliation/expr.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace foliation {

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(int nvars, Complex c)
{
    Polynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int j)
{
    if (j < 0 || j >= nvars) throw std::out_of_range("variable index out of range");
    Exponent e(nvars, 0);
    e[j] = 1;
    return monomial(nvars, e, 1.0);
}

Polynomial Polynomial::monomial(int nvars, Exponent e, Complex c)
{
    if (static_cast<int>(e.size()) != nvars) throw std::invalid_argument("exponent length must equal nvars");
    Polynomial p(nvars);
    p.add_term(e, c);
    return p;
}

void Polynomial::add_term(const Exponent& e, Complex c)
{
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent length must equal nvars");
    for (int k : e)
        if (k < 0) throw std::invalid_argument("negative exponent");
    if (c == Complex(0.0)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
}

Complex Polynomial::operator()(const CVector& z) const
{
    if (z.size() != nvars_) throw std::invalid_argument("polynomial evaluated at point of wrong dimension");
    Complex sum = 0.0;
    for (const auto& [e, c] : terms_) {
        Complex t = c;
        for (int j = 0; j < nvars_; ++j)
            for (int k = 0; k < e[j]; ++k) t *= z(j);
        sum += t;
    }
    return sum;
}

Polynomial Polynomial::derivative(int j) const
{
    Polynomial d(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[j] == 0) continue;
        Exponent f = e;
        f[j] -= 1;
        d.add_term(f, c * static_cast<double>(e[j]));
    }
    return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const
{
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const
{
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r(nvars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Exponent e(nvars_);
            for (int j = 0; j < nvars_; ++j) e[j] = e1[j] + e2[j];
            r.add_term(e, c1 * c2);
        }
    return r;
}

Polynomial Polynomial::scaled(Complex c) const
{
    Polynomial r(nvars_);
    for (const auto& [e, v] : terms_) r.add_term(e, v * c);
    return r;
}

Polynomial Polynomial::pow(int k) const
{
    if (k < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial r = constant(nvars_, 1.0);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

int Polynomial::degree() const
{
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int k : e) s += k;
        d = std::max(d, s);
    }
    return d;
}

double Polynomial::max_abs_coefficient() const
{
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

bool Polynomial::divisible_by_monomial(const Exponent& e) const
{
    for (const auto& [f, c] : terms_)
        for (int j = 0; j < nvars_; ++j)
            if (f[j] < e[j]) return false;
    return true;
}

double Polynomial::majorant(const RVector& abs_center, double rho) const
{
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = std::abs(c);
        for (int j = 0; j < nvars_; ++j)
            for (int k = 0; k < e[j]; ++k) t *= abs_center(j) + rho;
        sum += t;
    }
    return sum;
}

namespace {

std::string format_complex(Complex c)
{
    if (c.imag() == 0.0) return fmt::format("{:.17g}", c.real());
    if (c.real() == 0.0) return fmt::format("{:.17g}i", c.imag());
    return fmt::format("({:.17g}{:+.17g}i)", c.real(), c.imag());
}

}  // namespace

std::string Polynomial::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        std::string mono;
        for (int j = 0; j < nvars_; ++j) {
            if (e[j] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += variable_name(j, nvars_);
            if (e[j] > 1) mono += fmt::format("^{}", e[j]);
        }
        if (mono.empty())
            out += format_complex(c);
        else if (c == Complex(1.0))
            out += mono;
        else
            out += format_complex(c) + "*" + mono;
    }
    return out;
}

// ---------------------------------------------------------------------- Expr

struct Expr::Node {
    Kind kind;
    Complex value{};
    int index = 0;  // variable index or integer power
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(Complex c)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = c;
    return Expr(n);
}

Expr Expr::variable(int j)
{
    if (j < 0) throw std::out_of_range("variable index out of range");
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->index = j;
    return Expr(n);
}

Expr Expr::from_polynomial(const Polynomial& p)
{
    Expr sum = constant(0.0);
    for (const auto& [e, c] : p.terms()) {
        Expr t = constant(c);
        for (int j = 0; j < p.nvars(); ++j)
            if (e[j] > 0) t = t * pow(variable(j), e[j]);
        sum = sum + t;
    }
    return sum;
}

Expr::Kind Expr::kind() const { return node_->kind; }

std::optional<Complex> Expr::constant_value() const
{
    if (node_->kind == Kind::constant) return node_->value;
    return std::nullopt;
}

Expr operator+(const Expr& a, const Expr& b)
{
    auto ca = a.constant_value(), cb = b.constant_value();
    if (ca && cb) return Expr::constant(*ca + *cb);
    if (ca && *ca == Complex(0.0)) return b;
    if (cb && *cb == Complex(0.0)) return a;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::add;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
}

Expr operator-(const Expr& a, const Expr& b)
{
    auto ca = a.constant_value(), cb = b.constant_value();
    if (ca && cb) return Expr::constant(*ca - *cb);
    if (cb && *cb == Complex(0.0)) return a;
    if (ca && *ca == Complex(0.0)) return -b;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::sub;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
}

Expr operator*(const Expr& a, const Expr& b)
{
    auto ca = a.constant_value(), cb = b.constant_value();
    if (ca && cb) return Expr::constant(*ca * *cb);
    if ((ca && *ca == Complex(0.0)) || (cb && *cb == Complex(0.0))) return Expr::constant(0.0);
    if (ca && *ca == Complex(1.0)) return b;
    if (cb && *cb == Complex(1.0)) return a;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::mul;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
}

Expr operator/(const Expr& a, const Expr& b)
{
    auto ca = a.constant_value(), cb = b.constant_value();
    if (cb && *cb == Complex(0.0)) throw std::domain_error("division by constant zero");
    if (ca && cb) return Expr::constant(*ca / *cb);
    if (ca && *ca == Complex(0.0)) return Expr::constant(0.0);
    if (cb && *cb == Complex(1.0)) return a;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::div;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
}

Expr operator-(const Expr& a)
{
    if (auto c = a.constant_value()) return Expr::constant(-*c);
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::neg;
    n->a = a.node_;
    return Expr(n);
}

Expr pow(const Expr& a, int k)
{
    if (k == 0) return Expr::constant(1.0);
    if (k == 1) return a;
    if (auto c = a.constant_value()) return Expr::constant(std::pow(*c, k));
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::pow;
    n->a = a.node_;
    n->index = k;
    return Expr(n);
}

Expr exp(const Expr& a)
{
    if (auto c = a.constant_value()) return Expr::constant(std::exp(*c));
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::exp;
    n->a = a.node_;
    return Expr(n);
}

namespace {

Complex eval_node(const Expr::Node& n, const CVector& z)
{
    using K = Expr::Kind;
    switch (n.kind) {
    case K::constant: return n.value;
    case K::variable:
        if (n.index >= z.size()) throw std::invalid_argument("expression variable exceeds point dimension");
        return z(n.index);
    case K::add: return eval_node(*n.a, z) + eval_node(*n.b, z);
    case K::sub: return eval_node(*n.a, z) - eval_node(*n.b, z);
    case K::mul: return eval_node(*n.a, z) * eval_node(*n.b, z);
    case K::div: return eval_node(*n.a, z) / eval_node(*n.b, z);
    case K::neg: return -eval_node(*n.a, z);
    case K::pow: {
        const Complex base = eval_node(*n.a, z);
        Complex r = 1.0;
        const int k = std::abs(n.index);
        for (int i = 0; i < k; ++i) r *= base;
        return n.index < 0 ? 1.0 / r : r;
    }
    case K::exp: return std::exp(eval_node(*n.a, z));
    }
    return 0.0;
}

}  // namespace

Complex Expr::evaluate(const CVector& z) const { return eval_node(*node_, z); }

Expr Expr::derivative(int j) const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::constant: return constant(0.0);
    case Kind::variable: return constant(n.index == j ? 1.0 : 0.0);
    case Kind::add: return Expr(n.a).derivative(j) + Expr(n.b).derivative(j);
    case Kind::sub: return Expr(n.a).derivative(j) - Expr(n.b).derivative(j);
    case Kind::mul: {
        const Expr a(n.a), b(n.b);
        return a.derivative(j) * b + a * b.derivative(j);
    }
    case Kind::div: {
        const Expr a(n.a), b(n.b);
        return (a.derivative(j) * b - a * b.derivative(j)) / pow(b, 2);
    }
    case Kind::neg: return -Expr(n.a).derivative(j);
    case Kind::pow: {
        const Expr a(n.a);
        return constant(static_cast<double>(n.index)) * pow(a, n.index - 1) * a.derivative(j);
    }
    case Kind::exp: return *this * Expr(n.a).derivative(j);
    }
    return constant(0.0);
}

std::optional<Polynomial> Expr::to_polynomial(int nvars) const
{
    const Node& n = *node_;
    auto sub = [&](const NodePtr& p) { return Expr(p).to_polynomial(nvars); };
    switch (n.kind) {
    case Kind::constant: return Polynomial::constant(nvars, n.value);
    case Kind::variable:
        if (n.index >= nvars) return std::nullopt;
        return Polynomial::variable(nvars, n.index);
    case Kind::add:
    case Kind::sub:
    case Kind::mul: {
        auto a = sub(n.a), b = sub(n.b);
        if (!a || !b) return std::nullopt;
        if (n.kind == Kind::add) return *a + *b;
        if (n.kind == Kind::sub) return *a - *b;
        return *a * *b;
    }
    case Kind::div: {
        auto a = sub(n.a);
        auto cb = Expr(n.b).constant_value();
        if (!a || !cb) return std::nullopt;
        return a->scaled(1.0 / *cb);
    }
    case Kind::neg: {
        auto a = sub(n.a);
        if (!a) return std::nullopt;
        return -*a;
    }
    case Kind::pow: {
        if (n.index < 0) return std::nullopt;
        auto a = sub(n.a);
        if (!a) return std::nullopt;
        return a->pow(n.index);
    }
    case Kind::exp: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> Expr::majorant(const RVector& abs_center, double rho) const
{
    const Node& n = *node_;
    auto sub = [&](const NodePtr& p) { return Expr(p).majorant(abs_center, rho); };
    switch (n.kind) {
    case Kind::constant: return std::abs(n.value);
    case Kind::variable: return abs_center(n.index) + rho;
    case Kind::add:
    case Kind::sub:
    case Kind::mul: {
        auto a = sub(n.a), b = sub(n.b);
        if (!a || !b) return std::nullopt;
        return n.kind == Kind::mul ? *a * *b : *a + *b;
    }
    case Kind::div: {
        auto a = sub(n.a);
        auto cb = Expr(n.b).constant_value();
        if (!a || !cb) return std::nullopt;
        return *a / std::abs(*cb);
    }
    case Kind::neg: return sub(n.a);
    case Kind::pow: {
        if (n.index < 0) return std::nullopt;
        auto a = sub(n.a);
        if (!a) return std::nullopt;
        return std::pow(*a, n.index);
    }
    case Kind::exp: {
        auto a = sub(n.a);
        if (!a) return std::nullopt;
        return std::exp(*a);
    }
    }
    return std::nullopt;
}

int Expr::max_variable() const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::constant: return -1;
    case Kind::variable: return n.index;
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div: return std::max(Expr(n.a).max_variable(), Expr(n.b).max_variable());
    default: return Expr(n.a).max_variable();
    }
}

std::string Expr::to_string() const
{
    const Node& n = *node_;
    auto s = [](const NodePtr& p) { return Expr(p).to_string(); };
    switch (n.kind) {
    case Kind::constant: return format_complex(n.value);
    case Kind::variable: return fmt::format("x{}", n.index + 1);
    case Kind::add: return "(" + s(n.a) + " + " + s(n.b) + ")";
    case Kind::sub: return "(" + s(n.a) + " - " + s(n.b) + ")";
    case Kind::mul: return s(n.a) + "*" + s(n.b);
    case Kind::div: return s(n.a) + "/(" + s(n.b) + ")";
    case Kind::neg: return "-(" + s(n.a) + ")";
    case Kind::pow: return "(" + s(n.a) + ")^" + std::to_string(n.index);
    case Kind::exp: return "exp(" + s(n.a) + ")";
    }
    return "?";
}

// -------------------------------------------------------------------- Scalar

Scalar::Scalar(Polynomial p) : nvars_(p.nvars()), rep_(std::move(p)) {}

Scalar::Scalar(const Expr& e, int nvars) : nvars_(nvars)
{
    if (e.max_variable() >= nvars) throw std::invalid_argument("expression uses a variable beyond the dimension");
    if (auto p = e.to_polynomial(nvars))
        rep_ = std::move(*p);
    else
        rep_ = e;
}

Complex Scalar::operator()(const CVector& z) const
{
    if (auto p = polynomial()) return (*p)(z);
    if (z.size() != nvars_) throw std::invalid_argument("scalar evaluated at point of wrong dimension");
    return std::get<Expr>(rep_).evaluate(z);
}

Scalar Scalar::derivative(int j) const
{
    if (auto p = polynomial()) return Scalar(p->derivative(j));
    return Scalar(std::get<Expr>(rep_).derivative(j), nvars_);
}

Expr Scalar::as_expr() const
{
    if (auto p = polynomial()) return Expr::from_polynomial(*p);
    return std::get<Expr>(rep_);
}

std::optional<double> Scalar::majorant(const RVector& abs_center, double rho) const
{
    if (auto p = polynomial()) return p->majorant(abs_center, rho);
    return std::get<Expr>(rep_).majorant(abs_center, rho);
}

std::string Scalar::to_string() const
{
    if (auto p = polynomial()) return p->to_string();
    return std::get<Expr>(rep_).to_string();
}

// -------------------------------------------------------------------- parser

std::string variable_name(int j, int nvars)
{
    if (nvars <= 3) return std::string(1, "xyz"[j]);
    return fmt::format("x{}", j + 1);
}

namespace {

class Parser {
public:
    Parser(std::string_view text, int nvars) : s_(text), n_(nvars) {}

    Expr parse()
    {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument(fmt::format("malformed expression '{}' at column {}: {}", s_, pos_ + 1, what));
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum()
    {
        Expr e = parse_product();
        for (;;) {
            if (accept('+'))
                e = e + parse_product();
            else if (accept('-'))
                e = e - parse_product();
            else
                return e;
        }
    }

    Expr parse_product()
    {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*'))
                e = e * parse_unary();
            else if (accept('/'))
                e = e / parse_unary();
            else
                return e;
        }
    }

    Expr parse_unary()
    {
        if (accept('-')) return -parse_unary();
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power()
    {
        Expr base = parse_primary();
        if (!accept('^')) return base;
        skip_ws();
        int sign = 1;
        if (accept('-')) sign = -1;
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("integer exponent expected");
        return pow(base, sign * std::stoi(std::string(s_.substr(start, pos_ - start))));
    }

    Expr parse_primary()
    {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (accept('(')) {
            Expr e = parse_sum();
            if (!accept(')')) fail("')' expected");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail(fmt::format("unexpected character '{}'", c));
    }

    Expr parse_number()
    {
        const char* begin = s_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("number expected");
        pos_ += static_cast<std::size_t>(end - begin);
        if (pos_ < s_.size() && s_[pos_] == 'i' &&
            (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            return Expr::constant(Complex(0.0, v));
        }
        return Expr::constant(v);
    }

    Expr parse_identifier()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string id(s_.substr(start, pos_ - start));
        if (id == "i") return Expr::constant(Complex(0.0, 1.0));
        if (id == "exp") {
            if (!accept('(')) fail("'(' expected after exp");
            Expr arg = parse_sum();
            if (!accept(')')) fail("')' expected");
            return exp(arg);
        }
        if (n_ <= 3 && id.size() == 1) {
            const auto k = std::string("xyz").find(id[0]);
            if (k != std::string::npos && static_cast<int>(k) < n_) return Expr::variable(static_cast<int>(k));
        }
        if (id.size() >= 2 && id[0] == 'x') {
            bool digits = true;
            for (std::size_t k = 1; k < id.size(); ++k) digits = digits && std::isdigit(static_cast<unsigned char>(id[k]));
            if (digits) {
                const int j = std::stoi(id.substr(1));
                if (j >= 1 && j <= n_) return Expr::variable(j - 1);
            }
        }
        pos_ = start;
        fail(fmt::format("unknown identifier '{}'", id));
    }

    std::string_view s_;
    int n_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, int nvars) { return Parser(text, nvars).parse(); }

Scalar parse_scalar(std::string_view text, int nvars) { return Scalar(parse_expression(text, nvars), nvars); }

std::vector<Scalar> parse_components(std::string_view text)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto k = text.find(';', start);
        parts.push_back(text.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
        if (k == std::string_view::npos) break;
        start = k + 1;
    }
    const int n = static_cast<int>(parts.size());
    std::vector<Scalar> out;
    out.reserve(parts.size());
    for (auto p : parts) out.push_back(parse_scalar(p, n));
    return out;
}

}  // namespace foliation
