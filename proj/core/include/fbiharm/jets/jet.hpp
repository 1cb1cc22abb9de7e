#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "fbiharm/jets/multi_index.hpp"

namespace fbiharm {

/// Dense monomial bookkeeping for jets of a given (dim, order).
///
/// Monomials are stored graded: all of degree 0, then degree 1, and so on.
/// A layout of lower order is therefore a prefix of a higher one, which makes
/// truncation a resize. Layouts are interned; get() hands out shared
/// immutable instances and is safe to call from several threads.
class JetLayout {
public:
    struct ProductTerm {
        std::size_t lhs;
        std::size_t rhs;
        std::size_t out;
    };
    struct DerivativeTerm {
        std::size_t source;  // index of beta + e_i in the parent layout
        double factor;       // beta_i + 1
    };

    static std::shared_ptr<const JetLayout> get(std::size_t dim, std::size_t order);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t order() const noexcept { return order_; }
    std::size_t size() const noexcept { return monomials_.size(); }

    const MultiIndex& monomial(std::size_t i) const { return monomials_[i]; }
    std::size_t degree_begin(std::size_t degree) const { return degree_offset_[degree]; }
    std::size_t degree_end(std::size_t degree) const { return degree_offset_[degree + 1]; }

    /// Position of alpha; throws OrderExceeded when |alpha| > order.
    std::size_t index(const MultiIndex& alpha) const;

    /// All products of a degree-da monomial with a degree-db monomial.
    const std::vector<ProductTerm>& products(std::size_t da, std::size_t db) const
    {
        return products_[da * (order_ + 1) + db];
    }

    /// Entries of d/dx_i, indexed by the monomials of the order-1 layout.
    const std::vector<DerivativeTerm>& derivative(std::size_t i) const { return derivative_[i]; }

    JetLayout(std::size_t dim, std::size_t order);

private:
    std::size_t dim_;
    std::size_t order_;
    std::vector<MultiIndex> monomials_;
    std::vector<std::size_t> degree_offset_;
    std::map<MultiIndex, std::size_t> index_;
    std::vector<std::vector<ProductTerm>> products_;
    std::vector<std::vector<DerivativeTerm>> derivative_;
};

/// Truncated multivariate Taylor expansion of a scalar function at a point.
///
/// coeff(alpha) is the Taylor coefficient d^alpha u(p) / alpha!. Arithmetic
/// between jets of different order truncates to the smaller order, so a jet
/// never claims more derivatives than it can know.
class Jet {
public:
    Jet() = default;
    explicit Jet(std::shared_ptr<const JetLayout> layout);

    static Jet constant(double value, std::size_t dim, std::size_t order);
    /// Coordinate jet x_index seeded at value.
    static Jet variable(double value, std::size_t index, std::size_t dim, std::size_t order);

    std::size_t dim() const noexcept { return layout_->dim(); }
    std::size_t order() const noexcept { return layout_->order(); }
    const JetLayout& layout() const noexcept { return *layout_; }
    const std::shared_ptr<const JetLayout>& layout_ptr() const noexcept { return layout_; }

    double value() const noexcept { return coeffs_[0]; }
    double coeff(const MultiIndex& alpha) const { return coeffs_[layout_->index(alpha)]; }
    double& coeff(const MultiIndex& alpha) { return coeffs_[layout_->index(alpha)]; }

    /// d^alpha u(p) = alpha! * coeff(alpha).
    double partial(const MultiIndex& alpha) const;
    /// First partial d u / d x_i at the expansion point.
    double partial(std::size_t i) const;
    /// Second partial d^2 u / dx_i dx_j.
    double partial(std::size_t i, std::size_t j) const;

    std::span<const double> coefficients() const noexcept { return coeffs_; }
    std::span<double> coefficients() noexcept { return coeffs_; }

    /// d/dx_i as a jet of one order less; throws OrderExceeded at order 0.
    Jet derivative(std::size_t i) const;
    Jet truncated(std::size_t order) const;

    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(const Jet& rhs);
    Jet& operator/=(const Jet& rhs);
    Jet& operator+=(double rhs);
    Jet& operator-=(double rhs);
    Jet& operator*=(double rhs);
    Jet& operator/=(double rhs);

    Jet operator-() const;

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator-(double a, const Jet& b) { return (-b) += a; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(Jet a, double b) { return a /= b; }
    friend Jet operator/(double a, const Jet& b);

    friend bool operator==(const Jet& a, const Jet& b);

private:
    std::shared_ptr<const JetLayout> layout_;
    std::vector<double> coeffs_;

    friend class JetComposer;
    friend Jet exp(const Jet&);
    friend Jet log(const Jet&);
    friend Jet sqrt(const Jet&);
    friend void sincos(const Jet&, Jet&, Jet&);
};

enum class Elementary { Exp, Log, Sin, Cos, Sqrt };

std::string_view to_string(Elementary fn) noexcept;

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
void sincos(const Jet& a, Jet& s, Jet& c);
/// Integer power by repeated squaring; valid for any constant term except
/// zero with a negative exponent.
Jet pow(const Jet& a, int n);
/// Real power as exp(r log a); the constant term must be positive unless r is integral.
Jet pow(const Jet& a, double r);

Jet jet_elementary(Elementary fn, const Jet& a);

/// Coordinate jets x_i seeded at point: value point[i], unit slope in direction i.
std::vector<Jet> seed_jets(std::span<const double> point, std::size_t order);

/// Partial derivative d^alpha of the function the jet expands.
double extract_partial(const Jet& j, const MultiIndex& alpha);

/// Substitutes inner jets into outer jets (truncated Taylor composition).
///
/// Outer jets are expansions in n variables y around y0 = (inner[k].value()).
/// apply() returns outer(y0 + (inner - y0)) as a jet in the inner variables, of
/// order min(outer.order(), max_order). Powers of the shifted inner jets are
/// built once per composer, so one composer should serve every component
/// composed along the same map.
class JetComposer {
public:
    JetComposer(std::span<const Jet> inner, std::size_t max_order);

    Jet apply(const Jet& outer) const;

    std::size_t max_order() const noexcept { return max_order_; }

private:
    std::size_t outer_dim_;
    std::size_t max_order_;
    std::shared_ptr<const JetLayout> outer_layout_;
    std::shared_ptr<const JetLayout> inner_layout_;
    std::vector<Jet> powers_;  // indexed by the outer layout monomials
};

}  // namespace fbiharm
