#include "fbiharm/jets/jet.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <utility>

#include "fbiharm/error.hpp"

namespace fbiharm {

std::string MultiIndex::to_string() const
{
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < exponents_.size(); ++i) out << (i ? "," : "") << exponents_[i];
    out << ')';
    return out.str();
}

namespace {

void enumerate_degree(std::size_t dim, unsigned degree, std::size_t slot, MultiIndex& current,
                      std::vector<MultiIndex>& out)
{
    if (slot + 1 == dim) {
        current[slot] = degree;
        out.push_back(current);
        return;
    }
    for (unsigned e = degree + 1; e-- > 0;) {
        current[slot] = e;
        enumerate_degree(dim, degree - e, slot + 1, current, out);
    }
    current[slot] = 0;
}

}  // namespace

JetLayout::JetLayout(std::size_t dim, std::size_t order) : dim_(dim), order_(order)
{
    if (dim == 0) throw Error(ErrorKind::InvalidArgument, "jet dimension must be positive");

    degree_offset_.push_back(0);
    for (unsigned d = 0; d <= order; ++d) {
        MultiIndex current(dim);
        enumerate_degree(dim, d, 0, current, monomials_);
        degree_offset_.push_back(monomials_.size());
    }
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);

    products_.resize((order + 1) * (order + 1));
    for (std::size_t a = 0; a < monomials_.size(); ++a) {
        const unsigned da = monomials_[a].order();
        for (std::size_t b = 0; b < degree_offset_[order - da + 1]; ++b) {
            const unsigned db = monomials_[b].order();
            products_[da * (order + 1) + db].push_back({a, b, index_.at(monomials_[a] + monomials_[b])});
        }
    }

    derivative_.resize(dim);
    if (order > 0) {
        const std::size_t lower = degree_offset_[order];
        for (std::size_t i = 0; i < dim; ++i) {
            derivative_[i].reserve(lower);
            for (std::size_t b = 0; b < lower; ++b) {
                MultiIndex raised = monomials_[b];
                raised[i] += 1;
                derivative_[i].push_back({index_.at(raised), static_cast<double>(monomials_[b][i] + 1)});
            }
        }
    }
}

std::shared_ptr<const JetLayout> JetLayout::get(std::size_t dim, std::size_t order)
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, order}];
    if (!slot) slot = std::make_shared<const JetLayout>(dim, order);
    return slot;
}

std::size_t JetLayout::index(const MultiIndex& alpha) const
{
    if (alpha.dim() != dim_)
        throw Error(ErrorKind::InvalidArgument,
                    "multi-index " + alpha.to_string() + " does not match jet dimension " + std::to_string(dim_));
    if (alpha.order() > order_)
        throw Error(ErrorKind::OrderExceeded, "multi-index " + alpha.to_string() + " exceeds jet order " +
                                                  std::to_string(order_));
    return index_.at(alpha);
}

namespace {

// out[degree da+db block] += scale * a[da block] * b[db block]
void accumulate_block(const JetLayout& layout, std::span<double> out, std::span<const double> a,
                      std::span<const double> b, std::size_t da, std::size_t db, double scale)
{
    for (const auto& t : layout.products(da, db)) out[t.out] += scale * a[t.lhs] * b[t.rhs];
}

void require_same_dim(const Jet& a, const Jet& b)
{
    if (a.dim() != b.dim())
        throw Error(ErrorKind::InvalidArgument, "jet dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                                    std::to_string(b.dim()));
}

std::string format_value(double v)
{
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

Jet::Jet(std::shared_ptr<const JetLayout> layout) : layout_(std::move(layout)), coeffs_(layout_->size(), 0.0) {}

Jet Jet::constant(double value, std::size_t dim, std::size_t order)
{
    Jet j(JetLayout::get(dim, order));
    j.coeffs_[0] = value;
    return j;
}

Jet Jet::variable(double value, std::size_t index, std::size_t dim, std::size_t order)
{
    if (index >= dim) throw Error(ErrorKind::InvalidArgument, "coordinate index out of range");
    Jet j = constant(value, dim, order);
    if (order >= 1) j.coeffs_[1 + index] = 1.0;
    return j;
}

double Jet::partial(const MultiIndex& alpha) const { return alpha.factorial() * coeff(alpha); }

double Jet::partial(std::size_t i) const { return partial(MultiIndex::unit(dim(), i)); }

double Jet::partial(std::size_t i, std::size_t j) const
{
    MultiIndex alpha(dim());
    alpha[i] += 1;
    alpha[j] += 1;
    return partial(alpha);
}

Jet Jet::derivative(std::size_t i) const
{
    if (order() == 0) throw Error(ErrorKind::OrderExceeded, "cannot differentiate an order-0 jet");
    if (i >= dim()) throw Error(ErrorKind::InvalidArgument, "derivative index out of range");
    Jet d(JetLayout::get(dim(), order() - 1));
    const auto& table = layout_->derivative(i);
    for (std::size_t b = 0; b < table.size(); ++b) d.coeffs_[b] = table[b].factor * coeffs_[table[b].source];
    return d;
}

Jet Jet::truncated(std::size_t order) const
{
    if (order >= this->order()) return *this;
    Jet t(JetLayout::get(dim(), order));
    std::copy_n(coeffs_.begin(), t.coeffs_.size(), t.coeffs_.begin());
    return t;
}

Jet& Jet::operator+=(const Jet& rhs)
{
    require_same_dim(*this, rhs);
    if (rhs.order() < order()) *this = truncated(rhs.order());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs)
{
    require_same_dim(*this, rhs);
    if (rhs.order() < order()) *this = truncated(rhs.order());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet& Jet::operator+=(double rhs)
{
    coeffs_[0] += rhs;
    return *this;
}

Jet& Jet::operator-=(double rhs)
{
    coeffs_[0] -= rhs;
    return *this;
}

Jet& Jet::operator*=(double rhs)
{
    for (double& c : coeffs_) c *= rhs;
    return *this;
}

Jet& Jet::operator/=(double rhs)
{
    if (rhs == 0.0) throw Error(ErrorKind::SingularEvaluation, "division of a jet by zero");
    for (double& c : coeffs_) c /= rhs;
    return *this;
}

Jet Jet::operator-() const
{
    Jet r = *this;
    for (double& c : r.coeffs_) c = -c;
    return r;
}

Jet operator*(const Jet& a, const Jet& b)
{
    require_same_dim(a, b);
    const std::size_t order = std::min(a.order(), b.order());
    Jet r(JetLayout::get(a.dim(), order));
    for (std::size_t da = 0; da <= order; ++da)
        for (std::size_t db = 0; da + db <= order; ++db)
            accumulate_block(*r.layout_, r.coeffs_, a.coeffs_, b.coeffs_, da, db, 1.0);
    return r;
}

Jet operator/(const Jet& a, const Jet& b)
{
    require_same_dim(a, b);
    const double b0 = b.coeffs_[0];
    if (b0 == 0.0) throw Error(ErrorKind::SingularEvaluation, "division by a jet with zero constant term");
    const std::size_t order = std::min(a.order(), b.order());
    Jet q(JetLayout::get(a.dim(), order));
    const JetLayout& layout = *q.layout_;
    q.coeffs_[0] = a.coeffs_[0] / b0;
    for (std::size_t k = 1; k <= order; ++k) {
        for (std::size_t i = layout.degree_begin(k); i < layout.degree_end(k); ++i) q.coeffs_[i] = a.coeffs_[i];
        for (std::size_t j = 1; j <= k; ++j) accumulate_block(layout, q.coeffs_, b.coeffs_, q.coeffs_, j, k - j, -1.0);
        for (std::size_t i = layout.degree_begin(k); i < layout.degree_end(k); ++i) q.coeffs_[i] /= b0;
    }
    return q;
}

Jet operator/(double a, const Jet& b) { return Jet::constant(a, b.dim(), b.order()) / b; }

bool operator==(const Jet& a, const Jet& b)
{
    return a.dim() == b.dim() && a.order() == b.order() && a.coeffs_ == b.coeffs_;
}

// The elementary functions use the homogeneous-degree form of the defining
// ODEs: applying the Euler operator sum_i x_i d/dx_i to u = F(a) turns
// u' = F'(a) a' into a recurrence over degree blocks u_k.

Jet exp(const Jet& a)
{
    Jet u(a.layout_);
    const JetLayout& layout = *a.layout_;
    u.coeffs_[0] = std::exp(a.coeffs_[0]);
    for (std::size_t k = 1; k <= a.order(); ++k)
        for (std::size_t j = 1; j <= k; ++j)
            accumulate_block(layout, u.coeffs_, a.coeffs_, u.coeffs_, j, k - j, double(j) / double(k));
    return u;
}

Jet log(const Jet& a)
{
    const double a0 = a.coeffs_[0];
    if (!(a0 > 0.0)) throw DomainError("log of nonpositive value " + format_value(a0), a0);
    Jet u(a.layout_);
    const JetLayout& layout = *a.layout_;
    u.coeffs_[0] = std::log(a0);
    for (std::size_t k = 1; k <= a.order(); ++k) {
        for (std::size_t i = layout.degree_begin(k); i < layout.degree_end(k); ++i) u.coeffs_[i] = a.coeffs_[i];
        for (std::size_t j = 1; j < k; ++j)
            accumulate_block(layout, u.coeffs_, u.coeffs_, a.coeffs_, j, k - j, -double(j) / double(k));
        for (std::size_t i = layout.degree_begin(k); i < layout.degree_end(k); ++i) u.coeffs_[i] /= a0;
    }
    return u;
}

Jet sqrt(const Jet& a)
{
    const double a0 = a.coeffs_[0];
    if (!(a0 > 0.0)) throw DomainError("sqrt of nonpositive value " + format_value(a0), a0);
    Jet u(a.layout_);
    const JetLayout& layout = *a.layout_;
    u.coeffs_[0] = std::sqrt(a0);
    const double twice_u0 = 2.0 * u.coeffs_[0];
    for (std::size_t k = 1; k <= a.order(); ++k) {
        for (std::size_t i = layout.degree_begin(k); i < layout.degree_end(k); ++i) u.coeffs_[i] = a.coeffs_[i];
        for (std::size_t j = 1; j < k; ++j) accumulate_block(layout, u.coeffs_, u.coeffs_, u.coeffs_, j, k - j, -1.0);
        for (std::size_t i = layout.degree_begin(k); i < layout.degree_end(k); ++i) u.coeffs_[i] /= twice_u0;
    }
    return u;
}

void sincos(const Jet& a, Jet& s, Jet& c)
{
    s = Jet(a.layout_);
    c = Jet(a.layout_);
    const JetLayout& layout = *a.layout_;
    s.coeffs_[0] = std::sin(a.coeffs_[0]);
    c.coeffs_[0] = std::cos(a.coeffs_[0]);
    for (std::size_t k = 1; k <= a.order(); ++k) {
        for (std::size_t j = 1; j <= k; ++j) {
            const double w = double(j) / double(k);
            accumulate_block(layout, s.coeffs_, a.coeffs_, c.coeffs_, j, k - j, w);
            accumulate_block(layout, c.coeffs_, a.coeffs_, s.coeffs_, j, k - j, -w);
        }
    }
}

Jet sin(const Jet& a)
{
    Jet s, c;
    sincos(a, s, c);
    return s;
}

Jet cos(const Jet& a)
{
    Jet s, c;
    sincos(a, s, c);
    return c;
}

Jet pow(const Jet& a, int n)
{
    if (n < 0) {
        if (a.value() == 0.0) throw Error(ErrorKind::SingularEvaluation, "negative power of a jet with zero value");
        return 1.0 / pow(a, -n);
    }
    Jet result = Jet::constant(1.0, a.dim(), a.order());
    Jet base = a;
    for (unsigned e = static_cast<unsigned>(n); e; e >>= 1) {
        if (e & 1u) result *= base;
        if (e > 1) base *= base;
    }
    return result;
}

Jet pow(const Jet& a, double r)
{
    if (std::trunc(r) == r && std::abs(r) < 1 << 30) return pow(a, static_cast<int>(r));
    if (!(a.value() > 0.0))
        throw DomainError("non-integral power of nonpositive value " + format_value(a.value()), a.value());
    return exp(r * log(a));
}

std::string_view to_string(Elementary fn) noexcept
{
    switch (fn) {
    case Elementary::Exp: return "exp";
    case Elementary::Log: return "log";
    case Elementary::Sin: return "sin";
    case Elementary::Cos: return "cos";
    case Elementary::Sqrt: return "sqrt";
    }
    return "?";
}

Jet jet_elementary(Elementary fn, const Jet& a)
{
    switch (fn) {
    case Elementary::Exp: return exp(a);
    case Elementary::Log: return log(a);
    case Elementary::Sin: return sin(a);
    case Elementary::Cos: return cos(a);
    case Elementary::Sqrt: return sqrt(a);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown elementary function");
}

std::vector<Jet> seed_jets(std::span<const double> point, std::size_t order)
{
    if (point.empty()) throw Error(ErrorKind::InvalidArgument, "cannot seed jets at an empty point");
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "jet order must be at least 1");
    std::vector<Jet> jets;
    jets.reserve(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) jets.push_back(Jet::variable(point[i], i, point.size(), order));
    return jets;
}

double extract_partial(const Jet& j, const MultiIndex& alpha) { return j.partial(alpha); }

JetComposer::JetComposer(std::span<const Jet> inner, std::size_t max_order) : outer_dim_(inner.size())
{
    if (inner.empty()) throw Error(ErrorKind::InvalidArgument, "composition needs at least one inner jet");
    std::size_t order = max_order;
    for (const Jet& j : inner) {
        require_same_dim(j, inner.front());
        order = std::min(order, j.order());
    }
    max_order_ = order;
    outer_layout_ = JetLayout::get(outer_dim_, max_order_);
    inner_layout_ = JetLayout::get(inner.front().dim(), max_order_);

    std::vector<Jet> shifted;
    shifted.reserve(inner.size());
    for (const Jet& j : inner) {
        Jet d = j.truncated(max_order_);
        d.coeffs_[0] = 0.0;
        shifted.push_back(std::move(d));
    }

    powers_.reserve(outer_layout_->size());
    powers_.push_back(Jet::constant(1.0, inner_layout_->dim(), max_order_));
    for (std::size_t b = 1; b < outer_layout_->size(); ++b) {
        MultiIndex beta = outer_layout_->monomial(b);
        std::size_t i = 0;
        while (beta[i] == 0) ++i;
        beta[i] -= 1;
        powers_.push_back(powers_[outer_layout_->index(beta)] * shifted[i]);
    }
}

Jet JetComposer::apply(const Jet& outer) const
{
    if (outer.dim() != outer_dim_)
        throw Error(ErrorKind::InvalidArgument, "outer jet dimension does not match the composer");
    const std::size_t order = std::min(outer.order(), max_order_);
    Jet r(JetLayout::get(inner_layout_->dim(), order));
    const std::size_t outer_terms = outer_layout_->degree_end(order);
    const std::size_t n = r.coeffs_.size();
    for (std::size_t b = 0; b < outer_terms; ++b) {
        const double c = outer.coeffs_[b];
        if (c == 0.0) continue;
        const auto& p = powers_[b].coeffs_;
        for (std::size_t i = 0; i < n; ++i) r.coeffs_[i] += c * p[i];
    }
    return r;
}

}  // namespace fbiharm
