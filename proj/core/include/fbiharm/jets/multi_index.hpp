#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace fbiharm {

/// Exponent vector of a monomial x^alpha; order() is |alpha|.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dim) : exponents_(dim, 0) {}
    MultiIndex(std::initializer_list<unsigned> exponents) : exponents_(exponents) {}
    explicit MultiIndex(std::vector<unsigned> exponents) : exponents_(std::move(exponents)) {}

    static MultiIndex unit(std::size_t dim, std::size_t i)
    {
        MultiIndex m(dim);
        m.exponents_.at(i) = 1;
        return m;
    }

    std::size_t dim() const noexcept { return exponents_.size(); }
    unsigned order() const noexcept
    {
        unsigned s = 0;
        for (unsigned e : exponents_) s += e;
        return s;
    }

    /// alpha! = prod_i alpha_i!
    double factorial() const noexcept
    {
        double f = 1.0;
        for (unsigned e : exponents_)
            for (unsigned k = 2; k <= e; ++k) f *= static_cast<double>(k);
        return f;
    }

    unsigned operator[](std::size_t i) const { return exponents_[i]; }
    unsigned& operator[](std::size_t i) { return exponents_[i]; }

    const std::vector<unsigned>& exponents() const noexcept { return exponents_; }

    MultiIndex operator+(const MultiIndex& other) const
    {
        MultiIndex r = *this;
        for (std::size_t i = 0; i < r.dim() && i < other.dim(); ++i) r.exponents_[i] += other.exponents_[i];
        return r;
    }

    std::string to_string() const;

    auto operator<=>(const MultiIndex&) const = default;

private:
    std::vector<unsigned> exponents_;
};

}  // namespace fbiharm
