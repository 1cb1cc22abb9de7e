#pragma once

#include <cstddef>
#include <vector>

namespace fbiharm {

/// Dense cubic array indexed (a, b, c), every axis of extent n.
template <class T>
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n, const T& init = T{}) : n_(n), data_(n * n * n, init) {}

    std::size_t extent() const noexcept { return n_; }
    T& operator()(std::size_t a, std::size_t b, std::size_t c) { return data_[(a * n_ + b) * n_ + c]; }
    const T& operator()(std::size_t a, std::size_t b, std::size_t c) const { return data_[(a * n_ + b) * n_ + c]; }

    const std::vector<T>& data() const noexcept { return data_; }

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

/// Dense quartic array indexed (a, b, c, d).
template <class T>
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(std::size_t n, const T& init = T{}) : n_(n), data_(n * n * n * n, init) {}

    std::size_t extent() const noexcept { return n_; }
    T& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d)
    {
        return data_[((a * n_ + b) * n_ + c) * n_ + d];
    }
    const T& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const
    {
        return data_[((a * n_ + b) * n_ + c) * n_ + d];
    }

    const std::vector<T>& data() const noexcept { return data_; }

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

}  // namespace fbiharm
