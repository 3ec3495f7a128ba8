#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dyhat {

/// Dense square matrix, row-major. Tensor products use the convention that
/// the first factor's index varies slowest, so W (x) W has basis order
/// (++, +-, -+, --).
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(size_t n, const T& fill = T(0)) : n_(n), a_(n * n, fill) {}

  static Matrix identity(size_t n) {
    Matrix m(n);
    for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  size_t size() const { return n_; }
  T& operator()(size_t i, size_t j) { return a_[i * n_ + j]; }
  const T& operator()(size_t i, size_t j) const { return a_[i * n_ + j]; }

  Matrix& operator+=(const Matrix& o) {
    check(o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] = a_[i] + o.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check(o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] = a_[i] - o.a_[i];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const T& c, Matrix a) {
    for (auto& x : a.a_) x = c * x;
    return a;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check(b);
    Matrix r(a.n_);
    for (size_t i = 0; i < a.n_; ++i)
      for (size_t k = 0; k < a.n_; ++k) {
        const T& x = a(i, k);
        if (x == T(0)) continue;
        for (size_t j = 0; j < a.n_; ++j) {
          const T& y = b(k, j);
          if (y == T(0)) continue;
          r(i, j) = r(i, j) + x * y;
        }
      }
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!(x == T(0))) return false;
    return true;
  }

  template <typename F>
  auto map(F f) const -> Matrix<decltype(f(std::declval<T>()))> {
    Matrix<decltype(f(std::declval<T>()))> r(n_);
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < n_; ++j) r(i, j) = f((*this)(i, j));
    return r;
  }

 private:
  void check(const Matrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("matrix size mismatch");
  }
  size_t n_ = 0;
  std::vector<T> a_;
};

template <typename T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  const size_t n = a.size(), m = b.size();
  Matrix<T> r(n * m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (a(i, j) == T(0)) continue;
      for (size_t k = 0; k < m; ++k)
        for (size_t l = 0; l < m; ++l) r(i * m + k, j * m + l) = a(i, j) * b(k, l);
    }
  return r;
}

/// The flip on W (x) W for two-dimensional W.
template <typename T>
Matrix<T> flip4() {
  Matrix<T> p(4);
  p(0, 0) = T(1);
  p(1, 2) = T(1);
  p(2, 1) = T(1);
  p(3, 3) = T(1);
  return p;
}

/// A 4x4 matrix on W (x) W placed on tensor slots (i, j) of W^{(x)3}; its
/// first factor acts on slot i. Slots are 0, 1, 2.
template <typename T>
Matrix<T> embed3(const Matrix<T>& m, int i, int j) {
  Matrix<T> r(8);
  auto bit = [](size_t idx, int slot) { return (idx >> (2 - slot)) & 1; };
  const int k = 3 - i - j;
  for (size_t row = 0; row < 8; ++row)
    for (size_t col = 0; col < 8; ++col) {
      if (bit(row, k) != bit(col, k)) continue;
      size_t a = bit(row, i) * 2 + bit(row, j), b = bit(col, i) * 2 + bit(col, j);
      r(row, col) = m(a, b);
    }
  return r;
}

/// Inverse by Gauss-Jordan elimination over a field; throws if singular.
template <typename T>
Matrix<T> inverse(Matrix<T> a) {
  const size_t n = a.size();
  Matrix<T> inv = Matrix<T>::identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a(p, c) == T(0)) ++p;
    if (p == n) throw std::domain_error("inverse: singular matrix");
    if (p != c)
      for (size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    T piv = a(c, c);
    for (size_t j = 0; j < n; ++j) {
      a(c, j) = a(c, j) / piv;
      inv(c, j) = inv(c, j) / piv;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == T(0)) continue;
      T f = a(r, c);
      for (size_t j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(c, j);
        inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace dyhat
