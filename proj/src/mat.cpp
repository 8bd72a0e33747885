// SPDX-License-Identifier: Apache-2.0
#include "ris/mat.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ris/errors.hpp"
#include "ris/kernels.hpp"

namespace ris {

Mat::Mat(int rows, int cols, std::initializer_list<cx> entries) : Mat(rows, cols) {
  if (entries.size() != data_.size())
    throw DimensionMismatch("Mat initializer size does not match shape");
  std::copy(entries.begin(), entries.end(), data_.begin());
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diag(const std::vector<cx>& d) {
  Mat m(int(d.size()), int(d.size()));
  for (int i = 0; i < int(d.size()); ++i) m(i, i) = d[std::size_t(i)];
  return m;
}

Mat Mat::col(const std::vector<cx>& v) {
  Mat m(int(v.size()), 1);
  std::copy(v.begin(), v.end(), m.data_.begin());
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  if (!same_shape(o)) throw DimensionMismatch("Mat::operator+= shape mismatch");
  kernels::active_ops().axpy(data_.data(), cx{1.0, 0.0}, o.data_.data(), data_.size());
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (!same_shape(o)) throw DimensionMismatch("Mat::operator-= shape mismatch");
  kernels::active_ops().axpy(data_.data(), cx{-1.0, 0.0}, o.data_.data(), data_.size());
  return *this;
}

Mat& Mat::operator*=(cx alpha) {
  kernels::active_ops().scale(data_.data(), alpha, data_.size());
  return *this;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("Mat::operator* inner dimension mismatch");
  Mat c(rows_, o.cols_);
  kernels::active_ops().matmul(data_.data(), o.data_.data(), c.data_.data(), rows_, cols_, o.cols_);
  return c;
}

Mat Mat::operator-() const {
  Mat m = *this;
  m *= cx{-1.0, 0.0};
  return m;
}

Mat Mat::adjoint() const {
  Mat m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Mat Mat::transpose() const {
  Mat m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Mat Mat::conj() const {
  Mat m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

cx Mat::trace() const {
  if (!square()) throw DimensionMismatch("Mat::trace on non-square matrix");
  cx t{};
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double Mat::frob_norm() const {
  return std::sqrt(kernels::active_ops().norm2sq(data_.data(), data_.size()));
}

double Mat::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double Mat::hermiticity_defect() const {
  if (!square()) throw DimensionMismatch("hermiticity_defect on non-square matrix");
  double d = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

Mat hermitian_part(const Mat& a) {
  Mat h = a;
  h += a.adjoint();
  h *= cx{0.5, 0.0};
  return h;
}

cx hs_inner(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw DimensionMismatch("hs_inner: shape mismatch");
  return kernels::active_ops().conj_dot(a.data(), b.data(), a.size());
}

}  // namespace ris
