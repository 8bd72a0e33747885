// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace ris {

using cx = std::complex<double>;

// Dense complex matrix, row-major. Everything at desk scale (joint dimension
// <= 16, superoperator representations <= 256 x 256) lives in this type;
// operations are value-semantic and safe to share across threads.
class Mat {
public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}
  Mat(int rows, int cols, std::initializer_list<cx> entries);

  static Mat identity(int n);
  static Mat zero(int rows, int cols) { return Mat(rows, cols); }
  static Mat diag(const std::vector<cx>& d);
  // Column vector from entries.
  static Mat col(const std::vector<cx>& v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  std::size_t size() const { return data_.size(); }

  cx& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const cx& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
  cx* data() { return data_.data(); }
  const cx* data() const { return data_.data(); }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(cx alpha);
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, cx alpha) { return a *= alpha; }
  friend Mat operator*(cx alpha, Mat a) { return a *= alpha; }
  Mat operator*(const Mat& o) const;  // kernel-backed matmul
  Mat operator-() const;

  Mat adjoint() const;
  Mat transpose() const;
  Mat conj() const;
  cx trace() const;

  double frob_norm() const;
  double max_abs() const;
  // max |A - A*|_entry; 0 for exactly Hermitian.
  double hermiticity_defect() const;

  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cx> data_;
};

// Hermitian part (A + A*)/2.
Mat hermitian_part(const Mat& a);

// Hilbert-Schmidt inner product Tr(A* B).
cx hs_inner(const Mat& a, const Mat& b);

}  // namespace ris
