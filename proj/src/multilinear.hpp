#pragma once

#include <Eigen/Dense>

#include <vector>

namespace curvnd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Relative singular-value threshold used for every independence / rank test.
inline constexpr double kRankTol = 1e-10;

// Ordered list of vectors in R^dim, stored as the columns of a matrix.
class VectorList {
public:
  VectorList() = default;
  explicit VectorList(Mat columns) : m_(std::move(columns)) {}
  static VectorList identity(int dim) { return VectorList(Mat::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  int size() const { return static_cast<int>(m_.cols()); }
  Vec operator[](int i) const { return m_.col(i); }
  const Mat& matrix() const { return m_; }

  // sqrt of the Gram determinant; |det| in the square case.
  double volume() const;
  bool independent() const;
  bool orthonormal(double tol = 1e-10) const;

private:
  Mat m_;
};

// Decreasing chain V_1 ⊇ V_2 ⊇ ... each given by an orthonormal spanning set.
class SubspaceChain {
public:
  explicit SubspaceChain(std::vector<Mat> spaces);
  const std::vector<Mat>& spaces() const { return spaces_; }

private:
  std::vector<Mat> spaces_;
};

Mat orthonormal_span(const Mat& spanning);

VectorList realign_basis(const VectorList& v, const SubspaceChain& chain);

VectorList orthogonalize_preserving(const VectorList& v);

struct FrameComparison {
  bool equivalent = false;
  Mat O;            // v_i = sum_j O_ij w_j when equivalent
  Vec probe;        // functional L(x) = probe . x violating the frame sum otherwise
  double lhs = 0;   // sum |L(v_i)|^2
  double rhs = 0;   // sum |L(w_i)|^2
  double orthogonality_residual = 0;
};

FrameComparison frame_equivalent(const VectorList& v, const VectorList& w);

VectorList dual_basis(const VectorList& v);

VectorList kernel_onb(const Mat& M);

// Sum over all ordered k-tuples of |L(v_{i_1},...,v_{i_k})|^2 for a k-linear
// functional given as a dense tensor with dim^k entries (first index fastest).
double frame_sum(const VectorList& v, const std::vector<double>& L, int k);

}  // namespace curvnd
