#include "multilinear.hpp"

#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>

namespace curvnd {

namespace {

Vec singular_values(const Mat& m) {
  if (m.size() == 0) return Vec(0);
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues();
}

bool full_column_rank(const Mat& m) {
  if (m.cols() == 0) return true;
  if (m.cols() > m.rows()) return false;
  Vec s = singular_values(m);
  return s(0) > 0.0 && s(s.size() - 1) > kRankTol * s(0);
}

void fix_sign(Eigen::Ref<Vec> col) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < col.size(); ++i)
    if (std::abs(col(i)) > std::abs(col(best)) + 1e-14) best = i;
  if (col(best) < 0) col = -col;
}

// Gram-Schmidt of `cols` against the orthonormal columns of `basis`,
// returning up to `want` new orthonormal directions in column order.
Mat extend_orthonormal(const Mat& basis, const Mat& cols, int want) {
  const int n = static_cast<int>(cols.rows());
  Mat out(n, 0);
  double scale = 0.0;
  for (int j = 0; j < cols.cols(); ++j) scale = std::max(scale, cols.col(j).norm());
  for (int j = 0; j < cols.cols() && out.cols() < want; ++j) {
    Vec r = cols.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
      if (out.cols() > 0) r -= out * (out.transpose() * r);
    }
    double nr = r.norm();
    if (nr > 1e-8 * std::max(scale, 1e-300)) {
      out.conservativeResize(n, out.cols() + 1);
      out.col(out.cols() - 1) = r / nr;
    }
  }
  return out;
}

}  // namespace

Mat orthogonal_from_gaussian(const Mat& g) {
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(g.rows(), g.cols());
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < q.cols(); ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

double VectorList::volume() const {
  if (size() == 0) return 1.0;
  if (dim() == size()) return std::abs(m_.determinant());
  double g = (m_.transpose() * m_).determinant();
  return std::sqrt(std::max(g, 0.0));
}

bool VectorList::independent() const { return full_column_rank(m_); }

bool VectorList::orthonormal(double tol) const {
  Mat g = m_.transpose() * m_;
  return (g - Mat::Identity(size(), size())).cwiseAbs().maxCoeff() <= tol;
}

Mat orthonormal_span(const Mat& spanning) {
  return extend_orthonormal(Mat(spanning.rows(), 0), spanning, static_cast<int>(spanning.cols()));
}

SubspaceChain::SubspaceChain(std::vector<Mat> spaces) : spaces_(std::move(spaces)) {
  if (spaces_.empty()) fail(Errc::ChainViolation, "empty subspace chain");
  const auto dim = spaces_.front().rows();
  for (std::size_t j = 0; j < spaces_.size(); ++j) {
    const Mat& b = spaces_[j];
    if (b.rows() != dim) fail(Errc::DimensionMismatch, "chain spaces live in different dimensions");
    if (b.cols() == 0) fail(Errc::ChainViolation, "chain contains a trivial subspace");
    Mat g = b.transpose() * b;
    if ((g - Mat::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() > 1e-9)
      fail(Errc::ChainViolation, "chain space is not given by an orthonormal set");
    if (j > 0) {
      const Mat& prev = spaces_[j - 1];
      Mat resid = b - prev * (prev.transpose() * b);
      if (resid.norm() > 1e-9) fail(Errc::ChainViolation, "chain is not decreasing");
    }
  }
}

VectorList realign_basis(const VectorList& v, const SubspaceChain& chain) {
  const Mat& V = v.matrix();
  const int m = v.size();
  if (!v.independent()) fail(Errc::DependentInput, "realign_basis: input vectors are dependent");
  if (chain.spaces().front().rows() != V.rows()) fail(Errc::DimensionMismatch, "realign_basis: chain dimension");

  Eigen::ColPivHouseholderQR<Mat> qr(V);
  // Coordinates (w.r.t. v) of each chain space.
  std::vector<Mat> coords;
  for (const Mat& b : chain.spaces()) {
    Mat c = qr.solve(b);
    if ((V * c - b).norm() > 1e-9 * std::max(1.0, b.norm()))
      fail(Errc::ChainViolation, "realign_basis: chain leaves the span of v");
    coords.push_back(c);
  }

  // Orthonormal basis of R^m whose trailing blocks span the coordinate spaces.
  Mat acc(m, 0);
  for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
    int target = static_cast<int>(it->cols());
    int want = target - static_cast<int>(acc.cols());
    if (want < 0) fail(Errc::ChainViolation, "realign_basis: chain dimensions not decreasing");
    Mat fresh = extend_orthonormal(acc, *it, want);
    Mat joined(m, fresh.cols() + acc.cols());
    joined << fresh, acc;
    acc = joined;
  }
  if (acc.cols() < m) {
    Mat fresh = extend_orthonormal(acc, Mat::Identity(m, m), m - static_cast<int>(acc.cols()));
    Mat joined(m, m);
    joined << fresh, acc;
    acc = joined;
  }
  return VectorList(V * acc);
}

VectorList orthogonalize_preserving(const VectorList& v) {
  if (!v.independent()) fail(Errc::DependentInput, "orthogonalize_preserving: dependent input");
  const Mat& V = v.matrix();
  Mat g = V.transpose() * V;
  double diag = g.diagonal().cwiseAbs().maxCoeff();
  Mat off = g;
  off.diagonal().setZero();
  if (off.size() == 0 || off.cwiseAbs().maxCoeff() <= 1e-14 * diag) return v;
  Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Mat out = V * svd.matrixV();
  for (int j = 0; j < out.cols(); ++j) fix_sign(out.col(j));
  return VectorList(out);
}

FrameComparison frame_equivalent(const VectorList& v, const VectorList& w) {
  if (v.size() != w.size() || v.dim() != w.dim())
    fail(Errc::DimensionMismatch, "frame_equivalent: list shapes differ");
  if (!v.independent() || !w.independent()) fail(Errc::DependentInput, "frame_equivalent: dependent input");
  const Mat& V = v.matrix();
  const Mat& W = w.matrix();
  Mat sv = V * V.transpose();
  Mat sw = W * W.transpose();
  double scale = std::max(sv.norm(), sw.norm());
  FrameComparison out;
  Mat diff = sv - sw;
  if (diff.norm() <= 1e-10 * scale) {
    Mat ot = W.colPivHouseholderQr().solve(V);  // V = W O^T
    out.O = ot.transpose();
    out.orthogonality_residual =
        (out.O.transpose() * out.O - Mat::Identity(v.size(), v.size())).cwiseAbs().maxCoeff();
    out.equivalent = out.orthogonality_residual <= 1e-8;
  }
  if (!out.equivalent) {
    Eigen::SelfAdjointEigenSolver<Mat> es(diff);
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&best);
    out.probe = es.eigenvectors().col(best);
    fix_sign(out.probe);
  }
  if (out.probe.size() > 0) {
    out.lhs = (V.transpose() * out.probe).squaredNorm();
    out.rhs = (W.transpose() * out.probe).squaredNorm();
  }
  return out;
}

VectorList dual_basis(const VectorList& v) {
  if (v.dim() != v.size()) fail(Errc::DimensionMismatch, "dual_basis: basis must be square");
  if (!v.independent()) fail(Errc::SingularBasis, "dual_basis: singular basis");
  Mat inv = v.matrix().fullPivLu().inverse();
  return VectorList(inv.transpose());
}

VectorList kernel_onb(const Mat& M) {
  const int k = static_cast<int>(M.rows());
  const int n = static_cast<int>(M.cols());
  if (k >= n || k == 0) fail(Errc::DimensionMismatch, "kernel_onb: need 0 < k < n");
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  Vec s = svd.singularValues();
  if (!(s(0) > 0.0) || s(k - 1) <= kRankTol * s(0))
    fail(Errc::RankDeficient, "kernel_onb: matrix is rank deficient");
  const int d = n - k;
  Mat N = svd.matrixV().rightCols(d);
  Mat P = N * N.transpose();

  // Greedy pivoted Cholesky on the kernel projector picks d coordinates.
  Vec resid = P.diagonal();
  Mat L(n, 0);
  std::vector<int> picked;
  for (int step = 0; step < d; ++step) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (std::find(picked.begin(), picked.end(), i) != picked.end()) continue;
      if (best < 0 || resid(i) > resid(best) + 1e-12) best = i;
    }
    Vec l = P.col(best);
    if (L.cols() > 0) l -= L * L.row(best).transpose();
    l /= std::sqrt(resid(best));
    L.conservativeResize(n, L.cols() + 1);
    L.col(L.cols() - 1) = l;
    resid -= l.cwiseAbs2();
    picked.push_back(best);
  }
  std::sort(picked.begin(), picked.end());
  Mat A(n, d);
  for (int j = 0; j < d; ++j) A.col(j) = P.col(picked[j]);
  Eigen::SelfAdjointEigenSolver<Mat> es(A.transpose() * A);
  Mat inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
  return VectorList(A * inv_sqrt);
}

double frame_sum(const VectorList& v, const std::vector<double>& L, int k) {
  const int n = v.dim();
  const int m = v.size();
  std::size_t expect = 1;
  for (int a = 0; a < k; ++a) expect *= static_cast<std::size_t>(n);
  if (L.size() != expect) fail(Errc::DimensionMismatch, "frame_sum: functional has wrong size");
  // Contract one slot at a time; slot a is the a-th fastest index.
  std::vector<double> cur = L;
  std::size_t inner = 1;  // product of already-contracted sizes (m each)
  for (int a = 0; a < k; ++a) {
    std::size_t outer = cur.size() / (inner * n);
    std::vector<double> next(inner * m * outer, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          double c = v.matrix()(j, i);
          if (c == 0.0) continue;
          const double* src = &cur[(o * n + j) * inner];
          double* dst = &next[(o * m + i) * inner];
          for (std::size_t q = 0; q < inner; ++q) dst[q] += c * src[q];
        }
    cur.swap(next);
    inner *= m;
  }
  double s = 0.0;
  for (double x : cur) s += x * x;
  return s;
}

}  // namespace curvnd
