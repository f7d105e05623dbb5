#include "augspec/canonical.hpp"

#include <cmath>

namespace augspec {

namespace {

// Hermitian inverse square root with a relative eigenvalue floor.
MatrixXcd inverse_sqrt(const MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (hermitian + hermitian.adjoint()));
  const double max_eig = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, max_eig))
    throw not_psd_error("Hermitian block is indefinite");
  const double floor =
      1e-10 * std::max(es.eigenvalues().sum(), 1e-300) / hermitian.rows();
  const VectorXd vals = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * vals.cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().adjoint();
}

// Principal square root of a (near) unitary symmetric matrix, computed as a
// normal matrix through its Schur form.
MatrixXcd unitary_sqrt(const MatrixXcd& u) {
  Eigen::ComplexSchur<MatrixXcd> schur(u);
  const long n = u.rows();
  MatrixXcd root = MatrixXcd::Zero(n, n);
  // Schur form of a normal matrix is diagonal to numerical precision.
  for (long i = 0; i < n; ++i) root(i, i) = std::sqrt(schur.matrixT()(i, i));
  return schur.matrixU() * root * schur.matrixU().adjoint();
}

}  // namespace

MatrixXcd coherence(const MatrixXcd& hermitian, const MatrixXcd& complementary) {
  const MatrixXcd whiten = inverse_sqrt(hermitian);
  MatrixXcd c = whiten * complementary * whiten.transpose();
  return 0.5 * (c + c.transpose()).eval();
}

void takagi(const MatrixXcd& symmetric, MatrixXcd& vectors, VectorXd& values) {
  const double scale = std::max(1.0, symmetric.cwiseAbs().maxCoeff());
  if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw structure_error("takagi requires a complex symmetric matrix");
  const MatrixXcd c = 0.5 * (symmetric + symmetric.transpose());
  const long n = c.rows();

  Eigen::JacobiSVD<MatrixXcd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  values = svd.singularValues();
  const MatrixXcd u = svd.matrixU();
  // For symmetric C, W* = U D with D unitary, symmetric, and block diagonal
  // over groups of equal singular values; then V = U D^{1/2}.
  MatrixXcd d = u.adjoint() * svd.matrixV().conjugate();
  d = 0.5 * (d + d.transpose()).eval();

  vectors = u;
  const double group_tol = 1e-8 * std::max(1.0, values(0));
  long start = 0;
  while (start < n) {
    long end = start + 1;
    while (end < n && values(start) - values(end) <= group_tol) ++end;
    if (values(start) <= group_tol) {
      // Null space of C: any orthonormal columns work; keep U as is.
      start = end;
      continue;
    }
    const long len = end - start;
    if (len == 1) {
      vectors.col(start) = u.col(start) * std::sqrt(d(start, start));
    } else {
      vectors.middleCols(start, len) =
          u.middleCols(start, len) * unitary_sqrt(d.block(start, start, len, len));
    }
    start = end;
  }
}

CanonicalDecomposition sut(const MatrixXcd& hermitian,
                           const MatrixXcd& complementary) {
  CanonicalDecomposition decomp;
  const MatrixXcd whiten = inverse_sqrt(hermitian);
  MatrixXcd c = whiten * complementary * whiten.transpose();
  c = 0.5 * (c + c.transpose()).eval();
  takagi(c, decomp.takagi_vectors, decomp.coefficients);
  for (long i = 0; i < decomp.coefficients.size(); ++i) {
    if (decomp.coefficients(i) > 1.0 + 1e-8)
      throw numerical_error("circularity coefficient exceeds the feasible bound");
    decomp.coefficients(i) = std::min(decomp.coefficients(i), 1.0);
  }
  decomp.transform = decomp.takagi_vectors.adjoint() * whiten;
  return decomp;
}

VectorXd circularity_spectrum(const SpectralModel& model) {
  model.check();
  return sut(model.cov.hermitian, model.cov.complementary).coefficients;
}

VectorXcd canonical_coords(const CanonicalDecomposition& decomp,
                           const VectorXcd& coeffs) {
  return decomp.transform * coeffs;
}

VectorXd canonical_expand(const CanonicalDecomposition& decomp,
                          const FrameConfig& cfg, const VectorXcd& canonical,
                          long long t) {
  const Eigen::FullPivLU<MatrixXcd> lu(decomp.transform);
  if (!lu.isInvertible()) throw numerical_error("singular canonical transform");
  AugmentedVector ubs{lu.solve(canonical)};
  return expand(cfg, ubs, t);
}

MmseTfr mmse_tfr(const SpectralModel& model,
                 const Eigen::Ref<const MatrixXd>& frame) {
  model.check();
  const FrameConfig& cfg = model.cfg;
  if (frame.rows() != cfg.frame_len || frame.cols() != cfg.num_channels)
    throw std::invalid_argument("frame must be L x N");
  const int MN = cfg.coeff_dim();
  const int N = cfg.num_channels;

  // W = P* R^{-1}; elliptic basis E(t) = Phi(t) + Phi*(t) W.
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(
      0.5 * (model.cov.hermitian + model.cov.hermitian.adjoint()));
  const double floor =
      1e-10 * std::max(es.eigenvalues().sum(), 1e-300) / MN;
  const MatrixXcd r_inv = es.eigenvectors() *
                          es.eigenvalues().cwiseMax(floor).cwiseInverse().asDiagonal() *
                          es.eigenvectors().adjoint();
  const MatrixXcd w = model.cov.complementary.conjugate() * r_inv;

  MatrixXcd stacked(cfg.frame_len * N, MN);
  VectorXcd rhs(cfg.frame_len * N);
  for (int t = 0; t < cfg.frame_len; ++t) {
    const MatrixXcd full = basis_at(cfg, t).matrix;
    const MatrixXcd phi = full.leftCols(MN);
    stacked.middleRows(t * N, N) = phi + phi.conjugate() * w;
    rhs.segment(t * N, N) = frame.row(t).transpose().cast<cplx>();
  }
  Eigen::JacobiSVD<MatrixXcd> svd(stacked,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
  MmseTfr out;
  const double rank_tol =
      1e-10 * std::max(1.0, svd.singularValues()(0)) * std::max(stacked.rows(), stacked.cols());
  out.rank_deficient = svd.singularValues().minCoeff() <= rank_tol;
  svd.setThreshold(1e-10);
  out.coeffs = svd.solve(rhs);
  return out;
}

}  // namespace augspec
