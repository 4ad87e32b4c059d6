#include <litmap/topic_model.hpp>

#include <litmap/error.hpp>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include <cmath>

namespace litmap::topics {

Reduction reduce_dimensions(const EmbeddingMatrix& emb, std::size_t target_dim,
                            std::uint64_t /*seed*/) {
  const std::size_t n = emb.rows();
  const std::size_t d = emb.dim();
  if (target_dim == 0) throw InvalidArgument("target_dim must be >= 1");
  if (target_dim > d) {
    throw InvalidArgument("target_dim " + std::to_string(target_dim) + " exceeds dim " +
                          std::to_string(d));
  }
  Reduction out;
  if (n == 0) {
    out.coords = EmbeddingMatrix({}, target_dim, {}, emb.kind());
    return out;
  }

  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMatrix> x(emb.values().data(), static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.adjoint() * centered) / static_cast<double>(n > 1 ? n - 1 : 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();

  const double top = std::max(evals(evals.size() - 1), 0.0);
  const double tol = std::max(top, 1.0) * 1e-12 * static_cast<double>(d);

  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(target_dim));
  std::size_t rank = 0;
  for (std::size_t k = 0; k < target_dim; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - k);
    if (evals(col) <= tol) break;
    Eigen::VectorXd v = evecs.col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    basis.col(static_cast<Eigen::Index>(k)) = v;
    ++rank;
  }
  if (rank < target_dim) {
    out.rank_deficient = true;
    spdlog::warn("reduce_dimensions: rank {} < target {}; padding with zero columns", rank,
                 target_dim);
  }

  const RowMatrix projected = centered * basis;
  std::vector<double> values(projected.data(), projected.data() + projected.size());
  out.coords = EmbeddingMatrix(emb.ids(), target_dim, std::move(values), emb.kind());
  return out;
}

}  // namespace litmap::topics
