#include "group_precoder.hpp"

#include <cmath>
#include <limits>

namespace relaybc::detail {
namespace {

constexpr int kMaxBisection = 200;

}  // namespace

GroupPrecoderResult solve_group_precoders(const CMat& quadratic,
                                          const std::vector<CMat>& targets,
                                          double budget) {
  GroupPrecoderResult out;
  const int dim = static_cast<int>(quadratic.rows());

  double target_norm = 0.0;
  for (const CMat& c : targets) target_norm += c.squaredNorm();
  if (target_norm == 0.0 || budget <= 0.0) {
    for (const CMat& c : targets) out.precoders.emplace_back(CMat::Zero(dim, c.cols()));
    return out;
  }

  const CMat sym = 0.5 * (quadratic + quadratic.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(sym);
  if (eig.info() != Eigen::Success)
    throw NumericalError("group precoder update: eigendecomposition failed");
  Eigen::VectorXd evals = eig.eigenvalues().cwiseMax(0.0);
  const CMat& basis = eig.eigenvectors();

  // Rotate targets into the eigenbasis; per-eigenmode row powers make the
  // power curve a rational function of lambda that is cheap to evaluate.
  std::vector<CMat> rotated;
  rotated.reserve(targets.size());
  Eigen::MatrixXd row_power(dim, targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    rotated.push_back(basis.adjoint() * targets[i]);
    row_power.col(static_cast<Eigen::Index>(i)) =
        rotated.back().rowwise().squaredNorm();
  }

  const auto power_at = [&](double lambda) {
    double acc = 0.0;
    for (int r = 0; r < dim; ++r) {
      const double denom = evals[r] + lambda;
      if (denom <= 0.0) {
        if (row_power.row(r).sum() > 0.0)
          return std::numeric_limits<double>::infinity();
        continue;
      }
      acc += row_power.row(r).sum() / (denom * denom);
    }
    return acc;
  };

  double lambda = 0.0;
  if (power_at(0.0) > budget) {
    double hi = 1.0;
    int guard = 0;
    while (power_at(hi) > budget) {
      hi *= 2.0;
      if (++guard > kMaxBisection)
        throw NumericalError("group precoder update: bisection bracket failure");
    }
    double lo = hi * 0.5 > 0.0 && power_at(hi * 0.5) > budget ? hi * 0.5 : 0.0;
    // Bisect the bracket down to machine precision; the feasible (high)
    // endpoint is returned so the power constraint is never overshot.
    for (int it = 0; it < kMaxBisection && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (power_at(mid) > budget ? lo : hi) = mid;
    }
    lambda = hi;
  }

  out.lambda = lambda;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CMat scaled = rotated[i];
    for (int r = 0; r < dim; ++r) {
      const double denom = evals[r] + lambda;
      if (denom > 0.0)
        scaled.row(r) /= denom;
      else
        scaled.row(r).setZero();
    }
    out.precoders.push_back(basis * scaled);
  }
  return out;
}

}  // namespace relaybc::detail
