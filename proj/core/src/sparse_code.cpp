#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "wordpuzzle/errors.hpp"
#include "wordpuzzle/topic_models.hpp"

namespace wordpuzzle {

namespace {

constexpr std::size_t kMaxSweeps = 20000;
constexpr std::size_t kMaxInnerSteps = 200;
constexpr double kStepTolerance = 1e-13;

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

std::size_t group_size(const Regularizer& reg, Eigen::Index k) {
  if (reg.penalty == Penalty::l1) return 1;
  return std::clamp<std::size_t>(reg.group_size, 1, static_cast<std::size_t>(std::max<Eigen::Index>(k, 1)));
}

}  // namespace

std::string_view to_string(Penalty p) { return p == Penalty::l1 ? "l1" : "group-l2"; }

Penalty penalty_from_string(std::string_view s) {
  if (s == "l1") return Penalty::l1;
  if (s == "group-l2") return Penalty::group_l2;
  throw InputError("unknown regularizer '" + std::string(s) + "' (expected l1 or group-l2)");
}

double penalty_value(const Eigen::VectorXd& alpha, const Regularizer& reg) {
  if (reg.penalty == Penalty::l1) return alpha.lpNorm<1>();
  const auto g = static_cast<Eigen::Index>(group_size(reg, alpha.size()));
  double total = 0.0;
  for (Eigen::Index s = 0; s < alpha.size(); s += g) {
    total += alpha.segment(s, std::min(g, alpha.size() - s)).norm();
  }
  return total;
}

SparseCoder::SparseCoder(const Eigen::MatrixXd& dictionary, double kappa, Regularizer reg)
    : dict_(dictionary), kappa_(kappa), reg_(reg), gram_(dictionary.transpose() * dictionary) {
  if (!(kappa > 0.0)) throw InputError("sparse coding needs kappa > 0");
  if (reg_.penalty == Penalty::group_l2) {
    const auto g = static_cast<Eigen::Index>(group_size(reg_, gram_.rows()));
    for (Eigen::Index s = 0; s < gram_.rows(); s += g) {
      const Eigen::Index len = std::min(g, gram_.rows() - s);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_.block(s, s, len, len),
                                                         Eigen::EigenvaluesOnly);
      block_lipschitz_.push_back(eig.eigenvalues().maxCoeff());
    }
  }
}

double SparseCoder::objective(const Eigen::VectorXd& x, const Eigen::VectorXd& alpha) const {
  return 0.5 * (x - dict_ * alpha).squaredNorm() + kappa_ * penalty_value(alpha, reg_);
}

SparseCode SparseCoder::encode(const Eigen::VectorXd& x) const {
  const Eigen::Index k = gram_.rows();
  const Eigen::VectorXd corr = dict_.transpose() * x;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(k);
  // gram_ * alpha, kept up to date incrementally.
  Eigen::VectorXd g_alpha = Eigen::VectorXd::Zero(k);

  if (reg_.penalty == Penalty::l1) {
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      double max_step = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double gii = gram_(i, i);
        if (gii <= 0.0) continue;
        const double partial = corr[i] - g_alpha[i] + gii * alpha[i];
        const double next = soft_threshold(partial, kappa_) / gii;
        const double step = next - alpha[i];
        if (step != 0.0) {
          g_alpha += step * gram_.col(i);
          alpha[i] = next;
          max_step = std::max(max_step, std::abs(step) * std::sqrt(gii));
        }
      }
      if (max_step <= kStepTolerance * (1.0 + x.norm())) break;
    }
  } else {
    const auto g = static_cast<Eigen::Index>(group_size(reg_, k));
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      double max_step = 0.0;
      std::size_t block = 0;
      for (Eigen::Index s = 0; s < k; s += g, ++block) {
        const Eigen::Index len = std::min(g, k - s);
        const double lipschitz = block_lipschitz_[block];
        if (lipschitz <= 0.0) continue;
        const auto gram_block = gram_.block(s, s, len, len);
        const Eigen::VectorXd old = alpha.segment(s, len);
        // Linear term of the block subproblem with the other blocks fixed.
        const Eigen::VectorXd partial = corr.segment(s, len) - g_alpha.segment(s, len) + gram_block * old;

        Eigen::VectorXd a = old;
        if (partial.norm() <= kappa_) {
          a.setZero();
        } else {
          for (std::size_t inner = 0; inner < kMaxInnerSteps; ++inner) {
            const Eigen::VectorXd z = a - (gram_block * a - partial) / lipschitz;
            const double zn = z.norm();
            const double shrink = zn > 0.0 ? std::max(0.0, 1.0 - kappa_ / (lipschitz * zn)) : 0.0;
            const Eigen::VectorXd next = shrink * z;
            const double moved = (next - a).norm();
            a = next;
            if (moved <= kStepTolerance * (1.0 + a.norm())) break;
          }
        }
        const Eigen::VectorXd step = a - old;
        const double step_norm = step.norm();
        if (step_norm > 0.0) {
          g_alpha += gram_.middleCols(s, len) * step;
          alpha.segment(s, len) = a;
          max_step = std::max(max_step, step_norm * std::sqrt(lipschitz));
        }
      }
      if (max_step <= kStepTolerance * (1.0 + x.norm())) break;
    }
  }

  SparseCode code{std::move(alpha), 0.0};
  code.objective = objective(x, code.alpha);
  const double at_zero = 0.5 * x.squaredNorm();
  if (code.objective > at_zero) {
    code.alpha.setZero();
    code.objective = at_zero;
  }
  return code;
}

SparseCode sparse_code(const Eigen::VectorXd& x, const Eigen::MatrixXd& dictionary, double kappa,
                       const Regularizer& reg) {
  return SparseCoder(dictionary, kappa, reg).encode(x);
}

}  // namespace wordpuzzle
