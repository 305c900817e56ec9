#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qsurr/parallel.hpp"
#include "qsurr/pipeline.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::pipeline {

namespace {

std::vector<double> row_of(const PointMatrix& points, Eigen::Index r) {
  std::vector<double> x(points.cols());
  for (Eigen::Index c = 0; c < points.cols(); ++c) x[c] = points(r, c);
  return x;
}

// Noise seed for evaluation `k` of point `r`: keeps shot noise independent across
// points, shifts and iterations.
NoiseConfig seeded(const NoiseConfig& noise, std::uint64_t stream) {
  NoiseConfig out = noise;
  out.seed = derive_seed(noise.seed, stream);
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw PreconditionError("learning_rate must be positive");
  if (max_iters < 0) throw PreconditionError("max_iters must be non-negative");
  if (shots && *shots == 0) throw PreconditionError("shots must be positive");
  if (tolerance < 0.0) throw PreconditionError("tolerance must be non-negative");
}

std::vector<double> parameter_shift_gradient(const CircuitConfig& cfg, const ParameterSet& params,
                                             std::span<const double> x,
                                             const NoiseConfig& noise) {
  constexpr double shift = std::numbers::pi / 2.0;
  std::vector<double> grad(params.size());
  ParameterSet shifted = params;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double orig = params.flat()[p];
    shifted.flat()[p] = orig + shift;
    const double plus = qsim::expectation(cfg, shifted, x, seeded(noise, 2 * p));
    shifted.flat()[p] = orig - shift;
    const double minus = qsim::expectation(cfg, shifted, x, seeded(noise, 2 * p + 1));
    shifted.flat()[p] = orig;
    grad[p] = 0.5 * (plus - minus);
  }
  return grad;
}

double loss(const CircuitConfig& cfg, const ParameterSet& params, const PointMatrix& points,
            const Eigen::VectorXd& targets, const NoiseConfig& noise) {
  if (points.rows() != targets.size()) throw ShapeError("points/targets length mismatch");
  if (points.rows() == 0) throw PreconditionError("loss needs at least one point");
  const Eigen::VectorXd f = evaluate(cfg, params, points, noise);
  return (f - targets).squaredNorm() / static_cast<double>(targets.size());
}

std::vector<double> loss_gradient(const CircuitConfig& cfg, const ParameterSet& params,
                                  const PointMatrix& points, const Eigen::VectorXd& targets,
                                  const NoiseConfig& noise) {
  if (points.rows() != targets.size()) throw ShapeError("points/targets length mismatch");
  const auto m = static_cast<std::size_t>(points.rows());
  std::vector<std::vector<double>> per_point(m);
  parallel_for(m, [&](std::size_t r) {
    const auto x = row_of(points, static_cast<Eigen::Index>(r));
    const NoiseConfig local = seeded(noise, 0x5eed0000ULL + r);
    const double f = qsim::expectation(cfg, params, x, seeded(local, ~0ULL));
    auto g = parameter_shift_gradient(cfg, params, x, local);
    const double scale = 2.0 * (f - targets(static_cast<Eigen::Index>(r))) / static_cast<double>(m);
    for (double& v : g) v *= scale;
    per_point[r] = std::move(g);
  });
  std::vector<double> grad(params.size(), 0.0);
  for (const auto& g : per_point)
    for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += g[p];
  return grad;
}

TrainResult train(const CircuitConfig& cfg, const PointMatrix& points,
                  const Eigen::VectorXd& targets, const TrainConfig& tc,
                  std::optional<ParameterSet> initial) {
  tc.validate();
  cfg.validate();
  if (points.rows() == 0) throw PreconditionError("training needs at least one point");
  if (points.rows() != targets.size()) throw ShapeError("points/targets length mismatch");
  if (points.cols() != cfg.d_features) throw ShapeError("dataset/circuit feature mismatch");
  if ((targets.array().abs() > 1.0 + 1e-9).any())
    throw PreconditionError("training targets must be rescaled to [-1, 1]");

  ParameterSet params = initial ? std::move(*initial) : ParameterSet::random(cfg, tc.seed);
  params.validate_for(cfg);

  NoiseConfig noise;
  noise.shots = tc.shots;
  noise.seed = derive_seed(tc.seed, 1);

  TrainResult out;
  out.params = params;
  double current = loss(cfg, params, points, targets, seeded(noise, 0));
  if (!std::isfinite(current)) throw NumericalError("Divergence", "initial loss is not finite");
  out.loss_history.push_back(current);
  double best = current;

  const auto m = static_cast<std::size_t>(points.rows());
  const std::size_t batch = tc.batch_size == 0 ? m : std::min(tc.batch_size, m);
  std::vector<Eigen::Index> order(m);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(derive_seed(tc.seed, 2));
  std::size_t cursor = m;

  for (int it = 0; it < tc.max_iters; ++it) {
    PointMatrix bx;
    Eigen::VectorXd by;
    if (batch == m) {
      bx = points;
      by = targets;
    } else {
      bx.resize(static_cast<Eigen::Index>(batch), points.cols());
      by.resize(static_cast<Eigen::Index>(batch));
      for (std::size_t i = 0; i < batch; ++i) {
        if (cursor == m) {
          std::shuffle(order.begin(), order.end(), rng);
          cursor = 0;
        }
        bx.row(static_cast<Eigen::Index>(i)) = points.row(order[cursor]);
        by(static_cast<Eigen::Index>(i)) = targets(order[cursor]);
        ++cursor;
      }
    }
    const auto grad = loss_gradient(cfg, params, bx, by, seeded(noise, 100 + 2 * it));
    for (std::size_t p = 0; p < grad.size(); ++p) params.flat()[p] -= tc.learning_rate * grad[p];

    const double next = loss(cfg, params, points, targets, seeded(noise, 101 + 2 * it));
    if (!std::isfinite(next))
      throw NumericalError("Divergence", "loss became non-finite at iteration " +
                                             std::to_string(it + 1));
    out.loss_history.push_back(next);
    out.iterations = it + 1;
    if (next < best) {
      best = next;
      out.params = params;
    }
    const double delta = std::abs(current - next);
    current = next;
    if (tc.tolerance > 0.0 && delta < tc.tolerance) break;
  }
  return out;
}

}  // namespace qsurr::pipeline
