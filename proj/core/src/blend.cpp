#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "asynczoo/error.hpp"
#include "asynczoo/metrics.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

void BlendData::validate() const {
  if (models == 0) throw ValidationError("blend data needs at least one model column");
  if (predictions.size() != rows * models || ratings.size() != rows) {
    throw ValidationError("blend data shape mismatch");
  }
  if (truth && truth->size() != models) {
    throw ValidationError("blend truth coefficients must have one entry per model");
  }
}

BlendData synthesize_blend(std::size_t n_rows, std::size_t n_models, std::uint64_t seed,
                           double noise_std) {
  if (n_rows == 0 || n_models == 0) {
    throw ValidationError("synthesize_blend: n_rows and n_models must be >= 1");
  }
  if (!(noise_std >= 0.0)) throw ValidationError("synthesize_blend: noise_std must be >= 0");

  RngStream model_rng(seed, 11);
  std::vector<double> gain(n_models), spread(n_models);
  for (std::size_t m = 0; m < n_models; ++m) {
    gain[m] = 1.0 + 0.2 * model_rng.normal();
    spread[m] = model_rng.uniform(0.5, 1.5);
  }
  Vector truth(n_models);
  for (double& w : truth) w = model_rng.uniform01();
  const double total = std::accumulate(truth.begin(), truth.end(), 0.0);
  for (double& w : truth) w /= total;

  BlendData data;
  data.rows = n_rows;
  data.models = n_models;
  data.predictions.resize(n_rows * n_models);
  data.ratings.resize(n_rows);
  RngStream sample_rng(seed, 12);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const double latent = sample_rng.normal();
    double signal = 0.0;
    for (std::size_t m = 0; m < n_models; ++m) {
      const double p = gain[m] * latent + spread[m] * sample_rng.normal();
      data.predictions[r * n_models + m] = p;
      signal += p * truth[m];
    }
    data.ratings[r] = signal + noise_std * sample_rng.normal();
  }
  data.truth = std::move(truth);
  return data;
}

void write_blend_csv(const BlendData& data, std::ostream& out) {
  data.validate();
  const auto old_precision = out.precision(17);
  for (std::size_t r = 0; r < data.rows; ++r) {
    for (std::size_t m = 0; m < data.models; ++m) out << data.prediction(r, m) << ',';
    out << data.ratings[r] << '\n';
  }
  out.precision(old_precision);
}

BlendData read_blend_csv(std::istream& in) {
  BlendData data;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    row.clear();
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ValidationError("blend csv line " + std::to_string(line_no) +
                              ": not a number: '" + field + "'");
      }
    }
    if (row.size() < 2) {
      throw ValidationError("blend csv line " + std::to_string(line_no) +
                            ": need at least one model column and a rating");
    }
    if (data.rows == 0) {
      data.models = row.size() - 1;
    } else if (row.size() != data.models + 1) {
      throw ValidationError("blend csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(data.models + 1) + " columns");
    }
    data.predictions.insert(data.predictions.end(), row.begin(), row.end() - 1);
    data.ratings.push_back(row.back());
    ++data.rows;
  }
  if (data.rows == 0) throw ValidationError("blend csv is empty");
  return data;
}

std::pair<BlendData, BlendData> split_blend(const BlendData& data, std::uint64_t seed) {
  data.validate();
  std::vector<std::size_t> order(data.rows);
  std::iota(order.begin(), order.end(), 0);
  RngStream rng(seed, 13);
  for (std::size_t i = data.rows; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  const std::size_t first_rows = (data.rows + 1) / 2;
  auto take = [&](std::size_t begin, std::size_t end) {
    BlendData part;
    part.models = data.models;
    part.truth = data.truth;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t r = order[k];
      const auto* row = data.predictions.data() + r * data.models;
      part.predictions.insert(part.predictions.end(), row, row + data.models);
      part.ratings.push_back(data.ratings[r]);
      ++part.rows;
    }
    return part;
  };
  return {take(0, first_rows), take(first_rows, data.rows)};
}

BlendProblem::BlendProblem(BlendData train, BlendData holdout)
    : Problem((train.validate(), train.models), 1),
      train_(std::move(train)),
      holdout_(std::move(holdout)) {
  if (train_.rows == 0) throw ValidationError("blend problem needs at least one training row");
  if (train_.rows < train_.models) {
    warnings_.push_back("fewer training rows than models; the blend is underdetermined");
  }
  if (holdout_.rows > 0) {
    holdout_.validate();
    if (holdout_.models != train_.models) {
      throw ValidationError("held-out split must have the same model columns");
    }
  }
  const std::size_t n = train_.models;
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMatrix> a(train_.predictions.data(), static_cast<Eigen::Index>(train_.rows),
                                static_cast<Eigen::Index>(n));
  Eigen::Map<const Eigen::VectorXd> r(train_.ratings.data(), static_cast<Eigen::Index>(train_.rows));
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Eigen::VectorXd moment = a.transpose() * r;
  gram_.resize(n * n);
  moment_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    moment_[i] = moment[static_cast<Eigen::Index>(i)];
    for (std::size_t j = 0; j < n; ++j) {
      gram_[i * n + j] = gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  ratings_sq_ = r.squaredNorm();

  // Hessian of f is 2 G / n.
  const double rows = static_cast<double>(train_.rows);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 * gram_[i * n + i] / rows;
  set_lipschitz(LipschitzInfo(2.0 * solver.eigenvalues().maxCoeff() / rows, std::move(diag),
                              Provenance::analytic));
}

double BlendProblem::do_eval(std::span<const double> x, std::size_t) const {
  const std::size_t n = dim();
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = gram_.data() + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    quad += x[i] * acc;
    lin += moment_[i] * x[i];
  }
  const double sq = quad - 2.0 * lin + ratings_sq_;
  return std::max(0.0, sq) / static_cast<double>(train_.rows);
}

void BlendProblem::do_grad(std::span<const double> x, std::size_t xi,
                           std::span<double> out) const {
  for (std::size_t i = 0; i < dim(); ++i) out[i] = do_partial(x, xi, i);
}

double BlendProblem::do_partial(std::span<const double> x, std::size_t, std::size_t i) const {
  const std::size_t n = dim();
  const double* row = gram_.data() + i * n;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
  return 2.0 * (acc - moment_[i]) / static_cast<double>(train_.rows);
}

std::vector<double> BlendProblem::predict(const BlendData& data, std::span<const double> x) const {
  check_point(x);
  std::vector<double> out(data.rows, 0.0);
  for (std::size_t r = 0; r < data.rows; ++r) {
    const double* row = data.predictions.data() + r * data.models;
    double acc = 0.0;
    for (std::size_t m = 0; m < data.models; ++m) acc += row[m] * x[m];
    out[r] = acc;
  }
  return out;
}

double BlendProblem::train_rmse(std::span<const double> x) const {
  return rmse(predict(train_, x), train_.ratings);
}

double BlendProblem::holdout_rmse(std::span<const double> x) const {
  if (holdout_.rows == 0) throw ValidationError("blend problem has no held-out split");
  return rmse(predict(holdout_, x), holdout_.ratings);
}

std::shared_ptr<const BlendProblem> make_blend(std::size_t n_rows, std::size_t n_models,
                                               std::uint64_t seed, double noise_std) {
  if (n_rows < 2) throw ValidationError("make_blend: need at least 2 rows to split");
  auto [train, holdout] = split_blend(synthesize_blend(n_rows, n_models, seed, noise_std), seed);
  return std::make_shared<const BlendProblem>(std::move(train), std::move(holdout));
}

}  // namespace asynczoo
