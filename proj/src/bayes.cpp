#include "sumdens/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sumdens/error.hpp"
#include "sumdens/normal.hpp"
#include "sumdens/rng.hpp"
#include "sumdens/stats.hpp"

namespace sumdens {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// log(1 + e^eta)
double softplus(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double logistic(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

}  // namespace

int LogisticModel::coefficient_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw_invalid("unknown coefficient '" + name + "'");
}

LogisticModel load_logistic_csv(const std::string& path, const std::vector<std::string>& predictors,
                                const std::string& outcome, std::optional<int> expected_rows) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open data file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw_io("data file '" + path + "' is empty");
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw_io("data file '" + path + "' has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> cols;
  for (const auto& p : predictors) cols.push_back(column(p));
  const std::size_t ycol = column(outcome);

  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected " << header.size() << " fields, found "
         << fields.size();
      throw_io(os.str());
    }
    auto number = [&](std::size_t c) {
      try {
        std::size_t used = 0;
        const double v = std::stod(fields[c], &used);
        if (used != fields[c].size()) throw std::invalid_argument(fields[c]);
        return v;
      } catch (const std::exception&) {
        std::ostringstream os;
        os << path << ":" << lineno << ": column '" << header[c] << "' is not numeric ('"
           << fields[c] << "')";
        throw_io(os.str());
      }
    };
    std::vector<double> row;
    for (auto c : cols) row.push_back(number(c));
    const double y = number(ycol);
    if (y != 0.0 && y != 1.0) {
      std::ostringstream os;
      os << path << ":" << lineno << ": outcome '" << outcome << "' must be 0 or 1, found " << y;
      throw_io(os.str());
    }
    xs.push_back(std::move(row));
    ys.push_back(y);
  }
  if (expected_rows && static_cast<int>(ys.size()) != *expected_rows) {
    std::ostringstream os;
    os << "data file '" << path << "' has " << ys.size() << " rows, expected " << *expected_rows;
    throw_io(os.str());
  }
  if (ys.size() < 2) throw_io("data file '" + path + "' has fewer than two rows");

  const auto rows = static_cast<Eigen::Index>(ys.size());
  const auto p = static_cast<Eigen::Index>(predictors.size());
  LogisticModel model;
  model.design.resize(rows, p + 1);
  model.response.resize(rows);
  model.names = {"intercept"};
  model.names.insert(model.names.end(), predictors.begin(), predictors.end());
  for (Eigen::Index r = 0; r < rows; ++r) {
    model.design(r, 0) = 1.0;
    for (Eigen::Index c = 0; c < p; ++c) model.design(r, c + 1) = xs[r][c];
    model.response[r] = ys[r];
  }
  for (Eigen::Index c = 1; c <= p; ++c) {
    auto col = model.design.col(c);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(rows - 1));
    if (!(sd > 0.0)) throw_io("predictor '" + predictors[c - 1] + "' is constant");
    col = (col.array() - mean) / sd;
  }
  return model;
}

LogisticModel load_pima(const std::string& path) {
  return load_logistic_csv(path, kPimaPredictors, kPimaOutcome, kPimaRows);
}

LogPostGrad log_post_and_grad(const LogisticModel& model, std::span<const double> beta) {
  if (static_cast<int>(beta.size()) != model.dim())
    throw_invalid("coefficient vector has the wrong length");
  const Eigen::Map<const Eigen::VectorXd> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
  const Eigen::VectorXd eta = model.design * b;
  double logp = -0.5 * b.squaredNorm();
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    logp += model.response[r] * eta[r] - softplus(eta[r]);
    resid[r] = model.response[r] - logistic(eta[r]);
  }
  const Eigen::VectorXd grad = model.design.transpose() * resid - b;
  return {logp, std::vector<double>(grad.data(), grad.data() + grad.size())};
}

LogTarget logistic_target(const LogisticModel& model) {
  return [&model](std::span<const double> x, std::span<double> grad) {
    auto lg = log_post_and_grad(model, x);
    std::copy(lg.grad.begin(), lg.grad.end(), grad.begin());
    return lg.logp;
  };
}

std::vector<double> Chain::coordinate(int i) const {
  if (i < 0 || i >= dim) throw_invalid("chain coordinate out of range");
  std::vector<double> out(static_cast<std::size_t>(steps()));
  for (std::int64_t t = 0; t < steps(); ++t) out[t] = samples[t * dim + i];
  return out;
}

Chain rw_metropolis(const LogTarget& target, std::span<const double> init, double step_var,
                    std::int64_t burn_in, std::int64_t keep, std::uint64_t seed,
                    std::int64_t thin) {
  if (!(step_var > 0.0)) throw_invalid("random-walk step variance must be positive");
  if (burn_in < 0 || keep < 1 || thin < 1) throw_invalid("invalid chain length settings");
  const int dim = static_cast<int>(init.size());
  if (dim < 1) throw_invalid("initial state is empty");
  const double step = std::sqrt(step_var);
  RandomStream rng(seed, streams::kMetropolis, 0);

  std::vector<double> cur(init.begin(), init.end());
  std::vector<double> cur_grad(dim);
  double cur_logp = target(cur, cur_grad);
  std::vector<double> prop(dim);
  std::vector<double> prop_grad(dim);

  Chain chain;
  chain.dim = dim;
  chain.seed = seed;
  chain.samples.reserve(static_cast<std::size_t>(keep / thin + 1) * dim);
  chain.scores.reserve(chain.samples.capacity());
  std::int64_t accepted = 0;
  const std::int64_t total = burn_in + keep;
  for (std::int64_t t = 0; t < total; ++t) {
    for (int i = 0; i < dim; ++i) prop[i] = cur[i] + step * rng.normal();
    const double prop_logp = target(prop, prop_grad);
    const double log_ratio = prop_logp - cur_logp;
    if (log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio) {
      std::swap(cur, prop);
      std::swap(cur_grad, prop_grad);
      cur_logp = prop_logp;
      ++accepted;
    }
    if (t >= burn_in && (t - burn_in) % thin == 0) {
      chain.samples.insert(chain.samples.end(), cur.begin(), cur.end());
      chain.scores.insert(chain.scores.end(), cur_grad.begin(), cur_grad.end());
    }
  }
  chain.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total);
  return chain;
}

double default_shift(std::span<const double> grid) {
  if (grid.empty()) return 0.0;
  return std::max(0.0, 0.5 - *std::min_element(grid.begin(), grid.end()));
}

std::vector<EstimatorOutput> marginal_posterior_density(const Chain& chain, int coordinate,
                                                        std::span<const double> grid,
                                                        double shift_a, double pilot_frac,
                                                        int batches) {
  if (chain.steps() < 1) throw_invalid("chain is empty");
  return marginal_sens(chain.samples, chain.scores, chain.dim, coordinate, grid, shift_a,
                       pilot_frac, {ErrorMethod::BatchMeans, batches});
}

double silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw_invalid("bandwidth needs at least two samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(sample_variance(samples));
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  if (!(spread > 0.0)) throw_domain("KDE of a sample with zero spread");
  return 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
}

std::vector<double> kde(std::span<const double> samples, std::span<const double> grid) {
  const double h = silverman_bandwidth(samples);
  const double scale = 1.0 / (static_cast<double>(samples.size()) * h);
  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (double x : samples) acc += normal::pdf((grid[g] - x) / h);
    out[g] = acc * scale;
  }
  return out;
}

}  // namespace sumdens
