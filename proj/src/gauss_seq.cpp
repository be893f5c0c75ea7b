#include "sumdens/gauss_seq.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "sumdens/error.hpp"
#include "sumdens/normal.hpp"
#include "sumdens/parallel.hpp"
#include "sumdens/rng.hpp"
#include "sumdens/stats.hpp"

namespace sumdens {

namespace {

constexpr std::int64_t kBlock = 256;
constexpr int kMaxRedraws = 100;

void check_model(const JointModel& model) {
  if (!model.gaussian() && !model.independent())
    throw_capability("sequential conditioning is implemented for Gaussian copulas only");
  if (!model.all_positive())
    throw_invalid("sequential conditioning needs positive marginals");
}

}  // namespace

double SequentialDraw::alpha(int k) const { return std::exp(log_alpha[k]); }

SequentialDraw sequential_draw(const JointModel& model, double s, std::span<const double> u) {
  check_model(model);
  const int n = model.dim();
  if (!(s > 0.0)) throw_domain("sequential conditioning needs s > 0");
  if (static_cast<int>(u.size()) != n) throw_invalid("uniform vector has the wrong length");
  for (double v : u)
    if (!(v > 0.0 && v < 1.0)) throw_domain("driving uniforms must lie in (0,1)");

  const GaussianCopula* gc = model.gaussian();
  const auto rho = gc ? gc->equicorr_rho() : std::optional<double>(0.0);
  SequentialDraw d;
  d.y.resize(n);
  d.log_alpha.resize(n);
  d.z.resize(n);
  d.u.assign(u.begin(), u.end());
  std::vector<double> xi;  // whitened latents for the Cholesky path
  if (!rho) xi.resize(n);

  double budget = s;
  double zsum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (!(budget > 0.0)) {
      d.valid = false;
      return d;
    }
    const Marginal& m = model.marginals()[k];
    double mean;
    double sd;
    if (rho) {
      const double r = *rho;
      const double denom = 1.0 + (k - 1) * r;
      mean = k == 0 ? 0.0 : r / denom * zsum;
      sd = k == 0 ? 1.0 : std::sqrt((1.0 - r) * (1.0 + k * r) / denom);
    } else {
      const auto& l = gc->chol();
      mean = 0.0;
      for (int j = 0; j < k; ++j) mean += l(k, j) * xi[j];
      sd = l(k, k);
    }
    const double zstar = m.normal_score(budget);
    const double la = normal::log_cdf((zstar - mean) / sd);
    const double zk = mean + sd * normal::quantile_from_log(std::log(u[k]) + la);
    double xk = std::min(m.from_normal_score(zk), budget);
    if (!(xk > 0.0)) {
      d.valid = false;
      return d;
    }
    d.log_alpha[k] = la;
    d.z[k] = zk;
    d.y[k] = xk / s;
    if (!rho) xi[k] = (zk - mean) / sd;
    zsum += zk;
    budget -= xk;
  }
  return d;
}

double cdf_estimate(const SequentialDraw& draw) {
  double acc = 0.0;
  for (double la : draw.log_alpha) acc += la;
  return std::exp(acc);
}

double pdf_estimate(const JointModel& model, double s, const SequentialDraw& draw) {
  if (!draw.valid) throw_domain("pdf estimate requested for a draw pinned to the boundary");
  const int n = model.dim();
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = s * draw.y[k];
  const auto score = model.score(x);
  double g = n;
  for (int k = 0; k < n; ++k) g += x[k] * score[k];
  return g / s * cdf_estimate(draw);
}

DensityCurve density_curve(const JointModel& model, std::span<const double> grid,
                           std::int64_t replicates, std::uint64_t seed, UniformMode mode,
                           int workers) {
  check_model(model);
  if (replicates < 2) throw_invalid("need at least two replicates");
  for (double s : grid)
    if (!(s > 0.0)) throw_domain("sequential conditioning grid must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const int n = model.dim();
  const auto g_count = static_cast<std::int64_t>(grid.size());
  std::vector<double> pdf(static_cast<std::size_t>(replicates * g_count));
  std::vector<double> cdf(pdf.size());
  std::vector<std::int64_t> redraws(static_cast<std::size_t>((replicates + kBlock - 1) / kBlock), 0);

  parallel_for(replicates, kBlock, workers, [&](std::int64_t begin, std::int64_t end) {
    const auto block = static_cast<std::uint64_t>(begin / kBlock);
    std::vector<double> u(n);
    auto fill = [&](RandomStream& rng) {
      for (auto& v : u) v = rng.uniform();
    };
    RandomStream common(seed, streams::kSequentialU, block);
    std::vector<RandomStream> per_grid;
    if (mode == UniformMode::Independent)
      for (std::int64_t g = 0; g < g_count; ++g)
        per_grid.emplace_back(seed, streams::kSequentialU,
                              (static_cast<std::uint64_t>(g + 1) << 32) | block);
    for (std::int64_t r = begin; r < end; ++r) {
      if (mode == UniformMode::Common) fill(common);
      const std::vector<double> shared = u;
      for (std::int64_t g = 0; g < g_count; ++g) {
        if (mode == UniformMode::Independent)
          fill(per_grid[g]);
        else
          u = shared;
        const double s = grid[g];
        auto draw = sequential_draw(model, s, u);
        int attempt = 0;
        while (!draw.valid) {
          if (++attempt > kMaxRedraws) throw_domain("sequential draw kept hitting the boundary");
          RandomStream fresh(seed, streams::kRedraw,
                             (static_cast<std::uint64_t>(r) << 24) ^
                                 (static_cast<std::uint64_t>(g) << 8) ^
                                 static_cast<std::uint64_t>(attempt));
          fill(fresh);
          draw = sequential_draw(model, s, u);
          ++redraws[block];
        }
        pdf[g * replicates + r] = pdf_estimate(model, s, draw);
        cdf[g * replicates + r] = cdf_estimate(draw);
      }
    }
  });

  DensityCurve curve;
  for (auto c : redraws) curve.redraws += c;
  for (std::int64_t g = 0; g < g_count; ++g) {
    const auto p = mean_se(std::span<const double>(pdf).subspan(g * replicates, replicates));
    const auto c = mean_se(std::span<const double>(cdf).subspan(g * replicates, replicates));
    curve.points.push_back({grid[g], {p.mean, p.std_error, replicates, 0.0},
                            {c.mean, c.std_error, replicates, 0.0}});
  }
  curve.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& pt : curve.points) pt.pdf.cpu_seconds = pt.cdf.cpu_seconds = curve.cpu_seconds;
  return curve;
}

}  // namespace sumdens
