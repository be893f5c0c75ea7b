#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sumdens/estimators.hpp"
#include "sumdens/joint_model.hpp"

namespace sumdens {

/// One pass of sequential truncated sampling of Y = X / s: coordinate k is
/// drawn from its Gaussian-copula conditional law truncated so that the
/// running sum stays at or below 1, by inverse transform of u[k].
struct SequentialDraw {
  std::vector<double> y;
  std::vector<double> log_alpha;  // log of the truncation probabilities
  std::vector<double> z;          // latent normals
  std::vector<double> u;          // driving uniforms
  bool valid = true;              // false when rounding pinned a coordinate to the boundary

  double alpha(int k) const;
};

/// Requires a Gaussian (or independence) copula with positive marginals,
/// s > 0 and u in (0,1)^n.
SequentialDraw sequential_draw(const JointModel& model, double s, std::span<const double> u);

/// prod_k alpha_k, an unbiased and smooth estimate of P(S <= s).
double cdf_estimate(const SequentialDraw& draw);

/// (Y . grad log f_X(sY) + n / s) prod_k alpha_k, an unbiased and smooth
/// estimate of f_S(s).
double pdf_estimate(const JointModel& model, double s, const SequentialDraw& draw);

enum class UniformMode {
  Common,       // one U per replicate shared by every grid point
  Independent,  // fresh U per (grid point, replicate)
};

struct CurvePoint {
  double s;
  EstimatorOutput pdf;
  EstimatorOutput cdf;
};

struct DensityCurve {
  std::vector<CurvePoint> points;
  std::int64_t redraws = 0;
  double cpu_seconds = 0.0;
};

DensityCurve density_curve(const JointModel& model, std::span<const double> grid,
                           std::int64_t replicates, std::uint64_t seed,
                           UniformMode mode = UniformMode::Common, int workers = 1);

}  // namespace sumdens
