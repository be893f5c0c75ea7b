#include "sumdens/marginal.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "sumdens/error.hpp"
#include "sumdens/normal.hpp"

namespace sumdens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLn2 = 0.69314718055994530942;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "marginal parameter " << what << " must be positive and finite, got " << v;
    throw_invalid(os.str());
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "marginal parameter " << what << " must be finite, got " << v;
    throw_invalid(os.str());
  }
}

// log(1 - e^{-h}) for h > 0.
double log1mexp(double h) {
  return h < kLn2 ? std::log(-std::expm1(-h)) : std::log1p(-std::exp(-h));
}

}  // namespace

Marginal Marginal::exponential(double rate) {
  require_positive(rate, "rate");
  return {MarginalFamily::Exponential, rate, 0.0};
}

Marginal Marginal::weibull(double shape, double scale) {
  require_positive(shape, "shape");
  require_positive(scale, "scale");
  return {MarginalFamily::Weibull, shape, scale};
}

Marginal Marginal::lognormal(double mu, double sigma) {
  require_finite(mu, "mu");
  require_positive(sigma, "sigma");
  return {MarginalFamily::Lognormal, mu, sigma};
}

Marginal Marginal::normal(double mu, double sigma) {
  require_finite(mu, "mu");
  require_positive(sigma, "sigma");
  return {MarginalFamily::Normal, mu, sigma};
}

Marginal Marginal::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw_invalid("marginal spec '" + text + "' must look like family:p1[,p2]");
  const std::string name = text.substr(0, colon);
  std::vector<double> params;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      params.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw_invalid("marginal spec '" + text + "': cannot parse '" + item + "'");
    }
  }
  auto want = [&](std::size_t k) {
    if (params.size() != k)
      throw_invalid("marginal spec '" + text + "': expected " + std::to_string(k) +
                    " parameter(s)");
  };
  if (name == "exp" || name == "exponential") {
    want(1);
    return exponential(params[0]);
  }
  if (name == "weibull") {
    want(2);
    return weibull(params[0], params[1]);
  }
  if (name == "lognormal") {
    want(2);
    return lognormal(params[0], params[1]);
  }
  if (name == "normal") {
    want(2);
    return normal(params[0], params[1]);
  }
  throw_invalid("unknown marginal family '" + name + "'");
}

std::string Marginal::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case MarginalFamily::Exponential: os << "exp:" << a_; break;
    case MarginalFamily::Weibull: os << "weibull:" << a_ << ',' << b_; break;
    case MarginalFamily::Lognormal: os << "lognormal:" << a_ << ',' << b_; break;
    case MarginalFamily::Normal: os << "normal:" << a_ << ',' << b_; break;
  }
  return os.str();
}

double Marginal::hazard(double x) const {
  if (family_ == MarginalFamily::Exponential) return a_ * x;
  return std::pow(x / b_, a_);
}

double Marginal::from_hazard(double h) const {
  double x = family_ == MarginalFamily::Exponential ? h / a_ : b_ * std::pow(h, 1.0 / a_);
  // Keep draws strictly inside the support even when the quantile underflows.
  return x > 0.0 ? x : std::numeric_limits<double>::min();
}

MarginalEval Marginal::eval(double x) const {
  return {pdf(x), log_pdf(x), cdf(x), score(x)};
}

double Marginal::log_pdf(double x) const {
  switch (family_) {
    case MarginalFamily::Exponential:
      return x < 0.0 ? -kInf : std::log(a_) - a_ * x;
    case MarginalFamily::Weibull: {
      if (x < 0.0) return -kInf;
      if (x == 0.0) return a_ < 1.0 ? kInf : (a_ == 1.0 ? -std::log(b_) : -kInf);
      const double lr = std::log(x / b_);
      return std::log(a_ / b_) + (a_ - 1.0) * lr - std::exp(a_ * lr);
    }
    case MarginalFamily::Lognormal: {
      if (x <= 0.0) return -kInf;
      const double lx = std::log(x);
      const double z = (lx - a_) / b_;
      return normal::log_pdf(z) - lx - std::log(b_);
    }
    case MarginalFamily::Normal:
      return normal::log_pdf((x - a_) / b_) - std::log(b_);
  }
  return kNaN;
}

double Marginal::pdf(double x) const { return std::exp(log_pdf(x)); }

double Marginal::cdf(double x) const {
  switch (family_) {
    case MarginalFamily::Exponential:
    case MarginalFamily::Weibull:
      return x <= 0.0 ? 0.0 : -std::expm1(-hazard(x));
    case MarginalFamily::Lognormal:
      return x <= 0.0 ? 0.0 : normal::cdf((std::log(x) - a_) / b_);
    case MarginalFamily::Normal:
      return normal::cdf((x - a_) / b_);
  }
  return kNaN;
}

double Marginal::log_cdf(double x) const {
  switch (family_) {
    case MarginalFamily::Exponential:
    case MarginalFamily::Weibull:
      return x <= 0.0 ? -kInf : log1mexp(hazard(x));
    case MarginalFamily::Lognormal:
      return x <= 0.0 ? -kInf : normal::log_cdf((std::log(x) - a_) / b_);
    case MarginalFamily::Normal:
      return normal::log_cdf((x - a_) / b_);
  }
  return kNaN;
}

double Marginal::survival(double x) const {
  switch (family_) {
    case MarginalFamily::Exponential:
    case MarginalFamily::Weibull:
      return x <= 0.0 ? 1.0 : std::exp(-hazard(x));
    case MarginalFamily::Lognormal:
      return x <= 0.0 ? 1.0 : normal::cdf(-(std::log(x) - a_) / b_);
    case MarginalFamily::Normal:
      return normal::cdf(-(x - a_) / b_);
  }
  return kNaN;
}

double Marginal::score(double x) const {
  switch (family_) {
    case MarginalFamily::Exponential:
      return x > 0.0 ? -a_ : kNaN;
    case MarginalFamily::Weibull:
      return x > 0.0 ? ((a_ - 1.0) - a_ * hazard(x)) / x : kNaN;
    case MarginalFamily::Lognormal:
      return x > 0.0 ? -(1.0 + (std::log(x) - a_) / (b_ * b_)) / x : kNaN;
    case MarginalFamily::Normal:
      return -(x - a_) / (b_ * b_);
  }
  return kNaN;
}

double Marginal::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    std::ostringstream os;
    os << "quantile: probability " << u << " outside (0,1)";
    throw_domain(os.str());
  }
  switch (family_) {
    case MarginalFamily::Exponential:
    case MarginalFamily::Weibull:
      return from_hazard(-std::log1p(-u));
    case MarginalFamily::Lognormal:
      return std::exp(a_ + b_ * normal::quantile(u));
    case MarginalFamily::Normal:
      return a_ + b_ * normal::quantile(u);
  }
  return kNaN;
}

double Marginal::quantile_upper(double q) const {
  if (!(q > 0.0 && q < 1.0)) {
    std::ostringstream os;
    os << "quantile_upper: tail probability " << q << " outside (0,1)";
    throw_domain(os.str());
  }
  switch (family_) {
    case MarginalFamily::Exponential:
    case MarginalFamily::Weibull:
      return from_hazard(-std::log(q));
    case MarginalFamily::Lognormal:
      return std::exp(a_ - b_ * normal::quantile(q));
    case MarginalFamily::Normal:
      return a_ - b_ * normal::quantile(q);
  }
  return kNaN;
}

double Marginal::normal_score(double x) const {
  switch (family_) {
    case MarginalFamily::Exponential:
    case MarginalFamily::Weibull: {
      if (x <= 0.0) return -kInf;
      const double h = hazard(x);
      if (h < kLn2) return normal::quantile_from_log(log1mexp(h));
      return -normal::quantile_from_log(-h);
    }
    case MarginalFamily::Lognormal:
      return x <= 0.0 ? -kInf : (std::log(x) - a_) / b_;
    case MarginalFamily::Normal:
      return (x - a_) / b_;
  }
  return kNaN;
}

double Marginal::from_normal_score(double z) const {
  switch (family_) {
    case MarginalFamily::Exponential:
    case MarginalFamily::Weibull: {
      const double h = z <= 0.0 ? -std::log1p(-normal::cdf(z)) : -normal::log_cdf(-z);
      return from_hazard(h);
    }
    case MarginalFamily::Lognormal:
      return std::exp(a_ + b_ * z);
    case MarginalFamily::Normal:
      return a_ + b_ * z;
  }
  return kNaN;
}

}  // namespace sumdens
