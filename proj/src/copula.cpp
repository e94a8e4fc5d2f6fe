#include "archtest/copula.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace archtest {

namespace {

double uniform_open(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u;
  do {
    u = dist(rng);
  } while (u <= 0.0 || u >= 1.0);
  return u;
}

double exponential(Rng& rng) { return -std::log(uniform_open(rng)); }

std::string format_params(const std::string& head, std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  os.precision(12);
  os << head << '(';
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) os << ',';
    os << k << '=' << v;
    first = false;
  }
  os << ')';
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Independence / Frechet-M

double IndependenceCopula::cdf(double u1, double u2) const { return u1 * u2; }

UnitPair IndependenceCopula::sample(Rng& rng) const {
  double u1 = uniform_open(rng);
  double u2 = uniform_open(rng);
  return {u1, u2};
}

double FrechetMCopula::cdf(double u1, double u2) const {
  return std::min(u1, u2);
}

UnitPair FrechetMCopula::sample(Rng& rng) const {
  double u = uniform_open(rng);
  return {u, u};
}

// ---------------------------------------------------------------------------
// Clayton

ClaytonCopula::ClaytonCopula(double theta) : theta_(theta) {
  if (!(theta > -1.0) || theta == 0.0) {
    throw std::domain_error(
        "clayton: theta must lie in (-1,0) or (0,inf), got " +
        std::to_string(theta));
  }
}

double ClaytonCopula::cdf(double u1, double u2) const {
  if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
  if (u1 >= 1.0) return std::min(u2, 1.0);
  if (u2 >= 1.0) return u1;
  double s = std::pow(u1, -theta_) + std::pow(u2, -theta_) - 1.0;
  if (s <= 0.0) return 0.0;  // truncated pseudo-inverse branch, theta < 0
  return std::pow(s, -1.0 / theta_);
}

UnitPair ClaytonCopula::sample(Rng& rng) const {
  // Conditional-distribution inversion; closed form for both branches.
  double u = uniform_open(rng);
  double t = uniform_open(rng);
  double inner =
      1.0 + std::pow(u, -theta_) * (std::pow(t, -theta_ / (1.0 + theta_)) - 1.0);
  double v = std::pow(inner, -1.0 / theta_);
  v = std::min(std::max(v, std::numeric_limits<double>::min()), 1.0);
  return {u, v};
}

std::string ClaytonCopula::describe() const {
  return format_params("clayton", {{"theta", theta_}});
}

// ---------------------------------------------------------------------------
// Gumbel

GumbelCopula::GumbelCopula(double theta) : theta_(theta) {
  if (!(theta >= 1.0)) {
    throw std::domain_error("gumbel: theta must be >= 1, got " +
                            std::to_string(theta));
  }
}

double GumbelCopula::cdf(double u1, double u2) const {
  if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
  if (u1 >= 1.0) return std::min(u2, 1.0);
  if (u2 >= 1.0) return u1;
  double x = -std::log(u1), y = -std::log(u2);
  return std::exp(-std::pow(std::pow(x, theta_) + std::pow(y, theta_),
                            1.0 / theta_));
}

UnitPair GumbelCopula::sample(Rng& rng) const {
  if (theta_ == 1.0) {
    return {uniform_open(rng), uniform_open(rng)};
  }
  // Marshall-Olkin frailty: S positive stable with Laplace transform
  // exp(-t^alpha), alpha = 1/theta, drawn with Kanter's (1975) method.
  double alpha = 1.0 / theta_;
  double angle = uniform_open(rng) * std::acos(-1.0);
  double w = exponential(rng);
  double a = std::sin((1.0 - alpha) * angle) *
             std::pow(std::sin(alpha * angle), alpha / (1.0 - alpha)) /
             std::pow(std::sin(angle), 1.0 / (1.0 - alpha));
  double stable = std::pow(a / w, (1.0 - alpha) / alpha);
  double u1 = std::exp(-std::pow(exponential(rng) / stable, alpha));
  double u2 = std::exp(-std::pow(exponential(rng) / stable, alpha));
  auto clamp01 = [](double u) {
    return std::min(std::max(u, std::numeric_limits<double>::min()),
                    1.0 - std::numeric_limits<double>::epsilon());
  };
  return {clamp01(u1), clamp01(u2)};
}

std::string GumbelCopula::describe() const {
  return format_params("gumbel", {{"theta", theta_}});
}

// ---------------------------------------------------------------------------
// Student t

StudentTCopula::StudentTCopula(double rho, int df) : rho_(rho), df_(df) {
  if (!(rho > -1.0 && rho < 1.0)) {
    throw std::domain_error("t: rho must lie in (-1,1), got " +
                            std::to_string(rho));
  }
  if (df < 1) {
    throw std::domain_error("t: df must be a positive integer, got " +
                            std::to_string(df));
  }
}

double StudentTCopula::cdf(double u1, double u2) const {
  if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
  if (u1 >= 1.0) return std::min(u2, 1.0);
  if (u2 >= 1.0) return u1;
  double nu = df_;
  boost::math::students_t dist_nu(nu);
  boost::math::students_t dist_nu1(nu + 1.0);
  double x = boost::math::quantile(dist_nu, u1);
  double y = boost::math::quantile(dist_nu, u2);
  // P(X<=x, Y<=y) via the conditional law: Y | X=s is a rescaled t with
  // nu+1 degrees of freedom.
  double one_minus_r2 = 1.0 - rho_ * rho_;
  auto integrand = [&](double s) {
    double scale = std::sqrt((nu + 1.0) / ((nu + s * s) * one_minus_r2));
    return boost::math::pdf(dist_nu, s) *
           boost::math::cdf(dist_nu1, (y - rho_ * s) * scale);
  };
  double p = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, -std::numeric_limits<double>::infinity(), x, 12, 1e-13);
  return std::min(std::max(p, 0.0), std::min(u1, u2));
}

UnitPair StudentTCopula::sample(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  double z1 = normal(rng);
  double z2 = rho_ * z1 + std::sqrt(1.0 - rho_ * rho_) * normal(rng);
  std::chi_squared_distribution<double> chi2(static_cast<double>(df_));
  double scale = std::sqrt(static_cast<double>(df_) / chi2(rng));
  boost::math::students_t dist(static_cast<double>(df_));
  double u1 = boost::math::cdf(dist, z1 * scale);
  double u2 = boost::math::cdf(dist, z2 * scale);
  auto clamp01 = [](double u) {
    return std::min(std::max(u, std::numeric_limits<double>::min()),
                    1.0 - std::numeric_limits<double>::epsilon());
  };
  return {clamp01(u1), clamp01(u2)};
}

std::string StudentTCopula::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "t(rho=" << rho_ << ",df=" << df_ << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Asymmetric negative logistic (Joe 1990)

AsymNegLogisticCopula::AsymNegLogisticCopula(double theta, double psi1,
                                             double psi2)
    : theta_(theta), psi1_(psi1), psi2_(psi2) {
  if (!(theta > 0.0)) {
    throw std::domain_error("aneglog: theta must be > 0, got " +
                            std::to_string(theta));
  }
  if (!(psi1 > 0.0 && psi1 <= 1.0) || !(psi2 > 0.0 && psi2 <= 1.0)) {
    throw std::domain_error("aneglog: psi1, psi2 must lie in (0,1]");
  }
}

double AsymNegLogisticCopula::lambda_u() const {
  return std::pow(std::pow(psi1_, -theta_) + std::pow(psi2_, -theta_),
                  -1.0 / theta_);
}

double AsymNegLogisticCopula::cdf(double u1, double u2) const {
  if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
  if (u1 >= 1.0) return std::min(u2, 1.0);
  if (u2 >= 1.0) return u1;
  double x = -std::log(u1), y = -std::log(u2);
  double s = std::pow(psi1_ * x, -theta_) + std::pow(psi2_ * y, -theta_);
  double g = std::pow(s, -1.0 / theta_);
  return std::exp(-(x + y - g));
}

double AsymNegLogisticCopula::conditional(double u1, double u2) const {
  if (u2 <= 0.0) return 0.0;
  if (u2 >= 1.0) return 1.0;
  double x = -std::log(u1), y = -std::log(u2);
  double s = std::pow(psi1_ * x, -theta_) + std::pow(psi2_ * y, -theta_);
  // d/dx of the stable tail dependence function l(x,y) = x + y - s^(-1/theta)
  double lx = 1.0 - std::pow(s, -1.0 / theta_ - 1.0) *
                        std::pow(psi1_, -theta_) * std::pow(x, -theta_ - 1.0);
  return cdf(u1, u2) * lx / u1;
}

UnitPair AsymNegLogisticCopula::sample(Rng& rng) const {
  double u1 = uniform_open(rng);
  double t = uniform_open(rng);
  // Invert the conditional cdf v -> P(U2 <= v | U1 = u1) by bisection.
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 80 && hi - lo > 1e-14; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (conditional(u1, mid) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double v = 0.5 * (lo + hi);
  v = std::min(std::max(v, std::numeric_limits<double>::min()),
               1.0 - std::numeric_limits<double>::epsilon());
  return {u1, v};
}

std::string AsymNegLogisticCopula::describe() const {
  return format_params("aneglog",
                       {{"theta", theta_}, {"psi1", psi1_}, {"psi2", psi2_}});
}

// ---------------------------------------------------------------------------
// Ordinal sum

OrdinalSumCopula::OrdinalSumCopula(std::vector<Block> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) {
    throw std::domain_error("ordinal: partition must be non-empty");
  }
  double expected_lo = 0.0;
  for (const auto& b : blocks_) {
    if (!b.component) {
      throw std::domain_error("ordinal: missing component copula");
    }
    if (std::abs(b.lo - expected_lo) > 1e-12 || !(b.hi > b.lo)) {
      throw std::domain_error(
          "ordinal: partition must cover [0,1] with abutting blocks");
    }
    expected_lo = b.hi;
  }
  if (std::abs(expected_lo - 1.0) > 1e-12) {
    throw std::domain_error("ordinal: partition must end at 1");
  }
}

double OrdinalSumCopula::cdf(double u1, double u2) const {
  for (const auto& b : blocks_) {
    if (u1 >= b.lo && u1 <= b.hi && u2 >= b.lo && u2 <= b.hi) {
      double w = b.hi - b.lo;
      return b.lo + w * b.component->cdf((u1 - b.lo) / w, (u2 - b.lo) / w);
    }
  }
  return std::min(u1, u2);
}

UnitPair OrdinalSumCopula::sample(Rng& rng) const {
  // Block i is chosen with probability (b_i - a_i); all mass lives on the
  // diagonal blocks J_i x J_i.
  double t = uniform_open(rng);
  double acc = 0.0;
  const Block* chosen = &blocks_.back();
  for (const auto& b : blocks_) {
    acc += b.hi - b.lo;
    if (t <= acc) {
      chosen = &b;
      break;
    }
  }
  auto [v1, v2] = chosen->component->sample(rng);
  double w = chosen->hi - chosen->lo;
  return {chosen->lo + w * v1, chosen->lo + w * v2};
}

std::string OrdinalSumCopula::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "ordinal(";
  bool first = true;
  for (const auto& b : blocks_) {
    if (!first) os << ';';
    os << '[' << b.lo << ',' << b.hi << "]:" << b.component->describe();
    first = false;
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Parameter maps

CopulaPtr param_from_tau(FamilyTag family, double tau, int df) {
  if (!(tau > -1.0 && tau < 1.0)) {
    throw std::domain_error("tau must lie in (-1,1), got " +
                            std::to_string(tau));
  }
  switch (family) {
    case FamilyTag::kClayton:
      if (tau == 0.0) return std::make_shared<IndependenceCopula>();
      return std::make_shared<ClaytonCopula>(2.0 * tau / (1.0 - tau));
    case FamilyTag::kGumbel:
      if (tau < 0.0) {
        throw std::domain_error("gumbel: tau must be >= 0, got " +
                                std::to_string(tau));
      }
      return std::make_shared<GumbelCopula>(1.0 / (1.0 - tau));
    case FamilyTag::kStudentT:
      return std::make_shared<StudentTCopula>(
          std::sin(std::acos(-1.0) * tau / 2.0), df);
  }
  throw std::domain_error("unknown family");
}

CopulaPtr param_from_lambda_u(double psi1, double psi2, double lambda_u) {
  if (!(psi1 > 0.0 && psi1 <= 1.0) || !(psi2 > 0.0 && psi2 <= 1.0)) {
    throw std::domain_error("aneglog: psi1, psi2 must lie in (0,1]");
  }
  double sup = std::min(psi1, psi2);
  if (!(lambda_u > 0.0 && lambda_u < sup)) {
    throw std::domain_error(
        "aneglog: lambdaU must lie in (0, min(psi1,psi2)) = (0," +
        std::to_string(sup) + "), got " + std::to_string(lambda_u));
  }
  auto lu = [&](double theta) {
    return std::pow(std::pow(psi1, -theta) + std::pow(psi2, -theta),
                    -1.0 / theta);
  };
  double lo = 1e-8, hi = 1.0;
  while (lu(hi) < lambda_u) {
    hi *= 2.0;
    if (hi > 1e8) {
      throw std::domain_error("aneglog: lambdaU not attainable");
    }
  }
  while (hi - lo > 1e-10) {
    double mid = 0.5 * (lo + hi);
    if (lu(mid) < lambda_u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::make_shared<AsymNegLogisticCopula>(0.5 * (lo + hi), psi1, psi2);
}

}  // namespace archtest
