#ifndef ARCHTEST_COPULA_HPP
#define ARCHTEST_COPULA_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "archtest/rng.hpp"

namespace archtest {

// One bivariate observation with uniform margins.
using UnitPair = std::pair<double, double>;

// A bivariate copula: exact CDF plus a sampler producing draws with
// uniform-(0,1) margins. Models are immutable after construction and safe
// to share across threads; samplers mutate only the caller-owned RNG.
class Copula {
 public:
  virtual ~Copula() = default;
  virtual double cdf(double u1, double u2) const = 0;
  virtual UnitPair sample(Rng& rng) const = 0;
  virtual std::string describe() const = 0;

  // Diagonal section C(u,u), used for the Figure-2-style diagnostics.
  double diagonal(double u) const { return cdf(u, u); }
};

using CopulaPtr = std::shared_ptr<const Copula>;

class IndependenceCopula final : public Copula {
 public:
  double cdf(double u1, double u2) const override;
  UnitPair sample(Rng& rng) const override;
  std::string describe() const override { return "indep()"; }
};

// Frechet upper bound M(u1,u2) = min(u1,u2); comonotone.
class FrechetMCopula final : public Copula {
 public:
  double cdf(double u1, double u2) const override;
  UnitPair sample(Rng& rng) const override;
  std::string describe() const override { return "m()"; }
};

// Clayton copula. theta > 0 is the usual strict family; theta in (-1,0) is
// the negative-dependence branch with the truncated-generator pseudo-inverse
// (the CDF carries a max(.,0)).
class ClaytonCopula final : public Copula {
 public:
  explicit ClaytonCopula(double theta);
  double cdf(double u1, double u2) const override;
  UnitPair sample(Rng& rng) const override;
  std::string describe() const override;
  double theta() const { return theta_; }

 private:
  double theta_;
};

// Gumbel copula, theta >= 1; theta == 1 is independence. Sampling uses the
// Marshall-Olkin frailty construction with a Kanter positive-stable draw.
class GumbelCopula final : public Copula {
 public:
  explicit GumbelCopula(double theta);
  double cdf(double u1, double u2) const override;
  UnitPair sample(Rng& rng) const override;
  std::string describe() const override;
  double theta() const { return theta_; }

 private:
  double theta_;
};

// Bivariate Student-t copula with correlation rho and integer df. The CDF
// has no closed form; it is evaluated to ~1e-12 by one-dimensional adaptive
// quadrature of the conditional representation (needed for diagnostics only,
// the sampler is what the experiments use).
class StudentTCopula final : public Copula {
 public:
  StudentTCopula(double rho, int df);
  double cdf(double u1, double u2) const override;
  UnitPair sample(Rng& rng) const override;
  std::string describe() const override;
  double rho() const { return rho_; }
  int df() const { return df_; }

 private:
  double rho_;
  int df_;
};

// Asymmetric negative logistic extreme-value copula (Joe 1990):
//   C(u1,u2) = exp(-l(x1,x2)),  x_p = -log(u_p),
//   l(x1,x2) = x1 + x2 - ((psi1*x1)^-theta + (psi2*x2)^-theta)^(-1/theta),
// with theta > 0, psi1, psi2 in (0,1]. Upper tail dependence
//   lambda_U = (psi1^-theta + psi2^-theta)^(-1/theta),
// increasing in theta with supremum min(psi1, psi2).
class AsymNegLogisticCopula final : public Copula {
 public:
  AsymNegLogisticCopula(double theta, double psi1, double psi2);
  double cdf(double u1, double u2) const override;
  UnitPair sample(Rng& rng) const override;
  std::string describe() const override;
  double theta() const { return theta_; }
  double psi1() const { return psi1_; }
  double psi2() const { return psi2_; }
  double lambda_u() const;

 private:
  // Conditional cdf P(U2 <= u2 | U1 = u1), closed form; inverted by
  // bisection in the sampler.
  double conditional(double u1, double u2) const;

  double theta_, psi1_, psi2_;
};

// Ordinal sum over a finite partition {[a_i,b_i]} of [0,1]:
//   C(u) = a_i + (b_i - a_i) C_i((u1-a_i)/(b_i-a_i), (u2-a_i)/(b_i-a_i))
// inside J_i x J_i and min(u1,u2) otherwise.
class OrdinalSumCopula final : public Copula {
 public:
  struct Block {
    double lo, hi;
    CopulaPtr component;
  };
  explicit OrdinalSumCopula(std::vector<Block> blocks);
  double cdf(double u1, double u2) const override;
  UnitPair sample(Rng& rng) const override;
  std::string describe() const override;
  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  std::vector<Block> blocks_;
};

enum class FamilyTag { kClayton, kGumbel, kStudentT };

// Parameter maps from Kendall's tau:
//   Clayton theta = 2 tau / (1 - tau), Gumbel theta = 1/(1 - tau),
//   Student-t rho = sin(pi tau / 2).
// tau == 0 maps Clayton and Gumbel to their independence limits.
CopulaPtr param_from_tau(FamilyTag family, double tau, int df = 1);

// Solves the asymmetric negative logistic dependence parameter theta so that
// lambda_U(theta; psi1, psi2) == lambda_u, by monotone bisection (tolerance
// 1e-10 on theta brackets / 1e-12 on lambda residual).
CopulaPtr param_from_lambda_u(double psi1, double psi2, double lambda_u);

}  // namespace archtest

#endif  // ARCHTEST_COPULA_HPP
