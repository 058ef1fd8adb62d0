#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cuttree/rng.hpp"

namespace cuttree {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // +inf when the second moment diverges
};

// Critical offspring law nu. Immutable; copies share the cached tables.
class OffspringModel {
 public:
  enum class Family { geometric, power_tail, explicit_pmf };

  // nu(k) = 2^-(k+1).
  static OffspringModel geometric_critical();
  // nu(k) = k^-(alpha+1) / zeta(alpha) for k >= 1, nu(0) = 1 - zeta(alpha+1)/zeta(alpha).
  static OffspringModel power_tail_critical(double alpha);
  // Finite support pmf, pmf[k] = nu(k). Checked for normalization, criticality
  // and nu(0) > 0.
  static OffspringModel from_pmf(std::vector<double> pmf, std::string label = "explicit");

  Family family() const { return family_; }
  const std::string& label() const { return label_; }
  double alpha() const { return alpha_; }
  // Largest k with nu(k) > 0 when the support is finite.
  std::optional<std::int64_t> support_cap() const;
  bool has_finite_variance() const { return family_ != Family::power_tail; }
  // gcd of the support; trees only have edge counts that are multiples of it.
  std::int64_t period() const { return period_; }
  bool is_aperiodic() const { return period_ == 1; }

  double pmf(std::int64_t k) const;
  // P(Z > k).
  double survival(std::int64_t k) const;
  double cdf(std::int64_t k) const { return 1.0 - survival(k); }
  // P(Zhat > r) for the size-biased law, r >= 0.
  double size_biased_survival(std::int64_t r) const;

  Moments moments() const;

  // Inverse-CDF draw from the cached table, continued exactly into the tail.
  std::int64_t sample(Rng& rng) const;

 private:
  OffspringModel() = default;
  void build_table(std::int64_t size);
  std::int64_t tail_quantile(double u) const;

  Family family_ = Family::geometric;
  std::string label_;
  double alpha_ = 0.0;
  double zeta_alpha_ = 0.0;
  std::int64_t period_ = 1;
  std::shared_ptr<const std::vector<double>> explicit_pmf_;
  // cdf_[k] = P(Z <= k) for k < cdf_->size().
  std::shared_ptr<const std::vector<double>> cdf_;
};

// nu-hat(r) = r nu(r); r = 0 is a domain error.
double size_biased_pmf(const OffspringModel& model, std::int64_t r);

// sup_{1 <= r <= r_max} r nu-hat(r) / P(Zhat > r).
double hypothesis_h_sup(const OffspringModel& model, std::int64_t r_max);

class ScalingSequence {
 public:
  enum class Kind { finite_variance, tail_inversion };

  explicit ScalingSequence(const OffspringModel& model);

  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  // a_n: sigma sqrt(n), or min{r >= 1 : P(Z - 1 > r) <= 1/n}.
  double evaluate(std::int64_t n) const;
  double operator()(std::int64_t n) const { return evaluate(n); }

 private:
  Kind kind_;
  double sigma_ = 0.0;
  OffspringModel model_;
};

inline ScalingSequence scaling_sequence(const OffspringModel& model) { return ScalingSequence(model); }

}  // namespace cuttree
