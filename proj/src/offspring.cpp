#include "cuttree/offspring.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cuttree/errors.hpp"

namespace cuttree {
namespace {

constexpr std::int64_t kTableSize = 4096;

double hurwitz_zeta(double s, double q) {
  gsl_sf_result result;
  const int status = gsl_sf_hzeta_e(s, q, &result);
  if (status == GSL_EUNDRFLW) return 0.0;
  if (status != GSL_SUCCESS) {
    std::ostringstream msg;
    msg << "hurwitz zeta failed for s=" << s << ", q=" << q << ": " << gsl_strerror(status);
    throw std::runtime_error(msg.str());
  }
  return result.val;
}

struct GslHandlerOff {
  GslHandlerOff() { gsl_set_error_handler_off(); }
};
const GslHandlerOff gsl_handler_off;

}  // namespace

OffspringModel OffspringModel::geometric_critical() {
  OffspringModel m;
  m.family_ = Family::geometric;
  m.label_ = "geometric";
  m.build_table(64);
  return m;
}

OffspringModel OffspringModel::power_tail_critical(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    std::ostringstream msg;
    msg << "power-tail index must lie in (1,2), got " << alpha;
    throw DomainError(msg.str());
  }
  OffspringModel m;
  m.family_ = Family::power_tail;
  m.alpha_ = alpha;
  m.zeta_alpha_ = hurwitz_zeta(alpha, 1.0);
  std::ostringstream label;
  label << "power_tail(alpha=" << alpha << ")";
  m.label_ = label.str();
  m.build_table(kTableSize);
  return m;
}

OffspringModel OffspringModel::from_pmf(std::vector<double> pmf, std::string label) {
  while (!pmf.empty() && pmf.back() == 0.0) pmf.pop_back();
  if (pmf.empty()) throw DomainError("offspring pmf is empty");
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (!(pmf[k] >= 0.0)) throw DomainError("offspring pmf has a negative entry");
    total += pmf[k];
    mean += static_cast<double>(k) * pmf[k];
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("offspring pmf does not sum to 1");
  if (std::abs(mean - 1.0) > 1e-10) throw DomainError("offspring law is not critical (mean != 1)");
  if (!(pmf[0] > 0.0)) throw DomainError("offspring law needs nu(0) > 0");

  OffspringModel m;
  m.family_ = Family::explicit_pmf;
  m.label_ = std::move(label);
  std::int64_t g = 0;
  for (std::size_t k = 1; k < pmf.size(); ++k) {
    if (pmf[k] > 0.0) g = std::gcd(g, static_cast<std::int64_t>(k));
  }
  m.period_ = g;
  m.explicit_pmf_ = std::make_shared<const std::vector<double>>(std::move(pmf));
  m.build_table(static_cast<std::int64_t>(m.explicit_pmf_->size()));
  return m;
}

std::optional<std::int64_t> OffspringModel::support_cap() const {
  if (family_ == Family::explicit_pmf) return static_cast<std::int64_t>(explicit_pmf_->size()) - 1;
  return std::nullopt;
}

double OffspringModel::pmf(std::int64_t k) const {
  if (k < 0) return 0.0;
  switch (family_) {
    case Family::geometric:
      return std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(k + 1, 2000)));
    case Family::power_tail:
      if (k == 0) return 1.0 - hurwitz_zeta(alpha_ + 1.0, 1.0) / zeta_alpha_;
      return std::pow(static_cast<double>(k), -(alpha_ + 1.0)) / zeta_alpha_;
    case Family::explicit_pmf:
      return k < static_cast<std::int64_t>(explicit_pmf_->size()) ? (*explicit_pmf_)[k] : 0.0;
  }
  return 0.0;
}

double OffspringModel::survival(std::int64_t k) const {
  if (k < 0) return 1.0;
  switch (family_) {
    case Family::geometric:
      return std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(k + 1, 2000)));
    case Family::power_tail:
      return hurwitz_zeta(alpha_ + 1.0, static_cast<double>(k + 1)) / zeta_alpha_;
    case Family::explicit_pmf: {
      double s = 0.0;
      for (std::size_t j = explicit_pmf_->size(); j-- > static_cast<std::size_t>(k + 1);) s += (*explicit_pmf_)[j];
      return s;
    }
  }
  return 0.0;
}

double OffspringModel::size_biased_survival(std::int64_t r) const {
  if (r < 0) return 1.0;
  switch (family_) {
    case Family::geometric:
      return static_cast<double>(r + 2) * std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(r + 1, 2000)));
    case Family::power_tail:
      return hurwitz_zeta(alpha_, static_cast<double>(r + 1)) / zeta_alpha_;
    case Family::explicit_pmf: {
      double s = 0.0;
      for (std::size_t j = explicit_pmf_->size(); j-- > static_cast<std::size_t>(r + 1);) {
        s += static_cast<double>(j) * (*explicit_pmf_)[j];
      }
      return s;
    }
  }
  return 0.0;
}

Moments OffspringModel::moments() const {
  switch (family_) {
    case Family::geometric:
      return {1.0, 2.0};
    case Family::power_tail:
      return {1.0, std::numeric_limits<double>::infinity()};
    case Family::explicit_pmf: {
      double mean = 0.0;
      double second = 0.0;
      for (std::size_t k = 0; k < explicit_pmf_->size(); ++k) {
        const double kk = static_cast<double>(k);
        mean += kk * (*explicit_pmf_)[k];
        second += kk * kk * (*explicit_pmf_)[k];
      }
      return {mean, second - mean * mean};
    }
  }
  return {};
}

void OffspringModel::build_table(std::int64_t size) {
  auto cdf = std::make_shared<std::vector<double>>(static_cast<std::size_t>(size));
  for (std::int64_t k = 0; k < size; ++k) (*cdf)[k] = 1.0 - survival(k);
  if (family_ == Family::explicit_pmf) cdf->back() = 1.0;
  cdf_ = std::move(cdf);
}

std::int64_t OffspringModel::tail_quantile(double u) const {
  // Smallest k with P(Z > k) < 1 - u, found by doubling then bisection.
  const double q = 1.0 - u;
  std::int64_t lo = static_cast<std::int64_t>(cdf_->size()) - 1;  // survival(lo) >= q
  std::int64_t hi = 2 * (lo + 1);
  while (survival(hi) >= q) {
    lo = hi;
    if (hi > std::numeric_limits<std::int64_t>::max() / 4) return hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (survival(mid) < q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::int64_t OffspringModel::sample(Rng& rng) const {
  const double u = uniform01(rng);
  const auto& cdf = *cdf_;
  if (u < cdf.back()) {
    return std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
  }
  return tail_quantile(u);
}

double size_biased_pmf(const OffspringModel& model, std::int64_t r) {
  if (r < 1) throw DomainError("size-biased law has no mass at r < 1");
  return static_cast<double>(r) * model.pmf(r);
}

double hypothesis_h_sup(const OffspringModel& model, std::int64_t r_max) {
  double sup = 0.0;
  for (std::int64_t r = 1; r <= r_max; ++r) {
    const double tail = model.size_biased_survival(r);
    if (!(tail > 0.0)) break;
    sup = std::max(sup, static_cast<double>(r) * size_biased_pmf(model, r) / tail);
  }
  return sup;
}

ScalingSequence::ScalingSequence(const OffspringModel& model)
    : kind_(model.has_finite_variance() ? Kind::finite_variance : Kind::tail_inversion), model_(model) {
  if (kind_ == Kind::finite_variance) sigma_ = std::sqrt(model.moments().variance);
}

double ScalingSequence::evaluate(std::int64_t n) const {
  if (n < 1) throw DomainError("scaling sequence is defined for n >= 1");
  if (kind_ == Kind::finite_variance) return sigma_ * std::sqrt(static_cast<double>(n));
  const double level = 1.0 / static_cast<double>(n);
  // P(Z - 1 > r) = P(Z > r + 1), non-increasing in r.
  auto tail = [&](std::int64_t r) { return model_.survival(r + 1); };
  if (tail(1) <= level) return 1.0;
  std::int64_t lo = 1;
  std::int64_t hi = 2;
  while (tail(hi) > level) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (tail(mid) <= level) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return static_cast<double>(hi);
}

}  // namespace cuttree
