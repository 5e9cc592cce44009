#include "combustion1d/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace combustion1d {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive, got " + std::to_string(value));
  }
}

// theta^alpha exp(-A/theta) without the ignition indicator.
double arrhenius(const ArrheniusParams& p, double theta) noexcept {
  return std::pow(theta, p.alpha) * std::exp(-p.act / theta);
}

// Composite Simpson weights for `intervals` (even) subintervals of [lo, hi].
template <typename F>
double simpson(double lo, double hi, int intervals, F&& f) {
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
  }
  return sum * h / 3.0;
}

} // namespace

void FluidParams::validate() const {
  require_positive(a, "a");
  require_positive(mu, "mu");
  require_positive(kappa, "kappa");
  require_positive(q, "q");
  require_positive(big_k, "K");
  require_positive(d, "d");
}

void ArrheniusParams::validate() const {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("alpha must be non-negative");
  }
  require_positive(act, "A");
  require_positive(theta_ign, "theta_ign");
  if (!(theta_cap >= theta_ign)) {
    throw std::invalid_argument("theta_cap must not be below theta_ign");
  }
}

double bump(double s) noexcept {
  if (s <= -1.0 || s >= 1.0) {
    return 0.0;
  }
  return std::exp(-1.0 / (1.0 - s * s));
}

ReactionRate::ReactionRate(ArrheniusParams params) : params_(params) {
  params_.validate();
  sup_ = params_.theta_cap > params_.theta_ign ? arrhenius(params_, params_.theta_cap) : 0.0;
}

ReactionRate::ReactionRate(ArrheniusParams params, double eta) : params_(params), eta_(eta) {
  params_.validate();
  const double cap = params_.theta_cap;
  const double ign = params_.theta_ign;
  const auto cells = static_cast<std::size_t>(std::ceil(cap / (eta / 10.0)));
  table_dx_ = cap / static_cast<double>(cells);

  // Active (unindicated, clamped) branch of the rate.
  auto active = [&](double theta) { return arrhenius(params_, std::min(theta, cap)); };

  std::vector<double> table(cells + 1, 0.0);
  if (cap > ign) {
    for (std::size_t i = 0; i <= cells; ++i) {
      const double theta = static_cast<double>(i) * table_dx_;
      // Kernel variable s maps to theta - eta*s; the rate is active for s < jump.
      const double jump = (theta - ign) / eta;
      if (jump <= -1.0) {
        continue;
      }
      const double split = std::min(jump, 1.0);
      const double num = simpson(-1.0, split, kMollifierNodes,
                                 [&](double s) { return bump(s) * active(theta - eta * s); });
      double den = simpson(-1.0, split, kMollifierNodes, bump);
      if (split < 1.0) {
        den += simpson(split, 1.0, kMollifierNodes, bump);
      }
      table[i] = den > 0.0 ? num / den : 0.0;
    }
  }
  sup_ = *std::max_element(table.begin(), table.end());
  table_ = std::make_shared<const std::vector<double>>(std::move(table));
}

double ReactionRate::raw(double theta) const noexcept {
  const double clamped = std::min(theta, params_.theta_cap);
  return clamped > params_.theta_ign ? arrhenius(params_, clamped) : 0.0;
}

double ReactionRate::operator()(double theta) const noexcept {
  if (!table_) {
    return raw(theta);
  }
  if (theta <= params_.theta_ign - eta_) {
    return 0.0;
  }
  const auto& table = *table_;
  const double pos = theta / table_dx_;
  if (pos >= static_cast<double>(table.size() - 1)) {
    return table.back();
  }
  const auto i = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * table[i] + w * table[i + 1];
}

ReactionRate ReactionRate::mollified(double eta) const {
  if (!(eta > 0.0)) {
    throw std::invalid_argument("mollification width must be positive");
  }
  return ReactionRate(params_, eta);
}

ReactionRate mollify(const ReactionRate& rate, double eta) { return rate.mollified(eta); }

} // namespace combustion1d
