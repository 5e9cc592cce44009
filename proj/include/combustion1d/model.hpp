#ifndef COMBUSTION1D_MODEL_HPP
#define COMBUSTION1D_MODEL_HPP

#include <memory>
#include <vector>

namespace combustion1d {

/// Physical constants of the reacting mixture. All must be strictly positive.
struct FluidParams {
  double a = 1.0;      ///< gas constant times molecular weight
  double mu = 1.0;     ///< bulk viscosity
  double kappa = 1.0;  ///< heat conduction
  double q = 1.0;      ///< reaction energy release
  double big_k = 10.0; ///< reaction rate coefficient K
  double d = 0.1;      ///< species diffusion

  /// Throws std::invalid_argument naming the first non-positive field.
  void validate() const;
};

/// Arrhenius constants of the rate function.
struct ArrheniusParams {
  double alpha = 1.0;     ///< temperature exponent, >= 0
  double act = 1.0;       ///< activation constant A, > 0
  double theta_ign = 1.2; ///< ignition threshold, > 0
  double theta_cap = 8.0; ///< tabulation ceiling, >= theta_ign

  void validate() const;
};

/// Reaction-rate function phi(theta) = theta^alpha exp(-A/theta) 1{theta > theta_ign},
/// clamped to its value at theta_cap above the cap. With eta > 0 the rate is the
/// convolution of the clamped rate with a C-infinity bump of half-width eta,
/// tabulated once at construction and evaluated by linear interpolation.
///
/// Instances are immutable; copies share the table.
class ReactionRate {
public:
  explicit ReactionRate(ArrheniusParams params = {});

  /// Evaluates the rate. Requires theta >= 0; negative input is treated as 0.
  [[nodiscard]] double operator()(double theta) const noexcept;

  /// The same Arrhenius law mollified at width eta. Throws on eta <= 0.
  [[nodiscard]] ReactionRate mollified(double eta) const;

  /// max of the rate over [0, theta_cap].
  [[nodiscard]] double sup() const noexcept { return sup_; }

  [[nodiscard]] double eta() const noexcept { return eta_; }
  [[nodiscard]] const ArrheniusParams& params() const noexcept { return params_; }

  /// Unmollified rate at theta (clamped at theta_cap).
  [[nodiscard]] double raw(double theta) const noexcept;

  /// Spacing of the mollified table; 0 for the raw rate.
  [[nodiscard]] double table_spacing() const noexcept { return table_dx_; }
  [[nodiscard]] std::size_t table_size() const noexcept { return table_ ? table_->size() : 0; }

private:
  ReactionRate(ArrheniusParams params, double eta);

  ArrheniusParams params_;
  double eta_ = 0.0;
  double table_dx_ = 0.0;
  std::shared_ptr<const std::vector<double>> table_;
  double sup_ = 0.0;
};

// Free-function forms of the rate operations.
[[nodiscard]] inline double phi(const ReactionRate& rate, double theta) noexcept { return rate(theta); }
[[nodiscard]] ReactionRate mollify(const ReactionRate& rate, double eta);
[[nodiscard]] inline double rate_sup(const ReactionRate& rate) noexcept { return rate.sup(); }

/// Standard bump exp(-1/(1-s^2)) on (-1, 1), unnormalized.
[[nodiscard]] double bump(double s) noexcept;

/// Quadrature nodes per side of the jump used by the convolution.
inline constexpr int kMollifierNodes = 64;

} // namespace combustion1d

#endif // COMBUSTION1D_MODEL_HPP
