#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mildflow/field.hpp"
#include "mildflow/trajectory.hpp"

namespace mildflow {

/// Physical samples of a field on `points` samples per axis.
struct SampledField {
  int dimension = 0;
  int points = 0;
  double period = 0.0;
  std::vector<std::vector<double>> values;  // [component][point]

  std::size_t size() const { return values.empty() ? 0 : values.front().size(); }
  double spacing() const { return period / points; }
};

SampledField sample(const VectorField& f, int points);

/// Point set on a sampling grid.
struct Mask {
  int dimension = 0;
  int points = 0;
  std::vector<std::uint8_t> inside;

  std::size_t count() const;
  static Mask full(int dimension, int points);
};

/// Oversampled max of ||d(x)| - 1|.
double unit_length_deviation(const VectorField& d);

struct SmoothingRow {
  double t = 0.0;                 ///< time since the trajectory start
  double velocity_product = 0.0;  ///< t^{l/2} ||grad^l u||_inf
  double director_product = 0.0;  ///< t^{l/2} ||grad^{l+1} d||_inf
};

struct SmoothingTable {
  int order = 1;
  std::vector<SmoothingRow> rows;
  /// Set when a product grows by more than the factor between consecutive
  /// nodes of the first window.
  bool growth_flag = false;
  double max_velocity_product = 0.0;
  double max_director_product = 0.0;
};

SmoothingTable smoothing_rate_check(const Trajectory& traj, int order, double growth_factor = 10.0);

struct VorticityDirection {
  /// False in 2D: omega is the scalar vorticity and zeta is absent.
  bool applicable = false;
  VectorField omega;
  Mask mask;
  std::optional<SampledField> zeta;  ///< omega / |omega| on the mask, zero elsewhere
  double max_vorticity = 0.0;
  double mask_fraction = 0.0;
};

/// omega = curl u, mask {|omega| > sigma} and zeta = omega / |omega| on a grid
/// oversampled by `oversampling`.
VorticityDirection vorticity_direction(const VectorField& u, double sigma, int oversampling = 2);

struct ModulusSample {
  double r = 0.0;
  double eta = 0.0;
};

struct ModulusOptions {
  int bins = 16;
  std::size_t exact_limit = 4096;
  std::size_t sampled_pairs = 1'000'000;
  std::uint64_t seed = 0x6d696c64ULL;
};

/// Sampled modulus of continuity on logarithmic distance bins: each entry is
/// the max of |f(x) - f(y)| over mask pairs at periodic distance <= r.
/// Bins below the closest pair and beyond the first bin covering the
/// farthest pair are omitted; the result is non-decreasing.
std::vector<ModulusSample> modulus_of_continuity(const SampledField& f, const Mask& mask,
                                                 const ModulusOptions& options = {});

enum class BlowupClass { bounded, type_one_consistent, super_type_one };
std::string_view to_string(BlowupClass c);

struct TypeOneConfig {
  /// Last product above this multiple of the median => super type I.
  double growth_factor = 10.0;
  /// Last product below this fraction of the maximum => bounded.
  double decay_fraction = 0.1;
};

struct TypeOneResult {
  double C_est = 0.0;
  BlowupClass classification = BlowupClass::bounded;
  std::vector<double> products;
};

/// C_est = max (t_blow - t)^{1/2} * norm(t) over samples (t, norm), t < t_blow.
TypeOneResult type_one_rate(std::span<const std::pair<double, double>> series, double t_blow,
                            const TypeOneConfig& cfg = {});

/// sigma, exponents a and b with 2/a + 3/b <= 1 and 2 <= a < inf, and the
/// hypothesised blow-up time.
class BlowupWindowConfig {
 public:
  BlowupWindowConfig(double sigma, double a, double b, std::optional<double> t_blow = std::nullopt);
  double sigma() const noexcept { return sigma_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::optional<double> t_blow() const noexcept { return t_blow_; }

 private:
  double sigma_;
  double a_;
  double b_;
  std::optional<double> t_blow_;
};

/// ||grad zeta||_{L^b(mask)} on the native grid of `grid`. zeta is extended off
/// the mask layer by layer (mean of the previous layer's neighbours) before
/// spectral differentiation, and the gradient is read on the mask eroded by one cell.
double direction_gradient_norm(const SampledField& zeta, const Mask& mask, double b,
                               const SpectralGrid& grid);

/// Trapezoid rule in time of ||grad zeta||_{L^b(Omega_sigma(t))}^a over the
/// trajectory nodes. Empty in 2D.
std::optional<double> direction_gradient_integral(const Trajectory& traj,
                                                  const BlowupWindowConfig& cfg);

struct NormSample {
  double t = 0.0;
  double sup_u = 0.0;
  double sup_grad_d = 0.0;
  double dev_unit = 0.0;
  double div_res = 0.0;
};

std::vector<NormSample> norm_series(const Trajectory& traj);

struct ModulusTable {
  double t = 0.0;
  std::vector<ModulusSample> eta;
};

struct DiagnosticsConfig {
  BlowupWindowConfig window{0.5, 4.0, 6.0};
  int smoothing_order = 1;
  ModulusOptions modulus{};
  TypeOneConfig type_one{};
};

struct DiagnosticsReport {
  std::vector<NormSample> norms;
  SmoothingTable smoothing;
  double t_blow = 0.0;
  TypeOneResult type_one;
  std::vector<ModulusTable> eta_director;
  std::vector<ModulusSample> eta_director_running_max;
  bool vorticity_applicable = false;
  std::vector<double> max_vorticity;  ///< at the modulus sample times
  std::vector<double> mask_fraction;
  std::vector<ModulusTable> eta_direction;
  std::vector<ModulusSample> eta_direction_running_max;
  std::optional<double> direction_gradient_integral;
};

/// Every monitor for one trajectory. Modulus tables are taken at window
/// boundaries.
DiagnosticsReport build_report(const Trajectory& traj, const DiagnosticsConfig& cfg);

}  // namespace mildflow
