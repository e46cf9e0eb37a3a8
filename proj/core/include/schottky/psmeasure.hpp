#pragma once

// Critical exponent and Patterson-Sullivan cylinder masses μ(→w).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schottky/freegroup.hpp"
#include "schottky/moebius.hpp"

namespace schottky {

enum class DimensionMethod { level_ratio, transfer_eigenvalue };

std::string_view to_string(DimensionMethod method);
DimensionMethod parse_dimension_method(std::string_view text);

struct DimensionEstimate {
  double delta = 0.0;
  int depth = 0;
  /// |ratio - 1| (level-ratio) or |spectral radius - 1| (transfer-eigenvalue)
  /// at the returned delta.
  double residual = 0.0;
  DimensionMethod method = DimensionMethod::transfer_eigenvalue;
};

/// Σ_{|w|=n} ‖ρ(w)'(x₀)‖^s, compensated summation in canonical order.
double level_sum(const SchottkyGroupSpec& spec, int n, double s, const DepthLimits& limits = {});

struct DimensionOptions {
  DimensionMethod method = DimensionMethod::transfer_eigenvalue;
  double tolerance = 1e-6;
  DepthLimits limits;
};

/// Bisection on [0, 2] for the exponent where the level-sum ratio
/// S(n)/S(n-1), or the transfer operator's spectral radius, equals 1.
/// Throws NumericError when there is no sign change on the bracket or the
/// residual exceeds the tolerance.
DimensionEstimate hausdorff_dimension(const SchottkyGroupSpec& spec, int depth,
                                      const DimensionOptions& options = {});

/// Discretized transfer operator on depth-N cylinders:
///   (L_s f)(v) = Σ_{l : l·v reduced} ‖ρ(l)'(c_v)‖^s f(prefix_N(l·v)),
/// with c_v = ρ(v)(x₀). At s = δ its spectral radius is 1 and the left Perron
/// vector ν = L_δᵀ ν is the conformal measure of the depth-N cylinders.
class TransferOperator {
 public:
  TransferOperator(const SchottkyGroupSpec& spec, int depth, const DepthLimits& limits = {});

  int rank() const noexcept { return rank_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return targets_.size() / branch_; }

  struct Perron {
    double eigenvalue = 0.0;
    /// Indexed by word_rank, sums to 1.
    std::vector<double> left_vector;
    int iterations = 0;
  };

  /// Power iteration on Lᵀ. \p start, if given, seeds the iteration.
  Perron perron(double s, std::span<const double> start = {}) const;

 private:
  int rank_;
  int depth_;
  std::size_t branch_;
  // transition slot k of state v is entry v * branch_ + k
  std::vector<std::size_t> targets_;
  std::vector<double> log_weights_;
};

enum class MeasureMethod { shadow, transfer, tabulated };

std::string_view to_string(MeasureMethod method);
MeasureMethod parse_measure_method(std::string_view text);

/// Masses of all cylinders →w with |w| ≤ depth. Depth-N masses are stored by
/// word_rank and sum to 1; each shorter mass is the left-to-right sum of its
/// 2g-1 (2g at the root) children, so additivity is exact.
class CylinderMeasure {
 public:
  /// \p masses are depth-N masses by word_rank. Throws NumericError when a
  /// mass is not strictly positive and finite or the total is not 1 within
  /// 1e-9.
  static CylinderMeasure from_masses(int rank, int depth, std::vector<double> masses,
                                     std::optional<DimensionEstimate> delta, MeasureMethod method);

  int rank() const noexcept { return rank_; }
  int depth() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  const std::optional<DimensionEstimate>& delta() const noexcept { return delta_; }
  MeasureMethod method() const noexcept { return method_; }

  double mass(const Word& w) const;
  double mass(int length, std::size_t index) const { return levels_[static_cast<std::size_t>(length)][index]; }
  std::span<const double> level(int n) const;
  double total() const noexcept { return levels_[0][0]; }

 private:
  int rank_ = 0;
  std::vector<std::vector<double>> levels_;
  std::optional<DimensionEstimate> delta_;
  MeasureMethod method_ = MeasureMethod::tabulated;
};

/// Depth-N masses from \p delta: shadow ‖ρ(w)'(x₀)‖^δ (log space), or the
/// left Perron vector of the transfer operator at δ. Both normalized to 1.
CylinderMeasure cylinder_measure(const SchottkyGroupSpec& spec, int depth, const DimensionEstimate& delta,
                                 MeasureMethod method = MeasureMethod::transfer,
                                 const DepthLimits& limits = {});

/// max over |w| = n with l·w reduced of
///   |μ(→l·w) - ‖ρ(l)'(c_w)‖^δ μ(→w)| / μ(→l·w).
/// Requires n + 1 ≤ depth and a measure carrying its δ.
double scaling_check(const SchottkyGroupSpec& spec, const CylinderMeasure& measure, Letter l, int n);

/// Measure cache: `#`-prefixed key=value header lines (spec_hash, depth,
/// delta fields, method, tool_version) followed by `word,mass` rows for the
/// depth-N words in canonical order, 17 significant digits.
void write_measure_cache(std::ostream& out, const CylinderMeasure& measure, std::string_view spec_hash);

/// nullopt when the header does not match (stale cache); throws InputError
/// on a malformed file.
std::optional<CylinderMeasure> read_measure_cache(std::istream& in, std::string_view spec_hash, int depth,
                                                  MeasureMethod method);

}  // namespace schottky
