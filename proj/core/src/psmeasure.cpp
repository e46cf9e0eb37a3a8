#include "schottky/psmeasure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "schottky/error.hpp"
#include "schottky/version.hpp"
#include "summation.hpp"

namespace schottky {

namespace {

constexpr double kBracketWidth = 1e-13;

// log ‖ρ(w)'(x₀)‖ for every word of length n, canonical order
std::vector<double> log_derivatives(const SchottkyGroupSpec& spec, int n, const DepthLimits& limits) {
  const auto maps = word_maps(spec, n, limits);
  std::vector<double> out;
  out.reserve(maps.size());
  for (const auto& m : maps) out.push_back(std::log(spherical_derivative(m, spec.basepoint())));
  return out;
}

// log Σ exp(s·ℓ)
double log_sum_exp(std::span<const double> logs, double s) {
  double top = -std::numeric_limits<double>::infinity();
  for (double l : logs) top = std::max(top, s * l);
  detail::CompensatedSum<double> sum;
  for (double l : logs) sum.add(std::exp(s * l - top));
  return top + std::log(sum.value());
}

// Largest s in [0, 2] with f(s) > 0, for f decreasing through 0.
double bisect(const std::function<double(double)>& f, std::string_view what) {
  double lo = 0.0;
  double hi = 2.0;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
    throw NumericError(fmt::format("{}: no sign change on [0, 2] (f(0) = {:.6g}, f(2) = {:.6g})", what, f_lo, f_hi));
  }
  while (hi - lo > kBracketWidth) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string number(double x) { return fmt::format("{:.17g}", x); }

double parse_double(std::string_view text, std::string_view what) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InputError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return x;
}

int parse_int(std::string_view text, std::string_view what) {
  int x = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InputError(fmt::format("{}: '{}' is not an integer", what, text));
  }
  return x;
}

}  // namespace

std::string_view to_string(DimensionMethod method) {
  return method == DimensionMethod::level_ratio ? "level-ratio" : "transfer-eigenvalue";
}

DimensionMethod parse_dimension_method(std::string_view text) {
  if (text == "level-ratio") return DimensionMethod::level_ratio;
  if (text == "transfer-eigenvalue") return DimensionMethod::transfer_eigenvalue;
  throw InputError(fmt::format("unknown dimension method '{}'", text));
}

std::string_view to_string(MeasureMethod method) {
  switch (method) {
    case MeasureMethod::shadow: return "shadow";
    case MeasureMethod::transfer: return "transfer";
    case MeasureMethod::tabulated: return "tabulated";
  }
  return "tabulated";
}

MeasureMethod parse_measure_method(std::string_view text) {
  if (text == "shadow") return MeasureMethod::shadow;
  if (text == "transfer") return MeasureMethod::transfer;
  if (text == "tabulated") return MeasureMethod::tabulated;
  throw InputError(fmt::format("unknown measure method '{}'", text));
}

double level_sum(const SchottkyGroupSpec& spec, int n, double s, const DepthLimits& limits) {
  if (n < 1) throw InputError("level_sum needs n >= 1");
  if (!(s >= 0.0)) throw InputError("level_sum needs s >= 0");
  return std::exp(log_sum_exp(log_derivatives(spec, n, limits), s));
}

TransferOperator::TransferOperator(const SchottkyGroupSpec& spec, int depth, const DepthLimits& limits)
    : rank_(spec.rank()), depth_(depth), branch_(static_cast<std::size_t>(2 * spec.rank() - 1)) {
  if (depth < 1) throw InputError("transfer operator needs depth >= 1");
  check_depth(rank_, depth, limits);
  const auto maps = word_maps(spec, depth, limits);
  targets_.reserve(maps.size() * branch_);
  log_weights_.reserve(maps.size() * branch_);
  for (std::size_t r = 0; r < maps.size(); ++r) {
    const Word v = word_unrank(rank_, depth, r);
    const SpherePoint center = maps[r](spec.basepoint());
    const Word head = v.prefix(static_cast<std::size_t>(depth - 1));
    for (auto l : alphabet(rank_)) {
      if (l == v.initial().inverse()) continue;
      targets_.push_back(word_rank(rank_, head.prepended(l)));
      log_weights_.push_back(std::log(spherical_derivative(spec.letter_map(l), center)));
    }
  }
}

TransferOperator::Perron TransferOperator::perron(double s, std::span<const double> start) const {
  const std::size_t n = size();
  std::vector<double> weights(log_weights_.size());
  for (std::size_t k = 0; k < weights.size(); ++k) weights[k] = std::exp(s * log_weights_[k]);

  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  if (start.size() == n) {
    double total = 0.0;
    for (double v : start) total += v;
    if (total > 0.0 && std::all_of(start.begin(), start.end(), [](double v) { return v > 0.0; })) {
      for (std::size_t i = 0; i < n; ++i) x[i] = start[i] / total;
    }
  }
  std::vector<double> y(n);
  constexpr int kMaxIterations = 200000;
  for (int it = 1; it <= kMaxIterations; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < branch_; ++k) {
        const std::size_t e = v * branch_ + k;
        y[targets_[e]] += weights[e] * x[v];
      }
    }
    // Collatz-Wielandt bounds on the spectral radius
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    detail::CompensatedSum<double> total;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = y[i] / x[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      total.add(y[i]);
    }
    const double lambda = total.value();
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / lambda;
    if (hi - lo <= 1e-13 * lambda) return {lambda, std::move(x), it};
  }
  throw NumericError(fmt::format("transfer operator power iteration did not converge at s = {}", s));
}

DimensionEstimate hausdorff_dimension(const SchottkyGroupSpec& spec, int depth, const DimensionOptions& options) {
  if (!(options.tolerance > 0.0)) throw InputError("dimension tolerance must be positive");
  DimensionEstimate est;
  est.depth = depth;
  est.method = options.method;
  if (options.method == DimensionMethod::level_ratio) {
    if (depth < 1) throw InputError("level-ratio dimension needs depth >= 1");
    check_depth(spec.rank(), depth, options.limits);
    const auto upper = log_derivatives(spec, depth, options.limits);
    const auto lower = log_derivatives(spec, depth - 1, options.limits);
    auto log_ratio = [&](double s) { return log_sum_exp(upper, s) - log_sum_exp(lower, s); };
    est.delta = bisect(log_ratio, "level-ratio dimension");
    est.residual = std::abs(std::expm1(log_ratio(est.delta)));
  } else {
    const TransferOperator op(spec, depth, options.limits);
    std::vector<double> warm;
    auto log_radius = [&](double s) {
      auto p = op.perron(s, warm);
      warm = std::move(p.left_vector);
      return std::log(p.eigenvalue);
    };
    est.delta = bisect(log_radius, "transfer-eigenvalue dimension");
    est.residual = std::abs(std::expm1(log_radius(est.delta)));
  }
  if (!(est.residual < options.tolerance)) {
    throw NumericError(fmt::format("dimension residual {:.3g} exceeds tolerance {:.3g}", est.residual,
                                   options.tolerance));
  }
  return est;
}

CylinderMeasure CylinderMeasure::from_masses(int rank, int depth, std::vector<double> masses,
                                             std::optional<DimensionEstimate> delta, MeasureMethod method) {
  check_depth(rank, depth, DepthLimits{std::max(depth, 0), std::numeric_limits<std::uint64_t>::max()});
  if (masses.size() != word_count(rank, depth)) {
    throw InputError(fmt::format("expected {} depth-{} masses, got {}", word_count(rank, depth), depth,
                                 masses.size()));
  }
  detail::CompensatedSum<double> total;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!std::isfinite(masses[i]) || !(masses[i] > 0.0)) {
      throw NumericError(fmt::format("cylinder mass of {} is {}, not positive", word_unrank(rank, depth, i).str(),
                                     masses[i]));
    }
    total.add(masses[i]);
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw NumericError(fmt::format("cylinder masses sum to {}, not 1", number(total.value())));
  }

  CylinderMeasure cm;
  cm.rank_ = rank;
  cm.delta_ = delta;
  cm.method_ = method;
  cm.levels_.resize(static_cast<std::size_t>(depth) + 1);
  cm.levels_.back() = std::move(masses);
  const auto branch = static_cast<std::size_t>(2 * rank - 1);
  for (int n = depth - 1; n >= 0; --n) {
    const auto& below = cm.levels_[static_cast<std::size_t>(n) + 1];
    auto& here = cm.levels_[static_cast<std::size_t>(n)];
    if (n == 0) {
      double sum = 0.0;
      for (double m : below) sum += m;
      here = {sum};
      continue;
    }
    here.assign(below.size() / branch, 0.0);
    for (std::size_t r = 0; r < here.size(); ++r) {
      double sum = 0.0;
      for (std::size_t j = 0; j < branch; ++j) sum += below[r * branch + j];
      here[r] = sum;
    }
  }
  return cm;
}

double CylinderMeasure::mass(const Word& w) const {
  require_rank(rank_, w);
  if (w.length() > static_cast<std::size_t>(depth())) {
    throw InputError(fmt::format("word {} is deeper than the measure depth {}", w.str(), depth()));
  }
  return levels_[w.length()][word_rank(rank_, w)];
}

std::span<const double> CylinderMeasure::level(int n) const {
  if (n < 0 || n > depth()) throw InputError(fmt::format("measure level {} outside 0..{}", n, depth()));
  return levels_[static_cast<std::size_t>(n)];
}

CylinderMeasure cylinder_measure(const SchottkyGroupSpec& spec, int depth, const DimensionEstimate& delta,
                                 MeasureMethod method, const DepthLimits& limits) {
  if (depth < 1) throw InputError("cylinder measure needs depth >= 1");
  if (!(delta.delta > 0.0 && delta.delta < 2.0)) {
    throw InputError(fmt::format("delta {} outside (0, 2)", delta.delta));
  }
  std::vector<double> masses;
  if (method == MeasureMethod::shadow) {
    const auto logs = log_derivatives(spec, depth, limits);
    const double log_total = log_sum_exp(logs, delta.delta);
    masses.reserve(logs.size());
    for (double l : logs) masses.push_back(std::exp(delta.delta * l - log_total));
  } else if (method == MeasureMethod::transfer) {
    masses = TransferOperator(spec, depth, limits).perron(delta.delta).left_vector;
  } else {
    throw InputError("cylinder_measure computes shadow or transfer masses only");
  }
  // renormalize after the fact so the total is 1 to rounding
  detail::CompensatedSum<double> total;
  for (double m : masses) total.add(m);
  const double z = total.value();
  for (double& m : masses) m /= z;
  return CylinderMeasure::from_masses(spec.rank(), depth, std::move(masses), delta, method);
}

double scaling_check(const SchottkyGroupSpec& spec, const CylinderMeasure& measure, Letter l, int n) {
  const int g = spec.rank();
  if (measure.rank() != g) throw InputError("measure rank does not match the spec");
  if (n < 0 || n + 1 > measure.depth()) {
    throw InputError(fmt::format("scaling_check needs n + 1 <= depth ({} + 1 > {})", n, measure.depth()));
  }
  if (!measure.delta()) throw InputError("scaling_check needs a measure carrying its delta");
  require_rank(g, Word::from_letters({l}));
  const double delta = measure.delta()->delta;
  const auto maps = word_maps(spec, n);
  const auto& gamma = spec.letter_map(l);
  double worst = 0.0;
  for (std::size_t r = 0; r < maps.size(); ++r) {
    const Word w = word_unrank(g, n, r);
    if (!w.empty() && w.initial() == l.inverse()) continue;
    const Word lw = w.prepended(l);
    const double target = measure.mass(static_cast<int>(lw.length()), word_rank(g, lw));
    const double predicted =
        std::pow(spherical_derivative(gamma, maps[r](spec.basepoint())), delta) * measure.mass(n, r);
    worst = std::max(worst, std::abs(target - predicted) / target);
  }
  return worst;
}

void write_measure_cache(std::ostream& out, const CylinderMeasure& measure, std::string_view spec_hash) {
  fmt::print(out, "# sptriple measure cache\n");
  fmt::print(out, "# spec_hash={}\n", spec_hash);
  fmt::print(out, "# depth={}\n", measure.depth());
  fmt::print(out, "# rank={}\n", measure.rank());
  fmt::print(out, "# method={}\n", to_string(measure.method()));
  if (const auto& d = measure.delta()) {
    fmt::print(out, "# delta={}\n", number(d->delta));
    fmt::print(out, "# delta_depth={}\n", d->depth);
    fmt::print(out, "# delta_residual={}\n", number(d->residual));
    fmt::print(out, "# delta_method={}\n", to_string(d->method));
  }
  fmt::print(out, "# tool_version={}\n", kToolVersion);
  fmt::print(out, "word,mass\n");
  const auto level = measure.level(measure.depth());
  for (std::size_t r = 0; r < level.size(); ++r) {
    fmt::print(out, "{},{}\n", word_unrank(measure.rank(), measure.depth(), r).str(), number(level[r]));
  }
}

std::optional<CylinderMeasure> read_measure_cache(std::istream& in, std::string_view spec_hash, int depth,
                                                  MeasureMethod method) {
  std::map<std::string, std::string, std::less<>> header;
  std::string line;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      header[key] = line.substr(eq + 1);
      continue;
    }
    if (line != "word,mass") throw InputError("measure cache: missing 'word,mass' column header");
    saw_columns = true;
    break;
  }
  if (!saw_columns) throw InputError("measure cache: no data section");
  auto field = [&](std::string_view key) -> const std::string* {
    auto it = header.find(key);
    return it == header.end() ? nullptr : &it->second;
  };
  for (auto key : {"spec_hash", "depth", "rank", "method", "tool_version"}) {
    if (!field(key)) throw InputError(fmt::format("measure cache: missing header field '{}'", key));
  }
  if (*field("spec_hash") != spec_hash || *field("tool_version") != kToolVersion ||
      parse_int(*field("depth"), "depth") != depth || *field("method") != to_string(method)) {
    return std::nullopt;
  }
  const int rank = parse_int(*field("rank"), "rank");

  std::optional<DimensionEstimate> delta;
  if (field("delta")) {
    DimensionEstimate d;
    d.delta = parse_double(*field("delta"), "delta");
    if (const auto* v = field("delta_depth")) d.depth = parse_int(*v, "delta_depth");
    if (const auto* v = field("delta_residual")) d.residual = parse_double(*v, "delta_residual");
    if (const auto* v = field("delta_method")) d.method = parse_dimension_method(*v);
    delta = d;
  }

  check_depth(rank, depth);
  const auto count = word_count(rank, depth);
  std::vector<double> masses;
  masses.reserve(count);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InputError(fmt::format("measure cache: bad row '{}'", line));
    if (masses.size() >= count) throw InputError("measure cache: too many rows");
    const Word w = Word::parse(std::string_view(line).substr(0, comma));
    if (w.length() != static_cast<std::size_t>(depth) || word_rank(rank, w) != masses.size()) {
      throw InputError(fmt::format("measure cache: row '{}' out of canonical order", line));
    }
    masses.push_back(parse_double(std::string_view(line).substr(comma + 1), "mass"));
  }
  if (masses.size() != count) throw InputError("measure cache: truncated table");
  return CylinderMeasure::from_masses(rank, depth, std::move(masses), delta, method);
}

}  // namespace schottky
