#include "schottky/zeta.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "schottky/error.hpp"
#include "schottky/version.hpp"
#include "summation.hpp"

namespace schottky {

namespace {

using cd = std::complex<double>;

void check_rank(int rank) {
  if (rank < 2) throw InputError(fmt::format("rank {} < 2", rank));
}

BigInt level_dimension(int rank, int n) {
  if (n == 0) return 1;
  BigInt d = 2 * rank;
  for (int i = 1; i < n; ++i) d *= (2 * rank - 1);
  return d;
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }

double log_of(const BigInt& x) { return std::log(to_double(x)); }

}  // namespace

BigInt dirac_eigenvalue(int rank, int n) {
  check_rank(rank);
  if (n < 0) throw InputError("negative level");
  const BigInt d = level_dimension(rank, n);
  return d * d * d;
}

BigInt dirac_multiplicity(int rank, int n) {
  check_rank(rank);
  if (n < 0) throw InputError("negative level");
  if (n == 0) return 1;
  if (n == 1) return 2 * rank - 1;
  return level_dimension(rank, n - 1) * (2 * rank - 2);
}

DiracSpectrum DiracSpectrum::build(int rank, int depth) {
  if (depth < 0) throw InputError("negative depth");
  DiracSpectrum s;
  s.rank = rank;
  for (int n = 0; n <= depth; ++n) {
    s.eigenvalues.push_back(dirac_eigenvalue(rank, n));
    s.multiplicities.push_back(dirac_multiplicity(rank, n));
  }
  return s;
}

SpectralTriple build_spectral_triple(const SchottkyGroupSpec& spec, int depth, const TripleOptions& options) {
  const auto delta = hausdorff_dimension(spec, depth, options.dimension);
  auto measure = cylinder_measure(spec, depth, delta, options.measure_method, options.dimension.limits);
  const auto isf = build_index_sets(spec.rank(), depth, options.policy, options.dimension.limits);
  return {delta, orthonormalize(isf, measure), DiracSpectrum::build(spec.rank(), depth)};
}

SpectralTriple build_spectral_triple(const CylinderMeasure& measure, const IndexSetPolicy& policy) {
  const auto isf = build_index_sets(measure.rank(), measure.depth(), policy,
                                    DepthLimits{measure.depth(), std::numeric_limits<std::uint64_t>::max()});
  return {measure.delta(), orthonormalize(isf, measure), DiracSpectrum::build(measure.rank(), measure.depth())};
}

ZetaSeries unit_zeta_series(int rank, int depth) {
  const auto spectrum = DiracSpectrum::build(rank, depth);
  ZetaSeries series;
  series.rank = rank;
  for (int n = 0; n <= depth; ++n) {
    series.terms.push_back({spectrum.eigenvalues[static_cast<std::size_t>(n)],
                            to_double(spectrum.multiplicities[static_cast<std::size_t>(n)])});
  }
  return series;
}

ZetaSeries zeta_series(const SpectralTriple& triple, const Symbol& symbol) {
  require_rank(triple.rank(), symbol.word());
  if (symbol.is_unit()) return unit_zeta_series(triple.rank(), triple.depth());
  if (symbol.word().length() > static_cast<std::size_t>(triple.depth())) {
    throw InputError(fmt::format("symbol {} is longer than the depth {}", symbol.str(), triple.depth()));
  }
  ZetaSeries series;
  series.rank = triple.rank();
  series.symbol = symbol;
  for (int n = 0; n <= triple.depth(); ++n) {
    series.terms.push_back({triple.spectrum.eigenvalues[static_cast<std::size_t>(n)],
                            coefficient(triple.basis, symbol, n)});
  }
  return series;
}

ZetaSeries zeta_series(const SchottkyGroupSpec& spec, const Symbol& symbol, int depth, const TripleOptions& options) {
  require_rank(spec.rank(), symbol.word());
  if (symbol.is_unit()) return unit_zeta_series(spec.rank(), depth);
  return zeta_series(build_spectral_triple(spec, depth, options), symbol);
}

ZetaValue zeta_eval(const ZetaSeries& series, cd s) {
  check_rank(series.rank);
  if (series.terms.empty()) throw InputError("empty zeta series");
  const double sigma = s.real();
  if (!(sigma < -1.0 / 3.0)) {
    throw DivergenceError(fmt::format("zeta series diverges at Re s = {} (needs Re s < -1/3)", sigma));
  }
  const int g = series.rank;
  const double ratio = std::pow(2.0 * g - 1.0, 1.0 + 3.0 * sigma);
  if (!(ratio < 1.0)) throw DivergenceError("zeta tail ratio is not below 1");

  detail::CompensatedSum<double> re;
  detail::CompensatedSum<double> im;
  double magnitude = 0.0;
  for (const auto& t : series.terms) {
    const cd term = t.coefficient * std::exp(s * log_of(t.lambda));
    re.add(term.real());
    im.add(term.imag());
    magnitude += std::abs(term);
  }

  // 0 <= c_n(a) <= m_n and m_{n+1} λ_{n+1}^σ = ratio · m_n λ_n^σ for n >= 2
  const int N = series.depth();
  auto log_term = [&](int n) { return std::log(to_double(dirac_multiplicity(g, n))) + sigma * log_of(dirac_eigenvalue(g, n)); };
  double tail = 0.0;
  if (N == 0) {
    tail = std::exp(log_term(1)) + std::exp(log_term(2)) / (1.0 - ratio);
  } else {
    tail = std::exp(log_term(N + 1)) / (1.0 - ratio);
  }
  const double rounding = 8.0 * (N + 2) * std::numeric_limits<double>::epsilon() * magnitude;
  return {{re.value(), im.value()}, tail + rounding};
}

cd zeta_unit_closed_form(int rank, cd s, ClosedFormVariant variant) {
  check_rank(rank);
  if (!(s.real() < -1.0 / 3.0)) {
    throw DivergenceError(fmt::format("closed form needs Re s < -1/3, got {}", s.real()));
  }
  const double two_g = 2.0 * rank;
  const double b = two_g - 1.0;
  const cd q = std::pow(cd(b), 3.0 * s + 1.0);
  const cd denom = 1.0 - q;
  if (std::abs(denom) < 1e-300) throw NumericError("closed form pole: (2g-1)^{3s+1} = 1");
  if (variant == ClosedFormVariant::paper) {
    return 1.0 + (two_g - 2.0) / b * std::pow(cd(two_g), 3.0 * s + 1.0) / denom;
  }
  return 1.0 + b * std::pow(cd(two_g), 3.0 * s) +
         (two_g - 2.0) * std::pow(cd(two_g), 3.0 * s + 1.0) * std::pow(cd(b), 3.0 * s) / denom;
}

double summability_check(int rank, int depth) {
  check_rank(rank);
  if (depth < 0) throw InputError("negative depth");
  detail::CompensatedSum<double> sum;
  for (int n = 0; n <= depth; ++n) {
    // (1 + λ²)^{-1/2} = λ^{-1} (1 + λ^{-2})^{-1/2}
    const double inv = 1.0 / to_double(dirac_eigenvalue(rank, n));
    sum.add(to_double(dirac_multiplicity(rank, n)) * inv / std::sqrt(1.0 + inv * inv));
  }
  return sum.value();
}

int infer_genus(const ZetaSeries& series) {
  if (!series.symbol.is_unit()) throw InputError("infer_genus needs the unit series");
  if (series.terms.size() < 2) throw InputError("infer_genus needs at least two terms");
  if (series.terms[0].lambda != 1) throw InputError("inconsistent series: lambda_0 != 1");
  const BigInt& l1 = series.terms[1].lambda;
  if (l1 <= 0) throw InputError("inconsistent series: lambda_1 <= 0");
  const auto estimate = static_cast<long long>(std::llround(std::cbrt(to_double(l1))));
  long long root = -1;
  for (long long c = std::max(1LL, estimate - 1); c <= estimate + 1; ++c) {
    if (BigInt(c) * c * c == l1) root = c;
  }
  if (root < 4 || root % 2 != 0) {
    throw InputError(fmt::format("inconsistent series: lambda_1 = {} is not the cube of an even integer >= 4",
                                 l1.str()));
  }
  if (root / 2 > std::numeric_limits<int>::max() / 4) throw InputError("genus out of range");
  const int g = static_cast<int>(root / 2);
  for (std::size_t n = 0; n < series.terms.size(); ++n) {
    if (series.terms[n].lambda != dirac_eigenvalue(g, static_cast<int>(n))) {
      throw InputError(fmt::format("inconsistent series: lambda_{} does not match genus {}", n, g));
    }
    const double expected = to_double(dirac_multiplicity(g, static_cast<int>(n)));
    if (std::abs(series.terms[n].coefficient - expected) > 1e-9 * expected) {
      throw InputError(fmt::format("inconsistent series: c_{} = {} but genus {} needs {}", n,
                                   series.terms[n].coefficient, g, expected));
    }
  }
  // coefficient growth c_{n+1}/c_n = 2g - 1 from n = 2 on
  for (std::size_t n = 2; n + 1 < series.terms.size(); ++n) {
    const double r = series.terms[n + 1].coefficient / series.terms[n].coefficient;
    if (std::abs(r - (2.0 * g - 1.0)) > 1e-9 * (2.0 * g - 1.0)) {
      throw InputError(fmt::format("inconsistent series: growth ratio {} at n = {}", r, n));
    }
  }
  return g;
}

void CoefficientTable::set(const Word& eta, int level, double value) {
  require_rank(rank_, eta);
  if (level < 0 || level > depth_) throw InputError(fmt::format("table level {} outside 0..{}", level, depth_));
  if (eta.length() > static_cast<std::size_t>(depth_)) {
    throw InputError(fmt::format("table word {} longer than depth {}", eta.str(), depth_));
  }
  rows_[{eta, level}] = value;
}

std::optional<double> CoefficientTable::find(const Word& eta, int level) const {
  auto it = rows_.find({eta, level});
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

CoefficientTable coefficient_table(const SpectralTriple& triple, TableScope scope) {
  const int g = triple.rank();
  const int N = triple.depth();
  CoefficientTable table(g, N);
  if (scope == TableScope::full) {
    const auto unit = zeta_series(triple, Symbol::unit());
    for (int n = 0; n <= N; ++n) table.set(Word(), n, unit.terms[static_cast<std::size_t>(n)].coefficient);
  }
  for (int m = 1; m <= N; ++m) {
    for (const auto& eta : enumerate_words(g, m, DepthLimits{m, std::numeric_limits<std::uint64_t>::max()})) {
      const Symbol a(eta);
      if (scope == TableScope::recovery) {
        table.set(eta, m - 1, coefficient(triple.basis, a, m - 1));
        continue;
      }
      for (int n = 0; n <= N; ++n) table.set(eta, n, coefficient(triple.basis, a, n));
    }
  }
  return table;
}

void write_coefficient_table(std::ostream& out, const CoefficientTable& table) {
  fmt::print(out, "# sptriple coefficient table\n");
  fmt::print(out, "# rank={}\n", table.rank());
  fmt::print(out, "# depth={}\n", table.depth());
  fmt::print(out, "# tool_version={}\n", kToolVersion);
  fmt::print(out, "word,level,coefficient\n");
  for (const auto& [key, value] : table.rows()) {
    fmt::print(out, "{},{},{:.17g}\n", Symbol(key.first).str(), key.second, value);
  }
}

CoefficientTable read_coefficient_table(std::istream& in) {
  std::optional<int> rank;
  std::optional<int> depth;
  std::string line;
  auto parse_int = [](std::string_view text, std::string_view what) {
    int x = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw InputError(fmt::format("coefficient table: bad {} '{}'", what, text));
    }
    return x;
  };
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      if (line.starts_with("# rank=")) rank = parse_int(std::string_view(line).substr(7), "rank");
      if (line.starts_with("# depth=")) depth = parse_int(std::string_view(line).substr(8), "depth");
      continue;
    }
    if (line != "word,level,coefficient") throw InputError("coefficient table: missing column header");
    saw_columns = true;
    break;
  }
  if (!saw_columns || !rank || !depth) throw InputError("coefficient table: missing rank/depth header");
  check_depth(*rank, *depth);
  CoefficientTable table(*rank, *depth);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw InputError(fmt::format("coefficient table: bad row '{}'", line));
    const std::string_view row(line);
    const Symbol symbol = Symbol::parse(row.substr(0, c1));
    const int level = parse_int(row.substr(c1 + 1, c2 - c1 - 1), "level");
    double value = 0.0;
    const auto text = row.substr(c2 + 1);
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw InputError(fmt::format("coefficient table: bad coefficient '{}'", text));
    }
    table.set(symbol.word(), level, value);
  }
  return table;
}

RecoveryResult recover_measures(const CoefficientTable& table, int rank, int depth, const IndexSetPolicy& policy) {
  check_depth(rank, depth);
  if (depth < 1) throw InputError("recovery needs depth >= 1");
  if (table.rank() != rank) throw InputError("coefficient table rank does not match");
  const DepthLimits unlimited{depth, std::numeric_limits<std::uint64_t>::max()};
  const auto branch = static_cast<std::size_t>(2 * rank - 1);

  RecoveryResult result;
  result.min_kappa = std::numeric_limits<double>::infinity();
  std::vector<double> previous{1.0};
  for (int m = 1; m <= depth; ++m) {
    // the basis to depth m-1 only reads the masses recovered so far
    std::vector<double> normalized = previous;
    detail::CompensatedSum<double> total;
    for (double x : normalized) total.add(x);
    for (double& x : normalized) x /= total.value();
    const auto cm = CylinderMeasure::from_masses(rank, m - 1, std::move(normalized), std::nullopt,
                                                 MeasureMethod::tabulated);
    const auto basis = orthonormalize(build_index_sets(rank, m - 1, policy, unlimited), cm);

    std::vector<double> level;
    level.reserve(word_count(rank, m));
    for (const auto& eta : enumerate_words(rank, m, unlimited)) {
      const auto c = table.find(eta, m - 1);
      if (!c) throw InputError(fmt::format("coefficient table lacks c_{}({})", m - 1, eta.str()));
      const double k = kappa(basis, eta);
      result.min_kappa = std::min(result.min_kappa, k);
      if (!(k >= 1e-12)) throw NumericError(fmt::format("kappa({}) = {:.3g} is degenerate", eta.str(), k));
      const double mu = *c / k;
      if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw NumericError(fmt::format("recovered mass of {} is {}, not positive", eta.str(), mu));
      }
      result.masses[eta] = mu;
      level.push_back(mu);
    }
    // additivity against the parent level
    const std::size_t parents = m == 1 ? 1 : previous.size();
    for (std::size_t p = 0; p < parents; ++p) {
      const std::size_t lo = m == 1 ? 0 : p * branch;
      const std::size_t hi = m == 1 ? level.size() : lo + branch;
      double sum = 0.0;
      for (std::size_t i = lo; i < hi; ++i) sum += level[i];
      const double defect = std::abs(sum - previous[p]) / previous[p];
      result.max_additivity_defect = std::max(result.max_additivity_defect, defect);
      if (defect > 1e-6) {
        throw NumericError(fmt::format("recovered masses are not additive below {} (defect {:.3g})",
                                       m == 1 ? std::string("e") : word_unrank(rank, m - 1, p).str(), defect));
      }
    }
    previous = std::move(level);
  }
  detail::CompensatedSum<double> total;
  for (double x : previous) total.add(x);
  for (double& x : previous) x /= total.value();
  result.measure = CylinderMeasure::from_masses(rank, depth, std::move(previous), std::nullopt,
                                                MeasureMethod::tabulated);
  return result;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::not_equivalent: return "NOT-EQUIVALENT";
    case Verdict::measure_equal: return "MEASURE-EQUAL";
    case Verdict::measure_different: return "MEASURE-DIFFERENT";
  }
  return "NOT-EQUIVALENT";
}

CompareReport compare_triples(const SchottkyGroupSpec& a, const SchottkyGroupSpec& b, const CompareOptions& options) {
  if (!(options.tolerance > 0.0)) throw InputError("compare tolerance must be positive");
  const int N = options.depth;
  if (N < 1) throw InputError("compare needs depth >= 1");
  CompareReport report;
  report.depth = N;
  report.genus_a = infer_genus(unit_zeta_series(a.rank(), std::max(N, 1)));
  report.genus_b = infer_genus(unit_zeta_series(b.rank(), std::max(N, 1)));
  if (report.genus_a != report.genus_b) {
    report.verdict = Verdict::not_equivalent;
    report.summary = fmt::format("unit zeta functions differ: genus {} vs {}", report.genus_a, report.genus_b);
    return report;
  }
  const int g = report.genus_a;
  const auto ta = build_spectral_triple(a, N, options.triple);
  const auto tb = build_spectral_triple(b, N, options.triple);

  auto relative = [](double x, double y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
  };
  detail::CompensatedSum<double> sum;
  std::size_t count = 0;
  for (int n = 1; n <= N; ++n) {
    const auto ma = ta.measure().level(n);
    const auto mb = tb.measure().level(n);
    for (std::size_t r = 0; r < ma.size(); ++r) {
      const double d = relative(ma[r], mb[r]);
      report.max_mass_discrepancy = std::max(report.max_mass_discrepancy, d);
      sum.add(d);
      ++count;
      if (!report.witness && d > options.tolerance) report.witness = word_unrank(g, n, r);
    }
  }
  report.mean_mass_discrepancy = sum.value() / static_cast<double>(count);

  const auto ca = coefficient_table(ta, TableScope::recovery);
  const auto cb = coefficient_table(tb, TableScope::recovery);
  for (const auto& [key, value] : ca.rows()) {
    report.max_coefficient_discrepancy =
        std::max(report.max_coefficient_discrepancy, relative(value, *cb.find(key.first, key.second)));
  }

  if (report.max_mass_discrepancy <= options.tolerance) {
    report.verdict = Verdict::measure_equal;
    report.summary = fmt::format(
        "cylinder masses and zeta coefficients agree to depth {} (max relative discrepancy {:.3g}); "
        "such surfaces are conformally or anti-conformally equivalent",
        N, report.max_mass_discrepancy);
  } else {
    report.verdict = Verdict::measure_different;
    report.summary = fmt::format("cylinder masses differ at {} (max relative discrepancy {:.3g})",
                                 report.witness->str(), report.max_mass_discrepancy);
  }
  return report;
}

}  // namespace schottky
