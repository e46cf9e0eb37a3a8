#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <complex>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "schottky/error.hpp"
#include "schottky/gns.hpp"
#include "schottky/moebius.hpp"
#include "schottky/psmeasure.hpp"
#include "schottky/spec_io.hpp"
#include "schottky/version.hpp"
#include "schottky/zeta.hpp"

namespace sptriple {

namespace {

using namespace schottky;
namespace fs = std::filesystem;

struct RunConfig {
  std::vector<std::string> specs;
  int depth = -1;
  double tol = -1.0;
  std::string out_path;
  std::string format = "csv";
  std::string cache_dir;
  std::string measure_method = "transfer";
  std::string dim_method = "transfer-eigenvalue";
  std::string drop = "greatest";
  std::string order = "lex";
  int max_depth = 10;
  std::string symbol = "unit";
  std::vector<std::string> s_values;
  bool table = false;
  double re = -1.0;
  double im_min = 0.0;
  double im_max = 10.0;
  int steps = 101;
  std::string export_path;
  std::string table_path;
};

// ---- output ----------------------------------------------------------------

struct Cell {
  std::string text;
  bool quoted = false;
};

Cell str(std::string s) { return {std::move(s), true}; }
Cell num(double x) { return {fmt::format("{:.17g}", x), false}; }
Cell integer(long long x) { return {fmt::to_string(x), false}; }
Cell integer(const BigInt& x) { return {x.str(), false}; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Table {
 public:
  Table(std::string kind, std::vector<std::string> columns) : kind_(std::move(kind)), columns_(std::move(columns)) {}

  void meta(std::string key, Cell value) { meta_.emplace_back(std::move(key), std::move(value)); }
  void row(std::vector<Cell> cells) { rows_.push_back(std::move(cells)); }

  void write(std::ostream& out, std::string_view format) const {
    if (format == "jsonl") {
      std::string head = fmt::format("{{\"format\":\"sptriple-{}\",\"version\":1", kind_);
      for (const auto& [key, value] : meta_) head += fmt::format(",{}:{}", quote(key), render(value));
      fmt::print(out, "{}}}\n", head);
      for (const auto& r : rows_) {
        std::string line = "{";
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (i) line += ',';
          line += quote(columns_[i]) + ":" + render(r[i]);
        }
        fmt::print(out, "{}}}\n", line);
      }
      return;
    }
    fmt::print(out, "# sptriple-{} v1\n", kind_);
    for (const auto& [key, value] : meta_) fmt::print(out, "# {}={}\n", key, value.text);
    std::string header;
    for (std::size_t i = 0; i < columns_.size(); ++i) header += (i ? "," : "") + columns_[i];
    fmt::print(out, "{}\n", header);
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) line += (i ? "," : "") + csv_field(r[i].text);
      fmt::print(out, "{}\n", line);
    }
  }

 private:
  static std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }
  static std::string render(const Cell& c) { return c.quoted ? quote(c.text) : c.text; }

  std::string kind_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, Cell>> meta_;
  std::vector<std::vector<Cell>> rows_;
};

// Writes to --out when given, otherwise to the caller's stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InputError(fmt::format("cannot write '{}'", path));
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

// ---- argument helpers ------------------------------------------------------

double parse_number(std::string_view text, std::string_view what) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InputError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return x;
}

std::complex<double> parse_s(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return {parse_number(text, "--s"), 0.0};
  return {parse_number(text.substr(0, comma), "--s"), parse_number(text.substr(comma + 1), "--s")};
}

DepthLimits limits(const RunConfig& cfg) { return DepthLimits{cfg.max_depth, std::uint64_t{1} << 24}; }

IndexSetPolicy policy(const RunConfig& cfg) {
  IndexSetPolicy p;
  p.drop = cfg.drop == "least" ? DropRule::least : DropRule::greatest;
  p.order = cfg.order == "revlex" ? LevelOrder::reverse_lexicographic : LevelOrder::lexicographic;
  return p;
}

DimensionOptions dimension_options(const RunConfig& cfg) {
  DimensionOptions d;
  d.method = parse_dimension_method(cfg.dim_method);
  if (cfg.tol > 0.0) d.tolerance = cfg.tol;
  d.limits = limits(cfg);
  return d;
}

int depth_or(const RunConfig& cfg, int fallback) {
  const int d = cfg.depth < 0 ? fallback : cfg.depth;
  if (d > cfg.max_depth) throw DepthCapError(fmt::format("depth {} exceeds the cap {}", d, cfg.max_depth));
  return d;
}

// ---- cached measure --------------------------------------------------------

CylinderMeasure computed_measure(const SchottkyGroupSpec& spec, int depth, const RunConfig& cfg) {
  const auto delta = hausdorff_dimension(spec, depth, dimension_options(cfg));
  return cylinder_measure(spec, depth, delta, parse_measure_method(cfg.measure_method), limits(cfg));
}

CylinderMeasure obtain_measure(const SchottkyGroupSpec& spec, int depth, const RunConfig& cfg, std::ostream& err) {
  if (cfg.cache_dir.empty()) return computed_measure(spec, depth, cfg);
  check_depth(spec.rank(), depth, limits(cfg));
  const auto method = parse_measure_method(cfg.measure_method);
  const auto hash = group_spec_hash(spec);
  const fs::path file = fs::path(cfg.cache_dir) / fmt::format("{}-d{}-{}-{}.csv", hash, depth, cfg.measure_method,
                                                              cfg.dim_method);
  if (fs::exists(file)) {
    std::ifstream in(file, std::ios::binary);
    try {
      auto cached = read_measure_cache(in, hash, depth, method);
      if (cached && cached->delta() && to_string(cached->delta()->method) == cfg.dim_method) return *cached;
      fmt::print(err, "stale measure cache {}, recomputing\n", file.string());
    } catch (const Error& e) {
      fmt::print(err, "unreadable measure cache {} ({}), recomputing\n", file.string(), e.what());
    }
  }
  auto measure = computed_measure(spec, depth, cfg);
  std::error_code ec;
  fs::create_directories(cfg.cache_dir, ec);
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write measure cache in '{}'", cfg.cache_dir));
    write_measure_cache(out, measure, hash);
  }
  fs::rename(tmp, file);
  return measure;
}

// ---- commands ----------------------------------------------------------------

int run_check(const RunConfig& cfg, std::ostream& out) {
  const auto spec = load_group_spec(cfg.specs.at(0));
  const auto report = check_schottky(spec);
  Table t("check", {"key", "value"});
  t.row({str("pass"), str(report.pass ? "true" : "false")});
  t.row({str("disjointness_margin"), num(report.disjointness_margin)});
  t.row({str("containment_margin"), num(report.containment_margin)});
  t.row({str("loxodromy_margin"), num(report.loxodromy_margin)});
  for (const auto& f : report.failures) t.row({str("failure"), str(f)});
  Output o(cfg.out_path, out);
  t.write(o.stream(), cfg.format);
  return report.pass ? kOk : kNegative;
}

int run_dim(const RunConfig& cfg, std::ostream& out) {
  const auto spec = load_group_spec(cfg.specs.at(0));
  const int depth = depth_or(cfg, 6);
  if (depth < 1) throw InputError("dim needs --depth >= 1");
  Table t("dim", {"depth", "method", "delta", "residual"});
  t.meta("spec_hash", str(group_spec_hash(spec)));
  for (int n = 1; n <= depth; ++n) {
    const auto est = hausdorff_dimension(spec, n, dimension_options(cfg));
    t.row({integer(n), str(std::string(to_string(est.method))), num(est.delta), num(est.residual)});
  }
  Output o(cfg.out_path, out);
  t.write(o.stream(), cfg.format);
  return kOk;
}

void measure_meta(Table& t, const CylinderMeasure& cm) {
  t.meta("depth", integer(cm.depth()));
  t.meta("method", str(std::string(to_string(cm.method()))));
  if (const auto& d = cm.delta()) {
    t.meta("delta", num(d->delta));
    t.meta("delta_method", str(std::string(to_string(d->method))));
    t.meta("delta_residual", num(d->residual));
  }
}

void mass_rows(Table& t, const CylinderMeasure& cm, int from) {
  for (int n = from; n <= cm.depth(); ++n) {
    const auto level = cm.level(n);
    for (std::size_t r = 0; r < level.size(); ++r) {
      t.row({str(word_unrank(cm.rank(), n, r).str()), integer(n), num(level[r])});
    }
  }
}

int run_measure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = load_group_spec(cfg.specs.at(0));
  const int depth = depth_or(cfg, 6);
  const auto cm = obtain_measure(spec, depth, cfg, err);
  Table t("measure", {"word", "length", "mass"});
  t.meta("spec_hash", str(group_spec_hash(spec)));
  measure_meta(t, cm);
  mass_rows(t, cm, 0);
  Output o(cfg.out_path, out);
  t.write(o.stream(), cfg.format);
  return kOk;
}

double orthonormality_residual(const OrthonormalBasis& basis) {
  std::vector<const HilbertVector*> all;
  for (int n = 0; n <= basis.depth(); ++n) {
    for (const auto& v : basis.level(n)) all.push_back(&v);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i; j < all.size(); ++j) {
      const double ip = inner_product(*all[i], *all[j], basis.measure());
      worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

int run_triple(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = load_group_spec(cfg.specs.at(0));
  const int depth = depth_or(cfg, 4);
  const auto triple = build_spectral_triple(obtain_measure(spec, depth, cfg, err), policy(cfg));
  const int g = triple.rank();
  Table t("triple", {"key", "value"});
  t.meta("spec_hash", str(group_spec_hash(spec)));
  t.row({str("rank"), integer(g)});
  t.row({str("depth"), integer(depth)});
  if (triple.delta) t.row({str("delta"), num(triple.delta->delta)});
  for (int n = 0; n <= depth; ++n) {
    t.row({str(fmt::format("level_size_{}", n)), integer(static_cast<long long>(triple.basis.level(n).size()))});
    t.row({str(fmt::format("multiplicity_{}", n)), integer(dirac_multiplicity(g, n))});
    t.row({str(fmt::format("dim_H_{}", n)),
           integer(static_cast<long long>(triple.basis.index_sets().cumulative_size(n)))});
    t.row({str(fmt::format("eigenvalue_{}", n)), integer(dirac_eigenvalue(g, n))});
  }
  t.row({str("orthonormality_residual"), num(orthonormality_residual(triple.basis))});
  t.row({str("min_phi_norm"), num(triple.basis.min_phi_norm())});
  t.row({str("summability_partial_sum"), num(summability_check(g, depth))});
  Output o(cfg.out_path, out);
  t.write(o.stream(), cfg.format);

  if (!cfg.export_path.empty()) {
    Table e("basis", {"psi_word", "level", "cylinder_word", "coefficient"});
    for (int n = 0; n <= depth; ++n) {
      for (const auto& w : triple.basis.index_sets().level(n)) {
        for (const auto& [v, c] : triple.basis.vector(w).entries()) {
          e.row({str(w.str()), integer(n), str(v.str()), num(c)});
        }
      }
    }
    Output eo(cfg.export_path, out);
    e.write(eo.stream(), cfg.format);
  }
  return kOk;
}

void check_convergent(std::complex<double> s) {
  if (!(s.real() < -1.0 / 3.0)) {
    throw DivergenceError(fmt::format("zeta series diverges at Re s = {} (needs Re s < -1/3)", s.real()));
  }
}

void evaluation_rows(Table& t, const ZetaSeries& series, const std::vector<std::complex<double>>& points) {
  for (const auto& s : points) {
    const auto z = zeta_eval(series, s);
    t.row({num(s.real()), num(s.imag()), num(z.value.real()), num(z.value.imag()), num(z.tail_bound)});
  }
}

int run_zeta(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = load_group_spec(cfg.specs.at(0));
  const int depth = depth_or(cfg, 6);
  std::vector<std::complex<double>> points;
  for (const auto& text : cfg.s_values) points.push_back(parse_s(text));
  for (const auto& s : points) check_convergent(s);
  const Symbol symbol = Symbol::parse(cfg.symbol);
  require_rank(spec.rank(), symbol.word());

  Output o(cfg.out_path, out);
  if (cfg.table) {
    const auto triple = build_spectral_triple(obtain_measure(spec, depth, cfg, err), policy(cfg));
    const auto table = coefficient_table(triple, TableScope::full);
    if (cfg.format == "csv") {
      write_coefficient_table(o.stream(), table);
    } else {
      Table t("coefficients", {"word", "level", "coefficient"});
      t.meta("rank", integer(table.rank()));
      t.meta("depth", integer(table.depth()));
      for (const auto& [key, value] : table.rows()) {
        t.row({str(Symbol(key.first).str()), integer(key.second), num(value)});
      }
      t.write(o.stream(), cfg.format);
    }
    return kOk;
  }

  ZetaSeries series;
  if (symbol.is_unit()) {
    check_depth(spec.rank(), depth, limits(cfg));
    series = unit_zeta_series(spec.rank(), depth);
  } else {
    series = zeta_series(build_spectral_triple(obtain_measure(spec, depth, cfg, err), policy(cfg)), symbol);
  }
  if (points.empty()) {
    Table t("zeta-series", {"n", "lambda", "coefficient"});
    t.meta("symbol", str(symbol.str()));
    for (std::size_t n = 0; n < series.terms.size(); ++n) {
      t.row({integer(static_cast<long long>(n)), integer(series.terms[n].lambda), num(series.terms[n].coefficient)});
    }
    t.write(o.stream(), cfg.format);
  } else {
    Table t("zeta", {"re_s", "im_s", "re_zeta", "im_zeta", "tail_bound"});
    t.meta("symbol", str(symbol.str()));
    t.meta("depth", integer(depth));
    evaluation_rows(t, series, points);
    t.write(o.stream(), cfg.format);
  }
  return kOk;
}

int run_zeta_line(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = load_group_spec(cfg.specs.at(0));
  const int depth = depth_or(cfg, 6);
  if (cfg.steps < 1) throw InputError("--steps must be >= 1");
  if (!(cfg.im_max >= cfg.im_min)) throw InputError("--im-max must be >= --im-min");
  check_convergent({cfg.re, 0.0});
  const Symbol symbol = Symbol::parse(cfg.symbol);
  require_rank(spec.rank(), symbol.word());
  ZetaSeries series;
  if (symbol.is_unit()) {
    check_depth(spec.rank(), depth, limits(cfg));
    series = unit_zeta_series(spec.rank(), depth);
  } else {
    series = zeta_series(build_spectral_triple(obtain_measure(spec, depth, cfg, err), policy(cfg)), symbol);
  }
  std::vector<std::complex<double>> points;
  for (int i = 0; i < cfg.steps; ++i) {
    const double im = cfg.steps == 1 ? cfg.im_min
                                     : cfg.im_min + (cfg.im_max - cfg.im_min) * i / (cfg.steps - 1);
    points.emplace_back(cfg.re, im);
  }
  Table t("zeta-line", {"re_s", "im_s", "re_zeta", "im_zeta", "tail_bound"});
  t.meta("symbol", str(symbol.str()));
  t.meta("depth", integer(depth));
  evaluation_rows(t, series, points);
  Output o(cfg.out_path, out);
  t.write(o.stream(), cfg.format);
  return kOk;
}

int run_recover(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.table_path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open coefficient table '{}'", cfg.table_path));
  const auto table = read_coefficient_table(in);
  const int depth = depth_or(cfg, table.depth());
  const auto result = recover_measures(table, table.rank(), depth, policy(cfg));
  Table t("recover", {"word", "length", "mass"});
  t.meta("depth", integer(depth));
  t.meta("max_additivity_defect", num(result.max_additivity_defect));
  t.meta("min_kappa", num(result.min_kappa));
  for (const auto& [w, m] : result.masses) t.row({str(w.str()), integer(static_cast<long long>(w.length())), num(m)});
  Output o(cfg.out_path, out);
  t.write(o.stream(), cfg.format);
  return kOk;
}

int run_compare(const RunConfig& cfg, std::ostream& out) {
  const auto a = load_group_spec(cfg.specs.at(0));
  const auto b = load_group_spec(cfg.specs.at(1));
  CompareOptions options;
  options.depth = depth_or(cfg, 3);
  if (cfg.tol > 0.0) options.tolerance = cfg.tol;
  options.triple.dimension.method = parse_dimension_method(cfg.dim_method);
  options.triple.dimension.limits = limits(cfg);
  options.triple.measure_method = parse_measure_method(cfg.measure_method);
  options.triple.policy = policy(cfg);
  const auto report = compare_triples(a, b, options);
  Table t("compare", {"key", "value"});
  t.row({str("verdict"), str(std::string(to_string(report.verdict)))});
  t.row({str("genus_a"), integer(report.genus_a)});
  t.row({str("genus_b"), integer(report.genus_b)});
  t.row({str("depth"), integer(report.depth)});
  if (report.verdict != Verdict::not_equivalent) {
    t.row({str("max_mass_discrepancy"), num(report.max_mass_discrepancy)});
    t.row({str("mean_mass_discrepancy"), num(report.mean_mass_discrepancy)});
    t.row({str("max_coefficient_discrepancy"), num(report.max_coefficient_discrepancy)});
  }
  if (report.witness) t.row({str("witness"), str(report.witness->str())});
  t.row({str("summary"), str(report.summary)});
  Output o(cfg.out_path, out);
  t.write(o.stream(), cfg.format);
  return report.verdict == Verdict::measure_equal ? kOk : kNegative;
}

// CLI11 reads "-1,0" as a flag; glue such values to their option.
std::vector<std::string> glue_negative_values(std::span<const std::string> args) {
  static constexpr std::string_view numeric[] = {"--s", "--re", "--im-min", "--im-max", "--tol"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const bool takes_number = std::find(std::begin(numeric), std::end(numeric), args[i]) != std::end(numeric);
    if (takes_number && i + 1 < args.size() && args[i + 1].starts_with('-')) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectral triples of Schottky groups: measures, zeta data and comparison", "sptriple"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  const std::vector<std::string> formats{"csv", "jsonl"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "Write results to this file instead of stdout");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--max-depth", cfg.max_depth, "Depth cap")->check(CLI::Range(0, 16));
  };
  auto measured = [&](CLI::App* sub) {
    sub->add_option("--depth", cfg.depth, "Cylinder depth N")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", cfg.tol, "Residual tolerance for the dimension solver")->check(CLI::PositiveNumber);
    sub->add_option("--cache-dir", cfg.cache_dir, "Directory for cached measure tables");
    sub->add_option("--method", cfg.measure_method, "Measure estimator")
        ->check(CLI::IsMember({"transfer", "shadow"}));
    sub->add_option("--dim-method", cfg.dim_method, "Dimension solver")
        ->check(CLI::IsMember({"transfer-eigenvalue", "level-ratio"}));
  };
  auto policied = [&](CLI::App* sub) {
    sub->add_option("--drop", cfg.drop, "Dropped admissible letter")->check(CLI::IsMember({"greatest", "least"}));
    sub->add_option("--order", cfg.order, "Level enumeration order")->check(CLI::IsMember({"lex", "revlex"}));
  };

  auto* check = app.add_subcommand("check", "Verify the classical Schottky condition");
  check->add_option("spec", cfg.specs, "Group spec JSON")->required()->expected(1);
  common(check);

  auto* dim = app.add_subcommand("dim", "Critical exponent by depth");
  dim->add_option("spec", cfg.specs, "Group spec JSON")->required()->expected(1);
  common(dim);
  measured(dim);

  auto* measure = app.add_subcommand("measure", "Cylinder-mass table");
  measure->add_option("spec", cfg.specs, "Group spec JSON")->required()->expected(1);
  common(measure);
  measured(measure);

  auto* triple = app.add_subcommand("triple", "Orthonormal basis diagnostics");
  triple->add_option("spec", cfg.specs, "Group spec JSON")->required()->expected(1);
  triple->add_option("--export", cfg.export_path, "Write the basis coefficients to this file");
  common(triple);
  measured(triple);
  policied(triple);

  auto* zeta = app.add_subcommand("zeta", "Zeta coefficients, values or the full coefficient table");
  zeta->add_option("spec", cfg.specs, "Group spec JSON")->required()->expected(1);
  auto* symbol_opt = zeta->add_option("--symbol", cfg.symbol, "'unit' or a word such as a1.a2'");
  auto* s_opt = zeta->add_option("--s", cfg.s_values, "Evaluation point re,im (repeatable)");
  auto* table_opt = zeta->add_flag("--table", cfg.table, "Emit c_n(chi_eta) for every word up to the depth");
  table_opt->excludes(s_opt)->excludes(symbol_opt);
  common(zeta);
  measured(zeta);
  policied(zeta);

  auto* line = app.add_subcommand("zeta-line", "Zeta values along Re s = const");
  line->add_option("spec", cfg.specs, "Group spec JSON")->required()->expected(1);
  line->add_option("--symbol", cfg.symbol, "'unit' or a word");
  line->add_option("--re", cfg.re, "Real part of s");
  line->add_option("--im-min", cfg.im_min, "Smallest imaginary part");
  line->add_option("--im-max", cfg.im_max, "Largest imaginary part");
  line->add_option("--steps", cfg.steps, "Number of points");
  common(line);
  measured(line);
  policied(line);

  auto* recover = app.add_subcommand("recover", "Cylinder masses from a coefficient table");
  recover->add_option("table", cfg.table_path, "Coefficient table CSV")->required();
  recover->add_option("--depth", cfg.depth, "Recover up to this depth")->check(CLI::PositiveNumber);
  common(recover);
  policied(recover);

  auto* compare = app.add_subcommand("compare", "Compare the zeta data of two presentations");
  compare->add_option("specs", cfg.specs, "Two group spec JSON files")->required()->expected(2);
  compare->add_option("--depth", cfg.depth, "Comparison depth")->check(CLI::PositiveNumber);
  compare->add_option("--tol", cfg.tol, "Relative mass tolerance")->check(CLI::PositiveNumber);
  compare->add_option("--method", cfg.measure_method, "Measure estimator")
      ->check(CLI::IsMember({"transfer", "shadow"}));
  compare->add_option("--dim-method", cfg.dim_method, "Dimension solver")
      ->check(CLI::IsMember({"transfer-eigenvalue", "level-ratio"}));
  common(compare);
  policied(compare);

  const auto glued = glue_negative_values(args);
  std::vector<std::string> storage{"sptriple"};
  storage.insert(storage.end(), glued.begin(), glued.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (check->parsed()) return run_check(cfg, out);
    if (dim->parsed()) return run_dim(cfg, out);
    if (measure->parsed()) return run_measure(cfg, out, err);
    if (triple->parsed()) return run_triple(cfg, out, err);
    if (zeta->parsed()) return run_zeta(cfg, out, err);
    if (line->parsed()) return run_zeta_line(cfg, out, err);
    if (recover->parsed()) return run_recover(cfg, out);
    if (compare->parsed()) return run_compare(cfg, out);
  } catch (const InputError& e) {
    fmt::print(err, "input error: {}\n", e.what());
    return kInputError;
  } catch (const NumericError& e) {
    fmt::print(err, "numeric error: {}\n", e.what());
    return kNumericError;
  } catch (const fs::filesystem_error& e) {
    fmt::print(err, "input error: {}\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kNumericError;
  }
  return kInputError;
}

}  // namespace sptriple
