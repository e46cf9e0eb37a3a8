#pragma once

// Dirac spectrum λ_n = (dim A_n)³, spectral zeta series ζ_a(s) = tr(a|D|^s),
// measure recovery from zeta coefficients and the triple comparison.

#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "schottky/freegroup.hpp"
#include "schottky/gns.hpp"
#include "schottky/moebius.hpp"
#include "schottky/psmeasure.hpp"

namespace schottky {

using BigInt = boost::multiprecision::cpp_int;

/// (2g(2g-1)^{n-1})³, and 1 at n = 0.
BigInt dirac_eigenvalue(int rank, int n);
/// dim(H_n ⊖ H_{n-1}): 1, 2g-1, then 2g(2g-1)^{n-2}(2g-2).
BigInt dirac_multiplicity(int rank, int n);

struct DiracSpectrum {
  int rank = 0;
  std::vector<BigInt> eigenvalues;
  std::vector<BigInt> multiplicities;

  /// Levels 0..depth.
  static DiracSpectrum build(int rank, int depth);
};

struct ZetaTerm {
  BigInt lambda;
  double coefficient = 0.0;
};

struct ZetaSeries {
  int rank = 0;
  Symbol symbol;
  /// Term n is (λ_n, c_n(a)), n = 0..depth.
  std::vector<ZetaTerm> terms;

  int depth() const noexcept { return static_cast<int>(terms.size()) - 1; }
};

struct TripleOptions {
  DimensionOptions dimension;
  MeasureMethod measure_method = MeasureMethod::transfer;
  IndexSetPolicy policy;
};

/// Measure, basis and spectrum to one depth N.
struct SpectralTriple {
  std::optional<DimensionEstimate> delta;
  OrthonormalBasis basis;
  DiracSpectrum spectrum;

  int rank() const noexcept { return basis.rank(); }
  int depth() const noexcept { return basis.depth(); }
  const CylinderMeasure& measure() const noexcept { return basis.measure(); }
};

/// δ and the cylinder measure at depth N, then the basis on I_N.
SpectralTriple build_spectral_triple(const SchottkyGroupSpec& spec, int depth, const TripleOptions& options = {});
/// Triple on a given measure; the basis goes to the measure's depth.
SpectralTriple build_spectral_triple(const CylinderMeasure& measure, const IndexSetPolicy& policy = {});

/// The unit series has c_n = m_n exactly (trace of a rank-m_n projection)
/// and needs no measure.
ZetaSeries unit_zeta_series(int rank, int depth);
/// c_n(a) for n = 0..N through gns::coefficient; the exact multiplicities
/// for the unit. Needs |η| <= N.
ZetaSeries zeta_series(const SpectralTriple& triple, const Symbol& symbol);
ZetaSeries zeta_series(const SchottkyGroupSpec& spec, const Symbol& symbol, int depth,
                       const TripleOptions& options = {});

struct ZetaValue {
  std::complex<double> value;
  /// Bound on the dropped terms n > N (using 0 <= c_n(a) <= m_n) plus a
  /// rounding allowance for the kept ones.
  double tail_bound = 0.0;
};

/// Σ_{n<=N} c_n λ_n^s with λ^s = exp(s ln λ). Throws DivergenceError for
/// Re s >= -1/3.
ZetaValue zeta_eval(const ZetaSeries& series, std::complex<double> s);

enum class ClosedFormVariant { paper, corrected };

/// paper:     1 + (2g-2)/(2g-1) (2g)^{3s+1} / (1 - (2g-1)^{3s+1})
/// corrected: 1 + (2g-1)(2g)^{3s} + (2g-2)(2g)^{3s+1}(2g-1)^{3s} / (1 - (2g-1)^{3s+1})
/// The first applies the n >= 2 multiplicity at n = 1; the two
/// differ by ((2g-1) - 2g(2g-2)/(2g-1)) (2g)^{3s}.
std::complex<double> zeta_unit_closed_form(int rank, std::complex<double> s, ClosedFormVariant variant);

/// Σ_{n<=N} m_n (1 + λ_n²)^{-1/2}.
double summability_check(int rank, int depth);

/// g from λ_1 = (2g)³, checked against the rest of the unit series. Throws
/// InputError for an inconsistent series.
int infer_genus(const ZetaSeries& unit_series);

/// Rows (η, n, c_n(χ_→η)) keyed in shortlex-then-level order. The unit is
/// the empty word, written "unit".
class CoefficientTable {
 public:
  CoefficientTable() = default;
  CoefficientTable(int rank, int depth) : rank_(rank), depth_(depth) {}

  int rank() const noexcept { return rank_; }
  int depth() const noexcept { return depth_; }
  const std::map<std::pair<Word, int>, double>& rows() const noexcept { return rows_; }

  void set(const Word& eta, int level, double value);
  std::optional<double> find(const Word& eta, int level) const;

  friend bool operator==(const CoefficientTable&, const CoefficientTable&) = default;

 private:
  int rank_ = 0;
  int depth_ = 0;
  std::map<std::pair<Word, int>, double> rows_;
};

enum class TableScope {
  /// c_{|η|-1}(χ_→η) for 1 <= |η| <= N, which is what recovery reads.
  recovery,
  /// c_n(χ_→η) for n = 0..N, the unit and every 1 <= |η| <= N.
  full,
};

CoefficientTable coefficient_table(const SpectralTriple& triple, TableScope scope = TableScope::full);

/// Versioned `#` header (rank, depth, tool_version), then
/// `word,level,coefficient` rows, 17 significant digits.
void write_coefficient_table(std::ostream& out, const CoefficientTable& table);
CoefficientTable read_coefficient_table(std::istream& in);

struct RecoveryResult {
  /// Depth-N masses rebuilt into a measure (method tabulated).
  CylinderMeasure measure;
  /// Recovered μ(→η) for every 1 <= |η| <= N, before rebuilding.
  std::map<Word, double> masses;
  /// Largest |Σ children - parent| / parent met.
  double max_additivity_defect = 0.0;
  double min_kappa = 0.0;
};

/// μ(→η) = c_{m-1}(χ_→η) / κ(η) by induction on m = |η|, with κ(η) from the
/// basis built on the masses recovered so far. Throws NumericError when
/// κ < 1e-12, a mass is not positive or additivity fails beyond 1e-6.
RecoveryResult recover_measures(const CoefficientTable& table, int rank, int depth,
                                const IndexSetPolicy& policy = {});

enum class Verdict { not_equivalent, measure_equal, measure_different };

std::string_view to_string(Verdict verdict);

struct CompareOptions {
  int depth = 3;
  double tolerance = 1e-9;
  TripleOptions triple;
};

struct CompareReport {
  int genus_a = 0;
  int genus_b = 0;
  Verdict verdict = Verdict::not_equivalent;
  int depth = 0;
  /// Over all 1 <= |w| <= N, |μ_A - μ_B| / max(μ_A, μ_B); words are
  /// identified as the same abstract word on both sides.
  double max_mass_discrepancy = 0.0;
  double mean_mass_discrepancy = 0.0;
  /// Same relative measure over the recovery rows c_{|η|-1}(χ_→η).
  double max_coefficient_discrepancy = 0.0;
  /// Shortlex-first word whose discrepancy exceeds the tolerance.
  std::optional<Word> witness;
  std::string summary;
};

CompareReport compare_triples(const SchottkyGroupSpec& a, const SchottkyGroupSpec& b,
                              const CompareOptions& options = {});

}  // namespace schottky
