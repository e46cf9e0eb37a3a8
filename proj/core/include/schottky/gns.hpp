#pragma once

// The GNS Hilbert space of the state τ(a) = ∫ a dμ, the orthonormal family
// {Ψ_w : w ∈ I_N} and the spectral coefficients c_n(a).
//
// A vector at level n is a function constant on the depth-n cylinders. Its
// nonzero coefficients always lie in one cylinder →p (p = e for levels 0
// and 1), which is a contiguous block of word ranks, so vectors store that
// block only.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schottky/freegroup.hpp"
#include "schottky/psmeasure.hpp"

namespace schottky {

class HilbertVector {
 public:
  /// The zero vector at level 0.
  HilbertVector() = default;
  /// Coefficients for the level-n ranks begin .. begin + size - 1.
  HilbertVector(int rank, int level, std::size_t begin, std::vector<double> coefficients);

  /// χ_→w, at level |w|.
  static HilbertVector characteristic(int rank, const Word& w);

  int rank() const noexcept { return rank_; }
  int level() const noexcept { return level_; }
  std::size_t begin() const noexcept { return begin_; }
  std::size_t end() const noexcept { return begin_ + coefficients_.size(); }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }

  /// Coefficient on the level-m cylinder of rank \p index, m >= level().
  double value_at(int m, std::size_t index) const;
  /// Index range of the stored block seen from level m >= level().
  std::pair<std::size_t, std::size_t> support(int m) const;
  /// The same function written at level m: every coefficient copied to all
  /// extensions.
  HilbertVector refined(int m) const;

  /// Nonzero (word, coefficient) pairs in canonical order.
  std::vector<std::pair<Word, double>> entries() const;

 private:
  int rank_ = 2;
  int level_ = 0;
  std::size_t begin_ = 0;
  std::vector<double> coefficients_;
};

/// Σ_{|v|=m} f(v) h(v) μ(→v) at m = max level. Throws InputError when m
/// exceeds the measure depth.
double inner_product(const HilbertVector& f, const HilbertVector& h, const CylinderMeasure& measure);

/// ⟨χ_→w | χ_→v⟩ = μ(→max{w, v}), 0 for incomparable words.
double gram_entry(const CylinderMeasure& measure, const Word& w, const Word& v);

/// A multiplier χ_→η of the symbol algebra. η = e is the unit, written
/// "unit" in text form.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(Word eta) : eta_(std::move(eta)) {}
  static Symbol unit() { return {}; }
  /// "unit" or a word.
  static Symbol parse(std::string_view text);

  bool is_unit() const noexcept { return eta_.empty(); }
  const Word& word() const noexcept { return eta_; }
  std::string str() const { return is_unit() ? "unit" : eta_.str(); }

  friend bool operator==(const Symbol&, const Symbol&) = default;

 private:
  Word eta_;
};

/// χ_→η · f, written at level max(|η|, level(f)).
HilbertVector apply_symbol(const Symbol& a, const HilbertVector& f);

/// The bare level-1 vectors χ_→w / √μ(→w) for a letter w. These have
/// unit norm but overlap Ψ_e by √μ(→w); see orthonormalize.
HilbertVector length_one_vector(const CylinderMeasure& measure, Letter w);

class OrthonormalBasis {
 public:
  int rank() const noexcept { return index_sets_.rank(); }
  int depth() const noexcept { return index_sets_.depth(); }
  const IndexSetFamily& index_sets() const noexcept { return index_sets_; }
  const CylinderMeasure& measure() const noexcept { return measure_; }

  /// Ψ_w for w ∈ I_n - I_{n-1}, in the index family's level order.
  const std::vector<HilbertVector>& level(int n) const;
  /// Ψ_w; throws InputError when w is not in I_N.
  const HilbertVector& vector(const Word& w) const;
  bool contains(const Word& w) const;

  /// Smallest ‖φ_w‖ met during the construction.
  double min_phi_norm() const noexcept { return min_phi_norm_; }

 private:
  friend OrthonormalBasis orthonormalize(const IndexSetFamily&, const CylinderMeasure&);
  OrthonormalBasis(IndexSetFamily isf, CylinderMeasure cm)
      : index_sets_(std::move(isf)), measure_(std::move(cm)) {}

  IndexSetFamily index_sets_;
  CylinderMeasure measure_;
  std::vector<std::vector<HilbertVector>> levels_;
  // level n: word rank -> position in levels_[n], or -1
  std::vector<std::vector<std::ptrdiff_t>> positions_;
  double min_phi_norm_ = 0.0;
};

/// Gram-Schmidt of {χ_→w : w ∈ I_N} level by level, in the family's
/// enumeration order, starting from Ψ_e = χ_Λ.
///
/// The previous levels span H_{n-1} = span{χ_→q : |q| = n-1}, so their
/// combined projection of χ_→w is the conditional expectation
/// (μ(→w)/μ(→p)) χ_→p with p the parent of w. That is subtracted in closed
/// form; the remaining steps run over the earlier siblings, the only vectors
/// of level n whose support meets →w. Level 1 is treated the same way with
/// p = e, so Ψ_a is orthogonal to Ψ_e.
///
/// Throws NumericError when some ‖φ_w‖ < 1e-12.
OrthonormalBasis orthonormalize(const IndexSetFamily& isf, const CylinderMeasure& measure);

/// c_n(a) = Σ_{w ∈ I_n - I_{n-1}} ⟨Ψ_w | a Ψ_w⟩, summed in level order.
double coefficient(const OrthonormalBasis& basis, const Symbol& a, int n);

/// κ(η) = Σ_{w ∈ I_{m-1} - I_{m-2}} Ψ_w(prefix_{m-1} η)², m = |η|, so that
/// c_{m-1}(χ_→η) = μ(→η) κ(η). Needs 1 <= |η| <= depth + 1.
double kappa(const OrthonormalBasis& basis, const Word& eta);

}  // namespace schottky
