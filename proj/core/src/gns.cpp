#include "schottky/gns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "schottky/error.hpp"
#include "summation.hpp"

namespace schottky {

namespace {

std::size_t power(std::size_t base, int exponent) {
  std::size_t p = 1;
  for (int i = 0; i < exponent; ++i) p *= base;
  return p;
}

std::size_t branch(int rank) { return static_cast<std::size_t>(2 * rank - 1); }

// Rank range of the level-m descendants of the level-n rank r.
std::pair<std::size_t, std::size_t> descendants(int rank, int n, std::size_t r, int m) {
  if (n == 0) return {0, word_count(rank, m)};
  const auto f = power(branch(rank), m - n);
  return {r * f, (r + 1) * f};
}

}  // namespace

HilbertVector::HilbertVector(int rank, int level, std::size_t begin, std::vector<double> coefficients)
    : rank_(rank), level_(level), begin_(begin), coefficients_(std::move(coefficients)) {
  if (rank < 2 || level < 0) throw InputError("HilbertVector needs rank >= 2 and level >= 0");
  if (begin + coefficients_.size() > word_count(rank, level)) {
    throw InputError(fmt::format("HilbertVector block {}..{} exceeds level {}", begin,
                                 begin + coefficients_.size(), level));
  }
}

HilbertVector HilbertVector::characteristic(int rank, const Word& w) {
  require_rank(rank, w);
  return HilbertVector(rank, static_cast<int>(w.length()), word_rank(rank, w), {1.0});
}

double HilbertVector::value_at(int m, std::size_t index) const {
  if (m < level_) throw InputError("value_at below the vector's level");
  const std::size_t own = level_ == 0 ? 0 : index / power(branch(rank_), m - level_);
  if (own < begin_ || own >= end()) return 0.0;
  return coefficients_[own - begin_];
}

std::pair<std::size_t, std::size_t> HilbertVector::support(int m) const {
  if (m < level_) throw InputError("support below the vector's level");
  if (coefficients_.empty()) return {0, 0};
  if (level_ == 0) return {0, word_count(rank_, m)};
  const auto f = power(branch(rank_), m - level_);
  return {begin_ * f, end() * f};
}

HilbertVector HilbertVector::refined(int m) const {
  const auto [lo, hi] = support(m);
  std::vector<double> out;
  out.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) out.push_back(value_at(m, i));
  return HilbertVector(rank_, m, lo, std::move(out));
}

std::vector<std::pair<Word, double>> HilbertVector::entries() const {
  std::vector<std::pair<Word, double>> out;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (coefficients_[i] != 0.0) out.emplace_back(word_unrank(rank_, level_, begin_ + i), coefficients_[i]);
  }
  return out;
}

double inner_product(const HilbertVector& f, const HilbertVector& h, const CylinderMeasure& measure) {
  if (f.rank() != h.rank() || f.rank() != measure.rank()) throw InputError("inner_product: rank mismatch");
  const int m = std::max(f.level(), h.level());
  if (m > measure.depth()) {
    throw InputError(fmt::format("inner_product at level {} exceeds the measure depth {}", m, measure.depth()));
  }
  const auto [f_lo, f_hi] = f.support(m);
  const auto [h_lo, h_hi] = h.support(m);
  const auto mu = measure.level(m);
  detail::CompensatedSum<double> sum;
  for (std::size_t i = std::max(f_lo, h_lo); i < std::min(f_hi, h_hi); ++i) {
    sum.add(f.value_at(m, i) * h.value_at(m, i) * mu[i]);
  }
  return sum.value();
}

double gram_entry(const CylinderMeasure& measure, const Word& w, const Word& v) {
  const auto top = max_word(w, v);
  return top ? measure.mass(*top) : 0.0;
}

Symbol Symbol::parse(std::string_view text) {
  if (text == "unit") return unit();
  return Symbol(Word::parse(text));
}

HilbertVector apply_symbol(const Symbol& a, const HilbertVector& f) {
  require_rank(f.rank(), a.word());
  if (a.is_unit()) return f;
  const int k = static_cast<int>(a.word().length());
  const int m = std::max(k, f.level());
  const auto [f_lo, f_hi] = f.support(m);
  const auto [e_lo, e_hi] = descendants(f.rank(), k, word_rank(f.rank(), a.word()), m);
  const auto lo = std::max(f_lo, e_lo);
  const auto hi = std::max(lo, std::min(f_hi, e_hi));
  std::vector<double> out;
  out.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) out.push_back(f.value_at(m, i));
  return HilbertVector(f.rank(), m, lo, std::move(out));
}

HilbertVector length_one_vector(const CylinderMeasure& measure, Letter w) {
  const Word word = Word::from_letters({w});
  require_rank(measure.rank(), word);
  return HilbertVector(measure.rank(), 1, word_rank(measure.rank(), word), {1.0 / std::sqrt(measure.mass(word))});
}

const std::vector<HilbertVector>& OrthonormalBasis::level(int n) const {
  if (n < 0 || n > depth()) throw InputError(fmt::format("basis level {} outside 0..{}", n, depth()));
  return levels_[static_cast<std::size_t>(n)];
}

bool OrthonormalBasis::contains(const Word& w) const {
  if (w.max_generator() > rank() || w.length() > static_cast<std::size_t>(depth())) return false;
  return positions_[w.length()][word_rank(rank(), w)] >= 0;
}

const HilbertVector& OrthonormalBasis::vector(const Word& w) const {
  if (!contains(w)) throw InputError(fmt::format("{} is not in the index set I_{}", w.str(), depth()));
  return levels_[w.length()][static_cast<std::size_t>(positions_[w.length()][word_rank(rank(), w)])];
}

OrthonormalBasis orthonormalize(const IndexSetFamily& isf, const CylinderMeasure& measure) {
  const int g = isf.rank();
  if (measure.rank() != g) throw InputError("orthonormalize: index sets and measure differ in rank");
  if (isf.depth() > measure.depth()) {
    throw InputError(fmt::format("index-set depth {} exceeds the measure depth {}", isf.depth(), measure.depth()));
  }
  OrthonormalBasis basis(isf, measure);
  basis.min_phi_norm_ = std::numeric_limits<double>::infinity();
  basis.levels_.push_back({HilbertVector(g, 0, 0, {1.0})});
  basis.positions_.push_back({0});

  for (int n = 1; n <= isf.depth(); ++n) {
    const auto& words = isf.level(n);
    const auto mu = measure.level(n);
    std::vector<HilbertVector> level;
    level.reserve(words.size());
    std::vector<std::ptrdiff_t> positions(word_count(g, n), -1);

    for (const auto& w : words) {
      const Word parent = w.prefix(static_cast<std::size_t>(n - 1));
      const auto [lo, hi] = descendants(g, n - 1, word_rank(g, parent), n);
      const std::size_t self = word_rank(g, w);
      const double parent_mass = measure.mass(parent);

      // χ_→w minus its conditional expectation on H_{n-1}
      std::vector<double> phi(hi - lo, -mu[self] / parent_mass);
      phi[self - lo] += 1.0;

      auto local_dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
        detail::CompensatedSum<double> s;
        for (std::size_t i = 0; i < x.size(); ++i) s.add(x[i] * y[i] * mu[lo + i]);
        return s.value();
      };
      for (const auto& psi : level) {
        if (psi.begin() != lo) continue;  // other parent, disjoint support
        const double c = local_dot(phi, psi.coefficients());
        for (std::size_t i = 0; i < phi.size(); ++i) phi[i] -= c * psi.coefficients()[i];
      }
      const double norm = std::sqrt(local_dot(phi, phi));
      basis.min_phi_norm_ = std::min(basis.min_phi_norm_, norm);
      if (!(norm >= 1e-12)) {
        throw NumericError(fmt::format("Gram-Schmidt breaks down at {}: |phi| = {:.3g}", w.str(), norm));
      }
      for (double& x : phi) x /= norm;
      positions[self] = static_cast<std::ptrdiff_t>(level.size());
      level.emplace_back(g, n, lo, std::move(phi));
    }
    basis.levels_.push_back(std::move(level));
    basis.positions_.push_back(std::move(positions));
  }
  if (isf.depth() == 0) basis.min_phi_norm_ = std::sqrt(measure.total());
  return basis;
}

double coefficient(const OrthonormalBasis& basis, const Symbol& a, int n) {
  if (n < 0 || n > basis.depth()) {
    throw InputError(fmt::format("coefficient level {} outside 0..{}", n, basis.depth()));
  }
  if (a.word().length() > static_cast<std::size_t>(basis.measure().depth())) {
    throw InputError(fmt::format("symbol {} is deeper than the measure depth {}", a.str(), basis.measure().depth()));
  }
  detail::CompensatedSum<double> sum;
  for (const auto& psi : basis.level(n)) sum.add(inner_product(psi, apply_symbol(a, psi), basis.measure()));
  return sum.value();
}

double kappa(const OrthonormalBasis& basis, const Word& eta) {
  require_rank(basis.rank(), eta);
  const int m = static_cast<int>(eta.length());
  if (m < 1 || m > basis.depth() + 1) {
    throw InputError(fmt::format("kappa needs 1 <= |eta| <= {}, got {}", basis.depth() + 1, eta.str()));
  }
  const std::size_t r = word_rank(basis.rank(), eta.prefix(static_cast<std::size_t>(m - 1)));
  detail::CompensatedSum<double> sum;
  for (const auto& psi : basis.level(m - 1)) {
    const double x = psi.value_at(m - 1, r);
    sum.add(x * x);
  }
  return sum.value();
}

}  // namespace schottky
