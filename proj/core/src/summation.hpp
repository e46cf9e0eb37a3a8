#pragma once

#include <cmath>

namespace schottky::detail {

// Neumaier's variant of Kahan summation.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + carry_; }

 private:
  T sum_{};
  T carry_{};
};

}  // namespace schottky::detail
