#pragma once

#include <compare>
#include <string>
#include <vector>

namespace metfact {

// A value in [0, inf]. Infinity is a flag, never a floating sentinel.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr explicit ExtReal(double v) : value_(v) {}
  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  // Precondition: finite.
  double value() const { return value_; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

bool approx_eq(const ExtReal& a, const ExtReal& b);

/// The value set S of an ultrametric: all non-negative reals, an explicit
/// finite list (plus 0), or a geometric family {q^n : n in Z} plus 0.
class ScaleSet {
 public:
  enum class Kind { AllReals, Explicit, Geometric };

  static ScaleSet all_reals();
  // Values must be strictly positive and strictly increasing.
  static ScaleSet explicit_values(std::vector<double> values);
  // 0 < ratio < 1.
  static ScaleSet geometric(double ratio);

  // "all", "geometric:0.5", "explicit:1,2,5".
  static ScaleSet parse(const std::string& spec);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  double ratio() const { return ratio_; }
  const std::vector<double>& values() const { return values_; }

  // Positive part has infimum 0.
  bool characteristic() const { return kind_ != Kind::Explicit; }

  // Least s in S with s >= t, or infinity. Exact at powers of a geometric
  // ratio: candidate exponents are compared directly against t.
  ExtReal ceiling(double t) const;

  // t lies in S (t = 0 always does) up to the shared tolerance.
  bool contains(double t) const;

 private:
  Kind kind_ = Kind::AllReals;
  double ratio_ = 0.0;
  std::vector<double> values_;
};

}  // namespace metfact
