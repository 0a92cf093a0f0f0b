#include "metfact/scale_set.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdio>
#include <sstream>

#include "metfact/error.hpp"
#include "metfact/tolerance.hpp"

namespace metfact {

std::string ExtReal::to_string() const {
  if (infinite_) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

bool approx_eq(const ExtReal& a, const ExtReal& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
  return approx_eq(a.value(), b.value());
}

ScaleSet ScaleSet::all_reals() { return ScaleSet{}; }

ScaleSet ScaleSet::explicit_values(std::vector<double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k])) {
      throw DomainError("explicit scale values must be positive and finite");
    }
    if (k > 0 && !(values[k] > values[k - 1])) {
      throw DomainError("explicit scale values must be strictly increasing");
    }
  }
  ScaleSet s;
  s.kind_ = Kind::Explicit;
  s.values_ = std::move(values);
  return s;
}

ScaleSet ScaleSet::geometric(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("geometric ratio must lie in (0, 1)");
  ScaleSet s;
  s.kind_ = Kind::Geometric;
  s.ratio_ = ratio;
  return s;
}

ScaleSet ScaleSet::parse(const std::string& spec) {
  if (spec == "all" || spec == "all_reals") return all_reals();
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (head == "geometric") return geometric(std::stod(tail));
    if (head == "explicit") {
      std::vector<double> values;
      std::stringstream ss(tail);
      std::string item;
      while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
      return explicit_values(std::move(values));
    }
  } catch (const std::logic_error&) {
    // fall through to the generic message; DomainError is a logic_error too
    if (head == "geometric" || head == "explicit") {
      throw DomainError("malformed scale set '" + spec + "'");
    }
  }
  throw DomainError("unknown scale set '" + spec + "' (all | geometric:q | explicit:v1,v2,...)");
}

std::string ScaleSet::to_string() const {
  switch (kind_) {
    case Kind::AllReals:
      return "all";
    case Kind::Geometric:
      return "geometric:" + ExtReal(ratio_).to_string();
    case Kind::Explicit: {
      std::string out = "explicit:";
      for (std::size_t k = 0; k < values_.size(); ++k) {
        if (k) out += ",";
        out += ExtReal(values_[k]).to_string();
      }
      return out;
    }
  }
  return {};
}

ExtReal ScaleSet::ceiling(double t) const {
  if (t < 0.0) throw DomainError("scale_ceiling needs t >= 0");
  if (t == 0.0) return ExtReal(0.0);
  switch (kind_) {
    case Kind::AllReals:
      return ExtReal(t);
    case Kind::Explicit: {
      auto it = std::lower_bound(values_.begin(), values_.end(), t);
      if (it == values_.end()) return ExtReal::infinity();
      return ExtReal(*it);
    }
    case Kind::Geometric: {
      // q^n is decreasing in n; we want the largest n with q^n >= t.
      const long guess = static_cast<long>(std::floor(std::log(t) / std::log(ratio_)));
      long n = guess + 2;
      while (std::pow(ratio_, static_cast<double>(n)) < t) --n;
      return ExtReal(std::pow(ratio_, static_cast<double>(n)));
    }
  }
  return ExtReal::infinity();
}

bool ScaleSet::contains(double t) const {
  if (t == 0.0) return true;
  const ExtReal c = ceiling(t);
  if (c.is_infinite()) return false;
  // A value a hair above a member rounds up to the next member; accept the
  // member just below as well.
  if (approx_eq(c.value(), t)) return true;
  if (kind_ == Kind::Geometric) return approx_eq(c.value() * ratio_, t);
  if (kind_ == Kind::Explicit) {
    auto it = std::lower_bound(values_.begin(), values_.end(), t);
    return it != values_.begin() && approx_eq(*std::prev(it), t);
  }
  return false;
}

}  // namespace metfact
