#pragma once

#include <string>

#include "advbound/errors.hpp"

namespace advbound {

/// Which lp geometry is in force: p=0 (sparse/Hamming), finite p>0, or p=inf.
class NormOrder {
 public:
  enum class Kind { Zero, Finite, Infinity };

  static NormOrder zero() { return NormOrder(Kind::Zero, 0.0); }
  static NormOrder finite(double p) {
    if (!(p > 0.0)) throw DomainError("finite norm order requires p > 0");
    return NormOrder(Kind::Finite, p);
  }
  static NormOrder infinity() { return NormOrder(Kind::Infinity, 0.0); }

  Kind kind() const noexcept { return kind_; }
  bool is_zero() const noexcept { return kind_ == Kind::Zero; }
  bool is_infinity() const noexcept { return kind_ == Kind::Infinity; }

  double p() const {
    if (kind_ != Kind::Finite) throw DomainError("p defined only for finite norm orders");
    return p_;
  }

  /// p* = min(p,2) for finite p, 2 for infinity. Undefined for p=0, which has
  /// its own formulas everywhere it appears.
  double p_star() const {
    switch (kind_) {
      case Kind::Finite:
        return p_ < 2.0 ? p_ : 2.0;
      case Kind::Infinity:
        return 2.0;
      default:
        throw DomainError("p* undefined for the l0 norm");
    }
  }

  std::string label() const {
    switch (kind_) {
      case Kind::Zero:
        return "0";
      case Kind::Infinity:
        return "inf";
      default: {
        // trim trailing zeros for readable CSV cells
        std::string s = std::to_string(p_);
        while (s.find('.') != std::string::npos && (s.back() == '0' || s.back() == '.')) {
          bool dot = s.back() == '.';
          s.pop_back();
          if (dot) break;
        }
        return s;
      }
    }
  }

  friend bool operator==(const NormOrder& a, const NormOrder& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.p_ == b.p_);
  }

 private:
  NormOrder(Kind kind, double p) : kind_(kind), p_(p) {}
  Kind kind_;
  double p_;
};

}  // namespace advbound
