#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace idealred {

// Variable families. X is the generic matrix of f; Lambda/Xi/Y/Z are the
// auxiliary families of the reduction; U indexes target inputs (det_t, IMM, ABPs).
enum class Family : std::uint8_t { X = 0, Lambda = 1, Xi = 2, Y = 3, Z = 4, U = 5, Scalar = 6 };

enum class Scalar : std::uint8_t { V = 0, W = 1, T = 2, Delta = 3, Hom = 4 };

// Packed identifier: family | i | j | k, each index < 256. Ordering of the packed
// code is the canonical variable order used everywhere (hashing, printing, JSON).
class VariableId {
 public:
  constexpr VariableId() = default;
  static VariableId make(Family f, unsigned i = 0, unsigned j = 0, unsigned k = 0);

  static VariableId x(unsigned i, unsigned j) { return make(Family::X, i, j); }
  static VariableId lambda(unsigned i, unsigned j) { return make(Family::Lambda, i, j); }
  static VariableId xi(unsigned i, unsigned j) { return make(Family::Xi, i, j); }
  static VariableId y(unsigned i) { return make(Family::Y, i); }
  static VariableId z(unsigned i) { return make(Family::Z, i); }
  static VariableId u(unsigned i, unsigned j = 0, unsigned k = 0) { return make(Family::U, i, j, k); }
  static VariableId scalar(Scalar s) { return make(Family::Scalar, static_cast<unsigned>(s)); }
  static VariableId v() { return scalar(Scalar::V); }
  static VariableId w() { return scalar(Scalar::W); }
  static VariableId t() { return scalar(Scalar::T); }
  static VariableId delta() { return scalar(Scalar::Delta); }
  static VariableId hom() { return scalar(Scalar::Hom); }

  static constexpr VariableId from_code(std::uint32_t c) {
    VariableId v;
    v.code_ = c;
    return v;
  }

  constexpr std::uint32_t code() const { return code_; }
  Family family() const { return static_cast<Family>(code_ >> 24); }
  unsigned i() const { return (code_ >> 16) & 0xff; }
  unsigned j() const { return (code_ >> 8) & 0xff; }
  unsigned k() const { return code_ & 0xff; }

  std::string name() const;
  static VariableId parse(const std::string& name);  // throws InvalidArgument

  friend constexpr bool operator==(VariableId a, VariableId b) { return a.code_ == b.code_; }
  friend constexpr bool operator!=(VariableId a, VariableId b) { return a.code_ != b.code_; }
  friend constexpr bool operator<(VariableId a, VariableId b) { return a.code_ < b.code_; }

 private:
  std::uint32_t code_ = 0;
};

}  // namespace idealred

template <>
struct std::hash<idealred::VariableId> {
  std::size_t operator()(idealred::VariableId v) const noexcept { return std::hash<std::uint32_t>()(v.code()); }
};
