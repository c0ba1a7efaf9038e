#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "idealred/errors.hpp"

namespace idealred {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Prime field F_p with p < 2^32, so a product of two residues fits in 64 bits.
// Arithmetic on raw residues (u64 in [0,p)) goes through this object; reduction
// of 64-bit values uses a precomputed Barrett constant.
class PrimeField {
 public:
  static constexpr u64 kDefaultPrime = 2147483647ULL;

  explicit PrimeField(u64 p = kDefaultPrime);

  u64 p() const noexcept { return p_; }

  u64 reduce(u64 x) const noexcept {
    u64 q = static_cast<u64>((static_cast<u128>(x) * barrett_) >> 64);
    u64 r = x - q * p_;
    while (r >= p_) r -= p_;
    return r;
  }
  u64 add(u64 a, u64 b) const noexcept {
    u64 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }
  u64 mul(u64 a, u64 b) const noexcept { return reduce(a * b); }
  u64 pow(u64 a, u64 e) const noexcept;
  u64 inv(u64 a) const;  // throws DivisionByZero on 0

  // Maps an arbitrary signed integer into [0,p).
  u64 from_int(long long v) const noexcept;
  // Centered representative, handy for printing small signs.
  long long to_signed(u64 a) const noexcept { return a > p_ / 2 ? -static_cast<long long>(p_ - a) : static_cast<long long>(a); }

  // Batch inversion of nonzero values (Montgomery trick).
  std::vector<u64> inv_all(const std::vector<u64>& xs) const;

  bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }
  bool operator!=(const PrimeField& o) const noexcept { return p_ != o.p_; }

 private:
  u64 p_;
  u64 barrett_;
};

bool is_prime_u64(u64 n);

// Checked scalar that remembers its modulus. Used at API boundaries; hot loops
// work on raw residues through PrimeField.
struct FieldElement {
  u64 value = 0;
  u64 modulus = PrimeField::kDefaultPrime;

  FieldElement() = default;
  FieldElement(const PrimeField& f, u64 v) : value(v % f.p()), modulus(f.p()) {}

  bool is_zero() const noexcept { return value == 0; }
  std::string to_string() const { return std::to_string(value); }
  bool operator==(const FieldElement& o) const noexcept { return value == o.value && modulus == o.modulus; }
  bool operator!=(const FieldElement& o) const noexcept { return !(*this == o); }
};

FieldElement operator+(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a, const FieldElement& b);
FieldElement operator*(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a);
FieldElement inv(const FieldElement& a);

inline std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.value; }

// Decimal string <-> residue, as used in every JSON format of the library.
std::string residue_to_string(u64 v);
u64 residue_from_string(const std::string& s, const PrimeField& f);

}  // namespace idealred
