#include "idealred/field.hpp"

#include <cctype>

namespace idealred {

namespace {

u64 mulmod_raw(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod_raw(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_raw(r, a, m);
    a = mulmod_raw(a, a, m);
    e >>= 1;
  }
  return r;
}

void check_same(const FieldElement& a, const FieldElement& b) {
  if (a.modulus != b.modulus)
    throw ConfigurationError("field elements from different primes: " + std::to_string(a.modulus) + " vs " +
                             std::to_string(b.modulus));
}

}  // namespace

// Deterministic Miller-Rabin; these bases are exact for all 64-bit inputs.
bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod_raw(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_raw(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(u64 p) : p_(p) {
  if (p >= (1ULL << 32)) throw ConfigurationError("prime must be below 2^32, got " + std::to_string(p));
  if (!is_prime_u64(p)) throw ConfigurationError("modulus is not prime: " + std::to_string(p));
  barrett_ = ~0ULL / p_;
}

u64 PrimeField::pow(u64 a, u64 e) const noexcept {
  u64 r = 1 % p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

u64 PrimeField::inv(u64 a) const {
  if (a % p_ == 0) throw DivisionByZero("inverse of zero in F_" + std::to_string(p_));
  // Extended Euclid on signed 64-bit values.
  long long t = 0, nt = 1;
  long long r = static_cast<long long>(p_), nr = static_cast<long long>(a % p_);
  while (nr != 0) {
    long long q = r / nr;
    long long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += static_cast<long long>(p_);
  return static_cast<u64>(t);
}

u64 PrimeField::from_int(long long v) const noexcept {
  long long m = static_cast<long long>(p_);
  long long r = v % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

std::vector<u64> PrimeField::inv_all(const std::vector<u64>& xs) const {
  std::vector<u64> prefix(xs.size());
  u64 acc = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0) throw DivisionByZero("inv_all: zero entry at index " + std::to_string(i));
    prefix[i] = acc;
    acc = mul(acc, xs[i]);
  }
  u64 ia = inv(acc);
  std::vector<u64> out(xs.size());
  for (std::size_t i = xs.size(); i-- > 0;) {
    out[i] = mul(ia, prefix[i]);
    ia = mul(ia, xs[i]);
  }
  return out;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  FieldElement r = a;
  r.value = (a.value + b.value) % a.modulus;
  return r;
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  FieldElement r = a;
  r.value = (a.value + a.modulus - b.value) % a.modulus;
  return r;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  FieldElement r = a;
  r.value = mulmod_raw(a.value, b.value, a.modulus);
  return r;
}

FieldElement operator-(const FieldElement& a) {
  FieldElement r = a;
  r.value = a.value == 0 ? 0 : a.modulus - a.value;
  return r;
}

FieldElement inv(const FieldElement& a) {
  if (a.value == 0) throw DivisionByZero("inverse of zero in F_" + std::to_string(a.modulus));
  FieldElement r = a;
  r.value = powmod_raw(a.value, a.modulus - 2, a.modulus);
  return r;
}

std::string residue_to_string(u64 v) { return std::to_string(v); }

u64 residue_from_string(const std::string& s, const PrimeField& f) {
  if (s.empty()) throw InvalidArgument("empty residue string");
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '-') {
    negative = true;
    i = 1;
  }
  if (i >= s.size()) throw InvalidArgument("bad residue string '" + s + "'");
  u64 acc = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw InvalidArgument("bad residue string '" + s + "'");
    acc = f.add(f.mul(acc, 10 % f.p()), static_cast<u64>(s[i] - '0') % f.p());
  }
  return negative ? f.neg(acc) : acc;
}

}  // namespace idealred
