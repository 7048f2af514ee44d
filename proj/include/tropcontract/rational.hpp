#pragma once

// Exact arithmetic primitives shared by every module: thin helpers over
// GMP's mpz_class / mpq_class (integer floor/ceil division, primitive
// vector normalization, denominator clearing).  No floating point is used
// anywhere in the library.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace tropcontract {

using Int = mpz_class;
using Rat = mpq_class;

using ZVec = std::vector<Int>;
using QVec = std::vector<Rat>;

inline int sgn(const Int& x) { return mpz_sgn(x.get_mpz_t()); }
inline int sgn(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

// Floor division a/b for b != 0.
inline Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floor_rat(const Rat& x) {
  return fdiv(x.get_num(), x.get_den());
}

inline Int ceil_rat(const Rat& x) { return -floor_rat(-x); }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// Extended gcd: returns g = gcd(a,b) and writes x,y with a*x + b*y = g.
inline Int gcdext(const Int& a, const Int& b, Int& x, Int& y) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return g;
}

inline QVec to_qvec(const ZVec& v) {
  QVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

// Clears denominators: smallest positive multiple of v that is integral.
inline ZVec clear_denominators(const QVec& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, x.get_den());
  ZVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * Rat(l);
    scaled.canonicalize();
    out[i] = scaled.get_num();
  }
  return out;
}

// Divides an integer vector by the gcd of its entries (primitive vector).
// The zero vector is returned unchanged.  If `positive_first_nonzero` is
// set, the result is also sign-normalized.
inline ZVec primitive(const ZVec& v, bool positive_first_nonzero = false) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g == 0) return v;
  ZVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  if (positive_first_nonzero) {
    for (const auto& x : out) {
      if (x != 0) {
        if (x < 0)
          for (auto& y : out) y = -y;
        break;
      }
    }
  }
  return out;
}

// Primitive integer direction of a rational vector.
inline ZVec primitive(const QVec& v, bool positive_first_nonzero = false) {
  return primitive(clear_denominators(v), positive_first_nonzero);
}

inline QVec operator+(const QVec& a, const QVec& b) {
  QVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline QVec operator-(const QVec& a, const QVec& b) {
  QVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline QVec operator*(const Rat& c, const QVec& a) {
  QVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

inline Rat dot(const QVec& a, const QVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Int dot(const ZVec& a, const ZVec& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const ZVec& a, const QVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

inline bool is_zero(const ZVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline bool is_zero(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline std::string to_string(const Rat& x) { return x.get_str(); }

inline std::string to_string(const QVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

inline std::string to_string(const ZVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace tropcontract
