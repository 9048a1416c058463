#pragma once

// Exact scalar arithmetic in two regimes:
//  - GenericQ: the rationals, with q specialised to a rational q0 that is not a root of unity;
//  - Cyclotomic: Q(zeta_t) = Q[x]/Phi_t(x), elements stored as reduced coefficient vectors.
//
// A Scalar is a coefficient vector over Q, lowest degree first, with trailing zeros trimmed.
// Rational scalars (length <= 1) embed in every field and carry no modulus; cyclotomic
// elements carry a pointer to their (process-lifetime) modulus.

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace halfder {

using Rational = mpq_class;

/// Polynomial over Q, coefficients lowest degree first, no trailing zeros (zero polynomial is empty).
using Poly = std::vector<Rational>;

namespace poly {
void trim(Poly& p);
Poly mul(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
/// Euclidean division a = q*b + r with deg r < deg b. b must be nonzero.
void divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem);
std::string to_string(const Poly& p);
}  // namespace poly

/// The t-th cyclotomic polynomial, from x^t - 1 = prod_{d | t} Phi_d(x).
Poly cyclotomic_polynomial(int t);

int euler_phi(int t);

/// Reduction data for Q[x]/Phi_t. Instances are interned and never freed.
struct CycloModulus {
  int t = 0;
  Poly phi;                         // monic, degree `degree`
  int degree = 0;
  std::vector<Poly> zeta_powers;    // zeta^r reduced, r in [0, t)
};

const CycloModulus& cyclo_modulus(int t);

class Scalar {
 public:
  Scalar() = default;
  Scalar(long value);  // NOLINT(google-explicit-constructor)
  Scalar(int value) : Scalar(static_cast<long>(value)) {}  // NOLINT
  Scalar(Rational value);  // NOLINT

  /// Builds an element of Q[x]/Phi_t from an arbitrary polynomial (reduced here).
  static Scalar from_poly(Poly coeffs, const CycloModulus* modulus);

  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  bool is_rational() const { return c_.size() <= 1; }
  /// Value of a rational scalar; throws std::logic_error for proper cyclotomic elements.
  Rational rational() const;

  const Poly& coeffs() const { return c_; }
  const CycloModulus* modulus() const { return mod_; }

  Scalar inverse() const;
  Scalar operator-() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  /// this -= a * b, the inner step of elimination.
  void sub_mul(const Scalar& a, const Scalar& b);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.c_ == b.c_; }

 private:
  Poly c_;
  const CycloModulus* mod_ = nullptr;
};

/// The coefficient field together with the chosen value of q.
class ScalarField {
 public:
  enum class Mode { GenericQ, Cyclotomic };

  /// Q with q = q0; q0 must not be 0 or +-1.
  static ScalarField generic(const Rational& q0);
  /// Q(zeta_t) with q = zeta_t; requires t >= 3.
  static ScalarField cyclotomic(int t);

  Mode mode() const { return mode_; }
  bool is_cyclotomic() const { return mode_ == Mode::Cyclotomic; }
  const Rational& q0() const;
  int t() const;
  /// Dimension over Q: 1 in generic mode, phi(t) otherwise.
  int degree() const { return mod_ ? mod_->degree : 1; }
  const CycloModulus* modulus() const { return mod_; }

  Scalar qpow(long long k) const;
  Scalar from_int(long long v) const { return Scalar(Rational(static_cast<long>(v))); }

  /// "p/q" or "p" in generic mode; "[c0, c1, ...]" padded to phi(t) entries in cyclotomic mode.
  std::string format(const Scalar& s) const;
  /// Accepts a rational literal in both modes, or a bracketed coefficient list in cyclotomic mode.
  Scalar parse(std::string_view text) const;

  std::string describe() const;

 private:
  ScalarField() = default;
  Mode mode_ = Mode::GenericQ;
  Rational q0_;
  const CycloModulus* mod_ = nullptr;
  std::shared_ptr<const std::vector<Scalar>> pow_cache_;  // q0^k for k in [-kCache, kCache]
  static constexpr long long kCache = 256;
};

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

}  // namespace halfder
