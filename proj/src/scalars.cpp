#include "halfder/scalars.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "halfder/errors.hpp"

namespace halfder {

// ---------------------------------------------------------------------------
// Polynomials

namespace poly {

void trim(Poly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

void divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem) {
  if (b.empty()) throw DivisionByZero();
  rem = a;
  trim(rem);
  quot.clear();
  const size_t db = b.size() - 1;
  if (rem.size() < b.size()) return;
  quot.assign(rem.size() - db, Rational(0));
  const Rational lead_inv = 1 / b.back();
  for (size_t k = rem.size(); k-- > db;) {
    if (sgn(rem[k]) == 0) continue;
    Rational c = rem[k] * lead_inv;
    quot[k - db] = c;
    for (size_t j = 0; j <= db; ++j) rem[k - db + j] -= c * b[j];
  }
  trim(rem);
  trim(quot);
}

std::string to_string(const Poly& p) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << format_rational(p[i]);
  }
  os << ']';
  return os.str();
}

}  // namespace poly

Poly cyclotomic_polynomial(int t) {
  if (t < 1) throw std::invalid_argument("cyclotomic_polynomial: t must be positive");
  static std::mutex mu;
  static std::map<int, Poly> memo;
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(t); it != memo.end()) return it->second;
  }
  Poly num(static_cast<size_t>(t) + 1, Rational(0));
  num[0] = -1;
  num[t] = 1;
  Poly den{Rational(1)};
  for (int d = 1; d < t; ++d)
    if (t % d == 0) den = poly::mul(den, cyclotomic_polynomial(d));
  Poly q, r;
  poly::divmod(num, den, q, r);
  if (!r.empty()) throw std::logic_error("cyclotomic_polynomial: inexact division");
  std::lock_guard lock(mu);
  memo.emplace(t, q);
  return q;
}

int euler_phi(int t) {
  int result = t;
  int n = t;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

namespace {

// In-place reduction of p modulo the monic polynomial m.phi.
void reduce(Poly& p, const CycloModulus& m) {
  const int d = m.degree;
  for (size_t k = p.size(); k-- > static_cast<size_t>(d);) {
    if (sgn(p[k]) == 0) continue;
    Rational c = p[k];
    for (int j = 0; j < d; ++j) p[k - d + j] -= c * m.phi[j];
    p[k] = 0;
  }
  poly::trim(p);
}

}  // namespace

const CycloModulus& cyclo_modulus(int t) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycloModulus>> registry;
  std::lock_guard lock(mu);
  auto& slot = registry[t];
  if (!slot) {
    auto m = std::make_unique<CycloModulus>();
    m->t = t;
    m->phi = cyclotomic_polynomial(t);
    m->degree = static_cast<int>(m->phi.size()) - 1;
    for (int r = 0; r < t; ++r) {
      Poly x(static_cast<size_t>(r) + 1, Rational(0));
      x[r] = 1;
      reduce(x, *m);
      m->zeta_powers.push_back(std::move(x));
    }
    slot = std::move(m);
  }
  return *slot;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(long value) {
  if (value != 0) c_.emplace_back(value);
}

Scalar::Scalar(Rational value) {
  if (sgn(value) != 0) {
    value.canonicalize();
    c_.push_back(std::move(value));
  }
}

Scalar Scalar::from_poly(Poly coeffs, const CycloModulus* modulus) {
  Scalar s;
  if (modulus) reduce(coeffs, *modulus);
  poly::trim(coeffs);
  if (!modulus && coeffs.size() > 1) throw std::logic_error("Scalar::from_poly: polynomial without modulus");
  s.c_ = std::move(coeffs);
  s.mod_ = s.c_.size() > 1 ? modulus : nullptr;
  return s;
}

bool Scalar::is_one() const { return c_.size() == 1 && c_[0] == 1; }

Rational Scalar::rational() const {
  if (c_.size() > 1) throw std::logic_error("Scalar::rational: not a rational element");
  return c_.empty() ? Rational(0) : c_[0];
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  if (!mod_) mod_ = o.mod_;
  poly::trim(c_);
  if (c_.size() <= 1) mod_ = nullptr;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  if (!mod_) mod_ = o.mod_;
  poly::trim(c_);
  if (c_.size() <= 1) mod_ = nullptr;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (c_.empty()) return *this;
  if (o.c_.empty()) {
    c_.clear();
    mod_ = nullptr;
    return *this;
  }
  if (o.c_.size() == 1) {
    for (auto& c : c_) c *= o.c_[0];
    return *this;
  }
  if (c_.size() == 1) {
    Rational k = c_[0];
    c_ = o.c_;
    mod_ = o.mod_;
    for (auto& c : c_) c *= k;
    return *this;
  }
  if (mod_ != o.mod_) throw std::logic_error("Scalar: mixing elements of different cyclotomic fields");
  Poly p = poly::mul(c_, o.c_);
  reduce(p, *mod_);
  c_ = std::move(p);
  if (c_.size() <= 1) mod_ = nullptr;
  return *this;
}

void Scalar::sub_mul(const Scalar& a, const Scalar& b) {
  if (a.c_.empty() || b.c_.empty()) return;
  if (a.c_.size() == 1 && b.c_.size() == 1) {
    if (c_.empty()) c_.emplace_back(0);
    mpq_class prod = a.c_[0] * b.c_[0];
    c_[0] -= prod;
    poly::trim(c_);
    if (c_.size() <= 1) mod_ = nullptr;
    return;
  }
  *this -= a * b;
}

Scalar Scalar::inverse() const {
  if (c_.empty()) throw DivisionByZero();
  if (c_.size() == 1) return Scalar(Rational(1 / c_[0]));
  // Extended Euclid against Phi_t: s * a + u * Phi = gcd (a nonzero constant).
  Poly r0 = mod_->phi, r1 = c_;
  Poly s0, s1{Rational(1)};
  while (!r1.empty()) {
    Poly q, r;
    poly::divmod(r0, r1, q, r);
    Poly s2 = poly::sub(s0, poly::mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) throw std::logic_error("Scalar::inverse: modulus not irreducible");
  Rational k = 1 / r0[0];
  for (auto& c : s0) c *= k;
  return from_poly(std::move(s0), mod_);
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField ScalarField::generic(const Rational& q0) {
  Rational q = q0;
  q.canonicalize();
  if (sgn(q) == 0 || q == 1 || q == -1)
    throw ConfigError("generic q must not be 0, 1 or -1 (got " + format_rational(q) + ")");
  ScalarField f;
  f.mode_ = Mode::GenericQ;
  f.q0_ = q;
  auto cache = std::make_shared<std::vector<Scalar>>();
  cache->reserve(2 * kCache + 1);
  Rational inv = 1 / q;
  Rational p = 1;
  std::vector<Rational> neg;
  for (long long k = 0; k < kCache; ++k) {
    p *= inv;
    neg.push_back(p);
  }
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) cache->emplace_back(*it);
  p = 1;
  for (long long k = 0; k <= kCache; ++k) {
    cache->emplace_back(p);
    p *= q;
  }
  f.pow_cache_ = std::move(cache);
  return f;
}

ScalarField ScalarField::cyclotomic(int t) {
  if (t < 3) throw ConfigError("root-of-unity order t must be at least 3 (got " + std::to_string(t) + ")");
  ScalarField f;
  f.mode_ = Mode::Cyclotomic;
  f.mod_ = &cyclo_modulus(t);
  return f;
}

const Rational& ScalarField::q0() const {
  if (mode_ != Mode::GenericQ) throw std::logic_error("q0() on a cyclotomic field");
  return q0_;
}

int ScalarField::t() const {
  if (mode_ != Mode::Cyclotomic) throw std::logic_error("t() on a generic field");
  return mod_->t;
}

Scalar ScalarField::qpow(long long k) const {
  if (mod_) {
    long long r = k % mod_->t;
    if (r < 0) r += mod_->t;
    return Scalar::from_poly(mod_->zeta_powers[static_cast<size_t>(r)], mod_);
  }
  if (k >= -kCache && k <= kCache) return (*pow_cache_)[static_cast<size_t>(k + kCache)];
  const unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q0_.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), q0_.get_den_mpz_t(), e);
  Rational r = k < 0 ? Rational(den, num) : Rational(num, den);
  r.canonicalize();
  return Scalar(r);
}

std::string ScalarField::format(const Scalar& s) const {
  if (!mod_) return format_rational(s.rational());
  std::string out = "[";
  for (int i = 0; i < mod_->degree; ++i) {
    if (i) out += ", ";
    out += static_cast<size_t>(i) < s.coeffs().size() ? format_rational(s.coeffs()[i]) : "0";
  }
  return out + "]";
}

Scalar ScalarField::parse(std::string_view text) const {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw ConfigError("empty scalar literal");
  if (s.front() != '[') return Scalar(parse_rational(s));
  if (s.back() != ']') throw ConfigError("unterminated coefficient list: " + s);
  if (!mod_) throw ConfigError("coefficient lists need a cyclotomic field: " + s);
  Poly coeffs;
  std::string body = s.substr(1, s.size() - 2);
  size_t pos = 0;
  while (pos <= body.size() && !body.empty()) {
    size_t comma = body.find(',', pos);
    coeffs.push_back(parse_rational(body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return Scalar::from_poly(std::move(coeffs), mod_);
}

std::string ScalarField::describe() const {
  if (mod_) return "Q(zeta_" + std::to_string(mod_->t) + ")";
  return "Q[q=" + format_rational(q0_) + "]";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ConfigError("empty rational literal");
  size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  size_t slash = s.find('/');
  auto digits = [&](size_t a, size_t b) {
    if (a >= b) return false;
    for (size_t i = a; i < b; ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  bool ok = slash == std::string::npos ? digits(start, s.size())
                                       : digits(start, slash) && digits(slash + 1, s.size());
  if (!ok) throw ConfigError("malformed rational literal: " + s);
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  r.set_str(s, 10);
  if (sgn(r.get_den()) == 0) throw ConfigError("zero denominator in rational literal: " + s);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& r) { return r.get_str(10); }

}  // namespace halfder
