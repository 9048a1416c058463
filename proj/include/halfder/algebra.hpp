#pragma once

// The four Z^2-graded Lie algebras:
//   virasoro-generic  q-analog Virasoro-like algebra, q not a root of unity   basis L_m
//   virasoro-root     same bracket, q a primitive t-th root of unity           basis L_m
//   torus-generic     derived quantum-torus Lie algebra, generic q             basis x^m, D(m)
//   torus-root        quantum-torus Lie algebra at a primitive t-th root       basis x^m, D(m)
// Degree (0,0) is never a basis degree; brackets landing there are zero.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "halfder/scalars.hpp"

namespace halfder {

struct Degree {
  int m1 = 0;
  int m2 = 0;

  bool is_zero() const { return m1 == 0 && m2 == 0; }
  friend Degree operator+(Degree a, Degree b) { return {a.m1 + b.m1, a.m2 + b.m2}; }
  friend Degree operator-(Degree a, Degree b) { return {a.m1 - b.m1, a.m2 - b.m2}; }
  friend Degree operator-(Degree a) { return {-a.m1, -a.m2}; }
  friend auto operator<=>(const Degree&, const Degree&) = default;
};

std::string to_string(Degree d);
std::ostream& operator<<(std::ostream& os, Degree d);

enum class Tag : std::uint8_t { L, X, D };

char tag_char(Tag t);

struct BasisElem {
  Degree degree;
  Tag tag = Tag::L;
  friend auto operator<=>(const BasisElem&, const BasisElem&) = default;
};

std::string to_string(const BasisElem& b);
std::ostream& operator<<(std::ostream& os, const BasisElem& b);

/// Finite linear combination of basis elements; terms sorted, no zero coefficients.
class Element {
 public:
  using Term = std::pair<BasisElem, Scalar>;

  Element() = default;
  Element(const BasisElem& b, Scalar coeff);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  Scalar coeff(const BasisElem& b) const;

  /// Adds coeff * b, merging with an existing term.
  void add_term(const BasisElem& b, const Scalar& coeff);

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(const Scalar& k);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Scalar& k, Element a) { return a *= k; }
  friend bool operator==(const Element& a, const Element& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<Term> terms_;
};

enum class Variant { VirasoroGeneric, VirasoroRoot, TorusGeneric, TorusRoot };
enum class GammaClass { Gamma1, Gamma2 };

std::string variant_name(Variant v);
Variant parse_variant(std::string_view name);

class AlgebraSpec {
 public:
  AlgebraSpec(Variant variant, ScalarField field);

  static AlgebraSpec virasoro_generic(const Rational& q0) { return {Variant::VirasoroGeneric, ScalarField::generic(q0)}; }
  static AlgebraSpec virasoro_root(int t) { return {Variant::VirasoroRoot, ScalarField::cyclotomic(t)}; }
  static AlgebraSpec torus_generic(const Rational& q0) { return {Variant::TorusGeneric, ScalarField::generic(q0)}; }
  static AlgebraSpec torus_root(int t) { return {Variant::TorusRoot, ScalarField::cyclotomic(t)}; }

  Variant variant() const { return variant_; }
  const ScalarField& field() const { return field_; }
  bool is_root() const { return variant_ == Variant::VirasoroRoot || variant_ == Variant::TorusRoot; }
  bool is_torus() const { return variant_ == Variant::TorusGeneric || variant_ == Variant::TorusRoot; }
  int t() const { return field_.t(); }

  /// Basis tags present at every nonzero degree: {L} or {X, D}.
  const std::vector<Tag>& tags() const;
  bool accepts(Tag tag) const;

  nlohmann::json to_json() const;
  static AlgebraSpec from_json(const nlohmann::json& j);

 private:
  Variant variant_;
  ScalarField field_;
};

/// Square degree window |m1|, |m2| <= N without the origin.
class Window {
 public:
  explicit Window(int n);

  int n() const { return n_; }
  bool contains(Degree d) const { return !d.is_zero() && within(d); }
  bool contains_or_zero(Degree d) const { return within(d); }
  /// Points in lexicographic (m1, m2) order; (2N+1)^2 - 1 of them.
  const std::vector<Degree>& points() const { return points_; }
  /// All basis elements over the window, sorted.
  std::vector<BasisElem> basis(const AlgebraSpec& spec) const;

 private:
  bool within(Degree d) const { return d.m1 >= -n_ && d.m1 <= n_ && d.m2 >= -n_ && d.m2 <= n_; }
  int n_;
  std::vector<Degree> points_;
};

/// q^{m2 n1} - q^{m1 n2}.
Scalar lambda_coeff(const AlgebraSpec& spec, Degree m, Degree n);
/// m2 n1 - m1 n2; the first argument supplies m.
long long det2(Degree m, Degree n);
GammaClass gamma_class(const AlgebraSpec& spec, Degree m);
/// True when t divides both coordinates of m (m may be zero).
bool in_t_lattice(Degree m, int t);
/// torus-root: det2 when m is in Gamma1, lambda when m is in Gamma2.
Scalar h_coeff(const AlgebraSpec& spec, Degree m, Degree n);
/// torus-root: lambda when both m, n are in Gamma2, det2 otherwise.
Scalar g_coeff(const AlgebraSpec& spec, Degree m, Degree n);

/// Bracket of two basis elements as a single scaled basis element, or nothing when zero.
std::optional<Element::Term> bracket_term(const AlgebraSpec& spec, const BasisElem& a, const BasisElem& b);
Element bracket(const AlgebraSpec& spec, const BasisElem& a, const BasisElem& b);
/// Bilinear extension to arbitrary elements.
Element bracket(const AlgebraSpec& spec, const Element& a, const Element& b);

BasisElem make_basis(const AlgebraSpec& spec, Degree d, Tag tag);

using BracketFn = std::function<Element(const BasisElem&, const BasisElem&)>;

struct JacobiViolation {
  BasisElem a, b, c;  // c unused for antisymmetry witnesses
  Element residual;
};

struct JacobiReport {
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;
  std::vector<JacobiViolation> antisymmetry_violations;
  std::vector<JacobiViolation> jacobi_violations;
  bool ok() const { return antisymmetry_violations.empty() && jacobi_violations.empty(); }
};

JacobiReport jacobi_check(const AlgebraSpec& spec, const Window& w);
/// Same check for an arbitrary bracket on the given basis.
JacobiReport jacobi_check(const std::vector<BasisElem>& basis, const BracketFn& br, const Window& w);

struct RelationCheck {
  std::string name;
  Element lhs;
  Element rhs;
  bool holds = false;
};

/// The ten defining relations of the generic quantum-torus Lie algebra on its generators.
std::vector<RelationCheck> lemma41_relations(const AlgebraSpec& spec);

nlohmann::json degree_to_json(Degree d);
Degree degree_from_json(const nlohmann::json& j);
nlohmann::json element_to_json(const ScalarField& f, const Element& e);

}  // namespace halfder
