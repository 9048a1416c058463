#pragma once

// Transposed Poisson structures: commutative associative products "." on the Lie
// algebra satisfying 2 z.[x,y] = [z.x, y] + [x, z.y].

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "halfder/algebra.hpp"

namespace halfder {

/// Symmetric bilinear product on basis elements, stored on unordered keys.
class ProductTable {
 public:
  using Key = std::pair<BasisElem, BasisElem>;

  /// Sets a.b = b.a = value (a zero value erases the entry).
  void set(const BasisElem& a, const BasisElem& b, Element value);
  /// Records a.b as given in ordered form; a later conflicting b.a marks the table non-commutative.
  void set_ordered(const BasisElem& a, const BasisElem& b, Element value);

  /// nullptr when a.b = 0.
  const Element* find(const BasisElem& a, const BasisElem& b) const;
  Element get(const BasisElem& a, const BasisElem& b) const;

  const std::map<Key, Element>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  bool commutative() const { return conflicts_.empty(); }
  const std::vector<Key>& conflicts() const { return conflicts_; }
  /// Degree shifts (target - a - b) occurring in the table.
  std::set<Degree> shifts() const;
  /// Factors that have at least one nonzero product.
  std::set<BasisElem> support() const;

  nlohmann::json to_json(const ScalarField& f) const;
  static ProductTable from_json(const AlgebraSpec& spec, const nlohmann::json& j);

 private:
  static Key key(const BasisElem& a, const BasisElem& b) { return a < b ? Key{a, b} : Key{b, a}; }
  std::map<Key, Element> entries_;
  std::map<std::pair<BasisElem, BasisElem>, Element> ordered_;
  std::vector<Key> conflicts_;
};

struct TripleViolation {
  BasisElem x, y, z;
  Element residual;
};

struct AxiomReport {
  bool commutativity_ok = true;
  std::size_t associativity_checked = 0;
  std::size_t compatibility_checked = 0;
  std::vector<TripleViolation> associativity_violations;  // (x.y).z - x.(y.z)
  std::vector<TripleViolation> compatibility_violations;  // z=z: 2z.[x,y] - [z.x,y] - [x,z.y]
  bool ok() const { return commutativity_ok && associativity_violations.empty() && compatibility_violations.empty(); }
};

/// Checks commutativity, associativity and the compatibility identity on every basis
/// triple whose intermediate degrees (for every shift occurring in P) stay in W u {0}.
AxiomReport verify_axioms(const AlgebraSpec& spec, const Window& w, const ProductTable& p);
/// Associativity part only.
AxiomReport verify_associativity(const AlgebraSpec& spec, const Window& w, const ProductTable& p);

/// Linear functional on the center, supported on Gamma1.
struct CenterFunctional {
  std::map<Degree, Scalar> coeffs;
  Scalar operator()(Degree d) const;
};

/// L_a . L_b = tau(a) tau(b) L_v on virasoro-root; v must be in Gamma1.
ProductTable rank_one_center_product(const AlgebraSpec& spec, const CenterFunctional& tau, Degree v);

struct ConditionResult {
  std::string name;
  std::size_t checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct ThmGReport {
  std::vector<ConditionResult> conditions;  // (a), (b), (c)
  bool ok() const;
};

/// The necessary conditions on products of the virasoro-root algebra: vanishing on
/// pairs with m - n in Gamma2, shift-equivariance on Gamma2 x Gamma2, and symmetry plus
/// the quadratic sum conditions on Gamma1 x Gamma1.
ThmGReport thmG_check(const AlgebraSpec& spec, const Window& w, const ProductTable& p);

struct ProbeOptions {
  /// Product shifts s with |s1|, |s2| <= bound; negative selects t (root) or 2 (generic).
  int shift_bound = -1;
  bool check_associativity = true;
};

struct ProbeShift {
  std::size_t full_dim = 0;
  std::size_t interior_dim = 0;
};

struct ProbeResult {
  int shift_bound = 0;
  std::size_t full_dim = 0;
  std::size_t interior_dim = 0;
  std::map<Degree, ProbeShift> per_shift;  // only shifts with a nonzero solution space
  std::vector<Degree> basis_shift;         // shift of each basis table
  std::vector<ProductTable> basis;
  std::vector<std::size_t> associativity_failures;  // indices into basis
  std::vector<std::size_t> gamma2_nonzero;          // indices with a nonzero Gamma2 x Gamma2 entry (root variants)
};

/// All symmetric products with target degree in m + n + S that satisfy the compatibility
/// identity on the window (a linear system), followed by an associativity filter.
ProbeResult triviality_probe(const AlgebraSpec& spec, const Window& w, int interior, ProbeOptions opts = {});

}  // namespace halfder
