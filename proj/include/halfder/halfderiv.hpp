#pragma once

// Degree-i 1/2-derivations on a finite window.
//
// A homogeneous map of shift i sends each basis element e_m to a combination of the
// basis elements at degree m + i. Its coefficients are the unknowns; the condition
//     2 phi([a, b]) = [phi(a), b] + [a, phi(b)]
// expanded over the bracket gives one sparse linear row per (basis pair, target basis
// element). The kernel of that system is the space of windowed 1/2-derivations.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "halfder/algebra.hpp"
#include "halfder/linalg.hpp"

namespace halfder {

struct Unknown {
  BasisElem source;
  Tag target = Tag::L;
};

/// Column layout for the coefficients of a shift-i map on a window.
class UnknownLayout {
 public:
  /// restrict_targets: keep only unknowns whose target degree lies in the window
  /// (used for products, whose values must stay inside the window).
  UnknownLayout(const AlgebraSpec& spec, const Window& w, Degree shift, bool restrict_targets = false);

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<Unknown>& entries() const { return entries_; }
  const Unknown& entry(int col) const { return entries_[static_cast<size_t>(col)]; }
  /// Column of (source, target tag), or -1 when the unknown is absent.
  int column(const BasisElem& source, Tag target) const;
  Degree shift() const { return shift_; }
  int window() const { return n_; }
  bool restrict_targets() const { return restrict_targets_; }
  /// Target basis element of a column.
  BasisElem target_of(int col) const;

 private:
  int slot(const BasisElem& source, Tag target) const;
  std::vector<Unknown> entries_;
  std::vector<int> index_;
  Degree shift_;
  int n_;
  int ntags_;
  bool restrict_targets_;
};

struct ConstraintSystem {
  AlgebraSpec spec;
  Window window;
  Degree shift;
  UnknownLayout layout;
  std::vector<SparseVec> rows;
};

struct NullspaceBasis {
  std::vector<SparseVec> vectors;
  std::size_t dim() const { return vectors.size(); }
};

struct ConstraintOptions {
  bool restrict_targets = false;
};

/// Calls `emit` with every nonzero constraint row in deterministic order.
/// Returning false from `emit` stops generation early.
void for_each_constraint(const AlgebraSpec& spec, const Window& w, const UnknownLayout& layout,
                         const std::function<bool(SparseVec&&)>& emit);

ConstraintSystem build_constraints(const AlgebraSpec& spec, const Window& w, Degree shift, ConstraintOptions opts = {});
NullspaceBasis nullspace(const ConstraintSystem& sys);
/// Kernel without materializing the rows; stops as soon as the system reaches full rank.
NullspaceBasis solve_kernel(const AlgebraSpec& spec, const Window& w, const UnknownLayout& layout);

/// Rank of the kernel restricted to unknowns with source degree in |m1|,|m2| <= m.
std::size_t interior_dimension(const NullspaceBasis& basis, const UnknownLayout& layout, int m);

struct ShiftDims {
  std::size_t full_dim = 0;
  std::size_t interior_dim = 0;
};

/// Per-shift kernel dimensions for all shifts |i1|, |i2| <= shift_bound.
std::map<Degree, ShiftDims> shift_sweep(const AlgebraSpec& spec, const Window& w, int shift_bound, int interior);

// ---------------------------------------------------------------------------
// Closed-form candidates

using LinearMap = std::function<Element(const BasisElem&)>;

struct CandidateViolation {
  BasisElem a, b;
  Element residual;  // 2 phi([a,b]) - [phi a, b] - [a, phi b]
};

struct CandidateReport {
  std::size_t constraints_checked = 0;
  std::vector<CandidateViolation> violations;
  bool ok() const { return violations.empty(); }
};

CandidateReport verify_candidate(const AlgebraSpec& spec, const Window& w, const LinearMap& phi);

LinearMap identity_map();

/// phi(L_m) = kappa L_{m+i} on Gamma2 and center(m) L_{m+i} on Gamma1; i must lie in (tZ)^2.
LinearMap thmF_family(int t, Degree shift, Scalar kappa, std::function<Scalar(Degree)> center);
/// phi(x^m) = a x^m; phi(D(m)) = c x^m + a D(m) on Gamma1 and a D(m) on Gamma2.
LinearMap thmH_family(int t, Scalar a, Scalar c);
/// phi(x^m) = (c + d) x^m; phi(D(m)) = c x^m + d D(m).
LinearMap torus_generic_family(Scalar c, Scalar d);

/// Coefficient vector of a homogeneous map in the given layout. Components of phi(e)
/// outside the layout's shift are ignored, so check homogeneity separately if needed.
SparseVec to_coefficients(const UnknownLayout& layout, const LinearMap& phi);

}  // namespace halfder
