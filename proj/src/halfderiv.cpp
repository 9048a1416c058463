#include "halfder/halfderiv.hpp"

#include <algorithm>
#include <cstdlib>

#include "halfder/errors.hpp"
#include "halfder/parallel.hpp"

namespace halfder {

namespace {

int tag_index(Tag t) { return t == Tag::D ? 1 : 0; }

}  // namespace

UnknownLayout::UnknownLayout(const AlgebraSpec& spec, const Window& w, Degree shift, bool restrict_targets)
    : shift_(shift), n_(w.n()), ntags_(static_cast<int>(spec.tags().size())), restrict_targets_(restrict_targets) {
  const int side = 2 * n_ + 1;
  index_.assign(static_cast<size_t>(side * side * ntags_ * ntags_), -1);
  for (Degree m : w.points()) {
    const Degree target = m + shift;
    if (target.is_zero()) continue;
    if (restrict_targets && !w.contains(target)) continue;
    for (Tag src : spec.tags()) {
      for (Tag tgt : spec.tags()) {
        const BasisElem source{m, src};
        index_[static_cast<size_t>(slot(source, tgt))] = static_cast<int>(entries_.size());
        entries_.push_back({source, tgt});
      }
    }
  }
}

int UnknownLayout::slot(const BasisElem& source, Tag target) const {
  const int side = 2 * n_ + 1;
  const int cell = (source.degree.m1 + n_) * side + (source.degree.m2 + n_);
  return (cell * ntags_ + tag_index(source.tag)) * ntags_ + tag_index(target);
}

int UnknownLayout::column(const BasisElem& source, Tag target) const {
  const Degree d = source.degree;
  if (d.m1 < -n_ || d.m1 > n_ || d.m2 < -n_ || d.m2 > n_ || d.is_zero()) return -1;
  return index_[static_cast<size_t>(slot(source, target))];
}

BasisElem UnknownLayout::target_of(int col) const {
  const Unknown& u = entry(col);
  return {u.source.degree + shift_, u.target};
}

// ---------------------------------------------------------------------------
// Constraint generation

void for_each_constraint(const AlgebraSpec& spec, const Window& w, const UnknownLayout& layout,
                         const std::function<bool(SparseVec&&)>& emit) {
  const std::vector<BasisElem> basis = w.basis(spec);
  const Degree shift = layout.shift();
  const std::vector<Tag>& tags = spec.tags();

  // Unknown columns of phi(e) for every basis element (index aligned with `basis`).
  std::vector<std::vector<int>> image_cols(basis.size());
  for (size_t k = 0; k < basis.size(); ++k)
    for (Tag t : tags)
      if (int c = layout.column(basis[k], t); c >= 0) image_cols[k].push_back(c);

  auto basis_index = [&](const BasisElem& e) {
    auto it = std::lower_bound(basis.begin(), basis.end(), e);
    return static_cast<size_t>(it - basis.begin());
  };
  auto target_ok = [&](Degree d) { return !layout.restrict_targets() || w.contains_or_zero(d + shift); };

  struct PendingRow {
    BasisElem target;
    SparseVec row;
  };
  std::vector<PendingRow> pending;
  auto add = [&](const BasisElem& target, int col, Scalar value) {
    for (auto& p : pending)
      if (p.target == target) {
        p.row.emplace_back(col, std::move(value));
        return;
      }
    pending.push_back({target, SparseVec{{col, std::move(value)}}});
  };

  for (size_t i = 0; i < basis.size(); ++i) {
    const BasisElem& a = basis[i];
    if (!target_ok(a.degree)) continue;
    for (size_t j = i + 1; j < basis.size(); ++j) {
      const BasisElem& b = basis[j];
      const Degree s = a.degree + b.degree;
      if (!w.contains_or_zero(s) || !target_ok(b.degree) || !target_ok(s)) continue;
      pending.clear();

      // 2 phi([a, b])
      if (auto ab = bracket_term(spec, a, b)) {
        const Scalar two_k = Scalar(2) * ab->second;
        for (int c : image_cols[basis_index(ab->first)]) add(layout.target_of(c), c, two_k);
      }
      // - [phi(a), b]
      for (int c : image_cols[i])
        if (auto t = bracket_term(spec, layout.target_of(c), b)) add(t->first, c, -t->second);
      // - [a, phi(b)]
      for (int c : image_cols[j])
        if (auto t = bracket_term(spec, a, layout.target_of(c))) add(t->first, c, -t->second);

      for (auto& p : pending) {
        normalize(p.row);
        if (p.row.empty()) continue;
        if (!emit(std::move(p.row))) return;
      }
    }
  }
}

ConstraintSystem build_constraints(const AlgebraSpec& spec, const Window& w, Degree shift, ConstraintOptions opts) {
  ConstraintSystem sys{spec, w, shift, UnknownLayout(spec, w, shift, opts.restrict_targets), {}};
  for_each_constraint(spec, w, sys.layout, [&](SparseVec&& row) {
    sys.rows.push_back(std::move(row));
    return true;
  });
  return sys;
}

NullspaceBasis nullspace(const ConstraintSystem& sys) {
  Eliminator e(sys.layout.size());
  for (const auto& row : sys.rows) {
    e.add_row(row);
    if (e.full_rank()) break;
  }
  return {e.kernel()};
}

NullspaceBasis solve_kernel(const AlgebraSpec& spec, const Window& w, const UnknownLayout& layout) {
  Eliminator e(layout.size());
  if (layout.size() > 0) {
    for_each_constraint(spec, w, layout, [&](SparseVec&& row) {
      e.add_row(row);
      return !e.full_rank();
    });
  }
  return {e.kernel()};
}

std::size_t interior_dimension(const NullspaceBasis& basis, const UnknownLayout& layout, int m) {
  if (m < 1 || m >= layout.window())
    throw InvalidInterior("interior size " + std::to_string(m) + " must satisfy 1 <= M < N = " +
                          std::to_string(layout.window()));
  std::vector<SparseVec> restricted;
  restricted.reserve(basis.vectors.size());
  for (const auto& v : basis.vectors) {
    SparseVec r;
    for (const auto& [c, s] : v) {
      const Degree d = layout.entry(c).source.degree;
      if (std::abs(d.m1) <= m && std::abs(d.m2) <= m) r.emplace_back(c, s);
    }
    restricted.push_back(std::move(r));
  }
  return static_cast<std::size_t>(rank_of(restricted, layout.size()));
}

std::map<Degree, ShiftDims> shift_sweep(const AlgebraSpec& spec, const Window& w, int shift_bound, int interior) {
  if (interior < 1 || interior >= w.n())
    throw InvalidInterior("interior size " + std::to_string(interior) + " must satisfy 1 <= M < N = " +
                          std::to_string(w.n()));
  std::vector<Degree> shifts;
  for (int a = -shift_bound; a <= shift_bound; ++a)
    for (int b = -shift_bound; b <= shift_bound; ++b) shifts.push_back({a, b});
  std::vector<ShiftDims> dims(shifts.size());
  parallel_for(shifts.size(), [&](std::size_t k) {
    UnknownLayout layout(spec, w, shifts[k]);
    NullspaceBasis basis = solve_kernel(spec, w, layout);
    dims[k] = {basis.dim(), basis.dim() ? interior_dimension(basis, layout, interior) : 0};
  });
  std::map<Degree, ShiftDims> out;
  for (size_t k = 0; k < shifts.size(); ++k) out.emplace(shifts[k], dims[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Candidates

CandidateReport verify_candidate(const AlgebraSpec& spec, const Window& w, const LinearMap& phi) {
  CandidateReport rep;
  const std::vector<BasisElem> basis = w.basis(spec);
  std::map<BasisElem, Element> images;
  for (const auto& e : basis) images.emplace(e, phi(e));

  for (size_t i = 0; i < basis.size(); ++i) {
    for (size_t j = i + 1; j < basis.size(); ++j) {
      const BasisElem& a = basis[i];
      const BasisElem& b = basis[j];
      if (!w.contains_or_zero(a.degree + b.degree)) continue;
      ++rep.constraints_checked;
      Element r;
      if (auto ab = bracket_term(spec, a, b)) r += (Scalar(2) * ab->second) * images.at(ab->first);
      r -= bracket(spec, images.at(a), Element(b, Scalar(1)));
      r -= bracket(spec, Element(a, Scalar(1)), images.at(b));
      if (!r.is_zero()) rep.violations.push_back({a, b, std::move(r)});
    }
  }
  return rep;
}

LinearMap identity_map() {
  return [](const BasisElem& e) { return Element(e, Scalar(1)); };
}

LinearMap thmF_family(int t, Degree shift, Scalar kappa, std::function<Scalar(Degree)> center) {
  if (t < 3) throw ConfigError("root-of-unity order t must be at least 3");
  if (!in_t_lattice(shift, t))
    throw InvalidShift("shift " + to_string(shift) + " is not in (tZ)^2 for t = " + std::to_string(t));
  return [t, shift, kappa = std::move(kappa), center = std::move(center)](const BasisElem& e) {
    const Degree target = e.degree + shift;
    if (e.tag != Tag::L || target.is_zero()) return Element();
    return Element({target, Tag::L}, in_t_lattice(e.degree, t) ? center(e.degree) : kappa);
  };
}

LinearMap thmH_family(int t, Scalar a, Scalar c) {
  if (t < 3) throw ConfigError("root-of-unity order t must be at least 3");
  return [t, a = std::move(a), c = std::move(c)](const BasisElem& e) {
    Element out(e, a);
    if (e.tag == Tag::D && in_t_lattice(e.degree, t)) out.add_term({e.degree, Tag::X}, c);
    return out;
  };
}

LinearMap torus_generic_family(Scalar c, Scalar d) {
  return [c = std::move(c), d = std::move(d)](const BasisElem& e) {
    if (e.tag == Tag::X) return Element(e, c + d);
    Element out(e, d);
    out.add_term({e.degree, Tag::X}, c);
    return out;
  };
}

SparseVec to_coefficients(const UnknownLayout& layout, const LinearMap& phi) {
  SparseVec v;
  std::map<BasisElem, Element> cache;
  for (int col = 0; col < layout.size(); ++col) {
    const Unknown& u = layout.entry(col);
    auto it = cache.find(u.source);
    if (it == cache.end()) it = cache.emplace(u.source, phi(u.source)).first;
    Scalar s = it->second.coeff(layout.target_of(col));
    if (!s.is_zero()) v.emplace_back(col, std::move(s));
  }
  return v;
}

}  // namespace halfder
