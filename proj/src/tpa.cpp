#include "halfder/tpa.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <tuple>

#include "halfder/errors.hpp"
#include "halfder/halfderiv.hpp"
#include "halfder/linalg.hpp"
#include "halfder/parallel.hpp"

namespace halfder {

// ---------------------------------------------------------------------------
// ProductTable

void ProductTable::set(const BasisElem& a, const BasisElem& b, Element value) {
  const Key k = key(a, b);
  if (value.is_zero())
    entries_.erase(k);
  else
    entries_[k] = std::move(value);
}

void ProductTable::set_ordered(const BasisElem& a, const BasisElem& b, Element value) {
  if (auto it = ordered_.find({b, a}); it != ordered_.end() && !(a == b) && !(it->second == value))
    conflicts_.push_back(key(a, b));
  ordered_[{a, b}] = value;
  set(a, b, std::move(value));
}

const Element* ProductTable::find(const BasisElem& a, const BasisElem& b) const {
  auto it = entries_.find(key(a, b));
  return it == entries_.end() ? nullptr : &it->second;
}

Element ProductTable::get(const BasisElem& a, const BasisElem& b) const {
  const Element* e = find(a, b);
  return e ? *e : Element();
}

std::set<Degree> ProductTable::shifts() const {
  std::set<Degree> out;
  for (const auto& [k, e] : entries_)
    for (const auto& [b, c] : e.terms()) out.insert(b.degree - k.first.degree - k.second.degree);
  return out;
}

std::set<BasisElem> ProductTable::support() const {
  std::set<BasisElem> out;
  for (const auto& [k, e] : entries_) {
    out.insert(k.first);
    out.insert(k.second);
  }
  return out;
}

nlohmann::json ProductTable::to_json(const ScalarField& f) const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [k, e] : entries_) {
    nlohmann::json row{{"a", degree_to_json(k.first.degree)},
                       {"b", degree_to_json(k.second.degree)},
                       {"terms", element_to_json(f, e)}};
    if (k.first.tag != Tag::L) {
      row["aTag"] = std::string(1, tag_char(k.first.tag));
      row["bTag"] = std::string(1, tag_char(k.second.tag));
    }
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

Tag parse_tag(const AlgebraSpec& spec, const nlohmann::json& j, const char* field) {
  if (!j.contains(field)) {
    if (spec.is_torus()) throw ConfigError(std::string("torus product entries need \"") + field + "\"");
    return Tag::L;
  }
  const std::string s = j.at(field).get<std::string>();
  Tag t = s == "L" ? Tag::L : s == "X" ? Tag::X : s == "D" ? Tag::D : throw ConfigError("unknown tag " + s);
  if (!spec.accepts(t)) throw ConfigError("tag " + s + " is not valid for " + variant_name(spec.variant()));
  return t;
}

}  // namespace

ProductTable ProductTable::from_json(const AlgebraSpec& spec, const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("product table JSON must be an array");
  ProductTable p;
  for (const auto& row : j) {
    if (!row.is_object() || !row.contains("a") || !row.contains("b") || !row.contains("terms"))
      throw ConfigError("product entries need \"a\", \"b\" and \"terms\"");
    const BasisElem a = make_basis(spec, degree_from_json(row["a"]), parse_tag(spec, row, "aTag"));
    const BasisElem b = make_basis(spec, degree_from_json(row["b"]), parse_tag(spec, row, "bTag"));
    Element value;
    for (const auto& t : row["terms"]) {
      const Tag tag = parse_tag(spec, t, "tag");
      const Degree d = degree_from_json(t.at("degree"));
      const std::string c = t.at("coeff").is_string() ? t["coeff"].get<std::string>() : t["coeff"].dump();
      if (d.is_zero()) continue;
      value.add_term({d, tag}, spec.field().parse(c));
    }
    p.set_ordered(a, b, std::move(value));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Axiom verification

namespace {

Element times(const ProductTable& p, const Element& e, const BasisElem& b) {
  Element out;
  for (const auto& [x, c] : e.terms())
    if (const Element* v = p.find(x, b)) out += c * *v;
  return out;
}

struct Admissibility {
  const Window& w;
  std::vector<Degree> shifts;
  std::vector<Degree> double_shifts;

  Admissibility(const Window& win, const std::set<Degree>& s) : w(win), shifts(s.begin(), s.end()) {
    std::set<Degree> dd;
    for (Degree a : s)
      for (Degree b : s) dd.insert(a + b);
    double_shifts.assign(dd.begin(), dd.end());
  }
  bool once(Degree d) const {
    return std::all_of(shifts.begin(), shifts.end(), [&](Degree s) { return w.contains_or_zero(d + s); });
  }
  bool twice(Degree d) const {
    return std::all_of(double_shifts.begin(), double_shifts.end(), [&](Degree s) { return w.contains_or_zero(d + s); });
  }
};

void check_associativity(const AlgebraSpec& spec, const Window& w, const ProductTable& p, AxiomReport& rep) {
  const auto basis = w.basis(spec);
  const Admissibility adm(w, p.shifts());
  const auto support = p.support();
  for (const auto& a : basis) {
    for (const auto& b : basis) {
      if (!adm.once(a.degree + b.degree)) continue;
      const bool active_b = support.count(b) > 0;
      const Element* ab = active_b ? p.find(a, b) : nullptr;
      for (const auto& c : basis) {
        if (!adm.once(b.degree + c.degree) || !adm.twice(a.degree + b.degree + c.degree)) continue;
        ++rep.associativity_checked;
        if (!active_b) continue;
        const Element* bc = p.find(b, c);
        if (!ab && !bc) continue;
        Element r;
        if (ab) r += times(p, *ab, c);
        if (bc) {
          for (const auto& [e, k] : bc->terms())
            if (const Element* v = p.find(a, e)) r -= k * *v;
        }
        if (!r.is_zero()) rep.associativity_violations.push_back({a, b, c, std::move(r)});
      }
    }
  }
}

void check_compatibility(const AlgebraSpec& spec, const Window& w, const ProductTable& p, AxiomReport& rep) {
  const auto basis = w.basis(spec);
  const Admissibility adm(w, p.shifts());
  const auto support = p.support();
  for (const auto& z : basis) {
    const bool active = support.count(z) > 0;
    for (size_t i = 0; i < basis.size(); ++i) {
      const BasisElem& x = basis[i];
      if (!adm.once(z.degree + x.degree)) continue;
      for (size_t j = i + 1; j < basis.size(); ++j) {
        const BasisElem& y = basis[j];
        const Degree xy = x.degree + y.degree;
        if (!w.contains_or_zero(xy) || !adm.once(z.degree + y.degree) || !adm.once(z.degree + xy)) continue;
        ++rep.compatibility_checked;
        if (!active) continue;
        Element r;
        if (auto t = bracket_term(spec, x, y))
          if (const Element* zv = p.find(z, t->first)) r += (Scalar(2) * t->second) * *zv;
        if (const Element* zx = p.find(z, x)) r -= bracket(spec, *zx, Element(y, Scalar(1)));
        if (const Element* zy = p.find(z, y)) r -= bracket(spec, Element(x, Scalar(1)), *zy);
        if (!r.is_zero()) rep.compatibility_violations.push_back({x, y, z, std::move(r)});
      }
    }
  }
}

}  // namespace

AxiomReport verify_associativity(const AlgebraSpec& spec, const Window& w, const ProductTable& p) {
  AxiomReport rep;
  rep.commutativity_ok = p.commutative();
  check_associativity(spec, w, p, rep);
  return rep;
}

AxiomReport verify_axioms(const AlgebraSpec& spec, const Window& w, const ProductTable& p) {
  AxiomReport rep = verify_associativity(spec, w, p);
  check_compatibility(spec, w, p, rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Root-of-unity structures

Scalar CenterFunctional::operator()(Degree d) const {
  auto it = coeffs.find(d);
  return it == coeffs.end() ? Scalar() : it->second;
}

ProductTable rank_one_center_product(const AlgebraSpec& spec, const CenterFunctional& tau, Degree v) {
  if (spec.variant() != Variant::VirasoroRoot)
    throw UnsupportedVariant("rank-one center products are defined on virasoro-root only");
  const int t = spec.t();
  if (v.is_zero() || !in_t_lattice(v, t)) throw InvalidCenterVector("center vector " + to_string(v) + " is not in Gamma1");
  std::vector<std::pair<Degree, Scalar>> supp;
  for (const auto& [d, c] : tau.coeffs) {
    if (c.is_zero()) continue;
    if (d.is_zero() || !in_t_lattice(d, t))
      throw InvalidCenterVector("center functional is supported off Gamma1 at " + to_string(d));
    supp.emplace_back(d, c);
  }
  ProductTable p;
  for (size_t i = 0; i < supp.size(); ++i)
    for (size_t j = i; j < supp.size(); ++j)
      p.set({supp[i].first, Tag::L}, {supp[j].first, Tag::L}, Element({v, Tag::L}, supp[i].second * supp[j].second));
  return p;
}

bool ThmGReport::ok() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.ok(); });
}

ThmGReport thmG_check(const AlgebraSpec& spec, const Window& w, const ProductTable& p) {
  if (spec.variant() != Variant::VirasoroRoot) throw UnsupportedVariant("product conditions are stated for virasoro-root");
  const int t = spec.t();
  auto lattice = [t](Degree d) { return in_t_lattice(d, t); };
  auto gamma1 = [&](Degree d) { return !d.is_zero() && lattice(d); };
  auto L = [](Degree d) { return BasisElem{d, Tag::L}; };
  auto coef = [&](Degree m, Degree n, Degree target) {
    if (target.is_zero()) return Scalar();
    const Element* e = p.find(L(m), L(n));
    return e ? e->coeff(L(target)) : Scalar();
  };
  auto pair_str = [](Degree m, Degree n) { return "L" + to_string(m) + ".L" + to_string(n); };

  std::vector<Degree> g1, g2;
  for (Degree d : w.points()) (lattice(d) ? g1 : g2).push_back(d);

  ThmGReport rep;

  ConditionResult a{"vanishing on pairs with m - n in Gamma2", 0, {}};
  for (const auto& [k, e] : p.entries()) {
    ++a.checked;
    if (!lattice(k.first.degree - k.second.degree))
      a.violations.push_back(pair_str(k.first.degree, k.second.degree) + " is nonzero with difference in Gamma2");
  }

  ConditionResult b{"Gamma2 x Gamma2 shift-equivariance", 0, {}};
  for (Degree m : g2) {
    std::map<Degree, std::pair<Degree, Scalar>> reference;  // i -> (first n, alpha^i_m)
    for (Degree n : g2) {
      if (!lattice(m - n)) continue;
      if (const Element* e = p.find(L(m), L(n))) {
        for (const auto& [target, c] : e->terms()) {
          const Degree i = target.degree - n;
          if (!gamma1(i))
            b.violations.push_back(pair_str(m, n) + " has a component at L" + to_string(target.degree) +
                                   " whose offset is not in Gamma1");
          reference.emplace(i, std::make_pair(n, c));
        }
      }
    }
    for (const auto& [i, ref] : reference) {
      for (Degree n : g2) {
        if (!lattice(m - n) || !w.contains(n + i)) continue;
        ++b.checked;
        const Scalar here = coef(m, n, n + i);
        if (!(here == ref.second))
          b.violations.push_back("coefficient of L_{n+" + to_string(i) + "} in L" + to_string(m) +
                                 ".L_n differs between n=" + to_string(ref.first) + " and n=" + to_string(n));
        // alpha^i_m = alpha^{(n-m)+i}_n, read from the product in the opposite order.
        const Scalar swapped = coef(n, m, m + ((n - m) + i));
        if (!(here == swapped))
          b.violations.push_back("equivariance fails for " + pair_str(m, n) + " at offset " + to_string(i));
      }
    }
  }

  ConditionResult c{"Gamma1 x Gamma1 symmetry and quadratic sums", 0, {}};
  for (Degree m : g1) {
    for (Degree n : g1) {
      const Element* e = p.find(L(m), L(n));
      if (!e) continue;
      for (const auto& [target, val] : e->terms()) {
        const Degree i = target.degree - n;
        ++c.checked;
        if (!gamma1(i))
          c.violations.push_back(pair_str(m, n) + " has a component at L" + to_string(target.degree) +
                                 " whose offset is not in Gamma1");
        if (!(coef(n, m, m + ((n - m) + i)) == val))
          c.violations.push_back("symmetry fails for " + pair_str(m, n) + " at offset " + to_string(i));
      }
    }
  }
  // sum_i alpha^i_{m,n} alpha^j_{n+i,r} and sum_i alpha^i_{n,r} alpha^j_{r+i,m}
  auto quadratic = [&](Degree m, Degree n, Degree r) {
    std::map<Degree, Scalar> sums;
    if (const Element* e = p.find(L(m), L(n))) {
      for (const auto& [u, a1] : e->terms()) {
        if (!gamma1(u.degree - n) || !gamma1(u.degree)) continue;
        if (const Element* f = p.find(u, L(r)))
          for (const auto& [v, a2] : f->terms()) sums[v.degree - r] += a1 * a2;
      }
    }
    return sums;
  };
  for (Degree m : g1) {
    for (Degree n : g1) {
      for (Degree r : g1) {
        if (m == n && n == r) continue;
        ++c.checked;
        const auto s1 = quadratic(m, n, r);
        const auto s2 = quadratic(n, r, m);
        for (const auto* sums : {&s1, &s2}) {
          for (const auto& [j, s] : *sums) {
            if (s.is_zero() || !gamma1(j) || j == -m || j == -r) continue;
            c.violations.push_back("quadratic sum nonzero for m=" + to_string(m) + " n=" + to_string(n) +
                                   " r=" + to_string(r) + " j=" + to_string(j));
          }
        }
      }
    }
  }

  rep.conditions = {std::move(a), std::move(b), std::move(c)};
  return rep;
}

// ---------------------------------------------------------------------------
// Triviality probe

namespace {

struct KernelData {
  UnknownLayout layout;
  NullspaceBasis basis;
};

struct ProductCoord {
  BasisElem lo, hi;
  Tag target;
  friend auto operator<=>(const ProductCoord&, const ProductCoord&) = default;
};

struct CoordSides {
  SparseVec lo, hi;  // parameter combinations contributed by the lo / hi factor's multiplication map
};

Scalar dot(const SparseVec& v, const std::vector<Scalar>& dense) {
  Scalar s;
  for (const auto& [c, x] : v)
    if (!dense[static_cast<size_t>(c)].is_zero()) s += x * dense[static_cast<size_t>(c)];
  return s;
}

}  // namespace

ProbeResult triviality_probe(const AlgebraSpec& spec, const Window& w, int interior, ProbeOptions opts) {
  if (interior < 1 || interior >= w.n())
    throw InvalidInterior("interior size " + std::to_string(interior) + " must satisfy 1 <= M < N = " +
                          std::to_string(w.n()));
  ProbeResult res;
  res.shift_bound = opts.shift_bound >= 0 ? opts.shift_bound : (spec.is_root() ? spec.t() : 2);
  const int sb = res.shift_bound;

  std::vector<Degree> shifts;
  for (int a = -sb; a <= sb; ++a)
    for (int b = -sb; b <= sb; ++b) shifts.push_back({a, b});

  // Multiplication by z is a 1/2-derivation of shift deg(z) + s; its kernel depends on that shift only.
  std::set<Degree> needed;
  for (Degree s : shifts)
    for (Degree z : w.points()) needed.insert(z + s);
  const std::vector<Degree> kshifts(needed.begin(), needed.end());
  std::vector<std::unique_ptr<KernelData>> kernels(kshifts.size());
  parallel_for(kshifts.size(), [&](std::size_t k) {
    UnknownLayout layout(spec, w, kshifts[k], /*restrict_targets=*/true);
    NullspaceBasis basis = solve_kernel(spec, w, layout);
    kernels[k] = std::make_unique<KernelData>(KernelData{std::move(layout), std::move(basis)});
  });
  auto kernel_for = [&](Degree i) -> const KernelData& {
    auto it = std::lower_bound(kshifts.begin(), kshifts.end(), i);
    return *kernels[static_cast<size_t>(it - kshifts.begin())];
  };

  const auto basis = w.basis(spec);
  auto inside = [interior](Degree d) { return std::abs(d.m1) <= interior && std::abs(d.m2) <= interior; };

  for (Degree s : shifts) {
    std::map<ProductCoord, CoordSides> coords;
    int nparams = 0;
    for (const auto& z : basis) {
      const KernelData& kd = kernel_for(z.degree + s);
      for (const auto& vec : kd.basis.vectors) {
        const int param = nparams++;
        for (const auto& [col, val] : vec) {
          const Unknown& u = kd.layout.entry(col);
          if (!(u.source < z))
            coords[{z, u.source, u.target}].lo.emplace_back(param, val);
          else
            coords[{u.source, z, u.target}].hi.emplace_back(param, val);
        }
      }
    }
    if (nparams == 0) continue;

    // Commutativity: both factors' multiplication maps must give the same coefficient.
    Eliminator sym(nparams);
    for (const auto& [pc, sides] : coords) {
      if (pc.lo == pc.hi) continue;
      SparseVec row = sides.lo;
      for (const auto& [c, x] : sides.hi) row.emplace_back(c, -x);
      normalize(row);
      if (!row.empty()) sym.add_row(row);
      if (sym.full_rank()) break;
    }
    if (sym.full_rank()) continue;
    const auto param_kernel = sym.kernel();

    std::vector<ProductCoord> coord_list;
    coord_list.reserve(coords.size());
    for (const auto& [pc, sides] : coords) coord_list.push_back(pc);
    std::vector<SparseVec> products;
    for (const auto& pk : param_kernel) {
      std::vector<Scalar> dense(static_cast<size_t>(nparams));
      for (const auto& [c, x] : pk) dense[static_cast<size_t>(c)] = x;
      SparseVec v;
      int idx = 0;
      for (const auto& [pc, sides] : coords) {
        Scalar val = dot(sides.lo.empty() ? sides.hi : sides.lo, dense);
        if (!val.is_zero()) v.emplace_back(idx, std::move(val));
        ++idx;
      }
      products.push_back(std::move(v));
    }
    const int ncoords = static_cast<int>(coord_list.size());
    const auto canonical = row_space_basis(products, ncoords);
    if (canonical.empty()) continue;

    std::vector<SparseVec> restricted;
    for (const auto& v : canonical) {
      SparseVec r;
      for (const auto& [c, x] : v) {
        const ProductCoord& pc = coord_list[static_cast<size_t>(c)];
        if (inside(pc.lo.degree) && inside(pc.hi.degree)) r.emplace_back(c, x);
      }
      restricted.push_back(std::move(r));
    }
    ProbeShift ps{canonical.size(), static_cast<std::size_t>(rank_of(restricted, ncoords))};
    res.per_shift[s] = ps;
    res.full_dim += ps.full_dim;
    res.interior_dim += ps.interior_dim;

    for (size_t k = 0; k < canonical.size(); ++k) {
      std::map<std::pair<BasisElem, BasisElem>, Element> cells;
      bool g2 = false;
      for (const auto& [c, x] : canonical[k]) {
        const ProductCoord& pc = coord_list[static_cast<size_t>(c)];
        cells[{pc.lo, pc.hi}].add_term({pc.lo.degree + pc.hi.degree + s, pc.target}, x);
        if (spec.is_root() && !in_t_lattice(pc.lo.degree, spec.t()) && !in_t_lattice(pc.hi.degree, spec.t()) &&
            inside(pc.lo.degree) && inside(pc.hi.degree))
          g2 = true;
      }
      ProductTable table;
      for (auto& [ab, e] : cells) table.set(ab.first, ab.second, std::move(e));
      const std::size_t index = res.basis.size();
      if (g2) res.gamma2_nonzero.push_back(index);
      res.basis.push_back(std::move(table));
      res.basis_shift.push_back(s);
    }
  }

  if (opts.check_associativity) {
    std::vector<char> failed(res.basis.size(), 0);
    parallel_for(res.basis.size(), [&](std::size_t k) {
      failed[k] = verify_associativity(spec, w, res.basis[k]).associativity_violations.empty() ? 0 : 1;
    });
    for (size_t k = 0; k < failed.size(); ++k)
      if (failed[k]) res.associativity_failures.push_back(k);
  }
  return res;
}

}  // namespace halfder
