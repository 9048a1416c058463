#include "halfder/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "halfder/errors.hpp"

namespace halfder {

std::string to_string(Degree d) { return "(" + std::to_string(d.m1) + "," + std::to_string(d.m2) + ")"; }

std::ostream& operator<<(std::ostream& os, Degree d) { return os << to_string(d); }

char tag_char(Tag t) {
  switch (t) {
    case Tag::L: return 'L';
    case Tag::X: return 'X';
    case Tag::D: return 'D';
  }
  return '?';
}

std::string to_string(const BasisElem& b) {
  switch (b.tag) {
    case Tag::L: return "L" + to_string(b.degree);
    case Tag::X: return "x^" + to_string(b.degree);
    case Tag::D: return "D" + to_string(b.degree);
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const BasisElem& b) { return os << to_string(b); }

// ---------------------------------------------------------------------------
// Element

Element::Element(const BasisElem& b, Scalar coeff) {
  if (!coeff.is_zero()) terms_.emplace_back(b, std::move(coeff));
}

Scalar Element::coeff(const BasisElem& b) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), b,
                             [](const Term& t, const BasisElem& key) { return t.first < key; });
  if (it != terms_.end() && it->first == b) return it->second;
  return {};
}

void Element::add_term(const BasisElem& b, const Scalar& coeff) {
  if (coeff.is_zero()) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), b,
                             [](const Term& t, const BasisElem& key) { return t.first < key; });
  if (it != terms_.end() && it->first == b) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  } else {
    terms_.insert(it, {b, coeff});
  }
}

Element& Element::operator+=(const Element& o) {
  for (const auto& [b, c] : o.terms_) add_term(b, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  for (const auto& [b, c] : o.terms_) add_term(b, -c);
  return *this;
}

Element& Element::operator*=(const Scalar& k) {
  if (k.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= k;
  return *this;
}

// ---------------------------------------------------------------------------
// AlgebraSpec / Window

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::VirasoroGeneric: return "virasoro-generic";
    case Variant::VirasoroRoot: return "virasoro-root";
    case Variant::TorusGeneric: return "torus-generic";
    case Variant::TorusRoot: return "torus-root";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::VirasoroGeneric, Variant::VirasoroRoot, Variant::TorusGeneric, Variant::TorusRoot})
    if (variant_name(v) == name) return v;
  throw ConfigError("unknown algebra variant: " + std::string(name));
}

AlgebraSpec::AlgebraSpec(Variant variant, ScalarField field) : variant_(variant), field_(std::move(field)) {
  const bool root = variant == Variant::VirasoroRoot || variant == Variant::TorusRoot;
  if (root != field_.is_cyclotomic())
    throw ConfigError(variant_name(variant) + (root ? " needs a root-of-unity field" : " needs a generic-q field"));
}

const std::vector<Tag>& AlgebraSpec::tags() const {
  static const std::vector<Tag> virasoro{Tag::L};
  static const std::vector<Tag> torus{Tag::X, Tag::D};
  return is_torus() ? torus : virasoro;
}

bool AlgebraSpec::accepts(Tag tag) const { return is_torus() ? tag != Tag::L : tag == Tag::L; }

nlohmann::json AlgebraSpec::to_json() const {
  nlohmann::json j;
  j["variant"] = variant_name(variant_);
  if (is_root())
    j["t"] = t();
  else
    j["q"] = format_rational(field_.q0());
  return j;
}

AlgebraSpec AlgebraSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("variant")) throw ConfigError("algebra JSON needs a \"variant\" field");
  Variant v = parse_variant(j.at("variant").get<std::string>());
  if (v == Variant::VirasoroRoot || v == Variant::TorusRoot) {
    if (!j.contains("t") || !j["t"].is_number_integer()) throw ConfigError("root-of-unity algebra JSON needs integer \"t\"");
    return {v, ScalarField::cyclotomic(j["t"].get<int>())};
  }
  if (!j.contains("q")) throw ConfigError("generic algebra JSON needs \"q\"");
  std::string q = j["q"].is_string() ? j["q"].get<std::string>() : j["q"].dump();
  return {v, ScalarField::generic(parse_rational(q))};
}

Window::Window(int n) : n_(n) {
  if (n < 1) throw ConfigError("window size must be positive");
  points_.reserve(static_cast<size_t>((2 * n + 1) * (2 * n + 1) - 1));
  for (int a = -n; a <= n; ++a)
    for (int b = -n; b <= n; ++b)
      if (a != 0 || b != 0) points_.push_back({a, b});
}

std::vector<BasisElem> Window::basis(const AlgebraSpec& spec) const {
  std::vector<BasisElem> out;
  out.reserve(points_.size() * spec.tags().size());
  for (Degree d : points_)
    for (Tag t : spec.tags()) out.push_back({d, t});
  return out;
}

// ---------------------------------------------------------------------------
// Structure constants

Scalar lambda_coeff(const AlgebraSpec& spec, Degree m, Degree n) {
  const long long e1 = static_cast<long long>(m.m2) * n.m1;
  const long long e2 = static_cast<long long>(m.m1) * n.m2;
  if (e1 == e2) return {};
  return spec.field().qpow(e1) - spec.field().qpow(e2);
}

long long det2(Degree m, Degree n) {
  return static_cast<long long>(m.m2) * n.m1 - static_cast<long long>(m.m1) * n.m2;
}

bool in_t_lattice(Degree m, int t) { return m.m1 % t == 0 && m.m2 % t == 0; }

GammaClass gamma_class(const AlgebraSpec& spec, Degree m) {
  if (!spec.is_root()) throw UnsupportedVariant("gamma_class needs a root-of-unity variant, got " + variant_name(spec.variant()));
  return in_t_lattice(m, spec.t()) ? GammaClass::Gamma1 : GammaClass::Gamma2;
}

Scalar h_coeff(const AlgebraSpec& spec, Degree m, Degree n) {
  if (spec.variant() != Variant::TorusRoot) throw UnsupportedVariant("h_coeff is defined for torus-root only");
  if (gamma_class(spec, m) == GammaClass::Gamma1) return spec.field().from_int(det2(m, n));
  return lambda_coeff(spec, m, n);
}

Scalar g_coeff(const AlgebraSpec& spec, Degree m, Degree n) {
  if (spec.variant() != Variant::TorusRoot) throw UnsupportedVariant("g_coeff is defined for torus-root only");
  if (gamma_class(spec, m) == GammaClass::Gamma2 && gamma_class(spec, n) == GammaClass::Gamma2)
    return lambda_coeff(spec, m, n);
  return spec.field().from_int(det2(m, n));
}

BasisElem make_basis(const AlgebraSpec& spec, Degree d, Tag tag) {
  if (d.is_zero()) throw ConfigError("degree (0,0) is not a basis degree");
  if (!spec.accepts(tag))
    throw UnsupportedVariant(std::string("tag ") + tag_char(tag) + " is not a basis tag of " + variant_name(spec.variant()));
  return {d, tag};
}

std::optional<Element::Term> bracket_term(const AlgebraSpec& spec, const BasisElem& a, const BasisElem& b) {
  if (!spec.accepts(a.tag) || !spec.accepts(b.tag))
    throw UnsupportedVariant("bracket: tag not valid for " + variant_name(spec.variant()));
  const Degree m = a.degree, n = b.degree;
  const Degree s = m + n;
  if (s.is_zero() || m.is_zero() || n.is_zero()) return std::nullopt;
  Scalar c;
  Tag out = Tag::X;
  const bool root = spec.variant() == Variant::TorusRoot;
  if (!spec.is_torus()) {
    c = lambda_coeff(spec, m, n);
    out = Tag::L;
  } else if (a.tag == Tag::X && b.tag == Tag::X) {
    c = lambda_coeff(spec, m, n);
  } else if (a.tag == Tag::D && b.tag == Tag::X) {
    c = root ? h_coeff(spec, m, n) : lambda_coeff(spec, m, n);
  } else if (a.tag == Tag::X && b.tag == Tag::D) {
    c = -(root ? h_coeff(spec, n, m) : lambda_coeff(spec, n, m));
  } else {
    c = root ? g_coeff(spec, m, n) : lambda_coeff(spec, m, n);
    out = Tag::D;
  }
  if (c.is_zero()) return std::nullopt;
  return Element::Term{BasisElem{s, out}, std::move(c)};
}

Element bracket(const AlgebraSpec& spec, const BasisElem& a, const BasisElem& b) {
  auto t = bracket_term(spec, a, b);
  if (!t) return {};
  return Element(t->first, std::move(t->second));
}

Element bracket(const AlgebraSpec& spec, const Element& a, const Element& b) {
  Element out;
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms())
      if (auto t = bracket_term(spec, ea, eb)) out.add_term(t->first, ca * cb * t->second);
  return out;
}

// ---------------------------------------------------------------------------
// Axiom checks

namespace {

Element bracket_with(const BracketFn& br, const BasisElem& a, const Element& e) {
  Element out;
  for (const auto& [b, c] : e.terms()) out += c * br(a, b);
  return out;
}

}  // namespace

JacobiReport jacobi_check(const std::vector<BasisElem>& basis, const BracketFn& br, const Window& w) {
  JacobiReport rep;
  for (const auto& a : basis) {
    for (const auto& b : basis) {
      if (!w.contains_or_zero(a.degree + b.degree)) continue;
      ++rep.pairs_checked;
      Element r = br(a, b) + br(b, a);
      if (!r.is_zero()) rep.antisymmetry_violations.push_back({a, b, b, std::move(r)});
    }
  }
  for (const auto& a : basis) {
    for (const auto& b : basis) {
      const Degree ab = a.degree + b.degree;
      if (!w.contains_or_zero(ab)) continue;
      Element bra_ab = br(a, b);
      for (const auto& c : basis) {
        if (!w.contains_or_zero(ab + c.degree) || !w.contains_or_zero(b.degree + c.degree) ||
            !w.contains_or_zero(c.degree + a.degree))
          continue;
        ++rep.triples_checked;
        Element r = bracket_with(br, a, br(b, c));
        r += bracket_with(br, b, br(c, a));
        r += bracket_with(br, c, bra_ab);
        if (!r.is_zero()) rep.jacobi_violations.push_back({a, b, c, std::move(r)});
      }
    }
  }
  return rep;
}

JacobiReport jacobi_check(const AlgebraSpec& spec, const Window& w) {
  return jacobi_check(w.basis(spec), [&spec](const BasisElem& a, const BasisElem& b) { return bracket(spec, a, b); }, w);
}

std::vector<RelationCheck> lemma41_relations(const AlgebraSpec& spec) {
  if (spec.variant() != Variant::TorusGeneric)
    throw UnsupportedVariant("generator relations are stated for torus-generic only");
  const ScalarField& f = spec.field();
  const Scalar q = f.qpow(1), qi = f.qpow(-1), one(1);

  std::vector<RelationCheck> out;
  for (Tag tag : {Tag::X, Tag::D}) {
    auto e = [&](int a, int b) { return Element(BasisElem{{a, b}, tag}, Scalar(1)); };
    auto br = [&](const Element& a, const Element& b) { return bracket(spec, a, b); };
    const std::string g = tag == Tag::X ? "x^" : "D";

    {
      RelationCheck r;
      r.name = "[" + g + "(1,0)," + g + "(-1,0)] = [" + g + "(0,1)," + g + "(0,-1)] = 0";
      r.lhs = br(e(1, 0), e(-1, 0));
      r.rhs = br(e(0, 1), e(0, -1));
      r.holds = r.lhs.is_zero() && r.rhs.is_zero();
      out.push_back(std::move(r));
    }
    struct Triple {
      int a1, a2, b1, b2, c1, c2;
      Scalar k;
      int r1, r2;
    };
    const std::vector<Triple> triples{
        {1, 0, 0, 1, -1, 0, (one - q) * (qi - one), 0, 1},
        {1, 0, 0, -1, -1, 0, (one - qi) * (q - one), 0, -1},
        {0, 1, 1, 0, 0, -1, (q - one) * (one - qi), 1, 0},
        {0, 1, -1, 0, 0, -1, (qi - one) * (one - q), -1, 0},
    };
    for (const auto& tr : triples) {
      RelationCheck r;
      r.name = "[[" + g + to_string(Degree{tr.a1, tr.a2}) + "," + g + to_string(Degree{tr.b1, tr.b2}) + "]," + g +
               to_string(Degree{tr.c1, tr.c2}) + "] = k " + g + to_string(Degree{tr.r1, tr.r2});
      r.lhs = br(br(e(tr.a1, tr.a2), e(tr.b1, tr.b2)), e(tr.c1, tr.c2));
      r.rhs = tr.k * e(tr.r1, tr.r2);
      r.holds = r.lhs == r.rhs;
      out.push_back(std::move(r));
    }
  }
  // Commuting lines first, then the x-triples, then the D-triples.
  std::stable_partition(out.begin(), out.end(), [](const RelationCheck& r) { return r.name.find("= 0") != std::string::npos; });
  return out;
}

// ---------------------------------------------------------------------------
// JSON helpers

nlohmann::json degree_to_json(Degree d) { return nlohmann::json::array({d.m1, d.m2}); }

Degree degree_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw ConfigError("degree must be a two-element integer array, got " + j.dump());
  return {j[0].get<int>(), j[1].get<int>()};
}

nlohmann::json element_to_json(const ScalarField& f, const Element& e) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [b, c] : e.terms())
    terms.push_back({{"degree", degree_to_json(b.degree)}, {"tag", std::string(1, tag_char(b.tag))}, {"coeff", f.format(c)}});
  return terms;
}

}  // namespace halfder
