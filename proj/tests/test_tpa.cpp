#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "halfder/errors.hpp"
#include "halfder/linalg.hpp"
#include "halfder/tpa.hpp"

using namespace halfder;

namespace {

BasisElem L(int a, int b) { return {{a, b}, Tag::L}; }
BasisElem X(int a, int b) { return {{a, b}, Tag::X}; }
BasisElem D(int a, int b) { return {{a, b}, Tag::D}; }

CenterFunctional indicator(Degree d) { return {{{d, Scalar(1)}}}; }

/// Flattens tables into coordinate vectors over a shared (a, b, target) index.
std::vector<SparseVec> flatten(const std::vector<const ProductTable*>& tables) {
  std::map<std::tuple<BasisElem, BasisElem, BasisElem>, int> index;
  for (const auto* t : tables)
    for (const auto& [k, e] : t->entries())
      for (const auto& [b, c] : e.terms()) index.emplace(std::make_tuple(k.first, k.second, b), 0);
  int n = 0;
  for (auto& [k, i] : index) i = n++;
  std::vector<SparseVec> out;
  for (const auto* t : tables) {
    SparseVec v;
    for (const auto& [k, e] : t->entries())
      for (const auto& [b, c] : e.terms()) v.emplace_back(index.at({k.first, k.second, b}), c);
    normalize(v);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("product tables are symmetric") {
  ProductTable p;
  p.set(L(2, 0), L(1, 0), Element(L(3, 0), Scalar(5)));
  CHECK(p.get(L(1, 0), L(2, 0)) == Element(L(3, 0), Scalar(5)));
  CHECK(p.find(L(2, 0), L(1, 0)) != nullptr);
  CHECK(p.shifts() == std::set<Degree>{{0, 0}});
  CHECK(p.support() == std::set<BasisElem>{L(1, 0), L(2, 0)});
  p.set(L(1, 0), L(2, 0), Element());
  CHECK(p.empty());
}

TEST_CASE("ordered input that disagrees is not commutative") {
  ProductTable p;
  p.set_ordered(L(1, 0), L(2, 0), Element(L(3, 0), Scalar(1)));
  CHECK(p.commutative());
  p.set_ordered(L(2, 0), L(1, 0), Element(L(3, 0), Scalar(2)));
  CHECK_FALSE(p.commutative());
  CHECK_FALSE(verify_axioms(AlgebraSpec::virasoro_generic(2), Window(3), p).commutativity_ok);
}

TEST_CASE("product table JSON") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  const ProductTable p = rank_one_center_product(spec, indicator({3, 0}), {0, 3});
  const auto j = p.to_json(spec.field());
  CHECK(j.dump() == R"([{"a":[3,0],"b":[3,0],"terms":[{"coeff":"[1, 0]","degree":[0,3],"tag":"L"}]}])");
  const ProductTable back = ProductTable::from_json(spec, j);
  CHECK(back.entries() == p.entries());

  const auto tg = AlgebraSpec::torus_generic(2);
  ProductTable q;
  q.set(X(1, 0), D(0, 1), Element(D(1, 1), Scalar(Rational(-1, 2))));
  const auto jt = q.to_json(tg.field());
  // keys are ordered by degree first
  CHECK(jt[0]["aTag"] == "D");
  CHECK(jt[0]["bTag"] == "X");
  CHECK(ProductTable::from_json(tg, jt).entries() == q.entries());
  CHECK_THROWS_AS(ProductTable::from_json(tg, nlohmann::json::parse(R"([{"a":[1,0],"b":[0,1],"terms":[]}])")),
                  ConfigError);
  CHECK_THROWS_AS(ProductTable::from_json(tg, nlohmann::json::parse(R"({"a":1})")), ConfigError);
}

TEST_CASE("the zero product passes everywhere") {
  for (const auto& spec : {AlgebraSpec::virasoro_generic(2), AlgebraSpec::virasoro_root(3), AlgebraSpec::torus_generic(2),
                           AlgebraSpec::torus_root(3)}) {
    const AxiomReport r = verify_axioms(spec, Window(2), ProductTable());
    CHECK(r.ok());
    CHECK(r.associativity_checked > 0);
    CHECK(r.compatibility_checked > 0);
  }
  CHECK(thmG_check(AlgebraSpec::virasoro_root(3), Window(4), ProductTable()).ok());
}

TEST_CASE("rank-one center product") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  const ProductTable p = rank_one_center_product(spec, indicator({3, 0}), {0, 3});
  REQUIRE(p.entries().size() == 1);
  CHECK(p.get(L(3, 0), L(3, 0)) == Element(L(0, 3), Scalar(1)));
  CHECK(p.get(L(3, 0), L(0, 3)).is_zero());
  // (L_a . L_a) . L_a = L_{(0,3)} . L_a = 0 = L_a . (L_a . L_a)
  CHECK(p.get(L(0, 3), L(3, 0)).is_zero());
  CHECK(rank_one_center_product(spec, CenterFunctional{}, {0, 3}).empty());

  const AxiomReport r = verify_axioms(spec, Window(4), p);
  CHECK(r.ok());
  CHECK(thmG_check(spec, Window(4), p).ok());

  CHECK_THROWS_AS(rank_one_center_product(spec, indicator({3, 0}), {1, 0}), InvalidCenterVector);
  CHECK_THROWS_AS(rank_one_center_product(spec, indicator({3, 1}), {0, 3}), InvalidCenterVector);
  CHECK_THROWS_AS(rank_one_center_product(AlgebraSpec::virasoro_generic(2), indicator({3, 0}), {0, 3}),
                  UnsupportedVariant);
}

TEST_CASE("rank-one products with wider support are transposed Poisson") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  const Scalar z = spec.field().qpow(1);
  CenterFunctional tau{{{{3, 0}, Scalar(2)}, {{-3, 3}, z}, {{0, -3}, Scalar(-1)}}};
  for (Degree v : {Degree{3, 3}, Degree{0, 3}, Degree{-3, 0}}) {
    const ProductTable p = rank_one_center_product(spec, tau, v);
    CHECK(p.entries().size() == 6);
    CHECK(verify_axioms(spec, Window(4), p).ok());
    CHECK(thmG_check(spec, Window(4), p).ok());
  }
}

TEST_CASE("the shift product fails compatibility on the generic algebra") {
  const auto spec = AlgebraSpec::virasoro_generic(2);
  const Window w(3);
  ProductTable p;
  for (Degree a : w.points())
    for (Degree b : w.points())
      if (w.contains(a + b)) p.set({a, Tag::L}, {b, Tag::L}, Element({a + b, Tag::L}, Scalar(1)));
  const AxiomReport r = verify_axioms(spec, w, p);
  CHECK(r.commutativity_ok);
  CHECK_FALSE(r.compatibility_violations.empty());
  const bool witnessed = std::any_of(r.compatibility_violations.begin(), r.compatibility_violations.end(),
                                     [](const TripleViolation& v) { return v.z == L(1, 0) && v.x == L(0, 1) && v.y == L(1, 1); });
  CHECK(witnessed);
}

TEST_CASE("product conditions catch a Gamma2 difference") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  ProductTable p;
  p.set(L(1, 0), L(2, 0), Element(L(3, 0), Scalar(1)));
  const ThmGReport r = thmG_check(spec, Window(4), p);
  REQUIRE(r.conditions.size() == 3);
  CHECK_FALSE(r.conditions[0].ok());
  CHECK_FALSE(r.ok());
  CHECK_THROWS_AS(thmG_check(AlgebraSpec::torus_root(3), Window(3), p), UnsupportedVariant);
}

TEST_CASE("a Gamma2 coefficient that depends on n breaks equivariance") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  const Window w(4);
  ProductTable p;
  p.set(L(1, 0), L(1, 0), Element(L(4, 0), Scalar(1)));
  p.set(L(1, 0), L(-2, 0), Element(L(1, 0), Scalar(2)));
  const ThmGReport r = thmG_check(spec, w, p);
  CHECK(r.conditions[0].ok());
  CHECK(r.conditions[1].checked > 0);
  CHECK_FALSE(r.conditions[1].ok());
}

TEST_CASE("triviality probe") {
  SUBCASE("generic virasoro has no interior product") {
    const ProbeResult r = triviality_probe(AlgebraSpec::virasoro_generic(2), Window(4), 2);
    CHECK(r.shift_bound == 2);
    CHECK(r.interior_dim == 0);
    CHECK(r.basis.size() == r.full_dim);
    for (const auto& t : r.basis) CHECK(verify_axioms(AlgebraSpec::virasoro_generic(2), Window(4), t).compatibility_violations.empty());
  }
  SUBCASE("generic torus, small window") {
    const auto spec = AlgebraSpec::torus_generic(2);
    const ProbeResult r = triviality_probe(spec, Window(3), 1, {1, true});
    CHECK(r.interior_dim == 0);
    for (const auto& t : r.basis) CHECK(verify_axioms(spec, Window(3), t).compatibility_violations.empty());
  }
  SUBCASE("root-of-unity virasoro contains the rank-one products") {
    const auto spec = AlgebraSpec::virasoro_root(3);
    const Window w(4);
    const ProbeResult r = triviality_probe(spec, w, 3);
    CHECK(r.shift_bound == 3);
    CHECK(r.interior_dim >= 1);
    CHECK(r.gamma2_nonzero.empty());
    for (const auto& t : r.basis) CHECK(verify_axioms(spec, w, t).compatibility_violations.empty());

    const ProductTable rank_one = rank_one_center_product(spec, indicator({3, 0}), {3, 3});
    std::vector<const ProductTable*> tables;
    for (std::size_t k = 0; k < r.basis.size(); ++k)
      if (r.basis_shift[k] == Degree{-3, 3}) tables.push_back(&r.basis[k]);
    REQUIRE_FALSE(tables.empty());
    const int before = static_cast<int>(tables.size());
    tables.push_back(&rank_one);
    const auto vecs = flatten(tables);
    int ncols = 0;
    for (const auto& v : vecs)
      if (!v.empty()) ncols = std::max(ncols, v.back().first + 1);
    CHECK(rank_of(vecs, ncols) == before);
  }
  SUBCASE("interior must be inside the window") {
    CHECK_THROWS_AS(triviality_probe(AlgebraSpec::virasoro_generic(2), Window(3), 3), InvalidInterior);
    CHECK_THROWS_AS(triviality_probe(AlgebraSpec::virasoro_generic(2), Window(3), 0), InvalidInterior);
  }
}
