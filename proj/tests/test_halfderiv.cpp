#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "halfder/errors.hpp"
#include "halfder/halfderiv.hpp"

using namespace halfder;

namespace {

BasisElem L(int a, int b) { return {{a, b}, Tag::L}; }

Scalar dot(const SparseVec& a, const SparseVec& b) {
  Scalar s;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (b[j].first < a[i].first) ++j;
    else s += a[i++].second * b[j++].second;
  }
  return s;
}

bool in_kernel_span(const NullspaceBasis& nb, int ncols, const SparseVec& v) {
  Eliminator e(ncols);
  for (const auto& k : nb.vectors) e.add_row(k);
  return e.in_span(v);
}

}  // namespace

TEST_CASE("unknown layouts") {
  const Window w(2);
  const UnknownLayout v(AlgebraSpec::virasoro_generic(2), w, {0, 0});
  CHECK(v.size() == 24);
  const UnknownLayout t(AlgebraSpec::torus_generic(2), w, {0, 0});
  CHECK(t.size() == 96);
  // a_m, b_m, c_m, d_m: (x -> x), (x -> D), (D -> x), (D -> D)
  CHECK(t.entry(0).source == BasisElem{{-2, -2}, Tag::X});
  CHECK(t.entry(1).target == Tag::D);
  CHECK(t.entry(2).source.tag == Tag::D);
  CHECK(t.entry(2).target == Tag::X);
  // the source whose target would be degree zero has no unknown
  const UnknownLayout s(AlgebraSpec::virasoro_generic(2), w, {1, 0});
  CHECK(s.size() == 23);
  CHECK(s.column(L(-1, 0), Tag::L) == -1);
  CHECK(s.column(L(1, 0), Tag::L) >= 0);
  const UnknownLayout r(AlgebraSpec::virasoro_generic(2), w, {1, 0}, true);
  CHECK(r.size() == 18);
}

TEST_CASE("constraint row for a generic pair") {
  const auto spec = AlgebraSpec::virasoro_generic(2);
  const Window w(1);
  const auto sys = build_constraints(spec, w, {0, 0});
  const int c10 = sys.layout.column(L(1, 0), Tag::L);
  const int c01 = sys.layout.column(L(0, 1), Tag::L);
  const int c11 = sys.layout.column(L(1, 1), Tag::L);
  auto row_it = std::find_if(sys.rows.begin(), sys.rows.end(), [&](const SparseVec& r) {
    return r.size() == 3 && std::all_of(r.begin(), r.end(), [&](const auto& e) {
             return e.first == c10 || e.first == c01 || e.first == c11;
           });
  });
  REQUIRE(row_it != sys.rows.end());
  // 2 lambda alpha_{(1,1)} - lambda alpha_{(1,0)} - lambda alpha_{(0,1)}, lambda = -1, up to sign
  SparseVec expect{{c10, Scalar(1)}, {c01, Scalar(1)}, {c11, Scalar(-2)}};
  normalize(expect);
  SparseVec negated = expect;
  for (auto& [c, x] : negated) x = -x;
  CHECK((*row_it == expect || *row_it == negated));
}

TEST_CASE("rows are short and never empty") {
  for (const auto& spec : {AlgebraSpec::virasoro_root(3), AlgebraSpec::torus_root(3), AlgebraSpec::torus_generic(2)}) {
    const auto sys = build_constraints(spec, Window(2), {0, 1});
    CHECK_FALSE(sys.rows.empty());
    for (const auto& r : sys.rows) {
      CHECK_FALSE(r.empty());
      CHECK(r.size() <= 6);
    }
  }
}

TEST_CASE("a pair summing to zero with vanishing bracket gives no row") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  const auto sys = build_constraints(spec, Window(1), {0, 0});
  const int a = sys.layout.column(L(1, 0), Tag::L);
  const int b = sys.layout.column(L(-1, 0), Tag::L);
  for (const auto& r : sys.rows) {
    const bool only_ab = std::all_of(r.begin(), r.end(), [&](const auto& e) { return e.first == a || e.first == b; });
    CHECK_FALSE(only_ab);
  }
}

TEST_CASE("identity spans the shift-zero kernel of the generic algebra") {
  const auto spec = AlgebraSpec::virasoro_generic(2);
  const auto sys = build_constraints(spec, Window(2), {0, 0});
  const auto nb = nullspace(sys);
  REQUIRE(nb.dim() == 1);
  CHECK(nb.vectors[0] == to_coefficients(sys.layout, identity_map()));
  CHECK(interior_dimension(nb, sys.layout, 1) == 1);
}

TEST_CASE("kernel vectors satisfy every row and stay solutions when scaled") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  const Window w(4);
  for (Degree s : {Degree{0, 0}, Degree{3, 0}, Degree{1, 2}}) {
    const auto sys = build_constraints(spec, w, s);
    const auto nb = nullspace(sys);
    CHECK(nb.vectors == solve_kernel(spec, w, sys.layout).vectors);
    const Scalar k = spec.field().qpow(1) + Scalar(2);
    for (auto v : nb.vectors) {
      for (const auto& r : sys.rows) CHECK(dot(v, r).is_zero());
      for (auto& [c, x] : v) x *= k;
      for (const auto& r : sys.rows) CHECK(dot(v, r).is_zero());
    }
  }
}

TEST_CASE("interior dimension") {
  const auto spec = AlgebraSpec::virasoro_generic(2);
  const Window w(4);
  const UnknownLayout layout(spec, w, {1, 0});
  const auto nb = solve_kernel(spec, w, layout);
  CHECK(interior_dimension(nb, layout, 2) == 0);
  CHECK_THROWS_AS(interior_dimension(nb, layout, 4), InvalidInterior);
  CHECK_THROWS_AS(interior_dimension(nb, layout, 0), InvalidInterior);

  // a vector living on the boundary only
  const UnknownLayout l0(spec, w, {0, 0});
  NullspaceBasis edge{{SparseVec{{l0.column(L(4, 4), Tag::L), Scalar(1)}}}};
  CHECK(interior_dimension(edge, l0, 2) == 0);
  NullspaceBasis ones{{to_coefficients(l0, identity_map())}};
  CHECK(interior_dimension(ones, l0, 1) == 1);
}

TEST_CASE("interior dimension grows with the subwindow") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  const Window w(5);
  const UnknownLayout layout(spec, w, {0, 0});
  const auto nb = solve_kernel(spec, w, layout);
  std::size_t prev = 0;
  for (int m = 1; m < 5; ++m) {
    const std::size_t d = interior_dimension(nb, layout, m);
    CHECK(d >= prev);
    CHECK(d <= nb.dim());
    prev = d;
  }
}

TEST_CASE("shift sweeps") {
  SUBCASE("generic virasoro") {
    for (const auto& [s, d] : shift_sweep(AlgebraSpec::virasoro_generic(2), Window(4), 2, 2))
      CHECK(d.interior_dim == (s == Degree{0, 0} ? 1u : 0u));
  }
  SUBCASE("generic torus") {
    const auto dims = shift_sweep(AlgebraSpec::torus_generic(2), Window(4), 1, 2);
    CHECK(dims.size() == 9);
    for (const auto& [s, d] : dims) CHECK(d.interior_dim == (s == Degree{0, 0} ? 2u : 0u));
  }
  SUBCASE("same dimensions for two values of q") {
    const auto a = shift_sweep(AlgebraSpec::virasoro_generic(2), Window(4), 1, 2);
    const auto b = shift_sweep(AlgebraSpec::virasoro_generic(Rational(3, 2)), Window(4), 1, 2);
    REQUIRE(a.size() == b.size());
    for (const auto& [s, d] : a) {
      CHECK(b.at(s).full_dim == d.full_dim);
      CHECK(b.at(s).interior_dim == d.interior_dim);
    }
  }
}

TEST_CASE("root-of-unity virasoro has lattice-shift solutions") {
  const auto spec = AlgebraSpec::virasoro_root(3);
  const Window w(7);
  for (Degree s : {Degree{0, 0}, Degree{3, 0}}) {
    const UnknownLayout layout(spec, w, s);
    const auto nb = solve_kernel(spec, w, layout);
    CHECK(interior_dimension(nb, layout, 3) >= 1);
  }
}

TEST_CASE("closed-form candidates") {
  SUBCASE("identity on every variant") {
    for (const auto& spec : {AlgebraSpec::virasoro_generic(2), AlgebraSpec::virasoro_root(4), AlgebraSpec::torus_generic(2),
                             AlgebraSpec::torus_root(3)})
      CHECK(verify_candidate(spec, Window(3), identity_map()).ok());
  }
  SUBCASE("a constant shift is not a 1/2-derivation of the generic algebra") {
    const auto spec = AlgebraSpec::virasoro_generic(2);
    const LinearMap shift = [](const BasisElem& e) {
      const Degree d = e.degree + Degree{1, 0};
      return d.is_zero() ? Element() : Element({d, Tag::L}, Scalar(1));
    };
    const auto rep = verify_candidate(spec, Window(3), shift);
    CHECK_FALSE(rep.ok());
    const bool witnessed = std::any_of(rep.violations.begin(), rep.violations.end(), [](const CandidateViolation& v) {
      return v.a == L(0, 1) && v.b == L(1, 1);
    });
    CHECK(witnessed);
  }
  SUBCASE("lattice-shift family") {
    const Scalar one(1);
    CHECK_THROWS_AS(thmF_family(3, {1, 0}, one, [](Degree) { return Scalar(1); }), InvalidShift);
    const auto spec = AlgebraSpec::virasoro_root(3);
    const UnknownLayout layout(spec, Window(3), {0, 0});
    CHECK(to_coefficients(layout, thmF_family(3, {0, 0}, one, [](Degree) { return Scalar(1); })) ==
          to_coefficients(layout, identity_map()));
    CHECK(verify_candidate(spec, Window(7), thmF_family(3, {3, 0}, one, [](Degree) { return Scalar(); })).ok());
  }
  SUBCASE("torus families") {
    const auto tr = AlgebraSpec::torus_root(3);
    CHECK(verify_candidate(tr, Window(4), thmH_family(3, Scalar(1), Scalar(0))).ok());
    CHECK(to_coefficients(UnknownLayout(tr, Window(2), {0, 0}), thmH_family(3, Scalar(1), Scalar(0))) ==
          to_coefficients(UnknownLayout(tr, Window(2), {0, 0}), identity_map()));
    CHECK(verify_candidate(AlgebraSpec::torus_generic(2), Window(4), torus_generic_family(Scalar(1), Scalar(0))).ok());
    // D -> x on Gamma2 degrees is not allowed
    const LinearMap bad = [](const BasisElem& e) {
      return e.tag == Tag::D ? Element({e.degree, Tag::X}, Scalar(1)) : Element();
    };
    CHECK_FALSE(verify_candidate(tr, Window(3), bad).ok());
  }
}

TEST_CASE("candidate families lie in the computed kernels") {
  SUBCASE("lattice shifts on virasoro-root") {
    const auto spec = AlgebraSpec::virasoro_root(3);
    const Window w(4);
    const Scalar z = spec.field().qpow(1);
    for (Degree s : {Degree{0, 0}, Degree{3, 0}, Degree{0, -3}, Degree{3, 3}}) {
      const UnknownLayout layout(spec, w, s);
      const auto nb = solve_kernel(spec, w, layout);
      for (const Scalar& kappa : {Scalar(0), Scalar(1), z}) {
        const auto phi = thmF_family(3, s, kappa, [z](Degree d) { return Scalar(d.m1 + 2 * d.m2) + z; });
        CHECK(in_kernel_span(nb, layout.size(), to_coefficients(layout, phi)));
      }
    }
  }
  SUBCASE("shift-zero torus families") {
    const Window w(3);
    const auto tr = AlgebraSpec::torus_root(3);
    const UnknownLayout lr(tr, w, {0, 0});
    const auto nr = solve_kernel(tr, w, lr);
    CHECK(in_kernel_span(nr, lr.size(), to_coefficients(lr, thmH_family(3, Scalar(2), Scalar(-5)))));
    const auto tg = AlgebraSpec::torus_generic(2);
    const UnknownLayout lg(tg, w, {0, 0});
    const auto ng = solve_kernel(tg, w, lg);
    CHECK(in_kernel_span(ng, lg.size(), to_coefficients(lg, torus_generic_family(Scalar(3), Scalar(Rational(1, 2))))));
  }
}
