#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "qrep/kronecker.hpp"
#include "qrep/schofield.hpp"
#include "qrep/treebasis.hpp"

using namespace qrep;
using Catch::Matchers::ContainsSubstring;

namespace {

template <class S>
std::vector<Matrix<S>> idbasis(const Rep<S>& m) {
    std::vector<Matrix<S>> b;
    for (size_t v = 0; v < m.dims.size(); ++v)
        b.push_back(normalize_matrix(Matrix<S>::identity(m.dims[v]), m.field));
    return b;
}

template <class S>
TreeCertificate<S> cert_of(const Rep<S>& m, const std::vector<Matrix<S>>& basis) {
    TreeCertificate<S> c{m, basis, coefficient_quiver(m, basis), false};
    return c;
}

template <class S>
Matrix<S> random_invertible(size_t n, const FieldInfo& f, std::mt19937_64& rng) {
    for (int tries = 0; tries < 200; ++tries) {
        Matrix<S> m(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                m.at(i, j) = scalar_traits<S>::from_long(static_cast<long long>(rng() % 7) - 3, f);
        if (is_invertible(m)) return m;
    }
    throw std::runtime_error("random_invertible: no luck");
}

template <class S>
std::vector<Matrix<S>> random_basis(const Rep<S>& m, std::mt19937_64& rng) {
    std::vector<Matrix<S>> b;
    for (size_t v = 0; v < m.dims.size(); ++v) b.push_back(random_invertible<S>(m.dims[v], m.field, rng));
    return b;
}

template <class S>
size_t component_count(const CoefficientQuiver<S>& g) {
    size_t n = g.num_nodes();
    std::vector<std::vector<size_t>> adj(n);
    for (const auto& e : g.edges) {
        adj[e.from].push_back(e.to);
        adj[e.to].push_back(e.from);
    }
    std::vector<char> seen(n, 0);
    size_t comps = 0;
    for (size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++comps;
        std::vector<size_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            size_t v = stack.back();
            stack.pop_back();
            for (size_t w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return comps;
}

template <class S>
bool mat_eq(const Matrix<S>& a, const Matrix<S>& b, const FieldInfo& f) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return (a + b.scaled(scalar_traits<S>::from_long(-1, f))).is_zero();
}

// Full certificate validation against the module it certifies.
template <class S>
void check_certificate(const TreeCertificate<S>& c, const Rep<S>& m, bool check_iso) {
    CHECK(c.rep.dims == m.dims);
    CHECK(is_tree_certificate(c.gamma));
    CHECK(c.gamma.edges.size() + 1 == c.rep.total_dim());
    CHECK(c.normalized);
    CHECK_NOTHROW(normalize_to_01(c));
    if (check_iso) CHECK(is_isomorphic(c.rep, m));
}

Quiver a3_path() { return Quiver({"0", "1", "2"}, {{"p", "0", "1"}, {"q", "1", "2"}}); }

}  // namespace

TEST_CASE("coefficient quivers of the standard Kronecker modules") {
    FieldInfo f = FieldInfo::Q();
    for (size_t n = 1; n <= 3; ++n) {
        Rep<Rat> p = std_kronecker<Rat>(StdKind::P, n, f);
        auto g = coefficient_quiver(p, idbasis(p));
        CHECK(g.num_nodes() == 2 * n + 1);
        CHECK(g.edges.size() == 2 * n);
        CHECK(is_tree_certificate(g));

        Rep<Rat> r1 = std_kronecker<Rat>(StdKind::R, n, f, ProjPoint<Rat>::finite(Rat(1)));
        auto gr = coefficient_quiver(r1, idbasis(r1));
        CHECK(gr.num_nodes() == 2 * n);
        CHECK(gr.edges.size() == 3 * n - 1);
        CHECK_FALSE(is_tree_certificate(gr));

        Rep<Rat> r0 = std_kronecker<Rat>(StdKind::R, n, f, ProjPoint<Rat>::finite(Rat(0)));
        auto g0 = coefficient_quiver(r0, idbasis(r0));
        CHECK(g0.edges.size() == 2 * n - 1);
        CHECK(is_tree_certificate(g0));

        Rep<Rat> ri = std_kronecker<Rat>(StdKind::R, n, f, ProjPoint<Rat>::infinity());
        CHECK(is_tree_certificate(coefficient_quiver(ri, idbasis(ri))));
    }

    Rep<Rat> p2 = std_kronecker<Rat>(StdKind::P, 2, f);
    std::vector<Matrix<Rat>> bad = idbasis(p2);
    bad[0] = Matrix<Rat>(2, 2);
    CHECK_THROWS_WITH(coefficient_quiver(p2, bad), ContainsSubstring("singular basis matrix"));
    bad[0] = Matrix<Rat>::identity(3);
    CHECK_THROWS_WITH(coefficient_quiver(p2, bad), ContainsSubstring("shape mismatch"));
    CHECK_THROWS_WITH(coefficient_quiver(p2, {Matrix<Rat>::identity(2)}),
                      ContainsSubstring("size mismatch"));
}

TEST_CASE("connectivity of coefficient quivers tracks indecomposability") {
    FieldInfo f = FieldInfo::Q();
    std::mt19937_64 rng(20120618);

    std::vector<Rep<Rat>> indec = {
        std_kronecker<Rat>(StdKind::P, 1, f),
        std_kronecker<Rat>(StdKind::P, 2, f),
        std_kronecker<Rat>(StdKind::I, 1, f),
        std_kronecker<Rat>(StdKind::R, 2, f, ProjPoint<Rat>::finite(Rat(0))),
        preprojective<Rat>(3, 1, f),
    };
    for (const auto& m : indec)
        for (int s = 0; s < 5; ++s) {
            auto g = coefficient_quiver(m, random_basis(m, rng));
            CHECK(component_count(g) == 1);
        }

    Quiver q2 = kronecker_quiver(2);
    std::vector<Rep<Rat>> dec = {
        direct_sum(std_kronecker<Rat>(StdKind::P, 1, f), std_kronecker<Rat>(StdKind::P, 1, f)),
        direct_sum(simple_rep<Rat>(q2, f, "x"), simple_rep<Rat>(q2, f, "y")),
        direct_sum(std_kronecker<Rat>(StdKind::R, 1, f, ProjPoint<Rat>::finite(Rat(0))),
                   std_kronecker<Rat>(StdKind::R, 1, f, ProjPoint<Rat>::infinity())),
        direct_sum(simple_rep<Rat>(q2, f, "y"), simple_rep<Rat>(q2, f, "y")),
        direct_sum(std_kronecker<Rat>(StdKind::P, 2, f), simple_rep<Rat>(q2, f, "x")),
    };
    // the summand-adapted basis always separates the summands
    for (const auto& m : dec) {
        auto g = coefficient_quiver(m, idbasis(m));
        CHECK(component_count(g) >= 2);
    }
}

TEST_CASE("normalization of tree bases") {
    FieldInfo f = FieldInfo::Q();
    Rep<Rat> p3 = std_kronecker<Rat>(StdKind::P, 3, f);
    std::vector<Matrix<Rat>> scaled = idbasis(p3);
    long units[] = {2, 3, 5, 7, 11, 13, 17};
    size_t next = 0;
    for (auto& b : scaled)
        for (size_t j = 0; j < b.cols(); ++j) b.at(j, j) = Rat(units[next++ % 7]);
    TreeCertificate<Rat> c = cert_of(p3, scaled);
    REQUIRE(is_tree_certificate(c.gamma));

    TreeCertificate<Rat> n01 = normalize_to_01(c);
    CHECK(n01.normalized);
    CHECK(is_tree_certificate(n01.gamma));
    CHECK(n01.gamma.edges.size() == c.gamma.edges.size());
    std::set<std::tuple<size_t, size_t, size_t>> before, after;
    for (const auto& e : c.gamma.edges) before.insert({e.arrow, e.from, e.to});
    for (const auto& e : n01.gamma.edges) after.insert({e.arrow, e.from, e.to});
    CHECK(before == after);

    // already normalized: a second pass is the identity on the basis
    TreeCertificate<Rat> again = normalize_to_01(n01);
    for (size_t v = 0; v < again.basis.size(); ++v)
        CHECK(mat_eq(again.basis[v], n01.basis[v], f));

    // single leaf edge with entry 7
    Quiver a2({"s", "t"}, {{"a", "s", "t"}});
    Rep<Rat> m(a2, f, {1, 1}, {Matrix<Rat>(1, 1, {Rat(7)})});
    TreeCertificate<Rat> lc = normalize_to_01(cert_of(m, idbasis(m)));
    CHECK(lc.gamma.transformed[0].at(0, 0).is_one());

    Rep<Rat> r11 = std_kronecker<Rat>(StdKind::R, 1, f, ProjPoint<Rat>::finite(Rat(1)));
    CHECK_THROWS_WITH(normalize_to_01(cert_of(r11, idbasis(r11))),
                      ContainsSubstring("not a tree certificate"));
}

TEST_CASE("elementary cocycles between the Kronecker simples") {
    FieldInfo f = FieldInfo::Q();
    Quiver q3 = kronecker_quiver(3);
    Rep<Rat> ey = simple_rep<Rat>(q3, f, "y");
    Rep<Rat> ex = simple_rep<Rat>(q3, f, "x");
    auto cy = cert_of(ey, idbasis(ey));
    auto cx = cert_of(ex, idbasis(ex));

    auto zetas = choose_elementary_cocycles(ey, ex, cy, cx);
    REQUIRE(zetas.size() == 3);
    std::set<size_t> arrows;
    for (const auto& z : zetas) {
        size_t nz = 0, where = 0;
        for (size_t a = 0; a < z.size(); ++a)
            if (!z[a].is_zero()) {
                ++nz;
                where = a;
            }
        CHECK(nz == 1);
        CHECK(z[where].rows() == 1);
        CHECK(z[where].at(0, 0).is_one());
        arrows.insert(where);
    }
    CHECK(arrows.size() == 3);

    // Ext^1(E_sink, E_source) vanishes
    CHECK(choose_elementary_cocycles(ex, ey, cx, cy).empty());

    Rep<Rat> r11 = std_kronecker<Rat>(StdKind::R, 1, f, ProjPoint<Rat>::finite(Rat(1)));
    Quiver q2 = kronecker_quiver(2);
    Rep<Rat> e2 = simple_rep<Rat>(q2, f, "x");
    CHECK_THROWS_WITH(
        choose_elementary_cocycles(r11, e2, cert_of(r11, idbasis(r11)), cert_of(e2, idbasis(e2))),
        ContainsSubstring("not exceptional"));

    Rep<Rat> px = std_kronecker<Rat>(StdKind::P, 1, f);
    Rep<Rat> ey2 = simple_rep<Rat>(q2, f, "y");
    CHECK_THROWS_WITH(
        choose_elementary_cocycles(ey2, px, cert_of(ey2, idbasis(ey2)), cert_of(px, idbasis(px))),
        ContainsSubstring("does not vanish"));
}

TEST_CASE("elementary cocycles for a Schofield pair") {
    FieldInfo f = FieldInfo::Fp(5);
    Rep<Fp> m = preprojective<Fp>(3, 2, f);
    auto pairs = schofield_pairs(m);
    REQUIRE(pairs.size() == 1);
    const auto& p = pairs[0];
    TreeCertificate<Fp> cy = exceptional_tree_basis(p.y);
    TreeCertificate<Fp> cx = exceptional_tree_basis(p.x);
    auto zetas = choose_elementary_cocycles(p.y, p.x, cy, cx);
    CHECK(zetas.size() == ext_dim(p.x, p.y));
    CHECK(zetas.size() == 3);
}

TEST_CASE("glue reproduces the pieces and reflects isomorphy") {
    FieldInfo f = FieldInfo::Q();
    Quiver q3 = kronecker_quiver(3);
    Rep<Rat> ey = simple_rep<Rat>(q3, f, "y");
    Rep<Rat> ex = simple_rep<Rat>(q3, f, "x");
    auto zetas = choose_elementary_cocycles(ey, ex, cert_of(ey, idbasis(ey)),
                                            cert_of(ex, idbasis(ex)));

    Rep<Rat> tsrc = simple_rep<Rat>(q3, f, "x");
    CHECK(is_isomorphic(glue(tsrc, ey, ex, zetas), ex));
    Rep<Rat> tsnk = simple_rep<Rat>(q3, f, "y");
    CHECK(is_isomorphic(glue(tsnk, ey, ex, zetas), ey));

    // the simples pair reconstructs any Kronecker representation
    for (size_t i = 1; i <= 2; ++i) {
        Rep<Rat> t = preprojective<Rat>(3, i, f);
        Rep<Rat> g = glue(t, ey, ex, zetas);
        CHECK(g.dims == t.dims);
        CHECK(is_isomorphic(g, t));
    }

    // canonical exact sequence of the glued module
    Rep<Rat> t = preprojective<Rat>(3, 2, f);
    Rep<Rat> g = glue(t, ey, ex, zetas);
    size_t su = t.dims[1], qv = t.dims[0];
    Rep<Rat> top = direct_power(ey, su), bot = direct_power(ex, qv);
    std::vector<Matrix<Rat>> inc, proj;
    for (size_t v = 0; v < g.dims.size(); ++v) {
        Matrix<Rat> up(g.dims[v], top.dims[v]);
        up.set_block(0, 0, Matrix<Rat>::identity(top.dims[v]));
        inc.push_back(std::move(up));
        Matrix<Rat> down(bot.dims[v], g.dims[v]);
        down.set_block(0, top.dims[v], Matrix<Rat>::identity(bot.dims[v]));
        proj.push_back(std::move(down));
    }
    CHECK(is_morphism(top, g, inc));
    CHECK(is_morphism(g, bot, proj));
    CHECK(morphism_is_injective(top, inc));
    CHECK(morphism_is_surjective(bot, proj));
    for (size_t v = 0; v < g.dims.size(); ++v) CHECK((proj[v] * inc[v]).is_zero());

    // distinct one-arrow data glue to non-isomorphic modules
    auto unit = [&](size_t a) {
        std::vector<Matrix<Rat>> mats;
        for (size_t i = 0; i < 3; ++i) {
            Matrix<Rat> m(1, 1);
            if (i == a) m.at(0, 0) = Rat(1);
            mats.push_back(std::move(m));
        }
        return Rep<Rat>(q3, f, {1, 1}, mats);
    };
    Rep<Rat> fa = glue(unit(0), ey, ex, zetas), fb = glue(unit(1), ey, ex, zetas);
    CHECK(is_isomorphic(fa, unit(0)));
    CHECK_FALSE(is_isomorphic(fa, fb));

    CHECK_THROWS_WITH(glue(unit(0), ey, ex, {zetas[0]}),
                      ContainsSubstring("Kronecker representation"));
    CHECK_THROWS_WITH(glue(unit(0), ex, ey, zetas), ContainsSubstring("shape mismatch"));
}

TEST_CASE("glued tree bases") {
    FieldInfo f = FieldInfo::Q();
    Quiver a3 = a3_path();
    Rep<Rat> x(a3, f, {0, 0, 1}, {Matrix<Rat>(0, 0), Matrix<Rat>(1, 0)});
    Rep<Rat> y(a3, f, {1, 1, 0}, {Matrix<Rat>::identity(1), Matrix<Rat>(0, 1)});
    auto cx = cert_of(x, idbasis(x));
    auto cy = cert_of(y, idbasis(y));
    auto zetas = choose_elementary_cocycles(x, y, cx, cy);
    REQUIRE(zetas.size() == 1);

    Quiver q1 = kronecker_quiver(1);
    Rep<Rat> t1(q1, f, {1, 1}, {Matrix<Rat>::identity(1)});
    auto ct = cert_of(t1, idbasis(t1));
    TreeCertificate<Rat> glued = glue_tree_basis(ct, cx, cy, zetas);
    CHECK(glued.rep.dims == std::vector<size_t>{1, 1, 1});
    CHECK(glued.gamma.num_nodes() == 3);
    CHECK(glued.gamma.edges.size() == 2);
    CHECK(glued.normalized);
    CHECK(is_isomorphic(glued.rep, extension_from_cocycle(x, y, zetas[0])));

    // a simple gluing datum returns the matching piece
    Rep<Rat> ts = simple_rep<Rat>(q1, f, "y");
    TreeCertificate<Rat> only_x = glue_tree_basis(cert_of(ts, idbasis(ts)), cx, cy, zetas);
    CHECK(only_x.rep.dims == x.dims);
    for (size_t a = 0; a < a3.num_arrows(); ++a)
        CHECK(mat_eq(only_x.rep.mats[a], cx.gamma.transformed[a], f));

    // edge count over the Kronecker simples pair
    Quiver q3 = kronecker_quiver(3);
    Rep<Rat> ey = simple_rep<Rat>(q3, f, "y");
    Rep<Rat> ex = simple_rep<Rat>(q3, f, "x");
    auto kz = choose_elementary_cocycles(ey, ex, cert_of(ey, idbasis(ey)),
                                         cert_of(ex, idbasis(ex)));
    Rep<Rat> p1 = preprojective<Rat>(3, 1, f);
    TreeCertificate<Rat> kcert = glue_tree_basis(cert_of(p1, idbasis(p1)),
                                                 cert_of(ey, idbasis(ey)),
                                                 cert_of(ex, idbasis(ex)), kz);
    // u (dim x - 1) + v (dim y - 1) + (u + v - 1) with simple pieces
    CHECK(kcert.gamma.edges.size() == p1.total_dim() - 1);
    CHECK(is_isomorphic(kcert.rep, p1));

    auto bad = zetas;
    bad[0][1] = bad[0][1].scaled(Rat(2));
    CHECK_THROWS_WITH(glue_tree_basis(ct, cx, cy, bad), ContainsSubstring("not elementary"));

    Rep<Rat> r11 = std_kronecker<Rat>(StdKind::R, 1, f, ProjPoint<Rat>::finite(Rat(1)));
    Quiver q2 = kronecker_quiver(2);
    Rep<Rat> e2y = simple_rep<Rat>(q2, f, "y");
    CHECK_THROWS_WITH(glue_tree_basis(ct, cert_of(r11, idbasis(r11)), cert_of(e2y, idbasis(e2y)),
                                      std::vector<std::vector<Matrix<Rat>>>{}),
                      ContainsSubstring("tree certificates"));
}

TEST_CASE("exceptional tree bases across the recursion") {
    FieldInfo fq = FieldInfo::Q();
    FieldInfo f5 = FieldInfo::Fp(5);
    Quiver q3 = kronecker_quiver(3);

    Rep<Rat> ex = simple_rep<Rat>(q3, fq, "x");
    TreeCertificate<Rat> sc = exceptional_tree_basis(ex);
    CHECK(sc.gamma.num_nodes() == 1);
    CHECK(sc.gamma.edges.empty());
    check_certificate(sc, ex, true);

    Rep<Rat> p1 = preprojective<Rat>(3, 1, fq);
    check_certificate(exceptional_tree_basis(p1), p1, true);

    Rep<Fp> p2 = preprojective<Fp>(3, 2, f5);
    check_certificate(exceptional_tree_basis(p2), p2, true);

    Rep<Rat> i1 = preinjective<Rat>(3, 1, fq);
    check_certificate(exceptional_tree_basis(i1), i1, true);

    Rep<Fp> i2 = preinjective<Fp>(3, 2, f5);
    check_certificate(exceptional_tree_basis(i2), i2, true);

    // three-vertex star, sincere
    Quiver star({"0", "1", "2"}, {{"a", "0", "2"}, {"b", "1", "2"}});
    Rep<Rat> st(star, fq, {1, 1, 1}, {Matrix<Rat>::identity(1), Matrix<Rat>::identity(1)});
    REQUIRE(hom_dim(st, st) == 1);
    REQUIRE(ext_dim(st, st) == 0);
    check_certificate(exceptional_tree_basis(st), st, true);

    // sincere path module
    Quiver a4({"0", "1", "2", "3"}, {{"a", "0", "1"}, {"b", "1", "2"}, {"c", "2", "3"}});
    Rep<Rat> pa(a4, fq, {1, 1, 1, 1},
                {Matrix<Rat>::identity(1), Matrix<Rat>::identity(1), Matrix<Rat>::identity(1)});
    check_certificate(exceptional_tree_basis(pa), pa, true);

    // subspace quiver with three distinct lines: exercises the generic pair
    Quiver d4({"1", "2", "3", "c"}, {{"a", "1", "c"}, {"b", "2", "c"}, {"d", "3", "c"}});
    Rep<Rat> lines(d4, fq, {1, 1, 1, 2},
                   {Matrix<Rat>(2, 1, {Rat(1), Rat(0)}), Matrix<Rat>(2, 1, {Rat(0), Rat(1)}),
                    Matrix<Rat>(2, 1, {Rat(1), Rat(1)})});
    REQUIRE(hom_dim(lines, lines) == 1);
    REQUIRE(ext_dim(lines, lines) == 0);
    check_certificate(exceptional_tree_basis(lines), lines, true);

    // non-full support: certificate lives on the ambient quiver
    Quiver amb({"x", "y", "z"}, {{"a1", "x", "y"}, {"a2", "x", "y"}, {"a3", "x", "y"}});
    Rep<Rat> part = detail::embed_from_subquiver(preprojective<Rat>(3, 1, fq), amb);
    TreeCertificate<Rat> ac = exceptional_tree_basis(part);
    CHECK(ac.rep.quiver == amb);
    CHECK(ac.basis[amb.vertex_index("z")].rows() == 0);
    check_certificate(ac, part, true);
}

TEST_CASE("exceptional tree basis argument checks") {
    FieldInfo f = FieldInfo::Q();
    Rep<Rat> r11 = std_kronecker<Rat>(StdKind::R, 1, f, ProjPoint<Rat>::finite(Rat(1)));
    CHECK_THROWS_WITH(exceptional_tree_basis(r11), ContainsSubstring("not exceptional"));

    Quiver q2 = kronecker_quiver(2);
    Rep<Rat> ds = direct_sum(simple_rep<Rat>(q2, f, "x"), simple_rep<Rat>(q2, f, "x"));
    CHECK_THROWS_WITH(exceptional_tree_basis(ds), ContainsSubstring("not exceptional"));

    Quiver loop({"u"}, {{"l", "u", "u"}});
    Rep<Rat> lm(loop, f, {1}, {Matrix<Rat>(1, 1)});
    CHECK_THROWS_WITH(exceptional_tree_basis(lm), ContainsSubstring("support has a cycle"));

    Quiver cyc({"u", "w"}, {{"a", "u", "w"}, {"b", "w", "u"}});
    Rep<Rat> cm(cyc, f, {1, 1}, {Matrix<Rat>::identity(1), Matrix<Rat>(1, 1)});
    CHECK_THROWS_WITH(exceptional_tree_basis(cm), ContainsSubstring("support has a cycle"));
}

TEST_CASE("exceptional tree basis at larger preprojectives") {
    FieldInfo f5 = FieldInfo::Fp(5);
    Rep<Fp> p3 = preprojective<Fp>(3, 3, f5);
    REQUIRE(p3.total_dim() == 29);
    TreeCertificate<Fp> c = exceptional_tree_basis(p3);
    CHECK(c.gamma.edges.size() == 28);
    check_certificate(c, p3, true);
}
