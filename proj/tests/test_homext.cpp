#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qrep/homext.hpp"
#include "qrep/rep.hpp"

using namespace qrep;

namespace {

// Indecomposable (1,1) representation of the 3-Kronecker quiver with arrow
// values (1,0,0).
Rep<Rat> one_one_rep() {
    Quiver q = kronecker_quiver(3);
    Matrix<Rat> a(1, 1, {Rat(1)});
    Matrix<Rat> z(1, 1, {Rat(0)});
    return Rep<Rat>(q, FieldInfo::Q(), {1, 1}, {a, z, z});
}

}  // namespace

TEST_CASE("hom and ext between Kronecker simples") {
    Quiver q = kronecker_quiver(3);
    Rep<Rat> ex = simple_rep<Rat>(q, FieldInfo::Q(), "x");
    Rep<Rat> ey = simple_rep<Rat>(q, FieldInfo::Q(), "y");
    CHECK(hom_dim(ex, ex) == 1);
    CHECK(hom_dim(ex, ey) == 0);
    CHECK(hom_dim(ey, ex) == 0);
    CHECK(ext_dim(ex, ey) == 3);
    CHECK(ext_dim(ey, ex) == 0);
    CHECK(ext_dim(ex, ex) == 0);
    CHECK(hom_basis(ex, ex).size() == 1);
    CHECK(ext_space(ex, ey).dim() == 3);
}

TEST_CASE("euler form equals hom minus ext") {
    Quiver q({"0", "1", "2"}, {{"a", "0", "1"}, {"b", "0", "1"}, {"c", "1", "2"}});
    FieldInfo f5 = FieldInfo::Fp(5);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<size_t> dn, dm;
        for (int v = 0; v < 3; ++v) {
            dn.push_back(rng() % 4);
            dm.push_back(rng() % 4);
        }
        Rep<Fp> n = random_rep<Fp>(q, f5, dn, rng);
        Rep<Fp> m = random_rep<Fp>(q, f5, dm, rng);
        long long lhs = static_cast<long long>(hom_dim(n, m)) -
                        static_cast<long long>(ext_dim(n, m));
        CHECK(lhs == euler_form(q, dim_vector(n), dim_vector(m)));
    }
}

TEST_CASE("hom basis elements are morphisms") {
    Quiver q = kronecker_quiver(2);
    std::mt19937_64 rng(33);
    Rep<Fp> n = random_rep<Fp>(q, FieldInfo::Fp(7), {2, 3}, rng);
    Rep<Fp> m = random_rep<Fp>(q, FieldInfo::Fp(7), {3, 2}, rng);
    for (const auto& f : hom_basis(n, m)) CHECK(is_morphism(n, m, f));
    CHECK(hom_basis(n, m).size() == hom_dim(n, m));
}

TEST_CASE("extension from a cocycle gives a short exact sequence") {
    Quiver q = kronecker_quiver(3);
    Rep<Rat> ex = simple_rep<Rat>(q, FieldInfo::Q(), "x");
    Rep<Rat> ey = simple_rep<Rat>(q, FieldInfo::Q(), "y");
    std::vector<Matrix<Rat>> delta{Matrix<Rat>(1, 1, {Rat(1)}), Matrix<Rat>(1, 1),
                                   Matrix<Rat>(1, 1)};
    Rep<Rat> x = extension_from_cocycle(ey, ex, delta);
    CHECK(x == one_one_rep());

    // Canonical inclusion of the sub and projection onto the quotient.
    std::vector<Matrix<Rat>> incl, proj;
    for (size_t v = 0; v < 2; ++v) {
        Matrix<Rat> i(x.dims[v], ey.dims[v]);
        i.set_block(0, 0, Matrix<Rat>::identity(ey.dims[v]));
        incl.push_back(i);
        Matrix<Rat> p(ex.dims[v], x.dims[v]);
        p.set_block(0, ey.dims[v], Matrix<Rat>::identity(ex.dims[v]));
        proj.push_back(p);
    }
    CHECK(is_morphism(ey, x, incl));
    CHECK(is_morphism(x, ex, proj));
    CHECK(morphism_is_injective(ey, incl));
    CHECK(morphism_is_surjective(ex, proj));

    SECTION("nonzero class, and representative coordinates") {
        CHECK_FALSE(ext_class_is_zero(ex, ey, delta));
        ExtSpace<Rat> e = ext_space(ex, ey);
        auto c = ext_coords(e, delta);
        REQUIRE(c.size() == 3);
        CHECK(c[0] == Rat(1));
        CHECK(c[1] == Rat(0));
        CHECK(c[2] == Rat(0));
        auto z = ext_coords(e, {Matrix<Rat>(1, 1), Matrix<Rat>(1, 1), Matrix<Rat>(1, 1)});
        CHECK((z[0].is_zero() && z[1].is_zero() && z[2].is_zero()));
    }
}

TEST_CASE("coboundaries have zero class") {
    Quiver q = kronecker_quiver(2);
    std::mt19937_64 rng(55);
    Rep<Fp> n = random_rep<Fp>(q, FieldInfo::Fp(5), {2, 2}, rng);
    Rep<Fp> m = random_rep<Fp>(q, FieldInfo::Fp(5), {2, 2}, rng);
    // d(f) for an arbitrary tuple f of vertex maps.
    std::vector<Matrix<Fp>> f;
    for (size_t v = 0; v < 2; ++v) {
        Matrix<Fp> fv(m.dims[v], n.dims[v]);
        for (size_t i = 0; i < fv.rows(); ++i)
            for (size_t j = 0; j < fv.cols(); ++j)
                fv.at(i, j) = Fp(static_cast<long long>(rng() % 5), 5);
        f.push_back(fv);
    }
    std::vector<Matrix<Fp>> cob;
    for (size_t a = 0; a < 2; ++a) {
        size_t s = q.src_index(a), t = q.tgt_index(a);
        cob.push_back(m.mats[a] * f[s] - f[t] * n.mats[a]);
    }
    CHECK(ext_class_is_zero(n, m, cob));
    Rep<Fp> x = extension_from_cocycle(m, n, cob);
    CHECK(x.total_dim() == m.total_dim() + n.total_dim());
}

TEST_CASE("ext representatives are elementary") {
    Quiver q = kronecker_quiver(3);
    std::mt19937_64 rng(77);
    Rep<Fp> n = random_rep<Fp>(q, FieldInfo::Fp(5), {1, 2}, rng);
    Rep<Fp> m = random_rep<Fp>(q, FieldInfo::Fp(5), {2, 1}, rng);
    ExtSpace<Fp> e = ext_space(n, m);
    for (const auto& rep : e.reps) {
        size_t ones = 0, others = 0;
        for (const auto& mat : rep)
            for (size_t i = 0; i < mat.rows(); ++i)
                for (size_t j = 0; j < mat.cols(); ++j) {
                    if (mat.at(i, j).is_one()) ++ones;
                    else if (!mat.at(i, j).is_zero()) ++others;
                }
        CHECK(ones == 1);
        CHECK(others == 0);
    }
}

TEST_CASE("kernel and cokernel of morphisms") {
    Rep<Rat> x = one_one_rep();
    Quiver q = x.quiver;
    Rep<Rat> ex = simple_rep<Rat>(q, FieldInfo::Q(), "x");
    Rep<Rat> ey = simple_rep<Rat>(q, FieldInfo::Q(), "y");
    std::vector<Matrix<Rat>> proj{Matrix<Rat>(1, 1, {Rat(1)}), Matrix<Rat>(0, 1)};
    REQUIRE(is_morphism(x, ex, proj));
    auto [ker, incl] = kernel_of_morphism(x, ex, proj);
    CHECK(ker.dims == ey.dims);
    CHECK(is_morphism(ker, x, incl));

    std::vector<Matrix<Rat>> inc{Matrix<Rat>(1, 0), Matrix<Rat>(1, 1, {Rat(1)})};
    REQUIRE(is_morphism(ey, x, inc));
    auto [cok, pr] = cokernel_of_morphism(ey, x, inc);
    CHECK(cok.dims == ex.dims);
    CHECK(is_morphism(x, cok, pr));
    CHECK(morphism_is_surjective(cok, pr));
    // proj kills the image.
    for (size_t v = 0; v < 2; ++v) CHECK((pr[v] * inc[v]).is_zero());
}

TEST_CASE("universal hom evaluation") {
    Rep<Rat> x = one_one_rep();
    Rep<Rat> ey = simple_rep<Rat>(x.quiver, FieldInfo::Q(), "y");
    UniversalHom<Rat> u = universal_hom(ey, x);
    CHECK(u.copies == 1);
    CHECK(u.source.dims == ey.dims);
    CHECK(is_morphism(u.source, x, u.map));

    // Hom(E_x, X) = 0, so the universal map has an empty source.
    Rep<Rat> ex = simple_rep<Rat>(x.quiver, FieldInfo::Q(), "x");
    UniversalHom<Rat> v = universal_hom(ex, x);
    CHECK(v.copies == 0);
    CHECK(v.source.total_dim() == 0);

    // Sources with a larger endomorphism ring are refused.
    CHECK_THROWS_WITH(universal_hom(direct_sum(ey, ey), x),
                      Catch::Matchers::ContainsSubstring("End dimension"));
}

TEST_CASE("projective representations by path bases") {
    Quiver q({"0", "1", "2"}, {{"a", "0", "1"}, {"b", "0", "1"}, {"c", "1", "2"}});
    FieldInfo f5 = FieldInfo::Fp(5);
    Rep<Fp> p0 = projective_rep<Fp>(q, f5, "0");
    CHECK(p0.dims == std::vector<size_t>{1, 2, 2});
    Rep<Fp> p1 = projective_rep<Fp>(q, f5, "1");
    CHECK(p1.dims == std::vector<size_t>{0, 1, 1});
    Rep<Fp> p2 = projective_rep<Fp>(q, f5, "2");
    CHECK(p2.dims == std::vector<size_t>{0, 0, 1});

    // Hom(P_v, M) is the fiber of M at v and projectives have no Ext.
    std::mt19937_64 rng(1729);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<size_t> dm{rng() % 4, rng() % 4, rng() % 4};
        Rep<Fp> m = random_rep<Fp>(q, f5, dm, rng);
        size_t v = 0;
        for (const auto& pv : {p0, p1, p2}) {
            CHECK(hom_dim(pv, m) == dm[v]);
            CHECK(ext_dim(pv, m) == 0);
            ++v;
        }
    }

    // The path algebra representation and Hom(A, M) = dim M.
    Rep<Fp> alg = algebra_rep<Fp>(q, f5);
    CHECK(alg.total_dim() == 8);
    Rep<Fp> m = random_rep<Fp>(q, f5, {2, 1, 2}, rng);
    CHECK(hom_dim(alg, m) == m.total_dim());
    CHECK(ext_dim(alg, m) == 0);

    // Kronecker: the source projective carries the arrows as unit columns.
    Rep<Rat> px = projective_rep<Rat>(kronecker_quiver(3), FieldInfo::Q(), "x");
    CHECK(px.dims == std::vector<size_t>{1, 3});
    for (size_t a = 0; a < 3; ++a) CHECK(rank(px.mats[a]) == 1);
    CHECK(rank(hstack(hstack(px.mats[0], px.mats[1]), px.mats[2])) == 3);

    Quiver loop({"0"}, {{"l", "0", "0"}});
    CHECK_THROWS_WITH(projective_rep<Rat>(loop, FieldInfo::Q(), "0"),
                      Catch::Matchers::ContainsSubstring("cycle"));
}

TEST_CASE("minimal universal extension") {
    Quiver q = kronecker_quiver(3);
    FieldInfo f = FieldInfo::Q();
    Rep<Rat> ex = simple_rep<Rat>(q, f, "x");
    Rep<Rat> ey = simple_rep<Rat>(q, f, "y");
    Rep<Rat> alg = algebra_rep<Rat>(q, f);

    // No extensions against a projective: the middle term is y itself.
    Rep<Rat> px = projective_rep<Rat>(q, f, "x");
    UniversalExtension<Rat> triv = minimal_universal_extension_by(px, ey);
    CHECK(triv.copies == 0);
    CHECK(triv.total.dims == ey.dims);

    // The sink simple is projective, so extending the algebra by it splits.
    UniversalExtension<Rat> split = minimal_universal_extension_by(ey, alg);
    CHECK(split.copies == 0);
    CHECK(split.total.dims == alg.dims);

    // The source simple against the algebra: dim Ext^1(E_x, A) = 11.
    UniversalExtension<Rat> ue = minimal_universal_extension_by(ex, alg);
    CHECK(ue.copies == 11);
    CHECK(ue.total.dims == std::vector<size_t>{12, 4});
    REQUIRE(is_morphism(alg, ue.total, ue.inc));
    Rep<Rat> target = direct_power(ex, ue.copies);
    REQUIRE(is_morphism(ue.total, target, ue.proj));
    CHECK(morphism_is_injective(alg, ue.inc));
    CHECK(morphism_is_surjective(target, ue.proj));
    for (size_t v = 0; v < 2; ++v) CHECK((ue.proj[v] * ue.inc[v]).is_zero());
    // Universality makes the connecting map onto, so Ext^1(E_x, total) dies.
    CHECK(ext_dim(ex, ue.total) == 0);

    CHECK_THROWS_WITH(minimal_universal_extension_by(direct_sum(ex, ex), ey),
                      Catch::Matchers::ContainsSubstring("not exceptional"));
}

TEST_CASE("endomorphism algebras") {
    Rep<Rat> x = one_one_rep();
    EndAlgebra<Rat> e = end_algebra(x);
    CHECK(e.dim() == 1);

    Rep<Rat> ex = simple_rep<Rat>(x.quiver, FieldInfo::Q(), "x");
    EndAlgebra<Rat> e2 = end_algebra(direct_sum(ex, ex));
    CHECK(e2.dim() == 4);

    auto id = identity_morphism(x);
    auto c = e.coords(id);
    REQUIRE(c.size() == 1);
    auto back = e.element(c);
    CHECK(back == id);
}

TEST_CASE("induced subrepresentation") {
    Rep<Rat> x = one_one_rep();
    std::vector<Matrix<Rat>> sub{Matrix<Rat>(1, 0), Matrix<Rat>(1, 1, {Rat(1)})};
    Rep<Rat> s = induced_subrep(x, sub);
    CHECK(s.dims == std::vector<size_t>{0, 1});

    // The x coordinate line is not invariant.
    std::vector<Matrix<Rat>> bad{Matrix<Rat>(1, 1, {Rat(1)}), Matrix<Rat>(1, 0)};
    CHECK_THROWS_AS(induced_subrep(x, bad), std::invalid_argument);
}

TEST_CASE("sparse rank agrees with dense elimination") {
    Quiver loopy({"0", "1"}, {{"a", "0", "1"}, {"b", "0", "1"}, {"c", "0", "0"}});
    Quiver q3 = kronecker_quiver(3);
    std::mt19937_64 rng(4096);
    for (int trial = 0; trial < 20; ++trial) {
        const Quiver& q = trial % 2 ? loopy : q3;
        std::vector<size_t> dn, dm;
        for (size_t v = 0; v < q.num_vertices(); ++v) {
            dn.push_back(rng() % 5);
            dm.push_back(rng() % 5);
        }
        if (trial % 3) {
            FieldInfo f5 = FieldInfo::Fp(5);
            Rep<Fp> n = random_rep<Fp>(q, f5, dn, rng);
            Rep<Fp> m = random_rep<Fp>(q, f5, dm, rng);
            CochainLayout<Fp> lay(n, m);
            CHECK(detail::sparse_differential_rank(n, m, lay) ==
                  rank(hom_differential(n, m)));
        } else {
            FieldInfo f = FieldInfo::Q();
            Rep<Rat> n = random_rep<Rat>(q, f, dn, rng);
            Rep<Rat> m = random_rep<Rat>(q, f, dm, rng);
            CochainLayout<Rat> lay(n, m);
            CHECK(detail::sparse_differential_rank(n, m, lay) ==
                  rank(hom_differential(n, m)));
        }
    }
}
