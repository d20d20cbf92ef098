#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <random>

#include "loopcoh/basealg.hpp"

using namespace loopcoh;

namespace {

/// F2[x] with |x| = 2 (the cohomology of infinite complex projective space).
std::unique_ptr<AlgebraPresentation> f2_x(int trunc = 24) {
    return std::make_unique<AlgebraPresentation>(2, std::vector<GenDecl>{{"x", 2, 0}}, trunc);
}

Class random_class(std::mt19937& rng, const AlgebraPresentation& A, int degree) {
    std::uniform_int_distribution<int> coeff(0, static_cast<int>(A.prime()) - 1);
    Class acc(&A, degree);
    for (int i = 0; i < A.dim(degree); ++i)
        acc = acc + Class::basis_element(A, degree, i).scaled(Scalar::of(A.prime(), coeff(rng)));
    return acc;
}

} // namespace

TEST_CASE("monomial bases on the stated examples") {
    SECTION("F2[x], |x| = 2, degree 6") {
        auto A = f2_x();
        const auto& b = A->monomial_basis(6);
        REQUIRE(b.size() == 1);
        REQUIRE(b[0] == Monomial{3});
    }
    SECTION("F2[x,y], |x| = 2, |y| = 4, degree 8: graded-lex order") {
        AlgebraPresentation A(2, {{"x", 2, 0}, {"y", 4, 0}}, 16);
        const auto& b = A.monomial_basis(8);
        REQUIRE(b.size() == 3);
        REQUIRE(b[0] == Monomial{4, 0});
        REQUIRE(b[1] == Monomial{2, 1});
        REQUIRE(b[2] == Monomial{0, 2});
        REQUIRE(A.monomial_str(b[1]) == "x^2*y");
    }
    SECTION("exterior generator of degree 3: z^2 = 0") {
        AlgebraPresentation A(2, {{"z", 3, 2}}, 12);
        REQUIRE(A.monomial_basis(6).empty());
        REQUIRE(A.monomial_basis(3).size() == 1);
    }
    SECTION("degree beyond the truncation") {
        auto A = f2_x(10);
        REQUIRE_THROWS_AS(A->monomial_basis(11), std::invalid_argument);
        REQUIRE(A->dim(-3) == 0);
    }
}

TEST_CASE("products on the stated examples") {
    SECTION("x * x in F2[x]") {
        auto A = f2_x();
        Class x = Class::generator(*A, 0);
        Class x2 = x * x;
        REQUIRE(x2.degree() == 4);
        REQUIRE(x2 == Class::basis_element(*A, 4, 0));
    }
    SECTION("odd times odd at p = 3 is forced to zero") {
        AlgebraPresentation A(3, {{"z", 3, 2}}, 12);
        Class z = Class::generator(A, 0);
        REQUIRE((z * z).is_zero());
    }
    SECTION("x * y lands on the right basis index") {
        AlgebraPresentation A(2, {{"x", 2, 0}, {"y", 4, 0}}, 16);
        Class xy = Class::generator(A, 0) * Class::generator(A, 1);
        REQUIRE(xy.degree() == 6);
        int idx = A.monomial_index(6, Monomial{1, 1});
        REQUIRE(idx >= 0);
        REQUIRE(xy == Class::basis_element(A, 6, idx));
    }
    SECTION("Koszul sign: odd generators anticommute at p = 3") {
        AlgebraPresentation A(3, {{"a", 3, 2}, {"b", 5, 2}}, 16);
        Class a = Class::generator(A, 0), b = Class::generator(A, 1);
        REQUIRE(a * b == -(b * a));
    }
}

TEST_CASE("Steenrod operations on the stated examples") {
    SECTION("Sq^2 on powers of the degree-2 class: binomial closed form") {
        auto A = f2_x(30);
        for (int m = 1; m <= 8; ++m) {
            Class xm = Class::unit(*A);
            Class x = Class::generator(*A, 0);
            for (int i = 0; i < m; ++i) xm = xm * x;
            Class lhs = steenrod(SteenrodOp{OpKind::Sq, 2}, xm);
            // binom(m, 1) x^{m+1} mod 2
            Class rhs = Class(&*A, 2 * m + 2);
            if (m % 2 == 1) rhs = Class::basis_element(*A, 2 * m + 2, 0);
            REQUIRE(lhs == rhs);
        }
    }
    SECTION("P^1 x = x^p for |x| = 2 at odd p") {
        for (std::uint32_t p : {3u, 5u}) {
            AlgebraPresentation A(p, {{"x", 2, 0}}, 2 * static_cast<int>(p) + 4);
            Class x = Class::generator(A, 0);
            Class lhs = steenrod(SteenrodOp{OpKind::P, 1}, x);
            Class rhs = Class::unit(A);
            for (std::uint32_t i = 0; i < p; ++i) rhs = rhs * x;
            REQUIRE(lhs == rhs);
            REQUIRE(!lhs.is_zero());
        }
    }
    SECTION("Sq^0 is the identity on random classes") {
        std::mt19937 rng(5);
        auto A = f2_x();
        for (int iter = 0; iter < 50; ++iter) {
            Class c = random_class(rng, *A, 2 * (iter % 8));
            REQUIRE(steenrod(SteenrodOp{OpKind::Sq, 0}, c) == c);
        }
    }
    SECTION("negative index is rejected") {
        auto A = f2_x();
        REQUIRE_THROWS_AS(steenrod(SteenrodOp{OpKind::Sq, -1}, Class::unit(*A)),
                          std::invalid_argument);
    }
}

TEST_CASE("Cartan formula as a property") {
    std::mt19937 rng(31337);
    SECTION("p = 2 with a nontrivial table") {
        SteenrodTables t;
        t.sq["y"][2] = {{{3, 0}, 1}};  // Sq^2 y = x^3, degree-consistent but arbitrary
        AlgebraPresentation A(2, {{"x", 2, 0}, {"y", 4, 0}}, 40, t);
        for (int iter = 0; iter < 100; ++iter) {
            int da = 2 + 2 * (iter % 3), db = 2 + 2 * (iter % 4);
            Class a = random_class(rng, A, da), b = random_class(rng, A, db);
            for (int total = 0; total <= 8; ++total) {
                Class lhs = steenrod(SteenrodOp{OpKind::Sq, total}, a * b);
                Class rhs(&A, da + db + total);
                for (int i = 0; i <= total; ++i)
                    rhs = rhs + steenrod(SteenrodOp{OpKind::Sq, i}, a) *
                                    steenrod(SteenrodOp{OpKind::Sq, total - i}, b);
                REQUIRE(lhs == rhs);
            }
        }
    }
    SECTION("p = 3 with the quaternionic table") {
        SteenrodTables t;
        t.pow["y"][1] = {{{2}, 2}};  // P^1 y = 2 y^2
        AlgebraPresentation A(3, {{"y", 4, 0}}, 60, t);
        for (int iter = 0; iter < 100; ++iter) {
            int da = 4 * (1 + iter % 2), db = 4 * (1 + iter % 3);
            Class a = random_class(rng, A, da), b = random_class(rng, A, db);
            for (int total = 0; total <= 4; ++total) {
                Class lhs = steenrod(SteenrodOp{OpKind::P, total}, a * b);
                Class rhs(&A, da + db + 4 * total);
                for (int i = 0; i <= total; ++i)
                    rhs = rhs + steenrod(SteenrodOp{OpKind::P, i}, a) *
                                    steenrod(SteenrodOp{OpKind::P, total - i}, b);
                REQUIRE(lhs == rhs);
            }
        }
    }
    SECTION("the Bockstein is a signed derivation") {
        SteenrodTables t;
        t.beta["y"] = {{{0, 1}, 1}};  // beta y = z
        AlgebraPresentation A(3, {{"y", 4, 0}, {"z", 5, 2}}, 40, t);
        for (int iter = 0; iter < 100; ++iter) {
            int da = 4 + (iter % 2) * 5, db = 4 + (iter % 3 == 0 ? 5 : 0);
            Class a = random_class(rng, A, da), b = random_class(rng, A, db);
            Class lhs = steenrod(SteenrodOp{OpKind::Bockstein, 0}, a * b);
            Class rhs = steenrod(SteenrodOp{OpKind::Bockstein, 0}, a) * b;
            Class cross = a * steenrod(SteenrodOp{OpKind::Bockstein, 0}, b);
            rhs = rhs + (da % 2 == 1 ? -cross : cross);
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("instability holds on every generator") {
    SteenrodTables t2;
    t2.sq["y"][2] = {{{3, 0}, 1}};
    AlgebraPresentation A2(2, {{"x", 2, 0}, {"y", 4, 0}}, 40, t2);
    for (int g = 0; g < 2; ++g) {
        const int dg = A2.generators()[g].degree;
        Class gen = Class::generator(A2, g);
        REQUIRE(steenrod(SteenrodOp{OpKind::Sq, dg}, gen) == gen * gen);
        for (int i = dg + 1; i <= dg + 4; ++i)
            REQUIRE(steenrod(SteenrodOp{OpKind::Sq, i}, gen).is_zero());
    }
    AlgebraPresentation A3(3, {{"y", 4, 0}}, 60);
    Class y = Class::generator(A3, 0);
    REQUIRE(steenrod(SteenrodOp{OpKind::P, 2}, y) == y * y * y);
    REQUIRE(steenrod(SteenrodOp{OpKind::P, 3}, y).is_zero());
}

TEST_CASE("squaring is additive at p = 2") {
    std::mt19937 rng(17);
    auto A = f2_x(40);
    for (int iter = 0; iter < 100; ++iter) {
        int d = 2 * (1 + iter % 5);
        Class a = random_class(rng, *A, d), b = random_class(rng, *A, d);
        REQUIRE((a + b) * (a + b) == a * a + b * b);
    }
}

TEST_CASE("nilpotent detection") {
    REQUIRE(is_nilpotent_free(*f2_x()));
    AlgebraPresentation trunc4(2, {{"x", 2, 4}}, 12);
    REQUIRE_FALSE(is_nilpotent_free(trunc4));
    AlgebraPresentation odd3(3, {{"z", 3, 2}}, 12);
    REQUIRE_FALSE(is_nilpotent_free(odd3));
}

TEST_CASE("presentation validation") {
    SECTION("odd-degree polynomial generators are rejected away from p = 2") {
        REQUIRE_THROWS_AS(AlgebraPresentation(3, {{"z", 3, 0}}, 12), schema_error);
        REQUIRE_THROWS_AS(AlgebraPresentation(0, {{"z", 3, 0}}, 12), schema_error);
        REQUIRE_NOTHROW(AlgebraPresentation(2, {{"z", 3, 0}}, 12));
    }
    SECTION("duplicate names, bad degrees, bad heights") {
        REQUIRE_THROWS_AS(AlgebraPresentation(2, {{"x", 2, 0}, {"x", 4, 0}}, 12), schema_error);
        REQUIRE_THROWS_AS(AlgebraPresentation(2, {{"x", 0, 0}}, 12), schema_error);
        REQUIRE_THROWS_AS(AlgebraPresentation(2, {{"x", 2, 1}}, 12), schema_error);
    }
    SECTION("Steenrod tables are checked for degree consistency") {
        SteenrodTables bad;
        bad.sq["x"][1] = {{{1}, 1}};  // Sq^1 x should have degree 3, x has degree 2
        REQUIRE_THROWS_AS(AlgebraPresentation(2, {{"x", 2, 0}}, 12, bad), schema_error);
        SteenrodTables out_of_range;
        out_of_range.sq["x"][2] = {{{2}, 1}};  // Sq^2 x is forced by instability
        REQUIRE_THROWS_AS(AlgebraPresentation(2, {{"x", 2, 0}}, 12, out_of_range), schema_error);
        SteenrodTables wrong_prime;
        wrong_prime.pow["x"][1] = {{{2}, 1}};
        REQUIRE_THROWS_AS(AlgebraPresentation(2, {{"x", 2, 0}}, 12, wrong_prime), schema_error);
        SteenrodTables unknown_gen;
        unknown_gen.sq["w"][1] = {};
        REQUIRE_THROWS_AS(AlgebraPresentation(2, {{"x", 2, 0}}, 12, unknown_gen), schema_error);
    }
    SECTION("non-prime characteristic") {
        REQUIRE_THROWS_AS(AlgebraPresentation(6, {{"x", 2, 0}}, 12), schema_error);
    }
}

TEST_CASE("class serialization round trip") {
    AlgebraPresentation A(3, {{"y", 4, 0}, {"z", 5, 2}}, 20);
    Class c = Class::generator(A, 0) * Class::generator(A, 0) +
              Class::generator(A, 0).scaled(Scalar::of(3, 2)) * Class::zero(A, 4);
    RawClass raw = c.to_raw();
    Class back = Class::from_raw(A, c.degree(), raw, "test");
    REQUIRE(back == c);
    REQUIRE(Class::from_raw(A, 9, {{{1, 1}, 2}}, "test").str() == "2*y*z");
}
