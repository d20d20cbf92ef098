#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "loopcoh/series.hpp"

using namespace loopcoh;

namespace {

/// Oracle: number of ordered sequences of parts, each part drawn from a
/// multiset of allowed degrees, with the given sum. Counts compositions by
/// exhaustive recursion; independent of the series code.
Integer count_compositions(const std::vector<std::pair<int, Integer>>& parts, int sum) {
    if (sum == 0) return 1;
    Integer acc = 0;
    for (const auto& [d, mult] : parts)
        if (d <= sum) acc += mult * count_compositions(parts, sum - d);
    return acc;
}

/// Oracle: dimension count by brute-force monomial enumeration for a set of
/// generators with shape-bounded exponents.
struct BruteGen {
    int degree;
    int max_exp;  // -1 = unbounded
};

void brute_rec(const std::vector<BruteGen>& gens, std::size_t i, int remaining,
               std::vector<Integer>& dims) {
    if (i == gens.size()) {
        ++dims[static_cast<std::size_t>(remaining)];
        return;
    }
    // `remaining` counts the degree budget still available
    int cap = remaining / gens[i].degree;
    if (gens[i].max_exp >= 0) cap = std::min(cap, gens[i].max_exp);
    for (int e = 0; e <= cap; ++e)
        brute_rec(gens, i + 1, remaining - e * gens[i].degree, dims);
}

/// dims[d] = number of monomials of total degree exactly d <= n.
std::vector<Integer> brute_force_dims(const std::vector<BruteGen>& gens, int n) {
    std::vector<Integer> budget(static_cast<std::size_t>(n) + 1, 0);
    brute_rec(gens, 0, n, budget);
    // budget[r] counts monomials of degree n - r
    std::vector<Integer> dims(static_cast<std::size_t>(n) + 1, 0);
    for (int r = 0; r <= n; ++r) dims[static_cast<std::size_t>(n - r)] = budget[static_cast<std::size_t>(r)];
    return dims;
}

std::vector<BruteGen> gens_for(const GeneratorCounts& g) {
    std::vector<BruteGen> out;
    for (const auto& [d, c] : g.counts) {
        int max_exp = -1;
        Shape eff = g.shape;
        if (eff == Shape::RationalMixed) eff = (d % 2 == 0) ? Shape::Polynomial : Shape::Exterior;
        if (eff == Shape::Exterior) max_exp = 1;
        if (eff == Shape::TruncatedHeightP) max_exp = static_cast<int>(g.prime) - 1;
        REQUIRE(c.fits_slong_p());
        for (long i = 0; i < c.get_si(); ++i) out.push_back({d, max_exp});
    }
    return out;
}

} // namespace

TEST_CASE("series product on the stated examples") {
    SECTION("(1 + t^2)^2 = 1 + 2t^2 + t^4") {
        PoincareSeries a(6);
        a.set(0, 1); a.set(2, 1);
        PoincareSeries sq = a * a;
        REQUIRE(sq.at(0) == 1);
        REQUIRE(sq.at(2) == 2);
        REQUIRE(sq.at(4) == 1);
        REQUIRE(sq.at(6) == 0);
    }
    SECTION("multiplication by one is the identity") {
        PoincareSeries a(8);
        a.set(0, 1); a.set(3, 5); a.set(7, 2);
        REQUIRE(a * PoincareSeries::one(8) == a);
    }
    SECTION("1/(1-t^2) times (1-t^2) is 1, checked by direct convolution") {
        const int n = 20;
        PoincareSeries g(n);
        for (int d = 2; d <= n; d += 2) g.set(d, 1);  // t^2 + t^4 + ... = t^2/(1-t^2)
        PoincareSeries inv = geometric_series(PoincareSeries::monomial(2, n));
        PoincareSeries one_minus(n);
        one_minus.set(0, 1);
        one_minus.set(2, -1);
        PoincareSeries prod = inv * one_minus;
        // direct convolution oracle
        for (int d = 0; d <= n; ++d) {
            Integer conv = 0;
            for (int i = 0; i <= d; ++i) conv += inv.at(i) * one_minus.at(d - i);
            REQUIRE(prod.at(d) == conv);
        }
        REQUIRE(prod == PoincareSeries::one(n));
    }
    SECTION("results beyond the truncation are not reported") {
        PoincareSeries a(4);
        REQUIRE_THROWS_AS(a.at(5), std::out_of_range);
        REQUIRE_THROWS_AS(a.at(-1), std::out_of_range);
    }
    SECTION("mismatched truncations are rejected") {
        REQUIRE_THROWS_AS(PoincareSeries::one(4) * PoincareSeries::one(5), std::invalid_argument);
    }
}

TEST_CASE("geometric series on the stated examples") {
    SECTION("g = t^2 + t^4 + ... at N = 8: composition counts 2^{m-1}") {
        PoincareSeries g(8);
        for (int d = 2; d <= 8; d += 2) g.set(d, 1);
        PoincareSeries h = geometric_series(g);
        // oracle: compositions of m into parts >= 1 (after halving degrees)
        std::vector<std::pair<int, Integer>> parts;
        for (int d = 2; d <= 8; d += 2) parts.emplace_back(d, 1);
        for (int d = 0; d <= 8; ++d) REQUIRE(h.at(d) == count_compositions(parts, d));
        REQUIRE(h.at(0) == 1);
        REQUIRE(h.at(2) == 1);
        REQUIRE(h.at(4) == 2);
        REQUIRE(h.at(6) == 4);
        REQUIRE(h.at(8) == 8);
    }
    SECTION("g = 0") {
        REQUIRE(geometric_series(PoincareSeries(10)) == PoincareSeries::one(10));
    }
    SECTION("g = t^2 + t^6 at N = 8: ordered sequences from {2, 6}") {
        PoincareSeries g(8);
        g.set(2, 1); g.set(6, 1);
        PoincareSeries h = geometric_series(g);
        std::vector<std::pair<int, Integer>> parts{{2, 1}, {6, 1}};
        for (int d = 0; d <= 8; ++d) REQUIRE(h.at(d) == count_compositions(parts, d));
        const long expected[] = {1, 0, 1, 0, 1, 0, 2, 0, 3};
        for (int d = 0; d <= 8; ++d) REQUIRE(h.at(d) == expected[d]);
    }
    SECTION("nonzero constant term is an error") {
        REQUIRE_THROWS_AS(geometric_series(PoincareSeries::one(4)), std::invalid_argument);
    }
}

TEST_CASE("invert_generators on the stated examples") {
    SECTION("free algebra on one even generator per degree, polynomial shape") {
        const int n = 12;
        PoincareSeries g(n);
        for (int d = 2; d <= n; d += 2) g.set(d, 1);
        GeneratorCounts counts = invert_generators(geometric_series(g), Shape::Polynomial, 2);
        REQUIRE(counts.counts.at(2) == 1);
        REQUIRE(counts.counts.at(4) == 1);
        REQUIRE(counts.counts.at(6) == 2);
        REQUIRE(counts.counts.at(8) == 3);
        // brute-force monomial oracle
        std::vector<Integer> dims = brute_force_dims(gens_for(counts), n);
        PoincareSeries target = geometric_series(g);
        for (int d = 0; d <= n; ++d) REQUIRE(dims[static_cast<std::size_t>(d)] == target.at(d));
    }
    SECTION("exterior shape against sparse letters") {
        const int n = 12;
        PoincareSeries g(n);
        for (int d = 2; d <= n; d += 4) g.set(d, 1);  // t^2 + t^6 + t^10
        GeneratorCounts counts = invert_generators(geometric_series(g), Shape::Exterior, 2);
        REQUIRE(counts.counts.at(2) == 1);
        REQUIRE(counts.counts.at(4) == 1);
        REQUIRE(counts.counts.at(6) == 1);
        REQUIRE(counts.counts.at(8) == 2);
        std::vector<Integer> dims = brute_force_dims(gens_for(counts), n);
        PoincareSeries target = geometric_series(g);
        for (int d = 0; d <= n; ++d) REQUIRE(dims[static_cast<std::size_t>(d)] == target.at(d));
    }
    SECTION("a single polynomial generator") {
        for (int d : {2, 3, 5}) {
            PoincareSeries target(15);
            for (int k = 0; k * d <= 15; ++k) target.set(k * d, 1);
            GeneratorCounts counts = invert_generators(target, Shape::Polynomial, 2);
            REQUIRE(counts.counts.size() == 1);
            REQUIRE(counts.counts.at(d) == 1);
        }
    }
    SECTION("negative deficit reports the first failing degree") {
        PoincareSeries target(8);
        target.set(0, 1);
        target.set(2, 1);  // exterior algebra on one degree-2 class
        target.set(4, 0);
        try {
            invert_generators(target, Shape::Polynomial, 2);
            FAIL("expected shape_mismatch_error");
        } catch (const shape_mismatch_error& e) {
            REQUIRE(e.degree() == 4);
        }
    }
    SECTION("parity restrictions at odd p") {
        PoincareSeries target(6);
        target.set(0, 1);
        target.set(3, 1);  // degree-3 generator
        REQUIRE_THROWS_AS(invert_generators(target, Shape::Polynomial, 3), shape_mismatch_error);
        REQUIRE_NOTHROW(invert_generators(target, Shape::Exterior, 3));
    }
    SECTION("shape/prime consistency") {
        PoincareSeries one = PoincareSeries::one(4);
        REQUIRE_THROWS_AS(invert_generators(one, Shape::RationalMixed, 2), std::invalid_argument);
        REQUIRE_THROWS_AS(invert_generators(one, Shape::TruncatedHeightP, 0), std::invalid_argument);
        PoincareSeries bad(4);
        bad.set(0, 2);
        REQUIRE_THROWS_AS(invert_generators(bad, Shape::Polynomial, 2), std::invalid_argument);
    }
}

TEST_CASE("round trip: random generator counts rebuild and invert exactly") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> deg_dist(2, 12);
    std::uniform_int_distribution<int> cnt_dist(1, 3);
    std::uniform_int_distribution<int> howmany(1, 4);
    const int n = 16;

    auto run_case = [&](Shape shape, std::uint32_t p) {
        GeneratorCounts g;
        g.shape = shape;
        g.prime = p;
        for (int i = howmany(rng); i > 0; --i) {
            int d = deg_dist(rng);
            if (!detail::parity_allowed(shape, p, d)) {
                if (shape == Shape::Exterior) d = d % 2 == 0 ? d + 1 : d;
                else d = d % 2 == 1 ? d + 1 : d;
            }
            g.counts[d] += cnt_dist(rng);
        }
        PoincareSeries s = g.to_series(n);
        GeneratorCounts back = invert_generators(s, shape, p);
        REQUIRE(back.counts == g.counts);
        // cross-check the rebuilt series against brute-force enumeration
        std::vector<Integer> dims = brute_force_dims(gens_for(g), n);
        for (int d = 0; d <= n; ++d) REQUIRE(dims[static_cast<std::size_t>(d)] == s.at(d));
    };

    for (int iter = 0; iter < 60; ++iter) {
        run_case(Shape::Polynomial, 2);
        run_case(Shape::Exterior, 2);
        run_case(Shape::Polynomial, 3);
        run_case(Shape::Exterior, 3);
        run_case(Shape::TruncatedHeightP, 3);
        run_case(Shape::TruncatedHeightP, 5);
        run_case(Shape::RationalMixed, 0);
    }
}

TEST_CASE("geometric series is inverse to 1 - g") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coeff(0, 4);
    const int n = 14;
    for (int iter = 0; iter < 200; ++iter) {
        PoincareSeries g(n);
        for (int d = 1; d <= n; ++d) g.set(d, coeff(rng));
        PoincareSeries one_minus = PoincareSeries::one(n) - g;
        REQUIRE(geometric_series(g) * one_minus == PoincareSeries::one(n));
    }
}

TEST_CASE("series product is associative and commutative") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> coeff(-3, 5);
    const int n = 10;
    for (int iter = 0; iter < 200; ++iter) {
        PoincareSeries a(n), b(n), c(n);
        for (int d = 0; d <= n; ++d) {
            a.set(d, coeff(rng));
            b.set(d, coeff(rng));
            c.set(d, coeff(rng));
        }
        REQUIRE(a * b == b * a);
        REQUIRE((a * b) * c == a * (b * c));
    }
}
