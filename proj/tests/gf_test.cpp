#include <doctest.h>

#include "ctab/gf.hpp"
#include "oracle_util.hpp"

using namespace ctab;

namespace {

// trial-division reducibility check over GF(l), independent of the library's
// irreducibility test
bool has_nontrivial_factor(const std::vector<long>& f, long l)
{
    long d = static_cast<long>(f.size()) - 1;
    // enumerate monic divisors of degree 1..d/2
    for (long dd = 1; 2 * dd <= d; ++dd) {
        std::vector<long> digits(dd, 0);
        while (true) {
            std::vector<long> cand(dd + 1, 0);
            cand[dd] = 1;
            for (long i = 0; i < dd; ++i)
                cand[i] = digits[i];
            if (oracle::polyl::divides(cand, f, l))
                return true;
            long i = dd;
            bool done = false;
            while (i > 0) {
                --i;
                if (++digits[i] < l)
                    break;
                digits[i] = 0;
                if (i == 0)
                    done = true;
            }
            if (done)
                break;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("deterministic defining polynomials")
{
    CHECK(GaloisField::get(2, 1).modulus() == std::vector<long>{0, 1});
    CHECK(GaloisField::get(2, 2).modulus() == std::vector<long>{1, 1, 1});
    CHECK(GaloisField::get(3, 2).modulus() == std::vector<long>{1, 0, 1});
    CHECK(GaloisField::get(5, 2).modulus() == std::vector<long>{1, 1, 1});
    // lexicographic minimality: everything smaller factors
    for (auto [l, d] : {std::pair<long, long>{2, 6}, {3, 4}, {7, 2}}) {
        auto mod = GaloisField::get(l, d).modulus();
        CHECK(!has_nontrivial_factor(mod, l));
        std::vector<long> digits(d, 0);
        while (true) {
            std::vector<long> cand(d + 1, 0);
            cand[d] = 1;
            bool smaller = false;
            for (long i = 0; i < d; ++i) {
                cand[i] = digits[i];
            }
            for (long i = 0; i < d; ++i) {
                if (digits[i] < mod[i]) {
                    smaller = true;
                    break;
                }
                if (digits[i] > mod[i])
                    break;
            }
            if (smaller)
                CHECK(has_nontrivial_factor(cand, l));
            long i = d;
            bool done = false;
            while (i > 0) {
                --i;
                if (++digits[i] < l)
                    break;
                digits[i] = 0;
                if (i == 0)
                    done = true;
            }
            if (done || cand == mod)
                break;
        }
    }
}

TEST_CASE("field arithmetic basics")
{
    const GaloisField& F = GaloisField::get(3, 4);  // the A5 mod-3 field
    auto a = F.from_integer(2);
    CHECK(F.add(a, F.one()) == F.zero());
    auto img = F.smallest_of_order(10);
    REQUIRE(img);
    CHECK(F.element_order(*img) == 10);
    CHECK(F.pow(*img, 10) == F.one());
    CHECK(F.pow(*img, 5) != F.one());
    CHECK(F.pow(*img, 2) != F.one());
    // mixing fields throws
    auto b = GaloisField::get(5, 1).one();
    CHECK_THROWS_AS(F.add(a, b), std::invalid_argument);
    CHECK_THROWS_AS(F.element_order(F.zero()), std::domain_error);
}

TEST_CASE("prime ideal context determinism")
{
    // zeta_5 mod 11: exhaustive oracle over the residues 2..10
    PrimeIdealContext ctx = make_prime_ideal_context(11, 5);
    CHECK(ctx.n_prime == 5);
    CHECK(ctx.d == 1);
    long expected = 0;
    for (long r = 2; r <= 10; ++r) {
        bool order5 = pow_mod(r, 5, 11) == 1 && r != 1;
        if (order5) {
            expected = r;
            break;
        }
    }
    CHECK(expected == 3);
    CHECK(ctx.image.value[0] == expected);
    CHECK(reduce_mod_l(Cyclotomic::root_of_unity(5, 1), ctx).value[0] == expected);

    // alternative images: valid, distinct, same order
    PrimeIdealContext alt = make_prime_ideal_context(11, 5, 1);
    CHECK(alt.image != ctx.image);
    CHECK(ctx.field().element_order(alt.image) == 5);
    CHECK_THROWS_AS(make_prime_ideal_context(11, 5, 99), std::invalid_argument);
    CHECK_THROWS_AS(make_prime_ideal_context(10, 5), std::invalid_argument);
}

TEST_CASE("reduction collapses l-power roots and keeps units")
{
    PrimeIdealContext ctx2 = make_prime_ideal_context(2, 8);
    CHECK(reduce_mod_l(Cyclotomic(1), ctx2) == ctx2.field().one());
    CHECK(reduce_mod_l(Cyclotomic::root_of_unity(8, 1), ctx2) == ctx2.field().one());
    CHECK(reduce_mod_l(Cyclotomic::root_of_unity(8, 5), ctx2) == ctx2.field().one());

    PrimeIdealContext ctx5 = make_prime_ideal_context(5, 30);
    CHECK(reduce_mod_l(Cyclotomic(1), ctx5) == ctx5.field().one());
    CHECK(reduce_mod_l(Cyclotomic::root_of_unity(5, 2), ctx5) == ctx5.field().one());

    // l in a denominator is an error
    CHECK_THROWS_AS(reduce_mod_l(Rat(1, 5) * Cyclotomic::root_of_unity(3, 1), ctx5),
                    std::domain_error);
    // conductor outside the context is an error
    CHECK_THROWS_AS(reduce_mod_l(Cyclotomic::root_of_unity(7, 1), ctx5), std::invalid_argument);
}

TEST_CASE("reduction is a ring homomorphism on random algebraic integers")
{
    oracle::RandomCyclotomic gen(0x5eed0011);
    // keep the residue fields desk-sized: lcm of this pool is 120
    gen.conductors = {1, 3, 4, 5, 8, 12, 15, 20, 24};
    for (long l : {2L, 3L, 5L, 7L, 11L}) {
        PrimeIdealContext ctx = make_prime_ideal_context(l, 120);
        const GaloisField& F = ctx.field();
        for (int i = 0; i < 200; ++i) {
            Cyclotomic a = gen.next(true);
            Cyclotomic b = gen.next(true);
            CHECK(reduce_mod_l(a + b, ctx) == F.add(reduce_mod_l(a, ctx), reduce_mod_l(b, ctx)));
            CHECK(reduce_mod_l(a * b, ctx) == F.mul(reduce_mod_l(a, ctx), reduce_mod_l(b, ctx)));
        }
    }
}

TEST_CASE("reduction agrees between conductors")
{
    // the same element written over Q(zeta_3) and arriving via Q(zeta_12)
    PrimeIdealContext ctx = make_prime_ideal_context(5, 12);
    Cyclotomic z3 = Cyclotomic::root_of_unity(3, 1);
    Cyclotomic z12sq = Cyclotomic::root_of_unity(12, 4);
    CHECK(z3 == z12sq);
    CHECK(reduce_mod_l(z3, ctx) == reduce_mod_l(z12sq, ctx));
    // and the image really has order 3
    CHECK(ctx.field().element_order(reduce_mod_l(z3, ctx)) == 3);
}
