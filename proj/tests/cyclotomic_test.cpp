#include <doctest.h>

#include "ctab/cyclotomic.hpp"
#include "oracle_util.hpp"

using namespace ctab;
using oracle::RandomCyclotomic;

TEST_CASE("roots of unity in canonical minimal-conductor form")
{
    CHECK(Cyclotomic::root_of_unity(1, 0) == Cyclotomic(1));
    CHECK(Cyclotomic::root_of_unity(2, 1) == Cyclotomic(-1));
    // E(6) lands in Q(zeta_3)
    Cyclotomic z6 = Cyclotomic::root_of_unity(6, 1);
    CHECK(z6.conductor() == 3);
    CHECK(z6 == -(Cyclotomic::root_of_unity(3, 2)));
    CHECK_THROWS_AS(Cyclotomic::root_of_unity(0, 1), std::invalid_argument);
    // negative and large exponents fold
    CHECK(Cyclotomic::root_of_unity(5, -1) == Cyclotomic::root_of_unity(5, 4));
    CHECK(Cyclotomic::root_of_unity(5, 12) == Cyclotomic::root_of_unity(5, 2));
}

TEST_CASE("ring operations")
{
    Cyclotomic sum(1);
    for (long k = 1; k < 5; ++k)
        sum += Cyclotomic::root_of_unity(5, k);
    CHECK(sum.is_zero());

    CHECK(Cyclotomic::root_of_unity(4, 1) * Cyclotomic::root_of_unity(4, 1) == Cyclotomic(-1));

    Cyclotomic a = Cyclotomic::root_of_unity(5, 1) + Cyclotomic::root_of_unity(5, 4);
    Cyclotomic b = Cyclotomic::root_of_unity(5, 2) + Cyclotomic::root_of_unity(5, 3);
    Cyclotomic prod = a * b;
    CHECK(prod == Cyclotomic(-1));
    // cross-check the product numerically to 30 digits
    auto lhs = oracle::eval_cyclotomic(prod);
    auto rhs = oracle::eval_cyclotomic(a).mul(oracle::eval_cyclotomic(b));
    CHECK(oracle::close(lhs, rhs, 30));

    // mixed conductors embed into the lcm
    Cyclotomic c = Cyclotomic::root_of_unity(3, 1) + Cyclotomic::root_of_unity(4, 1);
    CHECK(c.conductor() == 12);
    CHECK(c - Cyclotomic::root_of_unity(4, 1) == Cyclotomic::root_of_unity(3, 1));

    // scalar multiply
    CHECK(Rat(3, 2) * Cyclotomic(2) == Cyclotomic(3));
}

TEST_CASE("conjugation")
{
    CHECK(Cyclotomic::root_of_unity(4, 1).conjugate() == Cyclotomic::root_of_unity(4, 3));
    Cyclotomic q(Rat(7, 2));
    CHECK(q.conjugate() == q);
    Cyclotomic real_elem = Cyclotomic::root_of_unity(5, 1) + Cyclotomic::root_of_unity(5, 4);
    CHECK(real_elem.conjugate() == real_elem);
}

TEST_CASE("galois substitutions")
{
    CHECK(Cyclotomic::root_of_unity(5, 1).galois(2) == Cyclotomic::root_of_unity(5, 2));
    Cyclotomic q(Rat(-4, 3));
    for (long k : {1, 2, 5, 11})
        CHECK(q.galois(k) == q);
    Cyclotomic a = Cyclotomic::root_of_unity(5, 1) + Cyclotomic::root_of_unity(5, 4);
    Cyclotomic b = Cyclotomic::root_of_unity(5, 2) + Cyclotomic::root_of_unity(5, 3);
    CHECK(a.galois(2) == b);
    CHECK(a.galois(2) != a);
    CHECK(a.galois(1) == a);
    CHECK_THROWS_AS(Cyclotomic::root_of_unity(6, 1).galois(3), std::invalid_argument);
}

TEST_CASE("canonical-form soundness on pseudorandom elements")
{
    RandomCyclotomic gen(0x5eed0001);
    for (int i = 0; i < 1000; ++i) {
        Cyclotomic a = gen.next();
        Cyclotomic b = gen.next();
        Cyclotomic c = gen.next();
        CHECK((a - a).is_zero());
        CHECK((a * b) * c == a * (b * c));
        CHECK(a.conjugate().conjugate() == a);
    }
}

TEST_CASE("floating cross-check of canonicalization")
{
    RandomCyclotomic gen(0x5eed0002);
    for (int i = 0; i < 200; ++i) {
        auto [canonical, terms] = gen.next_with_terms();
        CHECK(oracle::close(oracle::eval_cyclotomic(canonical), oracle::eval_terms(terms), 30));
    }
}

TEST_CASE("galois action with a generating exponent fixes exactly the rationals")
{
    // 2 generates (Z/5Z)^x and (Z/9Z)^x
    RandomCyclotomic gen(0x5eed0003);
    for (int i = 0; i < 200; ++i) {
        Cyclotomic a = gen.next();
        if (a.conductor() != 5 && a.conductor() != 9)
            continue;
        bool fixed = a.galois(2) == a;
        CHECK(fixed == a.is_rational());
    }
    // the orbit of a primitive root stays primitive
    for (long k = 1; k < 5; ++k) {
        Cyclotomic img = Cyclotomic::root_of_unity(5, k).galois(2);
        CHECK(img.conductor() == 5);
    }
    // explicit non-generator sanity: 4 fixes zeta_5 + zeta_5^4 without it being rational
    Cyclotomic real_elem = Cyclotomic::root_of_unity(5, 1) + Cyclotomic::root_of_unity(5, 4);
    CHECK(real_elem.galois(4) == real_elem);
    CHECK(!real_elem.is_rational());
}

TEST_CASE("galois composition law")
{
    RandomCyclotomic gen(0x5eed0004);
    for (int i = 0; i < 200; ++i) {
        Cyclotomic a = gen.next();
        long n = a.conductor();
        for (long j = 1; j < n; ++j) {
            if (gcd_l(j, n) != 1)
                continue;
            for (long k = 1; k < n; ++k) {
                if (gcd_l(k, n) != 1)
                    continue;
                CHECK(a.galois(j).galois(k) == a.galois(mod_l(j * k, n)));
            }
            break;
        }
    }
}

TEST_CASE("text syntax round-trips canonically")
{
    CHECK(Cyclotomic::parse("0").is_zero());
    CHECK(Cyclotomic::parse("-3") == Cyclotomic(-3));
    CHECK(Cyclotomic::parse("7/2") == Cyclotomic(Rat(7, 2)));
    CHECK(Cyclotomic::parse("E(4)") == Cyclotomic::root_of_unity(4, 1));
    CHECK(Cyclotomic::parse("-3/2*E(5)^2+E(5)") ==
          Rat(-3, 2) * Cyclotomic::root_of_unity(5, 2) + Cyclotomic::root_of_unity(5, 1));
    CHECK(Cyclotomic::parse("1+E(5)+E(5)^4").to_string() == "-E(5)^2-E(5)^3");
    CHECK(Cyclotomic::parse(" 1 + E(8) - E(8)^3 ") ==
          Cyclotomic(1) + Cyclotomic::root_of_unity(8, 1) - Cyclotomic::root_of_unity(8, 3));
    // negative exponent folds modulo the order
    CHECK(Cyclotomic::parse("E(7)^-1") == Cyclotomic::root_of_unity(7, 6));

    RandomCyclotomic gen(0x5eed0005);
    for (int i = 0; i < 300; ++i) {
        Cyclotomic a = gen.next();
        CHECK(Cyclotomic::parse(a.to_string()) == a);
    }
}

TEST_CASE("parse errors carry positions")
{
    CHECK_THROWS_WITH_AS(Cyclotomic::parse("E(0)"), doctest::Contains("bad root order"),
                         std::invalid_argument);
    CHECK_THROWS_AS(Cyclotomic::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(Cyclotomic::parse("2*"), doctest::Contains("E(n) expected"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(Cyclotomic::parse("E(5)^2junk"), doctest::Contains("column"),
                         std::invalid_argument);
    CHECK_THROWS_AS(Cyclotomic::parse(""), std::invalid_argument);
}

TEST_CASE("conductors are minimal")
{
    // an element is stored over Q(zeta_n) only if no Galois substitution
    // fixing a maximal proper cyclotomic subfield fixes it
    RandomCyclotomic gen(0x5eed0006);
    for (int i = 0; i < 300; ++i) {
        Cyclotomic a = gen.next();
        long n = a.conductor();
        if (n == 1)
            continue;
        for (long p : prime_divisors(n)) {
            long m = n / p;
            // some nontrivial element of Gal(Q(zeta_n)/Q(zeta_m)) must move a
            bool moved = false;
            for (long k = 2; k < n && !moved; ++k) {
                if (gcd_l(k, n) != 1)
                    continue;
                if (m > 1 && mod_l(k, m) != 1)
                    continue;
                moved = a.galois(k) != a;
            }
            CAPTURE(n);
            CAPTURE(p);
            CHECK(moved);
        }
    }
}

TEST_CASE("classical radical identities")
{
    // sqrt(5) and sqrt(-7) as Gauss sums
    Cyclotomic sqrt5 = Cyclotomic::root_of_unity(5, 1) - Cyclotomic::root_of_unity(5, 2) -
                       Cyclotomic::root_of_unity(5, 3) + Cyclotomic::root_of_unity(5, 4);
    CHECK(sqrt5 * sqrt5 == Cyclotomic(5));
    Cyclotomic sqrtm7;
    for (long k : {1, 2, 4})
        sqrtm7 += Cyclotomic::root_of_unity(7, k);
    for (long k : {3, 5, 6})
        sqrtm7 -= Cyclotomic::root_of_unity(7, k);
    CHECK(sqrtm7 * sqrtm7 == Cyclotomic(-7));
    // power compatibility across conductors
    CHECK(Cyclotomic::root_of_unity(12, 3) == Cyclotomic::root_of_unity(4, 1));
    CHECK(Cyclotomic::root_of_unity(9, 3) == Cyclotomic::root_of_unity(3, 1));
    Cyclotomic i = Cyclotomic::root_of_unity(4, 1);
    Cyclotomic z8 = Cyclotomic::root_of_unity(8, 1);
    CHECK(z8 * z8 == i);
    // golden ratio arithmetic: phi^2 = phi + 1
    Cyclotomic phi =
        Cyclotomic(1) + Cyclotomic::root_of_unity(5, 1) + Cyclotomic::root_of_unity(5, 4);
    CHECK(phi * phi == phi + Cyclotomic(1));
}

TEST_CASE("algebraic integer detection")
{
    CHECK(Cyclotomic(5).is_algebraic_integer());
    CHECK(!Cyclotomic(Rat(1, 2)).is_algebraic_integer());
    CHECK(Cyclotomic::root_of_unity(7, 3).is_algebraic_integer());
    // (1 + sqrt(5))/2 is integral though its rational parts are halves
    Cyclotomic golden = Cyclotomic(1) + Cyclotomic::root_of_unity(5, 1) +
                        Cyclotomic::root_of_unity(5, 4);
    CHECK(golden.is_algebraic_integer());
}
