#include <doctest.h>

#include <set>

#include "ctab/projective.hpp"
#include "ctab/table_io.hpp"
#include "oracle_util.hpp"

using namespace ctab;

namespace {

const CharacterTable& bundled(const std::string& file)
{
    static std::map<std::string, CharacterTable> cache;
    auto it = cache.find(file);
    if (it == cache.end())
        it = cache.emplace(file, load_table(oracle::data_path(file))).first;
    return it->second;
}

}  // namespace

TEST_CASE("defect-zero seeds")
{
    const CharacterTable& a5 = bundled("a5.tbl");
    auto s5 = defect_zero_seeds(a5, 5);
    REQUIRE(s5.size() == 1);
    CHECK(s5[0].fn == a5.irreducible(4));
    CHECK(s5[0].provenance.to_string() == "seed(5)");

    auto s3 = defect_zero_seeds(a5, 3);
    REQUIRE(s3.size() == 2);
    CHECK(s3[0].fn == a5.irreducible(1));
    CHECK(s3[1].fn == a5.irreducible(2));

    // l outside |G|: every irreducible seeds
    CHECK(defect_zero_seeds(a5, 7).size() == a5.irr.size());
}

TEST_CASE("tensor closure is deterministic, deduplicated and certified")
{
    const CharacterTable& a5 = bundled("a5.tbl");
    auto seeds = defect_zero_seeds(a5, 5);
    CHECK(tensor_closure(seeds, a5, seeds.size()).size() == seeds.size());
    CHECK_THROWS_AS(tensor_closure(seeds, a5, 0), std::invalid_argument);

    auto pool = tensor_closure(seeds, a5, 50);
    CHECK(pool.size() <= 50);
    // chi_5 x chi_4 appears with its frozen values
    bool found = false;
    for (auto& p : pool)
        if (p.fn == tensor(a5.irreducible(4), a5.irreducible(3))) {
            found = true;
            CHECK(p.fn[0] == Cyclotomic(20));
            CHECK(p.fn[3].is_zero());
            CHECK(p.fn[4].is_zero());
        }
    CHECK(found);
    // no duplicate value vectors
    std::set<std::vector<Cyclotomic>> seen;
    for (auto& p : pool)
        CHECK(seen.insert(p.fn.values()).second);
    // everything certifies
    for (auto& p : pool)
        CHECK(certify_projective(p.fn, a5, 5).ok);
    // determinism: the same call yields the same provenances
    auto pool2 = tensor_closure(seeds, a5, 50);
    REQUIRE(pool2.size() == pool.size());
    for (size_t i = 0; i < pool.size(); ++i) {
        CHECK(pool2[i].fn == pool[i].fn);
        CHECK(pool2[i].provenance.to_string() == pool[i].provenance.to_string());
    }
}

TEST_CASE("projectivity certificate")
{
    const CharacterTable& a5 = bundled("a5.tbl");
    CHECK(certify_projective(a5.irreducible(4), a5, 5).ok);
    auto bad = certify_projective(a5.trivial_character(), a5, 5);
    CHECK(!bad.ok);
    bool mentions_singular = false;
    for (auto& v : bad.violations)
        mentions_singular = mentions_singular || v.find("5-singular") != std::string::npos;
    CHECK(mentions_singular);
    CHECK(certify_projective(a5.zero_function(), a5, 5).ok);
    // fractional multiplicities fail
    CHECK(!certify_projective(Rat(1, 2) * a5.irreducible(4), a5, 5).ok);
}

TEST_CASE("induced projectives")
{
    const CharacterTable& a5 = bundled("a5.tbl");
    const CharacterTable& c5 = bundled("c5.tbl");
    FusionMap f = bind_fusion(load_fusion_file(oracle::data_path("c5_a5.fus")), c5, a5);

    auto seeds = defect_zero_seeds(c5, 3);
    REQUIRE(seeds.size() == 5);  // 3 does not divide |C5|
    for (auto& s : seeds) {
        ProjectiveChar ind = induce_projective(s, f, 3);
        CHECK(ind.fn[0] == Cyclotomic(12));
        CHECK(certify_projective(ind.fn, a5, 3).ok);
        CHECK(ind.provenance.to_string().find("induced(C5") == 0);
    }
    // inducing the zero function stays projective
    ProjectiveChar zero{c5.zero_function(), Provenance::seed(0)};
    CHECK(induce_projective(zero, f, 3).fn.is_zero());
    // at l prime to |A5| everything certifies
    ProjectiveChar any{c5.irreducible(2), Provenance::seed(2)};
    CHECK(certify_projective(induce_projective(any, f, 7).fn, a5, 7).ok);

    // a fusion that funnels every nontrivial class onto one order-5 class
    // passes the subgroup arithmetic but yields a non-projective induction
    FusionMap skew = f;
    skew.map = {0, 3, 3, 3, 3};
    CHECK(validate_fusion(skew).empty());
    ProjectiveChar triv{c5.trivial_character(), Provenance::seed(0)};
    CHECK_THROWS_AS(induce_projective(triv, skew, 5), CertificationError);
}

TEST_CASE("tensoring a projective with any virtual character keeps the vanishing")
{
    const CharacterTable& a5 = bundled("a5.tbl");
    auto pool = tensor_closure(defect_zero_seeds(a5, 5), a5, 10);
    SplitMix64 rng(0x5eed0021);
    for (int trial = 0; trial < 50; ++trial) {
        // random virtual character
        std::vector<Int> coords(a5.irr.size());
        for (auto& c : coords)
            c = rng.below(7) - 3;
        ClassFunction v = from_irreducible_coordinates(a5, coords);
        for (auto& p : pool) {
            ClassFunction prod = tensor(p.fn, v);
            for (int c = 0; c < a5.num_classes(); ++c)
                if (!a5.is_regular(c, 5))
                    CHECK(prod[c].is_zero());
        }
    }
}
