#pragma once

// l-block decomposition of a character table: central characters reduced
// modulo the deterministic prime ideal above l, defects from character
// degrees, cyclic-defect detection, and the exceptional-character partition.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "ctab/gf.hpp"
#include "ctab/table.hpp"

namespace ctab {

struct Block {
    long l = 0;
    std::vector<int> members;  // ascending irreducible indices
    long defect = 0;
    std::vector<FiniteFieldElement> fingerprint;  // central character mod the ideal, per class
};

// omega_chi(C) = |C| * chi(g_C) / chi(1), one value per class.
inline std::vector<Cyclotomic> central_character(const CharacterTable& t, int chi_index)
{
    const auto& row = t.irr[chi_index];
    Int deg = row[0].integer_value();
    std::vector<Cyclotomic> omega(t.num_classes());
    for (int c = 0; c < t.num_classes(); ++c) {
        Rat scale(t.class_size(c), deg);
        scale.canonicalize();
        omega[c] = scale * row[c];
    }
    return omega;
}

inline std::vector<Block> compute_blocks_with_context(const CharacterTable& t, long l,
                                                      const PrimeIdealContext& ctx)
{
    int k = t.num_classes();
    long a = valuation(t.order, l);
    std::vector<std::vector<FiniteFieldElement>> prints;
    prints.reserve(t.irr.size());
    for (size_t i = 0; i < t.irr.size(); ++i) {
        std::vector<Cyclotomic> omega = central_character(t, static_cast<int>(i));
        std::vector<FiniteFieldElement> fp(k);
        for (int c = 0; c < k; ++c)
            fp[c] = reduce_mod_l(omega[c], ctx);
        prints.push_back(std::move(fp));
    }
    std::map<std::vector<FiniteFieldElement>, std::vector<int>> by_print;
    for (size_t i = 0; i < prints.size(); ++i)
        by_print[prints[i]].push_back(static_cast<int>(i));

    std::vector<Block> blocks;
    for (auto& [fp, members] : by_print) {
        Block b;
        b.l = l;
        b.members = members;
        b.fingerprint = fp;
        long min_v = a;
        for (int i : members)
            min_v = std::min<long>(min_v, valuation(t.irr[i][0].integer_value(), l));
        b.defect = a - min_v;
        blocks.push_back(std::move(b));
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const Block& x, const Block& y) { return x.members.front() < y.members.front(); });
    return blocks;
}

inline std::vector<Block> compute_blocks(const CharacterTable& t, long l)
{
    if (!is_prime(l))
        throw std::invalid_argument("compute_blocks: l must be prime");
    PrimeIdealContext ctx = make_prime_ideal_context(l, t.exponent());
    return compute_blocks_with_context(t, l, ctx);
}

// Partition of the block members by equality of their restriction to the
// l-regular classes; groups ordered by least member, members ascending.
inline std::vector<std::vector<int>> exceptional_partition(const Block& b,
                                                           const CharacterTable& t, long l)
{
    std::vector<std::vector<int>> groups;
    auto regular_values = [&](int i) {
        std::vector<Cyclotomic> v;
        for (int c = 0; c < t.num_classes(); ++c)
            if (t.is_regular(c, l))
                v.push_back(t.irr[i][c]);
        return v;
    };
    std::map<std::vector<Cyclotomic>, std::vector<int>> by_restriction;
    for (int i : b.members)
        by_restriction[regular_values(i)].push_back(i);
    for (auto& [vals, group] : by_restriction)
        groups.push_back(group);
    std::sort(groups.begin(), groups.end(),
              [](const std::vector<int>& x, const std::vector<int>& y) {
                  return x.front() < y.front();
              });
    return groups;
}

struct CyclicStatus {
    enum class Kind { TrivialDefect, CyclicNontrivial, NotCyclic, Undecided };
    Kind kind = Kind::Undecided;
    long e = 0;                    // Brauer character count, CyclicNontrivial only
    long m = 0;                    // exceptional multiplicity, CyclicNontrivial only
    std::vector<int> exceptional;  // empty when m = 1

    bool cyclic_nontrivial() const { return kind == Kind::CyclicNontrivial; }
    std::string to_string() const
    {
        switch (kind) {
            case Kind::TrivialDefect: return "trivial defect";
            case Kind::CyclicNontrivial:
                return "cyclic, e = " + std::to_string(e) + ", m = " + std::to_string(m);
            case Kind::NotCyclic: return "not cyclic";
            default: return "undecided";
        }
    }
};

namespace blocks_detail {

// Galois substitutions that move only l-power roots of unity fix every block
// and every Brauer character; their moved points inside an all-equal
// restriction class are exactly the exceptional characters. Returns the
// member permutations induced by all such substitutions.
inline std::vector<std::vector<int>> l_part_galois_action(const CharacterTable& t, long l)
{
    long n = t.exponent();
    long lpart = 1;
    long rest = n;
    while (rest % l == 0) {
        rest /= l;
        lpart *= l;
    }
    std::vector<std::vector<int>> perms;
    if (lpart == 1)
        return perms;
    int k = t.num_classes();
    for (long j = 1; j < n; ++j) {
        if (gcd_l(j, n) != 1)
            continue;
        if ((rest > 1 && mod_l(j, rest) != 1) || mod_l(j, lpart) == 1)
            continue;
        // row permutation with galois(row_i, j) = row_{perm[i]}
        std::vector<int> perm(t.irr.size(), -1);
        bool ok = true;
        for (size_t i = 0; i < t.irr.size() && ok; ++i) {
            for (size_t i2 = 0; i2 < t.irr.size(); ++i2) {
                bool match = true;
                for (int c = 0; c < k && match; ++c)
                    match = t.irr[i2][c] == t.irr[i][c].galois(j);
                if (match) {
                    perm[i] = static_cast<int>(i2);
                    break;
                }
            }
            ok = perm[i] >= 0;
        }
        if (ok)
            perms.push_back(std::move(perm));
    }
    return perms;
}

}  // namespace blocks_detail

inline CyclicStatus cyclic_status(const Block& b, const CharacterTable& t)
{
    CyclicStatus st;
    long l = b.l;
    long k = static_cast<long>(b.members.size());
    if (b.defect == 0) {
        st.kind = CyclicStatus::Kind::TrivialDefect;
        return st;
    }
    auto groups = exceptional_partition(b, t, l);
    std::vector<std::vector<int>> big;
    for (auto& g : groups)
        if (g.size() > 1)
            big.push_back(g);

    Int lpow_d = 1;
    for (long i = 0; i < b.defect; ++i)
        lpow_d *= l;

    if (b.defect == 1) {
        if (k < 2)
            return st;  // Undecided: positive defect forces at least two characters
        // order-l defect group is cyclic; read (e, m) off the partition
        if (big.empty()) {
            st.e = k - 1;
            st.m = 1;
        } else if (big.size() == 1 && static_cast<long>(big[0].size()) < k) {
            st.m = static_cast<long>(big[0].size());
            st.e = k - st.m;
            st.exceptional = big[0];
        } else if (big.size() == 1) {
            // all members share the l-regular restriction: the two-vertex tree.
            // e = 1; the non-exceptional member is the one fixed by the
            // l-power Galois substitutions.
            st.e = 1;
            st.m = k - 1;
            if (st.m > 1) {
                auto perms = blocks_detail::l_part_galois_action(t, l);
                std::vector<int> moved;
                for (int i : b.members) {
                    bool fixed = true;
                    for (auto& p : perms)
                        fixed = fixed && p[i] == i;
                    if (!fixed)
                        moved.push_back(i);
                }
                if (static_cast<long>(moved.size()) != st.m) {
                    st = CyclicStatus{};
                    return st;  // Undecided: data does not identify the exceptionals
                }
                st.exceptional = moved;
            }
        } else {
            return st;  // Undecided: several candidate exceptional families
        }
        bool numeric_ok = (l - 1) % st.e == 0 && st.m == (l - 1) / st.e && k == st.e + st.m;
        if (st.m == 1)
            numeric_ok = (l - 1) % st.e == 0 && k == st.e + 1;
        if (!numeric_ok) {
            st = CyclicStatus{};
            return st;  // Undecided: order-l defect but the cyclic numerics fail
        }
        st.kind = CyclicStatus::Kind::CyclicNontrivial;
        return st;
    }

    // defect >= 2: numerical screen only; a passing screen is not a proof,
    // so the outcome is Undecided rather than CyclicNontrivial.
    bool some_pattern_fits = false;
    for (long e = 1; e < l; ++e) {
        if ((l - 1) % e != 0)
            continue;
        Int m_big = (lpow_d - 1) / e;
        if ((lpow_d - 1) % e != 0 || !m_big.fits_slong_p())
            continue;
        long m = m_big.get_si();
        if (k != e + m)
            continue;
        bool partition_fits;
        if (e == 1)
            partition_fits = big.size() == 1 && static_cast<long>(big[0].size()) == k;
        else
            partition_fits = big.size() == 1 && static_cast<long>(big[0].size()) == m;
        if (partition_fits)
            some_pattern_fits = true;
    }
    st.kind = some_pattern_fits ? CyclicStatus::Kind::Undecided : CyclicStatus::Kind::NotCyclic;
    return st;
}

// Order of the common kernel of the block members, reconstructed as the total
// size of the classes where every member takes its degree value.
inline Int block_kernel_order(const Block& b, const CharacterTable& t)
{
    Int total = 0;
    for (int c = 0; c < t.num_classes(); ++c) {
        bool in_kernel = true;
        for (int i : b.members)
            if (t.irr[i][c] != t.irr[i][0]) {
                in_kernel = false;
                break;
            }
        if (in_kernel)
            total += t.class_size(c);
    }
    return total;
}

}  // namespace ctab
