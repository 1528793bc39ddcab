#pragma once

// Character table data model and the class-function algebra on top of it:
// exact inner products, tensors, symmetrizations, induction/restriction along
// fusions, lifting through central quotients, and structural validation.
//
// Tables are immutable once built. Class functions keep a plain pointer to
// their table; operations on functions from different tables throw.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctab/cyclotomic.hpp"
#include "ctab/numtheory.hpp"

namespace ctab {

struct TableMismatchError : std::invalid_argument {
    TableMismatchError() : std::invalid_argument("class functions live on different tables") {}
};

struct ClassInfo {
    std::string name;
    long element_order = 1;
    Int centralizer_order = 1;
};

class CharacterTable;

class ClassFunction {
public:
    ClassFunction() : table_(nullptr) {}
    ClassFunction(const CharacterTable* table, std::vector<Cyclotomic> values)
        : table_(table), values_(std::move(values))
    {
    }

    const CharacterTable* table() const { return table_; }
    const std::vector<Cyclotomic>& values() const { return values_; }
    const Cyclotomic& operator[](int c) const { return values_[c]; }
    const Cyclotomic& degree() const { return values_[0]; }

    friend bool operator==(const ClassFunction& a, const ClassFunction& b)
    {
        return a.table_ == b.table_ && a.values_ == b.values_;
    }
    friend ClassFunction operator+(const ClassFunction& a, const ClassFunction& b)
    {
        a.check_same(b);
        std::vector<Cyclotomic> v(a.values_.size());
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = a.values_[i] + b.values_[i];
        return ClassFunction(a.table_, std::move(v));
    }
    friend ClassFunction operator-(const ClassFunction& a, const ClassFunction& b)
    {
        a.check_same(b);
        std::vector<Cyclotomic> v(a.values_.size());
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = a.values_[i] - b.values_[i];
        return ClassFunction(a.table_, std::move(v));
    }
    ClassFunction operator-() const
    {
        std::vector<Cyclotomic> v(values_.size());
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = -values_[i];
        return ClassFunction(table_, std::move(v));
    }
    friend ClassFunction operator*(const Rat& s, const ClassFunction& a)
    {
        std::vector<Cyclotomic> v(a.values_.size());
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = s * a.values_[i];
        return ClassFunction(a.table_, std::move(v));
    }
    bool is_zero() const
    {
        for (auto& v : values_)
            if (!v.is_zero())
                return false;
        return true;
    }

    void check_same(const ClassFunction& other) const
    {
        if (table_ != other.table_)
            throw TableMismatchError();
    }

private:
    const CharacterTable* table_;
    std::vector<Cyclotomic> values_;
};

class CharacterTable {
public:
    std::string name;
    Int order = 1;
    std::vector<ClassInfo> classes;
    std::map<long, std::vector<int>> power_maps;     // prime -> 0-based class images
    std::vector<std::vector<Cyclotomic>> irr;        // rows, one per irreducible

    int num_classes() const { return static_cast<int>(classes.size()); }
    long element_order(int c) const { return classes[c].element_order; }
    Int class_size(int c) const
    {
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), order.get_mpz_t(),
                    classes[c].centralizer_order.get_mpz_t());
        if (r != 0)
            throw std::domain_error("centralizer order does not divide group order");
        return q;
    }
    long exponent() const
    {
        long e = 1;
        for (auto& ci : classes)
            e = lcm_l(e, ci.element_order);
        return e;
    }
    bool is_regular(int c, long l) const { return classes[c].element_order % l != 0; }
    bool has_singular_classes(long l) const
    {
        for (int c = 0; c < num_classes(); ++c)
            if (!is_regular(c, l))
                return true;
        return false;
    }

    ClassFunction irreducible(int i) const { return ClassFunction(this, irr[i]); }
    ClassFunction trivial_character() const
    {
        return ClassFunction(this, std::vector<Cyclotomic>(classes.size(), Cyclotomic(1)));
    }
    ClassFunction zero_function() const
    {
        return ClassFunction(this, std::vector<Cyclotomic>(classes.size()));
    }
    ClassFunction make(std::vector<Cyclotomic> values) const
    {
        if (values.size() != classes.size())
            throw std::invalid_argument("class function has wrong length");
        return ClassFunction(this, std::move(values));
    }

    // Class of g^p for prime p. Stored maps cover primes dividing |G|; for
    // other primes the image is pinned by Galois action on character values.
    int prime_power_class(int c, long p) const
    {
        auto it = power_maps.find(p);
        if (it != power_maps.end())
            return it->second[c];
        if (mpz_divisible_ui_p(order.get_mpz_t(), p))
            throw std::domain_error("missing power map for prime " + std::to_string(p));
        long o = element_order(c);
        if (o % p == 0)
            throw std::logic_error("element order not coprime to prime outside |G|");
        int found = -1;
        for (int c2 = 0; c2 < num_classes(); ++c2) {
            if (element_order(c2) != o)
                continue;
            bool match = true;
            for (size_t i = 0; i < irr.size() && match; ++i)
                match = irr[i][c2] == irr[i][c].galois(p);
            if (match) {
                if (found >= 0)
                    throw std::domain_error("power class not unique for prime " + std::to_string(p));
                found = c2;
            }
        }
        if (found < 0)
            throw std::domain_error("power class not found for prime " + std::to_string(p));
        return found;
    }

    // Class of g^k for arbitrary k, by prime factorization chains.
    int power_class(int c, long k) const
    {
        long o = element_order(c);
        k = mod_l(k, o);
        if (k == 0)
            return 0;  // identity class
        int cur = c;
        for (auto& [p, e] : factorize(k))
            for (int i = 0; i < e; ++i)
                cur = prime_power_class(cur, p);
        return cur;
    }

    std::vector<int> power_column_map(long k) const
    {
        std::vector<int> m(num_classes());
        for (int c = 0; c < num_classes(); ++c)
            m[c] = power_class(c, k);
        return m;
    }

    // All structural invariants; returns human-readable violations (empty when
    // the table is sound). Violations are data, not exceptions.
    std::vector<std::string> validate() const
    {
        std::vector<std::string> bad;
        auto complain = [&](const std::string& s) { bad.push_back(s); };
        int k = num_classes();
        if (k == 0)
            return {"table has no classes"};
        if (static_cast<int>(irr.size()) != k)
            complain("number of irreducibles (" + std::to_string(irr.size()) +
                     ") differs from number of classes (" + std::to_string(k) + ")");
        for (auto& row : irr)
            if (static_cast<int>(row.size()) != k)
                complain("irreducible row of wrong length");
        if (!bad.empty())
            return bad;  // shape is broken; value checks would be noise

        if (classes[0].element_order != 1 || classes[0].centralizer_order != order)
            complain("class 1 is not the identity class");
        for (int c = 0; c < k; ++c) {
            if (!mpz_divisible_p(order.get_mpz_t(), classes[c].centralizer_order.get_mpz_t()))
                complain("centralizer order of class " + std::to_string(c + 1) +
                         " does not divide group order");
            if (!mpz_divisible_ui_p(order.get_mpz_t(), classes[c].element_order))
                complain("element order of class " + std::to_string(c + 1) +
                         " does not divide group order");
        }
        for (int c = 0; c < k; ++c)
            if (irr[0][c] != Cyclotomic(1)) {
                complain("irreducible 1 is not the trivial character");
                break;
            }

        // row orthogonality
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                Cyclotomic ip = inner_product_raw(i, j);
                if (ip != Cyclotomic(i == j ? 1 : 0))
                    complain("row orthogonality fails at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
            }
        // column orthogonality
        for (int c = 0; c < k; ++c)
            for (int c2 = c; c2 < k; ++c2) {
                Cyclotomic s;
                for (int i = 0; i < k; ++i)
                    s += irr[i][c] * irr[i][c2].conjugate();
                Cyclotomic want = c == c2 ? Cyclotomic(Rat(classes[c].centralizer_order))
                                          : Cyclotomic();
                if (s != want)
                    complain("column orthogonality fails at (" + std::to_string(c + 1) + "," +
                             std::to_string(c2 + 1) + ")");
            }
        // power map consistency
        for (auto& [p, pm] : power_maps) {
            if (!is_prime(p)) {
                complain("power map stored for non-prime " + std::to_string(p));
                continue;
            }
            if (static_cast<int>(pm.size()) != k) {
                complain("power map for " + std::to_string(p) + " has wrong length");
                continue;
            }
            for (int c = 0; c < k; ++c) {
                if (pm[c] < 0 || pm[c] >= k) {
                    complain("power map for " + std::to_string(p) + " out of range at class " +
                             std::to_string(c + 1));
                    continue;
                }
                long o = classes[c].element_order;
                long want = o / gcd_l(o, p);
                if (classes[pm[c]].element_order != want)
                    complain("power map for " + std::to_string(p) +
                             " violates order arithmetic at class " + std::to_string(c + 1));
            }
        }
        for (long p : prime_divisors_of_order())
            if (!power_maps.count(p))
                complain("missing power map for prime " + std::to_string(p) + " dividing |G|");
        if (!bad.empty())
            return bad;

        // Galois closure: columns permute by c -> c^j and rows follow suit
        long n = exponent();
        for (long j = 2; j < n; ++j) {
            if (gcd_l(j, n) != 1)
                continue;
            std::vector<int> colmap;
            try {
                colmap = power_column_map(j);
            } catch (const std::exception& e) {
                complain(std::string("galois closure: ") + e.what());
                continue;
            }
            for (int i = 0; i < k; ++i) {
                int target = -1;
                for (int i2 = 0; i2 < k && target < 0; ++i2) {
                    bool match = true;
                    for (int c = 0; c < k && match; ++c)
                        match = irr[i2][c] == irr[i][colmap[c]];
                    if (match)
                        target = i2;
                }
                bool ok = target >= 0;
                for (int c = 0; c < k && ok; ++c)
                    ok = irr[target][c] == irr[i][c].galois(j);
                if (!ok)
                    complain("galois closure fails for row " + std::to_string(i + 1) +
                             " under k=" + std::to_string(j));
            }
        }
        return bad;
    }

    std::vector<long> prime_divisors_of_order() const
    {
        std::vector<long> ps;
        Int n = order;
        for (long p = 2; Int(p) * p <= n; ++p) {
            if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                ps.push_back(p);
                while (mpz_divisible_ui_p(n.get_mpz_t(), p))
                    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            }
        }
        if (n > 1)
            ps.push_back(n.get_si());
        return ps;
    }

private:
    Cyclotomic inner_product_raw(int i, int j) const
    {
        Cyclotomic acc;
        for (int c = 0; c < num_classes(); ++c)
            acc += Rat(class_size(c)) * (irr[i][c] * irr[j][c].conjugate());
        return Rat(Int(1), order) * acc;
    }
};

// <a, b> = (1/|G|) sum_C |C| a(C) conj(b(C)), exact.
inline Cyclotomic inner_product(const ClassFunction& a, const ClassFunction& b)
{
    a.check_same(b);
    const CharacterTable& t = *a.table();
    Cyclotomic acc;
    for (int c = 0; c < t.num_classes(); ++c)
        acc += Rat(t.class_size(c)) * (a[c] * b[c].conjugate());
    return Rat(Int(1), t.order) * acc;
}

inline Cyclotomic norm(const ClassFunction& a) { return inner_product(a, a); }

inline ClassFunction tensor(const ClassFunction& a, const ClassFunction& b)
{
    a.check_same(b);
    std::vector<Cyclotomic> v(a.values().size());
    for (size_t c = 0; c < v.size(); ++c)
        v[c] = a[static_cast<int>(c)] * b[static_cast<int>(c)];
    return ClassFunction(a.table(), std::move(v));
}

// sym(g) = (a(g)^2 + a(g^2)) / 2, alt(g) = (a(g)^2 - a(g^2)) / 2.
inline std::pair<ClassFunction, ClassFunction> symmetrize2(const ClassFunction& a)
{
    const CharacterTable& t = *a.table();
    std::vector<Cyclotomic> sym(t.num_classes()), alt(t.num_classes());
    Rat half(1, 2);
    for (int c = 0; c < t.num_classes(); ++c) {
        Cyclotomic sq = a[c] * a[c];
        Cyclotomic pw = a[t.power_class(c, 2)];
        sym[c] = half * (sq + pw);
        alt[c] = half * (sq - pw);
    }
    return {ClassFunction(&t, std::move(sym)), ClassFunction(&t, std::move(alt))};
}

struct FusionMap {
    enum class Kind { Subgroup, Quotient };
    const CharacterTable* source = nullptr;
    const CharacterTable* target = nullptr;
    std::vector<int> map;  // 0-based target class per source class
    Kind kind = Kind::Subgroup;
};

inline std::vector<std::string> validate_fusion(const FusionMap& f)
{
    std::vector<std::string> bad;
    const CharacterTable& s = *f.source;
    const CharacterTable& t = *f.target;
    if (static_cast<int>(f.map.size()) != s.num_classes())
        return {"fusion map length differs from source class count"};
    for (int c = 0; c < s.num_classes(); ++c)
        if (f.map[c] < 0 || f.map[c] >= t.num_classes())
            return {"fusion image out of range at class " + std::to_string(c + 1)};
    if (f.kind == FusionMap::Kind::Subgroup) {
        for (int c = 0; c < s.num_classes(); ++c) {
            int i = f.map[c];
            if (s.element_order(c) != t.element_order(i))
                bad.push_back("element order not preserved at class " + std::to_string(c + 1));
            if (!mpz_divisible_p(t.classes[i].centralizer_order.get_mpz_t(),
                                 s.classes[c].centralizer_order.get_mpz_t()))
                bad.push_back("centralizer order does not divide at class " + std::to_string(c + 1));
        }
    } else {
        if (!mpz_divisible_p(s.order.get_mpz_t(), t.order.get_mpz_t()))
            return {"target group order does not divide source group order"};
        Int z = s.order / t.order;
        for (int c = 0; c < s.num_classes(); ++c)
            if (s.element_order(c) % t.element_order(f.map[c]) != 0)
                bad.push_back("image element order does not divide at class " + std::to_string(c + 1));
        for (int i = 0; i < t.num_classes(); ++i) {
            Int sum = 0;
            for (int c = 0; c < s.num_classes(); ++c)
                if (f.map[c] == i)
                    sum += s.class_size(c);
            if (sum != z * t.class_size(i))
                bad.push_back("preimage sizes of target class " + std::to_string(i + 1) +
                              " sum to " + sum.get_str() + ", expected " +
                              Int(z * t.class_size(i)).get_str());
        }
    }
    return bad;
}

// chi on the quotient pulled back to the big group: chihat(c) = chi(f(c)).
inline ClassFunction lift_through_quotient(const ClassFunction& chi, const FusionMap& f)
{
    if (f.kind != FusionMap::Kind::Quotient)
        throw std::invalid_argument("lift_through_quotient needs a quotient fusion");
    if (chi.table() != f.target)
        throw TableMismatchError();
    std::vector<Cyclotomic> v(f.source->num_classes());
    for (int c = 0; c < f.source->num_classes(); ++c)
        v[c] = chi[f.map[c]];
    return ClassFunction(f.source, std::move(v));
}

// Frobenius induction along a subgroup fusion.
inline ClassFunction induce(const ClassFunction& phi, const FusionMap& f)
{
    if (f.kind != FusionMap::Kind::Subgroup)
        throw std::invalid_argument("induce needs a subgroup fusion");
    if (phi.table() != f.source)
        throw TableMismatchError();
    const CharacterTable& h = *f.source;
    const CharacterTable& g = *f.target;
    std::vector<Cyclotomic> v(g.num_classes());
    for (int cc = 0; cc < g.num_classes(); ++cc) {
        Cyclotomic acc;
        for (int c = 0; c < h.num_classes(); ++c)
            if (f.map[c] == cc)
                acc += Rat(Int(1), h.classes[c].centralizer_order) * phi[c];
        v[cc] = Rat(g.classes[cc].centralizer_order) * acc;
    }
    return ClassFunction(&g, std::move(v));
}

inline ClassFunction restrict_along(const ClassFunction& chi, const FusionMap& f)
{
    if (f.kind != FusionMap::Kind::Subgroup)
        throw std::invalid_argument("restrict_along needs a subgroup fusion");
    if (chi.table() != f.target)
        throw TableMismatchError();
    std::vector<Cyclotomic> v(f.source->num_classes());
    for (int c = 0; c < f.source->num_classes(); ++c)
        v[c] = chi[f.map[c]];
    return ClassFunction(f.source, std::move(v));
}

namespace table_detail {
// Index of the irreducible row equal to `wanted`, or -1.
inline int find_row(const CharacterTable& t, const std::vector<Cyclotomic>& wanted)
{
    for (size_t i = 0; i < t.irr.size(); ++i)
        if (t.irr[i] == wanted)
            return static_cast<int>(i);
    return -1;
}
}  // namespace table_detail

// Permutation of irreducibles induced by the Galois substitution
// zeta -> zeta^k on values (k coprime to the exponent); nullopt if some image
// row is missing, which validate() reports as a Galois-closure violation.
inline std::optional<std::vector<int>> galois_row_permutation(const CharacterTable& t, long k)
{
    std::vector<int> perm(t.irr.size());
    for (size_t i = 0; i < t.irr.size(); ++i) {
        std::vector<Cyclotomic> img(t.num_classes());
        for (int c = 0; c < t.num_classes(); ++c)
            img[c] = t.irr[i][c].galois(k);
        int j = table_detail::find_row(t, img);
        if (j < 0)
            return std::nullopt;
        perm[i] = j;
    }
    return perm;
}

// Permutation of irreducibles induced by complex conjugation.
inline std::vector<int> conjugation_row_permutation(const CharacterTable& t)
{
    std::vector<int> perm(t.irr.size());
    for (size_t i = 0; i < t.irr.size(); ++i) {
        std::vector<Cyclotomic> img(t.num_classes());
        for (int c = 0; c < t.num_classes(); ++c)
            img[c] = t.irr[i][c].conjugate();
        int j = table_detail::find_row(t, img);
        if (j < 0)
            throw std::domain_error("table not closed under complex conjugation");
        perm[i] = j;
    }
    return perm;
}

// Integer coordinates of a virtual character over the irreducible basis;
// throws when some inner product is not a rational integer.
inline std::vector<Int> irreducible_coordinates(const ClassFunction& v)
{
    const CharacterTable& t = *v.table();
    std::vector<Int> coords;
    coords.reserve(t.irr.size());
    for (size_t i = 0; i < t.irr.size(); ++i) {
        Cyclotomic ip = inner_product(v, t.irreducible(static_cast<int>(i)));
        if (!ip.is_rational())
            throw std::domain_error("not a virtual character: irrational multiplicity");
        Rat q = ip.rational_value();
        if (q.get_den() != 1)
            throw std::domain_error("not a virtual character: fractional multiplicity");
        coords.push_back(q.get_num());
    }
    return coords;
}

inline ClassFunction from_irreducible_coordinates(const CharacterTable& t,
                                                  const std::vector<Int>& coords)
{
    std::vector<Cyclotomic> v(t.num_classes());
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] == 0)
            continue;
        for (int c = 0; c < t.num_classes(); ++c)
            v[c] += Rat(coords[i]) * t.irr[i][c];
    }
    return ClassFunction(&t, std::move(v));
}

}  // namespace ctab
