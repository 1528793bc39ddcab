#pragma once

// Table workbench: LLL reduction of class-function lattices over the exact
// rational Gram matrix, quotient-fusion and power-map candidate searches,
// table automorphisms, and degree matching for missing irreducibles.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ctab/gf.hpp"
#include "ctab/table.hpp"

namespace ctab {

// ---------------------------------------------------------------------------
// Lattices and LLL.

// Integer coordinate vectors together with a positive (semi)definite bilinear
// form on the coordinate space. For coordinates over the irreducible basis the
// form is the identity and the Gram matrix is the plain dot product.
struct LatticeBasis {
    std::vector<std::vector<Int>> vectors;
    std::vector<std::vector<Rat>> form;  // square, dimension = coordinate count

    static std::vector<std::vector<Rat>> identity_form(size_t dim)
    {
        std::vector<std::vector<Rat>> q(dim, std::vector<Rat>(dim, Rat(0)));
        for (size_t i = 0; i < dim; ++i)
            q[i][i] = 1;
        return q;
    }

    Rat dot(const std::vector<Int>& x, const std::vector<Int>& y) const
    {
        Rat acc(0);
        for (size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0)
                continue;
            Rat row(0);
            for (size_t j = 0; j < y.size(); ++j)
                if (y[j] != 0)
                    row += form[i][j] * Rat(y[j]);
            acc += Rat(x[i]) * row;
        }
        return acc;
    }

    std::vector<std::vector<Rat>> gram() const
    {
        size_t m = vectors.size();
        std::vector<std::vector<Rat>> g(m, std::vector<Rat>(m, Rat(0)));
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j)
                g[i][j] = dot(vectors[i], vectors[j]);
        return g;
    }
};

// Coordinates of virtual characters over the irreducible basis; the form is
// the identity because the irreducibles are orthonormal.
inline LatticeBasis lattice_from_class_functions(const std::vector<ClassFunction>& fns)
{
    if (fns.empty())
        throw std::invalid_argument("empty generating set");
    LatticeBasis b;
    for (auto& f : fns)
        b.vectors.push_back(irreducible_coordinates(f));
    b.form = LatticeBasis::identity_form(b.vectors.front().size());
    return b;
}

struct LLLResult {
    LatticeBasis basis;                       // reduced basis, zero rows removed
    std::vector<std::vector<Int>> transform;  // unimodular over the input rows:
                                              // transform * input = basis rows
                                              // followed by zero rows
};

namespace lll_detail {

struct GramSchmidt {
    std::vector<std::vector<Rat>> mu;  // mu[i][j], j < i
    std::vector<Rat> B;                // squared lengths of the GS vectors
};

// Exact GS data for rows 0..upto (inclusive); throws on an indefinite form.
inline GramSchmidt gram_schmidt(const LatticeBasis& b, size_t upto)
{
    size_t n = upto + 1;
    GramSchmidt gs;
    gs.mu.assign(n, {});
    gs.B.assign(n, Rat(0));
    std::vector<std::vector<Rat>> star(n);
    size_t dim = b.vectors.front().size();
    for (size_t i = 0; i < n; ++i) {
        std::vector<Rat> v(dim);
        for (size_t c = 0; c < dim; ++c)
            v[c] = Rat(b.vectors[i][c]);
        gs.mu[i].assign(i, Rat(0));
        for (size_t j = 0; j < i; ++j) {
            if (gs.B[j] == 0)
                continue;  // dependent predecessor contributes nothing
            // <b_i, b*_j> = <b_i, b_j> - sum_{k<j} mu[j][k] <b_i, b*_k>
            Rat num(0);
            for (size_t c = 0; c < dim; ++c) {
                Rat row(0);
                for (size_t c2 = 0; c2 < dim; ++c2)
                    if (star[j][c2] != 0)
                        row += b.form[c][c2] * star[j][c2];
                if (b.vectors[i][c] != 0)
                    num += Rat(b.vectors[i][c]) * row;
            }
            gs.mu[i][j] = num / gs.B[j];
            for (size_t c = 0; c < dim; ++c)
                v[c] -= gs.mu[i][j] * star[j][c];
        }
        // B_i = <v, v>
        Rat bb(0);
        for (size_t c = 0; c < dim; ++c) {
            if (v[c] == 0)
                continue;
            Rat row(0);
            for (size_t c2 = 0; c2 < dim; ++c2)
                if (v[c2] != 0)
                    row += b.form[c][c2] * v[c2];
            bb += v[c] * row;
        }
        if (bb < 0)
            throw std::invalid_argument("lll_reduce: form is not positive semidefinite");
        gs.B[i] = bb;
        star[i] = std::move(v);
    }
    return gs;
}

inline Int round_nearest(const Rat& q)
{
    // floor(q + 1/2): deterministic ties-up rounding
    Rat r = q + Rat(1, 2);
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return fl;
}

}  // namespace lll_detail

// Exact (M)LLL: accepts linearly dependent generating sets, returns a reduced
// basis of the same lattice plus the square unimodular row transform. The
// Lovasz parameter delta must lie in (1/4, 1].
inline LLLResult lll_reduce(const LatticeBasis& input, const Rat& delta = Rat(3, 4))
{
    if (delta <= Rat(1, 4) || delta > 1)
        throw std::invalid_argument("lll_reduce: delta out of range");
    size_t m0 = input.vectors.size();
    LatticeBasis work = input;
    std::vector<std::vector<Int>> u(m0, std::vector<Int>(m0, 0));
    for (size_t i = 0; i < m0; ++i)
        u[i][i] = 1;
    std::vector<std::vector<Int>> dead_rows;  // transform rows of zeroed vectors

    auto is_zero_vec = [](const std::vector<Int>& v) {
        for (auto& x : v)
            if (x != 0)
                return false;
        return true;
    };
    auto delete_row = [&](size_t k) {
        dead_rows.push_back(u[k]);
        work.vectors.erase(work.vectors.begin() + k);
        u.erase(u.begin() + k);
    };

    // drop zero inputs up front
    for (size_t i = work.vectors.size(); i-- > 0;)
        if (is_zero_vec(work.vectors[i]))
            delete_row(i);
    // definiteness check up front (covers inputs the main loop never touches)
    if (!work.vectors.empty())
        lll_detail::gram_schmidt(work, work.vectors.size() - 1);

    size_t k = 1;
    while (k < work.vectors.size()) {
        auto gs = lll_detail::gram_schmidt(work, k);
        // size-reduce b_k against all previous rows, highest first
        for (size_t j = k; j-- > 0;) {
            Int q = lll_detail::round_nearest(gs.mu[k][j]);
            if (q == 0)
                continue;
            for (size_t c = 0; c < work.vectors[k].size(); ++c)
                work.vectors[k][c] -= q * work.vectors[j][c];
            for (size_t c = 0; c < m0; ++c)
                u[k][c] -= q * u[j][c];
            for (size_t j2 = 0; j2 < j; ++j2)
                gs.mu[k][j2] -= Rat(q) * gs.mu[j][j2];
            gs.mu[k][j] -= Rat(q);
        }
        if (is_zero_vec(work.vectors[k])) {
            delete_row(k);
            if (k >= work.vectors.size())
                break;
            continue;
        }
        Rat lhs = gs.B[k];
        Rat rhs = (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.B[k - 1];
        if (lhs < rhs) {
            std::swap(work.vectors[k], work.vectors[k - 1]);
            std::swap(u[k], u[k - 1]);
            k = std::max<size_t>(k - 1, 1);
        } else {
            ++k;
        }
    }

    LLLResult res;
    res.basis = std::move(work);
    res.transform = res.basis.vectors.empty() ? std::vector<std::vector<Int>>{} : u;
    for (auto& row : dead_rows)
        res.transform.push_back(row);
    // sign normalization: first nonzero coordinate of every basis vector > 0
    for (size_t i = 0; i < res.basis.vectors.size(); ++i) {
        for (auto& x : res.basis.vectors[i]) {
            if (x == 0)
                continue;
            if (x < 0) {
                for (auto& y : res.basis.vectors[i])
                    y = -y;
                for (auto& y : res.transform[i])
                    y = -y;
            }
            break;
        }
    }
    return res;
}

// Checks the size-reduction and Lovasz conditions on an independent basis.
inline bool is_lll_reduced(const LatticeBasis& b, const Rat& delta = Rat(3, 4))
{
    if (b.vectors.empty())
        return true;
    auto gs = lll_detail::gram_schmidt(b, b.vectors.size() - 1);
    for (size_t i = 0; i < b.vectors.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            Rat a = gs.mu[i][j] < 0 ? -gs.mu[i][j] : gs.mu[i][j];
            if (a > Rat(1, 2))
                return false;
        }
        if (i > 0 && gs.B[i] < (delta - gs.mu[i][i - 1] * gs.mu[i][i - 1]) * gs.B[i - 1])
            return false;
    }
    return true;
}

inline Rat gram_determinant(const LatticeBasis& b)
{
    auto g = b.gram();
    size_t n = g.size();
    Rat det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && g[piv][col] == 0)
            ++piv;
        if (piv == n)
            return Rat(0);
        if (piv != col) {
            std::swap(g[piv], g[col]);
            det = -det;
        }
        det *= g[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (g[r][col] == 0)
                continue;
            Rat f = g[r][col] / g[col][col];
            for (size_t c = col; c < n; ++c)
                g[r][c] -= f * g[col][c];
        }
    }
    return det;
}

// ---------------------------------------------------------------------------
// Quotient fusion candidates.

// Candidate class fusions for a central quotient source -> target. The probes
// are class functions on the source paired positionally with the target's
// irreducibles: probes[i] is asserted to be the lift of target irreducible i,
// so a candidate map f must satisfy probes[i](c) = irr_i(f(c)) everywhere.
// Deterministic lexicographic order of results.
inline std::vector<FusionMap> quotient_fusion_candidates(const CharacterTable& src,
                                                         const CharacterTable& tgt,
                                                         const std::vector<ClassFunction>& probes)
{
    if (!mpz_divisible_p(src.order.get_mpz_t(), tgt.order.get_mpz_t()))
        throw std::invalid_argument("quotient_fusion_candidates: |source| not divisible by |target|");
    Int z = src.order / tgt.order;
    if (probes.size() > tgt.irr.size())
        throw std::invalid_argument("more probes than target irreducibles");
    for (auto& p : probes)
        if (p.table() != &src)
            throw TableMismatchError();

    int ns = src.num_classes(), nt = tgt.num_classes();
    std::vector<std::vector<int>> admissible(ns);
    for (int c = 0; c < ns; ++c)
        for (int i = 0; i < nt; ++i) {
            if (src.element_order(c) % tgt.element_order(i) != 0)
                continue;
            bool ok = true;
            for (size_t pi = 0; pi < probes.size() && ok; ++pi)
                ok = probes[pi][c] == tgt.irr[pi][i];
            if (ok)
                admissible[c].push_back(i);
        }

    std::vector<Int> want(nt);
    for (int i = 0; i < nt; ++i)
        want[i] = z * tgt.class_size(i);
    std::vector<Int> have(nt, 0);
    std::vector<int> assign(ns, -1);
    std::vector<FusionMap> out;

    std::function<void(int)> walk = [&](int c) {
        if (c == ns) {
            for (int i = 0; i < nt; ++i)
                if (have[i] != want[i])
                    return;
            FusionMap f;
            f.source = &src;
            f.target = &tgt;
            f.map = assign;
            f.kind = FusionMap::Kind::Quotient;
            out.push_back(std::move(f));
            return;
        }
        Int size_c = src.class_size(c);
        for (int i : admissible[c]) {
            if (have[i] + size_c > want[i])
                continue;
            have[i] += size_c;
            assign[c] = i;
            walk(c + 1);
            have[i] -= size_c;
            assign[c] = -1;
        }
    };
    walk(0);
    return out;
}

// ---------------------------------------------------------------------------
// Power map candidates.

// All maps c -> c^p consistent with order arithmetic, centralizer
// divisibility, Galois action of the probes (p coprime to the element order)
// and the Frobenius congruence probe(g^p) = probe(g)^p modulo the
// deterministic prime ideal above p. Probes must be virtual characters.
// The per-class constraints are independent, so the result is the cartesian
// product of the per-class admissible sets, in lexicographic order.
inline std::vector<std::vector<int>> powermap_candidates(const CharacterTable& t, long p,
                                                         const std::vector<ClassFunction>& probes)
{
    if (!is_prime(p))
        throw std::invalid_argument("powermap_candidates: p must be prime");
    for (auto& pr : probes)
        if (pr.table() != &t)
            throw TableMismatchError();
    PrimeIdealContext ctx = make_prime_ideal_context(p, t.exponent());
    int k = t.num_classes();
    std::vector<std::vector<int>> admissible(k);
    for (int c = 0; c < k; ++c) {
        long o = t.element_order(c);
        long want_order = o / gcd_l(o, p);
        for (int c2 = 0; c2 < k; ++c2) {
            if (t.element_order(c2) != want_order)
                continue;
            if (!mpz_divisible_p(t.classes[c2].centralizer_order.get_mpz_t(),
                                 t.classes[c].centralizer_order.get_mpz_t()))
                continue;
            bool ok = true;
            for (auto& pr : probes) {
                if (o % p != 0 && pr[c2] != pr[c].galois(p)) {
                    ok = false;
                    break;
                }
                Cyclotomic power(1);
                for (long i = 0; i < p; ++i)
                    power *= pr[c];
                if (!(reduce_mod_l(pr[c2] - power, ctx) == ctx.field().zero())) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                admissible[c].push_back(c2);
        }
        if (admissible[c].empty())
            return {};
    }
    std::vector<std::vector<int>> out;
    std::vector<int> pick(k, 0);
    while (true) {
        std::vector<int> pm(k);
        for (int c = 0; c < k; ++c)
            pm[c] = admissible[c][pick[c]];
        out.push_back(std::move(pm));
        int c = k;
        while (c > 0) {
            --c;
            if (++pick[c] < static_cast<int>(admissible[c].size()))
                break;
            pick[c] = 0;
            if (c == 0)
                return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Table automorphisms.

struct TableAutomorphism {
    std::vector<int> class_perm;  // pi: class c -> pi(c)
    std::vector<int> char_perm;   // rho with chi_{rho(i)}(c) = chi_i(pi(c))

    friend bool operator==(const TableAutomorphism&, const TableAutomorphism&) = default;
    friend bool operator<(const TableAutomorphism& a, const TableAutomorphism& b)
    {
        return a.class_perm < b.class_perm;
    }
    bool is_identity() const
    {
        for (size_t i = 0; i < class_perm.size(); ++i)
            if (class_perm[i] != static_cast<int>(i))
                return false;
        return true;
    }
};

struct TableAutomorphismGroup {
    std::vector<TableAutomorphism> generators;  // deterministic choice
    std::vector<TableAutomorphism> elements;    // the whole group, sorted
    Int order = 1;
};

// All class permutations preserving orders, centralizer orders and power maps
// that permute the set of irreducible rows.
inline TableAutomorphismGroup table_automorphisms(const CharacterTable& t)
{
    int k = t.num_classes();
    // candidate targets share order, centralizer and column value multiset
    auto column_key = [&](int c) {
        std::multiset<Cyclotomic> vals;
        for (size_t i = 0; i < t.irr.size(); ++i)
            vals.insert(t.irr[i][c]);
        return vals;
    };
    std::vector<std::multiset<Cyclotomic>> keys(k);
    for (int c = 0; c < k; ++c)
        keys[c] = column_key(c);
    std::vector<std::vector<int>> candidates(k);
    for (int c = 0; c < k; ++c)
        for (int c2 = 0; c2 < k; ++c2)
            if (t.element_order(c) == t.element_order(c2) &&
                t.classes[c].centralizer_order == t.classes[c2].centralizer_order &&
                keys[c] == keys[c2])
                candidates[c].push_back(c2);

    // search order: (element order, centralizer, value fingerprint), then index
    std::vector<int> order_of_assignment(k);
    for (int c = 0; c < k; ++c)
        order_of_assignment[c] = c;
    std::sort(order_of_assignment.begin(), order_of_assignment.end(), [&](int a, int b) {
        if (t.element_order(a) != t.element_order(b))
            return t.element_order(a) < t.element_order(b);
        if (t.classes[a].centralizer_order != t.classes[b].centralizer_order)
            return t.classes[a].centralizer_order < t.classes[b].centralizer_order;
        if (keys[a] != keys[b])
            return std::lexicographical_compare(keys[a].begin(), keys[a].end(), keys[b].begin(),
                                                keys[b].end());
        return a < b;
    });

    std::vector<int> perm(k, -1);
    std::vector<bool> used(k, false);
    std::vector<TableAutomorphism> found;

    auto powermaps_ok = [&](int just_set) {
        for (auto& [p, pm] : t.power_maps) {
            // forward: pi(c^p) = pi(c)^p where both sides known
            int c = just_set;
            if (perm[pm[c]] >= 0 && pm[perm[c]] != perm[pm[c]])
                return false;
            for (int c2 = 0; c2 < k; ++c2)
                if (perm[c2] >= 0 && pm[c2] == just_set && perm[pm[c2]] != pm[perm[c2]])
                    return false;
        }
        return true;
    };

    std::function<void(int)> walk = [&](int depth) {
        if (depth == k) {
            // rows must permute
            std::vector<int> rho(t.irr.size(), -1);
            std::vector<bool> row_used(t.irr.size(), false);
            for (size_t i = 0; i < t.irr.size(); ++i) {
                std::vector<Cyclotomic> img(k);
                for (int c = 0; c < k; ++c)
                    img[c] = t.irr[i][perm[c]];
                int j = table_detail::find_row(t, img);
                if (j < 0 || row_used[j])
                    return;
                row_used[j] = true;
                rho[i] = j;
            }
            found.push_back({perm, rho});
            return;
        }
        int c = order_of_assignment[depth];
        for (int c2 : candidates[c]) {
            if (used[c2])
                continue;
            perm[c] = c2;
            used[c2] = true;
            if (powermaps_ok(c))
                walk(depth + 1);
            used[c2] = false;
            perm[c] = -1;
        }
    };
    walk(0);
    std::sort(found.begin(), found.end());

    TableAutomorphismGroup g;
    g.elements = found;
    g.order = static_cast<long>(found.size());
    // greedy deterministic generating set
    std::set<std::vector<int>> span;
    auto compose = [&](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> r(a.size());
        for (size_t i = 0; i < a.size(); ++i)
            r[i] = a[b[i]];
        return r;
    };
    std::vector<int> id(k);
    for (int i = 0; i < k; ++i)
        id[i] = i;
    span.insert(id);
    for (auto& a : found) {
        if (span.count(a.class_perm))
            continue;
        g.generators.push_back(a);
        // close the span
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<std::vector<int>> cur(span.begin(), span.end());
            for (auto& x : cur)
                for (auto& gen : g.generators) {
                    auto y = compose(x, gen.class_perm);
                    if (span.insert(y).second)
                        grew = true;
                }
        }
    }
    return g;
}

// Candidate maps (power maps or fusions as index vectors on the classes) can
// come out in several copies equivalent under a table automorphism; this
// groups them: two maps f, f' are equivalent iff f' = pi o f o pi^{-1} for
// some automorphism pi.
inline std::vector<std::vector<std::vector<int>>> class_maps_modulo_automorphisms(
    const std::vector<std::vector<int>>& maps, const TableAutomorphismGroup& g)
{
    std::vector<std::vector<std::vector<int>>> out;
    std::set<std::vector<int>> seen;
    for (auto& f : maps) {
        if (seen.count(f))
            continue;
        std::vector<std::vector<int>> cls;
        for (auto& a : g.elements) {
            std::vector<int> inv(a.class_perm.size());
            for (size_t i = 0; i < a.class_perm.size(); ++i)
                inv[a.class_perm[i]] = static_cast<int>(i);
            std::vector<int> conj(f.size());
            for (size_t c = 0; c < f.size(); ++c)
                conj[c] = a.class_perm[f[inv[c]]];
            if (seen.insert(conj).second)
                cls.push_back(conj);
        }
        std::sort(cls.begin(), cls.end());
        out.push_back(std::move(cls));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Degree matching.

struct SignedDegree {
    int sign = 1;
    Int degree;
    friend bool operator==(const SignedDegree&, const SignedDegree&) = default;
    friend bool operator<(const SignedDegree& a, const SignedDegree& b)
    {
        if (a.degree != b.degree)
            return a.degree > b.degree;  // larger degrees first
        return a.sign > b.sign;          // + before -
    }
};

// All ways to write `target` as a sum of exactly `terms` signed degrees drawn
// from the multiset (each occurrence usable once), by meet-in-the-middle over
// the distinct values. Supports terms <= 24.
inline std::vector<std::vector<SignedDegree>> decompose_by_degrees(const Int& target, long terms,
                                                                   std::vector<Int> degrees)
{
    if (terms < 0 || terms > 24)
        throw std::invalid_argument("decompose_by_degrees: term count out of supported range");
    std::map<Int, long> mult;
    for (auto& d : degrees)
        ++mult[d];
    std::vector<std::pair<Int, long>> vals(mult.begin(), mult.end());
    size_t half = vals.size() / 2;

    // per side: map (used terms, achieved sum) -> list of count assignments,
    // a count assignment being (plus_i, minus_i) per distinct value
    using Counts = std::vector<std::pair<long, long>>;
    using SideMap = std::map<std::pair<long, Int>, std::vector<Counts>>;
    auto enumerate = [&](size_t from, size_t to) {
        SideMap side;
        Counts counts(to - from);
        std::function<void(size_t, long, Int)> rec = [&](size_t idx, long used, Int sum) {
            if (used > terms)
                return;
            if (idx == to - from) {
                side[{used, sum}].push_back(counts);
                return;
            }
            auto& [value, avail] = vals[from + idx];
            for (long plus = 0; plus <= avail; ++plus)
                for (long minus = 0; plus + minus <= avail; ++minus) {
                    counts[idx] = {plus, minus};
                    rec(idx + 1, used + plus + minus, sum + Int(plus - minus) * value);
                }
            counts[idx] = {0, 0};
        };
        rec(0, 0, Int(0));
        return side;
    };
    SideMap a = enumerate(0, half);
    SideMap b = enumerate(half, vals.size());

    std::vector<std::vector<SignedDegree>> out;
    for (auto& [key, alist] : a) {
        auto need = std::make_pair(terms - key.first, Int(target - key.second));
        auto it = b.find(need);
        if (it == b.end())
            continue;
        for (auto& ca : alist)
            for (auto& cb : it->second) {
                std::vector<SignedDegree> dec;
                auto emit = [&](size_t vi, const std::pair<long, long>& pm) {
                    for (long r = 0; r < pm.first; ++r)
                        dec.push_back({1, vals[vi].first});
                    for (long r = 0; r < pm.second; ++r)
                        dec.push_back({-1, vals[vi].first});
                };
                for (size_t i = 0; i < ca.size(); ++i)
                    emit(i, ca[i]);
                for (size_t i = 0; i < cb.size(); ++i)
                    emit(half + i, cb[i]);
                std::sort(dec.begin(), dec.end());
                out.push_back(std::move(dec));
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Convenience wrapper reading degree and norm off a virtual character.
inline std::vector<std::vector<SignedDegree>> decompose_by_degrees(const ClassFunction& v,
                                                                   std::vector<Int> degrees)
{
    Cyclotomic nrm = norm(v);
    if (!nrm.is_rational() || nrm.rational_value().get_den() != 1)
        throw std::invalid_argument("decompose_by_degrees: norm is not an integer");
    return decompose_by_degrees(v.degree().integer_value(), nrm.rational_value().get_num().get_si(),
                                std::move(degrees));
}

}  // namespace ctab
