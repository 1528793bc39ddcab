#pragma once

// The Brauer tree solver for blocks with nontrivial cyclic defect.
//
// A TreeProblem carries one vertex per non-exceptional block member plus (for
// m > 1) a single vertex for the exceptional family. The solver pipeline is:
// admissibility from vanishing on l-singular classes, edge forcing from
// projective multiplicities to a fixed point, exhaustive enumeration of the
// remaining spanning trees, the Brauer-degree check, consistency against the
// projective pool, and finally classing modulo Galois relabeling. A Pruefer
// brute-force oracle enumerates all labeled trees with no candidate or
// forcing logic at all; solver and oracle must agree.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctab/blocks.hpp"
#include "ctab/projective.hpp"
#include "ctab/table.hpp"

namespace ctab {

struct ContradictionError : std::runtime_error {
    explicit ContradictionError(const std::string& what)
        : std::runtime_error("contradiction: " + what)
    {
    }
};

struct TreeVertex {
    bool exceptional = false;
    std::vector<int> members;  // ascending irreducible indices; size > 1 iff exceptional
    Int sum_degree = 0;        // sum of member degrees (display)
    Int member_degree = 0;     // common individual degree (degree equations)

    std::string label() const
    {
        if (!exceptional)
            return std::to_string(members.front() + 1);
        std::string s = "(";
        for (size_t i = 0; i < members.size(); ++i)
            s += (i ? "+" : "") + std::to_string(members[i] + 1);
        return s + ")";
    }
    friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
};

using Edge = std::pair<int, int>;  // vertex indices, first < second

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct BrauerTree {
    std::vector<TreeVertex> vertices;
    std::vector<Edge> edges;  // sorted
    long multiplicity = 1;

    friend bool operator==(const BrauerTree& a, const BrauerTree& b)
    {
        return a.edges == b.edges && a.vertices == b.vertices;
    }
    friend bool operator<(const BrauerTree& a, const BrauerTree& b) { return a.edges < b.edges; }
};

struct TreeProblem {
    const CharacterTable* table = nullptr;
    long l = 0;
    Block block;
    CyclicStatus status;
    std::vector<TreeVertex> vertices;
    std::vector<std::vector<Cyclotomic>> vertex_values;  // per vertex, all classes
    long e = 0;
    std::vector<std::set<int>> candidates;       // admissible neighbors (includes forced)
    std::set<Edge> forced;
    std::optional<std::vector<int>> involution;  // vertex self-map from chi -> conj(chi)^alpha

    size_t candidate_edge_count() const
    {
        size_t n = 0;
        for (size_t u = 0; u < candidates.size(); ++u)
            for (int v : candidates[u])
                if (static_cast<int>(u) < v)
                    ++n;
        return n;
    }
};

namespace tree_detail {

inline std::vector<TreeVertex> make_vertices(const Block& b, const CyclicStatus& st,
                                             const CharacterTable& t)
{
    std::set<int> exceptional(st.exceptional.begin(), st.exceptional.end());
    std::vector<TreeVertex> vs;
    for (int i : b.members) {
        if (exceptional.count(i))
            continue;
        TreeVertex v;
        v.members = {i};
        v.sum_degree = v.member_degree = t.irr[i][0].integer_value();
        vs.push_back(std::move(v));
    }
    if (!exceptional.empty()) {
        TreeVertex v;
        v.exceptional = true;
        v.members = st.exceptional;
        v.member_degree = t.irr[st.exceptional.front()][0].integer_value();
        for (int i : st.exceptional) {
            Int d = t.irr[i][0].integer_value();
            if (d != v.member_degree)
                throw std::domain_error("exceptional characters with unequal degrees");
            v.sum_degree += d;
        }
        vs.push_back(std::move(v));
    }
    return vs;
}

inline std::vector<std::vector<Cyclotomic>> vertex_value_rows(const std::vector<TreeVertex>& vs,
                                                              const CharacterTable& t)
{
    std::vector<std::vector<Cyclotomic>> rows;
    rows.reserve(vs.size());
    for (auto& v : vs) {
        std::vector<Cyclotomic> row(t.num_classes());
        for (int i : v.members)
            for (int c = 0; c < t.num_classes(); ++c)
                row[c] += t.irr[i][c];
        rows.push_back(std::move(row));
    }
    return rows;
}

// Generic leaf-stripping solver for quantity(vertex) = sum of incident edge
// quantities on a tree. Returns the edge assignment and the defect of the
// final balance (zero iff the system is consistent).
inline std::optional<std::map<Edge, Int>> leaf_strip(const std::vector<Edge>& edges,
                                                     std::vector<Int> remaining)
{
    size_t n = remaining.size();
    std::map<Edge, Int> assign;
    std::vector<bool> done(n, false);
    std::vector<std::set<int>> adj(n);
    for (auto& [u, v] : edges) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    for (size_t step = 0; step + 1 < n; ++step) {
        int leaf = -1;
        for (size_t v = 0; v < n; ++v)
            if (!done[v] && adj[v].size() == 1) {
                leaf = static_cast<int>(v);
                break;
            }
        if (leaf < 0)
            return std::nullopt;  // not a tree
        int other = *adj[leaf].begin();
        assign[make_edge(leaf, other)] = remaining[leaf];
        remaining[other] -= remaining[leaf];
        done[leaf] = true;
        adj[other].erase(leaf);
        adj[leaf].clear();
    }
    int root = -1;
    for (size_t v = 0; v < n; ++v)
        if (!done[v])
            root = static_cast<int>(v);
    if (root < 0 || remaining[root] != 0)
        return std::nullopt;
    return assign;
}

inline bool connected(const std::vector<Edge>& edges, size_t n)
{
    if (n == 0)
        return false;
    std::vector<int> parent(n);
    for (size_t i = 0; i < n; ++i)
        parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    size_t merges = 0;
    for (auto& [u, v] : edges) {
        int ru = find(u), rv = find(v);
        if (ru != rv) {
            parent[ru] = rv;
            ++merges;
        }
    }
    return merges == n - 1;
}

}  // namespace tree_detail

// Brauer-character degrees implied by the tree, or nullopt when some edge
// degree fails to be a positive integer. The exceptional vertex enters with
// the common individual degree of its members.
inline std::optional<std::map<Edge, Int>> degree_check(const BrauerTree& tree)
{
    std::vector<Int> deg;
    deg.reserve(tree.vertices.size());
    for (auto& v : tree.vertices)
        deg.push_back(v.member_degree);
    auto assign = tree_detail::leaf_strip(tree.edges, std::move(deg));
    if (!assign)
        return std::nullopt;
    for (auto& [e, d] : *assign)
        if (d <= 0)
            return std::nullopt;
    return assign;
}

// Per-vertex multiplicities of a projective character: plain inner product for
// a non-exceptional vertex; the member-sum inner product divided by m for the
// exceptional vertex, which is the per-member value for a true projective.
inline std::vector<Int> vertex_multiplicities(const ClassFunction& p,
                                              const std::vector<TreeVertex>& vertices,
                                              const CharacterTable& t, long m)
{
    std::vector<Int> out;
    out.reserve(vertices.size());
    for (auto& v : vertices) {
        Cyclotomic acc;
        for (int i : v.members)
            acc += inner_product(p, t.irreducible(i));
        if (!acc.is_rational())
            throw ContradictionError("projective pool multiplicity is irrational");
        Rat q = acc.rational_value();
        if (v.exceptional)
            q /= m;
        if (q.get_den() != 1 || q < 0)
            throw ContradictionError("projective pool multiplicity is not a nonnegative integer");
        out.push_back(q.get_num());
    }
    return out;
}

// Initial problem: candidates from l-singular value matching, plus the
// involution chi -> conj(chi)^alpha when it stabilizes the block.
// If only e candidate edges exist at all they are forced on the spot.
inline TreeProblem init_problem(const Block& b, const CyclicStatus& st, const CharacterTable& t,
                                long l, const std::optional<std::vector<int>>& char_involution = {})
{
    if (!st.cyclic_nontrivial())
        throw std::invalid_argument("init_problem: block is not cyclic with nontrivial defect");
    TreeProblem p;
    p.table = &t;
    p.l = l;
    p.block = b;
    p.status = st;
    p.vertices = tree_detail::make_vertices(b, st, t);
    p.vertex_values = tree_detail::vertex_value_rows(p.vertices, t);
    p.e = static_cast<long>(p.vertices.size()) - 1;
    if (p.e != st.e)
        throw std::logic_error("vertex count disagrees with e");

    std::vector<int> singular;
    for (int c = 0; c < t.num_classes(); ++c)
        if (!t.is_regular(c, l))
            singular.push_back(c);

    size_t nv = p.vertices.size();
    p.candidates.assign(nv, {});
    for (size_t u = 0; u < nv; ++u)
        for (size_t v = u + 1; v < nv; ++v) {
            bool ok = true;
            for (int c : singular)
                if (!(p.vertex_values[u][c] + p.vertex_values[v][c]).is_zero()) {
                    ok = false;
                    break;
                }
            if (ok) {
                p.candidates[u].insert(static_cast<int>(v));
                p.candidates[v].insert(static_cast<int>(u));
            }
        }
    for (size_t u = 0; u < nv; ++u)
        if (p.candidates[u].empty())
            throw ContradictionError("vertex " + p.vertices[u].label() +
                                     " admits no neighbor at all");

    if (char_involution) {
        // vertex-level involution; bail out (no constraint) when the map does
        // not respect the vertex structure
        std::vector<int> iota(nv, -1);
        bool usable = true;
        std::set<int> exc;
        for (auto& v : p.vertices)
            if (v.exceptional)
                exc.insert(v.members.begin(), v.members.end());
        for (size_t u = 0; u < nv && usable; ++u) {
            if (p.vertices[u].exceptional) {
                std::set<int> image;
                for (int i : p.vertices[u].members)
                    image.insert((*char_involution)[i]);
                usable = image == exc;
                iota[u] = static_cast<int>(u);
            } else {
                int img = (*char_involution)[p.vertices[u].members.front()];
                int target = -1;
                for (size_t w = 0; w < nv; ++w)
                    if (!p.vertices[w].exceptional && p.vertices[w].members.front() == img)
                        target = static_cast<int>(w);
                if (target < 0)
                    usable = false;
                else
                    iota[u] = target;
            }
        }
        if (usable)
            p.involution = std::move(iota);
    }

    if (p.candidate_edge_count() == static_cast<size_t>(p.e)) {
        for (size_t u = 0; u < nv; ++u)
            for (int v : p.candidates[u])
                if (static_cast<int>(u) < v)
                    p.forced.insert({static_cast<int>(u), v});
    }
    return p;
}

// Edge forcing to a fixed point. Implements, per pass:
//  (i) the dominance rule on projective multiplicities, in its sound general
//      form: an edge {i,j} is certain whenever the other candidates of i
//      cannot absorb m_i without it;
// (ii) every forced edge contributes its vertex sum to the pool;
// (iii) candidate pruning by forced-component acyclicity and by the invariant
//       line rule (a fixed vertex with two fixed forced neighbors keeps no
//       further fixed candidates);
// (iv) the mirror rule along the involution; plus the completion rule: when
//      forced and candidate edges together number exactly e, all are forced.
// Returns the newly forced edges in forcing order.
inline std::vector<Edge> force_edges_from_projectives(TreeProblem& p,
                                                      const std::vector<ProjectiveChar>& pool)
{
    const CharacterTable& t = *p.table;
    size_t nv = p.vertices.size();
    std::vector<std::vector<Int>> mults;
    for (auto& pc : pool)
        mults.push_back(vertex_multiplicities(pc.fn, p.vertices, t, p.status.m));

    std::vector<Edge> fresh;

    // union-find over forced components
    std::vector<int> parent(nv);
    for (size_t i = 0; i < nv; ++i)
        parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& [u, v] : p.forced) {
        int ru = find(u), rv = find(v);
        if (ru == rv)
            throw ContradictionError("forced edges contain a cycle");
        parent[ru] = rv;
    }

    auto force_edge = [&](int u, int v, auto&& self) -> void {
        Edge e = make_edge(u, v);
        if (p.forced.count(e))
            return;
        if (!p.candidates[u].count(v))
            throw ContradictionError("edge " + p.vertices[u].label() + "-" +
                                     p.vertices[v].label() + " forced but not admissible");
        int ru = find(u), rv = find(v);
        if (ru == rv)
            throw ContradictionError("forced edge closes a cycle at " + p.vertices[u].label() +
                                     "-" + p.vertices[v].label());
        parent[ru] = rv;
        p.forced.insert(e);
        fresh.push_back(e);
        if (p.forced.size() > static_cast<size_t>(p.e))
            throw ContradictionError("more forced edges than tree edges");
        // the vertex sum over a known edge is itself projective
        std::vector<Cyclotomic> sum(t.num_classes());
        for (int c = 0; c < t.num_classes(); ++c)
            sum[c] = p.vertex_values[u][c] + p.vertex_values[v][c];
        ClassFunction fn(&t, std::move(sum));
        mults.push_back(vertex_multiplicities(fn, p.vertices, t, p.status.m));
        // mirror rule
        if (p.involution) {
            int mu = (*p.involution)[u], mv = (*p.involution)[v];
            if (make_edge(mu, mv) != e)
                self(mu, mv, self);
        }
    };

    bool changed = true;
    while (changed) {
        changed = false;
        size_t forced_before = p.forced.size();

        for (size_t pi = 0; pi < mults.size(); ++pi) {
            // forcing appends edge-sum multiplicities to the pool, so take a
            // stable copy of the current row before any force happens
            const std::vector<Int> m = mults[pi];
            for (size_t i = 0; i < nv; ++i) {
                Int total = 0;
                for (int j : p.candidates[i])
                    total += m[j];
                std::vector<int> js(p.candidates[i].begin(), p.candidates[i].end());
                for (int j : js)
                    if (total - m[j] < m[i])
                        force_edge(static_cast<int>(i), j, force_edge);
            }
        }

        // prune: no candidate edge inside a forced component beyond the forced ones
        for (size_t u = 0; u < nv; ++u) {
            std::vector<int> drop;
            for (int v : p.candidates[u])
                if (!p.forced.count(make_edge(static_cast<int>(u), v)) &&
                    find(static_cast<int>(u)) == find(v))
                    drop.push_back(v);
            for (int v : drop) {
                p.candidates[u].erase(v);
                p.candidates[v].erase(static_cast<int>(u));
                changed = true;
            }
        }
        // prune: invariant line rule
        if (p.involution) {
            for (size_t u = 0; u < nv; ++u) {
                if ((*p.involution)[u] != static_cast<int>(u))
                    continue;
                int fixed_forced = 0;
                for (auto& [a, b] : p.forced) {
                    int other = -1;
                    if (a == static_cast<int>(u))
                        other = b;
                    else if (b == static_cast<int>(u))
                        other = a;
                    if (other >= 0 && (*p.involution)[other] == other)
                        ++fixed_forced;
                }
                if (fixed_forced < 2)
                    continue;
                std::vector<int> drop;
                for (int v : p.candidates[u])
                    if ((*p.involution)[v] == v &&
                        !p.forced.count(make_edge(static_cast<int>(u), v)))
                        drop.push_back(v);
                for (int v : drop) {
                    p.candidates[u].erase(v);
                    p.candidates[v].erase(static_cast<int>(u));
                    changed = true;
                }
            }
        }
        for (size_t u = 0; u < nv; ++u)
            if (p.candidates[u].empty())
                throw ContradictionError("vertex " + p.vertices[u].label() +
                                         " has no admissible neighbor left");
        // completion rule
        if (p.candidate_edge_count() == static_cast<size_t>(p.e) &&
            p.forced.size() < static_cast<size_t>(p.e)) {
            for (size_t u = 0; u < nv; ++u)
                for (int v : p.candidates[u])
                    if (static_cast<int>(u) < v &&
                        !p.forced.count(make_edge(static_cast<int>(u), v)))
                        force_edge(static_cast<int>(u), v, force_edge);
        }

        if (p.forced.size() != forced_before)
            changed = true;
    }
    return fresh;
}

// All spanning trees of the candidate graph through the forced edges, passing
// the involution closure, the invariant-line shape and the degree check.
// Deterministic lexicographic order on edge sets.
inline std::vector<BrauerTree> enumerate_trees(const TreeProblem& p)
{
    size_t nv = p.vertices.size();
    std::vector<Edge> all;
    for (size_t u = 0; u < nv; ++u)
        for (int v : p.candidates[u])
            if (static_cast<int>(u) < v)
                all.push_back({static_cast<int>(u), v});
    std::sort(all.begin(), all.end());

    std::vector<Edge> optional_edges;
    for (auto& e : all)
        if (!p.forced.count(e))
            optional_edges.push_back(e);

    std::vector<BrauerTree> out;
    std::vector<Edge> chosen(p.forced.begin(), p.forced.end());

    auto vertex_ok = [&](const std::vector<Edge>& edges) {
        if (p.involution) {
            std::set<Edge> es(edges.begin(), edges.end());
            for (auto& [u, v] : edges) {
                int mu = (*p.involution)[u], mv = (*p.involution)[v];
                if (!es.count(make_edge(mu, mv)))
                    return false;  // not involution-stable
            }
            // invariant vertices must induce a path: fixed-fixed degree <= 2
            std::vector<int> fixed_deg(nv, 0);
            for (auto& [u, v] : edges)
                if ((*p.involution)[u] == u && (*p.involution)[v] == v) {
                    ++fixed_deg[u];
                    ++fixed_deg[v];
                }
            for (size_t u = 0; u < nv; ++u)
                if ((*p.involution)[u] == static_cast<int>(u) && fixed_deg[u] > 2)
                    return false;
        }
        return true;
    };

    std::function<void(size_t)> walk = [&](size_t idx) {
        if (chosen.size() == static_cast<size_t>(p.e)) {
            if (!tree_detail::connected(chosen, nv))
                return;
            BrauerTree tree;
            tree.vertices = p.vertices;
            tree.edges = chosen;
            std::sort(tree.edges.begin(), tree.edges.end());
            tree.multiplicity = p.status.m;
            if (!vertex_ok(tree.edges))
                return;
            if (!degree_check(tree))
                return;
            out.push_back(std::move(tree));
            return;
        }
        if (idx >= optional_edges.size())
            return;
        size_t still_needed = static_cast<size_t>(p.e) - chosen.size();
        if (optional_edges.size() - idx < still_needed)
            return;
        // include optional_edges[idx] unless it closes a cycle
        {
            std::vector<int> parent(nv);
            for (size_t i = 0; i < nv; ++i)
                parent[i] = static_cast<int>(i);
            std::function<int(int)> find = [&](int x) {
                while (parent[x] != x)
                    x = parent[x] = parent[parent[x]];
                return x;
            };
            bool cycle = false;
            auto join = [&](const Edge& e) {
                int ru = find(e.first), rv = find(e.second);
                if (ru == rv) {
                    cycle = true;
                    return;
                }
                parent[ru] = rv;
            };
            for (auto& e : chosen)
                join(e);
            join(optional_edges[idx]);
            if (!cycle) {
                chosen.push_back(optional_edges[idx]);
                walk(idx + 1);
                chosen.pop_back();
            }
        }
        walk(idx + 1);
    };
    walk(0);
    std::sort(out.begin(), out.end());
    return out;
}

// Multiplicity rows of a whole pool against a fixed vertex set; computed once
// per block and reused across all candidate trees.
inline std::vector<std::vector<Int>> pool_multiplicities(const std::vector<ProjectiveChar>& pool,
                                                         const std::vector<TreeVertex>& vertices,
                                                         const CharacterTable& t, long m)
{
    std::vector<std::vector<Int>> rows;
    rows.reserve(pool.size());
    for (auto& pc : pool)
        rows.push_back(vertex_multiplicities(pc.fn, vertices, t, m));
    return rows;
}

// Multiplicities of the projective indecomposables implied by the tree must
// be nonnegative integers for every pool row.
inline bool projective_consistency(const BrauerTree& tree,
                                   const std::vector<std::vector<Int>>& mult_rows)
{
    for (auto& m : mult_rows) {
        auto assign = tree_detail::leaf_strip(tree.edges, std::vector<Int>(m));
        if (!assign)
            return false;
        for (auto& [e, a] : *assign)
            if (a < 0)
                return false;
    }
    return true;
}

inline bool projective_consistency(const BrauerTree& tree, const std::vector<ProjectiveChar>& pool,
                                   const CharacterTable& t)
{
    std::vector<std::vector<Int>> rows;
    try {
        rows = pool_multiplicities(pool, tree.vertices, t, tree.multiplicity);
    } catch (const ContradictionError&) {
        return false;
    }
    return projective_consistency(tree, rows);
}

// All labeled trees on the problem's vertex set via Pruefer sequences,
// filtered only by edge-sum vanishing on l-singular classes, the degree
// check and pool consistency. Independent of the forcing machinery.
inline std::vector<BrauerTree> brute_force_oracle(const Block& b, const CyclicStatus& st,
                                                  const CharacterTable& t, long l,
                                                  const std::vector<ProjectiveChar>& pool)
{
    if (!st.cyclic_nontrivial())
        throw std::invalid_argument("brute_force_oracle: block is not cyclic with nontrivial defect");
    std::vector<TreeVertex> vertices = tree_detail::make_vertices(b, st, t);
    auto values = tree_detail::vertex_value_rows(vertices, t);
    size_t nv = vertices.size();
    if (nv > 12)
        throw std::invalid_argument("brute_force_oracle: vertex bound exceeded");

    std::vector<int> singular;
    for (int c = 0; c < t.num_classes(); ++c)
        if (!t.is_regular(c, l))
            singular.push_back(c);
    // precompute pairwise vanishing and the pool multiplicity rows; both are
    // independent of the tree under consideration
    std::vector<std::vector<bool>> vanishes(nv, std::vector<bool>(nv, true));
    for (size_t u = 0; u < nv; ++u)
        for (size_t v = u + 1; v < nv; ++v) {
            for (int c : singular)
                if (!(values[u][c] + values[v][c]).is_zero()) {
                    vanishes[u][v] = vanishes[v][u] = false;
                    break;
                }
        }
    std::vector<std::vector<Int>> mult_rows = pool_multiplicities(pool, vertices, t, st.m);

    std::vector<BrauerTree> out;
    auto consider = [&](const std::vector<Edge>& edges) {
        for (auto& [u, v] : edges)
            if (!vanishes[u][v])
                return;
        BrauerTree tree;
        tree.vertices = vertices;
        tree.edges = edges;
        std::sort(tree.edges.begin(), tree.edges.end());
        tree.multiplicity = st.m;
        if (!degree_check(tree))
            return;
        if (!projective_consistency(tree, mult_rows))
            return;
        out.push_back(std::move(tree));
    };

    if (nv == 1)
        return out;
    if (nv == 2) {
        consider({make_edge(0, 1)});
        std::sort(out.begin(), out.end());
        return out;
    }
    // iterate all Pruefer sequences of length nv-2
    std::vector<int> seq(nv - 2, 0);
    while (true) {
        // decode
        std::vector<int> deg(nv, 1);
        for (int x : seq)
            ++deg[x];
        std::vector<Edge> edges;
        std::vector<int> d = deg;
        for (int x : seq) {
            int leaf = -1;
            for (size_t j = 0; j < nv; ++j)
                if (d[j] == 1) {
                    leaf = static_cast<int>(j);
                    break;
                }
            edges.push_back(make_edge(leaf, x));
            d[leaf] = 0;
            --d[x];
        }
        std::vector<int> last;
        for (size_t j = 0; j < nv; ++j)
            if (d[j] == 1)
                last.push_back(static_cast<int>(j));
        edges.push_back(make_edge(last[0], last[1]));
        consider(edges);
        // odometer
        size_t i = seq.size();
        while (i > 0) {
            --i;
            if (++seq[i] < static_cast<int>(nv))
                break;
            seq[i] = 0;
            if (i == 0) {
                std::sort(out.begin(), out.end());
                return out;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Galois classing and the full per-block pipeline.

struct TreeClassInfo {
    std::vector<BrauerTree> trees;               // class members, ascending
    std::vector<std::vector<int>> generators;    // char-level permutations linking them
};

// Permutations of the irreducibles induced by Galois substitutions that
// stabilize the block member set.
inline std::vector<std::vector<int>> block_galois_permutations(const CharacterTable& t,
                                                               const Block& b)
{
    std::set<int> members(b.members.begin(), b.members.end());
    std::set<std::vector<int>> seen;
    long n = t.exponent();
    for (long k = 1; k < n; ++k) {
        if (gcd_l(k, n) != 1)
            continue;
        auto perm = galois_row_permutation(t, k);
        if (!perm)
            continue;
        bool stable = true;
        for (int i : b.members)
            if (!members.count((*perm)[i])) {
                stable = false;
                break;
            }
        if (stable)
            seen.insert(*perm);
    }
    return {seen.begin(), seen.end()};
}

namespace tree_detail {

// Vertex relabeling induced by a character permutation, or nullopt when the
// permutation does not respect the vertex structure.
inline std::optional<std::vector<int>> vertex_map_of(const std::vector<TreeVertex>& vertices,
                                                     const std::vector<int>& char_perm)
{
    size_t nv = vertices.size();
    std::vector<int> vm(nv, -1);
    for (size_t u = 0; u < nv; ++u) {
        if (vertices[u].exceptional) {
            std::set<int> want(vertices[u].members.begin(), vertices[u].members.end());
            std::set<int> image;
            for (int i : vertices[u].members)
                image.insert(char_perm[i]);
            if (image != want)
                return std::nullopt;
            vm[u] = static_cast<int>(u);
        } else {
            int img = char_perm[vertices[u].members.front()];
            int target = -1;
            for (size_t w = 0; w < nv; ++w)
                if (!vertices[w].exceptional && vertices[w].members.front() == img)
                    target = static_cast<int>(w);
            if (target < 0)
                return std::nullopt;
            vm[u] = target;
        }
    }
    return vm;
}

inline std::vector<Edge> relabel_edges(const std::vector<Edge>& edges, const std::vector<int>& vm)
{
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (auto& [u, v] : edges)
        out.push_back(make_edge(vm[u], vm[v]));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace tree_detail

// Groups the surviving trees modulo relabeling by Galois permutations of the
// block members. Each class reports a deterministic minimal set of linking
// permutations: lexicographically least first, adding only permutations that
// connect trees not yet related.
inline std::vector<TreeClassInfo> galois_classes(const std::vector<BrauerTree>& trees,
                                                 const CharacterTable& t, const Block& b)
{
    std::vector<TreeClassInfo> out;
    if (trees.empty())
        return out;
    auto perms = block_galois_permutations(t, b);
    size_t n = trees.size();

    // all links (i, j, perm) with perm . tree_i = tree_j, i != j
    struct Link {
        size_t i, j;
        const std::vector<int>* perm;
    };
    std::vector<Link> links;
    for (size_t i = 0; i < n; ++i)
        for (auto& perm : perms) {
            auto vm = tree_detail::vertex_map_of(trees[i].vertices, perm);
            if (!vm)
                continue;
            std::vector<Edge> relabeled = tree_detail::relabel_edges(trees[i].edges, *vm);
            for (size_t j = 0; j < n; ++j)
                if (i != j && trees[j].edges == relabeled)
                    links.push_back({i, j, &perm});
        }

    std::vector<int> cls(n);
    for (size_t i = 0; i < n; ++i)
        cls[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (cls[x] != x)
            x = cls[x] = cls[cls[x]];
        return x;
    };
    // greedy: walk the permutations in lexicographic order, keep one as a
    // class generator exactly when it merges trees not yet related
    std::map<int, std::vector<std::vector<int>>> gens_by_root;
    for (auto& perm : perms) {
        std::set<int> merged_roots;
        for (auto& link : links) {
            if (link.perm != &perm)
                continue;
            int ri = find(static_cast<int>(link.i)), rj = find(static_cast<int>(link.j));
            if (ri == rj)
                continue;
            cls[std::max(ri, rj)] = std::min(ri, rj);
            merged_roots.insert(find(ri));
        }
        for (int r : merged_roots)
            gens_by_root[r].push_back(perm);
    }
    // roots recorded early may have merged further since
    {
        std::map<int, std::vector<std::vector<int>>> final_gens;
        for (auto& [r, gs] : gens_by_root)
            for (auto& g : gs)
                final_gens[find(r)].push_back(g);
        gens_by_root = std::move(final_gens);
    }

    std::map<int, TreeClassInfo> by_root;
    for (size_t i = 0; i < n; ++i)
        by_root[find(static_cast<int>(i))].trees.push_back(trees[i]);
    for (auto& [root, info] : by_root) {
        auto it = gens_by_root.find(root);
        if (it != gens_by_root.end())
            info.generators = it->second;
        out.push_back(std::move(info));
    }
    return out;
}

struct SolveOptions {
    std::vector<ProjectiveChar> pool;
    bool use_involution = true;
    // optional table automorphism (character permutation) composed with
    // complex conjugation for the invariant-line constraint
    std::optional<std::vector<int>> automorphism_char_perm;
};

struct SolveResult {
    bool contradiction = false;
    std::string message;
    TreeProblem problem;
    std::vector<BrauerTree> trees;            // survivors, pre-Galois-classing
    std::vector<TreeClassInfo> classes;
    std::vector<Edge> forced_by_projectives;  // diagnostics
};

inline SolveResult solve_block(const Block& b, const CyclicStatus& st, const CharacterTable& t,
                               long l, const SolveOptions& options = {})
{
    SolveResult res;
    std::optional<std::vector<int>> involution;
    if (options.use_involution) {
        std::vector<int> conj = conjugation_row_permutation(t);
        if (options.automorphism_char_perm) {
            std::vector<int> comp(conj.size());
            for (size_t i = 0; i < conj.size(); ++i)
                comp[i] = (*options.automorphism_char_perm)[conj[i]];
            conj = comp;
        }
        std::set<int> members(b.members.begin(), b.members.end());
        bool stable = true;
        for (int i : b.members)
            stable = stable && members.count(conj[i]);
        if (stable)
            involution = std::move(conj);
    }
    try {
        res.problem = init_problem(b, st, t, l, involution);
        res.forced_by_projectives = force_edges_from_projectives(res.problem, options.pool);
        std::vector<BrauerTree> enumerated = enumerate_trees(res.problem);
        std::vector<std::vector<Int>> mult_rows =
            pool_multiplicities(options.pool, res.problem.vertices, t, st.m);
        for (auto& tree : enumerated)
            if (projective_consistency(tree, mult_rows))
                res.trees.push_back(tree);
        if (res.trees.empty())
            throw ContradictionError("no tree survives all constraints");
        res.classes = galois_classes(res.trees, t, b);
    } catch (const ContradictionError& e) {
        res.contradiction = true;
        res.message = e.what();
    }
    return res;
}

}  // namespace ctab
