#pragma once

// Whole-table tree runs and the report emitters: the text catalog (node
// labels are 1-based character positions, exceptional vertices print as
// "(i+j)", Galois ambiguity as "modulo <...>", kernel orders as "(|K| = n)"),
// DOT graphs, and machine-readable JSON with stable key order.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctab/brauer_tree.hpp"
#include "ctab/table_search.hpp"

namespace ctab {

struct BlockReport {
    Block block;
    CyclicStatus status;
    Int kernel_order = 1;
    bool contradiction = false;
    std::string message;
    std::vector<BrauerTree> trees;  // survivors, pre-classing
    std::vector<TreeClassInfo> classes;
    int inherited_from = -1;  // block index (0-based) when transported along an automorphism
};

struct TreesRun {
    const CharacterTable* table = nullptr;
    long l = 0;
    std::vector<BlockReport> blocks;

    bool any_contradiction() const
    {
        for (auto& b : blocks)
            if (b.contradiction)
                return true;
        return false;
    }
};

struct SolveAllOptions {
    size_t pool_budget = 500;
    std::vector<ProjectiveChar> extra_pool;  // e.g. induced from subgroups
    bool use_involution = true;
    bool use_automorphisms = true;  // orbit transport and the conj-composed involution
};

namespace report_detail {

// The unique order-2 automorphism when there is exactly one, else nothing.
inline std::optional<std::vector<int>> unique_involutory_automorphism(
    const TableAutomorphismGroup& g)
{
    std::optional<std::vector<int>> found;
    for (auto& a : g.elements) {
        if (a.is_identity())
            continue;
        bool order2 = true;
        for (size_t i = 0; i < a.class_perm.size() && order2; ++i)
            order2 = a.class_perm[a.class_perm[i]] == static_cast<int>(i);
        if (!order2)
            continue;
        if (found)
            return std::nullopt;  // not unique
        found = a.char_perm;
    }
    return found;
}

// Transport a solved tree set along a table automorphism onto another block.
// Returns trees expressed in the target problem's vertex numbering, or
// nothing when the structures fail to line up (the caller then solves fresh).
inline std::optional<std::vector<BrauerTree>> transport_trees(
    const std::vector<BrauerTree>& trees, const std::vector<int>& char_perm, const Block& to_block,
    const CyclicStatus& to_status, const CharacterTable& t)
{
    std::vector<TreeVertex> target_vertices;
    try {
        target_vertices = tree_detail::make_vertices(to_block, to_status, t);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    auto find_target_vertex = [&](const std::vector<int>& members) {
        for (size_t w = 0; w < target_vertices.size(); ++w)
            if (target_vertices[w].members == members)
                return static_cast<int>(w);
        return -1;
    };
    std::vector<BrauerTree> out;
    for (auto& tree : trees) {
        std::vector<int> vmap(tree.vertices.size(), -1);
        for (size_t u = 0; u < tree.vertices.size(); ++u) {
            std::vector<int> mapped;
            for (int i : tree.vertices[u].members)
                mapped.push_back(char_perm[i]);
            std::sort(mapped.begin(), mapped.end());
            int w = find_target_vertex(mapped);
            if (w < 0)
                return std::nullopt;
            vmap[u] = w;
        }
        BrauerTree nt;
        nt.vertices = target_vertices;
        nt.multiplicity = tree.multiplicity;
        for (auto& [u, v] : tree.edges)
            nt.edges.push_back(make_edge(vmap[u], vmap[v]));
        std::sort(nt.edges.begin(), nt.edges.end());
        out.push_back(std::move(nt));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace report_detail

// Full run over all blocks of (t, l): block decomposition, cyclic detection,
// shared projective pool, one solve per automorphism orbit, and a transport
// of the solution to the other orbit members.
inline TreesRun solve_all(const CharacterTable& t, long l, const SolveAllOptions& options = {})
{
    TreesRun run;
    run.table = &t;
    run.l = l;
    auto blocks = compute_blocks(t, l);

    std::vector<ProjectiveChar> pool =
        tensor_closure(defect_zero_seeds(t, blocks), t, std::max(options.pool_budget, size_t(1)));
    for (auto& p : options.extra_pool)
        pool.push_back(p);

    std::optional<TableAutomorphismGroup> autos;
    std::optional<std::vector<int>> alpha;
    if (options.use_automorphisms) {
        autos = table_automorphisms(t);
        alpha = report_detail::unique_involutory_automorphism(*autos);
    }

    run.blocks.resize(blocks.size());
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        run.blocks[bi].block = blocks[bi];
        run.blocks[bi].status = cyclic_status(blocks[bi], t);
        run.blocks[bi].kernel_order = block_kernel_order(blocks[bi], t);
    }

    std::vector<bool> solved(blocks.size(), false);
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        BlockReport& rep = run.blocks[bi];
        if (!rep.status.cyclic_nontrivial() || solved[bi])
            continue;
        SolveOptions so;
        so.pool = pool;
        so.use_involution = options.use_involution;
        if (alpha) {
            // prefer plain conjugation; compose with alpha only when
            // conjugation alone does not stabilize the block
            std::vector<int> conj = conjugation_row_permutation(t);
            std::set<int> members(blocks[bi].members.begin(), blocks[bi].members.end());
            bool conj_stable = true;
            for (int i : blocks[bi].members)
                conj_stable = conj_stable && members.count(conj[i]);
            if (!conj_stable)
                so.automorphism_char_perm = alpha;
        }
        SolveResult res = solve_block(blocks[bi], rep.status, t, l, so);
        rep.contradiction = res.contradiction;
        rep.message = res.message;
        rep.trees = res.trees;
        rep.classes = res.classes;
        solved[bi] = true;
        if (res.contradiction || !autos)
            continue;
        // push the solution to automorphism images of this block
        for (auto& a : autos->elements) {
            if (a.is_identity())
                continue;
            std::set<int> image;
            for (int i : blocks[bi].members)
                image.insert(a.char_perm[i]);
            for (size_t bj = 0; bj < blocks.size(); ++bj) {
                if (bj == bi || solved[bj])
                    continue;
                std::set<int> members_j(blocks[bj].members.begin(), blocks[bj].members.end());
                if (image != members_j || !run.blocks[bj].status.cyclic_nontrivial())
                    continue;
                auto moved = report_detail::transport_trees(rep.trees, a.char_perm, blocks[bj],
                                                            run.blocks[bj].status, t);
                if (!moved)
                    continue;
                run.blocks[bj].trees = *moved;
                run.blocks[bj].classes = galois_classes(*moved, t, blocks[bj]);
                run.blocks[bj].inherited_from = static_cast<int>(bi);
                solved[bj] = true;
            }
        }
    }
    return run;
}

// ---------------------------------------------------------------------------
// Text rendering.

namespace report_detail {

inline std::string cycle_notation(const std::vector<int>& perm)
{
    std::string s;
    std::vector<bool> seen(perm.size(), false);
    for (size_t i = 0; i < perm.size(); ++i) {
        if (seen[i] || perm[i] == static_cast<int>(i))
            continue;
        s += "(";
        size_t j = i;
        bool first = true;
        while (!seen[j]) {
            seen[j] = true;
            s += (first ? "" : ",") + std::to_string(j + 1);
            first = false;
            j = static_cast<size_t>(perm[j]);
        }
        s += ")";
    }
    return s.empty() ? "()" : s;
}

// Path trees render as a chain "a - b - c"; general trees as an edge list.
inline std::string render_tree(const BrauerTree& tree)
{
    size_t nv = tree.vertices.size();
    std::vector<std::vector<int>> adj(nv);
    for (auto& [u, v] : tree.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    bool path = true;
    for (auto& a : adj)
        if (a.size() > 2)
            path = false;
    if (path && nv >= 1) {
        int start = -1;
        for (size_t v = 0; v < nv; ++v)
            if (adj[v].size() <= 1) {
                start = static_cast<int>(v);
                break;
            }
        std::string s;
        int prev = -1, cur = start;
        for (size_t step = 0; step < nv; ++step) {
            s += (step ? " - " : "") + tree.vertices[cur].label();
            int next = -1;
            for (int w : adj[cur])
                if (w != prev)
                    next = w;
            prev = cur;
            if (next < 0)
                break;
            cur = next;
        }
        return s;
    }
    std::string s = "edges";
    bool first = true;
    for (auto& [u, v] : tree.edges) {
        s += (first ? " " : ", ") + tree.vertices[u].label() + "-" + tree.vertices[v].label();
        first = false;
    }
    return s;
}

}  // namespace report_detail

inline std::string blocks_report_text(const CharacterTable& t, long l,
                                      const std::vector<Block>& blocks)
{
    std::ostringstream os;
    os << "table " << t.name << ", l = " << l << "\n";
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        const Block& b = blocks[bi];
        CyclicStatus st = cyclic_status(b, t);
        os << "block " << bi + 1 << ": characters {";
        for (size_t i = 0; i < b.members.size(); ++i)
            os << (i ? ", " : "") << b.members[i] + 1;
        os << "}, defect " << b.defect << ", " << st.to_string();
        if (!st.exceptional.empty()) {
            os << ", exceptional (";
            for (size_t i = 0; i < st.exceptional.size(); ++i)
                os << (i ? "+" : "") << st.exceptional[i] + 1;
            os << ")";
        }
        Int kernel = block_kernel_order(b, t);
        if (kernel > 1)
            os << "  (|K| = " << kernel.get_str() << ")";
        os << "\n";
    }
    return os.str();
}

inline std::string trees_report_text(const TreesRun& run)
{
    std::ostringstream os;
    os << "table " << run.table->name << ", l = " << run.l << "\n";
    for (size_t bi = 0; bi < run.blocks.size(); ++bi) {
        const BlockReport& rep = run.blocks[bi];
        os << "block " << bi + 1 << ": characters {";
        for (size_t i = 0; i < rep.block.members.size(); ++i)
            os << (i ? ", " : "") << rep.block.members[i] + 1;
        os << "}, defect " << rep.block.defect << ", " << rep.status.to_string() << "\n";
        if (!rep.status.cyclic_nontrivial())
            continue;
        if (rep.contradiction) {
            os << "  " << rep.message << "\n";
            continue;
        }
        for (auto& cls : rep.classes) {
            os << "  tree: " << report_detail::render_tree(cls.trees.front());
            if (!cls.generators.empty()) {
                os << "   modulo <";
                for (size_t g = 0; g < cls.generators.size(); ++g)
                    os << (g ? ", " : "") << report_detail::cycle_notation(cls.generators[g]);
                os << ">";
            }
            if (rep.kernel_order > 1)
                os << "   (|K| = " << rep.kernel_order.get_str() << ")";
            os << "\n";
        }
        if (rep.inherited_from >= 0)
            os << "  (inherited from block " << rep.inherited_from + 1
               << " via table automorphism)\n";
    }
    return os.str();
}

inline std::string dot_graph(const BrauerTree& tree, const std::string& graph_name)
{
    std::ostringstream os;
    os << "graph \"" << graph_name << "\" {\n";
    os << "  node [shape=circle];\n";
    for (size_t v = 0; v < tree.vertices.size(); ++v)
        os << "  v" << v << " [label=\"" << tree.vertices[v].label() << "\"];\n";
    for (auto& [u, v] : tree.edges)
        os << "  v" << u << " -- v" << v << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace ctab
