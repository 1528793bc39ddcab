// ctab: block decompositions, Brauer trees and table-workbench searches on
// character table files. See README for the file formats.
//
// Exit codes: 0 success, 1 input/validation failure, 2 contradiction reports.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <list>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctab/blocks.hpp"
#include "ctab/brauer_tree.hpp"
#include "ctab/projective.hpp"
#include "ctab/report.hpp"
#include "ctab/table_io.hpp"
#include "ctab/table_search.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace ctab;

namespace {

struct App {
    bool use_json = false;
    bool force = false;
    std::string out_dir;
    std::list<CharacterTable> tables;  // stable addresses

    const CharacterTable& load(const std::string& path)
    {
        tables.push_back(load_table(path, force));
        return tables.back();
    }

    // Resolve the source table of a fusion file among the *.tbl files next to it.
    const CharacterTable* find_table_by_name(const std::string& name, const fs::path& near)
    {
        for (auto& t : tables)
            if (t.name == name)
                return &t;
        std::vector<fs::path> candidates;
        for (auto& entry : fs::directory_iterator(near.parent_path().empty() ? "." : near.parent_path()))
            if (entry.path().extension() == ".tbl")
                candidates.push_back(entry.path());
        std::sort(candidates.begin(), candidates.end());
        for (auto& p : candidates) {
            try {
                CharacterTable t = load_table(p.string(), force);
                if (t.name == name) {
                    tables.push_back(std::move(t));
                    return &tables.back();
                }
            } catch (const std::exception&) {
                continue;
            }
        }
        return nullptr;
    }

    fs::path out_path(const std::string& filename) const
    {
        std::string dir = out_dir;
        if (dir.empty()) {
            const char* env = std::getenv("CTAB_OUT_DIR");
            dir = env ? env : ".";
        }
        return fs::path(dir) / filename;
    }
};

long parse_prime(const std::string& s)
{
    long l = std::stol(s);
    if (!is_prime(l))
        throw CLI::ValidationError("l must be prime, got " + s);
    return l;
}

std::vector<ProjectiveChar> induced_pool(App& app, const CharacterTable& target,
                                         const std::vector<std::string>& fusion_paths, long l)
{
    std::vector<ProjectiveChar> extra;
    for (auto& path : fusion_paths) {
        FusionFile ff = load_fusion_file(path);
        const CharacterTable* src = app.find_table_by_name(ff.source_name, path);
        if (!src)
            throw std::runtime_error("cannot find table '" + ff.source_name + "' near " + path);
        FusionMap f = bind_fusion(ff, *src, target, app.force);
        if (f.kind != FusionMap::Kind::Subgroup)
            throw std::runtime_error(path + ": induction needs a subgroup fusion");
        for (auto& seed : defect_zero_seeds(*src, l))
            extra.push_back(induce_projective(seed, f, l));
    }
    return extra;
}

json block_to_json(const Block& b, const CyclicStatus& st, const Int& kernel)
{
    json j;
    j["members"] = json::array();
    for (int i : b.members)
        j["members"].push_back(i + 1);
    j["defect"] = b.defect;
    switch (st.kind) {
        case CyclicStatus::Kind::TrivialDefect: j["status"] = "defect0"; break;
        case CyclicStatus::Kind::CyclicNontrivial: j["status"] = "cyclic"; break;
        case CyclicStatus::Kind::NotCyclic: j["status"] = "notcyclic"; break;
        case CyclicStatus::Kind::Undecided: j["status"] = "undecided"; break;
    }
    if (st.cyclic_nontrivial()) {
        j["e"] = st.e;
        j["m"] = st.m;
        j["exceptional"] = json::array();
        for (int i : st.exceptional)
            j["exceptional"].push_back(i + 1);
    }
    j["kernel_order"] = kernel.get_str();
    return j;
}

int cmd_validate(App& app, const std::vector<std::string>& paths)
{
    int status = 0;
    json out = json::array();
    for (auto& path : paths) {
        std::vector<std::string> bad;
        std::string error;
        try {
            std::ifstream in(path);
            if (!in)
                throw std::runtime_error("cannot open " + path);
            CharacterTable t = parse_table(in, path);
            bad = t.validate();
        } catch (const std::exception& e) {
            error = e.what();
        }
        if (app.use_json) {
            json j;
            j["file"] = path;
            j["ok"] = error.empty() && bad.empty();
            if (!error.empty())
                j["error"] = error;
            j["violations"] = bad;
            out.push_back(j);
        } else if (!error.empty()) {
            std::cout << path << ": error: " << error << "\n";
        } else if (bad.empty()) {
            std::cout << path << ": ok\n";
        } else {
            std::cout << path << ": " << bad.size() << " violation(s)\n";
            for (auto& v : bad)
                std::cout << "  - " << v << "\n";
        }
        if (!error.empty() || !bad.empty())
            status = 1;
    }
    if (app.use_json)
        std::cout << out.dump(2) << "\n";
    return status;
}

int cmd_blocks(App& app, const std::string& path, long l)
{
    const CharacterTable& t = app.load(path);
    auto blocks = compute_blocks(t, l);
    if (app.use_json) {
        json j;
        j["table"] = t.name;
        j["order"] = t.order.get_str();
        j["l"] = l;
        j["blocks"] = json::array();
        for (auto& b : blocks)
            j["blocks"].push_back(block_to_json(b, cyclic_status(b, t), block_kernel_order(b, t)));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << blocks_report_text(t, l, blocks);
    }
    return 0;
}

int cmd_projectives(App& app, const std::string& path, long l, size_t budget,
                    const std::vector<std::string>& fusion_paths)
{
    const CharacterTable& t = app.load(path);
    auto blocks = compute_blocks(t, l);
    auto pool = tensor_closure(defect_zero_seeds(t, blocks), t, budget);
    for (auto& p : induced_pool(app, t, fusion_paths, l))
        pool.push_back(p);
    if (app.use_json) {
        json j;
        j["table"] = t.name;
        j["l"] = l;
        j["projectives"] = json::array();
        for (auto& p : pool) {
            json e;
            e["provenance"] = p.provenance.to_string();
            e["degree"] = p.fn.degree().rational_value().get_str();
            json vals = json::array();
            for (auto& v : p.fn.values())
                vals.push_back(v.to_string());
            e["values"] = vals;
            j["projectives"].push_back(e);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "table " << t.name << ", l = " << l << ", " << pool.size()
                  << " projective character(s)\n";
        for (auto& p : pool) {
            CertifyReport rep = certify_projective(p.fn, t, l);
            std::cout << "  " << p.provenance.to_string() << ": degree "
                      << p.fn.degree().rational_value().get_str()
                      << (rep.ok ? "" : "  [CERTIFICATION FAILED]") << "\n";
        }
    }
    return 0;
}

int cmd_trees(App& app, const std::string& path, long l, size_t budget,
              const std::vector<std::string>& fusion_paths, bool oracle, bool no_involution,
              bool no_automorphisms, bool no_dot)
{
    const CharacterTable& t = app.load(path);
    SolveAllOptions opt;
    opt.pool_budget = budget;
    opt.extra_pool = induced_pool(app, t, fusion_paths, l);
    opt.use_involution = !no_involution;
    opt.use_automorphisms = !no_automorphisms;
    TreesRun run = solve_all(t, l, opt);

    bool oracle_mismatch = false;
    std::vector<std::string> oracle_notes;
    if (oracle) {
        std::vector<ProjectiveChar> pool =
            tensor_closure(defect_zero_seeds(t, compute_blocks(t, l)), t, budget);
        for (auto& p : opt.extra_pool)
            pool.push_back(p);
        for (size_t bi = 0; bi < run.blocks.size(); ++bi) {
            auto& rep = run.blocks[bi];
            if (!rep.status.cyclic_nontrivial())
                continue;
            auto oracle_trees = brute_force_oracle(rep.block, rep.status, t, l, pool);
            bool same = oracle_trees.size() == rep.trees.size();
            for (size_t i = 0; same && i < oracle_trees.size(); ++i)
                same = oracle_trees[i].edges == rep.trees[i].edges;
            if (!same)
                oracle_mismatch = true;
            oracle_notes.push_back("block " + std::to_string(bi + 1) + ": " +
                                   (same ? "oracle agrees" : "ORACLE DISAGREES"));
        }
    }

    std::vector<std::string> dot_files;
    if (!no_dot) {
        for (size_t bi = 0; bi < run.blocks.size(); ++bi) {
            auto& rep = run.blocks[bi];
            if (rep.trees.empty())
                continue;
            std::string name = t.name + "_l" + std::to_string(l) + "_block" +
                               std::to_string(bi + 1) + ".dot";
            for (auto& ch : name)
                if (ch == '/' || ch == ' ')
                    ch = '_';
            fs::path p = app.out_path(name);
            std::ofstream out(p);
            if (!out)
                throw std::runtime_error("cannot write " + p.string());
            out << dot_graph(rep.trees.front(),
                             t.name + " l=" + std::to_string(l) + " block " + std::to_string(bi + 1));
            dot_files.push_back(p.string());
        }
    }

    if (app.use_json) {
        json j;
        j["table"] = t.name;
        j["order"] = t.order.get_str();
        j["l"] = l;
        j["blocks"] = json::array();
        for (size_t bi = 0; bi < run.blocks.size(); ++bi) {
            auto& rep = run.blocks[bi];
            json b = block_to_json(rep.block, rep.status, rep.kernel_order);
            if (rep.status.cyclic_nontrivial()) {
                b["contradiction"] = rep.contradiction;
                if (rep.contradiction)
                    b["message"] = rep.message;
                b["classes"] = json::array();
                for (auto& cls : rep.classes) {
                    json c;
                    c["tree"] = json::array();
                    const BrauerTree& tree = cls.trees.front();
                    for (auto& [u, v] : tree.edges)
                        c["tree"].push_back(
                            json::array({tree.vertices[u].label(), tree.vertices[v].label()}));
                    c["modulo"] = json::array();
                    for (auto& g : cls.generators)
                        c["modulo"].push_back(report_detail::cycle_notation(g));
                    b["classes"].push_back(c);
                }
                if (rep.inherited_from >= 0)
                    b["inherited_from"] = rep.inherited_from + 1;
            }
            j["blocks"].push_back(b);
        }
        j["dot_files"] = dot_files;
        if (oracle) {
            j["oracle"] = oracle_notes;
            j["oracle_agrees"] = !oracle_mismatch;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << trees_report_text(run);
        for (auto& f : dot_files)
            std::cout << "wrote " << f << "\n";
        for (auto& n : oracle_notes)
            std::cout << n << "\n";
    }
    return run.any_contradiction() || oracle_mismatch ? 2 : 0;
}

int cmd_fusions(App& app, const std::string& src_path, const std::string& tgt_path,
                const std::string& check_path, bool emit)
{
    const CharacterTable& src = app.load(src_path);
    const CharacterTable& tgt = app.load(tgt_path);
    if (!check_path.empty()) {
        FusionFile ff = load_fusion_file(check_path);
        FusionMap f = bind_fusion(ff, src, tgt, true);
        auto bad = validate_fusion(f);
        if (app.use_json) {
            json j;
            j["fusion"] = check_path;
            j["ok"] = bad.empty();
            j["violations"] = bad;
            std::cout << j.dump(2) << "\n";
        } else if (bad.empty()) {
            std::cout << check_path << ": ok\n";
        } else {
            for (auto& v : bad)
                std::cout << check_path << ": " << v << "\n";
        }
        return bad.empty() ? 0 : 1;
    }
    auto cands = quotient_fusion_candidates(src, tgt, {});
    std::vector<std::string> emitted;
    if (emit) {
        for (size_t i = 0; i < cands.size(); ++i) {
            std::string name = src.name + "_" + tgt.name + "_fusion" + std::to_string(i + 1) + ".fus";
            for (auto& ch : name)
                if (ch == '/' || ch == ' ')
                    ch = '_';
            fs::path p = app.out_path(name);
            std::ofstream out(p);
            if (!out)
                throw std::runtime_error("cannot write " + p.string());
            out << print_fusion(cands[i]);
            emitted.push_back(p.string());
        }
    }
    if (app.use_json) {
        json j;
        j["source"] = src.name;
        j["target"] = tgt.name;
        j["candidates"] = json::array();
        for (auto& f : cands) {
            json m = json::array();
            for (int i : f.map)
                m.push_back(i + 1);
            j["candidates"].push_back(m);
        }
        j["emitted"] = emitted;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << cands.size() << " quotient fusion candidate(s) " << src.name << " -> "
                  << tgt.name << "\n";
        for (auto& f : cands) {
            std::cout << "  map";
            for (int i : f.map)
                std::cout << " " << i + 1;
            std::cout << "\n";
        }
        for (auto& p : emitted)
            std::cout << "wrote " << p << "\n";
    }
    return 0;
}

int cmd_powermaps(App& app, const std::string& path, long p, bool no_probes)
{
    const CharacterTable& t = app.load(path);
    std::vector<ClassFunction> probes;
    if (!no_probes)
        for (size_t i = 0; i < t.irr.size(); ++i)
            probes.push_back(t.irreducible(static_cast<int>(i)));
    auto maps = powermap_candidates(t, p, probes);
    auto classes = class_maps_modulo_automorphisms(maps, table_automorphisms(t));
    if (app.use_json) {
        json j;
        j["table"] = t.name;
        j["p"] = p;
        j["candidates"] = json::array();
        for (auto& m : maps) {
            json row = json::array();
            for (int i : m)
                row.push_back(i + 1);
            j["candidates"].push_back(row);
        }
        j["classes_modulo_automorphisms"] = classes.size();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << maps.size() << " power map candidate(s) for p = " << p << " on " << t.name
                  << " (" << classes.size() << " modulo table automorphisms)\n";
        for (auto& m : maps) {
            std::cout << "  map";
            for (int i : m)
                std::cout << " " << i + 1;
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_lll(App& app, const std::string& path)
{
    const CharacterTable& t = app.load(path);
    std::vector<ClassFunction> gens;
    for (size_t i = 0; i < t.irr.size(); ++i)
        for (size_t j = 0; j < t.irr.size(); ++j)
            gens.push_back(
                tensor(t.irreducible(static_cast<int>(i)), t.irreducible(static_cast<int>(j))));
    LatticeBasis basis = lattice_from_class_functions(gens);
    LLLResult red = lll_reduce(basis);
    auto gram = red.basis.gram();
    if (app.use_json) {
        json j;
        j["table"] = t.name;
        j["generators"] = gens.size();
        j["rank"] = red.basis.vectors.size();
        j["norms"] = json::array();
        for (size_t i = 0; i < red.basis.vectors.size(); ++i)
            j["norms"].push_back(gram[i][i].get_str());
        j["determinant"] = gram_determinant(red.basis).get_str();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "lattice of " << gens.size() << " pairwise tensor products on " << t.name
                  << ": rank " << red.basis.vectors.size() << "\n";
        for (size_t i = 0; i < red.basis.vectors.size(); ++i) {
            std::cout << "  norm " << gram[i][i].get_str() << " coords";
            for (auto& x : red.basis.vectors[i])
                std::cout << " " << x.get_str();
            std::cout << "\n";
        }
        std::cout << "gram determinant " << gram_determinant(red.basis).get_str() << "\n";
    }
    return 0;
}

int cmd_tableauts(App& app, const std::string& path)
{
    const CharacterTable& t = app.load(path);
    auto g = table_automorphisms(t);
    if (app.use_json) {
        json j;
        j["table"] = t.name;
        j["order"] = g.order.get_str();
        j["generators"] = json::array();
        for (auto& a : g.generators) {
            json e;
            e["classes"] = report_detail::cycle_notation(a.class_perm);
            e["characters"] = report_detail::cycle_notation(a.char_perm);
            j["generators"].push_back(e);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "table automorphism group of " << t.name << ": order " << g.order.get_str()
                  << "\n";
        for (auto& a : g.generators)
            std::cout << "  classes " << report_detail::cycle_notation(a.class_perm)
                      << "  characters " << report_detail::cycle_notation(a.char_perm) << "\n";
    }
    return 0;
}

int cmd_degmatch(App& app, const std::string& degree, long nrm,
                 const std::vector<std::string>& degs)
{
    std::vector<Int> missing;
    for (auto& d : degs)
        missing.push_back(Int(d));
    auto decs = decompose_by_degrees(Int(degree), nrm, missing);
    if (app.use_json) {
        json j;
        j["degree"] = degree;
        j["norm"] = nrm;
        j["decompositions"] = json::array();
        for (auto& dec : decs) {
            json row = json::array();
            for (auto& sd : dec)
                row.push_back((sd.sign > 0 ? "+" : "-") + sd.degree.get_str());
            j["decompositions"].push_back(row);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << decs.size() << " decomposition(s) of " << degree << " with " << nrm
                  << " term(s)\n";
        for (auto& dec : decs) {
            std::cout << " ";
            for (auto& sd : dec)
                std::cout << " " << (sd.sign > 0 ? "+" : "-") << sd.degree.get_str();
            std::cout << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    App app;
    CLI::App cli{"character table blocks, Brauer trees and workbench searches"};
    cli.require_subcommand(1);
    cli.add_flag("--json", app.use_json, "machine-readable output with stable key order");
    cli.add_flag("--force", app.force, "accept tables that violate invariants");
    cli.add_option("--out-dir", app.out_dir, "output directory (default: $CTAB_OUT_DIR or .)");

    std::vector<std::string> validate_paths;
    auto* c_validate = cli.add_subcommand("validate", "check table files exactly");
    c_validate->add_option("tables", validate_paths, "table files")->required();

    std::string table_path, prime_str;
    auto* c_blocks = cli.add_subcommand("blocks", "l-block decomposition");
    c_blocks->add_option("table", table_path, "table file")->required();
    c_blocks->add_option("l", prime_str, "prime")->required();

    size_t budget = 500;
    std::vector<std::string> fusion_paths;
    auto* c_proj = cli.add_subcommand("projectives", "generate projective characters");
    c_proj->add_option("table", table_path, "table file")->required();
    c_proj->add_option("l", prime_str, "prime")->required();
    c_proj->add_option("--budget", budget, "tensor closure budget");
    c_proj->add_option("--subgroup", fusion_paths, "subgroup fusion file(s) for induction");

    bool oracle = false, no_involution = false, no_automorphisms = false, no_dot = false;
    auto* c_trees = cli.add_subcommand("trees", "Brauer trees of cyclic-defect blocks");
    c_trees->add_option("table", table_path, "table file")->required();
    c_trees->add_option("l", prime_str, "prime")->required();
    c_trees->add_option("--pool-budget", budget, "tensor closure budget");
    c_trees->add_option("--subgroup", fusion_paths, "subgroup fusion file(s) for induction");
    c_trees->add_flag("--oracle", oracle, "cross-check with the brute-force oracle");
    c_trees->add_flag("--no-involution", no_involution, "drop the conjugation constraint");
    c_trees->add_flag("--no-automorphisms", no_automorphisms, "solve every block from scratch");
    c_trees->add_flag("--no-dot", no_dot, "skip DOT file output");

    std::string tgt_path, check_path;
    bool emit_fusions = false;
    auto* c_fus = cli.add_subcommand("fusions", "quotient fusion candidates / fusion check");
    c_fus->add_option("source", table_path, "source table file")->required();
    c_fus->add_option("target", tgt_path, "target table file")->required();
    c_fus->add_option("--check", check_path, "validate this fusion file instead of searching");
    c_fus->add_flag("--emit", emit_fusions, "write each candidate as a fusion file");

    bool no_probes = false;
    auto* c_pm = cli.add_subcommand("powermaps", "power map candidates");
    c_pm->add_option("table", table_path, "table file")->required();
    c_pm->add_option("p", prime_str, "prime")->required();
    c_pm->add_flag("--no-probes", no_probes, "drop the character probes");

    auto* c_lll = cli.add_subcommand("lll", "reduce the lattice of pairwise tensor products");
    c_lll->add_option("table", table_path, "table file")->required();

    auto* c_auts = cli.add_subcommand("tableauts", "table automorphism group");
    c_auts->add_option("table", table_path, "table file")->required();

    std::string degree_str;
    long norm_terms = 2;
    std::vector<std::string> degree_list;
    auto* c_deg = cli.add_subcommand("degmatch", "signed degree decompositions");
    c_deg->add_option("degree", degree_str, "target degree")->required();
    c_deg->add_option("norm", norm_terms, "number of signed terms")->required();
    c_deg->add_option("degrees", degree_list, "missing degrees (multiset)")->required();

    CLI11_PARSE(cli, argc, argv);

    try {
        if (*c_validate)
            return cmd_validate(app, validate_paths);
        if (*c_blocks)
            return cmd_blocks(app, table_path, parse_prime(prime_str));
        if (*c_proj)
            return cmd_projectives(app, table_path, parse_prime(prime_str), budget, fusion_paths);
        if (*c_trees)
            return cmd_trees(app, table_path, parse_prime(prime_str), budget, fusion_paths, oracle,
                             no_involution, no_automorphisms, no_dot);
        if (*c_fus)
            return cmd_fusions(app, table_path, tgt_path, check_path, emit_fusions);
        if (*c_pm)
            return cmd_powermaps(app, table_path, parse_prime(prime_str), no_probes);
        if (*c_lll)
            return cmd_lll(app, table_path);
        if (*c_auts)
            return cmd_tableauts(app, table_path);
        if (*c_deg)
            return cmd_degmatch(app, degree_str, norm_terms, degree_list);
    } catch (const ContradictionError& e) {
        std::cerr << "ctab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ctab: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
