#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "ctab/table_io.hpp"
#include "oracle_util.hpp"

namespace fs = std::filesystem;
using oracle::run_cli;

namespace {

std::string q(const std::string& s) { return "'" + s + "'"; }

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("ctab_test_XXXXXX");
        std::string templ = path.string();
        char* made = mkdtemp(templ.data());
        REQUIRE(made != nullptr);
        path = made;
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cli: validate")
{
    auto ok = run_cli("validate " + q(oracle::data_path("a5.tbl")));
    CHECK(ok.status == 0);
    CHECK(ok.output.find("ok") != std::string::npos);

    TempDir tmp;
    fs::path bad = tmp.path / "bad.tbl";
    std::ofstream(bad) << "ctab-table 1\nname B\norder 2\nclass 1a 1 2\nclass 2a 2 2\n"
                          "powermap 2 1 1\nirr 1,1\nirr 1,1\n";
    auto res = run_cli("validate " + q(bad.string()));
    CHECK(res.status == 1);
    CHECK(res.output.find("orthogonality") != std::string::npos);

    fs::path garbled = tmp.path / "garbled.tbl";
    std::ofstream(garbled) << "not a table\n";
    auto res2 = run_cli("validate " + q(garbled.string()));
    CHECK(res2.status == 1);
    CHECK(res2.output.find("garbled.tbl:1") != std::string::npos);
}

TEST_CASE("cli: blocks")
{
    auto res = run_cli("blocks " + q(oracle::data_path("a5.tbl")) + " 5");
    CHECK(res.status == 0);
    CHECK(res.output.find("block 1: characters {1, 2, 3, 4}") != std::string::npos);

    // prime not dividing the order: singletons
    auto res7 = run_cli("blocks " + q(oracle::data_path("a5.tbl")) + " 7");
    CHECK(res7.status == 0);
    CHECK(res7.output.find("block 5: characters {5}, defect 0") != std::string::npos);

    // malformed input: exit 1 with a parse diagnostic
    TempDir tmp;
    fs::path bad = tmp.path / "zz.tbl";
    std::ofstream(bad) << "ctab-table 1\nname Z\norder 0\n";
    auto res_bad = run_cli("blocks " + q(bad.string()) + " 5");
    CHECK(res_bad.status == 1);
    CHECK(res_bad.output.find("zz.tbl:3") != std::string::npos);

    // non-prime l rejected
    auto res_np = run_cli("blocks " + q(oracle::data_path("a5.tbl")) + " 6");
    CHECK(res_np.status != 0);
}

TEST_CASE("cli: trees catalog with dot files")
{
    TempDir tmp;
    std::string cmd = "--out-dir " + q(tmp.path.string()) + " trees " +
                      q(oracle::data_path("a5.tbl")) + " 5";
    auto res = run_cli(cmd);
    CHECK(res.status == 0);
    CHECK(res.output.find("tree: 1 - 4 - (2+3)") != std::string::npos);
    CHECK(fs::exists(tmp.path / "A5_l5_block1.dot"));
    // byte-identical on repeat
    auto res2 = run_cli(cmd);
    CHECK(res2.output == res.output);

    // oracle agreement path
    auto res3 = run_cli("trees " + q(oracle::data_path("a5.tbl")) + " 5 --no-dot --oracle");
    CHECK(res3.status == 0);
    CHECK(res3.output.find("oracle agrees") != std::string::npos);
}

TEST_CASE("cli: trees reports contradictions with exit 2")
{
    // doctored A5: the degree-3 rows vanish on the order-5 classes, which
    // fabricates a defect-1 block {1, 4} whose only tree fails the degree
    // check; the file violates orthogonality so it needs --force
    TempDir tmp;
    fs::path doctored = tmp.path / "doctored.tbl";
    std::ofstream(doctored) << "ctab-table 1\nname D\norder 60\n"
                               "class 1a 1 60\nclass 2a 2 4\nclass 3a 3 3\n"
                               "class 5a 5 5\nclass 5b 5 5\n"
                               "powermap 2 1 1 3 5 4\npowermap 3 1 2 1 5 4\npowermap 5 1 2 3 1 1\n"
                               "irr 1,1,1,1,1\n"
                               "irr 3,-1,0,0,0\n"
                               "irr 3,-1,0,0,0\n"
                               "irr 4,0,1,-1,-1\n"
                               "irr 5,1,-1,0,0\n";
    auto strict = run_cli("trees " + q(doctored.string()) + " 5 --no-dot");
    CHECK(strict.status == 1);  // rejected without --force
    auto res = run_cli("--force trees " + q(doctored.string()) + " 5 --no-dot");
    CHECK(res.status == 2);
    CHECK(res.output.find("contradiction") != std::string::npos);
}

TEST_CASE("cli: json outputs are stable and well-formed")
{
    auto res = run_cli("--json blocks " + q(oracle::data_path("a5.tbl")) + " 5");
    CHECK(res.status == 0);
    auto j = nlohmann::json::parse(res.output);
    CHECK(j["table"] == "A5");
    CHECK(j["order"] == "60");
    CHECK(j["blocks"].size() == 2);
    CHECK(j["blocks"][0]["members"] == nlohmann::json({1, 2, 3, 4}));
    CHECK(j["blocks"][0]["e"] == 2);
    auto res2 = run_cli("--json blocks " + q(oracle::data_path("a5.tbl")) + " 5");
    CHECK(res2.output == res.output);

    auto tr = run_cli("--json trees " + q(oracle::data_path("a5.tbl")) + " 5 --no-dot");
    CHECK(tr.status == 0);
    auto jt = nlohmann::json::parse(tr.output);
    CHECK(jt["blocks"][0]["classes"][0]["tree"].size() == 2);
}

TEST_CASE("cli: workbench subcommands")
{
    auto lll = run_cli("lll " + q(oracle::data_path("a5.tbl")));
    CHECK(lll.status == 0);
    CHECK(lll.output.find("rank 5") != std::string::npos);
    CHECK(lll.output.find("gram determinant 1") != std::string::npos);

    auto auts = run_cli("tableauts " + q(oracle::data_path("a5.tbl")));
    CHECK(auts.status == 0);
    CHECK(auts.output.find("order 2") != std::string::npos);
    CHECK(auts.output.find("classes (4,5)") != std::string::npos);

    auto pm = run_cli("powermaps " + q(oracle::data_path("a5.tbl")) + " 2");
    CHECK(pm.status == 0);
    CHECK(pm.output.find("1 power map candidate(s)") != std::string::npos);
    CHECK(pm.output.find("map 1 1 3 5 4") != std::string::npos);

    auto fus = run_cli("fusions " + q(oracle::data_path("2a5.tbl")) + " " +
                       q(oracle::data_path("a5.tbl")));
    CHECK(fus.status == 0);
    CHECK(fus.output.find("quotient fusion candidate(s)") != std::string::npos);

    // emitted fusion files reparse to equal objects
    {
        TempDir tmp;
        auto em = run_cli("--out-dir " + q(tmp.path.string()) + " fusions " +
                          q(oracle::data_path("2a5.tbl")) + " " + q(oracle::data_path("a5.tbl")) +
                          " --emit");
        CHECK(em.status == 0);
        fs::path first = tmp.path / "2.A5_A5_fusion1.fus";
        REQUIRE(fs::exists(first));
        ctab::CharacterTable sl = ctab::load_table(oracle::data_path("2a5.tbl"));
        ctab::CharacterTable a5 = ctab::load_table(oracle::data_path("a5.tbl"));
        ctab::FusionMap f =
            ctab::bind_fusion(ctab::load_fusion_file(first.string()), sl, a5);
        std::ifstream in(first);
        std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(ctab::print_fusion(f) == body);
    }

    auto chk = run_cli("fusions " + q(oracle::data_path("c5.tbl")) + " " +
                       q(oracle::data_path("a5.tbl")) + " --check " +
                       q(oracle::data_path("c5_a5.fus")));
    CHECK(chk.status == 0);
    CHECK(chk.output.find("ok") != std::string::npos);

    auto deg = run_cli("degmatch 1936922625 2 7194825 1929727800 4583103525 11972188800");
    CHECK(deg.status == 0);
    CHECK(deg.output.find("1 decomposition(s)") != std::string::npos);
    CHECK(deg.output.find("+1929727800 +7194825") != std::string::npos);

    auto proj = run_cli("projectives " + q(oracle::data_path("a5.tbl")) + " 5 --budget 10");
    CHECK(proj.status == 0);
    CHECK(proj.output.find("seed(5)") != std::string::npos);

    auto proj_sub = run_cli("projectives " + q(oracle::data_path("a5.tbl")) +
                            " 3 --budget 5 --subgroup " + q(oracle::data_path("c5_a5.fus")));
    CHECK(proj_sub.status == 0);
    CHECK(proj_sub.output.find("induced(C5") != std::string::npos);
}

TEST_CASE("cli: trees with subgroup induction narrows PSL27 at 7")
{
    auto plain = run_cli("trees " + q(oracle::data_path("psl27.tbl")) + " 7 --no-dot");
    CHECK(plain.status == 0);
    // two classes survive on the tensor pool alone
    CHECK(plain.output.find("tree: 1 - (2+3) - 6 - 4") != std::string::npos);
    auto narrowed = run_cli("trees " + q(oracle::data_path("psl27.tbl")) + " 7 --no-dot --subgroup " +
                            q(oracle::data_path("s4_psl27.fus")));
    CHECK(narrowed.status == 0);
    CHECK(narrowed.output.find("tree: 1 - 4 - 6 - (2+3)") != std::string::npos);
    CHECK(narrowed.output.find("1 - (2+3) - 6 - 4") == std::string::npos);
}
