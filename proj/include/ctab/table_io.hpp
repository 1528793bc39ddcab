#pragma once

// Text formats for character tables and fusions.
//
// Table file (versioned header, '#' comments and blank lines ignored):
//
//   ctab-table 1
//   name A5
//   order 60
//   class 1a 1 60          <- name, element order, centralizer order; in order
//   ...
//   powermap 2 1 1 3 5 4   <- prime, then 1-based image per class
//   ...
//   irr 1,1,1,1,1          <- comma-separated cyclotomic values, one row each
//   ...
//
// Fusion file:
//
//   ctab-fusion 1
//   source C5
//   target A5
//   kind subgroup          <- or: quotient
//   map 1 4 5 5 4          <- 1-based target class per source class
//
// Loading validates the table exactly and refuses violating data unless the
// caller forces it. Printing emits canonical form; print/parse round-trips.

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctab/table.hpp"

namespace ctab {

struct ParseError : std::runtime_error {
    ParseError(const std::string& where, long line, const std::string& what)
        : std::runtime_error(where + ":" + std::to_string(line) + ": " + what)
    {
    }
};

struct ValidationError : std::runtime_error {
    std::vector<std::string> violations;
    ValidationError(const std::string& where, std::vector<std::string> v)
        : std::runtime_error(where + ": table violates invariants: " +
                             (v.empty() ? "" : v.front()) +
                             (v.size() > 1 ? " (+" + std::to_string(v.size() - 1) + " more)" : "")),
          violations(std::move(v))
    {
    }
};

namespace io_detail {

inline std::vector<std::string> split_ws(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

struct LineReader {
    std::istream& in;
    std::string where;
    long line_no = 0;
    // returns false at EOF; skips blanks and comments
    bool next(std::string& out)
    {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            size_t i = raw.find_first_not_of(" \t\r");
            if (i == std::string::npos || raw[i] == '#')
                continue;
            size_t j = raw.find_last_not_of(" \t\r");
            out = raw.substr(i, j - i + 1);
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(where, line_no, what); }
};

}  // namespace io_detail

inline CharacterTable parse_table(std::istream& in, const std::string& where = "<table>")
{
    io_detail::LineReader rd{in, where};
    std::string line;
    if (!rd.next(line) || line != "ctab-table 1")
        rd.fail("expected header 'ctab-table 1'");

    CharacterTable t;
    bool have_name = false, have_order = false;
    bool classes_done = false;
    while (rd.next(line)) {
        auto toks = io_detail::split_ws(line);
        const std::string& key = toks[0];
        if (key == "name") {
            if (toks.size() != 2)
                rd.fail("usage: name <identifier>");
            t.name = toks[1];
            have_name = true;
        } else if (key == "order") {
            if (toks.size() != 2)
                rd.fail("usage: order <positive integer>");
            t.order = Int(toks[1]);
            if (t.order <= 0)
                rd.fail("group order must be positive");
            have_order = true;
        } else if (key == "class") {
            if (classes_done)
                rd.fail("class lines must precede powermap/irr lines");
            if (toks.size() != 4)
                rd.fail("usage: class <name> <element order> <centralizer order>");
            ClassInfo ci;
            ci.name = toks[1];
            try {
                ci.element_order = std::stol(toks[2]);
                ci.centralizer_order = Int(toks[3]);
            } catch (const std::exception&) {
                rd.fail("malformed class numbers");
            }
            if (ci.element_order < 1 || ci.centralizer_order < 1)
                rd.fail("class numbers must be positive");
            t.classes.push_back(std::move(ci));
        } else if (key == "powermap") {
            classes_done = true;
            if (toks.size() != t.classes.size() + 2)
                rd.fail("powermap needs a prime and one image per class");
            long p;
            try {
                p = std::stol(toks[1]);
            } catch (const std::exception&) {
                rd.fail("malformed prime");
            }
            if (!is_prime(p))
                rd.fail("powermap prime " + toks[1] + " is not prime");
            if (t.power_maps.count(p))
                rd.fail("duplicate powermap for prime " + toks[1]);
            std::vector<int> pm;
            for (size_t i = 2; i < toks.size(); ++i) {
                long idx;
                try {
                    idx = std::stol(toks[i]);
                } catch (const std::exception&) {
                    rd.fail("malformed powermap image");
                }
                if (idx < 1 || idx > static_cast<long>(t.classes.size()))
                    rd.fail("powermap image out of range: " + toks[i]);
                pm.push_back(static_cast<int>(idx - 1));
            }
            t.power_maps.emplace(p, std::move(pm));
        } else if (key == "irr") {
            classes_done = true;
            std::string rest = line.substr(3);
            std::vector<Cyclotomic> row;
            size_t start = 0;
            while (start <= rest.size()) {
                size_t comma = rest.find(',', start);
                std::string field =
                    rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                try {
                    row.push_back(Cyclotomic::parse(field));
                } catch (const std::exception& e) {
                    rd.fail(e.what());
                }
                if (comma == std::string::npos)
                    break;
                start = comma + 1;
            }
            if (row.size() != t.classes.size())
                rd.fail("irr row has " + std::to_string(row.size()) + " values, expected " +
                        std::to_string(t.classes.size()));
            t.irr.push_back(std::move(row));
        } else {
            rd.fail("unknown directive '" + key + "'");
        }
    }
    if (!have_name)
        rd.fail("missing 'name'");
    if (!have_order)
        rd.fail("missing 'order'");
    if (t.classes.empty())
        rd.fail("missing class list");
    return t;
}

inline std::string print_table(const CharacterTable& t)
{
    std::ostringstream os;
    os << "ctab-table 1\n";
    os << "name " << t.name << "\n";
    os << "order " << t.order.get_str() << "\n";
    for (auto& ci : t.classes)
        os << "class " << ci.name << " " << ci.element_order << " "
           << ci.centralizer_order.get_str() << "\n";
    for (auto& [p, pm] : t.power_maps) {
        os << "powermap " << p;
        for (int i : pm)
            os << " " << i + 1;
        os << "\n";
    }
    for (auto& row : t.irr) {
        os << "irr ";
        for (size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << row[c].to_string();
        os << "\n";
    }
    return os.str();
}

inline CharacterTable load_table(const std::string& path, bool force = false)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open table file " + path);
    CharacterTable t = parse_table(in, path);
    auto bad = t.validate();
    if (!bad.empty() && !force)
        throw ValidationError(path, std::move(bad));
    return t;
}

struct FusionFile {
    std::string source_name;
    std::string target_name;
    FusionMap::Kind kind = FusionMap::Kind::Subgroup;
    std::vector<int> map;  // 0-based
};

inline FusionFile parse_fusion(std::istream& in, const std::string& where = "<fusion>")
{
    io_detail::LineReader rd{in, where};
    std::string line;
    if (!rd.next(line) || line != "ctab-fusion 1")
        rd.fail("expected header 'ctab-fusion 1'");
    FusionFile f;
    bool have_kind = false, have_map = false;
    while (rd.next(line)) {
        auto toks = io_detail::split_ws(line);
        if (toks[0] == "source" && toks.size() == 2) {
            f.source_name = toks[1];
        } else if (toks[0] == "target" && toks.size() == 2) {
            f.target_name = toks[1];
        } else if (toks[0] == "kind" && toks.size() == 2) {
            if (toks[1] == "subgroup")
                f.kind = FusionMap::Kind::Subgroup;
            else if (toks[1] == "quotient")
                f.kind = FusionMap::Kind::Quotient;
            else
                rd.fail("kind must be 'subgroup' or 'quotient'");
            have_kind = true;
        } else if (toks[0] == "map") {
            for (size_t i = 1; i < toks.size(); ++i) {
                long idx;
                try {
                    idx = std::stol(toks[i]);
                } catch (const std::exception&) {
                    rd.fail("malformed map index");
                }
                if (idx < 1)
                    rd.fail("map indices are 1-based");
                f.map.push_back(static_cast<int>(idx - 1));
            }
            have_map = true;
        } else {
            rd.fail("unknown directive '" + toks[0] + "'");
        }
    }
    if (f.source_name.empty() || f.target_name.empty() || !have_kind || !have_map)
        rd.fail("fusion file needs source, target, kind and map");
    return f;
}

inline std::string print_fusion(const FusionMap& f)
{
    std::ostringstream os;
    os << "ctab-fusion 1\n";
    os << "source " << f.source->name << "\n";
    os << "target " << f.target->name << "\n";
    os << "kind " << (f.kind == FusionMap::Kind::Subgroup ? "subgroup" : "quotient") << "\n";
    os << "map";
    for (int i : f.map)
        os << " " << i + 1;
    os << "\n";
    return os.str();
}

// Binds a parsed fusion to its tables, checking names and fusion invariants.
inline FusionMap bind_fusion(const FusionFile& ff, const CharacterTable& source,
                             const CharacterTable& target, bool force = false)
{
    if (ff.source_name != source.name)
        throw std::runtime_error("fusion source '" + ff.source_name + "' does not match table '" +
                                 source.name + "'");
    if (ff.target_name != target.name)
        throw std::runtime_error("fusion target '" + ff.target_name + "' does not match table '" +
                                 target.name + "'");
    FusionMap f;
    f.source = &source;
    f.target = &target;
    f.map = ff.map;
    f.kind = ff.kind;
    auto bad = validate_fusion(f);
    if (!bad.empty() && !force)
        throw ValidationError("fusion", std::move(bad));
    return f;
}

inline FusionFile load_fusion_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open fusion file " + path);
    return parse_fusion(in, path);
}

}  // namespace ctab
