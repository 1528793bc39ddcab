#pragma once

// Projective characters: defect-zero seeds, deterministic tensor closure,
// induction from subgroups, and the two-part certificate (vanishing on
// l-singular classes, nonnegative integral multiplicities) used throughout
// the tree solver.

#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctab/blocks.hpp"
#include "ctab/table.hpp"

namespace ctab {

struct Provenance {
    enum class Kind { Seed, Tensor, Induced, EdgeSum };
    Kind kind = Kind::Seed;
    int index = -1;           // Seed: irreducible index; Tensor: tensored irreducible index
    std::string source;       // Induced: subgroup table name; EdgeSum: vertex labels
    std::shared_ptr<const Provenance> base;  // Tensor: what was tensored

    static Provenance seed(int irr_index) { return {Kind::Seed, irr_index, "", nullptr}; }
    static Provenance tensor_of(const Provenance& b, int irr_index)
    {
        return {Kind::Tensor, irr_index, "", std::make_shared<Provenance>(b)};
    }
    static Provenance induced(const std::string& subgroup, int source_index)
    {
        return {Kind::Induced, source_index, subgroup, nullptr};
    }
    static Provenance edge_sum(const std::string& vertices) { return {Kind::EdgeSum, -1, vertices, nullptr}; }

    std::string to_string() const
    {
        switch (kind) {
            case Kind::Seed: return "seed(" + std::to_string(index + 1) + ")";
            case Kind::Tensor: return "tensor(" + base->to_string() + "," + std::to_string(index + 1) + ")";
            case Kind::Induced: return "induced(" + source + "," + std::to_string(index + 1) + ")";
            case Kind::EdgeSum: return "edge(" + source + ")";
        }
        return "?";
    }
};

struct ProjectiveChar {
    ClassFunction fn;
    Provenance provenance;
};

struct CertifyReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Necessary conditions for projectivity: zero on every l-singular class and
// nonnegative integral inner products with all irreducibles.
inline CertifyReport certify_projective(const ClassFunction& p, const CharacterTable& t, long l)
{
    CertifyReport rep;
    for (int c = 0; c < t.num_classes(); ++c)
        if (!t.is_regular(c, l) && !p[c].is_zero()) {
            rep.ok = false;
            rep.violations.push_back("nonzero value on " + std::to_string(l) +
                                     "-singular class " + std::to_string(c + 1));
        }
    for (size_t i = 0; i < t.irr.size(); ++i) {
        Cyclotomic ip = inner_product(p, t.irreducible(static_cast<int>(i)));
        bool fine = ip.is_rational();
        if (fine) {
            Rat q = ip.rational_value();
            fine = q.get_den() == 1 && q >= 0;
        }
        if (!fine) {
            rep.ok = false;
            rep.violations.push_back("multiplicity of irreducible " + std::to_string(i + 1) +
                                     " is not a nonnegative integer");
        }
    }
    return rep;
}

struct CertificationError : std::runtime_error {
    CertifyReport report;
    CertificationError(CertifyReport r)
        : std::runtime_error("class function fails projectivity certificate: " +
                             (r.violations.empty() ? "" : r.violations.front())),
          report(std::move(r))
    {
    }
};

// One projective seed per defect-zero block (if l does not divide |G| this is
// every irreducible).
inline std::vector<ProjectiveChar> defect_zero_seeds(const CharacterTable& t,
                                                     const std::vector<Block>& blocks)
{
    std::vector<ProjectiveChar> seeds;
    for (const Block& b : blocks)
        if (b.defect == 0)
            seeds.push_back({t.irreducible(b.members.front()), Provenance::seed(b.members.front())});
    return seeds;
}

inline std::vector<ProjectiveChar> defect_zero_seeds(const CharacterTable& t, long l)
{
    return defect_zero_seeds(t, compute_blocks(t, l));
}

// Breadth-first closure under tensoring with irreducibles, in the fixed order
// (pool position, irreducible index), deduplicated by value vector and
// truncated at `budget` outputs. Seeds are the first entries.
inline std::vector<ProjectiveChar> tensor_closure(const std::vector<ProjectiveChar>& seeds,
                                                  const CharacterTable& t, size_t budget)
{
    if (budget < seeds.size())
        throw std::invalid_argument("tensor_closure: budget smaller than seed count");
    std::vector<ProjectiveChar> pool;
    std::set<std::vector<Cyclotomic>> seen;
    for (auto& s : seeds) {
        if (s.fn.table() != &t)
            throw TableMismatchError();
        if (seen.insert(s.fn.values()).second)
            pool.push_back(s);
    }
    for (size_t qi = 0; qi < pool.size() && pool.size() < budget; ++qi) {
        for (size_t j = 0; j < t.irr.size() && pool.size() < budget; ++j) {
            ClassFunction prod = tensor(pool[qi].fn, t.irreducible(static_cast<int>(j)));
            if (!seen.insert(prod.values()).second)
                continue;
            pool.push_back({std::move(prod),
                            Provenance::tensor_of(pool[qi].provenance, static_cast<int>(j))});
        }
    }
    return pool;
}

// Induction of a projective character along a subgroup fusion; the result is
// certified and certification failure reports bad input data.
inline ProjectiveChar induce_projective(const ProjectiveChar& phi, const FusionMap& f, long l)
{
    ClassFunction ind = induce(phi.fn, f);
    CertifyReport rep = certify_projective(ind, *f.target, l);
    if (!rep.ok)
        throw CertificationError(std::move(rep));
    return {std::move(ind), Provenance::induced(f.source->name, phi.provenance.index)};
}

}  // namespace ctab
