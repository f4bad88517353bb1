#pragma once

#include "s3map/arrangement.hpp"
#include "s3map/equivariant_module.hpp"
#include "s3map/obstruction.hpp"
#include "s3map/poset_topology.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace s3map::decision {

using arrangement::Alpha;
using arrangement::GroupKind;
using exactalg::FGAbelianGroup;
using exactalg::Int;

// Case forms of the homology / coinvariant tables. Cyclic: A..H, dihedral: A..M.
// A form matches when some rotation or reversal of alpha has that shape; the
// first letter in table order wins.
char classify(const Alpha& alpha, GroupKind kind);

// Literal shapes the reference dihedral classification leaves open:
// (p,q,p+q,p+q) with p != q, (p,q,r,p+q) with r not in {p,p+q}, (p,p,q,s) with s > q.
bool inconclusive_shape(const Alpha& alpha);

// Reference values for a form; nullopt fields are unknown ("?").
struct Expected {
    char form = 0;
    std::optional<std::size_t> rank;
    std::optional<FGAbelianGroup> coinvariants;
    std::string verdict;  // NoEquivariantMap / MapExists / Inconclusive
};
Expected expected(const Alpha& alpha, GroupKind kind);

enum class Verdict { NoEquivariantMap, MapExists, Inconclusive };
std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

struct Decision {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> justification;
    std::optional<std::string> admissibility_note;
    bool beyond_paper = false;
    bool operator==(const Decision&) const = default;
};

// Everything computed for one (alpha, group).
struct Analysis {
    arrangement::IntersectionPoset poset;
    poset_topology::LinkHomology link;
    equivariant_module::EquivariantModule module;
    equivariant_module::CoinvariantGroup coinvariants;
    obstruction::ObstructionClass obstruction;
    Decision decision;
};

struct AnalyzeOptions {
    poset_topology::LinkOptions link;
};

Analysis analyze(const Alpha& alpha, GroupKind kind, const AnalyzeOptions& opt = {});
// Dihedral only: reuse a known cyclic verdict for the restriction rule.
Analysis analyze_with(const Alpha& alpha, GroupKind kind, const AnalyzeOptions& opt,
                      std::optional<Verdict> cyclic);
Decision decide(const Alpha& alpha, GroupKind kind);

// Serialized report (schema 1).
struct Report {
    int schema = 1;
    std::string alpha;
    std::string group;
    struct {
        std::size_t orbit_size = 0;
        std::map<int, int> poset_counts;  // dim -> count
        std::size_t poset_size = 0;
    } arrangement;
    struct {
        std::size_t rank = 0;
        std::vector<std::string> torsion;
        std::string case_label;  // form letter or "paper-unknown"
    } homology;
    struct {
        std::size_t rank = 0;
        std::vector<std::string> torsion;
    } coinvariants;
    struct {
        std::vector<std::string> raw;
        std::vector<std::string> geometric;
        std::vector<std::string> vector;
        std::vector<std::string> image;
        std::string order;
        std::string verdict;
    } obstruction;
    struct {
        std::string verdict;
        std::vector<std::string> justification;
        std::optional<std::string> admissibility_note;
        bool beyond_paper = false;
    } decision;
    std::vector<std::string> notes;

    bool operator==(const Report& o) const;
};

Report make_report(const Alpha& alpha, GroupKind kind, const Analysis& a);
std::string to_json(const Report& r, int indent = 2);
Report report_from_json(const std::string& s);  // throws std::invalid_argument
std::string to_text(const Report& r);

struct FixtureMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TableRow {
    Alpha alpha;
    char form = 0;
    std::size_t rank = 0;
    FGAbelianGroup coinvariants;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> diffs;  // empty when every known value matches
    bool paper_unknown = false;
};

struct Table {
    GroupKind kind = GroupKind::Cyclic;
    std::vector<TableRow> rows;
    std::size_t mismatches() const;
};

// n_max in 4..16. Rows with diffs are reported; the caller maps them to exit codes.
Table run_table(GroupKind kind, int n_max);
std::string to_text(const Table& t);

}  // namespace s3map::decision
