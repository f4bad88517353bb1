#include "s3map/decision.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace s3map::decision {

using arrangement::GroupSpec;
using nlohmann::ordered_json;

namespace {

using Tuple = std::array<int, 4>;

std::vector<Tuple> symmetries(const Alpha& a) {
    std::vector<Tuple> out;
    for (int k = 0; k < 4; ++k) {
        Tuple r{a[k], a[(k + 1) % 4], a[(k + 2) % 4], a[(k + 3) % 4]};
        out.push_back(r);
        out.push_back({r[3], r[2], r[1], r[0]});
    }
    return out;
}

char cyclic_form(const Tuple& a, int n) {
    const auto [p, q, r, s] = a;
    if (p == q && q == r && r == s) return 'A';
    if (p == r && q == s && p != q) return 'B';
    if (p == q && q == r && s == 2 * p) return 'C';
    if (a == Tuple{1, 1, 1, 3}) return 'D';
    if (p == q && q == r && s != p && n > 6) return 'E';
    if (p == r && s == p + q && p != q) return 'F';
    if (r == p + q && s == p + q) return 'G';
    return 0;
}

char dihedral_form(const Tuple& a) {
    const auto [p, q, r, s] = a;
    if (p == q && q == r && r == s) return 'A';
    if (p == r && q == s && p != q) return 'B';
    if (p == q && q == r && s == 2 * p) return 'C';
    if (a == Tuple{1, 1, 1, 3}) return 'D';
    if (p == q && q == r && s != p && s != 2 * p) return 'E';
    if (p == r && s == p + q && p != q) return 'F';
    if (p == q && r == 2 * p && s == 2 * p) return 'G';
    if (r == p + q && s == p + q && p != q) return 'H';
    if (p == q && r == s && p != r && p != 2 * r && r != 2 * p) return 'I';
    if (q == s && r != q && r != p && r != p + q) return 'J';
    if (s == p + q && r != p && r != p + q) return 'K';
    if (p == q && p != r && s > r) return 'L';
    return 0;
}

FGAbelianGroup group(std::size_t rank, std::initializer_list<int> torsion) {
    FGAbelianGroup g;
    g.rank = rank;
    for (int t : torsion) g.torsion.push_back(Int(t));
    return g;
}

Int torsion_exponent(const FGAbelianGroup& g) {
    Int e = 1;
    for (const auto& t : g.torsion) mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), t.get_mpz_t());
    return e;
}

std::string str(const Int& x) { return x.get_str(); }

std::string combination(const std::string& a, const std::string& b) {
    const bool neg = !b.empty() && b[0] == '-';
    return a + " [[y1]] " + (neg ? "- " + b.substr(1) : "+ " + b) + " [[y2]]";
}

std::vector<std::string> strs(const std::vector<Int>& v) {
    std::vector<std::string> out;
    for (const auto& x : v) out.push_back(x.get_str());
    return out;
}

}  // namespace

bool inconclusive_shape(const Alpha& alpha) {
    const auto [p, q, r, s] = alpha.a;
    if (r == p + q && s == p + q && p != q) return true;
    if (s == p + q && r != p && r != p + q) return true;
    return p == q && s > r;
}

char classify(const Alpha& alpha, GroupKind kind) {
    const std::string order = kind == GroupKind::Cyclic ? "ABCDEFG" : "ABCDEFGHIJKL";
    std::string found;
    for (const auto& t : symmetries(alpha)) {
        const char f = kind == GroupKind::Cyclic ? cyclic_form(t, alpha.n()) : dihedral_form(t);
        if (f) found.push_back(f);
    }
    for (char c : order)
        if (found.find(c) != std::string::npos) return c;
    return kind == GroupKind::Cyclic ? 'H' : 'M';
}

Expected expected(const Alpha& alpha, GroupKind kind) {
    const std::size_t n = static_cast<std::size_t>(alpha.n());
    Expected e;
    e.form = classify(alpha, kind);
    const bool cyc = kind == GroupKind::Cyclic;
    switch (e.form) {
        case 'A': e.rank = n / 4; e.coinvariants = group(0, {2}); break;
        case 'B': e.rank = n / 2; e.coinvariants = cyc ? group(1, {}) : group(0, {2}); break;
        case 'C': e.rank = n + 4 * n / 5; e.coinvariants = cyc ? group(1, {5}) : group(0, {10}); break;
        case 'D': e.rank = 13; e.coinvariants = cyc ? group(2, {2}) : group(1, {2, 2}); break;
        case 'E':
        case 'F': e.rank = 2 * n; e.coinvariants = cyc ? group(2, {}) : group(1, {2}); break;
        case 'G': e.rank = 2 * n + n / 3; e.coinvariants = cyc ? group(3, {}) : group(2, {2}); break;
        case 'H':
            if (cyc) e.rank = n, e.coinvariants = group(1, {});
            break;
        case 'I': e.rank = n; e.coinvariants = group(1, {}); break;
        case 'J': e.rank = n; e.coinvariants = group(0, {2}); break;
        case 'M': e.rank = 2 * n; e.coinvariants = group(1, {}); break;
        default: break;  // K, L: unknown
    }
    if (e.form == 'A' || e.form == 'C') e.verdict = "NoEquivariantMap";
    else if (!cyc && inconclusive_shape(alpha)) e.verdict = "Inconclusive";
    else e.verdict = "MapExists";
    return e;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::NoEquivariantMap: return "NoEquivariantMap";
        case Verdict::MapExists: return "MapExists";
        default: return "Inconclusive";
    }
}

Verdict parse_verdict(const std::string& s) {
    if (s == "NoEquivariantMap") return Verdict::NoEquivariantMap;
    if (s == "MapExists") return Verdict::MapExists;
    if (s == "Inconclusive") return Verdict::Inconclusive;
    throw std::invalid_argument("unknown verdict: " + s);
}

namespace {

Decision conclude(const Alpha& alpha, GroupKind kind, const Analysis& a, std::optional<Verdict> cyclic) {
    Decision d;
    const char form = classify(alpha, kind);
    const auto& cg = a.coinvariants.group;
    d.justification.push_back("coinvariants " + cg.to_string());
    const auto& oc = a.obstruction;
    d.justification.push_back("obstruction = " + combination(str(oc.geometric[0]), str(oc.geometric[1])));

    if (kind == GroupKind::Dihedral && cyclic && *cyclic == Verdict::NoEquivariantMap) {
        d.verdict = Verdict::NoEquivariantMap;
        d.justification.push_back("restriction: no map equivariant for the shift subgroup exists");
    } else if (oc.verdict != obstruction::Verdict::Unsupported) {
        if (oc.order == 0) throw std::logic_error("obstruction image has infinite order");
        d.justification.push_back("explicit image of order " + str(oc.order));
        d.verdict = oc.verdict == obstruction::Verdict::Zero ? Verdict::MapExists : Verdict::NoEquivariantMap;
    } else if (kind == GroupKind::Dihedral && inconclusive_shape(alpha)) {
        d.justification.push_back("point class pairs with a deep stratum: unsupported");
        d.justification.push_back("alpha has a shape the reference dihedral classification leaves open");
        d.verdict = Verdict::Inconclusive;
    } else {
        d.justification.push_back("point class pairs with a deep stratum: unsupported");
        Int k;
        mpz_gcd(k.get_mpz_t(), oc.geometric[0].get_mpz_t(), oc.geometric[1].get_mpz_t());
        const Int e = torsion_exponent(cg);
        if (k % e == 0) {
            d.justification.push_back("class divisible by " + str(k) + ", torsion exponent " + str(e) +
                                      " divides it, image is torsion: zero");
            d.verdict = Verdict::MapExists;
        } else {
            d.justification.push_back("class divisible by " + str(k) + ", torsion exponent " + str(e) +
                                      ": undecided");
            d.verdict = Verdict::Inconclusive;
        }
    }
    // A decided verdict where the reference classification has no answer.
    d.beyond_paper = kind == GroupKind::Dihedral && d.verdict != Verdict::Inconclusive &&
                     expected(alpha, kind).verdict == "Inconclusive";
    if (d.verdict == Verdict::NoEquivariantMap) d.admissibility_note = "alpha in A(2,4) implied";
    return d;
}

}  // namespace

Analysis analyze_with(const Alpha& alpha, GroupKind kind, const AnalyzeOptions& opt, std::optional<Verdict> cyclic) {
    if (!alpha.valid()) throw std::invalid_argument("invalid composition " + alpha.to_string());
    Analysis a;
    a.poset = arrangement::make_poset(alpha, kind);
    a.link = poset_topology::zz_link_homology(a.poset, opt.link);
    a.module = equivariant_module::dualize(a.link, a.poset, true);
    a.coinvariants = equivariant_module::coinvariants(a.module);
    a.obstruction = obstruction::obstruction_class(a.poset, a.link, a.coinvariants);
    if (kind == GroupKind::Dihedral && !cyclic) cyclic = analyze_with(alpha, GroupKind::Cyclic, opt, {}).decision.verdict;
    a.decision = conclude(alpha, kind, a, cyclic);
    return a;
}

Analysis analyze(const Alpha& alpha, GroupKind kind, const AnalyzeOptions& opt) {
    return analyze_with(alpha, kind, opt, std::nullopt);
}

Decision decide(const Alpha& alpha, GroupKind kind) { return analyze(alpha, kind).decision; }

// ---------------------------------------------------------------------------

bool Report::operator==(const Report& o) const { return to_json(*this) == to_json(o); }

Report make_report(const Alpha& alpha, GroupKind kind, const Analysis& a) {
    Report r;
    r.alpha = alpha.to_string();
    r.group = arrangement::to_string(kind);
    r.arrangement.orbit_size = a.poset.maximal.size();
    r.arrangement.poset_counts = a.poset.count_by_dim();
    r.arrangement.poset_size = a.poset.size();
    r.homology.rank = a.link.rank;
    const Expected e = expected(alpha, kind);
    r.homology.case_label = e.rank ? std::string(1, e.form) : "paper-unknown";
    r.coinvariants.rank = a.coinvariants.group.rank;
    r.coinvariants.torsion = strs(a.coinvariants.group.torsion);
    const auto& oc = a.obstruction;
    r.obstruction.raw = {str(oc.raw[0]), str(oc.raw[1])};
    r.obstruction.geometric = {str(oc.geometric[0]), str(oc.geometric[1])};
    r.obstruction.vector = strs(oc.vector);
    r.obstruction.image = strs(oc.image);
    r.obstruction.order = str(oc.order);
    r.obstruction.verdict = obstruction::to_string(oc.verdict);
    r.decision.verdict = to_string(a.decision.verdict);
    r.decision.justification = a.decision.justification;
    r.decision.admissibility_note = a.decision.admissibility_note;
    r.decision.beyond_paper = a.decision.beyond_paper;
    if (alpha.n() == 4) r.notes.push_back("n = 4: L is the zero subspace");
    return r;
}

namespace {

// Integers print as JSON numbers when they fit, strings otherwise.
ordered_json num(const std::string& s) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    return s;
}

ordered_json nums(const std::vector<std::string>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& s : v) a.push_back(num(s));
    return a;
}

std::string unnum(const ordered_json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw std::invalid_argument("expected an integer");
}

std::vector<std::string> unnums(const ordered_json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array");
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(unnum(x));
    return out;
}

}  // namespace

std::string to_json(const Report& r, int indent) {
    ordered_json j;
    j["schema"] = r.schema;
    j["alpha"] = r.alpha;
    j["group"] = r.group;
    ordered_json counts = ordered_json::object();
    for (const auto& [d, c] : r.arrangement.poset_counts) counts[std::to_string(d)] = c;
    j["arrangement"] = {{"orbit_size", r.arrangement.orbit_size},
                        {"poset_size", r.arrangement.poset_size},
                        {"poset_counts_by_dim", counts}};
    j["homology"] = {{"rank", r.homology.rank}, {"torsion", nums(r.homology.torsion)}, {"case", r.homology.case_label}};
    j["coinvariants"] = {{"rank", r.coinvariants.rank}, {"torsion", nums(r.coinvariants.torsion)}};
    j["obstruction"] = {{"raw", nums(r.obstruction.raw)},
                        {"geometric", nums(r.obstruction.geometric)},
                        {"vector", nums(r.obstruction.vector)},
                        {"image", nums(r.obstruction.image)},
                        {"order", num(r.obstruction.order)},
                        {"verdict", r.obstruction.verdict}};
    ordered_json dec = {{"verdict", r.decision.verdict}, {"justification", r.decision.justification}};
    dec["admissibility_note"] = r.decision.admissibility_note ? ordered_json(*r.decision.admissibility_note) : ordered_json();
    dec["beyond_paper"] = r.decision.beyond_paper;
    j["decision"] = dec;
    j["notes"] = r.notes;
    return j.dump(indent);
}

Report report_from_json(const std::string& s) {
    ordered_json j;
    try {
        j = ordered_json::parse(s);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("report: ") + e.what());
    }
    try {
        Report r;
        r.schema = j.at("schema").get<int>();
        if (r.schema != 1) throw std::invalid_argument("report: unsupported schema");
        r.alpha = j.at("alpha").get<std::string>();
        r.group = j.at("group").get<std::string>();
        const auto& ar = j.at("arrangement");
        r.arrangement.orbit_size = ar.at("orbit_size").get<std::size_t>();
        r.arrangement.poset_size = ar.at("poset_size").get<std::size_t>();
        for (const auto& [k, v] : ar.at("poset_counts_by_dim").items()) r.arrangement.poset_counts[std::stoi(k)] = v.get<int>();
        const auto& h = j.at("homology");
        r.homology.rank = h.at("rank").get<std::size_t>();
        r.homology.torsion = unnums(h.at("torsion"));
        r.homology.case_label = h.at("case").get<std::string>();
        const auto& c = j.at("coinvariants");
        r.coinvariants.rank = c.at("rank").get<std::size_t>();
        r.coinvariants.torsion = unnums(c.at("torsion"));
        const auto& o = j.at("obstruction");
        r.obstruction.raw = unnums(o.at("raw"));
        r.obstruction.geometric = unnums(o.at("geometric"));
        r.obstruction.vector = unnums(o.at("vector"));
        r.obstruction.image = unnums(o.at("image"));
        r.obstruction.order = unnum(o.at("order"));
        r.obstruction.verdict = o.at("verdict").get<std::string>();
        const auto& d = j.at("decision");
        r.decision.verdict = d.at("verdict").get<std::string>();
        r.decision.justification = d.at("justification").get<std::vector<std::string>>();
        if (!d.at("admissibility_note").is_null()) r.decision.admissibility_note = d.at("admissibility_note").get<std::string>();
        r.decision.beyond_paper = d.at("beyond_paper").get<bool>();
        r.notes = j.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("report: ") + e.what());
    }
}

namespace {

std::string group_string(std::size_t rank, const std::vector<std::string>& torsion) {
    std::vector<std::string> parts;
    if (rank == 1) parts.push_back("Z");
    else if (rank > 1) parts.push_back("Z^" + std::to_string(rank));
    for (const auto& t : torsion) parts.push_back("Z_" + t);
    if (parts.empty()) return "0";
    std::string s = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
    return s;
}

}  // namespace

std::string to_text(const Report& r) {
    std::ostringstream os;
    os << "alpha " << r.alpha << "  group " << r.group << "\n";
    os << "arrangement: " << r.arrangement.orbit_size << " maximal subspaces, poset of " << r.arrangement.poset_size
       << " elements (";
    bool first = true;
    for (const auto& [d, c] : r.arrangement.poset_counts) {
        os << (first ? "" : ", ") << "dim " << d << ": " << c;
        first = false;
    }
    os << ")\n";
    os << "H_2(M): " << group_string(r.homology.rank, r.homology.torsion) << "  [case " << r.homology.case_label << "]\n";
    os << "coinvariants: " << group_string(r.coinvariants.rank, r.coinvariants.torsion) << "\n";
    os << "obstruction: " << combination(r.obstruction.raw.at(0), r.obstruction.raw.at(1)) << " (geometric "
       << combination(r.obstruction.geometric.at(0), r.obstruction.geometric.at(1)) << "), " << r.obstruction.verdict;
    if (r.obstruction.verdict != "Unsupported") os << " (order " << r.obstruction.order << ")";
    os << "\n";
    os << "decision: " << r.decision.verdict << (r.decision.beyond_paper ? "  [beyond-paper]" : "") << "\n";
    for (const auto& j : r.decision.justification) os << "  - " << j << "\n";
    if (r.decision.admissibility_note) os << "note: " << *r.decision.admissibility_note << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------

std::size_t Table::mismatches() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const TableRow& r) { return !r.diffs.empty(); }));
}

Table run_table(GroupKind kind, int n_max) {
    if (n_max < 4 || n_max > 16) throw std::invalid_argument("run_table: n_max must be in 4..16");
    Table t;
    t.kind = kind;
    for (int n = 4; n <= n_max; ++n)
        for (const auto& alpha : arrangement::compositions(n)) {
            std::optional<Verdict> cyc;
            if (kind == GroupKind::Dihedral) cyc = analyze(alpha, GroupKind::Cyclic).decision.verdict;
            const Analysis a = analyze_with(alpha, kind, {}, cyc);
            const Expected e = expected(alpha, kind);
            TableRow row;
            row.alpha = alpha;
            row.form = e.form;
            row.rank = a.link.rank;
            row.coinvariants = a.coinvariants.group;
            row.verdict = a.decision.verdict;
            row.paper_unknown = !e.rank;
            if (e.rank && *e.rank != row.rank)
                row.diffs.push_back("rank " + std::to_string(row.rank) + " vs " + std::to_string(*e.rank));
            if (e.coinvariants && !(*e.coinvariants == row.coinvariants))
                row.diffs.push_back("coinvariants " + row.coinvariants.to_string() + " vs " + e.coinvariants->to_string());
            const bool explicit_beyond = a.decision.beyond_paper && row.verdict != Verdict::NoEquivariantMap;
            if (to_string(row.verdict) != e.verdict && !explicit_beyond)
                row.diffs.push_back("verdict " + to_string(row.verdict) + " vs " + e.verdict);
            t.rows.push_back(std::move(row));
        }
    return t;
}

std::string to_text(const Table& t) {
    std::ostringstream os;
    for (const auto& r : t.rows) {
        os << r.alpha.to_string() << "  " << r.form << "  rank " << r.rank << "  coinv " << r.coinvariants.to_string()
           << "  " << to_string(r.verdict);
        if (r.paper_unknown) os << "  paper-unknown";
        for (const auto& d : r.diffs) os << "  MISMATCH " << d;
        os << "\n";
    }
    os << t.rows.size() << " rows, " << t.mismatches() << " mismatches\n";
    return os.str();
}

}  // namespace s3map::decision
