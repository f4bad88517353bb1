// Acceptance run: one PASS/FAIL line per criterion, details indented above it.
#include "oracle/naive_homology.hpp"
#include "s3map/decision.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace s3map;
using arrangement::Alpha;
using arrangement::GroupKind;
using arrangement::GroupSpec;
using exactalg::FGAbelianGroup;
using exactalg::Int;

namespace {

constexpr int kSweepMax = 12;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* name(GroupKind k) { return k == GroupKind::Cyclic ? "cyclic" : "dihedral"; }

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> details;
    std::vector<std::string> failures;
    void fail(const std::string& s) { failures.push_back(s); }
    void note(const std::string& s) { details.push_back(s); }
    bool report() const {
        const std::size_t shown = std::min<std::size_t>(failures.size(), 40);
        for (std::size_t i = 0; i < shown; ++i) std::cout << "    mismatch: " << failures[i] << "\n";
        if (failures.size() > shown) std::cout << "    ... " << failures.size() - shown << " more\n";
        for (const auto& d : details) std::cout << "    " << d << "\n";
        const bool ok = failures.empty();
        std::cout << "criterion " << id << " " << (ok ? "PASS" : "FAIL") << ": " << title;
        if (!ok) std::cout << " (" << failures.size() << " mismatches)";
        std::cout << std::endl;
        return ok;
    }
};

std::string label(const Alpha& a, GroupKind k) { return "(" + a.to_string() + ") " + name(k); }

// ---------------------------------------------------------------------------
// Criteria 1, 2, 4 and the transfer part of 7 share one sweep over n <= 12.

struct SweepResult {
    Criterion homology{1, "homology tables, n <= 12"};
    Criterion coinv{2, "coinvariant tables and Gamma route, n <= 12"};
    Criterion decisions{4, "main theorems, n <= 12"};
    std::vector<std::string> transfer_failures;
    std::size_t transfer_checked = 0, transfer_unsupported = 0;
    bool summands_free = true;
    double homology_seconds = 0, total_seconds = 0;
};

void sweep(SweepResult& R) {
    std::size_t beyond = 0, compared_h = 0, compared_c = 0, gamma_checked = 0;
    const auto t0 = Clock::now();
    for (int n = 4; n <= kSweepMax; ++n)
        for (const auto& a : arrangement::compositions(n)) {
            std::optional<decision::Verdict> cyclic;
            for (auto k : {GroupKind::Cyclic, GroupKind::Dihedral}) {
                const auto th = Clock::now();
                auto P = arrangement::make_poset(a, k);
                auto link = poset_topology::zz_link_homology(P);
                R.homology_seconds += seconds_since(th);
                for (const auto& s : link.summands)
                    if (!s.homology.group.torsion.empty()) R.summands_free = false;

                const auto e = decision::expected(a, k);
                // 1: H_2 rank and absence of torsion.
                if (e.rank) {
                    ++compared_h;
                    if (link.rank != *e.rank)
                        R.homology.fail(label(a, k) + " form " + e.form + ": rank " + std::to_string(link.rank) +
                                        ", table " + std::to_string(*e.rank));
                }

                auto an = decision::analyze_with(a, k, {}, cyclic);
                // 2: coinvariants against the table, both pipelines.
                const auto& cg = an.coinvariants.group;
                if (e.coinvariants) {
                    ++compared_c;
                    if (cg != *e.coinvariants)
                        R.coinv.fail(label(a, k) + " form " + e.form + ": " + cg.to_string() + ", table " +
                                     e.coinvariants->to_string());
                }
                if (k == GroupKind::Dihedral) {
                    ++gamma_checked;
                    const auto g = equivariant_module::coinvariants_via_gamma(an.module).group;
                    if (g != cg)
                        R.coinv.fail(label(a, k) + ": Gamma route " + g.to_string() + " vs relations " +
                                     cg.to_string());
                }

                // 4: verdicts.
                const auto& d = an.decision;
                const auto got = decision::to_string(d.verdict);
                bool ok = got == e.verdict;
                if (!ok && k == GroupKind::Dihedral && e.verdict == "Inconclusive" &&
                    d.verdict == decision::Verdict::MapExists && d.beyond_paper)
                    ok = true, ++beyond;
                if (!ok) R.decisions.fail(label(a, k) + " form " + e.form + ": " + got + ", expected " + e.verdict);
                if (d.verdict == decision::Verdict::NoEquivariantMap && !d.admissibility_note)
                    R.decisions.fail(label(a, k) + ": NoEquivariantMap without the admissibility note");
                if (k == GroupKind::Cyclic) cyclic = d.verdict;

                // 7 (transfer): |G| times the image is zero.
                const auto& oc = an.obstruction;
                if (oc.verdict == obstruction::Verdict::Unsupported) {
                    ++R.transfer_unsupported;
                } else {
                    ++R.transfer_checked;
                    const Int order = P.group.order();
                    auto v = oc.vector;
                    for (auto& x : v) x *= order;
                    if (an.coinvariants.order(v) != 1)
                        R.transfer_failures.push_back(label(a, k) + ": |G| * image is nonzero");
                }
            }
        }
    R.total_seconds = seconds_since(t0);

    std::ostringstream h;
    h.setf(std::ios::fixed);
    h.precision(1);
    h << compared_h << " classified instances compared; poset + link homology sweep " << R.homology_seconds
      << " s (limit 120 s)";
    R.homology.note(h.str());
    if (!R.summands_free) R.homology.fail("torsion in some link summand");
    if (R.homology_seconds >= 120) R.homology.fail("sweep took " + std::to_string(R.homology_seconds) + " s");
    R.coinv.note(std::to_string(compared_c) + " instances with stated values compared; Gamma route checked on " +
                 std::to_string(gamma_checked) + " dihedral instances");
    R.decisions.note(std::to_string(beyond) +
                     " dihedral rows left open by the reference classification get an explicit zero image "
                     "(MapExists, beyond-paper)");
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(1);
    t << "full analysis sweep " << R.total_seconds << " s";
    R.decisions.note(t.str());
}

// ---------------------------------------------------------------------------

Criterion closed_forms() {
    Criterion c{3, "obstruction closed forms, n <= 12"};
    std::size_t total = 0;
    for (int n = 4; n <= kSweepMax; ++n)
        for (const auto& a : arrangement::compositions(n))
            for (auto k : {GroupKind::Cyclic, GroupKind::Dihedral}) {
                ++total;
                auto cmp = obstruction::compare_closed_form(arrangement::make_poset(a, k));
                if (cmp.match) continue;
                std::ostringstream os;
                os << label(a, k) << " case " << cmp.formula.label << ": formula (" << cmp.formula.coeff[0] << ","
                   << cmp.formula.coeff[1] << "), enumerated";
                for (const auto& e : cmp.enumerated) os << " (" << e[0] << "," << e[1] << ")";
                c.fail(os.str());
            }
    c.note(std::to_string(total) + " instances compared");
    return c;
}

std::vector<FGAbelianGroup> trimmed(std::vector<FGAbelianGroup> h) {
    while (!h.empty() && h.back().trivial()) h.pop_back();
    return h;
}

Criterion structural(const SweepResult& R) {
    Criterion c{5, "structural properties"};
    for (int n = 1; n <= 16; ++n) {
        auto cx = obstruction::build_cell_complex(n);
        if (!cx.boundary_squared_zero()) c.fail("n=" + std::to_string(n) + ": d^2 != 0");
        auto h = cx.homology();
        const bool s3 = h.size() == 4 && h[0] == FGAbelianGroup{1, {}} && h[1].trivial() && h[2].trivial() &&
                        h[3] == FGAbelianGroup{1, {}};
        if (!s3) c.fail("n=" + std::to_string(n) + ": cellular homology is not (Z,0,0,Z)");
    }
    c.note("cellular complex: d^2 = 0 and (Z,0,0,Z) checked for n = 1..16");
    if (!R.summands_free) c.fail("torsion in a link summand");
    c.note("link summands torsion-free on the n <= 12 sweep: " + std::string(R.summands_free ? "yes" : "no"));

    std::size_t elements = 0;
    for (int n = 4; n <= 10; ++n)
        for (const auto& a : arrangement::compositions(n))
            for (auto k : {GroupKind::Cyclic, GroupKind::Dihedral}) {
                auto P = arrangement::make_poset(a, k);
                for (std::size_t p = 0; p < P.size(); ++p) {
                    ++elements;
                    auto full = trimmed(poset_topology::reduced_homology_all(poset_topology::order_complex(P, p)));
                    auto pruned = trimmed(poset_topology::reduced_homology_all(poset_topology::prune_quillen(P, p)));
                    if (full != pruned) c.fail(label(a, k) + " element " + std::to_string(p) + ": pruned differs");
                }
            }
    c.note("pruned vs unpruned homology compared on " + std::to_string(elements) + " poset elements, n <= 10");
    return c;
}

bool same(const std::vector<oracle::Group>& o, const std::vector<FGAbelianGroup>& l) {
    if (o.size() != l.size()) return false;
    for (std::size_t i = 0; i < o.size(); ++i) {
        if (static_cast<std::size_t>(o[i].rank) != l[i].rank) return false;
        if (o[i].torsion.size() != l[i].torsion.size()) return false;
        for (std::size_t t = 0; t < o[i].torsion.size(); ++t)
            if (l[i].torsion[t] != o[i].torsion[t]) return false;
    }
    return true;
}

Criterion oracle_equivalence() {
    Criterion c{6, "naive homology oracle, n <= 9"};
    std::size_t complexes = 0;
    for (int n = 4; n <= 9; ++n)
        for (const auto& a : arrangement::compositions(n))
            for (auto k : {GroupKind::Cyclic, GroupKind::Dihedral}) {
                auto P = arrangement::make_poset(a, k);
                auto link = poset_topology::zz_link_homology(P);
                for (std::size_t p = 0; p < P.size(); ++p) {
                    // The optimized path only builds complexes for orbit representatives.
                    std::size_t rep = p;
                    for (const auto& perm : P.action) rep = std::min<std::size_t>(rep, perm[p]);
                    if (rep != p) continue;
                    ++complexes;
                    const auto naive = oracle::reduced_homology(P, p);
                    if (!same(naive, poset_topology::reduced_homology_all(poset_topology::order_complex(P, p))))
                        c.fail(label(a, k) + " element " + std::to_string(p) + ": all-degree homology differs");
                    // Top degree against the summand the link pipeline kept.
                    const int deg = link.summands[p].degree;
                    const std::size_t idx = static_cast<std::size_t>(deg + 1);
                    const auto& kept = link.summands[p].homology.group;
                    const long want = idx < naive.size() ? naive[idx].rank : 0;
                    const bool no_torsion = idx >= naive.size() || naive[idx].torsion.empty();
                    if (static_cast<long>(kept.rank) != want || !kept.torsion.empty() || !no_torsion)
                        c.fail(label(a, k) + " element " + std::to_string(p) + ": link summand differs");
                }
            }
    c.note(std::to_string(complexes) + " order complexes (orbit representatives) compared in all degrees");
    return c;
}

// ---------------------------------------------------------------------------

using Mat64 = std::vector<std::vector<long long>>;

Mat64 to64(const exactalg::IntegerMatrix& m) {
    Mat64 out(m.rows(), std::vector<long long>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!m(i, j).fits_slong_p()) throw std::overflow_error("matrix entry exceeds int64");
            out[i][j] = m(i, j).get_si();
        }
    return out;
}

std::vector<long long> mat_vec(const Mat64& m, const std::vector<long long>& v) {
    std::vector<long long> out(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) {
            long long t;
            if (__builtin_mul_overflow(m[i][j], v[j], &t) || __builtin_add_overflow(out[i], t, &out[i]))
                throw std::overflow_error("int64 overflow in word check");
        }
    return out;
}

Criterion signs(const SweepResult& R) {
    Criterion c{7, "sign self-consistency"};
    for (int n = 2; n <= 16; ++n) {
        GroupSpec G{GroupKind::Dihedral, n};
        for (const auto& g : G.elements()) {
            exactalg::RationalMatrix M(n - 1, n - 1);
            for (int k = 0; k < n - 1; ++k) {
                std::vector<exactalg::Rat> b(n, 0);
                b[k] = 1;
                b[k + 1] = -1;
                auto gb = arrangement::act(g, b);
                exactalg::Rat acc = 0;
                for (int i = 0; i < n - 1; ++i) {
                    acc += gb[i];
                    M(i, k) = acc;
                }
            }
            if (exactalg::Rat(arrangement::det_ambient(g, n)) != exactalg::determinant(M))
                c.fail("det_ambient differs from det on W_n at n=" + std::to_string(n));
        }
    }
    c.note("det_ambient checked against the exact determinant on W_n for n = 2..16");

    std::mt19937 rng(2024);
    std::size_t configs = 0;
    constexpr int kWords = 1000;
    for (int n = 4; n <= 8; ++n)
        for (const auto& a : arrangement::compositions(n))
            for (auto k : {GroupKind::Cyclic, GroupKind::Dihedral}) {
                ++configs;
                auto P = arrangement::make_poset(a, k);
                auto link = poset_topology::zz_link_homology(P);
                const auto els = P.group.elements();
                std::vector<Mat64> mats;
                for (const auto& g : els) mats.push_back(to64(equivariant_module::induced_action(link, P, g)));
                std::uniform_int_distribution<std::size_t> pick(0, els.size() - 1);
                std::uniform_int_distribution<int> len(2, 8), coef(-3, 3);
                int bad = 0;
                for (int w = 0; w < kWords; ++w) {
                    const int L = len(rng);
                    std::vector<std::size_t> word(L);
                    for (auto& x : word) x = pick(rng);
                    auto prod = arrangement::GroupElement{};
                    for (auto x : word) prod = P.group.mul(prod, els[x]);
                    std::vector<long long> v(link.rank);
                    for (auto& x : v) x = coef(rng);
                    // Apply right to left, compare with the product's matrix.
                    auto seq = v;
                    for (auto it = word.rbegin(); it != word.rend(); ++it) seq = mat_vec(mats[*it], seq);
                    if (seq != mat_vec(mats[P.group.index(prod)], v)) ++bad;
                    // Same word on the poset.
                    const auto& pp = P.perm(prod);
                    for (std::size_t x = 0; x < P.size(); ++x) {
                        int y = static_cast<int>(x);
                        for (auto it = word.rbegin(); it != word.rend(); ++it) y = P.action[*it][y];
                        if (y != pp[x]) {
                            ++bad;
                            break;
                        }
                    }
                }
                if (bad) c.fail(label(a, k) + ": " + std::to_string(bad) + " words break the homomorphism property");
            }
    c.note(std::to_string(kWords) + " random words on H_2 and on the poset for each of " + std::to_string(configs) +
           " configurations (n <= 8)");
    for (const auto& f : R.transfer_failures) c.fail(f);
    c.note("transfer bound checked on " + std::to_string(R.transfer_checked) + " instances with explicit images; " +
           std::to_string(R.transfer_unsupported) + " unsupported instances have no explicit image to check");
    return c;
}

// Random rational point of K: integer combination of its basis rows.
std::vector<exactalg::Rat> random_point(const arrangement::Subspace& K, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-9, 9);
    const auto& B = K.basis();
    std::vector<exactalg::Rat> y(B.cols(), 0);
    for (std::size_t r = 0; r < B.rows(); ++r) {
        const int c = coef(rng);
        for (std::size_t j = 0; j < B.cols(); ++j) y[j] += c * B(r, j);
    }
    return y;
}

// Generic on K: in no smaller poset element.
bool generic_on(const arrangement::IntersectionPoset& P, std::size_t K, const std::vector<exactalg::Rat>& y) {
    for (std::size_t p = 0; p < P.size(); ++p)
        if (p != K && P.elements[K].contains(P.elements[p]) && P.elements[p].contains(y)) return false;
    return true;
}

Criterion point_classes() {
    Criterion c{8, "point-class invariance"};
    std::mt19937 rng(77);
    const std::vector<Alpha> pool{Alpha{{1, 1, 1, 2}}, Alpha{{1, 1, 1, 3}}, Alpha{{1, 2, 1, 2}}, Alpha{{1, 1, 2, 2}},
                                  Alpha{{2, 2, 2, 2}}, Alpha{{1, 2, 3, 4}}, Alpha{{1, 2, 4, 5}}, Alpha{{2, 1, 2, 3}}};
    int pairs = 0, attempts = 0;
    while (pairs < 20 && attempts < 2000) {
        ++attempts;
        const Alpha& a = pool[attempts % pool.size()];
        const auto k = attempts % 2 ? GroupKind::Cyclic : GroupKind::Dihedral;
        auto P = arrangement::make_poset(a, k);
        auto link = poset_topology::zz_link_homology(P);
        auto gen = obstruction::generic_points(P);
        std::uniform_int_distribution<std::size_t> pickK(0, P.maximal.size() - 1);
        const std::size_t K = P.maximal[pickK(rng)];
        // Two generic points of K in the same chamber of the dim n-5 walls.
        auto y1 = random_point(P.elements[K], rng);
        if (!generic_on(P, K, y1)) continue;
        const auto ch = obstruction::chamber(P, gen, y1, K);
        std::vector<exactalg::Rat> y2;
        bool found = false;
        for (int t = 0; t < 50 && !found; ++t) {
            y2 = random_point(P.elements[K], rng);
            found = y2 != y1 && generic_on(P, K, y2) && obstruction::chamber(P, gen, y2, K) == ch;
        }
        if (!found) continue;
        auto v1 = obstruction::try_point_class(P, link, gen, y1, K);
        auto v2 = obstruction::try_point_class(P, link, gen, y2, K);
        if (!v1 || !v2) continue;  // ambiguous deep pairing: draw again
        ++pairs;
        if (*v1 != *v2) c.fail(label(a, k) + ": point classes differ within one chamber");
    }
    if (pairs < 20) c.fail("only " + std::to_string(pairs) + " supported pairs found in " + std::to_string(attempts) +
                           " attempts");
    c.note(std::to_string(pairs) + " same-chamber pairs of generic points on maximal strata compared");
    return c;
}

}  // namespace

int main() {
    std::cout << "acceptance run" << std::endl;
    SweepResult R;
    sweep(R);
    bool ok = true;
    ok &= R.homology.report();
    ok &= R.coinv.report();
    ok &= closed_forms().report();
    ok &= R.decisions.report();
    ok &= structural(R).report();
    ok &= oracle_equivalence().report();
    ok &= signs(R).report();
    ok &= point_classes().report();
    return ok ? 0 : 1;
}
