// s3map: command line front end for the equivariant map decision pipeline.
#include "s3map/decision.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace s3map;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kInvalid = 2, kInternal = 3 };

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

arrangement::Alpha alpha_arg(const std::string& s) {
    try {
        return arrangement::parse_alpha(s);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
}

arrangement::GroupKind group_arg(const std::string& s) {
    try {
        return arrangement::parse_group(s);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
}

// Recomputes the pipeline along independent paths; returns the failures.
std::vector<std::string> oracle_check(const arrangement::Alpha& alpha, arrangement::GroupKind kind,
                                      const decision::Analysis& a) {
    std::vector<std::string> bad;
    poset_topology::LinkOptions plain;
    plain.prune = false;
    plain.shadow_check_max_n = 0;
    const auto unpruned = poset_topology::zz_link_homology(a.poset, plain);
    if (unpruned.rank != a.link.rank) bad.push_back("unpruned link rank differs");
    const auto gamma = equivariant_module::coinvariants_via_gamma(a.module);
    if (!(gamma.group == a.coinvariants.group)) bad.push_back("coinvariants differ from the cokernel route");
    const auto full = equivariant_module::coinvariants_full_group(a.link, a.poset);
    if (!(full == a.coinvariants.group)) bad.push_back("coinvariants differ from the full relation set");
    if (a.obstruction.verdict != obstruction::Verdict::Unsupported) {
        std::vector<exactalg::Int> scaled = a.obstruction.vector;
        // Z_n or Q_4n acting freely on S^3.
        const int order = kind == arrangement::GroupKind::Cyclic ? alpha.n() : 4 * alpha.n();
        for (auto& x : scaled) x *= order;
        if (a.coinvariants.order(scaled) != 1) bad.push_back("|G| times the obstruction image is not zero");
    }
    return bad;
}

int run_analyze(const std::string& alpha_s, const std::string& group_s, bool json, bool check) {
    const auto alpha = alpha_arg(alpha_s);
    const auto kind = group_arg(group_s);
    const auto a = decision::analyze(alpha, kind);
    const auto report = decision::make_report(alpha, kind, a);
    std::cout << (json ? decision::to_json(report) + "\n" : decision::to_text(report));
    if (check) {
        const auto bad = oracle_check(alpha, kind, a);
        for (const auto& b : bad) std::cerr << "oracle-check: " << b << "\n";
        if (!bad.empty()) return kInternal;
        std::cerr << "oracle-check: ok\n";
    }
    return kOk;
}

int run_table(const std::string& group_s, int n_max) {
    const auto kind = group_arg(group_s);
    if (n_max < 4 || n_max > 16) throw InvalidInput("--n-max must be in 4..16");
    const auto t = decision::run_table(kind, n_max);
    std::cout << decision::to_text(t);
    return t.mismatches() ? kMismatch : kOk;
}

int run_poset(const std::string& alpha_s, const std::string& group_s, bool dot, const std::string& path) {
    const auto P = arrangement::make_poset(alpha_arg(alpha_s), group_arg(group_s));
    if (!dot) {
        std::cout << P.size() << " elements, " << P.maximal.size() << " maximal\n";
        for (const auto& [d, c] : P.count_by_dim()) std::cout << "dim " << d << ": " << c << "\n";
        return kOk;
    }
    const std::string g = arrangement::hasse_dot(P);
    if (path.empty()) {
        std::cout << g;
    } else {
        std::ofstream out(path);
        if (!out) throw InvalidInput("cannot write " + path);
        out << g;
    }
    return kOk;
}

int run_resolution(int n) {
    if (n < 1) throw InvalidInput("--n must be positive");
    const auto c = obstruction::build_cell_complex(n);
    std::cout << "cellular resolution of Z over Q_" << 4 * n << "\n";
    for (int k = 0; k <= 3; ++k) {
        std::cout << "dim " << k << ":";
        for (const auto& cell : c.cells[k]) std::cout << " " << cell;
        std::cout << "\n";
    }
    std::cout << c.describe();
    const bool ok = c.boundary_squared_zero();
    std::cout << "d^2 = 0: " << (ok ? "yes" : "NO") << "\n";
    const auto h = c.homology();
    std::cout << "homology:";
    for (const auto& g : h) std::cout << " " << g.to_string();
    std::cout << "\n";
    return ok ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equivariant maps S^3 -> M(alpha): arrangement, link homology and obstruction"};
    app.require_subcommand(1);

    std::string alpha, group = "cyclic", dot_path;
    bool json = false, check = false;
    int n_max = 8, n = 1;

    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline for one alpha");
    analyze->add_option("--alpha", alpha, "Composition a,b,c,d")->required();
    analyze->add_option("--group", group, "cyclic or dihedral")->required();
    analyze->add_flag("--json", json, "Emit the JSON report");
    analyze->add_flag("--oracle-check", check, "Cross-check against independent computations");

    auto* table = app.add_subcommand("table", "Sweep all alpha up to n-max and diff against the tables");
    table->add_option("--group", group, "cyclic or dihedral")->required();
    table->add_option("--n-max", n_max, "Largest n (4..16)")->required();

    auto* poset = app.add_subcommand("poset", "Intersection poset summary or Hasse diagram");
    poset->add_option("--alpha", alpha, "Composition a,b,c,d")->required();
    poset->add_option("--group", group, "cyclic or dihedral")->required();
    auto* dot = poset->add_option("--dot", dot_path, "Write Graphviz (to stdout without a path)")->expected(0, 1);

    auto* resolution = app.add_subcommand("resolution", "Print the cellular resolution and check d^2 = 0");
    resolution->add_option("--n", n, "Parameter n of Q_4n")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (*analyze) return run_analyze(alpha, group, json, check);
        if (*table) return run_table(group, n_max);
        if (*poset) return run_poset(alpha, group, dot->count() > 0, dot_path);
        return run_resolution(n);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
