#include "printers.hpp"
#include "s3map/decision.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <memory>

using namespace s3map;
using namespace s3map::decision;

namespace {

Alpha A(int a, int b, int c, int d) { return Alpha{{a, b, c, d}}; }

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    Run r;
    const std::string cmd = std::string(S3MAP_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST(Classify, Forms) {
    EXPECT_EQ(classify(A(2, 2, 2, 2), GroupKind::Cyclic), 'A');
    EXPECT_EQ(classify(A(2, 1, 2, 1), GroupKind::Cyclic), 'B');
    EXPECT_EQ(classify(A(1, 2, 1, 1), GroupKind::Cyclic), 'C');
    EXPECT_EQ(classify(A(3, 1, 1, 1), GroupKind::Cyclic), 'D');
    EXPECT_EQ(classify(A(1, 1, 1, 4), GroupKind::Cyclic), 'E');
    EXPECT_EQ(classify(A(1, 2, 1, 3), GroupKind::Cyclic), 'F');
    EXPECT_EQ(classify(A(1, 1, 2, 2), GroupKind::Cyclic), 'G');
    EXPECT_EQ(classify(A(1, 2, 3, 4), GroupKind::Cyclic), 'H');
    EXPECT_EQ(classify(A(1, 1, 2, 2), GroupKind::Dihedral), 'G');
    EXPECT_EQ(classify(A(1, 2, 3, 3), GroupKind::Dihedral), 'H');
    EXPECT_EQ(classify(A(1, 1, 3, 3), GroupKind::Dihedral), 'I');
    EXPECT_EQ(classify(A(1, 2, 4, 2), GroupKind::Dihedral), 'J');
    EXPECT_EQ(classify(A(1, 2, 4, 5), GroupKind::Dihedral), 'M');
}

TEST(Classify, InconclusiveShapesAreLiteral) {
    EXPECT_TRUE(inconclusive_shape(A(1, 2, 3, 3)));
    EXPECT_TRUE(inconclusive_shape(A(2, 1, 4, 3)));
    EXPECT_FALSE(inconclusive_shape(A(1, 2, 3, 4)));
    EXPECT_TRUE(inconclusive_shape(A(1, 1, 2, 3)));
    EXPECT_FALSE(inconclusive_shape(A(2, 2, 2, 2)));
}

TEST(Decide, Examples) {
    EXPECT_EQ(decide(A(1, 1, 1, 1), GroupKind::Cyclic).verdict, Verdict::NoEquivariantMap);
    EXPECT_EQ(decide(A(2, 2, 2, 4), GroupKind::Dihedral).verdict, Verdict::NoEquivariantMap);
    EXPECT_EQ(decide(A(1, 2, 1, 2), GroupKind::Cyclic).verdict, Verdict::MapExists);
    EXPECT_EQ(decide(A(1, 2, 3, 3), GroupKind::Dihedral).verdict, Verdict::Inconclusive);
    EXPECT_EQ(decide(A(1, 2, 3, 4), GroupKind::Dihedral).verdict, Verdict::MapExists);
}

TEST(Decide, AdmissibilityNoteOnNegativeVerdicts) {
    auto d = decide(A(1, 1, 1, 2), GroupKind::Cyclic);
    ASSERT_TRUE(d.admissibility_note.has_value());
    EXPECT_EQ(*d.admissibility_note, "alpha in A(2,4) implied");
    EXPECT_FALSE(decide(A(1, 2, 1, 2), GroupKind::Cyclic).admissibility_note.has_value());
}

TEST(Decide, OpenShapeMarker) {
    EXPECT_FALSE(decide(A(1, 2, 3, 3), GroupKind::Dihedral).beyond_paper);  // mirrors the reference answer
    EXPECT_FALSE(decide(A(1, 1, 2, 3), GroupKind::Dihedral).beyond_paper);  // open and undecided
    EXPECT_TRUE(decide(A(1, 1, 1, 4), GroupKind::Dihedral).beyond_paper);   // open, explicit zero image
    EXPECT_FALSE(decide(A(1, 1, 1, 2), GroupKind::Dihedral).beyond_paper);  // settled by restriction
    EXPECT_FALSE(decide(A(1, 2, 3, 4), GroupKind::Cyclic).beyond_paper);
}

TEST(Decide, InvalidAlpha) { EXPECT_THROW(decide(A(0, 1, 1, 1), GroupKind::Cyclic), std::invalid_argument); }

TEST(Report, JsonRoundTrip) {
    for (auto a : {A(1, 1, 1, 2), A(1, 2, 3, 3), A(1, 1, 1, 1)})
        for (auto k : {GroupKind::Cyclic, GroupKind::Dihedral}) {
            auto r = make_report(a, k, analyze(a, k));
            const auto j = to_json(r);
            auto back = report_from_json(j);
            EXPECT_EQ(back, r);
            EXPECT_EQ(to_json(back), j);
        }
}

TEST(Report, Fields) {
    auto r = make_report(A(1, 1, 1, 2), GroupKind::Cyclic, analyze(A(1, 1, 1, 2), GroupKind::Cyclic));
    EXPECT_EQ(r.schema, 1);
    EXPECT_EQ(r.homology.rank, 9u);
    EXPECT_EQ(r.homology.case_label, "C");
    EXPECT_EQ(r.coinvariants.torsion, std::vector<std::string>{"5"});
    EXPECT_EQ(r.decision.verdict, "NoEquivariantMap");
    auto h = make_report(A(1, 2, 3, 3), GroupKind::Dihedral, analyze(A(1, 2, 3, 3), GroupKind::Dihedral));
    EXPECT_EQ(h.homology.case_label, "paper-unknown");
    auto z = make_report(A(1, 1, 1, 1), GroupKind::Cyclic, analyze(A(1, 1, 1, 1), GroupKind::Cyclic));
    EXPECT_FALSE(z.notes.empty());
}

TEST(Report, RejectsMalformedJson) {
    EXPECT_THROW(report_from_json("{"), std::invalid_argument);
    EXPECT_THROW(report_from_json("{\"schema\": 2}"), std::invalid_argument);
}

TEST(Table, SmallRuns) {
    auto one = run_table(GroupKind::Cyclic, 4);
    ASSERT_EQ(one.rows.size(), 1u);
    EXPECT_EQ(one.rows[0].alpha, A(1, 1, 1, 1));
    auto cyc = run_table(GroupKind::Cyclic, 8);
    EXPECT_EQ(cyc.mismatches(), 0u) << to_text(cyc);
    auto dih = run_table(GroupKind::Dihedral, 8);
    for (const auto& row : dih.rows) {
        const bool unknown = row.form == 'H' || row.form == 'K' || row.form == 'L';
        EXPECT_EQ(row.paper_unknown, unknown) << row.alpha.to_string();
    }
    EXPECT_THROW(run_table(GroupKind::Cyclic, 3), std::invalid_argument);
    EXPECT_EQ(to_text(run_table(GroupKind::Cyclic, 6)), to_text(run_table(GroupKind::Cyclic, 6)));
}

TEST(Cli, AnalyzeJson) {
    auto r = cli("analyze --alpha 1,1,1,2 --group cyclic --json");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"verdict\": \"NoEquivariantMap\""), std::string::npos);
    EXPECT_NE(r.out.find("alpha in A(2,4) implied"), std::string::npos);
}

TEST(Cli, AnalyzeText) {
    auto r = cli("analyze --alpha 1,2,1,2 --group dihedral --oracle-check");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("coinvariants: Z_2"), std::string::npos);
    EXPECT_NE(r.out.find("oracle-check: ok"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli("analyze --alpha 0,1,1,1 --group cyclic").code, 2);
    EXPECT_EQ(cli("analyze --alpha 1,1,1,1 --group triangle").code, 2);
    EXPECT_EQ(cli("table --group cyclic --n-max 3").code, 2);
    EXPECT_EQ(cli("bogus").code, 2);
    EXPECT_EQ(cli("table --group cyclic --n-max 4").code, 0);
}

TEST(Cli, PosetAndResolution) {
    auto one = cli("poset --alpha 1,1,1,1 --group cyclic --dot");
    EXPECT_EQ(one.code, 0);
    EXPECT_NE(one.out.find("digraph"), std::string::npos);
    EXPECT_EQ(one.out.find("->"), std::string::npos);
    auto res = cli("resolution --n 3");
    EXPECT_EQ(res.code, 0);
    EXPECT_NE(res.out.find("d^2 = 0: yes"), std::string::npos);
    EXPECT_NE(res.out.find("homology: Z 0 0 Z"), std::string::npos);
}
