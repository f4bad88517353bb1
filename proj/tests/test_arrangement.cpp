#include "printers.hpp"
#include "s3map/arrangement.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace s3map;
using namespace s3map::arrangement;

namespace {

Alpha A(int a, int b, int c, int d) { return Alpha{{a, b, c, d}}; }

std::vector<Rat> e(int n, int i) {
    std::vector<Rat> v(n, 0);
    v[i - 1] = 1;
    return v;
}

// Independent closure: add pairwise intersections until nothing new appears.
std::set<Subspace> brute_closure(const Arrangement& arr) {
    std::set<Subspace> out(arr.maximal.begin(), arr.maximal.end());
    for (bool grew = true; grew;) {
        grew = false;
        const std::vector<Subspace> cur(out.begin(), out.end());
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j)
                grew |= out.insert(cur[i].intersect(cur[j])).second;
    }
    return out;
}

}  // namespace

TEST(Alpha, ParseAndValidate) {
    EXPECT_EQ(parse_alpha("1,2,3,4"), A(1, 2, 3, 4));
    EXPECT_THROW(parse_alpha("0,1,1,1"), std::invalid_argument);
    EXPECT_THROW(parse_alpha("1,2,3"), std::invalid_argument);
    EXPECT_THROW(parse_alpha("a,b,c,d"), std::invalid_argument);
    EXPECT_EQ(compositions(4).size(), 1u);
    EXPECT_EQ(compositions(12).size(), 165u);  // C(11,3)
}

TEST(BuildL, SmallCases) {
    EXPECT_EQ(build_L(A(1, 1, 1, 1)).dim(), 0);
    auto L = build_L(A(1, 1, 1, 2));
    ASSERT_EQ(L.dim(), 1);
    EXPECT_TRUE(L.contains(std::vector<Rat>{0, 0, 0, 1, -1}));
    EXPECT_EQ(build_L(A(2, 2, 2, 2)).dim(), 4);
}

TEST(BuildL, SumZeroAndCodimension) {
    for (int n = 4; n <= 10; ++n)
        for (const auto& a : compositions(n)) {
            auto L = build_L(a);
            EXPECT_EQ(L.dim(), n - 4);
            for (std::size_t i = 0; i < L.basis().rows(); ++i) {
                Rat s = 0;
                for (int j = 0; j < n; ++j) s += L.basis()(i, j);
                EXPECT_EQ(s, 0);
            }
        }
}

TEST(Action, Generators) {
    GroupSpec G{GroupKind::Dihedral, 5};
    EXPECT_EQ(act(G.s(), e(5, 1)), e(5, 2));
    EXPECT_EQ(act(G.r(), e(5, 2)), e(5, 4));
    auto L = build_L(A(1, 1, 1, 2));
    EXPECT_EQ(act(GroupElement{}, L), L);
}

TEST(Action, HomomorphismOnSubspaces) {
    std::mt19937 rng(1);
    for (int n : {5, 6, 9}) {
        GroupSpec G{GroupKind::Dihedral, n};
        const auto els = G.elements();
        auto S = build_L(compositions(n).back());
        std::uniform_int_distribution<std::size_t> pick(0, els.size() - 1);
        for (int t = 0; t < 50; ++t) {
            auto g = els[pick(rng)], h = els[pick(rng)];
            EXPECT_EQ(act(G.mul(g, h), S), act(g, act(h, S)));
        }
    }
}

TEST(DetAmbient, Values) {
    EXPECT_EQ(det_ambient({1, false}, 6), -1);
    EXPECT_EQ(det_ambient({0, true}, 5), 1);
    EXPECT_EQ(det_ambient({0, true}, 6), -1);
}

TEST(DetAmbient, MatchesDeterminantOnW) {
    for (int n = 2; n <= 9; ++n) {
        GroupSpec G{GroupKind::Dihedral, n};
        // Basis e_i - e_{i+1} of W_n; coordinates of g(b_k) in it are partial sums.
        for (const auto& g : G.elements()) {
            RationalMatrix M(n - 1, n - 1);
            for (int k = 0; k < n - 1; ++k) {
                std::vector<Rat> b(n, 0);
                b[k] = 1;
                b[k + 1] = -1;
                auto gb = act(g, b);
                Rat acc = 0;
                for (int i = 0; i < n - 1; ++i) {
                    acc += gb[i];
                    M(i, k) = acc;
                }
            }
            EXPECT_EQ(Rat(det_ambient(g, n)), exactalg::determinant(M)) << "n=" << n;
        }
    }
}

TEST(Orbit, Sizes) {
    auto orbit = [](Alpha a, GroupKind k) {
        return orbit_arrangement(build_L(a), a, GroupSpec{k, a.n()}).maximal.size();
    };
    EXPECT_EQ(orbit(A(2, 2, 2, 2), GroupKind::Cyclic), 2u);
    EXPECT_EQ(orbit(A(3, 3, 3, 3), GroupKind::Cyclic), 3u);
    EXPECT_EQ(orbit(A(1, 2, 1, 2), GroupKind::Cyclic), 3u);
    EXPECT_EQ(orbit(A(1, 2, 3, 4), GroupKind::Dihedral), 20u);
}

TEST(Poset, SmallCases) {
    auto P = make_poset(A(1, 1, 1, 2), GroupKind::Cyclic);
    EXPECT_EQ(P.size(), 6u);
    EXPECT_EQ(P.count_by_dim(), (std::map<int, int>{{0, 1}, {1, 5}}));
    EXPECT_EQ(make_poset(A(1, 1, 1, 1), GroupKind::Cyclic).size(), 1u);
    auto Q = make_poset(A(2, 2, 2, 2), GroupKind::Cyclic);
    EXPECT_EQ(Q.size(), 3u);
    EXPECT_EQ(Q.elements[0], Q.elements[1].intersect(Q.elements[2]));
}

TEST(Poset, MatchesBruteForceClosure) {
    for (int n = 4; n <= 8; ++n)
        for (const auto& a : compositions(n))
            for (auto k : {GroupKind::Cyclic, GroupKind::Dihedral}) {
                auto P = make_poset(a, k);
                Arrangement arr{a, P.group, {}};
                for (auto m : P.maximal) arr.maximal.push_back(P.elements[m]);
                auto brute = brute_closure(arr);
                std::set<Subspace> ours(P.elements.begin(), P.elements.end());
                EXPECT_EQ(ours, brute) << a.to_string();
            }
}

TEST(Poset, IntersectionClosedAndActionPreservesStructure) {
    for (auto a : {A(1, 1, 1, 3), A(1, 2, 3, 4), A(2, 1, 2, 3)})
        for (auto k : {GroupKind::Cyclic, GroupKind::Dihedral}) {
            auto P = make_poset(a, k);
            for (std::size_t x = 0; x < P.size(); ++x)
                for (std::size_t y = 0; y < P.size(); ++y)
                    EXPECT_GE(P.find(P.elements[x].intersect(P.elements[y])), 0);
            for (const auto& g : P.group.elements()) {
                const auto& perm = P.perm(g);
                for (std::size_t x = 0; x < P.size(); ++x) {
                    EXPECT_EQ(P.elements[perm[x]], act(g, P.elements[x]));
                    EXPECT_EQ(P.dim(perm[x]), P.dim(x));
                    std::set<int> img;
                    for (int c : P.covers[x]) img.insert(perm[c]);
                    std::set<int> cov(P.covers[perm[x]].begin(), P.covers[perm[x]].end());
                    EXPECT_EQ(img, cov);
                }
            }
        }
}

TEST(Poset, HasseDot) {
    auto one = hasse_dot(make_poset(A(1, 1, 1, 1), GroupKind::Cyclic));
    EXPECT_NE(one.find("p0"), std::string::npos);
    EXPECT_EQ(one.find("->"), std::string::npos);
    auto d = hasse_dot(make_poset(A(1, 1, 1, 3), GroupKind::Cyclic));
    EXPECT_NE(d.find("->"), std::string::npos);
}
