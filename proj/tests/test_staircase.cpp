#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bmf/errors.hpp"
#include "bmf/staircase.hpp"

#include <random>
#include <thread>
#include <vector>

using bmf::build_staircase;
using bmf::Enclosure;
using bmf::KMode;
using bmf::Rational;
using bmf::StaircaseNode;
using bmf::StaircaseTree;

namespace {

// Independent oracle: K(m) straight from the definition, scanning the whole level.
Rational brute_kfactor(const StaircaseTree& t, int m) {
    Rational best(0);
    for (const StaircaseNode& n : t.level(m)) best = bmf::max(best, n.value_gap() / n.carrier_len());
    return 1 + 2 * best;
}

// Independent oracle: survivor length as 1/2 minus every removed length up to level M.
Rational brute_survivor(const StaircaseTree& t, int M) {
    Rational removed(0);
    for (int m = 1; m <= M; ++m)
        for (const StaircaseNode& n : t.level(m)) removed += n.removed_len();
    return Rational(1, 2) - removed;
}

} // namespace

TEST_CASE("figure fixtures pin the first three levels at sigma 1") {
    StaircaseTree t = build_staircase(1, 3);
    const StaircaseNode& root = t.node(1, 1);
    CHECK(root.c == Rational(0));
    CHECK(root.d == Rational(1, 2));
    CHECK(root.vc == Rational(0));
    CHECK(root.vd == Rational(1));
    CHECK(root.a == Rational(1, 8));
    CHECK(root.b == Rational(1, 4));
    CHECK(root.plateau == Rational(1, 2));
    CHECK(!root.has_split);

    const StaircaseNode& d21 = t.node(2, 1);
    CHECK(d21.c == Rational(0));
    CHECK(d21.d == Rational(1, 8));
    CHECK(d21.a == Rational(1, 72));
    CHECK(d21.b == Rational(1, 9));
    CHECK(d21.plateau == Rational(4, 9));
    CHECK(d21.has_split);
    CHECK(d21.split == Rational(7, 72));

    const StaircaseNode& d22 = t.node(2, 2);
    CHECK(d22.c == Rational(1, 4));
    CHECK(d22.d == Rational(1, 2));
    CHECK(d22.a == Rational(5, 18));
    CHECK(d22.b == Rational(17, 36));
    CHECK(d22.plateau == Rational(17, 18));
    CHECK(d22.split == Rational(4, 9));

    const StaircaseNode& d31 = t.node(3, 1);
    CHECK(d31.c == Rational(0));
    CHECK(d31.d == Rational(1, 72));
    CHECK(d31.b == Rational(1, 144));
    CHECK(d31.removed_len() == Rational(7, 1152));
    CHECK(d31.a == Rational(1, 1152));
    CHECK(d31.plateau == Rational(2, 9));
    CHECK(d31.vc == Rational(0));
    CHECK(d31.vd == Rational(4, 9));
}

TEST_CASE("expansion factors match the brute-force level maximum") {
    for (int sigma : {1, 2, 4}) {
        StaircaseTree t = build_staircase(sigma, 8);
        Rational prev(0);
        for (int m = 2; m <= 8; m += 2) {
            const Rational& k = t.expansion_factor(m);
            CHECK(k == brute_kfactor(t, m));
            CHECK(k > Rational(4));
            CHECK(k > prev);
            prev = k;
        }
    }
    StaircaseTree s1 = build_staircase(1, 8);
    CHECK(s1.expansion_factor(2) == Rational(9));
    CHECK(s1.expansion_factor(4) == Rational(513));
    CHECK(s1.expansion_factor(6) == Rational(8388609)); // 1 + 2^23
    StaircaseTree s2 = build_staircase(2, 4);
    CHECK(s2.expansion_factor(2) == Rational(17));
    CHECK(s2.expansion_factor(4) == Rational(4097));
}

TEST_CASE("ceil mode rounds expansion factors up to powers of two") {
    StaircaseTree t = build_staircase(1, 6, KMode::ceil);
    CHECK(t.expansion_factor(2) == Rational(16));
    CHECK(t.expansion_factor(4) == Rational(1024));
    for (int m = 2; m <= 6; m += 2) {
        Rational k = t.expansion_factor(m);
        // power of two: numerator has a single set bit
        CHECK(k.den() == 1);
        CHECK((k.num() & (k.num() - 1)) == 0);
        CHECK(k >= brute_kfactor(t, m));
        CHECK(k < 2 * brute_kfactor(t, m));
    }
    CHECK(t.node(2, 1).a == Rational(1, 128)); // margin (1/8)/16
}

TEST_CASE("node identities hold exactly at every node") {
    for (int sigma : {1, 2, 4}) {
        StaircaseTree t = build_staircase(sigma, 8);
        for (int m = 1; m <= 8; ++m) {
            const auto& lv = t.level(m);
            CHECK(static_cast<int>(lv.size()) == (1 << (m - 1)));
            for (std::size_t i = 0; i < lv.size(); ++i) {
                const StaircaseNode& n = lv[i];
                CHECK(n.m == m);
                CHECK(n.p == static_cast<std::int64_t>(i) + 1);
                CHECK(n.c < n.a);
                CHECK(n.a < n.b);
                CHECK(n.b < n.d);
                // plateau keeps the chord slope
                CHECK((n.plateau - n.vc) * n.carrier_len() == n.value_gap() * (n.b - n.c));
                // value gap at least doubles the length
                CHECK(n.value_gap() >= 2 * n.carrier_len());
                if (m % 2 == 1) {
                    CHECK(2 * n.b == n.c + n.d); // center property
                    CHECK(n.removed_len() ==
                          n.carrier_len() * (Rational(1, 2) - Rational::pow2(-(m + sigma))));
                    CHECK(!n.has_split);
                } else {
                    const Rational& k = t.expansion_factor(m);
                    CHECK(n.a - n.c == n.carrier_len() / k);
                    CHECK(n.d - n.b == n.carrier_len() / k);
                    CHECK(n.has_split);
                    CHECK(n.a < n.split);
                    CHECK(n.split < n.b);
                    CHECK(n.b - n.split == (n.b - n.a) / (k - 2));
                    // trailing slope stays in (0, 1/2] relative to the chord
                    CHECK(n.vd - n.plateau > Rational(0));
                    CHECK(2 * (n.vd - n.plateau) <= n.d - n.a);
                }
                if (i > 0) {
                    CHECK(lv[i - 1].d < n.c);       // disjoint, left to right
                    CHECK(lv[i - 1].vd <= n.vc);    // values nondecreasing
                }
            }
        }
        // levels below are exactly the closures of carrier minus hole
        for (int m = 1; m < 8; ++m) {
            for (const StaircaseNode& n : t.level(m)) {
                const StaircaseNode& left = t.node(m + 1, 2 * n.p - 1);
                const StaircaseNode& right = t.node(m + 1, 2 * n.p);
                CHECK(left.c == n.c);
                CHECK(left.d == n.a);
                CHECK(left.vc == n.vc);
                CHECK(left.vd == n.plateau);
                CHECK(right.c == n.b);
                CHECK(right.d == n.d);
                CHECK(right.vc == n.plateau);
                CHECK(right.vd == n.vd);
            }
        }
    }
}

TEST_CASE("survivor lengths match fixtures and the removed-length complement") {
    StaircaseTree t = build_staircase(1, 8);
    CHECK(t.survivor_length(0) == Rational(1, 2));
    CHECK(t.survivor_length(1) == Rational(3, 8));
    CHECK(t.survivor_length(2) == Rational(1, 12));
    for (int M = 0; M <= 8; ++M) {
        CHECK(t.survivor_length(M) == brute_survivor(t, M));
        if (M < 8) {
            Rational total(0);
            for (const StaircaseNode& n : t.level(M + 1)) total += n.carrier_len();
            CHECK(t.survivor_length(M) == total);
        }
    }
    StaircaseTree s4 = build_staircase(4, 6);
    for (int M = 0; M <= 6; ++M) CHECK(s4.survivor_length(M) == brute_survivor(s4, M));
}

TEST_CASE("leftmost removed intervals obey the closed-form length bounds") {
    StaircaseTree t = build_staircase(1, 8);
    CHECK(t.node(3, 1).removed_len() == Rational(7, 1152));
    // odd levels 2j+1: bound 2^-(2+j^2+j) / prod K(2i), itself at most 2^-(2j+1)
    for (int j = 0; j <= 3; ++j) {
        Rational bound = Rational::pow2(-(2 + j * j + j));
        for (int i = 1; i <= j; ++i) bound /= t.expansion_factor(2 * i);
        CHECK(t.node(2 * j + 1, 1).removed_len() <= bound);
        CHECK(bound <= Rational::pow2(-(2 * j + 1)));
    }
    CHECK(Rational::pow2(-4) / t.expansion_factor(2) == Rational(1, 144)); // 1/(4*4*9)
    // even levels 2j: bound 2^-(1+j^2+j) / prod K(2i) over i < j, at most 2^-2j
    for (int j = 1; j <= 4; ++j) {
        Rational bound = Rational::pow2(-(1 + j * j + j));
        for (int i = 1; i < j; ++i) bound /= t.expansion_factor(2 * i);
        CHECK(t.node(2 * j, 1).removed_len() <= bound);
        CHECK(bound <= Rational::pow2(-(2 * j)));
    }
}

TEST_CASE("path descent reproduces the materialized nodes") {
    StaircaseTree t = build_staircase(1, 8);
    StaircaseNode cur = t.path_root();
    for (int m = 1; m <= 8; ++m) {
        const StaircaseNode& ref = t.node(m, cur.p);
        CHECK(cur.c == ref.c);
        CHECK(cur.a == ref.a);
        CHECK(cur.b == ref.b);
        CHECK(cur.d == ref.d);
        CHECK(cur.vc == ref.vc);
        CHECK(cur.plateau == ref.plateau);
        CHECK(cur.vd == ref.vd);
        CHECK(cur.split == ref.split);
        if (m < 8) cur = t.path_child(cur, false); // rightmost path
    }
    std::mt19937 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        StaircaseNode n = t.path_root();
        for (int m = 2; m <= 8; ++m) n = t.path_child(n, rng() % 2 == 0);
        const StaircaseNode& ref = t.node(8, n.p);
        CHECK(n.c == ref.c);
        CHECK(n.plateau == ref.plateau);
        CHECK(n.split == ref.split);
    }
}

TEST_CASE("evaluation is exact on removed-interval closures and endpoints") {
    StaircaseTree t = build_staircase(1, 3);
    Rational tiny = Rational::pow2(-30);
    CHECK(t.eval(Rational(0), tiny) == Enclosure(Rational(0)));
    CHECK(t.eval(Rational(1), tiny) == Enclosure(Rational(0)));
    CHECK(t.eval(Rational(1, 2), tiny) == Enclosure(Rational(1)));
    for (const Rational& eps : {Rational(1, 2), Rational::pow2(-10), Rational::pow2(-30)}) {
        CHECK(t.eval(Rational(3, 16), eps) == Enclosure(Rational(1, 2)));
        CHECK(t.eval(Rational(1) - Rational(1, 18), eps) == Enclosure(Rational(4, 9)));
    }
    CHECK(t.eval(Rational(1, 8), tiny) == Enclosure(Rational(1, 2)));
    CHECK(t.eval(Rational(1, 4), tiny) == Enclosure(Rational(1, 2)));
    CHECK(t.eval(Rational(1, 72), tiny) == Enclosure(Rational(4, 9)));
    CHECK(t.eval(Rational(1, 1152), tiny) == Enclosure(Rational(2, 9)));
    CHECK(t.eval(Rational(1, 3), tiny) == Enclosure(Rational(17, 18)));
    CHECK(t.eval(Rational(2, 3), tiny) == Enclosure(Rational(17, 18)));
}

TEST_CASE("evaluation widths are certified and nested in eps") {
    StaircaseTree t = build_staircase(1, 4);
    std::mt19937 rng(20240812);
    std::uniform_int_distribution<long long> num(0, 1'000'000);
    for (int i = 0; i < 300; ++i) {
        Rational s(num(rng), 1'000'000);
        Enclosure coarse = t.eval(s, Rational::pow2(-6));
        Enclosure fine = t.eval(s, Rational::pow2(-24));
        CHECK(coarse.width() <= Rational::pow2(-6));
        CHECK(fine.width() <= Rational::pow2(-24));
        CHECK(coarse.contains(fine));
        CHECK(t.eval(1 - s, Rational::pow2(-6)) == coarse); // symmetry
    }
}

TEST_CASE("deep evaluation extends expansion factors past the built depth") {
    StaircaseTree shallow = build_staircase(1, 2);
    StaircaseTree deep = build_staircase(1, 8);
    Rational s(1, 1'000'000'000);
    Enclosure got = shallow.eval(s, Rational::pow2(-40));
    // the point lands in the level-6 leftmost hole, found without materializing levels
    CHECK(got == Enclosure(deep.node(6, 1).plateau));
    CHECK(shallow.depth() == 2);
}

TEST_CASE("domain and resource errors are reported") {
    CHECK_THROWS_AS(build_staircase(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_staircase(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_staircase(1, StaircaseTree::kMaxMaterializedDepth + 1),
                    bmf::resource_limit_error);
    StaircaseTree t = build_staircase(1, 4);
    CHECK_THROWS_AS(t.eval(Rational(-1, 2), Rational(1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(t.eval(Rational(5, 4), Rational(1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(t.node(5, 1), std::invalid_argument);
    CHECK_THROWS_AS(t.node(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(t.expansion_factor(3), std::invalid_argument);
    CHECK_THROWS_AS(t.expansion_factor(6), std::invalid_argument);
    CHECK_THROWS_AS(t.survivor_length(5), std::invalid_argument);
    // a Cantor-set point cannot be certified within a tiny level cutoff
    CHECK_THROWS_AS(t.eval(Rational(1, 1'000'000'000), Rational::pow2(-40), 3),
                    bmf::resource_limit_error);
}

TEST_CASE("concurrent evaluation is safe once factors are acquired") {
    StaircaseTree t = build_staircase(1, 4);
    t.acquire_kfactors(12);
    std::vector<std::thread> workers;
    std::vector<int> failures(4, 0);
    for (int w = 0; w < 4; ++w) {
        workers.emplace_back([&t, &failures, w] {
            for (int i = 0; i < 50; ++i) {
                Rational s(1 + 7 * w + 13 * i, 4096);
                Enclosure e = t.eval(s, Rational::pow2(-8), 12);
                if (e.width() > Rational::pow2(-8)) ++failures[w];
            }
        });
    }
    for (auto& th : workers) th.join();
    for (int f : failures) CHECK(f == 0);
}
