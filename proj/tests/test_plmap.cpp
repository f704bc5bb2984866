#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bmf/bmfunction.hpp"
#include "bmf/plmap.hpp"

#include <map>
#include <random>
#include <vector>

using bmf::BMFunction;
using bmf::Frame;
using bmf::KMode;
using bmf::PLMap;
using bmf::Rational;
using bmf::StaircaseNode;
using bmf::StaircaseTree;

namespace {

// Reference evaluation by linear scan, independent of the binary search.
Rational naive_eval(const PLMap& g, const Rational& x) {
    for (std::size_t i = 0; i + 1 < g.breakpoints.size(); ++i) {
        if (x < g.breakpoints[i] || x > g.breakpoints[i + 1]) continue;
        const Rational& x0 = g.breakpoints[i];
        const Rational& x1 = g.breakpoints[i + 1];
        return g.values[i] + (x - x0) * (g.values[i + 1] - g.values[i]) / (x1 - x0);
    }
    throw std::invalid_argument("naive_eval: point outside [0, 1]");
}

// Largest |g - h| over a uniform grid; a lower bound for the true uniform distance.
Rational grid_distance(const PLMap& g, const PLMap& h, int denom) {
    Rational best(0);
    for (int k = 0; k <= denom; ++k) {
        Rational x(k, denom);
        best = max(best, abs(naive_eval(g, x) - naive_eval(h, x)));
    }
    return best;
}

// Folded-tent fixture: the level-1 replacement of both tent halves.
PLMap folded_tent_fixture() {
    return bmf::make_plmap(
        {Rational(0), Rational(1, 8), Rational(3, 16), Rational(1, 4), Rational(1, 2),
         Rational(3, 4), Rational(13, 16), Rational(7, 8), Rational(1)},
        {Rational(0), Rational(1, 2), Rational(0), Rational(1, 2), Rational(1),
         Rational(1, 2), Rational(0), Rational(1, 2), Rational(0)});
}

} // namespace

TEST_CASE("piecewise-linear maps validate their shape and evaluate exactly") {
    PLMap t = bmf::tent();
    CHECK(t.gen == 0);
    CHECK(t.cutoff == 0);
    CHECK(bmf::eval_pl(t, Rational(0)) == Rational(0));
    CHECK(bmf::eval_pl(t, Rational(1, 4)) == Rational(1, 2));
    CHECK(bmf::eval_pl(t, Rational(1, 2)) == Rational(1));
    CHECK(bmf::eval_pl(t, Rational(1, 3)) == Rational(2, 3));
    CHECK(bmf::eval_pl(t, Rational(1)) == Rational(0));
    CHECK_THROWS_AS(bmf::eval_pl(t, Rational(5, 4)), std::invalid_argument);
    CHECK_THROWS_AS(bmf::eval_pl(t, Rational(-1, 4)), std::invalid_argument);

    CHECK_THROWS_AS(bmf::make_plmap({Rational(0), Rational(1)}, {Rational(0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bmf::make_plmap({Rational(0)}, {Rational(0)}), std::invalid_argument);
    CHECK_THROWS_AS(bmf::make_plmap({Rational(0), Rational(1, 2)}, {Rational(0), Rational(1)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bmf::make_plmap({Rational(0), Rational(1, 2), Rational(1, 2), Rational(1)},
                                    {Rational(0), Rational(1), Rational(1), Rational(0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bmf::make_plmap({Rational(0), Rational(1)}, {Rational(0), Rational(3, 2)}),
                    std::invalid_argument);

    // binary search against the linear scan on a random map
    std::mt19937 rng(20240811);
    std::vector<Rational> bps{Rational(0)};
    for (int k = 1; k < 32; ++k)
        if (rng() % 2 == 0) bps.push_back(Rational(k, 32));
    bps.push_back(Rational(1));
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < bps.size(); ++i)
        vals.push_back(Rational(static_cast<int>(rng() % 17), 16));
    PLMap g = bmf::make_plmap(bps, vals);
    for (int trial = 0; trial < 60; ++trial) {
        Rational x(static_cast<int>(rng() % 1025), 1024);
        CHECK(bmf::eval_pl(g, x) == naive_eval(g, x));
    }
    for (const Rational& x : bps) CHECK(bmf::eval_pl(g, x) == naive_eval(g, x));
}

TEST_CASE("the tent map preserves measure with a single full cell") {
    bmf::MeasureReport rep = bmf::verify_measure(bmf::tent());
    CHECK(rep.preserving);
    CHECK(rep.diagnostic.empty());
    REQUIRE(rep.cells.size() == 1);
    CHECK(rep.cells[0].lo == Rational(0));
    CHECK(rep.cells[0].hi == Rational(1));
    CHECK(rep.cells[0].sum == Rational(1));
}

TEST_CASE("the level-1 replacement of both tent halves gives the folded tent") {
    StaircaseTree tree = bmf::build_staircase(1, 3);
    PLMap g = bmf::modify(bmf::tent(), BMFunction::root_frame(), tree.node(1, 1));
    PLMap want = folded_tent_fixture();
    CHECK(g.breakpoints == want.breakpoints);
    CHECK(g.values == want.values);
    CHECK(g.gen == -1); // provenance only set by the schedule driver
    CHECK(g.cutoff == -1);

    CHECK(bmf::eval_pl(g, Rational(3, 16)) == Rational(0));
    CHECK(bmf::eval_pl(g, Rational(1, 16)) == Rational(1, 4));
    CHECK(bmf::eval_pl(g, Rational(13, 16)) == Rational(0));

    PLMap g1 = bmf::build_g(1, 1);
    CHECK(g1.breakpoints == want.breakpoints);
    CHECK(g1.values == want.values);
    CHECK(g1.gen == 1);
    CHECK(g1.cutoff == 1);

    // cell sums decompose as 1/4 + 1/8 + 1/8 over the left half plus 1/2 mirrored
    bmf::MeasureReport rep = bmf::verify_measure(g1);
    CHECK(rep.preserving);
    REQUIRE(rep.cells.size() == 2);
    CHECK(rep.cells[0].lo == Rational(0));
    CHECK(rep.cells[0].hi == Rational(1, 2));
    CHECK(rep.cells[0].sum == Rational(1));
    CHECK(rep.cells[1].hi == Rational(1));
    CHECK(rep.cells[1].sum == Rational(1));
    auto recip = [&](std::size_t i) {
        return (g1.breakpoints[i + 1] - g1.breakpoints[i]) / abs(g1.values[i + 1] - g1.values[i]);
    };
    CHECK(recip(0) == Rational(1, 4));
    CHECK(recip(1) == Rational(1, 8));
    CHECK(recip(2) == Rational(1, 8));
    CHECK(recip(5) + recip(6) + recip(7) == Rational(1, 2));
}

TEST_CASE("modify drops breakpoints that were collinear inside the region") {
    StaircaseTree tree = bmf::build_staircase(1, 3);
    PLMap seeded = bmf::make_plmap({Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)},
                                   {Rational(0), Rational(1, 2), Rational(1), Rational(0)});
    PLMap g = bmf::modify(seeded, BMFunction::root_frame(), tree.node(1, 1));
    PLMap want = folded_tent_fixture();
    CHECK(g.breakpoints == want.breakpoints);
    CHECK(g.values == want.values);
}

TEST_CASE("modify rejects regions that are no longer linear") {
    StaircaseTree tree = bmf::build_staircase(1, 3);
    PLMap g1 = bmf::build_g(1, 1);
    CHECK_THROWS_WITH_AS(bmf::modify(g1, BMFunction::root_frame(), tree.node(1, 1)),
                         doctest::Contains("schedule"), std::invalid_argument);

    Frame bad = BMFunction::root_frame();
    bad.v = bad.u;
    CHECK_THROWS_AS(bmf::modify(g1, bad, tree.node(2, 1)), std::invalid_argument);

    StaircaseNode malformed = tree.node(2, 1);
    malformed.has_split = false;
    CHECK_THROWS_AS(bmf::modify(bmf::tent(), BMFunction::root_frame(), malformed),
                    std::invalid_argument);
}

TEST_CASE("level-2 refinement inserts the two-tent shape over each margin") {
    PLMap g = bmf::build_g(1, 2);
    CHECK(g.breakpoints.size() == 29);
    CHECK(bmf::eval_pl(g, Rational(1, 72)) == Rational(4, 9));
    CHECK(bmf::eval_pl(g, Rational(1, 18)) == Rational(0));
    CHECK(bmf::eval_pl(g, Rational(7, 72)) == Rational(4, 9));
    CHECK(bmf::eval_pl(g, Rational(15, 144)) == Rational(0));
    CHECK(bmf::eval_pl(g, Rational(1, 9)) == Rational(4, 9));
    CHECK(bmf::eval_pl(g, Rational(1, 8)) == Rational(1, 2));
    CHECK(bmf::eval_pl(g, Rational(3, 16)) == Rational(0));
    // mirrored copies carry the same geometry, reflected
    CHECK(bmf::eval_pl(g, Rational(71, 72)) == Rational(4, 9));
    CHECK(bmf::eval_pl(g, Rational(17, 18)) == Rational(0));
    // the right-half level-2 node dips to the plateau image
    CHECK(bmf::eval_pl(g, Rational(5, 18)) == Rational(17, 18));
    CHECK(bmf::eval_pl(g, Rational(11, 24)) == Rational(1, 2));
    CHECK(bmf::verify_measure(g).preserving);
}

TEST_CASE("second-generation steps rewrite each copied frame in its own orientation") {
    PLMap g = bmf::build_g(2, 1);
    CHECK(g.gen == 2);
    CHECK(g.cutoff == 1);
    CHECK(g.breakpoints.size() == 21);
    // inside [1/8, 3/16]: the frame points downward, so tents spike up to 1/2
    CHECK(bmf::eval_pl(g, Rational(17, 128)) == Rational(1, 4));
    CHECK(bmf::eval_pl(g, Rational(37, 256)) == Rational(1, 2));
    CHECK(bmf::eval_pl(g, Rational(5, 32)) == Rational(1, 4));
    CHECK(bmf::eval_pl(g, Rational(11, 64)) == Rational(1, 8));
    // its mirror inside [3/16, 1/4]
    CHECK(bmf::eval_pl(g, Rational(59, 256)) == Rational(1, 2));
    CHECK(bmf::eval_pl(g, Rational(7, 32)) == Rational(1, 4));
    // the copied parent over [3/4, 7/8] gets the same treatment
    CHECK(bmf::eval_pl(g, Rational(97, 128)) == Rational(1, 4));
    CHECK(bmf::eval_pl(g, Rational(197, 256)) == Rational(1, 2));
    CHECK(bmf::eval_pl(g, Rational(219, 256)) == Rational(1, 2));
    CHECK(bmf::eval_pl(g, Rational(111, 128)) == Rational(1, 4));
    CHECK(bmf::verify_measure(g).preserving);
}

TEST_CASE("scheduled steps stay anchored and bounded by the introduced tent height") {
    bmf::Schedule sch = bmf::build_g_trace(2, 2);
    REQUIRE(sch.steps.size() == 33); // 3 + 10 parents * 3 nodes
    CHECK(sch.steps[0].gen == 1);
    CHECK(sch.steps[0].m == 1);
    CHECK(sch.steps[0].p == 1);
    CHECK(sch.steps[0].sup_dist == Rational(3, 8));
    CHECK(sch.steps[0].child_h == Rational(1, 2));

    int last_gen = 0, last_parent = -1;
    for (const bmf::ScheduleStep& st : sch.steps) {
        CHECK(st.gen >= last_gen); // generations in order, parents first within each
        if (st.gen == last_gen) CHECK(st.parent_index >= last_parent);
        last_gen = st.gen;
        last_parent = st.parent_index;
        CHECK(st.sup_dist <= st.child_h);
        CHECK(st.sup_dist > Rational(0));
        CHECK(2 * st.child_h <= st.owner_h);
    }

    // within one frame, the tallest tent of level m does not grow with m
    std::map<std::pair<int, int>, std::vector<Rational>> tallest;
    for (const bmf::ScheduleStep& st : sch.steps) {
        auto& levels = tallest[{st.gen, st.parent_index}];
        if (static_cast<int>(levels.size()) < st.m) levels.resize(st.m, Rational(0));
        levels[st.m - 1] = max(levels[st.m - 1], st.child_h);
    }
    for (const auto& [key, levels] : tallest)
        for (std::size_t i = 1; i < levels.size(); ++i) CHECK(levels[i] <= levels[i - 1]);
}

TEST_CASE("deeper schedules remain measure preserving") {
    for (auto [n, cutoff] : {std::pair{1, 5}, {2, 2}, {2, 3}}) {
        PLMap g = bmf::build_g(n, cutoff);
        bmf::MeasureReport rep = bmf::verify_measure(g);
        CHECK(rep.preserving);
        for (const bmf::MeasureCell& cell : rep.cells) CHECK(cell.sum == Rational(1));
        // every cell's preimage has exactly the cell's width
        for (const bmf::MeasureCell& cell : rep.cells)
            CHECK(bmf::preimage_measure(g, cell.lo, cell.hi) == cell.hi - cell.lo);
    }
    CHECK(bmf::build_g(2, 3).breakpoints.size() == 953);
}

TEST_CASE("verify_measure reports failures with a diagnostic") {
    PLMap flat = bmf::make_plmap({Rational(0), Rational(1, 2), Rational(1)},
                                 {Rational(0), Rational(1, 2), Rational(1, 2)});
    bmf::MeasureReport rep = bmf::verify_measure(flat);
    CHECK_FALSE(rep.preserving);
    CHECK(rep.diagnostic.find("flat piece") != std::string::npos);
    CHECK(rep.diagnostic.find("1/2") != std::string::npos);
    CHECK(rep.cells.empty());

    PLMap lowered = bmf::make_plmap({Rational(0), Rational(1, 2), Rational(1)},
                                    {Rational(0), Rational(3, 4), Rational(0)});
    rep = bmf::verify_measure(lowered);
    CHECK_FALSE(rep.preserving);
    CHECK_FALSE(rep.diagnostic.empty());
    REQUIRE(rep.cells.size() == 1);
    CHECK(rep.cells[0].sum == Rational(4, 3));
}

TEST_CASE("preimage measures are exact") {
    PLMap t = bmf::tent();
    CHECK(bmf::preimage_measure(t, Rational(0), Rational(1, 2)) == Rational(1, 2));
    CHECK(bmf::preimage_measure(t, Rational(1, 4), Rational(3, 8)) == Rational(1, 8));
    PLMap g1 = bmf::build_g(1, 1);
    CHECK(bmf::preimage_measure(g1, Rational(1, 4), Rational(3, 8)) == Rational(1, 8));
    CHECK_THROWS_AS(bmf::preimage_measure(t, Rational(1, 2), Rational(1, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(bmf::preimage_measure(t, Rational(-1, 4), Rational(1, 2)),
                    std::invalid_argument);

    PLMap flat = bmf::make_plmap({Rational(0), Rational(1, 2), Rational(1)},
                                 {Rational(0), Rational(1, 2), Rational(1, 2)});
    CHECK(bmf::preimage_measure(flat, Rational(1, 4), Rational(3, 4)) == Rational(3, 4));
    PLMap lowered = bmf::make_plmap({Rational(0), Rational(1, 2), Rational(1)},
                                    {Rational(0), Rational(3, 4), Rational(0)});
    CHECK(bmf::preimage_measure(lowered, Rational(3, 4), Rational(1)) == Rational(0));

    // for a preserving map the preimage of any interval keeps its length
    std::mt19937 rng(7);
    PLMap g12 = bmf::build_g(1, 2);
    for (int trial = 0; trial < 40; ++trial) {
        int a = static_cast<int>(rng() % 64);
        int b = static_cast<int>(rng() % 64) + 1;
        if (a == b) continue;
        Rational u(std::min(a, b), 64), v(std::max(a, b), 64);
        CHECK(bmf::preimage_measure(g12, u, v) == v - u);
    }
}

TEST_CASE("uniform distance is attained on the union of breakpoints") {
    PLMap t = bmf::tent();
    PLMap g1 = bmf::build_g(1, 1);
    PLMap g12 = bmf::build_g(1, 2);
    CHECK(bmf::sup_distance(t, t) == Rational(0));
    CHECK(bmf::sup_distance(t, g1) == Rational(3, 8));
    CHECK(bmf::sup_distance(g1, t) == Rational(3, 8));
    CHECK(abs(bmf::eval_pl(t, Rational(3, 16)) - bmf::eval_pl(g1, Rational(3, 16))) ==
          Rational(3, 8));
    CHECK(bmf::sup_distance(g1, g12) == Rational(5, 12));
    CHECK(bmf::sup_distance(g1, g12) <= Rational(4, 9));
    CHECK(grid_distance(g1, g12, 720) <= bmf::sup_distance(g1, g12));
    CHECK(grid_distance(t, g1, 512) == Rational(3, 8));
}

TEST_CASE("schedule breakpoints land exactly on the limit function") {
    BMFunction f;
    Rational eps = bmf::Rational::pow2(-8);
    for (const PLMap& g : {bmf::build_g(1, 3), bmf::build_g(2, 2)}) {
        for (std::size_t i = 0; i < g.breakpoints.size(); ++i) {
            bmf::Enclosure en = f.eval(g.breakpoints[i], eps);
            CHECK(en.exact());
            CHECK(en.lo == g.values[i]);
        }
    }
}
