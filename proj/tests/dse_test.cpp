#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "allmod/calibration.hpp"
#include "allmod/dse.hpp"
#include "allmod/errors.hpp"
#include "allmod/lut_reduce.hpp"
#include "test_support.hpp"

namespace allmod {
namespace {

using testing::Gen;

CostTable small_costs(unsigned n) {
    CostTable t;
    t.set(n, {512, 3.0 * n, 3.0 * n});
    return t;
}

std::vector<Scheme> brute_front(const std::vector<Scheme>& all) {
    std::vector<Scheme> nd;
    for (const auto& s : all) {
        bool dominated = false;
        for (const auto& t : all)
            if (t.latency <= s.latency && t.area <= s.area && (t.latency < s.latency || t.area < s.area)) {
                dominated = true;
                break;
            }
        if (!dominated) nd.push_back(s);
    }
    // Equal objectives collapse to the smaller (m, width_tree).
    std::vector<Scheme> out;
    for (const auto& s : nd) {
        bool keep = true;
        for (const auto& t : nd)
            if (t.latency == s.latency && t.area == s.area && std::tie(t.m, t.width_tree) < std::tie(s.m, s.width_tree))
                keep = false;
        if (keep) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const Scheme& a, const Scheme& b) { return a.latency < b.latency; });
    return out;
}

TEST(Constraints, Validation) {
    Constraints c;
    c.area_req = -1;
    EXPECT_THROW(c.validate(), ConfigurationError);
    c.area_req = 0;
    EXPECT_NO_THROW(c.validate());
}

TEST(Search, ZeroLatencyRequirementIsEmpty) {
    Constraints c;
    c.latency_req = 0;
    EXPECT_TRUE(search(16, 2, c, small_costs(16)).empty());
    EXPECT_TRUE(pareto(std::vector<Scheme>{}).empty());
}

TEST(Search, MissingCostsRequireCalibration) {
    EXPECT_THROW(search(20, 2, Constraints{}, small_costs(16)), CalibrationRequiredError);
}

TEST(Search, UnconstrainedCoversTheGrid) {
    const auto all = search(16, 3, Constraints{}, small_costs(16));
    EXPECT_EQ(all.size(), 17u * 18u / 2u);
    std::set<std::pair<unsigned, unsigned>> seen;
    for (const auto& s : all) {
        EXPECT_LE(s.m + s.width_tree, 16u);
        seen.insert({s.m, s.width_tree});
    }
    EXPECT_EQ(seen.size(), all.size());
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end(), [](const Scheme& a, const Scheme& b) {
        return std::tie(a.m, a.width_tree) < std::tie(b.m, b.width_tree);
    }));
}

TEST(Pareto, TrivialDomination) {
    Scheme a;
    a.latency = 10;
    a.area = 100;
    Scheme b;
    b.latency = 12;
    b.area = 120;
    b.m = 1;
    const auto f = pareto(std::vector<Scheme>{b, a});
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0], a);
}

TEST(Pareto, TiesKeepSmallerMThenWidthTree) {
    Scheme a;
    a.latency = 5;
    a.area = 50;
    a.m = 3;
    a.width_tree = 1;
    Scheme b = a;
    b.m = 2;
    b.width_tree = 7;
    Scheme c = a;
    c.m = 2;
    c.width_tree = 4;
    const auto f = pareto(std::vector<Scheme>{a, b, c});
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].m, 2u);
    EXPECT_EQ(f[0].width_tree, 4u);
}

TEST(Pareto, MatchesQuadraticFilterOnRandomSets) {
    Gen g(71);
    for (int t = 0; t < 200; ++t) {
        std::vector<Scheme> xs(g.uniform(0, 60));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs[i].m = static_cast<unsigned>(i);
            xs[i].width_tree = static_cast<unsigned>(g.uniform(0, 3));
            xs[i].latency = g.uniform(1, 12);
            xs[i].area = static_cast<double>(g.uniform(1, 12));
        }
        ASSERT_EQ(pareto(xs), brute_front(xs));
    }
}

TEST(Pareto, StreamingAccumulatorAgrees) {
    Gen g(72);
    for (unsigned n : {8u, 16u, 40u}) {
        const auto costs = small_costs(n);
        for (int t = 0; t < 10; ++t) {
            Constraints c;
            c.tp = Throughput(1, g.uniform(2, 16));
            if (g.coin()) c.latency_req = g.uniform(1, n);
            const unsigned k = static_cast<unsigned>(g.uniform(1, 6));
            const auto all = search(n, k, c, costs);
            ParetoAccumulator acc;
            for (const auto& s : all) acc.offer(s);
            EXPECT_EQ(acc.front(), pareto(all));
            EXPECT_EQ(acc.offered(), all.size());
        }
    }
}

TEST(Frontier, EachThroughputIsNonDominated) {
    const std::vector<Throughput> tps{Throughput(1, 16), Throughput(1, 8), Throughput(1, 4), Throughput(1, 2)};
    const auto report = frontier_report(128, 8, tps, default_cost_table());
    std::set<std::string> seen;
    for (const auto& tp : tps) {
        std::vector<Scheme> front;
        for (const auto& e : report)
            if (e.tp == tp) front.push_back(e.scheme);
        ASSERT_FALSE(front.empty());
        seen.insert(tp.to_string());
        for (const auto& a : front)
            for (const auto& b : front) EXPECT_FALSE(dominates(a, b));
    }
    EXPECT_EQ(seen.size(), 4u);
}

TEST(Frontier, BalancedSchemeAt128) {
    const auto all = search(128, 8, Constraints{}, default_cost_table());
    auto it = std::find_if(all.begin(), all.end(), [](const Scheme& s) { return s.m == 15 && s.width_tree == 0; });
    ASSERT_NE(it, all.end());
    EXPECT_EQ(it->latency, 16u);
    EXPECT_NEAR(it->efficiency, 25040.06, 0.005);
    // Serial table accumulation (m = 0, one tree input) reaches the same
    // latency with less area, so the balanced point is dominated.
    const auto front = pareto(all);
    auto at16 = std::find_if(front.begin(), front.end(), [](const Scheme& s) { return s.latency == 16; });
    ASSERT_NE(at16, front.end());
    EXPECT_EQ(at16->m, 0u);
    EXPECT_EQ(at16->width_tree, 1u);
    EXPECT_LT(at16->area, it->area);
}

TEST(SchemeCsv, RoundTrip) {
    const auto all = search(24, 3, Constraints{}, small_costs(24));
    const auto front = pareto(all);
    std::stringstream ss;
    {
        SchemeCsvWriter w(ss);
        for (const auto& s : all)
            w.write(s, std::find(front.begin(), front.end(), s) != front.end());
    }
    const auto back = read_schemes_csv(ss);
    ASSERT_EQ(back.size(), all.size());
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        EXPECT_EQ(back[i].scheme, all[i]);
        flagged += back[i].pareto;
    }
    EXPECT_EQ(flagged, front.size());
}

TEST(SchemeCsv, RejectsBadHeader) {
    std::istringstream in("m,width\n1,2\n");
    EXPECT_THROW(read_schemes_csv(in), FormatError);
}

TEST(SchemeJson, RoundTripEchoesConstraints) {
    Constraints c;
    c.latency_req = 9;
    c.area_req = 1e6;
    c.tp = Throughput(1, 4);
    const auto all = search(16, 2, c, small_costs(16));
    std::vector<SchemeRecord> recs;
    for (const auto& s : all) recs.push_back({s, false});
    std::stringstream ss;
    write_schemes_json(ss, 16, 2, c, small_costs(16).at(16), recs);
    const auto doc = read_schemes_json(ss);
    EXPECT_EQ(doc.n, 16u);
    EXPECT_EQ(doc.k, 2u);
    EXPECT_EQ(doc.constraints.latency_req, c.latency_req);
    EXPECT_EQ(doc.constraints.area_req, c.area_req);
    EXPECT_EQ(doc.constraints.tp, c.tp);
    EXPECT_EQ(doc.costs, small_costs(16).at(16));
    EXPECT_EQ(doc.records, recs);
}

}  // namespace
}  // namespace allmod
