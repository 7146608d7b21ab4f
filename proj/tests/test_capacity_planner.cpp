#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "qmon/capacity_planner.hpp"
#include "reference_chains.hpp"

using namespace qmon;

namespace {

bool close(LossDb got, double expected) { return std::abs(got.db() - expected) <= 0.0101; }

/// Independent width oracle: largest n whose outermost channel pair fits the
/// source spectrum, by linear scan over the coverage requirement.
int width_oracle_max_n(double width_nm) {
    int n = 0;
    while ((n + 1 - 1) * 20.0 + 13.0 <= width_nm + 1e-9) ++n;
    return n;
}

}  // namespace

TEST_CASE("channel plan for three access networks") {
    const ChannelPlan plan = synthesize_channel_plan(3);

    REQUIRE(plan.assignments.size() == 3);
    CHECK(plan.assignments[0].conventional.nominal_nm == 1290);
    CHECK(plan.assignments[0].quantum.nominal_nm == 1510);
    CHECK(plan.assignments[1].conventional.nominal_nm == 1310);
    CHECK(plan.assignments[1].quantum.nominal_nm == 1530);
    CHECK(plan.assignments[2].conventional.nominal_nm == 1330);
    CHECK(plan.assignments[2].quantum.nominal_nm == 1550);
    for (const auto& a : plan.assignments)
        CHECK(a.quantum.nominal_nm - a.conventional.nominal_nm == 220);  // same AWG period

    REQUIRE(plan.sources.size() == 6);
    std::set<std::pair<std::pair<int, int>, int>> got;
    for (const EntangledSourceSpec& s : plan.sources)
        got.insert({s.serves.front(), static_cast<int>(s.center_nm)});
    const std::set<std::pair<std::pair<int, int>, int>> expected = {
        {{0, 0}, 1510}, {{0, 1}, 1520}, {{0, 2}, 1530}, {{1, 1}, 1530}, {{1, 2}, 1540}, {{2, 2}, 1550},
    };
    CHECK(got == expected);
}

TEST_CASE("channel plan role bookkeeping") {
    const ChannelPlan plan = synthesize_channel_plan(3);
    for (const auto& block : plan.blocks) {
        REQUIRE(block.channels.size() == 16);
        int one_way = 0;
        std::map<int, int> per_source;
        for (const auto& use : block.channels) {
            if (use.role == ChannelRole::one_way) ++one_way;
            if (use.role == ChannelRole::entangled) {
                CHECK(use.source_id >= 0);
                ++per_source[use.source_id];
            }
        }
        CHECK(one_way >= 1);  // every network keeps one-way capacity
        for (const auto& [id, count] : per_source) CHECK(count % 2 == 0);
    }

    // No DWDM channel is assigned to two sources and every source's set is
    // pairing-closed (validated at construction, re-checked here).
    std::set<DwdmChannel> seen;
    for (const EntangledSourceSpec& s : plan.sources) {
        REQUIRE(s.grid_center.has_value());
        std::set<DwdmChannel> mine(s.connected_channels.begin(), s.connected_channels.end());
        for (const DwdmChannel& ch : mine) {
            CHECK(seen.insert(ch).second);
            CHECK(mine.count(entangled_partner(ch, *s.grid_center)) == 1);
        }
    }
}

TEST_CASE("every pair of access networks gets an entangled DWDM pair") {
    for (int n : {1, 2, 3, 4}) {
        const ChannelPlan plan = synthesize_channel_plan(n);
        for (int x = 0; x < n; ++x)
            for (int y = x; y < n; ++y) {
                bool found = false;
                for (const EntangledSourceSpec& s : plan.sources)
                    for (auto p : s.serves)
                        if (p == std::pair{x, y} && !source_pairs(s, plan, x, y).empty()) found = true;
                CHECK(found);
            }
    }
}

TEST_CASE("zero one-way reservation frees strictly more entangled channels") {
    const ChannelPlan base = synthesize_channel_plan(3);
    PlanOptions opt;
    opt.one_way_fraction = 0.0;
    const ChannelPlan full = synthesize_channel_plan(3, opt);
    for (int an = 0; an < 3; ++an) {
        auto count = [&](const ChannelPlan& p) {
            int n = 0;
            for (const auto& use : p.block(an).channels)
                if (use.role == ChannelRole::entangled) ++n;
            return n;
        };
        CHECK(count(full) > count(base));
        bool any_one_way = false;
        for (const auto& use : full.block(an).channels)
            if (use.role == ChannelRole::one_way) any_one_way = true;
        CHECK_FALSE(any_one_way);
    }
}

TEST_CASE("plan reports its deficit when channels run out") {
    PlanOptions opt;
    opt.one_way_fraction = 0.75;  // only two entangled units left per channel
    CHECK_THROWS_WITH(synthesize_channel_plan(4, opt),
                      Catch::Matchers::ContainsSubstring("deficit") &&
                          Catch::Matchers::ContainsSubstring("insufficient DWDM channels"));
    // The CWDM grid itself runs out first on a fifth network.
    CHECK_THROWS_WITH(synthesize_channel_plan(5),
                      Catch::Matchers::ContainsSubstring("does not fit the conventional band"));
}

TEST_CASE("plan completeness over random sizes with no reservation") {
    std::mt19937 rng(59);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);  // conventional band caps the full design at 4
        PlanOptions opt;
        opt.one_way_fraction = (trial % 2 == 0) ? 0.0 : 0.5;
        const ChannelPlan plan = synthesize_channel_plan(n, opt);
        std::set<std::pair<int, int>> covered;
        for (const EntangledSourceSpec& s : plan.sources)
            for (auto p : s.serves)
                if (!source_pairs(s, plan, p.first, p.second).empty()) covered.insert(p);
        for (int x = 0; x < n; ++x)
            for (int y = x; y < n; ++y) REQUIRE(covered.count({x, y}) == 1);
    }
}

TEST_CASE("entanglement-only capacity at the reference budget") {
    const Pricing pricing;
    const CapacityReport r = max_access_networks(BackboneKind::cwdm_oadm_simple, pricing, 160.0);
    CHECK(r.max_access_networks == 8);
    CHECK(r.users_per_an == 16);
    CHECK(r.total_users == 128);
    REQUIRE(!r.witnesses.empty());
    const PathLossReport& link = r.witnesses.front();
    CHECK(close(link.total_db, 29.3));
    REQUIRE(link.routes.size() == 2);
    // Worst arms: 14 dB to the second-to-last network, 15.3 dB to the last.
    LossDb arm1, arm2;
    for (const Segment& s : link.per_segment) (s.label.rfind("arm 1", 0) == 0 ? arm1 : arm2) += s.db;
    CHECK(close(arm1, 14.0));
    CHECK(close(arm2, 15.3));
}

TEST_CASE("narrow sources cap the entanglement-only design by width") {
    const Pricing pricing;
    const CapacityReport r = max_access_networks(BackboneKind::cwdm_oadm_simple, pricing, 70.0);
    CHECK(r.max_access_networks == width_oracle_max_n(70.0));
    CHECK(r.max_access_networks == 3);
    CHECK(r.max_access_networks < 8);
    CHECK(r.limiting == LimitingFactor::source_width);
}

TEST_CASE("tighter budgets shrink the entanglement-only design") {
    Pricing pricing;
    pricing.budgets.entangled = LossDb::from_db(25.0);
    const CapacityReport r = max_access_networks(BackboneKind::cwdm_oadm_simple, pricing, 160.0);
    // Oracle: worst link of an n-network chain is 2.6 n + 8.5 dB.
    int oracle_n = 0;
    while (2.6 * (oracle_n + 1) + 8.5 <= 25.0 + 1e-9) ++oracle_n;
    CHECK(oracle_n == 6);
    CHECK(r.max_access_networks == oracle_n);
    CHECK(r.limiting == LimitingFactor::loss_budget);
}

TEST_CASE("full passive ring capacity") {
    const Pricing pricing;
    const CapacityReport r = max_access_networks(BackboneKind::passive_oadm, pricing, 160.0);
    CHECK(r.max_access_networks == 3);
    CHECK(r.total_users == 48);
    CHECK(r.limiting == LimitingFactor::loss_budget);
    REQUIRE(!r.witnesses.empty());
    CHECK(close(r.witnesses.front().total_db, 27.6));  // worst in-budget entangled link
}

TEST_CASE("capacity reports witness both sides of the boundary") {
    const Pricing pricing;
    const CapacityReport ent = max_access_networks(BackboneKind::cwdm_oadm_simple, pricing, 160.0);
    REQUIRE(ent.witnesses.size() >= 2);
    CHECK(ent.witnesses.front().feasible);          // worst link at N = 8
    CHECK_FALSE(ent.witnesses.back().feasible);     // worst link at N = 9
    CHECK(close(ent.witnesses.back().total_db, 31.9));

    const CapacityReport ring = max_access_networks(BackboneKind::passive_oadm, pricing, 160.0);
    REQUIRE(ring.witnesses.size() >= 2);
    CHECK(ring.witnesses.front().feasible);
    CHECK_FALSE(ring.witnesses.back().feasible);
    CHECK(close(ring.witnesses.back().total_db, 33.2));
}

TEST_CASE("limiting factors tie-break in fixed order") {
    Pricing generous;
    generous.budgets.entangled = LossDb::from_db(1000.0);
    generous.budgets.quantum_oneway = LossDb::from_db(1000.0);
    const CapacityReport r = max_access_networks(BackboneKind::cwdm_oadm_simple, generous, 1000.0);
    CHECK(r.max_access_networks == 8);  // the configured CWDM ceiling
    CHECK(r.limiting == LimitingFactor::cwdm_spectrum);

    PlanOptions opt;
    opt.max_quantum_cwdm = 18;
    const CapacityReport wider = max_access_networks(BackboneKind::cwdm_oadm_simple, generous, 1000.0, opt);
    CHECK(wider.max_access_networks == 9);  // grid runs out at 1610 nm
}

TEST_CASE("reconfigurable mesh capacity is unbounded") {
    const Pricing pricing;
    const CapacityReport r = max_access_networks(BackboneKind::active_pxc, pricing, 70.0);
    CHECK(r.unbounded);
    CHECK(r.limiting == LimitingFactor::none);
}

TEST_CASE("extending the passive ring to four networks breaks the budget") {
    const Pricing pricing;
    const NetworkModel net = build_reference_network(TopologyKind::ring, 3, BackboneKind::passive_oadm);
    const ExtensionVerdict verdict = feasibility_of_extension(pricing, net);
    CHECK_FALSE(verdict.feasible);
    REQUIRE(!verdict.violations.empty());
    bool found = false;
    for (const PathLossReport& v : verdict.violations) {
        if (v.cls != SignalClass::entangled) continue;
        CHECK(close(v.total_db, 33.2));  // 11 + 22.2: 1-closest and 3-closest arms
        REQUIRE(v.arm_backbone_hops.size() == 2);
        CHECK(std::min(v.arm_backbone_hops[0], v.arm_backbone_hops[1]) == 1);
        CHECK(std::max(v.arm_backbone_hops[0], v.arm_backbone_hops[1]) == 3);
        CHECK(close(v.total_db, refchains::ring_entangled_arm(1) + refchains::ring_entangled_arm(3)));
        found = true;
    }
    CHECK(found);
}

TEST_CASE("the mesh design absorbs a fourth network") {
    const Pricing pricing;
    const NetworkModel net = build_reference_network(TopologyKind::mesh, 3, BackboneKind::active_pxc);
    const ExtensionVerdict verdict = feasibility_of_extension(pricing, net);
    CHECK(verdict.feasible);
    REQUIRE(verdict.witnesses.size() == 2);
    CHECK(close(verdict.witnesses[0].total_db, 29.2));  // entangled, 12.2 + 17
    CHECK(close(verdict.witnesses[1].total_db, 28.2));  // one-way over three spans
}

TEST_CASE("unbounded budgets make any extension feasible") {
    Pricing pricing;
    pricing.budgets = BudgetPolicy{std::nullopt, std::nullopt, std::nullopt};
    const NetworkModel net = build_reference_network(TopologyKind::ring, 3, BackboneKind::passive_oadm);
    CHECK(feasibility_of_extension(pricing, net).feasible);
}

TEST_CASE("user count follows the DWDM fit") {
    const Pricing pricing;
    PlanOptions opt;
    opt.dwdm_spacing_ghz = 200;
    const CapacityReport r = max_access_networks(BackboneKind::cwdm_oadm_simple, pricing, 160.0, opt);
    CHECK(r.users_per_an == static_cast<int>(dwdm_channels_in(CwdmChannel(1550), 200).size()));
    CHECK(r.users_per_an == 8);
}

TEST_CASE("connecting a reserved channel to a source changes no path loss") {
    // Scalability: growing a source's allocation is a head-end change; the
    // priced routes depend only on the network, not on channel roles.
    const Pricing pricing;
    const NetworkModel net = build_reference_network(TopologyKind::ring, 3, BackboneKind::passive_oadm);
    const Route route = enumerate_route(net, SignalClass::quantum_oneway, UserRef{0}, UserRef{1});
    const LossDb before = one_way_loss(pricing, net, route).total_db;

    PlanOptions opt;
    opt.one_way_fraction = 0.0;  // all channels entangled
    synthesize_channel_plan(3, opt);
    const LossDb after = one_way_loss(pricing, net, route).total_db;
    CHECK(before == after);
}
