#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qmon/loss_engine.hpp"
#include "reference_chains.hpp"

using namespace qmon;

namespace {

bool close(LossDb got, double expected) { return std::abs(got.db() - expected) <= 0.0101; }

Pricing default_pricing() { return Pricing{}; }

}  // namespace

TEST_CASE("fixed ring reference losses match the hand-enumerated chains") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::ring, 3, BackboneKind::passive_oadm);
    const WorstCaseTable table = worst_case_analysis(pricing, net, 3);
    REQUIRE(table.rows.size() == 4);

    const double conv[] = {2.64, 20.66, 26.74, 32.82};
    const double quant[] = {2.4, 18.5, 24.1, 29.7};
    const double ent[] = {11.0, 16.6, 22.2};
    for (int x = 0; x <= 3; ++x) {
        REQUIRE(table.rows[x].conventional.has_value());
        REQUIRE(table.rows[x].quantum.has_value());
        CHECK(close(*table.rows[x].conventional, conv[x]));
        CHECK(close(*table.rows[x].quantum, quant[x]));
        // Chain oracle agrees cell by cell.
        CHECK(close(*table.rows[x].conventional, refchains::ring_one_way(x, true)));
        CHECK(close(*table.rows[x].quantum, refchains::ring_one_way(x, false)));
        if (x == 0) {
            CHECK_FALSE(table.rows[x].entangled.has_value());  // no short path to the own network
        } else {
            REQUIRE(table.rows[x].entangled.has_value());
            CHECK(close(*table.rows[x].entangled, ent[x - 1]));
            CHECK(close(*table.rows[x].entangled, refchains::ring_entangled_arm(x)));
        }
    }
    // On request: the own network is reachable around the full ring.
    REQUIRE(table.ring_self_entangled_via_backbone.has_value());
    CHECK(close(*table.ring_self_entangled_via_backbone, 22.2));
}

TEST_CASE("mesh reference losses match the hand-enumerated chains") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::mesh, 4, BackboneKind::active_pxc);
    const WorstCaseTable table = worst_case_analysis(pricing, net, 3);
    REQUIRE(table.rows.size() == 4);

    const double conv[] = {2.64, 20.16, 25.44, 30.72};
    const double quant[] = {2.4, 18.6, 23.4, 28.2};
    const double ent[] = {7.4, 12.2, 17.0, 21.8};
    for (int x = 0; x <= 3; ++x) {
        REQUIRE(table.rows[x].conventional.has_value());
        REQUIRE(table.rows[x].quantum.has_value());
        REQUIRE(table.rows[x].entangled.has_value());
        CHECK(close(*table.rows[x].conventional, conv[x]));
        CHECK(close(*table.rows[x].quantum, quant[x]));
        CHECK(close(*table.rows[x].entangled, ent[x]));
        CHECK(close(*table.rows[x].conventional, refchains::mesh_one_way(x, true)));
        CHECK(close(*table.rows[x].quantum, refchains::mesh_one_way(x, false)));
        CHECK(close(*table.rows[x].entangled, refchains::mesh_entangled_arm(x)));
    }
}

TEST_CASE("per-segment breakdown sums to the total") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::ring, 3, BackboneKind::passive_oadm);
    for (int x : {1, 2, 3}) {
        RouteOptions opt;
        opt.force_backbone = x == 3;
        const Route r =
            enumerate_route(net, SignalClass::conventional, UserRef{0}, UserRef{x % 3}, {}, opt);
        const PathLossReport report = one_way_loss(pricing, net, r);
        LossDb sum;
        for (const Segment& s : report.per_segment) sum += s.db;
        CHECK(sum == report.total_db);
    }
}

TEST_CASE("ring losses grow by one pass and one span per hop") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::ring, 6, BackboneKind::passive_oadm);
    LossDb prev;
    for (int x = 1; x <= 5; ++x) {
        const Route r = enumerate_route(net, SignalClass::quantum_oneway, UserRef{0}, UserRef{x});
        const LossDb total = one_way_loss(pricing, net, r).total_db;
        if (x > 1) CHECK((total - prev).db() == Catch::Approx(5.6));  // 4.8 pass + 0.8 span
        prev = total;
    }
}

TEST_CASE("class ordering on the ring") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::ring, 4, BackboneKind::passive_oadm);
    for (int x = 1; x <= 3; ++x) {
        const LossDb conv = one_way_loss(pricing, net,
                                         enumerate_route(net, SignalClass::conventional, UserRef{0}, UserRef{x}))
                                .total_db;
        const LossDb quant =
            one_way_loss(pricing, net,
                         enumerate_route(net, SignalClass::quantum_oneway, UserRef{0}, UserRef{x}))
                .total_db;
        const LossDb ent =
            one_way_loss(pricing, net, enumerate_route(net, SignalClass::entangled, SourceRef{0}, UserRef{x}))
                .total_db;
        CHECK(conv >= quant);
        CHECK(quant >= ent);
    }
}

TEST_CASE("entangled links sum both arms") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::ring, 3, BackboneKind::passive_oadm);

    // Worst design case: a source feeding its 1-closest and 2-closest
    // networks, 11 + 16.6 dB.
    const PathLossReport link = entangled_link_loss(pricing, net, SourceRef{2}, UserRef{0}, UserRef{1});
    CHECK(close(link.total_db, 27.6));
    CHECK(link.feasible);
    REQUIRE(link.arm_backbone_hops.size() == 2);
    CHECK(link.arm_backbone_hops[0] == 1);
    CHECK(link.arm_backbone_hops[1] == 2);
    CHECK(close(link.total_db, refchains::ring_entangled_arm(1) + refchains::ring_entangled_arm(2)));
}

TEST_CASE("entanglement-only ring arms and link budget") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::ring, 8, BackboneKind::cwdm_oadm_simple);

    const PathLossReport far = one_way_loss(pricing, net, make_head_end_arm(net, UserRef{7}));
    const PathLossReport near = one_way_loss(pricing, net, make_head_end_arm(net, UserRef{6}));
    CHECK(close(far.total_db, 15.3));
    CHECK(close(near.total_db, 14.0));

    const PathLossReport link =
        entangled_link_loss(pricing, net, make_head_end_arm(net, UserRef{6}), make_head_end_arm(net, UserRef{7}));
    CHECK(close(link.total_db, 29.3));
    CHECK(link.feasible);

    for (int k = 1; k <= 8; ++k)
        CHECK(close(one_way_loss(pricing, net, make_head_end_arm(net, UserRef{k - 1})).total_db,
                    refchains::ent_only_arm(k)));
}

TEST_CASE("mesh worst served cases stay inside the budget") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::mesh, 4, BackboneKind::active_pxc);

    const Route oneway =
        make_mesh_path_route(net, SignalClass::quantum_oneway, UserRef{0}, UserRef{3}, {0, 1, 2, 3});
    CHECK(close(one_way_loss(pricing, net, oneway).total_db, 28.2));

    const Route arm1 = make_mesh_path_route(net, SignalClass::entangled, SourceRef{0}, UserRef{1}, {0, 1});
    const Route arm2 = make_mesh_path_route(net, SignalClass::entangled, SourceRef{0}, UserRef{3}, {0, 2, 3});
    const PathLossReport link = entangled_link_loss(pricing, net, arm1, arm2);
    CHECK(close(link.total_db, 29.2));  // 12.2 + 17
    CHECK(link.feasible);
}

TEST_CASE("channel pair validation for entangled links") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::ring, 3, BackboneKind::passive_oadm);
    const auto a1 = dwdm_channels_in(*net.an(0).quantum, 100);
    const auto a2 = dwdm_channels_in(*net.an(1).quantum, 100);
    const PairingCenter center = PairingCenter::between(a1.front(), a2.back());
    CHECK_NOTHROW(entangled_link_loss(pricing, net, SourceRef{2}, UserRef{0}, UserRef{1},
                                      std::pair{a1.front(), entangled_partner(a1.front(), center)}));
}

TEST_CASE("zero budget marks every lossy path infeasible") {
    Pricing pricing = default_pricing();
    pricing.budgets.quantum_oneway = LossDb{};
    pricing.budgets.entangled = LossDb{};
    pricing.budgets.conventional = LossDb{};
    const NetworkModel net = build_reference_network(TopologyKind::ring, 3, BackboneKind::passive_oadm);
    const WorstCaseTable table = worst_case_analysis(pricing, net, 3);
    CHECK(*table.conventional_boundary == -1);
    CHECK(*table.quantum_boundary == -1);
    CHECK(*table.entangled_boundary == -1);
    for (const auto& row : table.rows) {
        if (row.quantum) {
            const Route r = enumerate_route(net, SignalClass::quantum_oneway, UserRef{0},
                                            UserRef{row.x % 3}, {},
                                            RouteOptions{row.x == 3});
            CHECK_FALSE(one_way_loss(pricing, net, r).feasible);
        }
    }
}

TEST_CASE("star access networks feed users through the hub switch") {
    const Pricing pricing;
    const NetworkModel star = build_reference_network(TopologyKind::star, 1, BackboneKind::passive_oadm);
    const Route arm = enumerate_route(star, SignalClass::entangled, SourceRef{-1, true}, UserRef{0});
    CHECK(one_way_loss(pricing, star, arm).total_db.db() == 1.2);  // switch + 1 km fiber
}

TEST_CASE("conventional paths are unbudgeted by default") {
    const Pricing pricing = default_pricing();
    const NetworkModel net = build_reference_network(TopologyKind::ring, 4, BackboneKind::passive_oadm);
    const Route r = enumerate_route(net, SignalClass::conventional, UserRef{0}, UserRef{3});
    const PathLossReport report = one_way_loss(pricing, net, r);
    CHECK(report.total_db.db() > 30.0);
    CHECK(report.feasible);  // classical light: no quantum budget applies
    CHECK_FALSE(report.budget_db.has_value());
}
