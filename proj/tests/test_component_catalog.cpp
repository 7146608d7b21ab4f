#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qmon/component_catalog.hpp"

using namespace qmon;

namespace {
double db(const Catalog& c, Part p, BandName b) { return c.loss(p, b).db(); }
}  // namespace

TEST_CASE("catalog defaults match the datasheet") {
    const Catalog c;

    CHECK(db(c, Part::fiber, BandName::c_quantum) == 0.2);
    CHECK(db(c, Part::fiber, BandName::o_conventional) == 0.32);
    CHECK(c.spec(Part::fiber).per_km);

    CHECK(db(c, Part::splitter_1x2, BandName::c_quantum) == 3.6);
    CHECK(db(c, Part::splitter_1x32, BandName::c_quantum) == 16.5);
    CHECK(db(c, Part::cwdm_oadm_1ch, BandName::c_quantum) == 0.5);
    CHECK(db(c, Part::dwdm_oadm_1ch, BandName::c_quantum) == 0.5);
    CHECK(db(c, Part::cwdm_mux4, BandName::c_quantum) == 1.0);
    CHECK(db(c, Part::wdm_mux_1310_1550, BandName::c_quantum) == 0.5);
    CHECK(db(c, Part::bandpass_filter, BandName::c_quantum) == 0.5);
    CHECK(db(c, Part::circulator, BandName::c_quantum) == 0.8);
    CHECK(db(c, Part::awg32, BandName::c_quantum) == 3.0);
    CHECK(db(c, Part::optical_switch, BandName::c_quantum) == 1.0);

    // Range-valued rows expose both endpoints around the 0.5 dB default.
    for (Part p : {Part::cwdm_oadm_1ch, Part::dwdm_oadm_1ch, Part::bandpass_filter}) {
        const auto& range = c.spec(p).datasheet_range_db;
        REQUIRE(range.has_value());
        CHECK(range->first.db() == 0.4);
        CHECK(range->second.db() == 0.6);
    }

    // Operating windows as published.
    CHECK(c.spec(Part::splitter_1x2).windows_nm.front().lo_nm == 1260);
    CHECK(c.spec(Part::splitter_1x2).windows_nm.front().hi_nm == 1610);
    CHECK(c.spec(Part::dwdm_oadm_1ch).windows_nm.front().lo_nm == 1525);
    CHECK(c.spec(Part::awg32).windows_nm.front().lo_nm == 1533);
    CHECK(c.spec(Part::awg32).windows_nm.front().hi_nm == 1558);
    CHECK(c.spec(Part::optical_switch).windows_nm.front().hi_nm == 1675);
    CHECK(c.spec(Part::wdm_mux_1310_1550).windows_nm.size() == 2);
}

TEST_CASE("chain loss sums members exactly") {
    const Catalog c;
    const ComponentChain chain = {{Part::fiber, 1.0}, {Part::optical_switch}, {Part::awg32}};
    CHECK(chain_loss(c, chain, BandName::c_quantum).db() == 4.2);  // 0.2 + 1 + 3 by hand

    CHECK(chain_loss(c, {}, BandName::c_quantum).db() == 0.0);
    CHECK(chain_loss(c, {{Part::fiber, 1.0}}, BandName::o_conventional).db() == 0.32);
}

TEST_CASE("chain loss rejects out-of-band components naming them") {
    const Catalog c;
    CHECK_THROWS_WITH(chain_loss(c, {{Part::dwdm_oadm_1ch}}, BandName::o_conventional),
                      "1-channel DWDM OADM does not operate in the O band");
}

TEST_CASE("chain loss is additive and monotone") {
    const Catalog catalog;
    std::mt19937 rng(31);
    const std::vector<Part> pool = {Part::fiber,      Part::splitter_1x2, Part::cwdm_oadm_1ch,
                                    Part::cwdm_mux4,  Part::circulator,   Part::awg32,
                                    Part::optical_switch, Part::wdm_mux_1310_1550};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> len(0, 8);
    std::uniform_real_distribution<double> km(0.1, 10.0);
    for (int i = 0; i < 1000; ++i) {
        ComponentChain a, b;
        for (int k = len(rng); k > 0; --k) a.push_back({pool[pick(rng)], km(rng)});
        for (int k = len(rng); k > 0; --k) b.push_back({pool[pick(rng)], km(rng)});
        ComponentChain ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        const LossDb la = chain_loss(catalog, a, BandName::c_quantum);
        const LossDb lb = chain_loss(catalog, b, BandName::c_quantum);
        CHECK(chain_loss(catalog, ab, BandName::c_quantum) == la + lb);
        CHECK(la + lb >= la);  // appending never decreases loss
    }
}

TEST_CASE("node losses reproduce the published tables") {
    const NodeLossTable t;
    auto loss = [&](BackboneKind k, NodeAction a, SignalClass c) { return t.node_loss(k, a, c).db(); };

    CHECK(loss(BackboneKind::passive_oadm, NodeAction::add, SignalClass::conventional) == 6.2);
    CHECK(loss(BackboneKind::passive_oadm, NodeAction::add, SignalClass::quantum_oneway) == 6.2);
    CHECK(loss(BackboneKind::passive_oadm, NodeAction::add, SignalClass::entangled) == 3.6);
    CHECK(loss(BackboneKind::passive_oadm, NodeAction::pass, SignalClass::conventional) == 4.8);
    CHECK(loss(BackboneKind::passive_oadm, NodeAction::pass, SignalClass::quantum_oneway) == 4.8);
    CHECK(loss(BackboneKind::passive_oadm, NodeAction::pass, SignalClass::entangled) == 4.8);
    CHECK(loss(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::conventional) == 2.3);
    CHECK(loss(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::quantum_oneway) == 1.7);
    CHECK(loss(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::entangled) == 1.7);

    CHECK(loss(BackboneKind::active_pxc, NodeAction::cross, SignalClass::conventional) == 4.0);
    CHECK(loss(BackboneKind::active_pxc, NodeAction::cross, SignalClass::quantum_oneway) == 4.0);
    CHECK(loss(BackboneKind::active_pxc, NodeAction::cross, SignalClass::entangled) == 2.5);

    CHECK(loss(BackboneKind::cwdm_oadm_simple, NodeAction::pass, SignalClass::entangled) == 0.5);
    CHECK(loss(BackboneKind::cwdm_oadm_simple, NodeAction::drop, SignalClass::entangled) == 0.5);
}

TEST_CASE("undefined node actions are rejected") {
    const NodeLossTable t;
    CHECK_THROWS_AS(t.node_loss(BackboneKind::active_pxc, NodeAction::drop, SignalClass::conventional), Error);
    CHECK_THROWS_AS(t.node_loss(BackboneKind::cwdm_oadm_simple, NodeAction::add, SignalClass::entangled), Error);
    CHECK_THROWS_AS(t.node_loss(BackboneKind::passive_oadm, NodeAction::cross, SignalClass::entangled), Error);
}

TEST_CASE("cross-connect losses derive from the component chain") {
    CHECK(derive_pxc_cross_loss(4).db() == 4.0);  // 0.5 + 1 + 1 + 1 + 0.5
    CHECK(derive_pxc_injection_loss(4).db() == 2.5);  // 1 + 1 + 0.5

    PxcParts zeroed;
    zeroed.wdm_mux = LossDb{};
    zeroed.switch_db = LossDb{};
    zeroed.cwdm_mux_by_count = {{4, LossDb{}}};
    CHECK(derive_pxc_cross_loss(4, zeroed).db() == 0.0);

    CHECK_THROWS_WITH(derive_pxc_cross_loss(8), "no CWDM mux loss configured for 8 channels");
    CHECK_THROWS_AS(derive_pxc_cross_loss(0), Error);
}

TEST_CASE("passive node decomposition cross-checks the table") {
    const NodeLossTable derived = derive_passive_oadm_losses();
    const NodeLossTable published;
    for (NodeAction a : {NodeAction::add, NodeAction::pass, NodeAction::drop})
        for (SignalClass c :
             {SignalClass::conventional, SignalClass::quantum_oneway, SignalClass::entangled})
            CHECK(derived.node_loss(BackboneKind::passive_oadm, a, c) ==
                  published.node_loss(BackboneKind::passive_oadm, a, c));
}

TEST_CASE("loss rendering uses the fewest decimals") {
    CHECK(LossDb::from_centidb(480).str() == "4.8");
    CHECK(LossDb::from_centidb(264).str() == "2.64");
    CHECK(LossDb::from_centidb(1700).str() == "17");
    CHECK(LossDb::from_centidb(0).str() == "0");
}
