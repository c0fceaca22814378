#include "lep/errors.hpp"
#include "lep/resources.hpp"
#include "support.hpp"

using namespace lep;
using doctest::Approx;

TEST_CASE("ledger updates") {
    const ResourceLedger start(7.0);
    const auto tcp = tcp_round_update(start, 0.58);
    CHECK(tcp.current() == Approx(24.138).epsilon(1e-4));
    CHECK(tcp.history().size() == 1);
    CHECK(tcp.history()[0].rule == LedgerRule::Recurrence);
    CHECK(tcp.history()[0].added_cost == 0.0);

    const auto lep = lep_round_update(start, 1.0, 2 / 0.58, 0.58);
    CHECK(lep.current() == Approx(18.014).epsilon(1e-4));
    CHECK(lep.history()[0].added_cost == Approx(2 / 0.58));

    const auto plain = lep_round_update(start, 1.0, 1.0, 0.58);
    CHECK(plain.current() == Approx(8.0 / 0.58));

    CHECK_THROWS_AS(ResourceLedger(0.0), InvalidArgument);
    CHECK_THROWS_AS(tcp_round_update(start, 0.0), InvalidArgument);
    CHECK_THROWS_AS(tcp_round_update(start, 1.1), InvalidArgument);
    CHECK_THROWS_AS(lep_round_update(start, 0.0, 1.0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(lep_round_update(start, 1.0, 0.5, 0.5), InvalidArgument);
}

TEST_CASE("recurrence updates equal the closed-form product") {
    test::Rng rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        const double base = test::uniform(rng, 1, 30);
        ResourceLedger ledger(base);
        double product = base;
        for (int k = test::uniform_int(rng, 1, 12); k > 0; --k) {
            const double q = test::uniform(rng, 0.05, 1.0);
            ledger = tcp_round_update(ledger, q);
            product *= 2 / q;
        }
        CHECK(ledger.current() == Approx(product).epsilon(1e-12));
        CHECK(ledger.base() == base);
    }
}

TEST_CASE("interpolation to a target fidelity") {
    const std::vector<TracePoint> trace = {{0.7, 7}, {0.8, 20}, {0.95, 50}, {0.9, 100}};

    const auto same = interpolate_to_fidelity(trace, 0.6);
    CHECK(same.status == InterpolationStatus::Same);
    CHECK(same.value == 7.0);

    const auto mid = interpolate_to_fidelity(trace, 0.9);
    CHECK(mid.status == InterpolationStatus::Interpolated);
    CHECK(mid.round_n == 1);
    CHECK(mid.round_next == 2);
    CHECK(mid.p == Approx(1.0 / 3.0));
    CHECK(mid.value == Approx(20.0 / 3.0 + 50.0 * 2.0 / 3.0));

    const auto exact = interpolate_to_fidelity(trace, 0.95);
    CHECK(exact.value == Approx(50.0));

    CHECK(interpolate_to_fidelity(trace, 0.99).status == InterpolationStatus::Unreachable);
    CHECK_THROWS_AS(interpolate_to_fidelity({}, 0.9), InvalidArgument);
}

TEST_CASE("interpolation to a resource budget") {
    const std::vector<TracePoint> trace = {{0.7, 7}, {0.8, 20}, {0.95, 50}};

    const auto start = interpolate_to_resources(trace, 7.0);
    CHECK(start.value == Approx(0.7));

    const auto mid = interpolate_to_resources(trace, 35.0);
    CHECK(mid.status == InterpolationStatus::Interpolated);
    CHECK(mid.round_n == 1);
    CHECK(mid.p == Approx(0.5));
    CHECK(mid.value == Approx(0.875));

    const auto capped = interpolate_to_resources(trace, 1000.0);
    CHECK(capped.status == InterpolationStatus::Capped);
    CHECK(capped.value == 0.95);

    CHECK_THROWS_AS(interpolate_to_resources(trace, 6.0), InvalidArgument);
}

TEST_CASE("interpolation round trip") {
    test::Rng rng(62);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<TracePoint> trace = {{test::uniform(rng, 0.3, 0.7), test::uniform(rng, 1, 20)}};
        for (int k = test::uniform_int(rng, 1, 8); k > 0; --k)
            trace.push_back({std::min(1.0, trace.back().fidelity + test::uniform(rng, 1e-3, 0.1)),
                             trace.back().resources * test::uniform(rng, 1.1, 4.0)});
        const double target = test::uniform(rng, trace.front().fidelity, trace.back().fidelity);
        const auto tf = interpolate_to_fidelity(trace, target);
        REQUIRE(tf.status != InterpolationStatus::Unreachable);
        const auto tr = interpolate_to_resources(trace, tf.value);
        CHECK(tr.value == Approx(target).epsilon(1e-9));
    }
}

TEST_CASE("relative gain") {
    CHECK(relative_gain(0.8, 0.9) == Approx(12.5));
    CHECK(relative_gain(0.9, 0.8) == Approx(-100.0 / 9.0));
    CHECK_THROWS_AS(relative_gain(0.0, 1.0), InvalidArgument);
}
