#include <catch2/catch.hpp>

#include <bit>
#include <cstdint>
#include <vector>

#include "mcs/pqr.hpp"
#include "pqr_oracle.hpp"

using namespace mcs;



TEST_CASE("counting_bound matches direct arithmetic") {
    REQUIRE(counting_bound({5, 2, 1, 2, 2}));         // 10 > 5 * C(1,1)
    REQUIRE_FALSE(counting_bound({4, 2, 1, 2, 3}));   // 6 <= 4 * C(2,1)
    // full-budget reconstruction always escapes the bound
    for (unsigned n : {3u, 4u, 5u, 6u})
        for (unsigned p = 2; p <= 3 && p <= n; ++p)
            for (unsigned q = 1; q < p; ++q)
                REQUIRE_FALSE(counting_bound({n, p, q, p, n}));
}

TEST_CASE("counting_bound rejects r != p") {
    REQUIRE_THROWS_MATCHES(counting_bound({5, 3, 1, 2, 3}), error,
                           Catch::Matchers::Predicate<error>(
                               [](const error& e) { return e.code() == errc::r_not_p; }));
}

TEST_CASE("search_pqr reproduces the frozen verdicts") {
    PqrResult infeasible = search_pqr({5, 2, 1, 2, 2});
    REQUIRE_FALSE(infeasible.feasible());
    REQUIRE_FALSE(infeasible.certificate.has_value());

    PqrResult big_budget = search_pqr({5, 2, 1, 2, 5});
    REQUIRE(big_budget.feasible());
    REQUIRE(verify_certificate({5, 2, 1, 2, 5}, *big_budget.certificate));

    PqrResult tight = search_pqr({4, 2, 1, 2, 3});
    REQUIRE(tight.feasible());
    REQUIRE(verify_certificate({4, 2, 1, 2, 3}, *tight.certificate));
}

TEST_CASE("search_pqr is vacuously feasible when no p-subset exists") {
    PqrResult r = search_pqr({2, 3, 1, 1, 2});
    REQUIRE(r.feasible());
    REQUIRE(verify_certificate({2, 3, 1, 1, 2}, *r.certificate));
}

TEST_CASE("search_pqr enforces the enumeration cap") {
    PqrInstance inst{12, 5, 2, 3, 6};
    inst.cap = 100;
    REQUIRE_THROWS_MATCHES(search_pqr(inst), error,
                           Catch::Matchers::Predicate<error>(
                               [](const error& e) { return e.code() == errc::cap_exceeded; }));
}

TEST_CASE("search_pqr rejects malformed instances") {
    REQUIRE_THROWS_AS(search_pqr({5, 2, 3, 2, 3}), error);   // q > r
    REQUIRE_THROWS_AS(search_pqr({5, 2, 1, 2, 0}), error);   // budget < q
    REQUIRE_THROWS_AS(search_pqr({5, 2, 1, 2, 6}), error);   // budget > n
}

TEST_CASE("verify_certificate detects damaged certificates") {
    PqrInstance inst{4, 2, 1, 2, 3};
    PqrResult found = search_pqr(inst);
    REQUIRE(found.feasible());
    PqrCertificate good = *found.certificate;
    REQUIRE(verify_certificate(inst, good));

    PqrCertificate truncated = good;
    truncated.eta[0].second &= truncated.eta[0].second - 1;  // drop one element
    REQUIRE_FALSE(verify_certificate(inst, truncated));

    PqrCertificate bad_sigma = good;
    bad_sigma.sigma[0].second = ~bad_sigma.sigma[0].first & 0xF;  // not a subset
    REQUIRE_FALSE(verify_certificate(inst, bad_sigma));

    PqrCertificate missing = good;
    missing.sigma.erase(missing.sigma.begin());
    REQUIRE_FALSE(verify_certificate(inst, missing));
}

TEST_CASE("search agrees with the reachability oracle on a small grid") {
    for (unsigned n = 1; n <= 5; ++n)
        for (unsigned p = 2; p <= 3; ++p)
            for (unsigned q = 1; q < p; ++q)
                for (unsigned r = q; r <= p; ++r)
                    for (unsigned budget = q; budget <= n; ++budget) {
                        PqrInstance inst{n, p, q, r, budget};
                        PqrResult got = search_pqr(inst);
                        bool expected = pqr_feasible_by_reachability(n, p, q, r, budget);
                        INFO("n=" << n << " p=" << p << " q=" << q << " r=" << r
                                  << " B=" << budget);
                        REQUIRE(got.feasible() == expected);
                        if (got.feasible())
                            REQUIRE(verify_certificate(inst, *got.certificate));
                        if (r == p && counting_bound(inst)) REQUIRE_FALSE(expected);
                    }
}

TEST_CASE("feasibility is monotone in the budget") {
    for (unsigned n = 2; n <= 5; ++n)
        for (unsigned p = 2; p <= 3; ++p)
            for (unsigned q = 1; q < p; ++q)
                for (unsigned r = q; r <= p; ++r) {
                    bool prev = false;
                    for (unsigned budget = q; budget <= n; ++budget) {
                        bool now = search_pqr({n, p, q, r, budget}).feasible();
                        if (prev) REQUIRE(now);
                        prev = now;
                    }
                }
}

TEST_CASE("the committed certificate is deterministic") {
    PqrInstance inst{5, 3, 1, 2, 3};
    PqrResult a = search_pqr(inst);
    PqrResult b = search_pqr(inst);
    REQUIRE(a.feasible() == b.feasible());
    if (a.feasible()) {
        REQUIRE(a.certificate->sigma == b.certificate->sigma);
        REQUIRE(a.certificate->eta == b.certificate->eta);
    }
}

TEST_CASE("mask helpers round-trip") {
    Mask m = mask_from_elements({0, 2, 5});
    REQUIRE(m == 0b100101u);
    REQUIRE(mask_elements(m) == std::vector<unsigned>{0, 2, 5});
}
