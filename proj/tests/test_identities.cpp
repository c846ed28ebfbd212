#include <doctest.h>

#include "hyperma/errors.hpp"
#include "hyperma/identities.hpp"

using namespace hyperma;

namespace {

const IdentityCheck* find(const IdentityReport& r, const std::string& name) {
    for (const auto& c : r.checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("identity suite has no counted failures") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto r = check_identities(n, 60, 7);
        CHECK(r.failures() == 0);
        for (const auto& c : r.checks) {
            INFO(c.name);
            CHECK(c.cases > 0);
            if (c.counted) CHECK(c.failures == 0);
        }
        CHECK((find(r, "aleksandrov_inequality") != nullptr) == (n >= 2));
    }
}

TEST_CASE("literal claim form is reported, not counted") {
    const auto one = check_identities(1, 20, 3);
    const auto* lit1 = find(one, "claim214_literal");
    REQUIRE(lit1 != nullptr);
    CHECK(lit1->counted);
    CHECK(lit1->failures == 0);

    const auto two = check_identities(2, 20, 3);
    const auto* lit2 = find(two, "claim214_literal");
    REQUIRE(lit2 != nullptr);
    CHECK_FALSE(lit2->counted);
    CHECK(lit2->failures == 20);
    CHECK(two.failures() == 0);
}

TEST_CASE("identity suite is deterministic in the seed") {
    const auto a = check_identities(2, 30, 11);
    const auto b = check_identities(2, 30, 11);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].worst == b.checks[i].worst);
        CHECK(a.checks[i].cases == b.checks[i].cases);
    }
    CHECK_THROWS_AS(check_identities(0, 10, 1), DimensionError);
    CHECK_THROWS_AS(check_identities(2, 0, 1), PreconditionError);
}
