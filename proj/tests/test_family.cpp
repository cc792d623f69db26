#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "riccati/family.hpp"
#include "riccati/flow.hpp"
#include "riccati/params.hpp"

using namespace riccati;

namespace {
ModelParams unit_full(double eps) {
    ModelParams p;
    p.A = 0.0;
    p.R = 1.0;
    p.S = 1.0;
    p.U = 1.0;
    p.V = 1.0;
    p.eps = eps;
    return p;
}
}  // namespace

TEST_CASE("hat transform at the symmetric unit system") {
    const ModelParams p = unit_full(0.5);
    const ParamFamily fam = family(p, FamilyVariant::hat, 1.0);
    // iota = 0, so both coefficients shrink by eps^2/2 = 0.125.
    CHECK(fam.derived.R == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(fam.derived.S == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(fam.derived.U == doctest::Approx(1.0));
    CHECK(fam.derived.V == doctest::Approx(1.0));
    CHECK(fam.derived.eps == doctest::Approx(0.5));
    // At eps = 0 every transform is the identity on (R, S).
    const ParamFamily id = family(p, FamilyVariant::hat, 1.0, 0.0);
    CHECK(id.derived.R == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(id.derived.S == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hat transform shifts asymmetrically when iota is nonzero") {
    ModelParams p = unit_full(0.4);
    p.A = 1.0;  // iota = 1/sqrt(2)
    const double iota = 1.0 / std::sqrt(2.0);
    const ParamFamily fam = family(p, FamilyVariant::hat, 1.0);
    CHECK(fam.derived.R == doctest::Approx(1.0 - 0.16 * (0.5 + iota)).epsilon(1e-14));
    CHECK(fam.derived.S == doctest::Approx(1.0 - 0.16 * (0.5 - iota)).epsilon(1e-14));
}

TEST_CASE("bar transform raises R and lowers S") {
    const ModelParams p = unit_full(0.5);
    const ParamFamily fam = family(p, FamilyVariant::bar, 1.0);
    CHECK(fam.derived.R == doctest::Approx(1.125).epsilon(1e-15));
    CHECK(fam.derived.S == doctest::Approx(0.625).epsilon(1e-15));
    // 3*eps^2/2 * Vbar >= 1 collapses the transformed S.
    CHECK_THROWS_WITH_AS(family(p, FamilyVariant::bar, 1.0, 1.0).derived.S,
                         "family(bar): 3*eps^2/2*V/S < 1 required", std::invalid_argument);
}

TEST_CASE("modified family tilts (R, S) linearly in the order") {
    const ModelParams p = unit_full(0.5);
    const ParamFamily f3 = family(p, FamilyVariant::modified, 3.0);
    CHECK(f3.derived.R == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(f3.derived.S == doctest::Approx(0.75).epsilon(1e-15));
    const ParamFamily f1 = family(p, FamilyVariant::modified, 1.0);
    CHECK(f1.derived.R == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f1.derived.S == doctest::Approx(1.0).epsilon(1e-15));
    // Real orders and the reflected branch are accepted.
    CHECK_NOTHROW(family(p, FamilyVariant::modified, 1.5));
    const ParamFamily fm1 = family(p, FamilyVariant::modified, -1.0);
    CHECK(fm1.derived.R == doctest::Approx(1.0 - 0.25).epsilon(1e-15));
    CHECK(fm1.derived.S == doctest::Approx(1.0 + 0.25).epsilon(1e-15));

    // Ill-founded orders throw, naming the violated inequality.
    CHECK_THROWS_AS(family(p, FamilyVariant::modified, 17.0), std::invalid_argument);
    try {
        family(p, FamilyVariant::modified, 17.0);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("(n-1)*eps^2*V/S < 2") != std::string::npos);
    }
    ModelParams q = unit_full(1.5);
    CHECK_THROWS_AS(family(q, FamilyVariant::modified, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(family(p, FamilyVariant::modified, 0.5), std::invalid_argument);
}

TEST_CASE("inverse system swaps the roles of the coefficients") {
    ModelParams p;
    p.A = 0.7;
    p.R = 2.0;
    p.S = 3.0;
    p.U = 0.4;
    p.V = 0.9;
    p.eps = 0.5;
    const ParamFamily inv = family(p, FamilyVariant::inverse, 1.0);
    CHECK(inv.derived.A == doctest::Approx(-0.7));
    CHECK(inv.derived.R == doctest::Approx(3.0 + 0.25 * 0.9).epsilon(1e-15));
    CHECK(inv.derived.S == doctest::Approx(2.0 - 0.25 * 0.4).epsilon(1e-15));
    CHECK(inv.derived.U == doctest::Approx(0.9));
    CHECK(inv.derived.V == doctest::Approx(0.4));
    // The reciprocal of the deterministic flow solves the inverse system.
    const ParamFamily inv0 = family(p, FamilyVariant::inverse, 1.0, 0.0);
    for (double t : {0.3, 1.1}) {
        const double direct = 1.0 / phi(t, 2.0, p);
        CHECK(phi(t, 0.5, inv0.derived) == doctest::Approx(direct).epsilon(1e-11));
    }
    ModelParams bad = p;
    bad.U = 9.0;
    CHECK_THROWS_AS(family(bad, FamilyVariant::inverse, 1.0), std::invalid_argument);
}

TEST_CASE("hat_modified composes the two transforms") {
    const ModelParams p = unit_full(0.4);
    const ParamFamily direct = family(p, FamilyVariant::hat_modified, 2.0);
    const ModelParams hat = family(p, FamilyVariant::hat, 1.0).derived;
    const ParamFamily manual = family(hat, FamilyVariant::modified, 2.0);
    CHECK(direct.derived.R == doctest::Approx(manual.derived.R).epsilon(1e-15));
    CHECK(direct.derived.S == doctest::Approx(manual.derived.S).epsilon(1e-15));
}

TEST_CASE("modified flows are ordered in the order parameter") {
    const ModelParams p = unit_full(0.4);
    const double x = 0.3;
    for (double t : {0.5, 2.0}) {
        const double f1 = phi_modified(t, x, p, 1.0);
        const double f2 = phi_modified(t, x, p, 2.0);
        const double f4 = phi_modified(t, x, p, 4.0);
        CHECK(f1 <= f2);
        CHECK(f2 <= f4);
        // Order 1 is the base flow at the base parameters.
        CHECK(f1 == doctest::Approx(phi(t, x, p)).epsilon(1e-14));
    }
    CHECK(phi_star_modified(0.5, p, 3.0) ==
          doctest::Approx(phi_star(0.5, family(p, FamilyVariant::modified, 3.0).derived))
              .epsilon(1e-14));
}

TEST_CASE("comparison bound dominates the gap between ordered flows") {
    ModelParams p;
    p.A = 0.4;
    p.R = 1.5;
    p.S = 0.9;
    ModelParams pbar = p;
    pbar.R = 1.2;
    pbar.S = 1.1;
    for (double x : {0.0, 1.0, 4.0}) {
        const double bound = comparison_bound(p, pbar, x);
        CHECK(bound >= 0.0);
        for (double t = 0.05; t <= 6.0; t += 0.05) {
            const double gap = phi(t, x, p) - phi(t, x, pbar);
            CHECK(gap >= -1e-12);
            CHECK(gap <= bound * (1.0 + 1e-9));
        }
    }
    CHECK_THROWS_AS(comparison_bound(pbar, p, 1.0), std::invalid_argument);
}
