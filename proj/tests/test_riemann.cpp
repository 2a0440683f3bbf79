#include "oracles.hpp"

#include "tasep2/errors.hpp"
#include "tasep2/riemann.hpp"

#include <doctest.h>

#include <vector>

using namespace tasep2;

namespace
{
    template <class F>
    ErrorCode code_of(F &&f)
    {
        try
        {
            f();
        }
        catch (const Error &e)
        {
            return e.code();
        }
        FAIL("no exception");
        return ErrorCode::ConfigError;
    }

    std::vector<double> grid(double lo, double hi, int n)
    {
        std::vector<double> g(n);
        for (int i = 0; i < n; ++i)
            g[i] = lo + (hi - lo) * i / (n - 1);
        return g;
    }

    // Speeds as derivatives of the currents along the lines of constant z,
    // by central differences through the density map.
    CharSpeeds finite_difference_speeds(const ModelParams &p, ZPoint z, double h = 1e-5)
    {
        auto jw = [&](ZPoint q) {
            const Densities d = densities_from_z(p, q);
            return std::pair{currents_from_z(p, q, d), d};
        };
        const auto [ja1, da1] = jw(ZPoint{z.z_alpha + h, z.z_beta});
        const auto [ja0, da0] = jw(ZPoint{z.z_alpha - h, z.z_beta});
        const auto [jb1, db1] = jw(ZPoint{z.z_alpha, z.z_beta + h});
        const auto [jb0, db0] = jw(ZPoint{z.z_alpha, z.z_beta - h});
        return CharSpeeds{(ja1.j_white - ja0.j_white) / (da1.rho_white - da0.rho_white),
                          (jb1.j_black - jb0.j_black) / (db1.rho_black - db0.rho_black)};
    }

    const std::vector<ModelParams> regimes{{1.5, 2.0}, {3.0, 1.2}, {2.0, 0.4}, {0.7, 0.6}, {0.3, 0.4}, {0.6, 0.4}};
}

TEST_CASE("characteristic speeds")
{
    SUBCASE("unit rates give two Burgers equations")
    {
        const ModelParams p{1.0, 1.0};
        for (double rw : {0.1, 0.3, 0.5})
            for (double rb : {0.1, 0.25, 0.4})
            {
                const CharSpeeds v = char_speeds(p, solve_z(p, Densities{rw, rb}));
                CHECK(v.v_beta == doctest::Approx(1.0 - 2.0 * rb).epsilon(1e-12));
                CHECK(v.v_alpha == doctest::Approx(-(1.0 - 2.0 * rw)).epsilon(1e-12));
            }
    }
    SUBCASE("finite differences and the two evaluation routes agree")
    {
        for (const auto &p : regimes)
            for (double rw : {0.1, 0.3, 0.5})
                for (double rb : {0.1, 0.25, 0.4})
                {
                    const ZPoint z = solve_z(p, Densities{rw, rb});
                    const CharSpeeds v = char_speeds(p, z);
                    const CharSpeeds c = char_speeds_closed_form(p, z);
                    const CharSpeeds fd = finite_difference_speeds(p, z);
                    CHECK(v.v_alpha == doctest::Approx(c.v_alpha).epsilon(1e-10));
                    CHECK(v.v_beta == doctest::Approx(c.v_beta).epsilon(1e-10));
                    CHECK(v.v_alpha == doctest::Approx(fd.v_alpha).epsilon(1e-6));
                    CHECK(v.v_beta == doctest::Approx(fd.v_beta).epsilon(1e-6));
                    CHECK(v.v_beta > v.v_alpha);
                }
    }
    SUBCASE("on z_alpha + z_beta = 1 both speeds equal 2 z_alpha - 1")
    {
        const ModelParams p{0.8, 0.7};
        for (double za : {0.35, 0.5, 0.7})
        {
            const CharSpeeds v = char_speeds(p, ZPoint{za, 1.0 - za});
            CHECK(v.v_alpha == doctest::Approx(2.0 * za - 1.0).epsilon(1e-12));
            CHECK(v.v_beta == doctest::Approx(2.0 * za - 1.0).epsilon(1e-12));
        }
    }
    SUBCASE("boundary values")
    {
        const ModelParams p{0.6, 0.8};
        // z_alpha = 0: black particles among vacancies, TASEP with rate beta
        CHECK(char_speeds(p, ZPoint{0.0, 0.3}).v_beta == doctest::Approx(0.8 - 0.6).epsilon(1e-12));
        CHECK(char_speeds(p, ZPoint{0.3, 0.0}).v_alpha == doctest::Approx(0.6 - 0.6).epsilon(1e-12));
    }
    SUBCASE("corners are poles of the closed form; the line limit exists")
    {
        const ModelParams p{1.5, 2.0};
        CHECK(code_of([&] { char_speeds(p, ZPoint{0.0, 1.0}); }) == ErrorCode::PoleEvaluation);
        CHECK(char_speed_along(p, Family::beta, 0.0, 1.0) == doctest::Approx(2.0 - 2.0).epsilon(1e-8));
    }
    SUBCASE("pole evaluation is reported for the current-based formula")
    {
        const ModelParams p{0.6, 0.8};
        CHECK(code_of([&] { char_speeds_from_currents(p, ZPoint{0.0, 0.3}, Densities{}, Currents{}); }) ==
              ErrorCode::PoleEvaluation);
    }
}

TEST_CASE("shock speeds")
{
    SUBCASE("explicit alpha/beta shock identity on the line z_alpha + z_beta = 1")
    {
        const ModelParams p{1.5, 2.0};
        for (double za = 0.05; za < 0.95; za += 0.1)
            for (double zb = 0.05; za + zb < 0.95; zb += 0.1)
            {
                CHECK(shock_speed(p, WaveKind::alpha_shock, zb, za, 1.0 - zb) == doctest::Approx(za - zb).epsilon(1e-10));
                CHECK(shock_speed(p, WaveKind::beta_shock, za, zb, 1.0 - za) == doctest::Approx(za - zb).epsilon(1e-10));
            }
    }
    SUBCASE("small gaps recover the characteristic speed")
    {
        const ModelParams p{0.7, 0.6};
        const ZPoint z = solve_z(p, Densities{0.3, 0.2});
        const CharSpeeds v = char_speeds(p, z);
        CHECK(shock_speed(p, WaveKind::alpha_shock, z.z_beta, z.z_alpha, z.z_alpha + 1e-5) ==
              doctest::Approx(v.v_alpha).epsilon(1e-4));
        CHECK(shock_speed(p, WaveKind::beta_shock, z.z_alpha, z.z_beta, z.z_beta + 1e-5) ==
              doctest::Approx(v.v_beta).epsilon(1e-4));
    }
    SUBCASE("unit rates: Burgers Rankine-Hugoniot")
    {
        const ModelParams p{1.0, 1.0};
        CHECK(shock_speed(p, WaveKind::beta_shock, 0.2, 0.1, 0.6) == doctest::Approx(1.0 - 0.1 - 0.6).epsilon(1e-12));
    }
    SUBCASE("speed decreases with the right state along a beta shock")
    {
        const ModelParams p{0.7, 0.9};
        double prev = 1e9;
        for (double zp = 0.25; zp < 0.6; zp += 0.05)
        {
            const double s = shock_speed(p, WaveKind::beta_shock, 0.2, 0.2, zp);
            CHECK(s < prev);
            prev = s;
        }
    }
    SUBCASE("bad arguments")
    {
        const ModelParams p{0.7, 0.9};
        CHECK(code_of([&] { shock_speed(p, WaveKind::beta_shock, 0.2, 0.3, 0.3); }) == ErrorCode::ZeroJump);
        CHECK(code_of([&] { shock_speed(p, WaveKind::alpha_fan, 0.2, 0.3, 0.4); }) == ErrorCode::OutOfDomain);
    }
}

TEST_CASE("boundary shocks")
{
    const ModelParams p{0.3, 0.4};
    CHECK(boundary_shock_speed(p, 0.45, 0.65) == doctest::Approx(0.3 - 0.4).epsilon(1e-14));
    CHECK(boundary_shock_speed(p, 0.1, 0.3) == doctest::Approx(1.0 - 0.1 - 0.3).epsilon(1e-14));
    CHECK(boundary_shock_speed(p, 0.2, 0.2 + 1e-9) == doctest::Approx(1.0 - 0.4).epsilon(1e-7));
    CHECK(code_of([&] { boundary_shock_speed(p, 0.2, 0.2); }) == ErrorCode::ZeroJump);
}

TEST_CASE("Liu condition")
{
    CHECK(liu_admissible(WaveKind::beta_shock, ZPoint{0.1, 0.2}, ZPoint{0.1, 0.5}));
    CHECK_FALSE(liu_admissible(WaveKind::alpha_shock, ZPoint{0.2, 0.1}, ZPoint{0.5, 0.1}));
    CHECK(liu_admissible(WaveKind::alpha_shock, ZPoint{0.5, 0.1}, ZPoint{0.2, 0.1}));
    CHECK_FALSE(liu_admissible(WaveKind::beta_shock, ZPoint{0.1, 0.3}, ZPoint{0.1, 0.3}));
}

TEST_CASE("fan inversion")
{
    SUBCASE("endpoints map to themselves")
    {
        const ModelParams p{0.7, 0.6};
        const double v = char_speed_along(p, Family::alpha, 0.2, 0.3);
        CHECK(fan_invert(p, WaveKind::alpha_fan, 0.2, v, 0.3, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("unit rates: linear Burgers fan")
    {
        const ModelParams p{1.0, 1.0};
        for (double xi : grid(-0.6, 0.6, 13))
            CHECK(fan_invert(p, WaveKind::beta_fan, 0.1, xi) == doctest::Approx((1.0 - xi) / 2.0).epsilon(1e-11));
    }
    SUBCASE("monotone in xi")
    {
        const ModelParams p{0.7, 1.6};
        const double zb = 0.3;
        const double lo = char_speed_along(p, Family::alpha, zb, 0.0);
        const double hi = char_speed_along(p, Family::alpha, zb, 0.7);
        double prev = -1.0;
        for (double xi : grid(lo, hi, 100))
        {
            const double z = fan_invert(p, WaveKind::alpha_fan, zb, xi);
            CHECK(z > prev);
            CHECK(std::abs(char_speed_along(p, Family::alpha, zb, z) - xi) <= 1e-10);
            prev = z;
        }
        const double za = 0.2;
        const double blo = char_speed_along(p, Family::beta, za, 0.8);
        const double bhi = char_speed_along(p, Family::beta, za, 0.0);
        prev = 2.0;
        for (double xi : grid(blo, bhi, 100))
        {
            const double z = fan_invert(p, WaveKind::beta_fan, za, xi);
            CHECK(z < prev);
            prev = z;
        }
    }
    SUBCASE("outside the fan")
    {
        const ModelParams p{1.0, 1.0};
        CHECK(code_of([&] { fan_invert(p, WaveKind::beta_fan, 0.1, 0.9, 0.3, 0.5); }) == ErrorCode::OutOfFan);
    }
}

TEST_CASE("Riemann problem")
{
    SUBCASE("equal states")
    {
        const auto s = riemann_solve(ModelParams{0.5, 0.5}, Densities{0.3, 0.3}, Densities{0.3, 0.3});
        REQUIRE(s.waves.size() == 1);
        CHECK(s.waves[0].kind == WaveKind::constant);
        CHECK(profile_at(s, 0.2).rho_white == 0.3);
    }
    SUBCASE("two shocks")
    {
        const ModelParams p{0.5, 0.5};
        const Densities l{0.45, 0.112}, r{0.226, 0.665};
        const ZPoint zl = solve_z(p, l), zr = solve_z(p, r);
        REQUIRE(zl.z_alpha > zr.z_alpha);
        REQUIRE(zl.z_beta < zr.z_beta);
        const auto s = riemann_solve(p, l, r);
        REQUIRE(s.waves.size() == 2);
        CHECK(s.waves[0].kind == WaveKind::alpha_shock);
        CHECK(s.waves[1].kind == WaveKind::beta_shock);
        CHECK(s.waves[0].xi_lo < s.waves[1].xi_lo);
        CHECK(s.waves[0].right.z.z_alpha == doctest::Approx(zr.z_alpha));
        CHECK(s.waves[0].right.z.z_beta == doctest::Approx(zl.z_beta));
        CHECK(s.waves[0].xi_lo == doctest::Approx(shock_speed(p, WaveKind::alpha_shock, zl.z_beta, zl.z_alpha, zr.z_alpha)));

        // heights are piecewise linear with kinks exactly at the two shocks
        const std::vector<double> u = grid(-1.0, 1.0, 2001);
        const HeightProfile h = height_profile(s, u);
        std::vector<double> kinks;
        for (std::size_t i = 1; i + 1 < u.size(); ++i)
        {
            const double d2 = h.h_black[i + 1] - 2.0 * h.h_black[i] + h.h_black[i - 1];
            if (std::abs(d2) > 1e-9)
                kinks.push_back(u[i]);
        }
        REQUIRE(!kinks.empty());
        for (double k : kinks)
        {
            const bool near_shock = std::abs(k - s.waves[0].xi_lo) <= 1e-3 || std::abs(k - s.waves[1].xi_lo) <= 1e-3;
            CHECK(near_shock);
        }
    }
    SUBCASE("alpha shock and beta fan")
    {
        const auto s = riemann_solve(ModelParams{0.6, 0.8}, Densities{0.6, 0.35}, Densities{0.1, 0.1});
        REQUIRE(s.waves.size() == 2);
        CHECK(s.waves[0].kind == WaveKind::alpha_shock);
        CHECK(s.waves[1].kind == WaveKind::beta_fan);
    }
    SUBCASE("alpha fan and beta shock")
    {
        const auto s = riemann_solve(ModelParams{0.5, 0.5}, Densities{0.2, 0.1}, Densities{0.5, 0.4});
        REQUIRE(s.waves.size() == 2);
        CHECK(s.waves[0].kind == WaveKind::alpha_fan);
        CHECK(s.waves[1].kind == WaveKind::beta_shock);
    }
    SUBCASE("two fans around a vacancy-rich state")
    {
        const auto s = riemann_solve(ModelParams{0.5, 0.5}, Densities{0.05, 0.6}, Densities{0.6, 0.05});
        REQUIRE(s.waves.size() == 2);
        CHECK(s.waves[0].kind == WaveKind::alpha_fan);
        CHECK(s.waves[1].kind == WaveKind::beta_fan);
        const ZPoint zl = solve_z(ModelParams{0.5, 0.5}, Densities{0.05, 0.6});
        const ZPoint zr = solve_z(ModelParams{0.5, 0.5}, Densities{0.6, 0.05});
        CHECK(s.waves[0].right.z.z_alpha == doctest::Approx(zr.z_alpha));
        CHECK(s.waves[0].right.z.z_beta == doctest::Approx(zl.z_beta));
    }
    SUBCASE("degenerate fan between the two fans")
    {
        const ModelParams p{0.9, 0.9};
        const auto s = riemann_solve(p, Densities{0.05, 0.8}, Densities{0.75, 0.05});
        REQUIRE(s.waves.size() == 3);
        CHECK(s.waves[0].kind == WaveKind::alpha_fan);
        CHECK(s.waves[1].kind == WaveKind::degenerate_fan);
        CHECK(s.waves[2].kind == WaveKind::beta_fan);
        const double mid = 0.5 * (s.waves[1].xi_lo + s.waves[1].xi_hi);
        const Densities d = profile_at(s, mid);
        CHECK(d.rho_white == doctest::Approx((1.0 + mid) / 2.0).epsilon(1e-12));
        CHECK(d.rho_black == doctest::Approx((1.0 - mid) / 2.0).epsilon(1e-12));
        if (s.waves[1].xi_lo < 0.0 && s.waves[1].xi_hi > 0.0)
            CHECK(profile_at(s, 0.0).rho_white == doctest::Approx(0.5));
    }
    SUBCASE("no white particles: rate-beta Burgers rarefaction")
    {
        const ModelParams p{0.5, 0.3};
        const auto s = riemann_solve(p, Densities{0.0, 0.9}, Densities{0.0, 0.2});
        for (double xi : grid(-0.5, 0.5, 41))
            CHECK(profile_at(s, xi).rho_black == doctest::Approx(oracle::burgers_profile(0.3, 0.9, 0.2, xi)).epsilon(1e-9));
    }
    SUBCASE("no vacancies: scalar law with the boundary flux")
    {
        const ModelParams p{0.3, 0.4};
        const auto s = riemann_solve(p, Densities{0.05, 0.95}, Densities{0.9, 0.1});
        REQUIRE(s.waves.size() == 3);
        CHECK(s.waves[0].kind == WaveKind::degenerate_fan);
        CHECK(s.waves[1].kind == WaveKind::boundary_shock);
        CHECK(s.waves[1].xi_lo == doctest::Approx(0.3 - 0.4));
        CHECK(s.waves[2].kind == WaveKind::degenerate_fan);
        const auto up = riemann_solve(p, Densities{0.8, 0.2}, Densities{0.4, 0.6});
        REQUIRE(up.waves.size() == 1);
        CHECK(up.waves[0].kind == WaveKind::boundary_shock);
    }
    SUBCASE("singular boundary state is joined by a contact")
    {
        // rho_white = 0 and rho_black > 1/beta: z = (0, 1) for a whole segment
        const ModelParams p{1.5, 2.0};
        const auto s = riemann_solve(p, Densities{0.0, 0.9}, Densities{0.3, 0.2});
        REQUIRE(!s.waves.empty());
        CHECK(s.waves[0].kind == WaveKind::boundary_shock);
        CHECK(s.waves[0].xi_lo == doctest::Approx(-1.0));
        CHECK(profile_at(s, -1.5).rho_black == 0.9);
    }
}

TEST_CASE("solution structure properties")
{
    struct Case
    {
        ModelParams p;
        Densities l, r;
    };
    const std::vector<Case> cases{{{0.5, 0.5}, {0.45, 0.112}, {0.226, 0.665}},
                                  {{0.6, 0.8}, {0.6, 0.35}, {0.1, 0.1}},
                                  {{0.5, 0.5}, {0.2, 0.1}, {0.5, 0.4}},
                                  {{0.5, 0.5}, {0.05, 0.6}, {0.6, 0.05}},
                                  {{0.9, 0.9}, {0.05, 0.8}, {0.75, 0.05}},
                                  {{2.0, 0.4}, {0.3, 0.3}, {0.1, 0.6}},
                                  {{1.5, 2.0}, {0.1, 0.2}, {0.6, 0.1}}};
    const std::vector<double> xs = grid(-1.0, 1.0, 201);
    for (const auto &c : cases)
    {
        const auto s = riemann_solve(c.p, c.l, c.r);
        CAPTURE(c.p.alpha);
        CAPTURE(c.l.rho_white);
        // ordering, shared states, endpoints
        for (std::size_t i = 0; i < s.waves.size(); ++i)
        {
            const Wave &w = s.waves[i];
            CHECK(w.xi_lo <= w.xi_hi);
            if (i > 0)
            {
                CHECK(s.waves[i - 1].xi_hi <= w.xi_lo + 1e-9);
                CHECK(s.waves[i - 1].right.z.z_alpha == doctest::Approx(w.left.z.z_alpha).epsilon(1e-9));
                CHECK(s.waves[i - 1].right.z.z_beta == doctest::Approx(w.left.z.z_beta).epsilon(1e-9));
            }
            if (w.kind == WaveKind::alpha_shock || w.kind == WaveKind::alpha_fan)
                CHECK(w.left.z.z_beta == w.right.z.z_beta);
            if (w.kind == WaveKind::beta_shock || w.kind == WaveKind::beta_fan)
                CHECK(w.left.z.z_alpha == w.right.z.z_alpha);
            if (w.is_shock() && w.kind != WaveKind::boundary_shock)
                CHECK(liu_admissible(w.kind, w.left.z, w.right.z));
            // inside a fan, the state re-solved through solve_z keeps the frozen coordinate
            if (w.kind == WaveKind::alpha_fan || w.kind == WaveKind::beta_fan)
                for (double xi : grid(w.xi_lo, w.xi_hi, 7))
                {
                    const ZPoint z = solve_z(c.p, profile_at(s, xi));
                    if (w.kind == WaveKind::alpha_fan)
                        CHECK(z.z_beta == doctest::Approx(w.left.z.z_beta).epsilon(1e-8));
                    else
                        CHECK(z.z_alpha == doctest::Approx(w.left.z.z_alpha).epsilon(1e-8));
                }
            // continuity at fan edges
            if (w.kind == WaveKind::alpha_fan || w.kind == WaveKind::beta_fan || w.kind == WaveKind::degenerate_fan)
            {
                const Densities a = profile_at(s, w.xi_lo - 1e-12), b = profile_at(s, w.xi_lo + 1e-12);
                CHECK(std::abs(a.rho_white - b.rho_white) <= 1e-8);
                CHECK(std::abs(a.rho_black - b.rho_black) <= 1e-8);
            }
        }
        CHECK(profile_at(s, -1.5).rho_white == c.l.rho_white);
        CHECK(profile_at(s, 1.5).rho_black == c.r.rho_black);
        // sum rule and monotone heights
        const HeightProfile h = height_profile(s, xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            CHECK(h.h_white[i] + h.h_black[i] + h.h_star[i] == doctest::Approx(xs[i] + 1.0).epsilon(1e-8));
            if (i > 0)
                CHECK(h.h_black[i] >= h.h_black[i - 1] - 1e-12);
        }
    }
}

TEST_CASE("heights of a constant solution are linear")
{
    const auto s = riemann_solve(ModelParams{0.5, 0.7}, Densities{0.2, 0.3}, Densities{0.2, 0.3});
    const std::vector<double> u = grid(-1.0, 1.0, 11);
    const HeightProfile h = height_profile(s, u);
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        CHECK(h.h_white[i] == doctest::Approx(0.2 * (u[i] + 1.0)));
        CHECK(h.h_black[i] == doctest::Approx(0.3 * (u[i] + 1.0)));
    }
}

TEST_CASE("heights reproduce the Burgers closed form at unit rates")
{
    const ModelParams p{1.0, 1.0};
    const auto s = riemann_solve(p, Densities{0.0, 1.0}, Densities{0.0, 0.0});
    const std::vector<double> u = grid(-1.0, 1.0, 201);
    const HeightProfile h = height_profile(s, u);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(h.h_black[i] == doctest::Approx(oracle::burgers_height(1.0, 1.0, 0.0, u[i])).epsilon(1e-10));
}

TEST_CASE("JSON output lists the non-constant waves")
{
    nlohmann::json j;
    to_json(j, riemann_solve(ModelParams{0.5, 0.5}, Densities{0.45, 0.112}, Densities{0.226, 0.665}));
    REQUIRE(j["waves"].size() == 2);
    CHECK(j["waves"][0]["kind"] == "alpha_shock");
    CHECK(j["waves"][1]["kind"] == "beta_shock");
    to_json(j, riemann_solve(ModelParams{0.5, 0.5}, Densities{0.3, 0.3}, Densities{0.3, 0.3}));
    CHECK(j["waves"].empty());
}
