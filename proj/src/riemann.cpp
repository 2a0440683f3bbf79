#include "tasep2/riemann.hpp"

#include "tasep2/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace tasep2
{
    namespace
    {
        double det_z(const ModelParams &p, double za, double zb)
        {
            return p.alpha * p.beta * (1.0 - za) * (1.0 - zb) - (1.0 - p.alpha) * (1.0 - p.beta) * za * zb;
        }

        // Denominator of v_beta in closed form; v_alpha uses the mirror image
        // (za <-> zb, alpha <-> beta) with the opposite sign.
        double k_beta(double a, double b, double za, double zb)
        {
            return a * b * (1.0 - zb) * (1.0 - zb) - a * b * za * (1.0 - 2.0 * zb) + b * (b - 1.0) * za * (1.0 - za) +
                   (1.0 - a - b) * za * zb * zb;
        }

        constexpr double pole_eps = 1e-12;

        bool near(double x, double y, double eps) { return std::abs(x - y) < eps; }

        bool interior_for_currents(const ModelParams &p, ZPoint z)
        {
            constexpr double eps = 1e-9;
            return !(near(z.z_alpha, 0.0, eps) || near(z.z_alpha, 1.0, eps) || near(z.z_alpha, p.alpha, eps) ||
                     near(z.z_beta, 0.0, eps) || near(z.z_beta, 1.0, eps) || near(z.z_beta, p.beta, eps) ||
                     near(z.z_alpha + z.z_beta, 1.0, eps));
        }

        bool same_z(ZPoint a, ZPoint b)
        {
            return std::abs(a.z_alpha - b.z_alpha) <= tol::same_coordinate &&
                   std::abs(a.z_beta - b.z_beta) <= tol::same_coordinate;
        }

        bool same_dens(const Densities &a, const Densities &b, double eps)
        {
            return std::abs(a.rho_white - b.rho_white) <= eps && std::abs(a.rho_black - b.rho_black) <= eps;
        }

        ZPoint on_line(Family family, double frozen, double moving)
        {
            return family == Family::alpha ? ZPoint{moving, frozen} : ZPoint{frozen, moving};
        }

        double line_upper(const ModelParams &p, Family family, double frozen)
        {
            const double cap = family == Family::alpha ? z_alpha_max(p) : z_beta_max(p);
            return std::max(0.0, std::min(cap, 1.0 - frozen));
        }

        // densities_from_z, except that at a singular image point the limit taken
        // from the direction of `toward` is returned.
        Densities regular_densities(const ModelParams &p, ZPoint z, ZPoint toward)
        {
            try
            {
                return densities_from_z(p, z);
            }
            catch (const Error &e)
            {
                if (e.code() != ErrorCode::SingularMap)
                    throw;
            }
            const double dx = toward.z_alpha - z.z_alpha, dy = toward.z_beta - z.z_beta;
            const double len = std::hypot(dx, dy);
            if (len == 0.0)
                throw Error(ErrorCode::SingularMap, "no direction to resolve a singular point");
            for (double step : {1e-12, 1e-11, 1e-10, 1e-9})
            {
                const double s = std::min(1.0, step / len);
                try
                {
                    return densities_from_z(p, ZPoint{z.z_alpha + s * dx, z.z_beta + s * dy});
                }
                catch (const Error &e)
                {
                    if (e.code() != ErrorCode::SingularMap)
                        throw;
                }
            }
            throw Error(ErrorCode::SingularMap, "singular point could not be resolved");
        }

        StatePoint line_state(const ModelParams &p, Family family, double frozen, double moving, double toward)
        {
            const ZPoint z = on_line(family, frozen, moving);
            return StatePoint{z, regular_densities(p, z, on_line(family, frozen, toward))};
        }

        bool is_fan(WaveKind k)
        {
            return k == WaveKind::alpha_fan || k == WaveKind::beta_fan || k == WaveKind::degenerate_fan;
        }
    }

    std::string_view to_string(WaveKind kind) noexcept
    {
        switch (kind)
        {
        case WaveKind::alpha_shock: return "alpha_shock";
        case WaveKind::beta_shock: return "beta_shock";
        case WaveKind::boundary_shock: return "boundary_shock";
        case WaveKind::alpha_fan: return "alpha_fan";
        case WaveKind::beta_fan: return "beta_fan";
        case WaveKind::degenerate_fan: return "degenerate_fan";
        case WaveKind::constant: return "constant";
        }
        return "unknown";
    }

    CharSpeeds char_speeds_from_currents(const ModelParams &p, ZPoint z, const Densities &d, const Currents &j)
    {
        const double za = z.z_alpha, zb = z.z_beta;
        if (near(za, 0.0, pole_eps) || near(za, 1.0, pole_eps) || near(za, p.alpha, pole_eps) ||
            near(zb, 0.0, pole_eps) || near(zb, 1.0, pole_eps) || near(zb, p.beta, pole_eps))
            throw Error(ErrorCode::PoleEvaluation, "characteristic speed formula evaluated at a pole");
        const double rs = d.rho_star();
        const double jsum = j.j_white + j.j_black;

        const double a0 = za * za, a1 = (za - 1.0) * (za - 1.0), a2 = (za - p.alpha) * (za - p.alpha);
        const double va = (j.j_white / a0 + j.j_black / a1 - jsum / a2) / (d.rho_white / a0 + d.rho_black / a1 + rs / a2);

        const double b0 = zb * zb, b1 = (zb - 1.0) * (zb - 1.0), b2 = (zb - p.beta) * (zb - p.beta);
        const double vb = (j.j_black / b0 + j.j_white / b1 - jsum / b2) / (d.rho_black / b0 + d.rho_white / b1 + rs / b2);
        return CharSpeeds{va, vb};
    }

    CharSpeeds char_speeds_closed_form(const ModelParams &p, ZPoint z)
    {
        const double a = p.alpha, b = p.beta, za = z.z_alpha, zb = z.z_beta;
        const double det = det_z(p, za, zb);
        const double kb = k_beta(a, b, za, zb);
        const double ka = k_beta(b, a, zb, za);
        const double scale = std::max(1.0, a * b);
        if (std::abs(ka) < pole_eps * scale || std::abs(kb) < pole_eps * scale)
            throw Error(ErrorCode::PoleEvaluation, "characteristic speeds undefined at a corner of D_z");
        const double off = za + zb - 1.0;
        return CharSpeeds{za - zb + (a - za) * off * det / ka, za - zb - (b - zb) * off * det / kb};
    }

    CharSpeeds char_speeds(const ModelParams &p, ZPoint z)
    {
        validate(p);
        if (!in_z_domain(p, z))
            throw Error(ErrorCode::OutOfDomain, "z outside D_z");
        if (interior_for_currents(p, z))
        {
            const Densities d = densities_from_z(p, z);
            return char_speeds_from_currents(p, z, d, currents_from_z(p, z, d));
        }
        return char_speeds_closed_form(p, z);
    }

    double char_speed_along(const ModelParams &p, Family family, double frozen, double moving)
    {
        auto eval = [&](double m) {
            const CharSpeeds v = char_speeds_closed_form(p, on_line(family, frozen, m));
            return family == Family::alpha ? v.v_alpha : v.v_beta;
        };
        try
        {
            return eval(moving);
        }
        catch (const Error &e)
        {
            if (e.code() != ErrorCode::PoleEvaluation)
                throw;
        }
        // linear extrapolation from two points inside the segment, O(step^2)
        const double upper = line_upper(p, family, frozen);
        const double room = std::max(moving, upper - moving);
        const double step = std::min(1e-6, room / 4.0);
        const double dir = (upper - moving) >= moving ? 1.0 : -1.0;
        if (step <= 0.0)
            throw Error(ErrorCode::PoleEvaluation, "degenerate fan line");
        return 2.0 * eval(moving + dir * step) - eval(moving + 2.0 * dir * step);
    }

    StatePoint make_state(const ModelParams &params, const Densities &dens)
    {
        const Densities d = clamp_to_simplex(dens);
        return StatePoint{solve_z(params, d), d};
    }

    double rankine_hugoniot_speed(const ModelParams &p, const StatePoint &minus, const StatePoint &plus)
    {
        const Currents jm = currents_from_z(p, minus.z, minus.dens);
        const Currents jp = currents_from_z(p, plus.z, plus.dens);
        const double dw = plus.dens.rho_white - minus.dens.rho_white;
        const double db = plus.dens.rho_black - minus.dens.rho_black;
        const double djw = jp.j_white - jm.j_white;
        const double djb = jp.j_black - jm.j_black;

        const double big = std::max(std::abs(dw), std::abs(db));
        if (big < 1e-15)
            throw Error(ErrorCode::ZeroJump, "shock between identical densities");

        const bool use_white = std::abs(dw) >= std::abs(db);
        const double speed = use_white ? djw / dw : djb / db;

        // Cross-check with the other component: [J_other] = speed * [rho_other].
        const double d_other = use_white ? db : dw;
        const double dj_other = use_white ? djb : djw;
        const double small = std::abs(d_other);
        double mismatch;
        if (small >= 1e-6 * big)
            mismatch = std::abs(dj_other / d_other - speed) / std::max(1.0, std::abs(speed));
        else
        {
            if (small < 1e-15 && std::abs(dj_other) > tol::hugoniot * big * std::max(1.0, std::abs(speed)))
                throw Error(ErrorCode::ZeroJump, "density jump vanishes while the current jump does not");
            mismatch = std::abs(dj_other - speed * d_other) / big;
        }
        if (mismatch > tol::hugoniot)
        {
            std::ostringstream os;
            os.precision(17);
            os << "Rankine-Hugoniot quotients disagree by " << mismatch;
            throw Error(ErrorCode::HugoniotViolation, os.str());
        }
        return speed;
    }

    double shock_speed(const ModelParams &p, WaveKind kind, double frozen, double z_minus, double z_plus)
    {
        validate(p);
        Family family;
        if (kind == WaveKind::alpha_shock)
            family = Family::alpha;
        else if (kind == WaveKind::beta_shock)
            family = Family::beta;
        else
            throw Error(ErrorCode::OutOfDomain, "shock_speed needs an alpha or beta shock");
        if (z_minus == z_plus)
            throw Error(ErrorCode::ZeroJump, "shock endpoints coincide");
        const StatePoint m = line_state(p, family, frozen, z_minus, z_plus);
        const StatePoint q = line_state(p, family, frozen, z_plus, z_minus);
        return rankine_hugoniot_speed(p, m, q);
    }

    double boundary_shock_speed(const ModelParams &p, double rho_minus, double rho_plus)
    {
        const double jump = rho_plus - rho_minus;
        const double jm = boundary_current(p, BoundaryEdge::star0, rho_minus);
        const double jp = boundary_current(p, BoundaryEdge::star0, rho_plus);
        if (std::abs(jump) < 1e-15)
            throw Error(ErrorCode::ZeroJump, "boundary shock between identical densities");
        return (jp - jm) / jump;
    }

    bool liu_admissible(WaveKind kind, ZPoint z_minus, ZPoint z_plus) noexcept
    {
        switch (kind)
        {
        case WaveKind::alpha_shock: return z_minus.z_alpha > z_plus.z_alpha;
        case WaveKind::beta_shock: return z_minus.z_beta < z_plus.z_beta;
        default: return false;
        }
    }

    double fan_invert(const ModelParams &p, WaveKind kind, double frozen, double xi, double z_from, double z_to)
    {
        Family family;
        if (kind == WaveKind::alpha_fan)
            family = Family::alpha;
        else if (kind == WaveKind::beta_fan)
            family = Family::beta;
        else
            throw Error(ErrorCode::OutOfDomain, "fan_invert needs an alpha or beta fan");

        double lo = std::min(z_from, z_to), hi = std::max(z_from, z_to);
        const double v_lo = char_speed_along(p, family, frozen, lo);
        const double v_hi = char_speed_along(p, family, frozen, hi);
        const double slack = 1e-12;
        if (xi < std::min(v_lo, v_hi) - slack || xi > std::max(v_lo, v_hi) + slack)
        {
            std::ostringstream os;
            os.precision(17);
            os << "xi=" << xi << " outside the fan [" << std::min(v_lo, v_hi) << ", " << std::max(v_lo, v_hi) << "]";
            throw Error(ErrorCode::OutOfFan, os.str());
        }
        if (xi <= std::min(v_lo, v_hi))
            return v_lo <= v_hi ? lo : hi;
        if (xi >= std::max(v_lo, v_hi))
            return v_lo <= v_hi ? hi : lo;

        // v is increasing in z_alpha along an alpha fan and decreasing in z_beta
        // along a beta fan; bisection only needs the sign at the endpoints.
        const bool increasing = v_hi >= v_lo;
        for (int it = 0; it < 200 && hi - lo > 0.25 * tol::fan_bracket * 1e-3; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            const double v = char_speed_along(p, family, frozen, mid);
            if ((v < xi) == increasing)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    double fan_invert(const ModelParams &p, WaveKind kind, double frozen, double xi)
    {
        validate(p);
        const Family family = kind == WaveKind::alpha_fan ? Family::alpha : Family::beta;
        return fan_invert(p, kind, frozen, xi, 0.0, line_upper(p, family, frozen));
    }

    namespace
    {
        Wave make_shock(const ModelParams &p, WaveKind kind, const StatePoint &l, const StatePoint &r)
        {
            Wave w;
            w.kind = kind;
            w.left = l;
            w.right = r;
            if (kind == WaveKind::boundary_shock && l.dens.rho_star() <= 1e-12 && r.dens.rho_star() <= 1e-12)
                w.xi_lo = boundary_shock_speed(p, l.dens.rho_black, r.dens.rho_black);
            else
                w.xi_lo = rankine_hugoniot_speed(p, l, r);
            w.xi_hi = w.xi_lo;
            return w;
        }

        Wave make_fan(const ModelParams &p, WaveKind kind, const StatePoint &l, const StatePoint &r)
        {
            Wave w;
            w.kind = kind;
            w.left = l;
            w.right = r;
            switch (kind)
            {
            case WaveKind::alpha_fan:
                w.xi_lo = char_speed_along(p, Family::alpha, l.z.z_beta, l.z.z_alpha);
                w.xi_hi = char_speed_along(p, Family::alpha, l.z.z_beta, r.z.z_alpha);
                break;
            case WaveKind::beta_fan:
                w.xi_lo = char_speed_along(p, Family::beta, l.z.z_alpha, l.z.z_beta);
                w.xi_hi = char_speed_along(p, Family::beta, l.z.z_alpha, r.z.z_beta);
                break;
            default:
                // rho_white = (1 + xi) / 2 along the vacancy-free fan
                w.xi_lo = 2.0 * l.dens.rho_white - 1.0;
                w.xi_hi = 2.0 * r.dens.rho_white - 1.0;
                break;
            }
            return w;
        }

        StatePoint vacancy_free_state(const ModelParams &p, double rho_black)
        {
            return make_state(p, Densities{1.0 - rho_black, rho_black});
        }

        // Both states without vacancies: a scalar conservation law for rho_black
        // with the concave flux of the rho_star -> 0 edge.
        std::vector<Wave> solve_vacancy_free(const ModelParams &p, double rl, double rr)
        {
            std::vector<Wave> waves;
            if (rl < rr)
            {
                waves.push_back(make_shock(p, WaveKind::boundary_shock, vacancy_free_state(p, rl), vacancy_free_state(p, rr)));
                return waves;
            }
            const double lin_lo = p.beta, lin_hi = 1.0 - p.alpha;
            auto fan = [&](double from, double to) {
                if (from - to > 0.0)
                    waves.push_back(make_fan(p, WaveKind::degenerate_fan, vacancy_free_state(p, from), vacancy_free_state(p, to)));
            };
            if (!(lin_lo < lin_hi))
            {
                fan(rl, rr);
                return waves;
            }
            if (rl > lin_hi)
                fan(rl, std::max(rr, lin_hi));
            const double top = std::min(rl, lin_hi), bottom = std::max(rr, lin_lo);
            if (top > bottom)
                waves.push_back(make_shock(p, WaveKind::boundary_shock, vacancy_free_state(p, top), vacancy_free_state(p, bottom)));
            if (rr < lin_lo)
                fan(std::min(rl, lin_lo), rr);
            return waves;
        }

        void check_structure(const RiemannSolution &sol)
        {
            double prev_hi = -INFINITY;
            for (const Wave &w : sol.waves)
            {
                if (w.xi_lo > w.xi_hi + tol::wave_ordering || w.xi_lo < prev_hi - tol::wave_ordering)
                {
                    std::ostringstream os;
                    os.precision(17);
                    os << to_string(w.kind) << " at [" << w.xi_lo << ", " << w.xi_hi << "] after a wave ending at " << prev_hi;
                    throw Error(ErrorCode::OrderingViolation, os.str());
                }
                if ((w.kind == WaveKind::alpha_shock || w.kind == WaveKind::beta_shock) &&
                    !liu_admissible(w.kind, w.left.z, w.right.z))
                    throw Error(ErrorCode::OrderingViolation, std::string("inadmissible ") + std::string(to_string(w.kind)));
                prev_hi = std::max(prev_hi, w.xi_hi);
            }
        }
    }

    RiemannSolution riemann_solve(const ModelParams &params, const Densities &left, const Densities &right)
    {
        validate(params);
        validate(left);
        validate(right);
        RiemannSolution sol;
        sol.params = params;
        sol.left_state = make_state(params, left);
        sol.right_state = make_state(params, right);
        const StatePoint &L = sol.left_state;
        const StatePoint &R = sol.right_state;

        if (same_dens(L.dens, R.dens, 1e-14))
        {
            Wave w;
            w.kind = WaveKind::constant;
            w.left = L;
            w.right = R;
            sol.waves.push_back(w);
            return sol;
        }

        if (L.dens.rho_star() <= 1e-12 && R.dens.rho_star() <= 1e-12)
        {
            sol.waves = solve_vacancy_free(params, L.dens.rho_black, R.dens.rho_black);
            check_structure(sol);
            return sol;
        }

        const double zaL = L.z.z_alpha, zbL = L.z.z_beta, zaR = R.z.z_alpha, zbR = R.z.z_beta;

        auto state_at = [&](ZPoint z, ZPoint toward) -> StatePoint {
            if (same_z(z, L.z))
                return L;
            if (same_z(z, R.z))
                return R;
            return StatePoint{z, regular_densities(params, z, toward)};
        };

        std::vector<Wave> waves;
        auto push_fan = [&](WaveKind kind, const StatePoint &l, const StatePoint &r) {
            Wave w = make_fan(params, kind, l, r);
            if (w.xi_hi - w.xi_lo >= tol::min_wave_width)
                waves.push_back(w);
        };

        StatePoint cur = L;
        if (std::abs(zaL - zaR) > tol::same_coordinate)
        {
            if (zaL > zaR)
            {
                const StatePoint mid = state_at(ZPoint{zaR, zbL}, L.z);
                waves.push_back(make_shock(params, WaveKind::alpha_shock, cur, mid));
                cur = mid;
            }
            else if (zaR + zbL > 1.0 + tol::degenerate_fan_threshold)
            {
                // The alpha fan leaves D_z before reaching z_alpha^R: it stops on
                // z_alpha + z_beta = 1, a vacancy-free fan follows, then the beta fan.
                const double a_end = 1.0 - zbL;
                const StatePoint fan_end{ZPoint{a_end, zbL}, clamp_to_simplex(Densities{a_end, zbL})};
                if (a_end - zaL > tol::same_coordinate)
                    push_fan(WaveKind::alpha_fan, line_state(params, Family::alpha, zbL, zaL, a_end), fan_end);
                cur = fan_end;
                const StatePoint deg_end{ZPoint{zaR, 1.0 - zaR}, clamp_to_simplex(Densities{zaR, 1.0 - zaR})};
                push_fan(WaveKind::degenerate_fan, cur, deg_end);
                cur = deg_end;
            }
            else
            {
                const StatePoint mid = state_at(ZPoint{zaR, zbL}, L.z);
                push_fan(WaveKind::alpha_fan, line_state(params, Family::alpha, zbL, zaL, zaR),
                         line_state(params, Family::alpha, zbL, zaR, zaL));
                cur = mid;
            }
        }

        const double zb_start = cur.z.z_beta;
        if (zb_start < zbR - tol::same_coordinate)
            waves.push_back(make_shock(params, WaveKind::beta_shock, cur, R));
        else if (zb_start > zbR + tol::same_coordinate)
            push_fan(WaveKind::beta_fan, line_state(params, Family::beta, zaR, zb_start, zbR),
                     line_state(params, Family::beta, zaR, zbR, zb_start));

        // On the singular boundary portions a state can differ from the point
        // a fan (or the other state) reaches with the same z. The difference
        // travels as a contact discontinuity on the boundary.
        const double contact_eps = 1e-9;
        if (waves.empty())
        {
            if (!same_dens(L.dens, R.dens, contact_eps))
                waves.push_back(make_shock(params, WaveKind::boundary_shock, L, R));
        }
        else
        {
            if (is_fan(waves.front().kind) && !same_dens(waves.front().left.dens, L.dens, contact_eps))
                waves.insert(waves.begin(), make_shock(params, WaveKind::boundary_shock, L, waves.front().left));
            if (is_fan(waves.back().kind) && !same_dens(waves.back().right.dens, R.dens, contact_eps))
                waves.push_back(make_shock(params, WaveKind::boundary_shock, waves.back().right, R));
            // outer states exactly as given, not as re-mapped through z
            waves.front().left = L;
            waves.back().right = R;
        }

        sol.waves = std::move(waves);
        check_structure(sol);
        return sol;
    }

    namespace
    {
        Densities fan_density(const ModelParams &p, const Wave &w, double xi)
        {
            switch (w.kind)
            {
            case WaveKind::alpha_fan:
            {
                const double zb = w.left.z.z_beta;
                const double za = fan_invert(p, w.kind, zb, xi, w.left.z.z_alpha, w.right.z.z_alpha);
                const double other = std::abs(za - w.left.z.z_alpha) > std::abs(za - w.right.z.z_alpha)
                                         ? w.left.z.z_alpha
                                         : w.right.z.z_alpha;
                return regular_densities(p, ZPoint{za, zb}, ZPoint{other, zb});
            }
            case WaveKind::beta_fan:
            {
                const double za = w.left.z.z_alpha;
                const double zb = fan_invert(p, w.kind, za, xi, w.left.z.z_beta, w.right.z.z_beta);
                const double other = std::abs(zb - w.left.z.z_beta) > std::abs(zb - w.right.z.z_beta)
                                         ? w.left.z.z_beta
                                         : w.right.z.z_beta;
                return regular_densities(p, ZPoint{za, zb}, ZPoint{za, other});
            }
            case WaveKind::degenerate_fan:
            {
                const double rw = std::clamp(0.5 * (1.0 + xi), w.left.dens.rho_white, w.right.dens.rho_white);
                return Densities{rw, 1.0 - rw};
            }
            default:
                return w.right.dens;
            }
        }
    }

    Densities profile_at(const RiemannSolution &sol, double xi)
    {
        Densities cur = sol.left_state.dens;
        for (const Wave &w : sol.waves)
        {
            if (w.kind == WaveKind::constant)
                continue;
            if (xi < w.xi_lo)
                return cur;
            if (w.is_shock())
            {
                cur = w.right.dens;
                continue;
            }
            if (xi <= w.xi_hi)
                return fan_density(sol.params, w, xi);
            cur = w.right.dens;
        }
        return cur;
    }

    HeightProfile height_profile(const RiemannSolution &sol, std::span<const double> u_grid)
    {
        // 5-point Gauss-Legendre on [-1, 1]
        static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                                     0.9061798459386640};
        static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                       0.2369268850561891, 0.2369268850561891};
        constexpr double max_piece = 0.01;

        std::vector<double> breaks;
        for (const Wave &w : sol.waves)
            if (w.kind != WaveKind::constant)
            {
                breaks.push_back(w.xi_lo);
                breaks.push_back(w.xi_hi);
            }
        std::sort(breaks.begin(), breaks.end());

        std::array<double, 3> acc{0.0, 0.0, 0.0};
        auto integrate_smooth = [&](double a, double b) {
            const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / max_piece)));
            const double h = (b - a) / pieces;
            for (int k = 0; k < pieces; ++k)
            {
                const double c = a + (k + 0.5) * h, half = 0.5 * h;
                for (std::size_t q = 0; q < nodes.size(); ++q)
                {
                    const Densities d = profile_at(sol, c + half * nodes[q]);
                    acc[0] += weights[q] * half * d.rho_white;
                    acc[1] += weights[q] * half * d.rho_black;
                    acc[2] += weights[q] * half * d.rho_star();
                }
            }
        };
        auto integrate = [&](double a, double b) {
            if (b <= a)
                return;
            double x = a;
            for (double br : breaks)
                if (br > x && br < b)
                {
                    integrate_smooth(x, br);
                    x = br;
                }
            integrate_smooth(x, b);
        };

        HeightProfile out;
        out.u.assign(u_grid.begin(), u_grid.end());
        double pos = -1.0;
        for (double u : u_grid)
        {
            integrate(pos, u);
            pos = std::max(pos, u);
            out.h_white.push_back(acc[0]);
            out.h_black.push_back(acc[1]);
            out.h_star.push_back(acc[2]);
        }
        return out;
    }

    namespace
    {
        nlohmann::json state_json(const StatePoint &s)
        {
            return nlohmann::json{{"rho_white", s.dens.rho_white},
                                  {"rho_black", s.dens.rho_black},
                                  {"z_alpha", s.z.z_alpha},
                                  {"z_beta", s.z.z_beta}};
        }
    }

    void to_json(nlohmann::json &out, const RiemannSolution &sol)
    {
        out = nlohmann::json::object();
        out["params"] = {{"alpha", sol.params.alpha}, {"beta", sol.params.beta}};
        out["left"] = state_json(sol.left_state);
        out["right"] = state_json(sol.right_state);
        auto waves = nlohmann::json::array();
        for (const Wave &w : sol.waves)
        {
            if (w.kind == WaveKind::constant)
                continue;
            waves.push_back({{"kind", std::string(to_string(w.kind))},
                             {"xi_lo", w.xi_lo},
                             {"xi_hi", w.xi_hi},
                             {"left", state_json(w.left)},
                             {"right", state_json(w.right)}});
        }
        out["waves"] = std::move(waves);
    }
}
