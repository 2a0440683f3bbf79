#include "tasep2/stationary.hpp"

#include "tasep2/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tasep2
{
    namespace
    {
        std::string describe(const Densities &d)
        {
            std::ostringstream os;
            os.precision(17);
            os << "(rho_white=" << d.rho_white << ", rho_black=" << d.rho_black << ")";
            return os.str();
        }

        // Root of the saddle equation for one Riemann coordinate.
        //   own   : density of the species whose coordinate this is (rho_white for z_alpha)
        //   other : density of the opposite species
        // The monic cleared form is  z^2 - (own (1+g) + other g + star) z + own g.
        double saddle_root(double g, double own, double other, double star)
        {
            const double upper = std::min(1.0, g);

            if (own == 0.0)
                return 0.0;
            if (g == 1.0)
                return own; // (z - 1)(z - own)
            if (star == 0.0)
                return std::min(g, own); // (z - g)(z - own)
            if (other == 0.0)
                return std::min(1.0, g * own); // (z - 1)(z - g own)

            const double b = own * (1.0 + g) + other * g + star;
            const double c = own * g;
            double disc = b * b - 4.0 * c;
            if (disc < 0.0)
            {
                if (disc < -1e-14)
                    throw Error(ErrorCode::DegenerateInput, "complex saddle roots");
                disc = 0.0;
            }
            const double sq = std::sqrt(disc);
            // Smaller root without cancellation; b > 0 here.
            const double root = 2.0 * c / (b + sq);

            auto poly = [&](double z) { return (z - b) * z + c; };
            if (poly(upper) > tol::root_residual)
                throw Error(ErrorCode::DegenerateInput, "no sign change of the saddle polynomial on [0, min(1, rate)]");
            if (sq < 1e-9 && root > 1e-9 && root < upper - 1e-9)
                throw Error(ErrorCode::DegenerateInput, "double saddle root strictly inside the interval");
            return std::clamp(root, 0.0, upper);
        }
    }

    void validate(const ModelParams &params)
    {
        if (!(std::isfinite(params.alpha) && params.alpha > 0.0 && std::isfinite(params.beta) && params.beta > 0.0))
            throw Error(ErrorCode::OutOfDomain, "rates alpha and beta must be finite and positive");
    }

    void validate(const Densities &dens)
    {
        const double s = tol::domain_slack;
        if (!(std::isfinite(dens.rho_white) && std::isfinite(dens.rho_black)) || dens.rho_white < -s ||
            dens.rho_black < -s || dens.rho_white + dens.rho_black > 1.0 + s)
            throw Error(ErrorCode::OutOfDomain, "densities outside the simplex " + describe(dens));
    }

    Densities clamp_to_simplex(Densities dens)
    {
        dens.rho_white = std::max(0.0, dens.rho_white);
        dens.rho_black = std::max(0.0, dens.rho_black);
        const double sum = dens.rho_white + dens.rho_black;
        if (sum > 1.0)
        {
            dens.rho_white /= sum;
            dens.rho_black /= sum;
        }
        return dens;
    }

    double z_alpha_max(const ModelParams &params) noexcept { return std::min(1.0, params.alpha); }
    double z_beta_max(const ModelParams &params) noexcept { return std::min(1.0, params.beta); }

    bool in_z_domain(const ModelParams &params, ZPoint z, double slack) noexcept
    {
        return z.z_alpha >= -slack && z.z_beta >= -slack && z.z_alpha <= z_alpha_max(params) + slack &&
               z.z_beta <= z_beta_max(params) + slack && z.z_alpha + z.z_beta <= 1.0 + slack;
    }

    double saddle_polynomial_alpha(const ModelParams &params, const Densities &dens, double z) noexcept
    {
        const double a = params.alpha;
        return dens.rho_white * (z - 1.0) * (z - a) + dens.rho_black * z * (z - a) + dens.rho_star() * z * (z - 1.0);
    }

    double saddle_polynomial_beta(const ModelParams &params, const Densities &dens, double z) noexcept
    {
        const double b = params.beta;
        return dens.rho_black * (z - 1.0) * (z - b) + dens.rho_white * z * (z - b) + dens.rho_star() * z * (z - 1.0);
    }

    ZPoint solve_z(const ModelParams &params, const Densities &input)
    {
        validate(params);
        validate(input);
        const Densities d = clamp_to_simplex(input);
        const double star = std::max(0.0, d.rho_star());
        return ZPoint{saddle_root(params.alpha, d.rho_white, d.rho_black, star),
                      saddle_root(params.beta, d.rho_black, d.rho_white, star)};
    }

    Densities densities_from_z(const ModelParams &params, ZPoint z)
    {
        validate(params);
        if (!in_z_domain(params, z))
            throw Error(ErrorCode::OutOfDomain, "z outside D_z");
        const double a = params.alpha, b = params.beta;
        const double za = std::max(0.0, z.z_alpha), zb = std::max(0.0, z.z_beta);

        // Line l_alpha:  a (1-za) rho_w + (1-a) za rho_b = za (1-za)
        // Line l_beta :  (1-b) zb rho_w + b (1-zb) rho_b = zb (1-zb)
        const double det = a * b * (1.0 - za) * (1.0 - zb) - (1.0 - a) * (1.0 - b) * za * zb;
        if (std::abs(det) <= 1e-13 * std::max(1.0, a * b))
            throw Error(ErrorCode::SingularMap, "z is the image of a whole boundary segment");

        Densities out;
        out.rho_white = za * (1.0 - zb) * (b * (1.0 - za) - (1.0 - a) * zb) / det;
        out.rho_black = zb * (1.0 - za) * (a * (1.0 - zb) - (1.0 - b) * za) / det;
        validate(out);
        return clamp_to_simplex(out);
    }

    Currents currents_from_z(const ModelParams &, ZPoint z, const Densities &dens) noexcept
    {
        const double za = z.z_alpha, zb = z.z_beta;
        Currents j;
        j.j_white = za * (zb - 1.0) + dens.rho_white * (za - zb);
        j.j_black = zb * (1.0 - za) + dens.rho_black * (za - zb);
        j.j_star = dens.rho_star() * (za - zb);
        return j;
    }

    std::pair<double, double> currents_residual(const ModelParams &params, ZPoint z, const Currents &j)
    {
        const double eps = 1e-12;
        const double za = z.z_alpha, zb = z.z_beta;
        if (std::abs(za) < eps || std::abs(za - 1.0) < eps || std::abs(za - params.alpha) < eps ||
            std::abs(zb) < eps || std::abs(zb - 1.0) < eps || std::abs(zb - params.beta) < eps)
            throw Error(ErrorCode::PoleEvaluation, "z at a pole of the current equations");
        const double sum = j.j_white + j.j_black;
        const double r0 = j.j_white / za + j.j_black / (za - 1.0) - sum / (za - params.alpha) + 1.0;
        const double r1 = j.j_black / zb + j.j_white / (zb - 1.0) - sum / (zb - params.beta) - 1.0;
        return {r0, r1};
    }

    double boundary_current(const ModelParams &params, BoundaryEdge which, double rho)
    {
        validate(params);
        const double a = params.alpha, b = params.beta;
        switch (which)
        {
        case BoundaryEdge::white0:
            return rho * b <= 1.0 ? b * rho * (1.0 - rho) : 1.0 - rho;
        case BoundaryEdge::black0:
            return rho * a <= 1.0 ? -a * rho * (1.0 - rho) : -(1.0 - rho);
        case BoundaryEdge::star0:
            if (rho >= b && rho <= 1.0 - a)
                return b * (1.0 - a) + (a - b) * rho;
            return rho * (1.0 - rho);
        }
        return 0.0;
    }

    double tracer_speed(const ModelParams &params, Tracer which, double rho)
    {
        validate(params);
        const double a = params.alpha, b = params.beta;
        switch (which)
        {
        case Tracer::white_in_black0:
            if (rho * b >= 1.0)
                return -1.0;
            return -(a + b * (1.0 - a) * rho * (1.0 - rho)) / (1.0 + (a - 1.0) * rho) - b * rho;
        case Tracer::black_in_white0:
            if (rho * a >= 1.0)
                return 1.0;
            return (b + a * (1.0 - b) * rho * (1.0 - rho)) / (1.0 + (b - 1.0) * rho) - a * rho;
        case Tracer::star_on_full:
        {
            const double za = rho <= 1.0 - a ? a : 1.0 - rho;
            const double zb = rho >= b ? b : rho;
            return za - zb;
        }
        }
        return 0.0;
    }

    namespace
    {
        void require_factorized(const ModelParams &params)
        {
            validate(params);
            if (std::abs(params.alpha + params.beta - 1.0) > tol::factorized_line)
                throw Error(ErrorCode::NotOnFactorizedLine, "alpha + beta != 1");
        }
    }

    Currents factorized_currents(const ModelParams &params, const Densities &dens)
    {
        require_factorized(params);
        const double rs = dens.rho_star();
        Currents j;
        // A white particle advances by swapping with a black neighbour (rate 1) or
        // a vacancy (rate alpha) on its left; under the product measure these are independent.
        j.j_white = -dens.rho_white * (dens.rho_black + params.alpha * rs);
        j.j_black = dens.rho_black * (dens.rho_white + params.beta * rs);
        j.j_star = -j.j_white - j.j_black;
        return j;
    }

    LerouxState leroux_coordinates(const ModelParams &params, const Densities &dens)
    {
        require_factorized(params);
        const double a = params.alpha, b = params.beta;
        LerouxState s = leroux_currents(params, Currents{dens.rho_white, dens.rho_black, 0.0});
        s.rho += (2.0 * a + b) * (2.0 * b + a) / 9.0;
        s.v += (b - a) / 3.0;
        return s;
    }

    LerouxState leroux_currents(const ModelParams &params, const Currents &j)
    {
        require_factorized(params);
        const double a = params.alpha, b = params.beta;
        return LerouxState{-a * (a + 2.0 * b) / 3.0 * j.j_white - b * (a + 2.0 * b) / 3.0 * j.j_black,
                           a * j.j_white - b * j.j_black};
    }
}
