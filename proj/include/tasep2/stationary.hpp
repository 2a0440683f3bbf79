#pragma once

// Stationary state of the two-species TASEP in the thermodynamic limit.
//
// The model: on a one-dimensional lattice every site holds a black particle
// (moves right), a white particle (moves left) or a vacancy ("star").
//
//     black star  -> star black    rate beta
//     star white  -> white star    rate alpha
//     black white -> white black   rate 1
//
// The stationary currents are not explicit in the densities; they are explicit
// in the auxiliary coordinates (z_alpha, z_beta), which are also the Riemann
// invariants of the hydrodynamic equations. This header provides the maps
// between the two coordinate systems and the current formulas.

#include <utility>

namespace tasep2
{
    namespace tol
    {
        inline constexpr double root_residual = 1e-12;
        inline constexpr double consistency = 1e-10;
        inline constexpr double domain_slack = 1e-9;
        /// |alpha + beta - 1| below this counts as the factorized line.
        inline constexpr double factorized_line = 1e-12;
    }

    struct ModelParams
    {
        double alpha = 1.0; ///< rate of  star white -> white star
        double beta = 1.0;  ///< rate of  black star -> star black
    };

    struct Densities
    {
        double rho_white = 0.0;
        double rho_black = 0.0;

        double rho_star() const noexcept { return 1.0 - rho_white - rho_black; }
    };

    struct ZPoint
    {
        double z_alpha = 0.0;
        double z_beta = 0.0;
    };

    struct Currents
    {
        double j_white = 0.0;
        double j_black = 0.0;
        double j_star = 0.0;
    };

    /// Throws OutOfDomain unless both rates are finite and positive.
    void validate(const ModelParams &params);

    /// Throws OutOfDomain for densities outside the simplex (with domain_slack).
    void validate(const Densities &dens);

    /// Densities pulled back onto the simplex when they lie within domain_slack.
    Densities clamp_to_simplex(Densities dens);

    /// Upper bound of z_alpha, i.e. min(1, alpha); likewise for z_beta.
    double z_alpha_max(const ModelParams &params) noexcept;
    double z_beta_max(const ModelParams &params) noexcept;

    /// Membership in D_z: 0 <= z_a <= min(1,a), 0 <= z_b <= min(1,b), z_a + z_b <= 1.
    bool in_z_domain(const ModelParams &params, ZPoint z, double slack = tol::domain_slack) noexcept;

    /// Cleared-denominator saddle polynomials
    ///   rho_w (z-1)(z-alpha) + rho_b z (z-alpha) + rho_s z (z-1)
    /// and its mirror image for z_beta. Both vanish at the z returned by solve_z.
    double saddle_polynomial_alpha(const ModelParams &params, const Densities &dens, double z) noexcept;
    double saddle_polynomial_beta(const ModelParams &params, const Densities &dens, double z) noexcept;

    ZPoint solve_z(const ModelParams &params, const Densities &dens);

    /// Intersection of the two lines that a fixed z defines in the density plane.
    /// Throws SingularMap where a whole boundary segment collapses onto z.
    Densities densities_from_z(const ModelParams &params, ZPoint z);

    /// Stationary currents at a consistent (z, densities) pair. Passing the
    /// densities explicitly keeps the formulas valid on the singular boundary
    /// portions, where z alone does not determine the state.
    Currents currents_from_z(const ModelParams &params, ZPoint z, const Densities &dens) noexcept;

    /// Left-hand sides of the linear system satisfied by (J_white, J_black) at fixed z.
    /// Throws PoleEvaluation if z_alpha is in {0, 1, alpha} or z_beta in {0, 1, beta}.
    std::pair<double, double> currents_residual(const ModelParams &params, ZPoint z, const Currents &j);

    enum class BoundaryEdge
    {
        white0, ///< rho_white -> 0; argument is rho_black, returns J_black
        black0, ///< rho_black -> 0; argument is rho_white, returns J_white
        star0,  ///< rho_star -> 0;  argument is rho_black, returns J_black
    };

    double boundary_current(const ModelParams &params, BoundaryEdge which, double rho);

    enum class Tracer
    {
        white_in_black0, ///< single white particle among black ones and vacancies; argument rho_black
        black_in_white0, ///< single black particle; argument rho_white
        star_on_full,    ///< single vacancy in a full lattice; argument rho_black
    };

    double tracer_speed(const ModelParams &params, Tracer which, double rho);

    /// Closed-form currents on the line alpha + beta = 1, where the stationary
    /// measure is a product measure. Throws NotOnFactorizedLine otherwise.
    Currents factorized_currents(const ModelParams &params, const Densities &dens);

    struct LerouxState
    {
        double rho = 0.0;
        double v = 0.0;
    };

    /// Affine change of variables to the conserved pair (rho, v) of the Leroux
    /// system. Only defined on alpha + beta = 1.
    LerouxState leroux_coordinates(const ModelParams &params, const Densities &dens);

    /// Linear part of the same change of variables applied to a current pair.
    LerouxState leroux_currents(const ModelParams &params, const Currents &j);
}
