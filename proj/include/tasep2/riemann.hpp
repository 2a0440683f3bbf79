#pragma once

// Hydrodynamics of the two-species TASEP in Riemann coordinates: characteristic
// speeds, shocks, rarefaction fans, and the self-similar solution of the
// Riemann problem with two constant states separated at the origin.

#include "tasep2/height.hpp"
#include "tasep2/stationary.hpp"

#include <json.hpp>

#include <span>
#include <string_view>
#include <vector>

namespace tasep2
{
    namespace tol
    {
        inline constexpr double hugoniot = 1e-9;
        inline constexpr double fan_bracket = 1e-12;
        inline constexpr double fan_residual = 1e-10;
        inline constexpr double degenerate_fan_threshold = 1e-12;
        inline constexpr double min_wave_width = 1e-10;
        inline constexpr double same_coordinate = 1e-12;
        inline constexpr double wave_ordering = 1e-9;
    }

    struct CharSpeeds
    {
        double v_alpha = 0.0;
        double v_beta = 0.0;
    };

    enum class Family
    {
        alpha,
        beta,
    };

    /// Eigenvalues of dJ/drho written through the currents:
    ///   v_alpha = (Jw/za^2 + Jb/(za-1)^2 - (Jw+Jb)/(za-alpha)^2)
    ///           / (rw/za^2 + rb/(za-1)^2 + rs/(za-alpha)^2)
    /// and the mirror expression for v_beta. Throws PoleEvaluation when a
    /// coordinate sits on 0, 1 or its rate.
    CharSpeeds char_speeds_from_currents(const ModelParams &params, ZPoint z, const Densities &dens,
                                         const Currents &j);

    /// Same speeds as explicit rational functions of z, which stay finite on the
    /// boundary of D_z except at its corners (PoleEvaluation there).
    CharSpeeds char_speeds_closed_form(const ModelParams &params, ZPoint z);

    /// Speeds at z: the current-based formula in the interior, the closed form on
    /// the boundary. Throws PoleEvaluation at the corners of D_z.
    CharSpeeds char_speeds(const ModelParams &params, ZPoint z);

    /// Speed of one family restricted to the line where the other coordinate is
    /// frozen. Corner singularities are resolved by the limit along that line.
    double char_speed_along(const ModelParams &params, Family family, double frozen, double moving);

    enum class WaveKind
    {
        alpha_shock,
        beta_shock,
        boundary_shock,
        alpha_fan,
        beta_fan,
        degenerate_fan,
        constant,
    };

    std::string_view to_string(WaveKind kind) noexcept;

    /// A point in state space carried in both coordinate systems. On the
    /// singular boundary portions z does not determine the densities.
    struct StatePoint
    {
        ZPoint z;
        Densities dens;
    };

    StatePoint make_state(const ModelParams &params, const Densities &dens);

    struct Wave
    {
        WaveKind kind = WaveKind::constant;
        double xi_lo = 0.0;
        double xi_hi = 0.0;
        StatePoint left;
        StatePoint right;

        bool is_shock() const noexcept
        {
            return kind == WaveKind::alpha_shock || kind == WaveKind::beta_shock || kind == WaveKind::boundary_shock;
        }
    };

    struct RiemannSolution
    {
        ModelParams params;
        StatePoint left_state;
        StatePoint right_state;
        std::vector<Wave> waves;
    };

    /// Rankine-Hugoniot speed between two states. Both quotients [Jw]/[rw] and
    /// [Jb]/[rb] are evaluated; the better conditioned one is returned and the
    /// other must agree (HugoniotViolation otherwise).
    double rankine_hugoniot_speed(const ModelParams &params, const StatePoint &minus, const StatePoint &plus);

    /// Speed of an alpha shock (z_beta = frozen) or beta shock (z_alpha = frozen)
    /// between the given values of the moving coordinate.
    double shock_speed(const ModelParams &params, WaveKind kind, double frozen, double z_minus, double z_plus);

    /// Shock between two vacancy-free states, with the black current of the rho_star -> 0 edge.
    double boundary_shock_speed(const ModelParams &params, double rho_black_minus, double rho_black_plus);

    /// Liu entropy condition: alpha shocks need z_alpha decreasing left to right,
    /// beta shocks need z_beta increasing.
    bool liu_admissible(WaveKind kind, ZPoint z_minus, ZPoint z_plus) noexcept;

    /// Moving coordinate of a fan at self-similar position xi, with the bracket
    /// being the full extent of the fan line inside D_z. Throws OutOfFan.
    double fan_invert(const ModelParams &params, WaveKind kind, double frozen, double xi);

    /// Same, restricted to the moving-coordinate interval [z_from, z_to] (either order).
    double fan_invert(const ModelParams &params, WaveKind kind, double frozen, double xi, double z_from, double z_to);

    RiemannSolution riemann_solve(const ModelParams &params, const Densities &left, const Densities &right);

    Densities profile_at(const RiemannSolution &sol, double xi);

    /// h_i(u) = integral of rho_i over [-1, u]; u_grid must be sorted.
    HeightProfile height_profile(const RiemannSolution &sol, std::span<const double> u_grid);

    void to_json(nlohmann::json &out, const RiemannSolution &sol);
}
