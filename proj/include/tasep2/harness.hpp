#pragma once

// Experiment orchestration: prediction from the Riemann solver, simulation
// replicas, and grid-aligned comparison of the two.

#include "tasep2/height.hpp"
#include "tasep2/kmc.hpp"
#include "tasep2/riemann.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tasep2::harness
{
    struct UGrid
    {
        double lo = -1.0;
        double hi = 1.0;
        int points = 401;

        std::vector<double> values() const;
    };

    struct ExperimentConfig
    {
        std::string name = "run";
        ModelParams params;
        Densities dens_left;
        Densities dens_right;
        int half_width = 1100;
        double t_max = 500.0;
        std::vector<std::uint64_t> seeds;
        std::vector<double> measurement_times; ///< empty means {t_max}
        UGrid grid;                            ///< grid for predicted profiles
        std::filesystem::path output_dir = ".";

        std::vector<double> times() const;
        kmc::SimConfig sim_config(std::uint64_t seed) const;
    };

    /// Throws Error(ConfigError) naming the offending field.
    ExperimentConfig config_from_json(const nlohmann::json &j);
    nlohmann::json config_to_json(const ExperimentConfig &config);

    /// Parses a JSON document; syntax errors report line and column.
    ExperimentConfig parse_config(const std::string &text);
    ExperimentConfig load_config(const std::filesystem::path &path);

    /// Validates every component rule. `need_seeds` for simulate/compare.
    /// Returns a non-empty warning when the boundaries may reach the window.
    std::string validate(const ExperimentConfig &config, bool need_seeds);

    /// Fixed 17-significant-digit formatting used in every CSV.
    std::string format_number(double x);

    void write_heights_csv(std::ostream &out, const HeightProfile &h);
    void write_density_csv(std::ostream &out, const RiemannSolution &sol, const std::vector<double> &xi);

    struct PredictOutput
    {
        RiemannSolution solution;
        HeightProfile heights;
        std::vector<std::filesystem::path> files;
    };

    /// Writes <name>_density.csv, <name>_heights.csv and <name>_solution.json.
    PredictOutput cmd_predict(const ExperimentConfig &config);

    struct SimulateOutput
    {
        std::vector<kmc::ReplicaResult> replicas; ///< in seed order
        std::vector<HeightProfile> mean;           ///< one per measurement time
        std::vector<std::filesystem::path> files;
    };

    /// Runs one replica per seed and writes per-seed and mean height CSVs.
    SimulateOutput run_simulation(const ExperimentConfig &config, unsigned threads);
    SimulateOutput cmd_simulate(const ExperimentConfig &config, unsigned threads);

    struct SpeciesError
    {
        double linf = 0.0;
        double l1 = 0.0;
        double seed_spread = 0.0; ///< standard deviation across seeds of the per-seed L-infinity error
    };

    struct ComparisonReport
    {
        double t = 0.0;
        int n_seeds = 0;
        SpeciesError white;
        SpeciesError black;
        SpeciesError star;
        nlohmann::json waves;

        double max_linf() const noexcept;
    };

    nlohmann::json to_json(const ComparisonReport &report);

    /// Grid-aligned errors between a prediction and per-seed empirical
    /// profiles. GridMismatch unless every profile shares the prediction's grid.
    ComparisonReport compare_profiles(const HeightProfile &predicted, const std::vector<HeightProfile> &per_seed,
                                      const RiemannSolution &solution);

    void write_overlay_csv(std::ostream &out, const HeightProfile &predicted, const HeightProfile &empirical);

    struct CompareOutput
    {
        std::vector<ComparisonReport> reports; ///< one per measurement time
        std::vector<std::filesystem::path> files;
    };

    /// Simulates, predicts on the empirical grid, and writes <name>_report.json
    /// plus one overlay CSV per measurement time.
    CompareOutput cmd_compare(const ExperimentConfig &config, unsigned threads);

    /// Exact ring currents as a small text table.
    void cmd_ring(std::ostream &out, const std::string &alpha, const std::string &beta, int m_white, int m_black,
                  int m_star);

    /// Quick internal consistency checks; prints one line per check.
    bool self_test(std::ostream &out);
}
