#include "tasep2/errors.hpp"
#include "tasep2/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace
{
    using namespace tasep2;
    using harness::ExperimentConfig;

    constexpr int exit_ok = 0;
    constexpr int exit_runtime = 1;
    constexpr int exit_config = 2;
    constexpr int exit_assert = 3;

    struct Overrides
    {
        std::string config_path;
        std::optional<std::string> name;
        std::optional<double> alpha, beta, t_max;
        std::vector<double> left, right, times;
        std::optional<int> half_width, points, seed_count;
        std::vector<std::uint64_t> seeds;
        std::optional<std::string> output_dir;
        bool full_scale = false;

        void add_to(CLI::App *cmd, bool simulation)
        {
            cmd->add_option("-c,--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
            cmd->add_option("--name", name, "output file stem");
            cmd->add_option("--alpha", alpha, "rate of  star white -> white star");
            cmd->add_option("--beta", beta, "rate of  black star -> star black");
            cmd->add_option("--left", left, "left densities rho_white,rho_black")->delimiter(',')->expected(2);
            cmd->add_option("--right", right, "right densities rho_white,rho_black")->delimiter(',')->expected(2);
            cmd->add_option("--points", points, "points of the predicted u grid");
            cmd->add_option("-o,--out", output_dir, "output directory");
            if (!simulation)
                return;
            cmd->add_option("-L,--half-width", half_width, "lattice sites -L .. L-1");
            cmd->add_option("-t,--t-max", t_max, "final time");
            cmd->add_option("--times", times, "measurement times")->delimiter(',');
            cmd->add_option("--seeds", seeds, "explicit seed list")->delimiter(',');
            cmd->add_option("--seed-count", seed_count, "use seeds 1..N");
            cmd->add_flag("--full-scale", full_scale, "L = 2100, t = 2000");
        }

        ExperimentConfig build() const
        {
            ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : harness::load_config(config_path);
            if (full_scale)
            {
                c.half_width = 2100;
                c.t_max = 2000.0;
                c.measurement_times.clear();
            }
            if (name)
                c.name = *name;
            if (alpha)
                c.params.alpha = *alpha;
            if (beta)
                c.params.beta = *beta;
            if (left.size() == 2)
                c.dens_left = Densities{left[0], left[1]};
            if (right.size() == 2)
                c.dens_right = Densities{right[0], right[1]};
            if (half_width)
                c.half_width = *half_width;
            if (t_max)
            {
                c.t_max = *t_max;
                if (times.empty())
                    c.measurement_times.clear();
            }
            if (!times.empty())
                c.measurement_times = times;
            if (points)
                c.grid.points = *points;
            if (!seeds.empty())
                c.seeds = seeds;
            if (seed_count)
            {
                if (*seed_count < 1)
                    throw Error(ErrorCode::ConfigError, "--seed-count must be positive");
                c.seeds.clear();
                for (int s = 1; s <= *seed_count; ++s)
                    c.seeds.push_back(static_cast<std::uint64_t>(s));
            }
            if (output_dir)
                c.output_dir = *output_dir;
            return c;
        }
    };

    void warn(const std::string &w)
    {
        if (!w.empty())
            std::cerr << "warning: " << w << '\n';
    }

    void list_files(const std::vector<std::filesystem::path> &files)
    {
        for (const auto &f : files)
            std::cout << "wrote " << f.string() << '\n';
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Two-species TASEP: hydrodynamic predictions, simulation and exact ring currents"};
    app.require_subcommand(1);

    Overrides predict_opts, simulate_opts, compare_opts;
    auto *predict = app.add_subcommand("predict", "solve the Riemann problem and write profiles");
    predict_opts.add_to(predict, false);

    auto *simulate = app.add_subcommand("simulate", "run simulation replicas and write height profiles");
    simulate_opts.add_to(simulate, true);

    auto *compare = app.add_subcommand("compare", "simulate, predict and report the height errors");
    compare_opts.add_to(compare, true);
    std::optional<double> assert_tol;
    compare->add_option("--assert", assert_tol, "exit with 3 if any species L-infinity error exceeds this");

    auto *ring_cmd = app.add_subcommand("ring-currents", "exact currents on a finite ring");
    std::string ring_alpha = "1", ring_beta = "1";
    std::vector<int> ring_counts;
    ring_cmd->add_option("--alpha", ring_alpha, "rate alpha as p/q")->required();
    ring_cmd->add_option("--beta", ring_beta, "rate beta as p/q")->required();
    ring_cmd->add_option("--counts", ring_counts, "particle numbers white,black,star")
        ->delimiter(',')
        ->expected(3)
        ->required();

    auto *self_test = app.add_subcommand("self-test", "quick consistency checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    const unsigned threads = kmc::thread_count_from_env();
    try
    {
        if (*predict)
        {
            const ExperimentConfig c = predict_opts.build();
            const auto out = harness::cmd_predict(c);
            nlohmann::json j;
            to_json(j, out.solution);
            std::cout << j["waves"].size() << " waves\n";
            list_files(out.files);
        }
        else if (*simulate)
        {
            const ExperimentConfig c = simulate_opts.build();
            warn(harness::validate(c, true));
            list_files(harness::cmd_simulate(c, threads).files);
        }
        else if (*compare)
        {
            const ExperimentConfig c = compare_opts.build();
            warn(harness::validate(c, true));
            const auto out = harness::cmd_compare(c, threads);
            list_files(out.files);
            bool ok = true;
            for (const auto &r : out.reports)
            {
                std::cout << "t=" << harness::format_number(r.t) << "  Linf white " << r.white.linf << "  black "
                          << r.black.linf << "  star " << r.star.linf << '\n';
                if (assert_tol && !(r.max_linf() <= *assert_tol))
                    ok = false;
            }
            if (!ok)
            {
                std::cerr << "comparison exceeds tolerance " << *assert_tol << '\n';
                return exit_assert;
            }
        }
        else if (*ring_cmd)
        {
            harness::cmd_ring(std::cout, ring_alpha, ring_beta, ring_counts.at(0), ring_counts.at(1), ring_counts.at(2));
        }
        else if (*self_test)
        {
            return harness::self_test(std::cout) ? exit_ok : exit_runtime;
        }
    }
    catch (const Error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        const bool config = e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::OutOfDomain;
        return config ? exit_config : exit_runtime;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_ok;
}
