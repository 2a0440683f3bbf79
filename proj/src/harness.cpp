#include "tasep2/harness.hpp"

#include "tasep2/errors.hpp"
#include "tasep2/ring_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace tasep2::harness
{
    std::vector<double> UGrid::values() const
    {
        std::vector<double> u(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i)
            u[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
        return u;
    }

    std::vector<double> ExperimentConfig::times() const
    {
        return measurement_times.empty() ? std::vector<double>{t_max} : measurement_times;
    }

    kmc::SimConfig ExperimentConfig::sim_config(std::uint64_t seed) const
    {
        kmc::SimConfig s;
        s.params = params;
        s.half_width = half_width;
        s.dens_left = dens_left;
        s.dens_right = dens_right;
        s.t_max = t_max;
        s.seed = seed;
        s.measurement_times = times();
        return s;
    }

    namespace
    {
        [[noreturn]] void config_error(const std::string &field, const std::string &msg)
        {
            throw Error(ErrorCode::ConfigError, "field '" + field + "': " + msg);
        }

        template <class T>
        T get_field(const nlohmann::json &j, const std::string &path)
        {
            try
            {
                return j.get<T>();
            }
            catch (const nlohmann::json::exception &)
            {
                config_error(path, "wrong type (" + std::string(j.type_name()) + ")");
            }
        }

        Densities densities_field(const nlohmann::json &j, const std::string &path)
        {
            if (!j.is_object())
                config_error(path, "expected an object with rho_white and rho_black");
            Densities d;
            for (auto it = j.begin(); it != j.end(); ++it)
            {
                if (it.key() == "rho_white")
                    d.rho_white = get_field<double>(it.value(), path + ".rho_white");
                else if (it.key() == "rho_black")
                    d.rho_black = get_field<double>(it.value(), path + ".rho_black");
                else
                    config_error(path + "." + it.key(), "unknown field");
            }
            return d;
        }

        nlohmann::json densities_json(const Densities &d)
        {
            return {{"rho_white", d.rho_white}, {"rho_black", d.rho_black}};
        }

        std::filesystem::path output_file(const ExperimentConfig &c, const std::string &suffix)
        {
            return c.output_dir / (c.name + suffix);
        }

        std::ofstream open_output(const std::filesystem::path &p)
        {
            if (p.has_parent_path())
                std::filesystem::create_directories(p.parent_path());
            std::ofstream out(p, std::ios::binary);
            if (!out)
                throw Error(ErrorCode::ConfigError, "cannot write " + p.string());
            return out;
        }

        std::string time_tag(double t) { return "_t" + format_number(t); }
    }

    ExperimentConfig config_from_json(const nlohmann::json &j)
    {
        if (!j.is_object())
            throw Error(ErrorCode::ConfigError, "configuration must be a JSON object");
        ExperimentConfig c;
        for (auto it = j.begin(); it != j.end(); ++it)
        {
            const std::string &k = it.key();
            const auto &v = it.value();
            if (k == "name")
                c.name = get_field<std::string>(v, k);
            else if (k == "alpha")
                c.params.alpha = get_field<double>(v, k);
            else if (k == "beta")
                c.params.beta = get_field<double>(v, k);
            else if (k == "left")
                c.dens_left = densities_field(v, k);
            else if (k == "right")
                c.dens_right = densities_field(v, k);
            else if (k == "L")
                c.half_width = get_field<int>(v, k);
            else if (k == "t_max")
                c.t_max = get_field<double>(v, k);
            else if (k == "seeds")
                c.seeds = get_field<std::vector<std::uint64_t>>(v, k);
            else if (k == "measurement_times")
                c.measurement_times = get_field<std::vector<double>>(v, k);
            else if (k == "grid")
            {
                if (!v.is_object())
                    config_error(k, "expected an object with lo, hi, points");
                for (auto g = v.begin(); g != v.end(); ++g)
                {
                    if (g.key() == "lo")
                        c.grid.lo = get_field<double>(g.value(), "grid.lo");
                    else if (g.key() == "hi")
                        c.grid.hi = get_field<double>(g.value(), "grid.hi");
                    else if (g.key() == "points")
                        c.grid.points = get_field<int>(g.value(), "grid.points");
                    else
                        config_error("grid." + g.key(), "unknown field");
                }
            }
            else if (k == "output_dir")
                c.output_dir = get_field<std::string>(v, k);
            else
                config_error(k, "unknown field");
        }
        return c;
    }

    nlohmann::json config_to_json(const ExperimentConfig &c)
    {
        return {{"name", c.name},
                {"alpha", c.params.alpha},
                {"beta", c.params.beta},
                {"left", densities_json(c.dens_left)},
                {"right", densities_json(c.dens_right)},
                {"L", c.half_width},
                {"t_max", c.t_max},
                {"seeds", c.seeds},
                {"measurement_times", c.measurement_times},
                {"grid", {{"lo", c.grid.lo}, {"hi", c.grid.hi}, {"points", c.grid.points}}},
                {"output_dir", c.output_dir.string()}};
    }

    ExperimentConfig parse_config(const std::string &text)
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            std::size_t line = 1, col = 1;
            for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            {
                if (text[i] == '\n')
                {
                    ++line;
                    col = 1;
                }
                else
                    ++col;
            }
            throw Error(ErrorCode::ConfigError,
                        "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
        }
        return config_from_json(j);
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::ConfigError, "cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        try
        {
            return parse_config(ss.str());
        }
        catch (const Error &e)
        {
            throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
        }
    }

    std::string validate(const ExperimentConfig &c, bool need_seeds)
    {
        auto wrap = [](auto &&fn) {
            try
            {
                fn();
            }
            catch (const Error &e)
            {
                if (e.code() == ErrorCode::ConfigError)
                    throw;
                throw Error(ErrorCode::ConfigError, e.what());
            }
        };
        if (c.name.empty() || c.name.find('/') != std::string::npos)
            config_error("name", "must be a non-empty file name stem");
        wrap([&] { tasep2::validate(c.params); });
        wrap([&] { tasep2::validate(c.dens_left); });
        wrap([&] { tasep2::validate(c.dens_right); });
        if (c.grid.points < 2 || !(c.grid.lo < c.grid.hi) || c.grid.lo < -1.0 || c.grid.hi > 1.0)
            config_error("grid", "need points >= 2 and -1 <= lo < hi <= 1");
        if (need_seeds && c.seeds.empty())
            config_error("seeds", "at least one seed is required");
        if (std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() != c.seeds.size())
            config_error("seeds", "duplicate seeds");
        std::string warning;
        wrap([&] { kmc::validate(c.sim_config(0), &warning); });
        for (double t : c.times())
            if (t > c.half_width)
                config_error("measurement_times", "t exceeds L, the window would not fit the lattice");
        return warning;
    }

    std::string format_number(double x)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }

    void write_heights_csv(std::ostream &out, const HeightProfile &h)
    {
        out << "u,h_white,h_black,h_star\n";
        for (std::size_t i = 0; i < h.size(); ++i)
            out << format_number(h.u[i]) << ',' << format_number(h.h_white[i]) << ',' << format_number(h.h_black[i])
                << ',' << format_number(h.h_star[i]) << '\n';
    }

    void write_density_csv(std::ostream &out, const RiemannSolution &sol, const std::vector<double> &xi)
    {
        out << "xi,rho_white,rho_black,rho_star\n";
        for (double x : xi)
        {
            const Densities d = profile_at(sol, x);
            out << format_number(x) << ',' << format_number(d.rho_white) << ',' << format_number(d.rho_black) << ','
                << format_number(d.rho_star()) << '\n';
        }
    }

    PredictOutput cmd_predict(const ExperimentConfig &c)
    {
        validate(c, false);
        PredictOutput out;
        out.solution = riemann_solve(c.params, c.dens_left, c.dens_right);
        const std::vector<double> u = c.grid.values();
        out.heights = height_profile(out.solution, u);

        const auto dens_path = output_file(c, "_density.csv");
        {
            auto f = open_output(dens_path);
            write_density_csv(f, out.solution, u);
        }
        const auto heights_path = output_file(c, "_heights.csv");
        {
            auto f = open_output(heights_path);
            write_heights_csv(f, out.heights);
        }
        const auto json_path = output_file(c, "_solution.json");
        {
            nlohmann::json j;
            to_json(j, out.solution);
            auto f = open_output(json_path);
            f << j.dump(2) << '\n';
        }
        out.files = {dens_path, heights_path, json_path};
        return out;
    }

    SimulateOutput run_simulation(const ExperimentConfig &c, unsigned threads)
    {
        validate(c, true);
        SimulateOutput out;
        out.replicas = kmc::run_parallel(
            c.seeds.size(), [&](std::size_t i) { return kmc::simulate_replica(c.sim_config(c.seeds[i]), 0); }, threads);
        const auto times = c.times();
        for (std::size_t k = 0; k < times.size(); ++k)
        {
            std::vector<HeightProfile> at_t;
            for (const auto &r : out.replicas)
                at_t.push_back(r.heights[k]);
            out.mean.push_back(kmc::mean_profile(at_t));
        }
        return out;
    }

    SimulateOutput cmd_simulate(const ExperimentConfig &c, unsigned threads)
    {
        SimulateOutput out = run_simulation(c, threads);
        const auto times = c.times();
        for (std::size_t k = 0; k < times.size(); ++k)
        {
            for (const auto &r : out.replicas)
            {
                const auto p = output_file(c, "_seed" + std::to_string(r.seed) + time_tag(times[k]) + ".csv");
                auto f = open_output(p);
                write_heights_csv(f, r.heights[k]);
                out.files.push_back(p);
            }
            const auto p = output_file(c, "_mean" + time_tag(times[k]) + ".csv");
            auto f = open_output(p);
            write_heights_csv(f, out.mean[k]);
            out.files.push_back(p);
        }
        return out;
    }

    double ComparisonReport::max_linf() const noexcept { return std::max({white.linf, black.linf, star.linf}); }

    nlohmann::json to_json(const ComparisonReport &r)
    {
        auto species = [](const SpeciesError &e) {
            return nlohmann::json{{"linf", e.linf}, {"l1", e.l1}, {"seed_spread", e.seed_spread}};
        };
        return {{"t", r.t},
                {"n_seeds", r.n_seeds},
                {"errors", {{"white", species(r.white)}, {"black", species(r.black)}, {"star", species(r.star)}}},
                {"max_linf", r.max_linf()},
                {"waves", r.waves}};
    }

    namespace
    {
        void require_same_grid(const HeightProfile &a, const HeightProfile &b)
        {
            if (a.u.size() != b.u.size())
                throw Error(ErrorCode::GridMismatch, "grids have different lengths");
            for (std::size_t i = 0; i < a.u.size(); ++i)
                if (std::abs(a.u[i] - b.u[i]) > 1e-12)
                    throw Error(ErrorCode::GridMismatch, "grid points differ at index " + std::to_string(i));
            if (a.h_white.size() != a.u.size() || b.h_white.size() != b.u.size() || a.h_black.size() != a.u.size() ||
                b.h_black.size() != b.u.size() || a.h_star.size() != a.u.size() || b.h_star.size() != b.u.size())
                throw Error(ErrorCode::GridMismatch, "profile columns do not match the grid");
        }

        // L-infinity and trapezoidal L1 norm of the difference of two columns.
        std::pair<double, double> norms(const std::vector<double> &u, const std::vector<double> &a,
                                        const std::vector<double> &b)
        {
            double linf = 0.0, l1 = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
            {
                const double e = std::abs(a[i] - b[i]);
                linf = std::max(linf, e);
                if (i > 0)
                    l1 += 0.5 * (u[i] - u[i - 1]) * (e + std::abs(a[i - 1] - b[i - 1]));
            }
            return {linf, l1};
        }

        double stddev(const std::vector<double> &x)
        {
            if (x.size() < 2)
                return 0.0;
            double m = 0.0;
            for (double v : x)
                m += v;
            m /= static_cast<double>(x.size());
            double s = 0.0;
            for (double v : x)
                s += (v - m) * (v - m);
            return std::sqrt(s / static_cast<double>(x.size() - 1));
        }
    }

    ComparisonReport compare_profiles(const HeightProfile &predicted, const std::vector<HeightProfile> &per_seed,
                                      const RiemannSolution &solution)
    {
        if (per_seed.empty())
            throw Error(ErrorCode::GridMismatch, "no empirical profiles");
        for (const auto &p : per_seed)
            require_same_grid(predicted, p);
        const HeightProfile mean = kmc::mean_profile(per_seed);

        ComparisonReport r;
        r.t = mean.t;
        r.n_seeds = static_cast<int>(per_seed.size());
        auto fill = [&](SpeciesError &e, std::vector<double> HeightProfile::*col) {
            std::tie(e.linf, e.l1) = norms(mean.u, predicted.*col, mean.*col);
            std::vector<double> each;
            for (const auto &p : per_seed)
                each.push_back(norms(p.u, predicted.*col, p.*col).first);
            e.seed_spread = stddev(each);
        };
        fill(r.white, &HeightProfile::h_white);
        fill(r.black, &HeightProfile::h_black);
        fill(r.star, &HeightProfile::h_star);
        nlohmann::json sol;
        to_json(sol, solution);
        r.waves = sol["waves"];
        return r;
    }

    void write_overlay_csv(std::ostream &out, const HeightProfile &pred, const HeightProfile &emp)
    {
        require_same_grid(pred, emp);
        out << "u,h_pred_white,h_pred_black,h_pred_star,h_emp_white,h_emp_black,h_emp_star\n";
        for (std::size_t i = 0; i < pred.size(); ++i)
            out << format_number(pred.u[i]) << ',' << format_number(pred.h_white[i]) << ','
                << format_number(pred.h_black[i]) << ',' << format_number(pred.h_star[i]) << ','
                << format_number(emp.h_white[i]) << ',' << format_number(emp.h_black[i]) << ','
                << format_number(emp.h_star[i]) << '\n';
    }

    CompareOutput cmd_compare(const ExperimentConfig &c, unsigned threads)
    {
        const SimulateOutput sim = run_simulation(c, threads);
        const RiemannSolution sol = riemann_solve(c.params, c.dens_left, c.dens_right);
        const auto times = c.times();

        CompareOutput out;
        nlohmann::json reports = nlohmann::json::array();
        for (std::size_t k = 0; k < times.size(); ++k)
        {
            std::vector<HeightProfile> at_t;
            for (const auto &rep : sim.replicas)
                at_t.push_back(rep.heights[k]);
            HeightProfile pred = height_profile(sol, at_t.front().u);
            pred.t = times[k];
            out.reports.push_back(compare_profiles(pred, at_t, sol));
            reports.push_back(to_json(out.reports.back()));

            const auto p = output_file(c, "_overlay" + time_tag(times[k]) + ".csv");
            auto f = open_output(p);
            write_overlay_csv(f, pred, sim.mean[k]);
            out.files.push_back(p);
        }
        const auto p = output_file(c, "_report.json");
        auto f = open_output(p);
        f << nlohmann::json{{"config", config_to_json(c)}, {"reports", reports}}.dump(2) << '\n';
        out.files.push_back(p);
        return out;
    }

    void cmd_ring(std::ostream &out, const std::string &alpha, const std::string &beta, int m_white, int m_black,
                  int m_star)
    {
        ring::RingParams p{parse_rational(alpha), parse_rational(beta)};
        ring::RingCounts counts;
        counts.m_white = m_white;
        counts.m_black = m_black;
        counts.m_star = m_star;
        const ring::ExactCurrents j = ring::ring_currents(p, counts);
        out << "alpha " << to_string(p.alpha) << "  beta " << to_string(p.beta) << "  N " << counts.n() << '\n';
        out << std::left << std::setw(8) << "species" << std::setw(40) << "current" << "decimal\n";
        auto row = [&](const char *name, const ExactRational &q) {
            out << std::left << std::setw(8) << name << std::setw(40) << to_string(q) << format_number(to_double(q))
                << '\n';
        };
        row("white", j.j_white);
        row("black", j.j_black);
        row("star", j.j_star);
        out << "sum     " << to_string(j.j_white + j.j_black + j.j_star) << '\n';
    }

    bool self_test(std::ostream &out)
    {
        bool all = true;
        auto check = [&](const char *name, auto &&fn) {
            bool ok = false;
            std::string detail;
            try
            {
                ok = fn();
            }
            catch (const std::exception &e)
            {
                detail = e.what();
            }
            out << (ok ? "ok    " : "FAIL  ") << name;
            if (!detail.empty())
                out << "  (" << detail << ")";
            out << '\n';
            all = all && ok;
        };

        check("density -> z -> density round trip", [] {
            const ModelParams p{0.6, 0.8};
            for (double rw = 0.05; rw < 0.9; rw += 0.1)
                for (double rb = 0.05; rw + rb < 0.95; rb += 0.1)
                {
                    const Densities d = densities_from_z(p, solve_z(p, Densities{rw, rb}));
                    if (std::abs(d.rho_white - rw) > 1e-10 || std::abs(d.rho_black - rb) > 1e-10)
                        return false;
                }
            return true;
        });
        check("current equations", [] {
            const ModelParams p{0.3, 1.7};
            const Densities d{0.3, 0.4};
            const ZPoint z = solve_z(p, d);
            const auto [r0, r1] = currents_residual(p, z, currents_from_z(p, z, d));
            return std::abs(r0) < 1e-10 && std::abs(r1) < 1e-10;
        });
        check("factorized currents on alpha + beta = 1", [] {
            const ModelParams p{0.3, 0.7};
            const Densities d{0.25, 0.35};
            const Currents a = currents_from_z(p, solve_z(p, d), d);
            const Currents b = factorized_currents(p, d);
            return std::abs(a.j_white - b.j_white) < 1e-10 && std::abs(a.j_black - b.j_black) < 1e-10;
        });
        check("ring currents N=3", [] {
            ring::RingParams p{ExactRational(1, 2), ExactRational(1, 3)};
            const auto j = ring::ring_currents(p, ring::RingCounts{1, 1, 1});
            return j.j_black == ExactRational(7, 33) && j.j_white == ExactRational(-8, 33) &&
                   j.j_white + j.j_black + j.j_star == 0;
        });
        check("riemann two-shock case", [] {
            const auto sol = riemann_solve(ModelParams{0.5, 0.5}, Densities{0.45, 0.112}, Densities{0.226, 0.665});
            return sol.waves.size() == 2 && sol.waves[0].kind == WaveKind::alpha_shock &&
                   sol.waves[1].kind == WaveKind::beta_shock && sol.waves[0].xi_lo <= sol.waves[1].xi_lo;
        });
        check("height sum rule", [] {
            const auto sol = riemann_solve(ModelParams{0.9, 0.9}, Densities{0.05, 0.8}, Densities{0.75, 0.05});
            const std::vector<double> u{-1.0, -0.5, 0.0, 0.5, 1.0};
            const HeightProfile h = height_profile(sol, u);
            for (std::size_t i = 0; i < u.size(); ++i)
                if (std::abs(h.h_white[i] + h.h_black[i] + h.h_star[i] - u[i] - 1.0) > 1e-8)
                    return false;
            return true;
        });
        check("free particle drift", [] {
            kmc::Lattice lat(300);
            lat.set(-250, kmc::Species::black);
            kmc::Rng rng(7);
            kmc::run_until(lat, ModelParams{1.0, 0.5}, 200.0, rng, kmc::RunOptions{true, 1});
            return lat.swaps.black_star == lat.event_count && lat.at(-250 + static_cast<int>(lat.event_count)) ==
                                                                   kmc::Species::black;
        });
        return all;
    }
}
