#include "tasep2/kmc.hpp"

#include "tasep2/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tasep2::kmc
{
    Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    Lattice::Lattice(int half_width, bool periodic)
        : Lattice(half_width, std::vector<Species>(2 * static_cast<std::size_t>(std::max(half_width, 0)), Species::star),
                  periodic)
    {
    }

    Lattice::Lattice(int half_width, std::vector<Species> sites, bool periodic)
        : half_width_(half_width), periodic_(periodic), sites_(std::move(sites))
    {
        if (half_width < 1)
            throw Error(ErrorCode::OutOfDomain, "lattice half width must be positive");
        if (sites_.size() != 2 * static_cast<std::size_t>(half_width))
            throw Error(ErrorCode::OutOfDomain, "site array does not have 2L entries");
        for (Species s : sites_)
            if (static_cast<int>(s) > 2)
                throw Error(ErrorCode::OutOfDomain, "invalid species value");
        rebuild();
    }

    std::size_t Lattice::bond_count() const noexcept { return periodic_ ? sites_.size() : sites_.size() - 1; }

    std::size_t Lattice::right_of(std::size_t b) const noexcept { return b + 1 == sites_.size() ? 0 : b + 1; }

    int Lattice::classify(std::size_t b) const noexcept
    {
        const Species l = sites_[b], r = sites_[right_of(b)];
        if (l == Species::black && r == Species::star)
            return static_cast<int>(BondType::black_star);
        if (l == Species::star && r == Species::white)
            return static_cast<int>(BondType::star_white);
        if (l == Species::black && r == Species::white)
            return static_cast<int>(BondType::black_white);
        return -1;
    }

    void Lattice::refresh(std::size_t b)
    {
        const int now = classify(b);
        const int was = type_[b];
        if (now == was)
            return;
        if (was >= 0)
        {
            auto &pool = pools_[was];
            const int pos = slot_[b];
            const int moved = pool.back();
            pool[pos] = moved;
            slot_[moved] = pos;
            pool.pop_back();
        }
        if (now >= 0)
        {
            slot_[b] = static_cast<int>(pools_[now].size());
            pools_[now].push_back(static_cast<int>(b));
        }
        else
            slot_[b] = -1;
        type_[b] = static_cast<std::int8_t>(now);
    }

    void Lattice::rebuild()
    {
        for (auto &pool : pools_)
            pool.clear();
        const std::size_t nb = bond_count();
        slot_.assign(nb, -1);
        type_.assign(nb, -1);
        for (std::size_t b = 0; b < nb; ++b)
            refresh(b);
    }

    void Lattice::set(int k, Species s)
    {
        const auto i = static_cast<std::size_t>(k + half_width_);
        sites_.at(i) = s;
        const std::size_t nb = bond_count();
        if (i < nb)
            refresh(i);
        if (i > 0)
            refresh(i - 1);
        else if (periodic_)
            refresh(nb - 1);
    }

    SpeciesCounts Lattice::species_counts() const noexcept
    {
        SpeciesCounts c;
        for (Species s : sites_)
        {
            switch (s)
            {
            case Species::star: ++c.star; break;
            case Species::black: ++c.black; break;
            case Species::white: ++c.white; break;
            }
        }
        return c;
    }

    double Lattice::total_rate(const ModelParams &p) const noexcept
    {
        return p.beta * static_cast<double>(pools_[0].size()) + p.alpha * static_cast<double>(pools_[1].size()) +
               static_cast<double>(pools_[2].size());
    }

    bool Lattice::bonds_consistent() const
    {
        std::size_t active = 0;
        for (std::size_t b = 0; b < bond_count(); ++b)
        {
            const int t = classify(b);
            if (t != type_[b])
                return false;
            if (t < 0)
            {
                if (slot_[b] != -1)
                    return false;
                continue;
            }
            ++active;
            const auto &pool = pools_[t];
            if (slot_[b] < 0 || static_cast<std::size_t>(slot_[b]) >= pool.size() ||
                pool[slot_[b]] != static_cast<int>(b))
                return false;
        }
        return active == pools_[0].size() + pools_[1].size() + pools_[2].size();
    }

    void Lattice::apply(BondType type, std::size_t i)
    {
        const auto t = static_cast<int>(type);
        const auto b = static_cast<std::size_t>(pools_[t].at(i));
        const std::size_t r = right_of(b);
        std::swap(sites_[b], sites_[r]);
        switch (type)
        {
        case BondType::black_star: ++swaps.black_star; break;
        case BondType::star_white: ++swaps.star_white; break;
        case BondType::black_white: ++swaps.black_white; break;
        }
        ++event_count;

        const std::size_t nb = bond_count();
        refresh(b);
        if (b > 0)
            refresh(b - 1);
        else if (periodic_)
            refresh(nb - 1);
        if (b + 1 < nb)
            refresh(b + 1);
        else if (periodic_)
            refresh(0);
    }

    bool validate(const SimConfig &config, std::string *warning)
    {
        const ModelParams &p = config.params;
        if (!(std::isfinite(p.alpha) && std::isfinite(p.beta) && p.alpha >= 0.0 && p.beta >= 0.0))
            throw Error(ErrorCode::OutOfDomain, "rates must be finite and non-negative");
        if (config.half_width < 1)
            throw Error(ErrorCode::OutOfDomain, "L must be positive");
        validate(config.dens_left);
        validate(config.dens_right);
        if (!(config.t_max > 0.0 && std::isfinite(config.t_max)))
            throw Error(ErrorCode::OutOfDomain, "t_max must be positive");
        double prev = 0.0;
        for (double t : config.measurement_times)
        {
            if (!(t > prev) || t > config.t_max)
                throw Error(ErrorCode::OutOfDomain, "measurement times must be increasing, positive and <= t_max");
            prev = t;
        }
        if (config.periodic)
            return true;
        const double v_max = std::max({1.0, p.alpha, p.beta});
        const double reach = config.t_max * (1.0 + v_max);
        if (reach >= config.half_width)
        {
            if (warning)
            {
                std::ostringstream os;
                os << "t_max * (1 + v_max) = " << reach << " >= L = " << config.half_width
                   << ": the boundaries may influence the measured window";
                *warning = os.str();
            }
            return false;
        }
        return true;
    }

    Lattice init_bernoulli(const SimConfig &config, Rng &rng)
    {
        validate(config);
        const int L = config.half_width;
        std::vector<Species> sites(2 * static_cast<std::size_t>(L));
        for (int k = -L; k < L; ++k)
        {
            const Densities d = clamp_to_simplex(k < 0 ? config.dens_left : config.dens_right);
            const double u = rng.uniform();
            Species s = Species::star;
            if (u < d.rho_black)
                s = Species::black;
            else if (u < d.rho_black + d.rho_white)
                s = Species::white;
            sites[static_cast<std::size_t>(k + L)] = s;
        }
        return Lattice(L, std::move(sites), config.periodic);
    }

    void run_until(Lattice &lattice, const ModelParams &params, double t_target, Rng &rng, const RunOptions &options)
    {
        if (!(params.alpha >= 0.0 && params.beta >= 0.0))
            throw Error(ErrorCode::OutOfDomain, "negative rate");
        if (t_target < lattice.time)
            throw Error(ErrorCode::OutOfDomain, "t_target is in the past");

        const SpeciesCounts initial = lattice.species_counts();
        const std::uint64_t interval = std::max<std::uint64_t>(1, options.conservation_interval);
        const std::array<double, 3> rate{params.beta, params.alpha, 1.0};

        while (true)
        {
            std::array<double, 3> w{};
            double total = 0.0;
            for (int t = 0; t < 3; ++t)
            {
                w[t] = rate[t] * static_cast<double>(lattice.active_bonds(static_cast<BondType>(t)));
                total += w[t];
            }
            if (total <= 0.0)
            {
                lattice.time = t_target;
                return;
            }
            const double dt = rng.exponential() / total;
            if (lattice.time + dt > t_target)
            {
                lattice.time = t_target;
                return;
            }
            lattice.time += dt;

            double x = rng.uniform() * total;
            int type = 2;
            for (int t = 0; t < 3; ++t)
            {
                if (x < w[t])
                {
                    type = t;
                    break;
                }
                x -= w[t];
            }
            while (w[type] <= 0.0)
                --type; // rounding pushed x past the last non-empty bucket
            const std::size_t n = lattice.active_bonds(static_cast<BondType>(type));
            const auto i = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
            lattice.apply(static_cast<BondType>(type), i);

            if (options.debug_rescan && !lattice.bonds_consistent())
                throw std::logic_error("active bond pools out of sync with the lattice");
            if (lattice.event_count % interval == 0 && !(lattice.species_counts() == initial))
                throw std::logic_error("species counts changed during the run");
        }
    }

    HeightProfile measure_heights(const Lattice &lattice, double t)
    {
        if (!(t > 0.0))
            throw Error(ErrorCode::OutOfDomain, "measurement time must be positive");
        const int L = lattice.half_width();
        if (t > L)
            throw Error(ErrorCode::WindowExceedsLattice, "t exceeds the half width of the lattice");

        const auto ft = static_cast<int>(std::floor(t));
        const int n_min = static_cast<int>(std::floor(-t)) + 1;
        const int n_max = std::min(L - 1, static_cast<int>(std::ceil(t)) - 1);

        HeightProfile h;
        h.t = t;
        h.n_samples = 1;
        std::int64_t cw = 0, cb = 0, cs = 0;
        int next = -ft + 1;
        for (int n = n_min; n <= n_max; ++n)
        {
            for (; next <= n; ++next)
            {
                switch (lattice.at(next))
                {
                case Species::white: ++cw; break;
                case Species::black: ++cb; break;
                case Species::star: ++cs; break;
                }
            }
            h.u.push_back(n / t);
            h.h_white.push_back(static_cast<double>(cw) / t);
            h.h_black.push_back(static_cast<double>(cb) / t);
            h.h_star.push_back(static_cast<double>(cs) / t);
        }
        return h;
    }

    void write_snapshot(std::ostream &out, const Lattice &lattice, const ModelParams &params, std::uint64_t seed)
    {
        const SpeciesCounts c = lattice.species_counts();
        nlohmann::json header{
            {"format", "tasep2-snapshot-1"},
            {"L", lattice.half_width()},
            {"periodic", lattice.periodic()},
            {"alpha", params.alpha},
            {"beta", params.beta},
            {"time", lattice.time},
            {"event_count", lattice.event_count},
            {"seed", seed},
            {"counts", {{"star", c.star}, {"black", c.black}, {"white", c.white}}},
            {"swaps",
             {{"black_star", lattice.swaps.black_star},
              {"star_white", lattice.swaps.star_white},
              {"black_white", lattice.swaps.black_white}}},
        };
        out << header.dump() << '\n';
        out.write(reinterpret_cast<const char *>(lattice.sites().data()), static_cast<std::streamsize>(lattice.size()));
    }

    Snapshot read_snapshot(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line))
            throw Error(ErrorCode::ConfigError, "snapshot: missing header");
        try
        {
            const auto header = nlohmann::json::parse(line);
            if (header.at("format") != "tasep2-snapshot-1")
                throw Error(ErrorCode::ConfigError, "snapshot: unknown format");
            const int L = header.at("L").get<int>();
            if (L < 1)
                throw Error(ErrorCode::ConfigError, "snapshot: bad L");
            std::vector<Species> sites(2 * static_cast<std::size_t>(L));
            in.read(reinterpret_cast<char *>(sites.data()), static_cast<std::streamsize>(sites.size()));
            if (in.gcount() != static_cast<std::streamsize>(sites.size()))
                throw Error(ErrorCode::ConfigError, "snapshot: truncated site array");

            Snapshot snap;
            snap.lattice = Lattice(L, std::move(sites), header.at("periodic").get<bool>());
            snap.lattice.time = header.at("time").get<double>();
            snap.lattice.event_count = header.at("event_count").get<std::uint64_t>();
            const auto &sw = header.at("swaps");
            snap.lattice.swaps.black_star = sw.at("black_star").get<std::uint64_t>();
            snap.lattice.swaps.star_white = sw.at("star_white").get<std::uint64_t>();
            snap.lattice.swaps.black_white = sw.at("black_white").get<std::uint64_t>();
            snap.params = ModelParams{header.at("alpha").get<double>(), header.at("beta").get<double>()};
            snap.seed = header.at("seed").get<std::uint64_t>();

            const auto &c = header.at("counts");
            const SpeciesCounts expect{c.at("star").get<std::int64_t>(), c.at("black").get<std::int64_t>(),
                                       c.at("white").get<std::int64_t>()};
            if (!(snap.lattice.species_counts() == expect))
                throw Error(ErrorCode::ConfigError, "snapshot: species counts do not match the header");
            return snap;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw Error(ErrorCode::ConfigError, std::string("snapshot header: ") + e.what());
        }
        catch (const Error &e)
        {
            if (e.code() == ErrorCode::ConfigError)
                throw;
            throw Error(ErrorCode::ConfigError, std::string("snapshot: ") + e.what());
        }
    }

    ReplicaResult simulate_replica(const SimConfig &config, std::uint64_t stream)
    {
        Rng rng(config.seed, stream);
        Lattice lattice = init_bernoulli(config, rng);
        ReplicaResult out;
        out.seed = config.seed;
        out.stream = stream;
        std::vector<double> times = config.measurement_times;
        if (times.empty())
            times.push_back(config.t_max);
        for (double t : times)
        {
            run_until(lattice, config.params, t, rng);
            out.heights.push_back(measure_heights(lattice, t));
        }
        out.swaps = lattice.swaps;
        out.events = lattice.event_count;
        return out;
    }

    unsigned thread_count_from_env()
    {
        if (const char *env = std::getenv("TASEP2_THREADS"))
        {
            char *end = nullptr;
            const unsigned long v = std::strtoul(env, &end, 10);
            if (end != env && *end == '\0' && v > 0)
                return static_cast<unsigned>(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    std::vector<ReplicaResult> run_parallel(std::size_t n, const std::function<ReplicaResult(std::size_t)> &job,
                                            unsigned threads)
    {
        std::vector<ReplicaResult> results(n);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;)
            {
                try
                {
                    results[i] = job(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        };
        const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
        if (workers <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }
        if (failure)
            std::rethrow_exception(failure);
        return results;
    }

    HeightProfile mean_profile(const std::vector<HeightProfile> &profiles)
    {
        if (profiles.empty())
            throw Error(ErrorCode::GridMismatch, "no profiles to average");
        HeightProfile m = profiles.front();
        m.n_samples = 0;
        std::fill(m.h_white.begin(), m.h_white.end(), 0.0);
        std::fill(m.h_black.begin(), m.h_black.end(), 0.0);
        std::fill(m.h_star.begin(), m.h_star.end(), 0.0);
        for (const HeightProfile &p : profiles)
        {
            if (p.u != m.u || p.t != m.t)
                throw Error(ErrorCode::GridMismatch, "profiles live on different grids");
            for (std::size_t i = 0; i < m.size(); ++i)
            {
                m.h_white[i] += p.h_white[i] * p.n_samples;
                m.h_black[i] += p.h_black[i] * p.n_samples;
                m.h_star[i] += p.h_star[i] * p.n_samples;
            }
            m.n_samples += p.n_samples;
        }
        if (m.n_samples <= 0)
            throw Error(ErrorCode::GridMismatch, "profiles carry no samples");
        for (std::size_t i = 0; i < m.size(); ++i)
        {
            m.h_white[i] /= m.n_samples;
            m.h_black[i] /= m.n_samples;
            m.h_star[i] /= m.n_samples;
        }
        return m;
    }
}
