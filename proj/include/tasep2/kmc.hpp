#pragma once

// Continuous-time simulation of the two-species TASEP on a finite lattice.
//
// Sites carry integer labels k = -L .. L-1. The initial domain wall sits between
// k = -1 and k = 0, so site 0 belongs to the right-hand state. The dynamics is
// rejection-free: the active bonds are kept in one pool per transition type and
// every event costs O(1).

#include "tasep2/height.hpp"
#include "tasep2/stationary.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace tasep2::kmc
{
    enum class Species : std::uint8_t
    {
        star = 0,
        black = 1,
        white = 2,
    };

    /// Transition types, indexed as in the pools below.
    enum class BondType : std::uint8_t
    {
        black_star = 0, ///< black star -> star black, rate beta
        star_white = 1, ///< star white -> white star, rate alpha
        black_white = 2, ///< black white -> white black, rate 1
    };

    struct SwapCounts
    {
        std::uint64_t black_star = 0;
        std::uint64_t star_white = 0;
        std::uint64_t black_white = 0;

        SwapCounts &operator+=(const SwapCounts &o) noexcept
        {
            black_star += o.black_star;
            star_white += o.star_white;
            black_white += o.black_white;
            return *this;
        }
    };

    struct SpeciesCounts
    {
        std::int64_t star = 0;
        std::int64_t black = 0;
        std::int64_t white = 0;

        bool operator==(const SpeciesCounts &) const = default;
    };

    /// 64-bit Mersenne twister seeded from (seed, stream) through seed_seq, one
    /// stream per replica. Uniform variates use the top 53 bits; exponential
    /// variates are drawn from the open interval (never zero).
    class Rng
    {
    public:
        Rng(std::uint64_t seed, std::uint64_t stream = 0);

        double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
        double exponential() noexcept { return -std::log((static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53); }
        std::uint64_t next() noexcept { return engine_(); }

    private:
        std::mt19937_64 engine_;
    };

    class Lattice
    {
    public:
        /// 2L sites, all vacant.
        explicit Lattice(int half_width, bool periodic = false);

        Lattice(int half_width, std::vector<Species> sites, bool periodic = false);

        int half_width() const noexcept { return half_width_; }
        std::size_t size() const noexcept { return sites_.size(); }
        bool periodic() const noexcept { return periodic_; }

        Species at(int k) const { return sites_.at(static_cast<std::size_t>(k + half_width_)); }
        void set(int k, Species s);
        const std::vector<Species> &sites() const noexcept { return sites_; }

        double time = 0.0;
        std::uint64_t event_count = 0;
        SwapCounts swaps;

        SpeciesCounts species_counts() const noexcept;

        std::size_t active_bonds(BondType type) const noexcept { return pools_[static_cast<int>(type)].size(); }
        double total_rate(const ModelParams &params) const noexcept;

        /// Rebuilds the bond pools from scratch and compares them with the
        /// incrementally maintained ones.
        bool bonds_consistent() const;

        /// Performs one swap on the i-th active bond of the given type.
        void apply(BondType type, std::size_t i);

    private:
        int half_width_;
        bool periodic_;
        std::vector<Species> sites_;
        std::array<std::vector<int>, 3> pools_;
        std::vector<int> slot_;         ///< position of bond b in its pool, -1 when inactive
        std::vector<std::int8_t> type_; ///< type of bond b, -1 when inactive

        std::size_t bond_count() const noexcept;
        std::size_t right_of(std::size_t b) const noexcept;
        int classify(std::size_t b) const noexcept;
        void refresh(std::size_t b);
        void rebuild();
    };

    struct SimConfig
    {
        ModelParams params;
        int half_width = 1100;
        Densities dens_left;
        Densities dens_right;
        double t_max = 500.0;
        std::uint64_t seed = 1;
        std::vector<double> measurement_times;
        bool periodic = false;
    };

    /// Throws OutOfDomain for invalid fields. Returns false (and fills `warning`)
    /// when t_max * (1 + v_max) >= L, i.e. the boundary may influence the window.
    bool validate(const SimConfig &config, std::string *warning = nullptr);

    /// Independent Bernoulli sites: black with probability rho_black, white with
    /// probability rho_white, vacant otherwise.
    Lattice init_bernoulli(const SimConfig &config, Rng &rng);

    struct RunOptions
    {
        bool debug_rescan = false;                    ///< verify the bond pools after every event
        std::uint64_t conservation_interval = 1000000; ///< events between species-count assertions
    };

    /// Advances the chain to t_target. Rates may be zero; negative rates throw.
    void run_until(Lattice &lattice, const ModelParams &params, double t_target, Rng &rng,
                   const RunOptions &options = {});

    /// h_i(n/t) = (1/t) * #{species i at sites -floor(t) < k <= n} for the
    /// integers -t < n < t. Throws WindowExceedsLattice if t > L.
    HeightProfile measure_heights(const Lattice &lattice, double t);

    void write_snapshot(std::ostream &out, const Lattice &lattice, const ModelParams &params, std::uint64_t seed);

    struct Snapshot
    {
        Lattice lattice{1};
        ModelParams params;
        std::uint64_t seed = 0;
    };

    Snapshot read_snapshot(std::istream &in);

    struct ReplicaResult
    {
        std::uint64_t seed = 0;
        std::uint64_t stream = 0;
        std::vector<HeightProfile> heights; ///< one per measurement time
        SwapCounts swaps;
        std::uint64_t events = 0;
    };

    /// One trajectory from Bernoulli initial data, measured at every
    /// measurement time (t_max when the list is empty).
    ReplicaResult simulate_replica(const SimConfig &config, std::uint64_t stream);

    /// Worker count from TASEP2_THREADS, else hardware concurrency.
    unsigned thread_count_from_env();

    /// Runs job(i) for i in [0, n) on up to `threads` workers; results are
    /// stored by index.
    std::vector<ReplicaResult> run_parallel(std::size_t n, const std::function<ReplicaResult(std::size_t)> &job,
                                            unsigned threads);

    /// Pointwise mean of profiles on a common grid (GridMismatch otherwise).
    HeightProfile mean_profile(const std::vector<HeightProfile> &profiles);
}
