#include "tasep2/ring_oracle.hpp"

#include "tasep2/errors.hpp"

#include <string>
#include <vector>

namespace tasep2::ring
{
    namespace
    {
        // Pascal-row cache; binomial(n, k) for n up to the largest index requested.
        class Binomials
        {
        public:
            const BigInt &operator()(int n, int k)
            {
                while (static_cast<int>(rows_.size()) <= n)
                {
                    const auto m = rows_.size();
                    std::vector<BigInt> row(m + 1);
                    row.front() = 1;
                    row.back() = 1;
                    for (std::size_t i = 1; i < m; ++i)
                        row[i] = rows_[m - 1][i - 1] + rows_[m - 1][i];
                    rows_.push_back(std::move(row));
                }
                return rows_[n][k];
            }

        private:
            std::vector<std::vector<BigInt>> rows_;
        };

        ExactRational pow(const ExactRational &x, int e)
        {
            ExactRational r{1};
            for (int i = 0; i < e; ++i)
                r *= x;
            return r;
        }

        ExactRational f_gamma_impl(Binomials &binom, const ExactRational &gamma, int a, int b, int c)
        {
            // (z-1)^-b     = (-1)^b   sum_k C(b-1+k, k) z^k
            // (z-gamma)^-c = (-1)^c gamma^-c sum_j C(c-1+j, j) gamma^-j z^j
            // coefficient of z^(a-1) in the product.
            const ExactRational inv = 1 / gamma;
            ExactRational sum{0};
            ExactRational inv_pow{1}; // gamma^-(a-1-k), built from k = a-1 downwards
            for (int k = a - 1; k >= 0; --k)
            {
                const int j = a - 1 - k;
                sum += ExactRational(binom(b - 1 + k, k) * binom(c - 1 + j, j)) * inv_pow;
                inv_pow *= inv;
            }
            ExactRational out = sum * pow(inv, c);
            if ((b + c) % 2 != 0)
                out = -out;
            return out;
        }
    }

    ExactRational f_gamma(const ExactRational &gamma, int a, int b, int c)
    {
        if (gamma <= 0 || a < 1 || b < 1 || c < 1)
            throw Error(ErrorCode::OutOfDomain, "f_gamma requires gamma > 0 and a, b, c >= 1");
        Binomials binom;
        return f_gamma_impl(binom, gamma, a, b, c);
    }

    void validate(const RingParams &params, const RingCounts &counts, std::size_t max_sites)
    {
        if (params.alpha <= 0 || params.beta <= 0)
            throw Error(ErrorCode::OutOfDomain, "ring rates must be positive");
        if (counts.m_black < 1 || counts.m_white < 1 || counts.m_star < 1)
            throw Error(ErrorCode::OutOfDomain, "every species needs at least one particle on the ring");
        if (static_cast<std::size_t>(counts.n()) > max_sites)
            throw Error(ErrorCode::OutOfDomain,
                        "ring of " + std::to_string(counts.n()) + " sites exceeds the limit " + std::to_string(max_sites));
    }

    ExactRational phi(const RingParams &params, const RingCounts &counts, const SwapWeights &nu, std::size_t max_sites)
    {
        validate(params, counts, max_sites);
        Binomials binom;
        const int mw = counts.m_white, mb = counts.m_black, ms = counts.m_star;
        const auto &al = params.alpha;
        const auto &be = params.beta;

        //      | Phi  A1  B1 |
        //  G = | r2   A2  B2 |
        //      | r3   A3  B3 |
        const ExactRational a1 = f_gamma_impl(binom, al, mw, mb, ms);
        const ExactRational b1 = f_gamma_impl(binom, be, mb, mw, ms);
        const ExactRational a2 = f_gamma_impl(binom, al, mw + 1, mb, ms);
        const ExactRational b2 = -f_gamma_impl(binom, be, mb, mw + 1, ms);
        const ExactRational a3 = -f_gamma_impl(binom, al, mw, mb + 1, ms);
        const ExactRational b3 = f_gamma_impl(binom, be, mb + 1, mw, ms);
        const ExactRational r2 = nu.black_white * mb + nu.star_white * ms;
        const ExactRational r3 = nu.black_white * mw + nu.black_star * ms;

        const ExactRational minor11 = a2 * b3 - b2 * a3;
        if (minor11 == 0)
            throw Error(ErrorCode::SingularMinor, "the (1,1) minor of G vanishes");
        // Expansion along the first column: Phi * minor11 - r2 * M21 + r3 * M31 = 0.
        ExactRational result = (r2 * (a1 * b3 - b1 * a3) - r3 * (a1 * b2 - b1 * a2)) / minor11;
        result.canonicalize();
        return result;
    }

    ExactCurrents ring_currents(const RingParams &params, const RingCounts &counts, std::size_t max_sites)
    {
        const ExactRational n{counts.n()};
        ExactCurrents j;
        j.j_black = phi(params, counts, {1, 1, 0}, max_sites) / n;
        j.j_white = phi(params, counts, {-1, 0, -1}, max_sites) / n;
        j.j_star = phi(params, counts, {0, -1, 1}, max_sites) / n;
        return j;
    }
}
