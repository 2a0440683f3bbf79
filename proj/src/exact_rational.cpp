#include "tasep2/exact_rational.hpp"

#include "tasep2/errors.hpp"

#include <cctype>

namespace tasep2
{
    namespace
    {
        bool all_digits(std::string_view s)
        {
            if (s.empty())
                return false;
            for (char c : s)
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    return false;
            return true;
        }
    }

    ExactRational parse_rational(std::string_view text)
    {
        std::string_view s = text;
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);

        bool negative = false;
        if (!s.empty() && (s.front() == '-' || s.front() == '+'))
        {
            negative = s.front() == '-';
            s.remove_prefix(1);
        }

        ExactRational q;
        if (auto slash = s.find('/'); slash != std::string_view::npos)
        {
            auto num = s.substr(0, slash), den = s.substr(slash + 1);
            if (!all_digits(num) || !all_digits(den))
                throw Error(ErrorCode::ConfigError, "malformed rational '" + std::string(text) + "'");
            BigInt d{std::string(den), 10};
            if (d == 0)
                throw Error(ErrorCode::ConfigError, "zero denominator in '" + std::string(text) + "'");
            q = ExactRational(BigInt(std::string(num), 10), d);
        }
        else if (auto dot = s.find('.'); dot != std::string_view::npos)
        {
            auto ip = s.substr(0, dot), fp = s.substr(dot + 1);
            if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
                throw Error(ErrorCode::ConfigError, "malformed decimal '" + std::string(text) + "'");
            BigInt scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
            BigInt digits(std::string(ip) + std::string(fp), 10);
            q = ExactRational(digits, scale);
        }
        else
        {
            if (!all_digits(s))
                throw Error(ErrorCode::ConfigError, "malformed number '" + std::string(text) + "'");
            q = ExactRational(BigInt(std::string(s), 10));
        }
        q.canonicalize();
        return negative ? ExactRational(-q) : q;
    }

    std::string to_string(const ExactRational &q) { return q.get_str(); }

    double to_double(const ExactRational &q) { return q.get_d(); }
}
