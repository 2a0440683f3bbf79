#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tasep2
{
    enum class ErrorCode
    {
        OutOfDomain,
        DegenerateInput,
        SingularMap,
        PoleEvaluation,
        NotOnFactorizedLine,
        SingularMinor,
        HugoniotViolation,
        ZeroJump,
        OutOfFan,
        OrderingViolation,
        WindowExceedsLattice,
        GridMismatch,
        ConfigError,
    };

    constexpr std::string_view to_string(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::SingularMap: return "SingularMap";
        case ErrorCode::PoleEvaluation: return "PoleEvaluation";
        case ErrorCode::NotOnFactorizedLine: return "NotOnFactorizedLine";
        case ErrorCode::SingularMinor: return "SingularMinor";
        case ErrorCode::HugoniotViolation: return "HugoniotViolation";
        case ErrorCode::ZeroJump: return "ZeroJump";
        case ErrorCode::OutOfFan: return "OutOfFan";
        case ErrorCode::OrderingViolation: return "OrderingViolation";
        case ErrorCode::WindowExceedsLattice: return "WindowExceedsLattice";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::ConfigError: return "ConfigError";
        }
        return "Unknown";
    }

    /// Library failure tagged with one of the codes above.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &what)
            : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
        {
        }

        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };
}
