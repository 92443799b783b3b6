// Error type shared by every monoconv module.

#ifndef MONOCONV_ERROR_HPP
#define MONOCONV_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace monoconv {

// Stable, machine-readable error classes. The CLI maps each one to an exit code.
enum class Errc {
    domain_error,           // argument outside the mathematical domain of the operation
    order_exceeded,         // coefficient/moment requested beyond the stored truncation order
    invalid_measure,        // weights or moments violate the probability-measure invariants
    invalid_generator,      // negative Herglotz weights, bad branching rates
    not_a_k_transform,      // K(0) != 0, e.g. an offspring law with p_0 > 0
    unsupported_generator,  // coefficient recursion needs u(0) != 0
    step_underflow,         // adaptive ODE step size collapsed
    max_steps_exceeded,
    singular_system,
    precondition_failed,    // operator-model hypotheses violated
    population_overflow,    // Galton-Watson population exceeded the cap
    recursion_limit,
    parse_error,
    io_error,
};

constexpr std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::domain_error: return "domain_error";
    case Errc::order_exceeded: return "order_exceeded";
    case Errc::invalid_measure: return "invalid_measure";
    case Errc::invalid_generator: return "invalid_generator";
    case Errc::not_a_k_transform: return "not_a_k_transform";
    case Errc::unsupported_generator: return "unsupported_generator";
    case Errc::step_underflow: return "step_underflow";
    case Errc::max_steps_exceeded: return "max_steps_exceeded";
    case Errc::singular_system: return "singular_system";
    case Errc::precondition_failed: return "precondition_failed";
    case Errc::population_overflow: return "population_overflow";
    case Errc::recursion_limit: return "recursion_limit";
    case Errc::parse_error: return "parse_error";
    case Errc::io_error: return "io_error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

namespace detail {

[[noreturn]] inline void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace detail

} // namespace monoconv

#endif // MONOCONV_ERROR_HPP
