#include "chreduct/errors.hpp"

namespace chreduct {

IntegrationError::IntegrationError(std::size_t step, const std::string& what)
    : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

MatchingViolation::MatchingViolation(double horizontal_residual, const std::string& what)
    : Error(what), horizontal_(horizontal_residual) {}

}  // namespace chreduct
