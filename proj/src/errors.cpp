#include "qwire/errors.hpp"

#include <fmt/format.h>

namespace qwire {

SolverDegeneracy::SolverDegeneracy(double energy, double condition)
    : DomainError(fmt::format("singular matching system at E = {:.12g} (condition number {:.3e})",
                              energy, condition)),
      energy_(energy),
      condition_(condition) {}

ResolutionError::ResolutionError(const std::string& what, double lower, double upper)
    : DomainError(fmt::format("{} in [{:.12g}, {:.12g}]", what, lower, upper)),
      lower_(lower),
      upper_(upper) {}

PhaseUndefined::PhaseUndefined(double parameter, double magnitude)
    : DomainError(fmt::format("phase undefined at parameter {:.12g}: |amplitude| = {:.3e}",
                              parameter, magnitude)),
      parameter_(parameter) {}

}  // namespace qwire
