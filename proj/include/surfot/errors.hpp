#pragma once

#include <stdexcept>
#include <string>

namespace surfot {

// Bad inputs: unparsable files, meshes of the wrong topology, out-of-range
// arguments. Mapped to exit code 2 by the CLI.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown: singular systems, failed branch selection, plans that
// are not vertex solutions. Mapped to exit code 3 by the CLI.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace surfot
