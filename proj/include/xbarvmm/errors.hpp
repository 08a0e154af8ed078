#pragma once

#include <stdexcept>
#include <string>

namespace xbarvmm {

// Invalid arguments or configuration values. CLI exit code 1.
struct ParamError : std::invalid_argument {
    explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input files or artifacts (parse errors, schema violations,
// version mismatches). Messages carry line numbers / field names. CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Programming aborted under the Abort failure policy. CLI exit code 3.
struct ProgramFailure : std::runtime_error {
    ProgramFailure(const std::string& what, double final_resistance_mohm)
        : std::runtime_error(what), final_resistance_mohm(final_resistance_mohm) {}
    double final_resistance_mohm;
};

}  // namespace xbarvmm
