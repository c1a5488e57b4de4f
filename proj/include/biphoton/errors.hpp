#ifndef BIPHOTON_ERRORS_HPP
#define BIPHOTON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace biphoton {

// Distinguishable failure modes; all carry a human-readable message.

struct numerical_inconsistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct internal_consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct quadrature_failure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct singular_configuration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_configuration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct pole_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_parse_error : std::runtime_error {
    int line;
    config_parse_error(const std::string& msg, int line_no)
        : std::runtime_error(msg), line(line_no) {}
};

struct data_parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace biphoton

#endif
