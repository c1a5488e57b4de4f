#ifndef BIPHOTON_CLI_HPP
#define BIPHOTON_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace biphoton {

// Exit codes: 0 success, 1 generic failure (including failed verify checks),
// 2 config/parse/usage error, 3 fit non-convergence.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Verify suite shared by `biphoton verify` and the tests: runs the
/// oracle-vs-closed-form checks and prints one pass/fail line each.
/// Returns true iff everything passed.
struct VerifyOptions {
    double c_scale = 1.0;
    double omega_over_sigma = 3.0;
    double lambda = 702e-9;
    double lambda_p = 351.1e-9;
    double L_p = 7e-3;
};
bool run_verify(const VerifyOptions& opts, std::ostream& out);

}  // namespace biphoton

#endif
