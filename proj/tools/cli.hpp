#ifndef HEATCALC_TOOLS_CLI_HPP
#define HEATCALC_TOOLS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "heatcalc/gauss_oracle.hpp"
#include "heatcalc/scan.hpp"
#include "heatcalc/sos_certify.hpp"

namespace heatcalc::cli
{

/// Bad config or certificate input; the message names the line or field.
class InputError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances
{
    std::optional<double> quad_tol;
    std::optional<double> sign_factor;
    std::optional<double> concave_tol;
};

struct ExperimentConfig
{
    std::vector<Component> mixture;
    TimeGrid t_grid;
    int max_order = 4;
    Tolerances tolerances;
    std::string output;
};

/// Parses the JSON config text; `source` prefixes diagnostics.
ExperimentConfig parse_config(std::string_view text, const std::string &source = "config");
ExperimentConfig load_config(const std::string &path);

/// Square entries are written "f1 f3/f^2": the denominator is the factor count.
std::string square_entry_str(const DerivMonomial &m);
DerivMonomial parse_square_entry(std::string_view text);

std::string certificate_to_json(const Certificate &cert);
Certificate certificate_from_json(std::string_view text, const std::string &source = "certificate");

/// Worker cap from HEATCALC_THREADS (0 means hardware concurrency).
unsigned threads_from_env();

/// Exit codes: 0 all asserted checks pass, 2 a check failed, 1 usage or IO error.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace heatcalc::cli

#endif
