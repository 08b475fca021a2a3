#ifndef HEATCALC_TOOLS_SVG_HPP
#define HEATCALC_TOOLS_SVG_HPP

#include <string>
#include <vector>

namespace heatcalc::cli
{

/// Minimal polyline chart. Non-finite points are skipped; with log_x the
/// abscissae must be positive.
std::string line_chart(const std::string &title, const std::vector<double> &x, const std::vector<double> &y,
                       bool log_x);

} // namespace heatcalc::cli

#endif
