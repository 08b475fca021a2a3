#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace heatcalc::cli
{

namespace
{

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 56.0;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string &s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace

std::string line_chart(const std::string &title, const std::vector<double> &x, const std::vector<double> &y,
                       bool log_x)
{
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (std::isfinite(x[i]) && std::isfinite(y[i]) && (!log_x || x[i] > 0.0)) {
            pts.emplace_back(log_x ? std::log10(x[i]) : x[i], y[i]);
        }
    }
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto &[px, py] : pts) {
        x0 = std::min(x0, px);
        x1 = std::max(x1, px);
        y0 = std::min(y0, py);
        y1 = std::max(y1, py);
    }
    if (pts.empty()) {
        x0 = y0 = 0.0;
        x1 = y1 = 1.0;
    }
    if (x1 == x0) {
        x1 = x0 + 1.0;
    }
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pw = kWidth - 2 * kMargin;
    const double ph = kHeight - 2 * kMargin;
    auto sx = [&](double v) { return kMargin + (v - x0) / (x1 - x0) * pw; };
    auto sy = [&](double v) { return kHeight - kMargin - (v - y0) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"16\">"
       << escape(title) << "</text>\n";
    os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (y0 < 0.0 && y1 > 0.0) {
        os << "<line x1=\"" << kMargin << "\" x2=\"" << kWidth - kMargin << "\" y1=\"" << fmt(sy(0.0))
           << "\" y2=\"" << fmt(sy(0.0)) << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
    }
    const char *label = "font-family=\"sans-serif\" font-size=\"11\"";
    os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\" " << label << ">"
       << fmt(log_x ? std::pow(10.0, x0) : x0) << "</text>\n";
    os << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\" text-anchor=\"end\" "
       << label << ">" << fmt(log_x ? std::pow(10.0, x1) : x1) << "</text>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - kMargin + 32 << "\" text-anchor=\"middle\" "
       << label << ">" << (log_x ? "t (log scale)" : "t") << "</text>\n";
    os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4 << "\" text-anchor=\"end\" " << label << ">"
       << fmt(y1) << "</text>\n";
    os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\" " << label
       << ">" << fmt(y0) << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        os << (i ? " " : "") << fmt(sx(pts[i].first)) << ',' << fmt(sy(pts[i].second));
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

} // namespace heatcalc::cli
