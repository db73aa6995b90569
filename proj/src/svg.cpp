#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fattail/io.hpp"

namespace fattail {

void write_loglog_svg(const std::string& path, const std::string& title, const std::vector<SvgSeries>& series,
                      std::optional<double> reference_tau)
{
    const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;
            x0 = std::min(x0, std::log10(s.x[i]));
            x1 = std::max(x1, std::log10(s.x[i]));
            y0 = std::min(y0, std::log10(s.y[i]));
            y1 = std::max(y1, std::log10(s.y[i]));
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    auto px = [&](double lx) { return L + (lx - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - y0) / (y1 - y0) * (H - T - B); };

    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = static_cast<int>(std::ceil(x0)); k <= static_cast<int>(std::floor(x1)); ++k)
        out << "<text x=\"" << px(k) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">1e"
            << k << "</text>\n";
    for (int k = static_cast<int>(std::ceil(y0)); k <= static_cast<int>(std::floor(y1)); ++k)
        out << "<text x=\"" << L - 6 << "\" y=\"" << py(k) + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e" << k
            << "</text>\n";

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    for (std::size_t s = 0; s < series.size(); ++s) {
        std::ostringstream pts;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (!(series[s].x[i] > 0.0 && series[s].y[i] > 0.0)) continue;
            pts << px(std::log10(series[s].x[i])) << ',' << py(std::log10(series[s].y[i])) << ' ';
        }
        out << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << colors[s % 5] << "\" points=\""
            << pts.str() << "\"/>\n";
        out << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 + 16 * s << "\" font-size=\"12\" fill=\""
            << colors[s % 5] << "\">" << series[s].label << "</text>\n";
    }
    if (reference_tau && !series.empty() && !series[0].x.empty()) {
        const double xe = std::log10(series[0].x.back());
        const double ye = std::log10(series[0].y.back());
        double xs = x0;
        double ys = ye + *reference_tau * (xe - xs);
        if (ys > y1 && *reference_tau > 0.0) {
            xs = xe - (y1 - ye) / *reference_tau;
            ys = y1;
        }
        out << "<line x1=\"" << px(xs) << "\" y1=\"" << py(ys) << "\" x2=\"" << px(xe) << "\" y2=\""
            << py(ye) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
        out << "<text x=\"" << W - R - 6 << "\" y=\"" << T + 16 << "\" text-anchor=\"end\" font-size=\"12\" "
            << "fill=\"gray\">predicted slope -" << *reference_tau << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fattail
