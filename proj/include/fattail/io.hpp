#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fattail/sim.hpp"

namespace fattail {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_series_csv(const SimResult& res, const std::string& path);
// one row per mode: xi, quadrature weight, then |f(t, xi)|^2 for each output time
void write_modes_csv(const SimResult& res, const std::string& path);
void write_coefficients_csv(const std::vector<CoefficientSet>& rows, const std::string& path);
void write_entropy_csv(const std::vector<EntropyReport>& rows, const std::string& path);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Log-log plot; a reference line of slope -tau through the last point of the
// first series is drawn when tau is given.
void write_loglog_svg(const std::string& path, const std::string& title, const std::vector<SvgSeries>& series,
                      std::optional<double> reference_tau = std::nullopt);

}  // namespace fattail
