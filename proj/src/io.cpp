#include "fattail/io.hpp"

#include <fstream>
#include <iomanip>

namespace fattail {

namespace {

std::ofstream open_csv(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << std::setprecision(17);
    return out;
}

}  // namespace

void write_series_csv(const SimResult& res, const std::string& path)
{
    auto out = open_csv(path);
    out << "t,L2_norm2,weighted_norm2,L1_bound,mass\n";
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        out << res.times[i] << ',' << res.L2_norm2[i] << ',' << res.weighted_norm2[i] << ',' << res.L1_bound[i]
            << ',' << res.mass[i] << '\n';
    }
}

void write_modes_csv(const SimResult& res, const std::string& path)
{
    auto out = open_csv(path);
    out << "xi,weight";
    for (double t : res.times) out << ",t=" << t;
    out << '\n';
    for (std::size_t j = 0; j < res.xi.xi.size(); ++j) {
        out << res.xi.xi[j] << ',' << res.xi.weight[j];
        for (double v : res.mode_norm2[j]) out << ',' << v;
        out << '\n';
    }
}

void write_coefficients_csv(const std::vector<CoefficientSet>& rows, const std::string& path)
{
    auto out = open_csv(path);
    out << "xi,eta,lambda0,lambda1,tlambda0,tlambda1,mu2,tmu1,tmu2,muL,lambdaL,K\n";
    for (const auto& c : rows) {
        out << c.xi << ',' << c.eta << ',' << c.lambda0 << ',' << c.lambda1 << ',' << c.tlambda0 << ','
            << c.tlambda1 << ',' << c.mu2 << ',' << c.tmu1 << ',' << c.tmu2 << ',' << c.muL << ',' << c.lambdaL
            << ',' << (c.mu2 > 0.0 ? K_bound(c) : 0.0) << '\n';
    }
}

void write_entropy_csv(const std::vector<EntropyReport>& rows, const std::string& path)
{
    auto out = open_csv(path);
    out << "t,norm2,H,R,R_fd,I1,I2,I3,I4,I5,I6,I7\n";
    for (const auto& r : rows) {
        out << r.time << ',' << r.norm2 << ',' << r.H << ',' << r.R << ',' << r.R_fd;
        for (double v : r.I_terms) out << ',' << v;
        out << '\n';
    }
}

}  // namespace fattail
