#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "layerscatter/forward.hpp"
#include "layerscatter/media.hpp"

namespace layerscatter::io {

// 17 significant digits, round-trip safe
std::string format_double(double v);

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns);

// columns of a CSV whose header must equal `header`
std::vector<std::vector<double>> read_csv(std::istream& in, const std::vector<std::string>& header);
std::vector<std::vector<double>> read_csv(const std::string& path,
                                          const std::vector<std::string>& header);

// "chirp" (alias "paper53"), "chirp:c=0.01,d=0.3", "const", "const:2", "exp:0.05",
// a CSV path with columns x,zeta (equal spacing) or a JSON descriptor path
ImpedanceProfile load_profile(const std::string& spec, double x0, double x1);

// t,d CSV
ReflectionSeries load_series(const std::string& path);

}  // namespace layerscatter::io
