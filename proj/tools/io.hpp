#pragma once

#include "weylpos/gaussian.hpp"
#include "weylpos/operators.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace weylpos::cli {

using json = nlohmann::ordered_json;

/// Bad configuration, missing or malformed input files. Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

json to_json(const Grid1D& g);
json to_json(const Grid2D& g);
json to_json(const GridFunction1D& f);
json to_json(const SymbolGrid& a);
json to_json(const Eigen::MatrixXd& m);
json to_json(const Eigen::MatrixXcd& m);
json to_json(const Eigen::VectorXd& v);
json to_json(const PhasePoint& z);

Grid1D grid1d_from_json(const json& j);
Grid2D grid2d_from_json(const json& j);

/// {"grid": {"x0", "dx", "K"}, "re": [...], "im": [...]}; "im" is optional.
GridFunction1D load_grid_function(const std::string& path);

/// {"grid": {"x": {...}, "p": {...}}, "re": [[...]], "im": [[...]]}, rows along x.
SymbolGrid load_symbol_grid(const std::string& path);

/// {"eta": e, "grid": {...}?, "terms": [{"alpha", "hermite_index"} | {"alpha", "values_file"}]}.
/// The grid defaults to default_grid(eta); eta_override (if nonzero) wins over the file.
SpectralMixture load_mixture(const std::string& path, double eta_override);

/// {"sigma": [[...]], "eta": e?}
Eigen::MatrixXd load_matrix(const std::string& path, const char* key);

/// Rows "x,p,re,im".
std::string symbol_csv(const SymbolGrid& a);

}  // namespace weylpos::cli
