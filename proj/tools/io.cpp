#include "io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace weylpos::cli {

json read_json(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("file not found: " + path);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << text;
}

json to_json(const Grid1D& g) { return json{{"x0", g.x0}, {"dx", g.dx}, {"K", g.K}}; }

json to_json(const Grid2D& g) { return json{{"x", to_json(g.x)}, {"p", to_json(g.p)}}; }

json to_json(const GridFunction1D& f) {
  json re = json::array(), im = json::array();
  for (Eigen::Index k = 0; k < f.values.size(); ++k) {
    re.push_back(f.values(k).real());
    im.push_back(f.values(k).imag());
  }
  return json{{"grid", to_json(f.grid)}, {"re", re}, {"im", im}};
}

json to_json(const SymbolGrid& a) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
    json r = json::array(), m = json::array();
    for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
      r.push_back(a.values(i, j).real());
      m.push_back(a.values(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(m));
  }
  return json{{"grid", to_json(a.grid)}, {"re", re}, {"im", im}};
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    out.push_back(std::move(r));
  }
  return out;
}

json to_json(const Eigen::MatrixXcd& m) {
  return json{{"re", to_json(Eigen::MatrixXd(m.real()))}, {"im", to_json(Eigen::MatrixXd(m.imag()))}};
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const PhasePoint& z) { return json{{"x", z.x1()}, {"p", z.p1()}}; }

Grid1D grid1d_from_json(const json& j) {
  try {
    return Grid1D(j.at("x0").get<double>(), j.at("dx").get<double>(), j.at("K").get<std::size_t>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad grid description: ") + e.what());
  }
}

Grid2D grid2d_from_json(const json& j) {
  try {
    return Grid2D{grid1d_from_json(j.at("x")), grid1d_from_json(j.at("p"))};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad grid description: ") + e.what());
  }
}

GridFunction1D load_grid_function(const std::string& path) {
  const json j = read_json(path);
  try {
    const Grid1D g = grid1d_from_json(j.at("grid"));
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
    if (re.size() != g.K || im.size() != g.K) throw ConfigError(path + ": value count does not match grid K");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(g.K));
    for (std::size_t k = 0; k < g.K; ++k) v(static_cast<Eigen::Index>(k)) = cd(re[k], im[k]);
    return GridFunction1D(g, v);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SymbolGrid load_symbol_grid(const std::string& path) {
  const json j = read_json(path);
  try {
    const Grid2D g = grid2d_from_json(j.at("grid"));
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    std::vector<std::vector<double>> im;
    if (j.contains("im")) im = j.at("im").get<std::vector<std::vector<double>>>();
    if (re.size() != g.x.K || (!im.empty() && im.size() != g.x.K)) throw ConfigError(path + ": row count does not match grid");
    SymbolGrid a = SymbolGrid::zeros(g);
    for (std::size_t i = 0; i < g.x.K; ++i) {
      if (re[i].size() != g.p.K || (!im.empty() && im[i].size() != g.p.K)) {
        throw ConfigError(path + ": column count does not match grid");
      }
      for (std::size_t k = 0; k < g.p.K; ++k) {
        a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cd(re[i][k], im.empty() ? 0.0 : im[i][k]);
      }
    }
    return a;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SpectralMixture load_mixture(const std::string& path, double eta_override) {
  const json j = read_json(path);
  try {
    double e = eta_override;
    if (e == 0.0) {
      if (!j.contains("eta")) throw ConfigError(path + ": eta missing (pass --eta or set \"eta\")");
      e = j.at("eta").get<double>();
    }
    const EtaParam eta(e);
    const Grid1D g = j.contains("grid") ? grid1d_from_json(j.at("grid")) : default_grid(eta);
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<double> alpha;
    std::vector<GridFunction1D> fs;
    for (const auto& t : j.at("terms")) {
      alpha.push_back(t.at("alpha").get<double>());
      if (t.contains("hermite_index")) {
        fs.push_back(hermite_function(t.at("hermite_index").get<std::size_t>(), g, eta));
      } else if (t.contains("values_file")) {
        std::filesystem::path p = t.at("values_file").get<std::string>();
        if (p.is_relative()) p = base / p;
        GridFunction1D f = load_grid_function(p.string());
        if (!f.grid.same_as(g)) throw ConfigError(p.string() + ": function grid differs from the mixture grid");
        fs.push_back(std::move(f));
      } else {
        throw ConfigError(path + ": each term needs hermite_index or values_file");
      }
    }
    return SpectralMixture(g, eta, alpha, fs);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Eigen::MatrixXd load_matrix(const std::string& path, const char* key) {
  const json j = read_json(path);
  try {
    const auto rows = j.at(key).get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != m.cols()) throw ConfigError(path + ": ragged matrix");
      for (std::size_t k = 0; k < rows[i].size(); ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string symbol_csv(const SymbolGrid& a) {
  std::ostringstream os;
  os.precision(17);
  os << "x,p,re,im\n";
  for (std::size_t i = 0; i < a.grid.x.K; ++i) {
    for (std::size_t k = 0; k < a.grid.p.K; ++k) {
      const cd v = a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      os << a.x(i) << ',' << a.p(k) << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  return os.str();
}

}  // namespace weylpos::cli
