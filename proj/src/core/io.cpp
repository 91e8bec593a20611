#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fel {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string field_to_csv(const ScalarField& f) {
  std::ostringstream os;
  os << "i,j,value\n";
  const auto& g = *f.grid;
  for (int j = 0; j < g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i) os << i << ',' << j << ',' << fmt(f.at(i, j)) << '\n';
  return os.str();
}

std::string field_to_csv(const VectorField& f) {
  std::ostringstream os;
  os << "i,j";
  for (int c = 0; c < f.dim; ++c) os << ",v" << c;
  os << '\n';
  const auto& g = *f.grid;
  for (int j = 0; j < g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i) {
      os << i << ',' << j;
      for (int c = 0; c < f.dim; ++c) os << ',' << fmt(f.at(c, g.index(i, j)));
      os << '\n';
    }
  return os.str();
}

Json grid_to_json(const PeriodicGrid& g) {
  return Json{{"n1", g.n1()}, {"n2", g.n2()}, {"tau", {g.tau().tau1, g.tau().tau2}}};
}

GridPtr grid_from_json(const Json& j) {
  require(j.contains("n1") && j.contains("n2"), ErrorCode::invalid_argument, "grid json: n1, n2 required");
  ModuliPoint tau{0.0, 1.0};
  if (j.contains("tau")) {
    require(j["tau"].is_array() && j["tau"].size() == 2, ErrorCode::invalid_argument,
            "grid json: tau must be [tau1, tau2]");
    tau.tau1 = j["tau"][0].get<double>();
    tau.tau2 = j["tau"][1].get<double>();
  }
  return make_grid(j["n1"].get<int>(), j["n2"].get<int>(), tau);
}

Json field_to_json(const VectorField& f, const std::string& label) {
  Json j;
  j["grid"] = grid_to_json(*f.grid);
  j["dim"] = f.dim;
  j["label"] = label;
  j["data"] = f.data;
  return j;
}

VectorField field_from_json(const Json& j) {
  GridPtr g = grid_from_json(j.at("grid"));
  const int dim = j.at("dim").get<int>();
  require(dim == 3 || dim == 4, ErrorCode::invalid_argument, "field json: dim must be 3 or 4");
  VectorField f(g, dim);
  const auto& data = j.at("data");
  require(data.is_array() && data.size() == f.data.size(), ErrorCode::invalid_argument,
          "field json: data size mismatch");
  for (size_t k = 0; k < f.data.size(); ++k) f.data[k] = data[k].get<double>();
  require(all_finite(f), ErrorCode::invalid_argument, "field json: non-finite values");
  return f;
}

Json immersion_to_json(const Immersion& imm) { return field_to_json(imm.phi, imm.label); }

Immersion immersion_from_json(const Json& j) {
  Immersion imm;
  imm.phi = field_from_json(j);
  imm.label = j.value("label", "file");
  return imm;
}

std::string config_hash(const Json& config) {
  const std::string dump = config.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), ErrorCode::io_failure, "cannot open for writing: " + path);
  os << content;
  require(os.good(), ErrorCode::io_failure, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorCode::io_failure, "cannot open: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace fel
