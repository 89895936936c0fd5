// SPDX-License-Identifier: Apache-2.0
#include "denslab/io/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace denslab::io {
namespace {

Json vec_json(const Vec2& v) { return Json::array({v.x1, v.x2}); }

Vec2 vec_from(const Json& j, const char* field) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(std::string(field) + ": expected [x1, x2]");
  return {j[0].get<double>(), j[1].get<double>()};
}

const Json& require(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field))
    throw std::invalid_argument(std::string("missing field '") + field + "'");
  return j.at(field);
}

Json points_json(const std::vector<Vec2>& ps) {
  Json a = Json::array();
  for (const Vec2& p : ps) a.push_back(vec_json(p));
  return a;
}

std::vector<Vec2> points_from(const Json& j, const char* field) {
  if (!j.is_array()) throw std::invalid_argument(std::string(field) + ": expected array");
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (const Json& p : j) out.push_back(vec_from(p, field));
  return out;
}

const char* kind_name(Domain::Kind k) {
  switch (k) {
    case Domain::Kind::plane: return "plane";
    case Domain::Kind::torus: return "torus";
    case Domain::Kind::box: return "box";
  }
  return "plane";
}

}  // namespace

Json to_json(const Domain& d) {
  Json j{{"kind", kind_name(d.kind)}};
  if (d.kind != Domain::Kind::plane) {
    j["lo"] = vec_json(d.lo);
    j["hi"] = vec_json(d.hi);
  }
  return j;
}

Domain domain_from_json(const Json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "plane") return Domain::plane();
  const Vec2 lo = vec_from(require(j, "lo"), "lo"), hi = vec_from(require(j, "hi"), "hi");
  if (!(hi.x1 > lo.x1 && hi.x2 > lo.x2))
    throw std::invalid_argument("domain: hi must exceed lo");
  if (kind == "torus") return Domain::torus(lo, hi);
  if (kind == "box") return Domain::box(lo, hi);
  throw std::invalid_argument("domain.kind: unknown value '" + kind + "'");
}

Json to_json(const Grid2D& g) {
  return {{"nx", g.nx()}, {"ny", g.ny()}, {"domain", to_json(g.domain())}};
}

Grid2D grid_from_json(const Json& j) {
  const int nx = require(j, "nx").get<int>(), ny = require(j, "ny").get<int>();
  const Domain d = domain_from_json(require(j, "domain"));
  if (d.kind == Domain::Kind::torus)
    return Grid2D::torus(nx, ny, d.hi.x1 - d.lo.x1, d.hi.x2 - d.lo.x2, d.lo);
  if (d.kind == Domain::Kind::box) return Grid2D::box(nx, ny, d.lo, d.hi);
  throw std::invalid_argument("grid.domain: a grid needs a torus or box domain");
}

Json to_json(const Density& d) {
  if (const auto* g = std::get_if<GridDensity>(&d))
    return {{"representation", "grid"}, {"grid", to_json(g->grid)}, {"values", g->values}};
  const auto& p = std::get<ParticleDensity>(d);
  return {{"representation", "particles"},
          {"domain", to_json(p.domain)},
          {"positions", points_json(p.positions)},
          {"weights", p.weights}};
}

Density density_from_json(const Json& j) {
  const std::string rep = require(j, "representation").get<std::string>();
  if (rep == "grid")
    return GridDensity(grid_from_json(require(j, "grid")),
                       require(j, "values").get<std::vector<double>>());
  if (rep == "particles")
    return ParticleDensity(points_from(require(j, "positions"), "positions"),
                           require(j, "weights").get<std::vector<double>>(),
                           domain_from_json(require(j, "domain")));
  throw std::invalid_argument("representation: unknown value '" + rep + "'");
}

Json to_json(const TransportResult& r) {
  Json j{{"method", to_string(r.method)},
         {"cost", r.cost},
         {"rows", r.rows},
         {"cols", r.cols},
         {"assignment", r.assignment},
         {"coupling", r.coupling},
         {"source_potential", r.source_potential},
         {"target_potential", r.target_potential},
         {"map", points_json(r.map)},
         {"marginal_error", r.marginal_error},
         {"iterations", r.iterations},
         {"converged", r.converged}};
  j["entropic_cost"] = r.entropic_cost ? Json(*r.entropic_cost) : Json(nullptr);
  j["debiased_cost"] = r.debiased_cost ? Json(*r.debiased_cost) : Json(nullptr);
  return j;
}

TransportResult transport_result_from_json(const Json& j) {
  TransportResult r;
  r.method = parse_ot_method(require(j, "method").get<std::string>());
  r.cost = require(j, "cost").get<double>();
  if (!(r.cost >= 0.0)) throw std::invalid_argument("cost: must be nonnegative");
  const auto opt = [&](const char* f) -> std::optional<double> {
    const Json& v = require(j, f);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  };
  r.entropic_cost = opt("entropic_cost");
  r.debiased_cost = opt("debiased_cost");
  r.rows = require(j, "rows").get<std::size_t>();
  r.cols = require(j, "cols").get<std::size_t>();
  r.assignment = require(j, "assignment").get<std::vector<int>>();
  r.coupling = require(j, "coupling").get<std::vector<double>>();
  r.source_potential = require(j, "source_potential").get<std::vector<double>>();
  r.target_potential = require(j, "target_potential").get<std::vector<double>>();
  r.map = points_from(require(j, "map"), "map");
  r.marginal_error = require(j, "marginal_error").get<double>();
  r.iterations = require(j, "iterations").get<int>();
  r.converged = require(j, "converged").get<bool>();
  if (!r.coupling.empty() && r.coupling.size() != r.rows * r.cols)
    throw std::invalid_argument("coupling: size does not match rows x cols");
  if (!r.assignment.empty() && r.assignment.size() != r.rows)
    throw std::invalid_argument("assignment: size does not match rows");
  return r;
}

Json to_json(const ScalarField2D& f) { return {{"grid", to_json(f.grid)}, {"values", f.values}}; }

ScalarField2D field_from_json(const Json& j) {
  return ScalarField2D(grid_from_json(require(j, "grid")), require(j, "values").get<std::vector<double>>());
}

namespace {

ParticleDensity particles_from(const Json& j, const char* field) {
  Density d = density_from_json(require(j, field));
  auto* p = std::get_if<ParticleDensity>(&d);
  if (!p) throw std::invalid_argument(std::string(field) + ": expected a particle density");
  return std::move(*p);
}

}  // namespace

Json to_json(const SGState& s) {
  return {{"kind", "sg"},
          {"time", s.time},
          {"particles", to_json(Density(s.particles))},
          {"reference", to_json(Density(s.reference))}};
}

SGState sg_state_from_json(const Json& j) {
  if (require(j, "kind").get<std::string>() != "sg") throw std::invalid_argument("kind: expected 'sg'");
  return {particles_from(j, "particles"), particles_from(j, "reference"), require(j, "time").get<double>()};
}

Json to_json(const EulerState& s) {
  return {{"kind", "euler"}, {"time", s.time}, {"vorticity", to_json(s.vorticity)}};
}

EulerState euler_state_from_json(const Json& j) {
  if (require(j, "kind").get<std::string>() != "euler") throw std::invalid_argument("kind: expected 'euler'");
  return {field_from_json(require(j, "vorticity")), require(j, "time").get<double>()};
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace denslab::io
