#include "glc/config.hpp"

#include <cmath>
#include <sstream>

#include "glc/errors.hpp"

namespace glc {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError(key + ": " + why);
}

void check_positive(const std::string& key, double v) {
  if (!(v > 0.0)) bad(key, "must be > 0");
}

}  // namespace

ContactSegment parse_contact(const std::string& text) {
  std::vector<std::string> parts;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, ':')) parts.push_back(piece);
  if (parts.size() < 3 || parts.size() > 4)
    bad("grid.contacts", "'" + text + "' is not edge:lo:hi[:polarity]");
  ContactSegment seg;
  seg.edge = edge_from_name(parts[0]);
  try {
    seg.lo = std::stod(parts[1]);
    seg.hi = std::stod(parts[2]);
    seg.polarity = parts.size() == 4 ? std::stod(parts[3]) : 1.0;
  } catch (const std::exception&) {
    bad("grid.contacts", "'" + text + "' has a non-numeric field");
  }
  if (!(seg.lo < seg.hi))
    bad("grid.contacts", "'" + text + "' needs lo < hi");
  if (seg.polarity == 0.0)
    bad("grid.contacts", "'" + text + "' has zero polarity");
  return seg;
}

std::vector<ContactSegment> parse_contacts(const std::vector<std::string>& texts) {
  std::vector<ContactSegment> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_contact(t));
  return out;
}

void RunConfig::validate(const std::string& command) const {
  if (grid.nx < 2) bad("grid.nx", "must be >= 2");
  if (grid.ny < 2) bad("grid.ny", "must be >= 2");
  check_positive("grid.lx", grid.lx);
  check_positive("grid.ly", grid.ly);
  parse_contacts(grid.contacts);  // throws on malformed entries

  if (!(params.epsilon > 0.0 && params.epsilon <= 1.0))
    bad("params.epsilon", "must be in (0, 1]");
  check_positive("params.sigma", params.sigma);
  shape_from_name(params.shape);  // throws on unknown names
  if (params.delta > 0.0 && grid.contacts.empty())
    bad("params.delta", "a delta target needs contact segments to drive");

  check_positive("solver.tol", solver.tol);
  if (solver.max_iter < 1) bad("solver.max_iter", "must be >= 1");
  check_positive("solver.delta_guard", solver.delta_guard);
  if (solver.dt < 0.0) bad("solver.dt", "must be >= 0 (0 = auto)");
  check_positive("solver.T", solver.t_final);
  if (solver.sample_every < 1) bad("solver.sample_every", "must be >= 1");
  if (solver.margin < 0.0) bad("solver.margin", "must be >= 0");
  if (solver.perturb < 0.0) bad("solver.perturb", "must be >= 0");
  if (solver.fit_t0 >= 0.0 && solver.fit_t1 >= 0.0 && !(solver.fit_t0 < solver.fit_t1))
    bad("solver.fit_t0", "fit window needs fit_t0 < fit_t1");

  if (output.k < 1) bad("output.k", "must be >= 1");
  if (output.mode != "auto" && output.mode != "dense" && output.mode != "iterative")
    bad("output.mode", "'" + output.mode + "' is not auto|dense|iterative");
  if (output.dir.empty()) bad("output.dir", "must not be empty");

  if (command == "sweep") {
    if (sweep.axis != "delta" && sweep.axis != "epsilon" && sweep.axis != "sigma")
      bad("sweep.axis", "'" + sweep.axis + "' is not delta|epsilon|sigma");
    if (sweep.values.empty()) bad("sweep.values", "must not be empty");
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
      if (!(sweep.values[i] > 0.0)) bad("sweep.values", "entries must be > 0");
      if (i > 0 && !(sweep.values[i] > sweep.values[i - 1]))
        bad("sweep.values", "entries must be strictly increasing");
      if (sweep.axis == "epsilon" && sweep.values[i] > 1.0)
        bad("sweep.values", "epsilon values must be <= 1");
    }
    if (sweep.metric != "correction" && sweep.metric != "rho0-deviation")
      bad("sweep.metric", "'" + sweep.metric + "' is not correction|rho0-deviation");
    if (sweep.slope_tol <= 0.0) bad("sweep.slope_tol", "must be > 0");
    if (sweep.threads < 1) bad("sweep.threads", "must be >= 1");
    if ((sweep.axis == "delta" || sweep.axis == "epsilon") && grid.contacts.empty())
      bad("sweep.axis", "a " + sweep.axis + " sweep needs contact segments");
  }
}

Grid RunConfig::make_grid() const {
  return Grid(grid.nx, grid.ny, grid.lx, grid.ly, parse_contacts(grid.contacts));
}

double RunConfig::resolved_amplitude(const Grid& g) const {
  if (params.delta >= 0.0) {
    if (params.delta == 0.0) return 0.0;
    return amplitude_for_delta(g, shape_from_name(params.shape), params.epsilon,
                               params.delta);
  }
  return params.amplitude;
}

CurrentProfile RunConfig::make_profile(const Grid& g) const {
  return CurrentProfile(g, resolved_amplitude(g), shape_from_name(params.shape));
}

ModelParams RunConfig::make_params(const CurrentProfile& j) const {
  return ModelParams(params.epsilon, params.sigma, j);
}

}  // namespace glc
