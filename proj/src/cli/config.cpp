#include "mwo/cli/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace mwo::cli {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"scenario", {"kind", "name"}},
      {"output", {"dir", "field_binary"}},
      {"fwm", {"N1", "N2", "m", "c2", "c0", "kinetic", "drop_constant_terms", "t_end", "steps", "a0", "a2", "mass"}},
      {"pamp", {"mode", "chi", "delta", "omega_r", "t_end", "steps", "alpha_a", "alpha_p", "alpha_m", "alphas", "tau"}},
      {"pump_probe",
       {"dipole", "cavity_length", "cross_section", "probe_wavenumber", "detuning", "pump_rabi", "atom_number",
        "recoil_momentum", "mass", "pump_minus_probe"}},
      {"holo",
       {"samples", "spacing", "reading_mass", "reading_velocity", "reading_waist", "writing_wavelength", "object_width",
        "object_distance", "reference_frequency", "trap_frequency_hz", "tf_radius", "atom_number", "writing_fraction",
        "eta_scale", "thickness", "incidence", "search_lo", "search_hi", "search_steps", "search_refinements"}},
      {"sweep", {}},
  };
  return s;
}

// Physics sections a kind may use (and sweep over).
std::set<std::string> physics_sections(Kind k) {
  switch (k) {
    case Kind::fwm: return {"fwm"};
    case Kind::pamp: return {"pamp", "pump_probe"};
    case Kind::holo: return {"holo"};
  }
  return {};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool safe_token(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '+';
  });
}

// Typed access to one section of the raw map; remembers which keys were read.
class Section {
 public:
  Section(const RawConfig& raw, std::string name) : name_(std::move(name)) {
    auto it = raw.find(name_);
    if (it != raw.end()) values_ = &it->second;
  }
  bool present() const { return values_ != nullptr; }
  bool has(const std::string& k) const { return values_ && values_->count(k); }
  std::string key(const std::string& k) const { return name_ + "." + k; }
  std::string text(const std::string& k, const std::string& fallback) const {
    return has(k) ? values_->at(k) : fallback;
  }
  double real(const std::string& k, double fallback) const { return has(k) ? parse_real(key(k), values_->at(k)) : fallback; }
  double required_real(const std::string& k) const {
    if (!has(k)) throw ConfigError(key(k), "required");
    return parse_real(key(k), values_->at(k));
  }
  long long integer(const std::string& k, long long fallback) const {
    return has(k) ? parse_integer(key(k), values_->at(k)) : fallback;
  }
  bool flag(const std::string& k, bool fallback) const { return has(k) ? parse_bool(key(k), values_->at(k)) : fallback; }
  void forbid(const std::string& k, const std::string& why) const {
    if (has(k)) throw ConfigError(key(k), why);
  }

 private:
  std::string name_;
  const std::map<std::string, std::string>* values_ = nullptr;
};

int as_int(const std::string& key, long long v) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) throw ConfigError(key, "out of range");
  return static_cast<int>(v);
}

// Module preconditions surface as ConfigError naming the section.
// Module messages use their own field names; these map the ones that are not
// config keys already.
const std::map<std::string, std::string>& key_aliases(const std::string& section) {
  static const std::map<std::string, std::map<std::string, std::string>> a{
      {"fwm", {{"time", "t_end"}, {"grid", "steps"}, {"couplings", "c2"}, {"scattering", "a0"}}},
      {"pamp", {{"amplitudes", "alphas"}, {"moments", "alpha_a"}, {"means", "alpha_a"}}},
      {"pump_probe",
       {{"Delta", "detuning"}, {"N", "atom_number"}, {"recoil", "recoil_momentum"}, {"L", "cavity_length"},
        {"S", "cross_section"}, {"k", "probe_wavenumber"}, {"constants", "dipole"}}},
      {"holo",
       {{"trap_frequency", "trap_frequency_hz"}, {"search", "search_lo"}, {"incidence", "incidence"},
        {"thickness", "thickness"}}},
  };
  static const std::map<std::string, std::string> none;
  const auto it = a.find(section);
  return it == a.end() ? none : it->second;
}

// Rethrows a module PreconditionError as a ConfigError naming the first
// section key the message mentions.
template <class F>
void checked(const std::string& section, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const PreconditionError& e) {
    std::string msg = e.what();
    if (const auto colon = msg.find(": "); colon != std::string::npos && colon < 24) msg = msg.substr(colon + 2);
    const auto& keys = schema().at(section);
    const auto& aliases = key_aliases(section);
    std::string word;
    for (std::size_t i = 0; i <= msg.size(); ++i) {
      const char c = i < msg.size() ? msg[i] : ' ';
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        word += c;
        continue;
      }
      if (word.empty()) continue;
      if (keys.count(word)) throw ConfigError(section + "." + word, msg);
      if (const auto it = aliases.find(word); it != aliases.end()) throw ConfigError(section + "." + it->second, msg);
      word.clear();
    }
    throw ConfigError(section, msg);
  }
}

FwmJob make_fwm(const RawConfig& raw) {
  const Section s(raw, "fwm");
  FwmJob job;
  auto& scn = job.scenario;
  scn.N1 = as_int(s.key("N1"), s.integer("N1", 50));
  scn.N2 = as_int(s.key("N2"), s.integer("N2", 50));
  scn.m = as_int(s.key("m"), s.integer("m", 0));
  scn.c0 = s.real("c0", 0.0);
  scn.c2 = s.real("c2", 1.0);
  scn.kinetic = s.real("kinetic", 0.0);
  scn.drop_constant_terms = s.flag("drop_constant_terms", false);
  const bool scattering = s.has("a0") || s.has("a2") || s.has("mass");
  if (scattering) {
    if (!(s.has("a0") && s.has("a2") && s.has("mass")))
      throw ConfigError("fwm", "a0, a2 and mass must be given together");
    s.forbid("c2", "conflicts with a0/a2/mass");
    s.forbid("c0", "conflicts with a0/a2/mass");
    checked("fwm", [&] {
      const auto c = fwm::couplings_from_scattering({s.required_real("a0"), s.required_real("a2"), s.required_real("mass")});
      scn.c0 = c.c0;
      scn.c2 = c.c2;
    });
  }
  const double t_end = s.real("t_end", 2.0 * std::numbers::pi);
  const long long steps = s.integer("steps", 1000);
  if (!(t_end > 0.0)) throw ConfigError(s.key("t_end"), "must be positive");
  if (steps < 1 || steps > 10'000'000) throw ConfigError(s.key("steps"), "must lie in [1, 1e7]");
  scn.time_grid = fwm::uniform_grid(t_end, static_cast<std::size_t>(steps));
  checked("fwm", [&] { scn.validate(); });
  return job;
}

PampJob make_pamp(const RawConfig& raw) {
  const Section s(raw, "pamp");
  const Section pp(raw, "pump_probe");
  PampJob job;
  const std::string mode = s.text("mode", "series");
  if (mode == "series")
    job.mode = PampJob::Mode::series;
  else if (mode == "crossover")
    job.mode = PampJob::Mode::crossover;
  else
    throw ConfigError(s.key("mode"), "expected series or crossover, got '" + mode + "'");

  if (pp.present()) {
    for (const char* k : {"chi", "delta", "omega_r"}) s.forbid(k, "conflicts with [pump_probe], which derives it");
    pamp::PumpProbeInput in;
    in.dipole = pp.required_real("dipole");
    in.cavity_length = pp.required_real("cavity_length");
    in.cross_section = pp.required_real("cross_section");
    in.probe_wavenumber = pp.required_real("probe_wavenumber");
    in.detuning = pp.required_real("detuning");
    in.pump_rabi = pp.required_real("pump_rabi");
    in.atom_number = pp.required_real("atom_number");
    in.recoil_momentum = pp.required_real("recoil_momentum");
    in.mass = pp.required_real("mass");
    in.pump_minus_probe = pp.required_real("pump_minus_probe");
    checked("pump_probe", [&] { job.params = pamp::derive_params(in); });
  } else {
    job.params.chi = s.real("chi", 1.0);
    job.params.delta = s.real("delta", 0.0);
    job.params.omega_r = s.real("omega_r", 1.0);
  }
  checked("pamp", [&] { job.params.validate(); });

  if (job.mode == PampJob::Mode::series) {
    for (const char* k : {"alphas", "tau"}) s.forbid(k, "only used in crossover mode");
    const double t_end = s.real("t_end", 2.0);
    const long long steps = s.integer("steps", 40);
    if (!(t_end > 0.0)) throw ConfigError(s.key("t_end"), "must be positive");
    if (steps < 1 || steps > 10'000'000) throw ConfigError(s.key("steps"), "must lie in [1, 1e7]");
    for (long long n = 0; n <= steps; ++n) job.grid.push_back(t_end * static_cast<double>(n) / static_cast<double>(steps));
    job.alpha = {s.real("alpha_a", 0.0), s.real("alpha_p", 0.0), s.real("alpha_m", 0.0)};
    checked("pamp", [&] { pamp::GaussianState::coherent(job.alpha).validate(); });
  } else {
    for (const char* k : {"t_end", "steps", "alpha_a", "alpha_p", "alpha_m"}) s.forbid(k, "only used in series mode");
    if (!s.has("alphas")) throw ConfigError(s.key("alphas"), "required in crossover mode");
    for (const auto& v : split_list(s.text("alphas", ""))) job.alphas.emplace_back(parse_real(s.key("alphas"), v), 0.0);
    if (job.alphas.empty()) throw ConfigError(s.key("alphas"), "empty list");
    for (std::size_t n = 1; n < job.alphas.size(); ++n)
      if (std::abs(job.alphas[n]) < std::abs(job.alphas[n - 1]))
        throw ConfigError(s.key("alphas"), "must be sorted by modulus");
    job.tau = s.real("tau", 1.0);
    if (!std::isfinite(job.tau)) throw ConfigError(s.key("tau"), "must be finite");
  }
  return job;
}

HoloJob make_holo(const RawConfig& raw) {
  const Section s(raw, "holo");
  HoloJob job;
  auto& h = job.scenario;
  const long long samples = s.integer("samples", static_cast<long long>(h.samples));
  if (samples < 64 || samples > (1LL << 24)) throw ConfigError(s.key("samples"), "must lie in [64, 2^24]");
  h.samples = static_cast<std::size_t>(samples);
  h.spacing = s.real("spacing", h.spacing);
  h.reading_mass = s.real("reading_mass", h.reading_mass);
  h.reading_velocity = s.real("reading_velocity", h.reading_velocity);
  h.reading_waist = s.real("reading_waist", h.reading_waist);
  h.writing_wavelength = s.real("writing_wavelength", h.writing_wavelength);
  h.object_width = s.real("object_width", h.object_width);
  h.object_distance = s.real("object_distance", h.object_distance);
  h.reference_frequency = s.real("reference_frequency", h.reference_frequency);
  h.trap_frequency = 2.0 * std::numbers::pi * s.real("trap_frequency_hz", h.trap_frequency / (2.0 * std::numbers::pi));
  h.tf_radius = s.real("tf_radius", h.tf_radius);
  h.atom_number = s.real("atom_number", h.atom_number);
  h.writing_fraction = s.real("writing_fraction", h.writing_fraction);
  h.eta_scale = s.real("eta_scale", h.eta_scale);
  h.thickness = s.real("thickness", h.thickness);
  h.incidence = s.real("incidence", h.incidence);
  h.search.lo = s.real("search_lo", h.search.lo);
  h.search.hi = s.real("search_hi", h.search.hi);
  h.search.steps = as_int(s.key("search_steps"), s.integer("search_steps", h.search.steps));
  h.search.refinements = as_int(s.key("search_refinements"), s.integer("search_refinements", h.search.refinements));
  if (h.search.refinements < 0) throw ConfigError(s.key("search_refinements"), "must be >= 0");
  checked("holo", [&] { h.validate(); });
  return job;
}

std::variant<FwmJob, PampJob, HoloJob> make_job(Kind kind, const RawConfig& raw) {
  switch (kind) {
    case Kind::fwm: return make_fwm(raw);
    case Kind::pamp: return make_pamp(raw);
    case Kind::holo: return make_holo(raw);
  }
  throw ConfigError("scenario.kind", "unknown kind");
}

}  // namespace

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::fwm: return "fwm";
    case Kind::pamp: return "pamp";
    case Kind::holo: return "holo";
  }
  return "?";
}

double parse_real(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  double factor = 1.0;
  if (v.size() >= 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    v = trim(v.substr(0, v.size() - 2));
    if (v.empty()) return factor;
  }
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (v.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(x))
    throw ConfigError(key, "expected a finite number, got '" + value + "'");
  return x * factor;
}

long long parse_integer(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  long long x = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (v.empty() || res.ec != std::errc() || res.ptr != end) throw ConfigError(key, "expected an integer, got '" + value + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  cfg.source = text;

  boost::property_tree::ptree tree;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError(section, "key outside of any section");
    auto known = schema().find(section);
    if (known == schema().end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) {
      if (!value.empty()) throw ConfigError(section + "." + key, "nested keys are not supported");
      if (section != "sweep" && !known->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
      cfg.raw[section][key] = trim(value.data());
      if (section == "sweep") {
        const auto dot = key.find('.');
        if (dot == std::string::npos) throw ConfigError("sweep." + key, "sweep keys are written section.key");
        cfg.sweep.push_back({key.substr(0, dot), key.substr(dot + 1), split_list(value.data())});
      }
    }
  }

  const Section sc(cfg.raw, "scenario");
  if (!sc.has("kind")) throw ConfigError("scenario.kind", "required");
  const std::string kind = sc.text("kind", "");
  if (kind == "fwm")
    cfg.kind = Kind::fwm;
  else if (kind == "pamp")
    cfg.kind = Kind::pamp;
  else if (kind == "holo")
    cfg.kind = Kind::holo;
  else
    throw ConfigError("scenario.kind", "expected fwm, pamp or holo, got '" + kind + "'");
  cfg.name = sc.text("name", kind);
  if (!safe_token(cfg.name)) throw ConfigError("scenario.name", "use letters, digits, '_', '-', '.' or '+'");

  const Section out(cfg.raw, "output");
  cfg.output_dir = out.text("dir", ".");
  if (cfg.output_dir.empty()) throw ConfigError("output.dir", "empty");
  cfg.field_binary = out.flag("field_binary", false);
  if (cfg.field_binary && cfg.kind != Kind::holo) throw ConfigError("output.field_binary", "only holo scenarios write fields");

  const auto allowed = physics_sections(cfg.kind);
  for (const auto& entry : cfg.raw) {
    const auto& section = entry.first;
    const bool physics = section == "fwm" || section == "pamp" || section == "pump_probe" || section == "holo";
    if (physics && !allowed.count(section)) throw ConfigError(section, "section does not apply to kind " + kind);
  }
  for (const auto& ax : cfg.sweep) {
    const std::string key = ax.section + "." + ax.key;
    if (!allowed.count(ax.section)) throw ConfigError("sweep." + key, "can only sweep keys of " + kind + " sections");
    if (!schema().at(ax.section).count(ax.key)) throw ConfigError("sweep." + key, "unknown key");
    for (const auto& v : ax.values)
      if (!safe_token(v)) throw ConfigError("sweep." + key, "value '" + v + "' is not usable in a file name");
    for (const auto& other : cfg.sweep)
      if (&other != &ax && other.section == ax.section && other.key == ax.key) throw ConfigError("sweep." + key, "repeated");
  }

  // empty lists drop out: an axis without values is no axis
  std::vector<const SweepAxis*> axes;
  for (const auto& ax : cfg.sweep)
    if (!ax.values.empty()) axes.push_back(&ax);

  std::size_t total = 1;
  for (const auto* ax : axes) total *= ax->values.size();
  for (std::size_t n = 0; n < total; ++n) {
    // mixed-radix digits, last axis fastest
    std::vector<std::size_t> idx(axes.size());
    std::size_t rest = n;
    for (std::size_t a = axes.size(); a-- > 0;) {
      idx[a] = rest % axes[a]->values.size();
      rest /= axes[a]->values.size();
    }
    RawConfig raw = cfg.raw;
    ScenarioPoint p;
    p.base_name = cfg.name;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& ax = *axes[a];
      raw[ax.section][ax.key] = ax.values[idx[a]];
      p.overrides.emplace_back(ax.key, ax.values[idx[a]]);
      p.base_name += "__" + ax.key + "=" + ax.values[idx[a]];
    }
    if (!axes.empty()) p.base_name += "__";
    p.job = make_job(cfg.kind, raw);
    cfg.points.push_back(std::move(p));
  }

  std::set<std::string> names;
  for (const auto& p : cfg.points)
    if (!names.insert(p.base_name).second) throw ConfigError("sweep", "two points map to the same file name " + p.base_name);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::ios_base::failure("cannot read config " + path);
  return parse_config(ss.str());
}

}  // namespace mwo::cli
