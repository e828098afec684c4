#include "mwo/cli/runner.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <thread>

#include "mwo/csv.hpp"
#include "mwo/holo/field_io.hpp"

namespace mwo::cli {

namespace fs = std::filesystem;

namespace {

struct Output {
  std::string file, role;
};

struct PointResult {
  std::vector<Output> outputs;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

PointResult run_fwm(const FwmJob& job, const fs::path& dir, const std::string& base) {
  PointResult r;
  const auto report = fwm::correlation_report(job.scenario);
  std::ostringstream csv;
  fwm::write_csv(csv, report);
  write_file(dir / (base + ".csv"), csv.str());
  r.outputs.push_back({base + ".csv", "series"});
  return r;
}

PointResult run_pamp(const PampJob& job, const fs::path& dir, const std::string& base) {
  PointResult r;
  std::ostringstream csv;
  if (job.mode == PampJob::Mode::series) {
    const auto s = pamp::run_series(pamp::GaussianState::coherent(job.alpha), job.params, job.grid);
    pamp::write_csv(csv, s);
    r.outputs.push_back({base + ".csv", "series"});
  } else {
    const auto rows = pamp::crossover_scan(job.params, job.alphas, job.tau);
    write_csv_row(csv, {"alpha", "alpha_sq", "g2_am", "classical_bound", "quantum_bound", "r_am", "gap"});
    for (const auto& row : rows)
      write_csv_row(csv, {format_double(row.alpha.real()), format_double(std::norm(row.alpha)), format_cell(row.g2_am),
                          format_cell(row.classical_bound), format_cell(row.quantum_bound), format_cell(row.r_am),
                          format_cell(row.gap)});
    r.outputs.push_back({base + ".csv", "crossover"});
  }
  write_file(dir / (base + ".csv"), csv.str());
  return r;
}

PointResult run_holo(const HoloJob& job, bool binary, const fs::path& dir, const std::string& base) {
  PointResult r;
  const auto res = holo::run_rect_hologram(job.scenario, 1);
  const auto& rec = res.reconstruction;
  r.warnings = res.warnings;

  std::ostringstream image;
  holo::write_field_csv(image, rec.image);
  write_file(dir / (base + ".csv"), image.str());
  r.outputs.push_back({base + ".csv", "image"});

  std::ostringstream scan;
  write_csv_row(scan, {"distance", "score"});
  for (const auto& [d, s] : rec.scan) write_csv_row(scan, {format_double(d), format_double(s)});
  write_file(dir / (base + ".scan.csv"), scan.str());
  r.outputs.push_back({base + ".scan.csv", "scan"});

  std::ostringstream holo_csv;
  write_csv_row(holo_csv, {"x", "density"});
  const auto& p = res.hologram.profile;
  for (std::size_t i = 0; i < p.grid.nx; ++i) write_csv_row(holo_csv, {format_double(p.grid.x(i)), format_double(p.density[i])});
  write_file(dir / (base + ".hologram.csv"), holo_csv.str());
  r.outputs.push_back({base + ".hologram.csv", "hologram"});

  std::ostringstream summary;
  write_csv_row(summary, {"quantity", "value"});
  const std::vector<std::pair<std::string, double>> rows{
      {"lambda_db", res.lambda_db},
      {"g", res.g},
      {"mu_trap", res.mu_trap},
      {"writing_strength", res.writing_strength},
      {"eta", res.model.eta},
      {"max_phase", res.diagnostics.max_phase},
      {"raman_nath_q", res.diagnostics.raman_nath_q},
      {"clipping_fraction", res.hologram.clipping_fraction},
      {"fragmented", res.hologram.fragmented ? 1.0 : 0.0},
      {"object_width", res.target.object_width},
      {"object_x0", res.target.object_x0},
      {"best_distance", rec.best_distance},
      {"score", rec.score},
      {"conjugate_center", rec.conjugate_center},
      {"real_center", rec.real_center},
      {"real_fraction", rec.real_fraction},
  };
  for (const auto& [k, v] : rows) write_csv_row(summary, {k, format_double(v)});
  write_file(dir / (base + ".summary.csv"), summary.str());
  r.outputs.push_back({base + ".summary.csv", "summary"});

  if (binary) {
    std::ostringstream bin;
    holo::write_field_binary(bin, rec.image);
    write_file(dir / (base + ".bin"), bin.str());
    r.outputs.push_back({base + ".bin", "field"});
  }
  return r;
}

nlohmann::json parameters_of(const ScenarioPoint& p) {
  nlohmann::json j = nlohmann::json::object();
  if (const auto* f = std::get_if<FwmJob>(&p.job)) {
    j["N1"] = f->scenario.N1;
    j["N2"] = f->scenario.N2;
    j["m"] = f->scenario.m;
  } else if (const auto* a = std::get_if<PampJob>(&p.job)) {
    j["chi"] = a->params.chi;
    j["delta"] = a->params.delta;
    j["omega_r"] = a->params.omega_r;
  } else if (const auto* h = std::get_if<HoloJob>(&p.job)) {
    j["samples"] = h->scenario.samples;
    j["spacing"] = h->scenario.spacing;
  }
  for (const auto& [k, v] : p.overrides) j["sweep"][k] = v;
  return j;
}

}  // namespace

std::string tool_version() { return MWO_VERSION; }

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

nlohmann::json run(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (opt.workers < 1) throw ConfigError("--workers", "must be >= 1");
  const fs::path dir = opt.out_dir ? fs::path(*opt.out_dir) : fs::path(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::ios_base::failure("cannot create output directory " + dir.string());

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<PointResult> results(cfg.points.size());
  std::vector<std::exception_ptr> errors(cfg.points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n = next++; n < cfg.points.size(); n = next++) {
      const auto& p = cfg.points[n];
      const auto s0 = std::chrono::steady_clock::now();
      try {
        if (const auto* f = std::get_if<FwmJob>(&p.job))
          results[n] = run_fwm(*f, dir, p.base_name);
        else if (const auto* a = std::get_if<PampJob>(&p.job))
          results[n] = run_pamp(*a, dir, p.base_name);
        else
          results[n] = run_holo(std::get<HoloJob>(p.job), cfg.field_binary, dir, p.base_name);
      } catch (...) {
        errors[n] = std::current_exception();
      }
      results[n].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
    }
  };
  const auto pool_size = std::min<std::size_t>(static_cast<std::size_t>(opt.workers), cfg.points.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < pool_size; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  // lowest-index failure wins, whatever the scheduling
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  nlohmann::json m;
  m["tool"] = "mwo";
  m["version"] = tool_version();
  m["config_sha256"] = sha256_hex(cfg.source);
  m["kind"] = kind_name(cfg.kind);
  m["name"] = cfg.name;
  m["workers"] = opt.workers;
  m["seed"] = opt.seed ? nlohmann::json(*opt.seed) : nlohmann::json(nullptr);
  m["outputs"] = nlohmann::json::array();
  m["warnings"] = nlohmann::json::array();
  nlohmann::json timings = nlohmann::json::array();
  for (std::size_t n = 0; n < cfg.points.size(); ++n) {
    const auto& p = cfg.points[n];
    for (const auto& o : results[n].outputs) {
      const auto path = (dir / o.file).string();
      m["outputs"].push_back({{"file", o.file},
                              {"role", o.role},
                              {"point", p.base_name},
                              {"sha256", sha256_file(path)},
                              {"bytes", fs::file_size(dir / o.file)},
                              {"parameters", parameters_of(p)}});
    }
    for (const auto& w : results[n].warnings) m["warnings"].push_back(p.base_name + ": " + w);
    timings.push_back({{"point", p.base_name}, {"seconds", results[n].seconds}});
  }
  m["timings"] = {{"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                  {"points", timings}};
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  return m;
}

}  // namespace mwo::cli
