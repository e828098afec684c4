#include "mwo/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "mwo/cli/config.hpp"
#include "mwo/cli/csv.hpp"

namespace mwo::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string escape(const std::string& t) {
  std::string o;
  for (char c : t) {
    if (c == '<')
      o += "&lt;";
    else if (c == '>')
      o += "&gt;";
    else if (c == '&')
      o += "&amp;";
    else
      o += c;
  }
  return o;
}

struct Tick {
  double value;
  std::string label;
};

std::vector<Tick> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {{lo, num(lo)}};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  std::vector<Tick> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    const double clean = std::abs(v) < 1e-12 * step ? 0.0 : v;
    t.push_back({clean, num(clean)});
  }
  return t;
}

std::vector<Tick> pi_ticks(double hi) {
  static const char* names[] = {"0", "π/2", "π", "3π/2", "2π", "5π/2", "3π", "7π/2", "4π"};
  std::vector<Tick> t;
  const int per = hi > 4.5 * std::numbers::pi ? 2 : 1;  // halves of pi per tick
  for (int k = 0; k * 0.5 * std::numbers::pi <= hi * (1 + 1e-9); k += per) {
    const std::string label = k < 9 ? names[k] : num(k * 0.5) + "π";
    t.push_back({k * 0.5 * std::numbers::pi, label});
  }
  return t;
}

// One set of axes mapping data to a pixel box.
struct Panel {
  double x0, y0, w, h;  // pixels, y0 = top
  double xmin, xmax, ymin, ymax;

  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

class Svg {
 public:
  Svg(double w, double h) : w_(w), h_(h) {}

  void text(double x, double y, const std::string& t, const std::string& anchor = "middle", int size = 12,
            const std::string& extra = "") {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size << "\" text-anchor=\"" << anchor
          << "\"" << extra << ">" << escape(t) << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& style = "stroke:#000;stroke-width:1") {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
          << "\" style=\"" << style << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& style) {
    body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
          << "\" style=\"" << style << "\"/>\n";
  }
  // NaN samples break the curve
  void curve(const Panel& p, const std::vector<double>& x, const std::vector<double>& y, const std::string& style) {
    std::ostringstream pts;
    auto flush = [&] {
      if (!pts.str().empty()) body_ << "<polyline fill=\"none\" style=\"" << style << "\" points=\"" << pts.str() << "\"/>\n";
      pts.str("");
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || x[i] < p.xmin || x[i] > p.xmax) {
        flush();
        continue;
      }
      pts << num(p.px(x[i])) << "," << num(p.py(std::clamp(y[i], p.ymin, p.ymax))) << " ";
    }
    flush();
  }
  void axes(const Panel& p, const std::vector<Tick>& xt, const std::vector<Tick>& yt, const std::string& xlabel,
            const std::string& ylabel) {
    rect(p.x0, p.y0, p.w, p.h, "fill:none;stroke:#000;stroke-width:1");
    for (const auto& t : xt) {
      line(p.px(t.value), p.y0 + p.h, p.px(t.value), p.y0 + p.h - 5);
      text(p.px(t.value), p.y0 + p.h + 15, t.label, "middle", 11);
    }
    for (const auto& t : yt) {
      line(p.x0, p.py(t.value), p.x0 + 5, p.py(t.value));
      text(p.x0 - 6, p.py(t.value) + 4, t.label, "end", 11);
    }
    if (!xlabel.empty()) text(p.x0 + p.w / 2, p.y0 + p.h + 32, xlabel, "middle", 13);
    if (!ylabel.empty()) {
      const double x = p.x0 - 48, y = p.y0 + p.h / 2;
      text(x, y, ylabel, "middle", 13, " transform=\"rotate(-90 " + num(x) + " " + num(y) + ")\"");
    }
  }
  std::string str() const {
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w_) << "\" height=\"" << num(h_) << "\" viewBox=\"0 0 "
      << num(w_) << " " << num(h_) << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n"
      << body_.str() << "</svg>\n";
    return o.str();
  }

 private:
  double w_, h_;
  std::ostringstream body_;
};

std::pair<double, double> finite_range(const std::vector<double>& v) {
  double lo = INFINITY, hi = -INFINITY;
  for (double x : v)
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  return {lo, hi};
}

CsvTable load_nonempty(const fs::path& path) {
  if (!fs::exists(path)) throw std::ios_base::failure("manifest lists a missing file: " + path.string());
  auto t = read_csv(path.string());
  if (t.rows.empty()) throw ConfigError(path.filename().string(), "CSV has no data rows");
  return t;
}

std::string render_fig1(const nlohmann::json& manifest, const fs::path& dir) {
  if (manifest.value("kind", "") != "fwm") throw ConfigError("fig1", "needs a manifest from an fwm run");
  struct Series {
    std::string label;
    std::vector<double> t, n1;
  };
  std::vector<Series> panels;
  for (const auto& o : manifest.at("outputs")) {
    if (o.value("role", "") != "series") continue;
    const auto table = load_nonempty(dir / o.at("file").get<std::string>());
    Series s;
    s.t = table.column("two_c2_t");
    s.n1 = table.column("n1");
    const auto& par = o.at("parameters");
    s.label = "m=" + std::to_string(par.value("m", 0)) + ", N=" +
              std::to_string(par.value("N1", 0) + par.value("N2", 0));
    panels.push_back(std::move(s));
  }
  if (panels.empty()) throw ConfigError("fig1", "manifest lists no fwm series");

  const double ph = 230, top = 30, gap = 70, left = 80, pw = 600;
  Svg svg(left + pw + 30, top + panels.size() * (ph + gap));
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& s = panels[k];
    const auto [tlo, thi] = finite_range(s.t);
    const auto [nlo, nhi] = finite_range(s.n1);
    (void)nlo;
    Panel p{left, top + k * (ph + gap), pw, ph, std::min(0.0, tlo), thi, 0.0, nhi > 0 ? 1.08 * nhi : 1.0};
    svg.axes(p, pi_ticks(p.xmax), nice_ticks(p.ymin, p.ymax), "2c₂t", "⟨a₁†a₁⟩");
    svg.curve(p, s.t, s.n1, "stroke:#1f4e9c;stroke-width:1.4");
    const std::string tag = std::string("(") + static_cast<char>('a' + static_cast<int>(k % 26)) + ") ";
    svg.text(p.x0, p.y0 - 8, tag + s.label, "start", 13);
  }
  return svg.str();
}

std::string render_fig2(const nlohmann::json& manifest, const fs::path& dir) {
  if (manifest.value("kind", "") != "holo") throw ConfigError("fig2", "needs a manifest from a holo run");
  std::string image_file, summary_file;
  for (const auto& o : manifest.at("outputs")) {
    if (o.value("role", "") == "image" && image_file.empty()) image_file = o.at("file").get<std::string>();
    if (o.value("role", "") == "summary" && summary_file.empty()) summary_file = o.at("file").get<std::string>();
  }
  if (image_file.empty() || summary_file.empty()) throw ConfigError("fig2", "manifest lacks the image or summary CSV");
  const auto image = load_nonempty(dir / image_file);
  const auto summary = load_nonempty(dir / summary_file);
  const auto x = image.column("x");
  const auto inten = image.column("intensity");
  std::map<std::string, double> q;
  {
    const auto vals = summary.column("value");
    const auto ci = std::find(summary.header.begin(), summary.header.end(), "quantity");
    if (ci == summary.header.end()) throw ConfigError("quantity", "missing column");
    const auto c = static_cast<std::size_t>(ci - summary.header.begin());
    for (std::size_t r = 0; r < summary.rows.size(); ++r) q[summary.rows[r][c]] = vals[r];
  }
  for (const char* k : {"conjugate_center", "object_width", "best_distance", "score"})
    if (!q.count(k)) throw ConfigError(k, "missing from the summary CSV");

  std::vector<double> xu(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xu[i] = x[i] * 1e6;
  const auto [xlo, xhi] = finite_range(xu);
  const auto [ilo, ihi] = finite_range(inten);
  (void)ilo;
  const double top = 40, left = 80, pw = 640, ph = 340;
  Svg svg(left + pw + 30, top + ph + 60);
  Panel p{left, top, pw, ph, xlo, xhi, 0.0, ihi > 0 ? 1.05 * ihi : 1.0};
  svg.axes(p, nice_ticks(xlo, xhi), nice_ticks(p.ymin, p.ymax), "x (µm)", "|ψ|²");
  svg.curve(p, xu, inten, "stroke:#1f4e9c;stroke-width:1.2");
  svg.text(left + pw / 2, top - 14,
           "atomic density at Δz = " + num(q["best_distance"] * 1e3) + " mm, score " + num(q["score"]), "middle", 13);

  // inset: conjugate image window against the object rectangle, both scaled to 1
  const double c = q["conjugate_center"] * 1e6, wdt = q["object_width"] * 1e6;
  Panel in{left + pw - 230, top + 20, 200, 120, c - 1.5 * wdt, c + 1.5 * wdt, 0.0, 1.15};
  std::vector<double> wx, wy;
  double wmax = 0.0;
  for (std::size_t i = 0; i < xu.size(); ++i)
    if (xu[i] >= in.xmin && xu[i] <= in.xmax) wmax = std::max(wmax, inten[i]);
  for (std::size_t i = 0; i < xu.size(); ++i)
    if (xu[i] >= in.xmin && xu[i] <= in.xmax) {
      wx.push_back(xu[i]);
      wy.push_back(wmax > 0.0 ? inten[i] / wmax : 0.0);
    }
  svg.rect(in.x0, in.y0, in.w, in.h, "fill:#fff;stroke:none");
  svg.axes(in, nice_ticks(in.xmin, in.xmax), {}, "", "");
  svg.curve(in, wx, wy, "stroke:#1f4e9c;stroke-width:1.2");
  svg.curve(in, {in.xmin, c - wdt / 2, c - wdt / 2, c + wdt / 2, c + wdt / 2, in.xmax}, {0, 0, 1, 1, 0, 0},
            "stroke:#c0392b;stroke-width:1.2;stroke-dasharray:4,3");
  svg.text(in.x0 + 4, in.y0 + 12, "image vs object", "start", 10);
  return svg.str();
}

}  // namespace

std::string plot(const std::string& manifest_path, const std::string& figure) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open manifest " + manifest_path);
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest", std::string("malformed: ") + e.what());
  }
  if (!manifest.contains("outputs") || !manifest["outputs"].is_array()) throw ConfigError("manifest", "no outputs list");
  const fs::path dir = fs::path(manifest_path).parent_path();

  std::string svg;
  try {
    if (figure == "fig1")
      svg = render_fig1(manifest, dir);
    else if (figure == "fig2")
      svg = render_fig2(manifest, dir);
    else
      throw ConfigError("figure", "unknown figure '" + figure + "' (expected fig1 or fig2)");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest", std::string("malformed: ") + e.what());
  }

  const fs::path out = dir / (figure + ".svg");
  std::ofstream o(out, std::ios::binary | std::ios::trunc);
  if (!o) throw std::ios_base::failure("cannot write " + out.string());
  o << svg;
  o.close();
  if (!o) throw std::ios_base::failure("write failed for " + out.string());
  return out.string();
}

}  // namespace mwo::cli
