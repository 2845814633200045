#include "tamdp/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tamdp/types.hpp"

namespace tamdp {

namespace {

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Bucket averages of v, one per `bucket` episodes.
std::vector<double> bucketed(const std::vector<double>& v, std::size_t bucket) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); i += bucket) {
    const std::size_t end = std::min(v.size(), i + bucket);
    double s = 0.0;
    for (std::size_t j = i; j < end; ++j) s += v[j];
    out.push_back(s / static_cast<double>(end - i));
  }
  return out;
}

}  // namespace

std::string learning_curve_svg(const std::vector<PlotSeries>& series, const PlotOptions& o) {
  if (series.empty()) throw Error("plot needs at least one series");
  std::size_t episodes = 0;
  for (const auto& s : series) {
    if (!s.std.empty() && s.std.size() != s.mean.size()) throw Error("plot: std and mean lengths differ");
    episodes = std::max(episodes, s.mean.size());
  }
  if (episodes == 0) throw Error("plot: series are empty");

  const double left = 60, right = 20, top = o.title.empty() ? 20 : 40, bottom = 50;
  const double pw = o.width - left - right;
  const double ph = o.height - top - bottom;
  const std::size_t bucket =
      o.bucket ? o.bucket : std::max<std::size_t>(1, episodes / static_cast<std::size_t>(std::max(1.0, pw)));

  struct Drawn {
    std::vector<double> lo, mid, hi;
  };
  std::vector<Drawn> drawn;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto& s : series) {
    Drawn d;
    d.mid = bucketed(s.mean, bucket);
    const auto sd = s.std.empty() ? std::vector<double>(d.mid.size(), 0.0) : bucketed(s.std, bucket);
    for (std::size_t i = 0; i < d.mid.size(); ++i) {
      d.lo.push_back(d.mid[i] - sd[i]);
      d.hi.push_back(d.mid[i] + sd[i]);
      ymin = std::min(ymin, d.lo.back());
      ymax = std::max(ymax, d.hi.back());
    }
    drawn.push_back(std::move(d));
  }
  if (!(ymax > ymin)) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto X = [&](double episode) { return left + pw * episode / static_cast<double>(episodes); };
  auto Y = [&](double v) { return top + ph * (ymax - v) / (ymax - ymin); };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << o.width << R"(" height=")" << o.height
     << R"(" font-family="sans-serif" font-size="11">)" << '\n';
  os << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  if (!o.title.empty())
    os << R"(<text x=")" << o.width / 2.0 << R"(" y="22" text-anchor="middle" font-size="14">)" << escape(o.title)
       << "</text>\n";

  // Axes and y ticks.
  os << R"(<rect x=")" << left << R"(" y=")" << top << R"(" width=")" << pw << R"(" height=")" << ph
     << R"(" fill="none" stroke="#444"/>)" << '\n';
  for (int i = 0; i <= 5; ++i) {
    const double v = ymin + (ymax - ymin) * i / 5.0;
    os << R"(<line x1=")" << left - 4 << R"(" x2=")" << left << R"(" y1=")" << Y(v) << R"(" y2=")" << Y(v)
       << R"(" stroke="#444"/>)";
    os << R"(<text x=")" << left - 6 << R"(" y=")" << Y(v) + 4 << R"(" text-anchor="end">)" << v << "</text>\n";
  }
  os << R"(<text x=")" << left + pw / 2 << R"(" y=")" << o.height - 10 << R"(" text-anchor="middle">episode</text>)"
     << '\n';

  if (o.episodes_per_phase > 0) {
    for (std::size_t p = 0; p * o.episodes_per_phase < episodes; ++p) {
      const double x0 = X(static_cast<double>(p * o.episodes_per_phase));
      if (p > 0)
        os << R"(<line x1=")" << x0 << R"(" x2=")" << x0 << R"(" y1=")" << top << R"(" y2=")" << top + ph
           << R"(" stroke="#999" stroke-dasharray="4,3"/>)" << '\n';
      const std::string name = p < o.phase_names.size() ? o.phase_names[p] : "phase " + std::to_string(p + 1);
      const double xm = X((static_cast<double>(p) + 0.5) * static_cast<double>(o.episodes_per_phase));
      os << R"(<text x=")" << xm << R"(" y=")" << top + ph + 16 << R"(" text-anchor="middle">)" << escape(name)
         << "</text>\n";
    }
  }

  for (std::size_t k = 0; k < drawn.size(); ++k) {
    const auto& d = drawn[k];
    const char* color = kColors[k % kColors.size()];
    auto xs = [&](std::size_t i) { return X((static_cast<double>(i) + 0.5) * static_cast<double>(bucket)); };
    if (!series[k].std.empty()) {
      os << R"(<path fill=")" << color << R"(" fill-opacity="0.18" stroke="none" d=")";
      for (std::size_t i = 0; i < d.hi.size(); ++i) os << (i ? " L" : "M") << xs(i) << ',' << Y(d.hi[i]);
      for (std::size_t i = d.lo.size(); i-- > 0;) os << " L" << xs(i) << ',' << Y(d.lo[i]);
      os << R"( Z"/>)" << '\n';
    }
    os << R"(<polyline fill="none" stroke-width="1.4" stroke=")" << color << R"(" points=")";
    for (std::size_t i = 0; i < d.mid.size(); ++i) os << (i ? " " : "") << xs(i) << ',' << Y(d.mid[i]);
    os << R"("/>)" << '\n';
    const double ly = top + 14 + 14.0 * static_cast<double>(k);
    os << R"(<line x1=")" << left + 10 << R"(" x2=")" << left + 30 << R"(" y1=")" << ly - 4 << R"(" y2=")" << ly - 4
       << R"(" stroke=")" << color << R"(" stroke-width="2"/>)";
    os << R"(<text x=")" << left + 34 << R"(" y=")" << ly << R"(">)" << escape(series[k].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace tamdp
