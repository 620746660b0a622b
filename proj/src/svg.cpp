#include "limitset/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "limitset/errors.hpp"

namespace limitset {

namespace {

constexpr double kSize = 480;
constexpr double kScale = 400;
constexpr double kOriginX = 40, kOriginY = 440;

struct Pt {
  double x, y;
};

// Wall directions: alpha_12 = 0 and alpha_23 = 0 in the 2D Cartan plane.
Pt chart(double x) {
  const double c = std::cos(M_PI / 3), s = std::sin(M_PI / 3);
  const double px = x * 1.0 + (1 - x) * c, py = (1 - x) * s;
  return {kOriginX + kScale * px, kOriginY - kScale * py};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string cone_svg(const ConeEstimate& est, const std::optional<AVector>& marked, const std::string& title) {
  if (est.n != 3) throw DimensionError("cone_svg draws n = 3 estimates only");
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
    << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    o << "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"12\">" << escape(title) << "</text>\n";
  const Pt w1 = chart(1), w2 = chart(0);
  o << "<path d=\"M" << fmt(kOriginX) << ' ' << fmt(kOriginY) << " L" << fmt(w1.x) << ' ' << fmt(w1.y) << " M"
    << fmt(kOriginX) << ' ' << fmt(kOriginY) << " L" << fmt(w2.x) << ' ' << fmt(w2.y)
    << "\" stroke=\"black\" stroke-width=\"1.5\" fill=\"none\"/>\n";
  o << "<path d=\"M" << fmt(w1.x) << ' ' << fmt(w1.y) << " L" << fmt(w2.x) << ' ' << fmt(w2.y)
    << "\" stroke=\"#999\" stroke-dasharray=\"4 3\" fill=\"none\"/>\n";
  if (est.hull.size() >= 2) {
    o << "<path d=\"M" << fmt(kOriginX) << ' ' << fmt(kOriginY);
    for (std::size_t i : est.hull) {
      const Pt p = chart(est.rays[i].slice[0]);
      o << " L" << fmt(p.x) << ' ' << fmt(p.y);
    }
    o << " Z\" fill=\"#cfe3f7\" stroke=\"#2a6fb0\" stroke-width=\"1\"/>\n";
  }
  for (const auto& r : est.rays) {
    const Pt p = chart(r.slice[0]);
    o << "<path d=\"M" << fmt(kOriginX) << ' ' << fmt(kOriginY) << " L" << fmt(p.x) << ' ' << fmt(p.y)
      << "\" stroke=\"#555\" stroke-width=\"0.4\" fill=\"none\"/>\n";
    o << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"2\" fill=\"#333\"/>\n";
  }
  if (marked) {
    const Pt p = chart(slice_coordinates(*marked)[0]);
    o << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"5\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
  }
  o << "<text x=\"" << fmt(w1.x - 60) << "\" y=\"" << fmt(w1.y + 20)
    << "\" font-family=\"monospace\" font-size=\"11\">alpha_23 = 0</text>\n";
  o << "<text x=\"" << fmt(w2.x + 8) << "\" y=\"" << fmt(w2.y + 4)
    << "\" font-family=\"monospace\" font-size=\"11\">alpha_12 = 0</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace limitset
