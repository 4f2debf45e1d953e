#include "lexidepth/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace lexidepth {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 640.0;
constexpr double kPad = 56.0;

const char* kPalette[] = {"#1b6ca8", "#d1495b", "#66a182", "#edae49",
                          "#8d6a9f", "#00798c", "#b5651d", "#3d405b"};

struct Mapper {
    double x0, x1, y0, y1;

    double px(double x) const {
        return kPad + (x - x0) / (x1 - x0) * (kWidth - 2 * kPad);
    }
    // SVG y axis points down
    double py(double y) const {
        return kHeight - kPad - (y - y0) / (y1 - y0) * (kHeight - 2 * kPad);
    }
};

Mapper data_mapper(const Embedding& e, double margin) {
    double xmin = e.at(0, 0), xmax = xmin, ymin = e.at(0, 1), ymax = ymin;
    for (std::size_t i = 1; i < e.n(); ++i) {
        xmin = std::min(xmin, e.at(i, 0));
        xmax = std::max(xmax, e.at(i, 0));
        ymin = std::min(ymin, e.at(i, 1));
        ymax = std::max(ymax, e.at(i, 1));
    }
    const double xs = xmax > xmin ? xmax - xmin : 1.0;
    const double ys = ymax > ymin ? ymax - ymin : 1.0;
    return {xmin - margin * xs, xmax + margin * xs, ymin - margin * ys, ymax + margin * ys};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void open_svg(std::ostream& out) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

// five-stop blue-to-yellow ramp over [0, 1]
std::string ramp_color(double v) {
    static const double stops[5][3] = {{68, 1, 84},     {59, 82, 139},  {33, 145, 140},
                                       {94, 201, 98},   {253, 231, 37}};
    v = std::clamp(v, 0.0, 1.0) * 4.0;
    const int lo = std::min(3, static_cast<int>(v));
    const double t = v - lo;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(stops[lo][0] + t * (stops[lo + 1][0] - stops[lo][0])),
                  static_cast<int>(stops[lo][1] + t * (stops[lo + 1][1] - stops[lo][1])),
                  static_cast<int>(stops[lo][2] + t * (stops[lo + 1][2] - stops[lo][2])));
    return buf;
}

void draw_points(const Embedding& e, const Mapper& m, const Partition* by_cluster,
                 std::ostream& out) {
    for (std::size_t i = 0; i < e.n(); ++i) {
        const double x = m.px(e.at(i, 0));
        const double y = m.py(e.at(i, 1));
        const char* color = "#1b6ca8";
        bool trimmed = false;
        if (by_cluster) {
            const int c = by_cluster->assignment[i];
            if (c == Partition::kTrimmed) {
                trimmed = true;
            } else {
                color = kPalette[static_cast<std::size_t>(c - 1) %
                                 (sizeof(kPalette) / sizeof(kPalette[0]))];
            }
        }
        if (trimmed) {
            out << "<path d=\"M" << fmt(x - 4) << ' ' << fmt(y - 4) << " L" << fmt(x + 4) << ' '
                << fmt(y + 4) << " M" << fmt(x - 4) << ' ' << fmt(y + 4) << " L" << fmt(x + 4)
                << ' ' << fmt(y - 4) << "\" stroke=\"#888888\" stroke-width=\"1.5\"/>\n";
        } else {
            out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"3.5\" fill=\""
                << color << "\"/>\n";
        }
        out << "<text x=\"" << fmt(x + 5) << "\" y=\"" << fmt(y - 5)
            << "\" font-family=\"sans-serif\" font-size=\"9\" fill=\"#333333\">"
            << escape_xml(e.labels[i]) << "</text>\n";
    }
}

void draw_frame(const Mapper& m, std::ostream& out) {
    out << "<rect x=\"" << fmt(kPad) << "\" y=\"" << fmt(kPad) << "\" width=\""
        << fmt(kWidth - 2 * kPad) << "\" height=\"" << fmt(kHeight - 2 * kPad)
        << "\" fill=\"none\" stroke=\"#555555\"/>\n";
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"10\" "
                  "fill=\"#555555\">x: [%.4g, %.4g]  y: [%.4g, %.4g]</text>\n",
                  kPad, kHeight - kPad + 28.0, m.x0, m.x1, m.y0, m.y1);
    out << buf;
}

}  // namespace

void write_scatter_svg(const Embedding& e, std::ostream& out, const Partition* by_cluster) {
    open_svg(out);
    if (e.n() > 0 && e.dim >= 2) {
        const Mapper m = data_mapper(e, 0.08);
        draw_frame(m, out);
        draw_points(e, m, by_cluster, out);
    }
    out << "</svg>\n";
}

void write_heatmap_svg(const DepthGrid& g, const Embedding& e, std::ostream& out) {
    open_svg(out);
    const Mapper m{g.x0, g.x1, g.y0, g.y1};
    const double cw = (kWidth - 2 * kPad) / static_cast<double>(g.nx);
    const double ch = (kHeight - 2 * kPad) / static_cast<double>(g.ny);
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double x = kPad + static_cast<double>(ix) * cw;
            const double y = kHeight - kPad - static_cast<double>(iy + 1) * ch;
            out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cw + 0.5)
                << "\" height=\"" << fmt(ch + 0.5) << "\" fill=\"" << ramp_color(g.at(ix, iy))
                << "\"/>\n";
        }
    }
    draw_frame(m, out);
    draw_points(e, m, nullptr, out);
    out << "</svg>\n";
}

namespace {

// marching squares: emits line segments of the iso-contour value = level
void contour_segments(const DepthGrid& g, double level, const Mapper& m, std::ostream& out,
                      const std::string& color) {
    const auto interp = [&](double a, double b) { return (level - a) / (b - a); };
    out << "<path d=\"";
    for (std::size_t iy = 0; iy + 1 < g.ny; ++iy) {
        for (std::size_t ix = 0; ix + 1 < g.nx; ++ix) {
            const double v00 = g.at(ix, iy), v10 = g.at(ix + 1, iy);
            const double v01 = g.at(ix, iy + 1), v11 = g.at(ix + 1, iy + 1);
            const double x0 = g.x_at(ix), x1 = g.x_at(ix + 1);
            const double y0 = g.y_at(iy), y1 = g.y_at(iy + 1);
            int mask = 0;
            if (v00 >= level) mask |= 1;
            if (v10 >= level) mask |= 2;
            if (v11 >= level) mask |= 4;
            if (v01 >= level) mask |= 8;
            if (mask == 0 || mask == 15) continue;

            // edge midpoints by linear interpolation
            double ex[4][2];  // bottom, right, top, left
            ex[0][0] = x0 + interp(v00, v10) * (x1 - x0);
            ex[0][1] = y0;
            ex[1][0] = x1;
            ex[1][1] = y0 + interp(v10, v11) * (y1 - y0);
            ex[2][0] = x0 + interp(v01, v11) * (x1 - x0);
            ex[2][1] = y1;
            ex[3][0] = x0;
            ex[3][1] = y0 + interp(v00, v01) * (y1 - y0);

            static const int segments[16][4] = {
                {-1, -1, -1, -1}, {3, 0, -1, -1},  {0, 1, -1, -1},  {3, 1, -1, -1},
                {1, 2, -1, -1},   {3, 0, 1, 2},    {0, 2, -1, -1},  {3, 2, -1, -1},
                {2, 3, -1, -1},   {2, 0, -1, -1},  {0, 1, 2, 3},    {2, 1, -1, -1},
                {1, 3, -1, -1},   {1, 0, -1, -1},  {0, 3, -1, -1},  {-1, -1, -1, -1}};
            const int* seg = segments[mask];
            for (int s = 0; s < 4 && seg[s] >= 0; s += 2) {
                out << 'M' << fmt(m.px(ex[seg[s]][0])) << ' ' << fmt(m.py(ex[seg[s]][1])) << 'L'
                    << fmt(m.px(ex[seg[s + 1]][0])) << ' ' << fmt(m.py(ex[seg[s + 1]][1]));
            }
        }
    }
    out << "\" stroke=\"" << color << "\" fill=\"none\" stroke-width=\"1\"/>\n";
}

}  // namespace

void write_contour_svg(const DepthGrid& g, const Embedding& e, std::ostream& out) {
    open_svg(out);
    const Mapper m{g.x0, g.x1, g.y0, g.y1};
    for (int l = 1; l <= 9; ++l)
        contour_segments(g, 0.1 * l, m, out, ramp_color(0.1 * l));
    draw_frame(m, out);
    draw_points(e, m, nullptr, out);
    out << "</svg>\n";
}

}  // namespace lexidepth
