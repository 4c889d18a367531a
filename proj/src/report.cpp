#include "stokeseg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stokeseg/types.hpp"

namespace stokeseg {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("Cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("Write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("Cannot move '" + tmp + "' to '" + path + "'");
}

}  // namespace

std::string csv_header() {
  return "method,h,nu,rho,err_u_triple,rate_u,err_p_l2,rate_p,err_p_proj,cond2,"
         "assemble_s,solve_s";
}

std::string csv_line(const RunRecord& r) {
  std::string out = r.method;
  for (double v : {r.h, r.nu, r.rho, r.err.u_triple, r.rate_u, r.err.p_l2, r.rate_p,
                   r.err.p_proj, r.cond2, r.assemble_s, r.solve_s}) {
    out += ',';
    out += fmt(v);
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::string content = csv_header() + "\n";
  for (const RunRecord& r : records) content += csv_line(r) + "\n";
  write_atomic(path, content);
}

void write_vtk(const std::string& path, const WeakGradient& wg, const EGField& u,
               const PressureField& p) {
  const EGSpace& s = *wg.space;
  const SimplicialMesh& mesh = *s.mesh;
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n";
  out << "stokeseg solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";

  char buf[96];
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Vec3& x : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.12g %.12g %.12g\n", x[0], x[1], x[2]);
    out << buf;
  }

  const int vpc = mesh.verts_per_cell();
  out << "CELLS " << mesh.n_cells() << " " << mesh.n_cells() * (vpc + 1) << "\n";
  for (int t = 0; t < mesh.n_cells(); ++t) {
    out << vpc;
    for (int k = 0; k < vpc; ++k) out << " " << mesh.cells[t][k];
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_cells() << "\n";
  const int vtk_type = mesh.dim == 2 ? 5 : 10;  // triangle / tetrahedron
  for (int t = 0; t < mesh.n_cells(); ++t) out << vtk_type << "\n";

  out << "POINT_DATA " << mesh.n_vertices() << "\n";
  out << "VECTORS u_continuous double\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const Vec3 uv = u.continuous_at_vertex(v);
    std::snprintf(buf, sizeof(buf), "%.12g %.12g %.12g\n", uv[0], uv[1], uv[2]);
    out << buf;
  }

  out << "CELL_DATA " << mesh.n_cells() << "\n";
  const auto scalar_field = [&](const char* name, const std::function<double(int)>& value) {
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int t = 0; t < mesh.n_cells(); ++t) {
      std::snprintf(buf, sizeof(buf), "%.12g\n", value(t));
      out << buf;
    }
  };
  scalar_field("enrichment_coeff", [&](int t) { return u.enrichment(t); });
  scalar_field("pressure", [&](int t) { return p.values[t]; });
  scalar_field("weak_div_u", [&](int t) { return wg.divergence_of_field(u, t); });

  write_atomic(path, out.str());
}

namespace {

constexpr double kW = 640.0, kH = 460.0;
constexpr double kML = 70.0, kMR = 20.0, kMT = 40.0, kMB = 50.0;

const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  return palette[i % 6];
}

std::string xml_escape(const std::string& s) {
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

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series) {
  // keep only points that can live on log axes
  std::vector<PlotSeries> kept;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool any = false;
  for (const PlotSeries& s : series) {
    PlotSeries k{s.label, {}};
    for (const auto& pt : s.points) {
      if (!(pt[0] > 0.0) || !(pt[1] > 0.0)) continue;
      if (!std::isfinite(pt[0]) || !std::isfinite(pt[1])) continue;
      const double lx = std::log10(pt[0]), ly = std::log10(pt[1]);
      if (!any) {
        xmin = xmax = lx;
        ymin = ymax = ly;
        any = true;
      } else {
        xmin = std::min(xmin, lx);
        xmax = std::max(xmax, lx);
        ymin = std::min(ymin, ly);
        ymax = std::max(ymax, ly);
      }
      k.points.push_back({lx, ly});
    }
    if (!k.points.empty()) kept.push_back(std::move(k));
  }
  if (!any) {
    xmin = ymin = -1.0;
    xmax = ymax = 1.0;
  }
  if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
  const double padx = 0.05 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
  xmin -= padx; xmax += padx;
  ymin -= pady; ymax += pady;

  const auto px = [&](double lx) { return kML + (lx - xmin) / (xmax - xmin) * (kW - kML - kMR); };
  const auto py = [&](double ly) { return kH - kMB - (ly - ymin) / (ymax - ymin) * (kH - kMT - kMB); };

  std::ostringstream out;
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">" << xml_escape(title) << "</text>\n";

  // frame
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                kML, kMT, kW - kML - kMR, kH - kMT - kMB);
  out << buf;

  // decade ticks
  for (int e = static_cast<int>(std::ceil(xmin)); e <= static_cast<int>(std::floor(xmax)); ++e) {
    const double X = px(e);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#cccccc\"/>\n"
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"11\" "
                  "font-family=\"sans-serif\">1e%d</text>\n",
                  X, kMT, X, kH - kMB, X, kH - kMB + 16.0, e);
    out << buf;
  }
  for (int e = static_cast<int>(std::ceil(ymin)); e <= static_cast<int>(std::floor(ymax)); ++e) {
    const double Y = py(e);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#cccccc\"/>\n"
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" font-size=\"11\" "
                  "font-family=\"sans-serif\">1e%d</text>\n",
                  kML, Y, kW - kMR, Y, kML - 6.0, Y + 4.0, e);
    out << buf;
  }

  // axis labels
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"13\" "
                "font-family=\"sans-serif\">%s</text>\n",
                kML + (kW - kML - kMR) / 2, kH - 12.0, xml_escape(xlabel).c_str());
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"16\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"13\" "
                "font-family=\"sans-serif\" transform=\"rotate(-90 16 %.2f)\">%s</text>\n",
                kMT + (kH - kMT - kMB) / 2, kMT + (kH - kMT - kMB) / 2,
                xml_escape(ylabel).c_str());
  out << buf;

  for (std::size_t si = 0; si < kept.size(); ++si) {
    const char* color = series_color(si);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& pt : kept[si].points) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(pt[0]), py(pt[1]));
      out << buf;
    }
    out << "\"/>\n";
    for (const auto& pt : kept[si].points) {
      std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n",
                    px(pt[0]), py(pt[1]), color);
      out << buf;
    }
    // legend entry
    const double ly = kMT + 14.0 + 16.0 * static_cast<double>(si);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                  "stroke-width=\"2\"/>\n"
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" font-family=\"sans-serif\">%s"
                  "</text>\n",
                  kW - kMR - 150.0, ly, kW - kMR - 126.0, ly, color, kW - kMR - 120.0, ly + 4.0,
                  xml_escape(kept[si].label).c_str());
    out << buf;
  }

  out << "</svg>\n";
  write_atomic(path, out.str());
}

}  // namespace stokeseg
