#include "casimir/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "casimir/error.hpp"

namespace casimir {

int mie_truncation(double ka) {
  return static_cast<int>(std::ceil(ka + 4.05 * std::cbrt(ka) + 10.0));
}

MieSeries mie_series(double ka, int l_max) {
  if (!(ka > 0.0)) throw ConfigError("Mie size parameter must be positive");
  MieSeries s;
  s.ka = ka;
  s.l_max = l_max > 0 ? l_max : mie_truncation(ka);
  const double x = ka;
  for (int l = 1; l <= s.l_max; ++l) {
    const unsigned n = static_cast<unsigned>(l);
    const double j = std::sph_bessel(n, x), jm = std::sph_bessel(n - 1, x);
    const double y = std::sph_neumann(n, x), ym = std::sph_neumann(n - 1, x);
    // (x f_l)' = x f_{l-1} - l f_l
    const double psi = x * j, dpsi = x * jm - l * j;
    const std::complex<double> xi(x * j, x * y), dxi(x * jm - l * j, x * ym - l * y);
    s.a.push_back(dpsi / dxi);
    s.b.push_back(psi / xi);
  }
  return s;
}

double mie_rcs(double ka, double theta, Polarization pol, int extra_orders) {
  const MieSeries s = mie_series(ka, mie_truncation(ka) + std::max(0, extra_orders));
  const double mu = std::cos(theta);
  std::complex<double> S1 = 0.0, S2 = 0.0;
  double pi_prev = 0.0, pi_cur = 1.0;  // π_0, π_1
  for (int l = 1; l <= s.l_max; ++l) {
    const double tau = l * mu * pi_cur - (l + 1) * pi_prev;
    const double f = (2.0 * l + 1.0) / (l * (l + 1.0));
    S1 += f * (s.a[l - 1] * pi_cur + s.b[l - 1] * tau);
    S2 += f * (s.a[l - 1] * tau + s.b[l - 1] * pi_cur);
    const double pi_next = ((2.0 * l + 1.0) * mu * pi_cur - (l + 1.0) * pi_prev) / l;
    pi_prev = pi_cur;
    pi_cur = pi_next;
  }
  const std::complex<double> S = pol == Polarization::e_plane ? S2 : S1;
  return 4.0 * std::norm(S) / (ka * ka);
}

double pfa_sphere_sphere(double R, double Z) {
  if (!(R > 0.0) || !(Z > 0.0)) throw ConfigError("PFA needs positive radius and gap");
  return -std::pow(std::numbers::pi, 3) * R / (720.0 * Z * Z * Z);
}

double ideal_plate_pressure(double d) {
  if (!(d > 0.0)) throw ConfigError("plate separation must be positive");
  return -std::numbers::pi * std::numbers::pi / (240.0 * d * d * d * d);
}

std::vector<ReferencePoint> read_reference_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty reference file");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      out.push_back(cell);
    }
    return out;
  };
  const auto header = split(line);
  const auto zi = std::find(header.begin(), header.end(), "z_over_r") - header.begin();
  const auto fi = std::find(header.begin(), header.end(), "f_r2") - header.begin();
  if (zi == static_cast<long>(header.size()) || fi == static_cast<long>(header.size()))
    throw ConfigError(path.string() + ": header must contain z_over_r and f_r2");
  std::vector<ReferencePoint> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() <= static_cast<std::size_t>(std::max(zi, fi)))
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": missing column");
    try {
      out.push_back({std::stod(cells[zi]), std::stod(cells[fi])});
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
  }
  if (out.empty()) throw ConfigError(path.string() + ": no data rows");
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.z_over_r < b.z_over_r; });
  return out;
}

double interpolate_reference(const std::vector<ReferencePoint>& ref, double z_over_r) {
  if (ref.empty() || z_over_r < ref.front().z_over_r || z_over_r > ref.back().z_over_r)
    throw ConfigError("separation outside the reference data range");
  for (std::size_t i = 1; i < ref.size(); ++i) {
    if (z_over_r <= ref[i].z_over_r) {
      const double t = (z_over_r - ref[i - 1].z_over_r) / (ref[i].z_over_r - ref[i - 1].z_over_r);
      return ref[i - 1].f_r2 + t * (ref[i].f_r2 - ref[i - 1].f_r2);
    }
  }
  return ref.back().f_r2;
}

}  // namespace casimir
