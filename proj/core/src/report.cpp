#include "symfac/report.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace symfac {

bool Tolerances::set(const std::string& name, double value) {
  if (name == "sym") sym = value;
  else if (name == "indep") indep = value;
  else if (name == "pd") pd = value;
  else if (name == "blocks") blocks = value;
  else if (name == "root") root = value;
  else if (name == "proj") proj = value;
  else if (name == "cluster") cluster = value;
  else if (name == "diag") diag = value;
  else if (name == "comm") comm = value;
  else if (name == "rank") rank = value;
  else if (name == "contour") contour = value;
  else if (name == "quad") quad = value;
  else if (name == "m_min") m_min = value;
  else return false;
  return true;
}

const char* version() { return "0.1.0"; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  // shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

std::string describe(const Tolerances& tol) {
  const std::pair<const char*, double> items[] = {
      {"sym", tol.sym},         {"indep", tol.indep}, {"pd", tol.pd},
      {"blocks", tol.blocks},   {"root", tol.root},   {"proj", tol.proj},
      {"cluster", tol.cluster}, {"diag", tol.diag},   {"comm", tol.comm},
      {"rank", tol.rank},       {"contour", tol.contour}, {"quad", tol.quad},
      {"m_min", tol.m_min}};
  std::string out;
  for (const auto& [name, value] : items) {
    if (!out.empty()) out += ",";
    out += name;
    out += "=";
    out += format_number(value);
  }
  return out;
}

}  // namespace symfac
