#include "symfac/system.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace symfac {

using nlohmann::json;

std::string kind_name(SystemKind k) {
  switch (k) {
    case SystemKind::Tensor:
      return "tensor";
    case SystemKind::Pencil:
      return "pencil";
    case SystemKind::YZ:
      return "YZ";
  }
  return "?";
}

const ExprPtr& SystemSpec::tensor_entry(int alpha, int beta, int j, int l) const {
  return C[((alpha - 1) * N + (beta - 1)) * n * n + (j - 1) * n + (l - 1)];
}

ExprPtr& SystemSpec::tensor_entry(int alpha, int beta, int j, int l) {
  return C[((alpha - 1) * N + (beta - 1)) * n * n + (j - 1) * n + (l - 1)];
}

RMat contract(const SystemSpec& spec, const RVec& x, const RVec& a, const RVec& b) {
  if (spec.kind != SystemKind::Tensor) throw Error("contract needs a tensor-kind system");
  RVec xi = RVec::Zero(spec.n);
  RMat m = RMat::Zero(spec.N, spec.N);
  for (int al = 1; al <= spec.N; ++al)
    for (int be = 1; be <= spec.N; ++be)
      for (int j = 1; j <= spec.n; ++j)
        for (int l = 1; l <= spec.n; ++l) {
          const ExprPtr& e = spec.tensor_entry(al, be, j, l);
          if (e) m(al - 1, be - 1) += eval(*e, x, xi) * a(j - 1) * b(l - 1);
        }
  return m;
}

RMat eval_matrix(const std::vector<ExprPtr>& entries, int N, const RVec& x, const RVec& xi) {
  RMat m(N, N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      const ExprPtr& e = entries[r * N + c];
      m(r, c) = e ? eval(*e, x, xi) : 0.0;
    }
  return m;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error("bad system input at " + path + ": " + what);
}

int get_int(const json& j, const std::string& path, const char* key, int lo, int hi) {
  if (!j.contains(key)) fail(path, std::string("missing \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  int value = v.get<int>();
  if (value < lo || value > hi)
    fail(path + "." + key, "must be in " + std::to_string(lo) + ".." + std::to_string(hi));
  return value;
}

ExprPtr get_expr(const json& v, const std::string& path, const VarScope& scope) {
  if (!v.is_string()) fail(path, "expected an expression string");
  try {
    return parse_expression(v.get<std::string>(), scope);
  } catch (const ParseError& pe) {
    fail(path, pe.what());
  }
}

std::vector<ExprPtr> get_square(const json& parent, const std::string& path, const char* key,
                                int N, const VarScope& scope) {
  if (!parent.contains(key)) fail(path, std::string("missing \"") + key + "\"");
  const json& rows = parent.at(key);
  std::string rpath = path + "." + key;
  if (!rows.is_array() || static_cast<int>(rows.size()) != N)
    fail(rpath, "expected " + std::to_string(N) + " rows");
  std::vector<ExprPtr> out(static_cast<std::size_t>(N) * N);
  for (int r = 0; r < N; ++r) {
    const json& row = rows.at(r);
    std::string rowpath = rpath + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != N)
      fail(rowpath, "expected " + std::to_string(N) + " entries");
    for (int c = 0; c < N; ++c)
      out[r * N + c] = get_expr(row.at(c), rowpath + "[" + std::to_string(c) + "]", scope);
  }
  return out;
}

RVec get_point(const json& v, const std::string& path, int n) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    fail(path, "expected an array of " + std::to_string(n) + " numbers");
  RVec p(n);
  for (int i = 0; i < n; ++i) {
    if (!v.at(i).is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    p(i) = v.at(i).get<double>();
  }
  return p;
}

}  // namespace

SystemSpec load_system(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("input is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("bad system input at $: expected an object");

  SystemSpec s;
  s.n = get_int(doc, "$", "n", 2, 16);
  s.N = get_int(doc, "$", "N", 1, 64);

  if (!doc.contains("kind") || !doc.at("kind").is_string())
    fail("$.kind", "expected \"tensor\", \"pencil\" or \"YZ\"");
  std::string kind = doc.at("kind").get<std::string>();
  if (kind == "tensor")
    s.kind = SystemKind::Tensor;
  else if (kind == "pencil")
    s.kind = SystemKind::Pencil;
  else if (kind == "YZ")
    s.kind = SystemKind::YZ;
  else
    fail("$.kind", "expected \"tensor\", \"pencil\" or \"YZ\"");

  VarScope coef{s.n, true, false, 1};      // tensor entries: x only
  VarScope symb{s.n, true, true, 2};       // pencil / YZ entries: x and transverse xi

  if (s.kind == SystemKind::Tensor) {
    if (!doc.contains("tensor") || !doc.at("tensor").is_object())
      fail("$.tensor", "missing tensor section");
    const json& t = doc.at("tensor");
    if (!t.contains("C") || !t.at("C").is_array()) fail("$.tensor.C", "expected an entry array");
    s.C.assign(static_cast<std::size_t>(s.N) * s.N * s.n * s.n, nullptr);
    const json& entries = t.at("C");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      std::string path = "$.tensor.C[" + std::to_string(i) + "]";
      const json& e = entries.at(i);
      if (!e.is_object()) fail(path, "expected an object");
      int alpha = get_int(e, path, "alpha", 1, s.N);
      int beta = get_int(e, path, "beta", 1, s.N);
      int j = get_int(e, path, "j", 1, s.n);
      int l = get_int(e, path, "l", 1, s.n);
      if (!e.contains("expr")) fail(path, "missing \"expr\"");
      ExprPtr& slot = s.tensor_entry(alpha, beta, j, l);
      if (slot) fail(path, "duplicate entry");
      slot = get_expr(e.at("expr"), path + ".expr", coef);
    }
  } else if (s.kind == SystemKind::Pencil) {
    if (!doc.contains("pencil") || !doc.at("pencil").is_object())
      fail("$.pencil", "missing pencil section");
    s.H1 = get_square(doc.at("pencil"), "$.pencil", "H1", s.N, symb);
    s.H2 = get_square(doc.at("pencil"), "$.pencil", "H2", s.N, symb);
  } else {
    if (!doc.contains("YZ") || !doc.at("YZ").is_object()) fail("$.YZ", "missing YZ section");
    s.Y = get_square(doc.at("YZ"), "$.YZ", "Y", s.N, symb);
    s.Z = get_square(doc.at("YZ"), "$.YZ", "Z", s.N, symb);
  }

  s.lo = RVec::Constant(s.n, -1.0);
  s.hi = RVec::Constant(s.n, 1.0);
  if (doc.contains("domain")) {
    const json& d = doc.at("domain");
    if (!d.is_object()) fail("$.domain", "expected an object");
    if (d.contains("lo")) s.lo = get_point(d.at("lo"), "$.domain.lo", s.n);
    if (d.contains("hi")) s.hi = get_point(d.at("hi"), "$.domain.hi", s.n);
    for (int i = 0; i < s.n; ++i)
      if (!(s.lo(i) < s.hi(i))) fail("$.domain", "lo must be strictly below hi");
  }
  return s;
}

SystemSpec load_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_system(buf.str());
}

std::string save_system(const SystemSpec& spec) {
  json doc;
  doc["n"] = spec.n;
  doc["N"] = spec.N;
  doc["kind"] = kind_name(spec.kind);

  auto square = [&](const std::vector<ExprPtr>& m) {
    json rows = json::array();
    for (int r = 0; r < spec.N; ++r) {
      json row = json::array();
      for (int c = 0; c < spec.N; ++c) {
        const ExprPtr& e = m[r * spec.N + c];
        row.push_back(e ? to_string(*e) : "0");
      }
      rows.push_back(row);
    }
    return rows;
  };

  if (spec.kind == SystemKind::Tensor) {
    json entries = json::array();
    for (int al = 1; al <= spec.N; ++al)
      for (int be = 1; be <= spec.N; ++be)
        for (int j = 1; j <= spec.n; ++j)
          for (int l = 1; l <= spec.n; ++l) {
            const ExprPtr& e = spec.tensor_entry(al, be, j, l);
            if (!e) continue;
            entries.push_back({{"alpha", al},
                               {"beta", be},
                               {"j", j},
                               {"l", l},
                               {"expr", to_string(*e)}});
          }
    doc["tensor"] = {{"C", entries}};
  } else if (spec.kind == SystemKind::Pencil) {
    doc["pencil"] = {{"H1", square(spec.H1)}, {"H2", square(spec.H2)}};
  } else {
    doc["YZ"] = {{"Y", square(spec.Y)}, {"Z", square(spec.Z)}};
  }

  doc["domain"] = {{"lo", std::vector<double>(spec.lo.data(), spec.lo.data() + spec.n)},
                   {"hi", std::vector<double>(spec.hi.data(), spec.hi.data() + spec.n)}};
  return doc.dump(2) + "\n";
}

}  // namespace symfac
