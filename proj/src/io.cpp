#include "gptkit/io.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>

#include "gptkit/error.hpp"

namespace gptkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NotAState: return "NotAState";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::ScaleLimit: return "ScaleLimit";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::InvalidSetup: return "InvalidSetup";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::WrongSlitCount: return "WrongSlitCount";
    case ErrorCode::InvalidKraus: return "InvalidKraus";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
  }
  return "Unknown";
}

}  // namespace gptkit

namespace gptkit::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::InvalidArgument, what); }

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing \"") + key + "\"");
  return j.at(key);
}

double number(const json& j) {
  if (!j.is_number()) bad("expected a number, got " + j.dump());
  return j.get<double>();
}

int integer(const json& j) {
  if (!j.is_number_integer()) bad("expected an integer, got " + j.dump());
  return j.get<int>();
}

Complex complex_entry(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0]), number(j[1])};
  bad("complex entries are [re, im] pairs");
}

}  // namespace

json parse_json(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json(text);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i]);
  return v;
}

json vectors_to_json(const std::vector<Eigen::VectorXd>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vector_to_json(v));
  return out;
}

std::vector<Eigen::VectorXd> vectors_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of vectors");
  std::vector<Eigen::VectorXd> out;
  for (const auto& v : j) out.push_back(vector_from_json(v));
  return out;
}

json complex_matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMatrix complex_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("expected a nonempty matrix");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto m = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  CMatrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) bad("matrix rows must have equal length");
    for (Eigen::Index k = 0; k < m; ++k) out(i, k) = complex_entry(row[static_cast<std::size_t>(k)]);
  }
  return out;
}

json to_json(const StateSpace& space) {
  json out;
  out["kind"] = std::string(to_string(space.kind()));
  switch (space.kind()) {
    case SpaceKind::Polytopic: {
      json verts = json::array();
      for (Eigen::Index i = 0; i < space.num_vertices(); ++i) verts.push_back(vector_to_json(space.vertex(i)));
      out["vertices"] = verts;
      break;
    }
    case SpaceKind::Quantum:
      out["N"] = space.hilbert_dim();
      break;
    case SpaceKind::Ball:
      out["d"] = space.ball_dim();
      break;
  }
  out["u"] = vector_to_json(space.unit());
  return out;
}

StateSpace state_space_from_json(const json& j) {
  const std::string kind = member(j, "kind").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "min" || kind == "max") return composite_from_json(j).as_state_space();
  if (kind == "quantum") return make_quantum(integer(member(j, "N")));
  if (kind == "ball") return make_ball(integer(member(j, "d")));
  if (kind == "classical") return make_classical(integer(member(j, "N")));
  if (kind == "gbit") return make_gbit();
  if (kind == "polytopic") {
    const auto verts = vectors_from_json(member(j, "vertices"));
    const Eigen::VectorXd u = vector_from_json(member(j, "u"));
    if (verts.empty()) bad("a polytopic space needs at least one vertex");
    Eigen::MatrixXd cols(u.size(), static_cast<Eigen::Index>(verts.size()));
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (verts[i].size() != u.size()) fail(ErrorCode::DimensionMismatch, "vertex and unit lengths differ");
      cols.col(static_cast<Eigen::Index>(i)) = verts[i];
    }
    return StateSpace::polytopic(std::move(cols), u);
  }
  bad("unknown state-space kind \"" + kind + "\"");
}

json to_json(const CompositeSpace& composite, bool with_vertices) {
  json out;
  out["kind"] = std::string(to_string(composite.kind()));
  out["factors"] = json::array({to_json(composite.factor_a()), to_json(composite.factor_b())});
  out["u"] = vector_to_json(composite.unit());
  if (composite.kind() == CompositeKind::Min || with_vertices) {
    out["vertices"] = vectors_to_json(composite.kind() == CompositeKind::Min ? composite.vertices()
                                                                              : enumerate_vertices(composite));
  }
  if (composite.kind() == CompositeKind::Max) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < composite.inequalities().rows(); ++i) {
      rows.push_back(vector_to_json(composite.inequalities().row(i).transpose()));
    }
    out["inequalities"] = rows;
  }
  return out;
}

CompositeSpace composite_from_json(const json& j) {
  const json& factors = member(j, "factors");
  if (!factors.is_array() || factors.size() != 2) bad("a composite has exactly two factors");
  const StateSpace a = state_space_from_json(factors[0]);
  const StateSpace b = state_space_from_json(factors[1]);
  const std::string kind = member(j, "kind").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "min") return min_tensor(a, b);
  if (kind == "max") return max_tensor(a, b);
  bad("composite kind must be \"min\" or \"max\"");
}

std::vector<Eigen::VectorXd> states_from_json(const json& j) {
  if (j.is_object()) return vectors_from_json(member(j, "states"));
  return vectors_from_json(j);
}

json to_json(const bell::ProbTable222& table) {
  json p = json::array();
  for (double v : table.p) p.push_back(v);
  return json{{"p", p}};
}

bell::ProbTable222 table_from_json(const json& j) {
  const json& p = j.is_object() ? member(j, "p") : j;
  if (!p.is_array()) bad("table must be {\"p\": [16 numbers]}");
  std::vector<double> values;
  for (const auto& v : p) values.push_back(number(v));
  return bell::ProbTable222::from_flat(values);
}

std::string table_to_csv(const bell::ProbTable222& table) {
  std::ostringstream out;
  out << std::setprecision(17) << "x,y,a,b,p\n";
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a : {-1, 1}) {
        for (int b : {-1, 1}) out << x << ',' << y << ',' << a << ',' << b << ',' << table(a, b, x, y) << '\n';
      }
    }
  }
  return out.str();
}

std::string table_to_text(const bell::ProbTable222& table) {
  std::ostringstream out;
  out << " x  y   a   b  P(a,b|x,y)\n";
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a : {-1, 1}) {
        for (int b : {-1, 1}) {
          out << std::setw(2) << x << std::setw(3) << y << std::setw(4) << a << std::setw(4) << b << "  "
              << std::setprecision(17) << table(a, b, x, y) << '\n';
        }
      }
    }
  }
  return out.str();
}

bell::ProbTable222 read_table(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) bad("empty table input");
  if (text[first] == '{' || text[first] == '[') return table_from_json(parse_json(text));

  std::array<bool, 16> seen{};
  std::vector<double> values(16, 0.0);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const char c = line[start];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')) continue;
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream fields(line);
    int x, y, a, b;
    double p;
    if (!(fields >> x >> y >> a >> b >> p)) bad("table rows need five fields: x y a b p");
    std::string rest;
    if (fields >> rest) bad("table rows need five fields: x y a b p");
    if ((x != 0 && x != 1) || (y != 0 && y != 1) || (a != -1 && a != 1) || (b != -1 && b != 1)) {
      bad("table row has labels out of range");
    }
    const std::size_t k = bell::table_index(x, y, a, b);
    if (seen[k]) bad("table row repeated");
    seen[k] = true;
    values[k] = p;
  }
  for (bool s : seen) {
    if (!s) bad("table needs all 16 rows");
  }
  return bell::ProbTable222::from_flat(values);
}

interference::SlitExperiment slit_experiment_from_json(const json& j) {
  CMatrix rho = complex_matrix_from_json(member(j, "rho"));
  CMatrix q = complex_matrix_from_json(member(j, "Q"));
  if (j.contains("M") && integer(j.at("M")) != rho.rows()) {
    fail(ErrorCode::DimensionMismatch, "\"M\" does not match the size of rho");
  }
  return interference::SlitExperiment::create(std::move(rho), std::move(q));
}

json to_json(const interference::SlitExperiment& exp) {
  return json{{"M", exp.slits()}, {"rho", complex_matrix_to_json(exp.rho())}, {"Q", complex_matrix_to_json(exp.detector())}};
}

interference::BlockerSet blockers_from_json(const json& j) {
  if (j.is_object() && j.contains("preset")) {
    const std::string preset = j.at("preset").is_string() ? j.at("preset").get<std::string>() : "";
    if (preset == "orthogonal") return interference::orthogonal_blockers();
    if (preset == "rotated") return interference::rotated_blockers(number(member(j, "angle")));
    if (preset == "depolarizing") return interference::depolarizing_blockers(number(member(j, "p")));
    if (preset == "graded") return interference::graded_depolarizing_blockers(number(member(j, "p")));
    bad("unknown blocker preset \"" + preset + "\"");
  }
  const json& list = member(j, "blockers");
  if (!list.is_array() || list.size() != 7) bad("expected 7 blockers, one per nonempty subset of {1,2,3}");
  const auto& subsets = interference::blocker_subsets();
  std::array<std::optional<interference::BlockingMap>, 7> maps;
  for (const auto& entry : list) {
    std::vector<int> subset;
    for (const auto& s : member(entry, "subset")) subset.push_back(integer(s));
    std::sort(subset.begin(), subset.end());
    std::size_t k = 0;
    while (k < 7 && subsets[k] != subset) ++k;
    if (k == 7) bad("blocker subset " + member(entry, "subset").dump() + " is not a nonempty subset of {1,2,3}");
    if (maps[k]) bad("blocker subset " + member(entry, "subset").dump() + " given twice");
    std::vector<CMatrix> kraus;
    for (const auto& m : member(entry, "kraus")) kraus.push_back(complex_matrix_from_json(m));
    maps[k] = interference::BlockingMap::create(std::move(kraus));
  }
  return {*maps[0], *maps[1], *maps[2], *maps[3], *maps[4], *maps[5], *maps[6]};
}

}  // namespace gptkit::io
