#include "gptkit/cli.hpp"

#include <CLI11.hpp>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include "gptkit/bell.hpp"
#include "gptkit/bloch.hpp"
#include "gptkit/composites.hpp"
#include "gptkit/distinguishability.hpp"
#include "gptkit/error.hpp"
#include "gptkit/interference.hpp"
#include "gptkit/io.hpp"

namespace gptkit::cli {

namespace {

using io::json;

enum class Format { Text, Json, Csv };

// Text output only; values below 1e-12 are round-off and print as 0.
std::string fmt(double v) {
  if (std::fabs(v) < 1e-12) v = 0.0;
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::string fmt_vector(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v(i));
  return out + "]";
}

class Session {
 public:
  Session(std::istream& in, Format format, std::uint64_t seed) : in_(in), format_(format), seed_(seed) {}

  Format format() const { return format_; }
  std::uint64_t seed() const { return seed_; }
  std::ostringstream& out() { return body_; }
  std::string body() const { return body_.str(); }

  std::string read(const std::string& path) {
    if (path == "-") {
      if (stdin_used_) fail(ErrorCode::InvalidArgument, "standard input can only be read once");
      stdin_used_ = true;
      return std::string(std::istreambuf_iterator<char>(in_), std::istreambuf_iterator<char>());
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }

  json read_json(const std::string& path) { return io::parse_json(read(path)); }

  void no_csv(const char* command) const {
    if (format_ == Format::Csv) {
      fail(ErrorCode::InvalidArgument, std::string("csv output is only available for tables and correlators, not ") +
                                           command);
    }
  }

  void emit(const json& j) { body_ << j.dump(2) << '\n'; }

 private:
  std::istream& in_;
  Format format_;
  std::uint64_t seed_;
  bool stdin_used_ = false;
  std::ostringstream body_;
};

void emit_table(Session& s, const bell::ProbTable222& t) {
  switch (s.format()) {
    case Format::Json: s.emit(io::to_json(t)); break;
    case Format::Csv: s.out() << io::table_to_csv(t); break;
    case Format::Text: s.out() << io::table_to_text(t); break;
  }
}

void cmd_chsh(Session& s, const std::string& path) {
  const bell::ProbTable222 t = io::read_table(s.read(path));
  const double value = bell::chsh(t);
  const bool ns = bell::is_nonsignalling(t);
  const auto model = bell::classical_membership(t);
  switch (s.format()) {
    case Format::Json: {
      json j;
      j["correlators"] = {{bell::expectation(t, 0, 0), bell::expectation(t, 0, 1)},
                          {bell::expectation(t, 1, 0), bell::expectation(t, 1, 1)}};
      j["chsh"] = value;
      j["classical"] = model.has_value();
      j["nonsignalling"] = ns;
      j["class"] = bell::to_string(bell::classify(t));
      if (model) j["weights"] = std::vector<double>(model->weights.begin(), model->weights.end());
      s.emit(j);
      break;
    }
    case Format::Csv:
      s.out() << "x,y,E\n";
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) s.out() << x << ',' << y << ',' << std::setprecision(17) << bell::expectation(t, x, y) << '\n';
      }
      break;
    case Format::Text:
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) s.out() << "E(" << x << "," << y << ") = " << fmt(bell::expectation(t, x, y)) << '\n';
      }
      s.out() << "CHSH = " << fmt(value) << '\n'
              << "classical: " << (model ? "yes" : "no") << '\n'
              << "non-signalling: " << (ns ? "yes" : "no") << '\n';
      break;
  }
}

void cmd_prbox(Session& s, const std::string& variant) {
  if (variant.size() != 3 || variant.find_first_not_of("01") != std::string::npos) {
    fail(ErrorCode::InvalidArgument, "--variant takes three bits, e.g. 000 or 101");
  }
  emit_table(s, bell::pr_box(variant[0] - '0', variant[1] - '0', variant[2] - '0'));
}

void cmd_tsirelson(Session& s, int iterations) {
  s.no_csv("tsirelson");
  const bell::SeeSawResult r = bell::maximize_chsh_quantum(s.seed(), iterations);
  const double norm = bell::chsh_operator_norm(r.setup);
  const double bound = 2.0 * std::sqrt(2.0);
  if (s.format() == Format::Json) {
    s.emit(json{{"value", r.value},
                {"bound", bound},
                {"operator_norm", norm},
                {"seed", s.seed()},
                {"iterations", iterations},
                {"table", io::to_json(bell::quantum_table(r.setup))["p"]}});
  } else {
    s.out() << "CHSH value: " << fmt(r.value) << '\n'
            << "Tsirelson bound: " << fmt(bound) << '\n'
            << "CHSH operator norm: " << fmt(norm) << '\n';
  }
}

void cmd_distinguish(Session& s, const std::string& space_path, const std::string& states_path, int capacity_max) {
  s.no_csv("distinguish");
  const StateSpace space = io::state_space_from_json(s.read_json(space_path));
  const auto states = io::states_from_json(s.read_json(states_path));
  const auto witness = perfectly_distinguishable(space, states);
  std::optional<int> cap;
  if (capacity_max > 0) cap = capacity(space, states, capacity_max);
  if (s.format() == Format::Json) {
    json j{{"distinguishable", witness.has_value()}};
    if (witness) {
      json effects = json::array();
      for (const Effect& e : witness->measurement.effects()) effects.push_back(io::vector_to_json(e.coeffs));
      j["effects"] = effects;
      j["max_error"] = witness_error(*witness);
    }
    if (cap) j["capacity"] = *cap;
    s.emit(j);
    return;
  }
  if (!witness) {
    s.out() << "none\n";
  } else {
    s.out() << "witness measurement:\n";
    for (std::size_t i = 0; i < witness->measurement.size(); ++i) {
      s.out() << "  e" << i + 1 << " = " << fmt_vector(witness->measurement[i].coeffs) << '\n';
    }
  }
  if (cap) s.out() << "capacity: " << *cap << '\n';
}

void cmd_compose(Session& s, const std::string& a_path, const std::string& b_path, const std::string& kind,
                 bool with_vertices) {
  s.no_csv("compose");
  const StateSpace a = io::state_space_from_json(s.read_json(a_path));
  const StateSpace b = io::state_space_from_json(s.read_json(b_path));
  CompositeSpace c = kind == "min" ? min_tensor(a, b) : max_tensor(a, b);
  if (s.format() == Format::Json) {
    s.emit(io::to_json(c, with_vertices));
    return;
  }
  s.out() << kind << " tensor product, dimension " << c.ambient_dim() << " = " << a.ambient_dim() << " x "
          << b.ambient_dim() << '\n';
  if (c.kind() == CompositeKind::Max) s.out() << c.inequalities().rows() << " inequalities\n";
  if (c.kind() == CompositeKind::Min || with_vertices) {
    const auto verts = c.kind() == CompositeKind::Min ? c.vertices() : enumerate_vertices(c);
    s.out() << verts.size() << " vertices\n";
    if (with_vertices) {
      for (const auto& v : verts) s.out() << "  " << fmt_vector(v) << '\n';
    }
  }
}

void cmd_sorkin(Session& s, const std::string& exp_path, const std::string& blockers_path) {
  s.no_csv("sorkin");
  const auto exp = io::slit_experiment_from_json(s.read_json(exp_path));
  json j{{"M", exp.slits()}};
  if (exp.slits() == 2) {
    j["I2"] = interference::sorkin_i2(exp);
  } else {
    j["I3"] = interference::sorkin_i3(exp);
    j["decomposition_residual"] = interference::decomposition_residual(exp.rho()).cwiseAbs().maxCoeff();
  }
  if (!blockers_path.empty()) {
    if (exp.slits() != 3) fail(ErrorCode::WrongSlitCount, "blockers apply to three-slit experiments");
    const auto blockers = io::blockers_from_json(s.read_json(blockers_path));
    j["I3_blockers"] = interference::sorkin_i3_with_blockers(exp.rho(), blockers, exp.detector());
  }
  if (s.format() == Format::Json) {
    s.emit(j);
    return;
  }
  if (j.contains("I2")) s.out() << "I2 = " << fmt(j["I2"].get<double>()) << '\n';
  if (j.contains("I3")) {
    s.out() << "I3 = " << fmt(j["I3"].get<double>()) << '\n'
            << "decomposition residual = " << fmt(j["decomposition_residual"].get<double>()) << '\n';
  }
  if (j.contains("I3_blockers")) s.out() << "I3 with blockers = " << fmt(j["I3_blockers"].get<double>()) << '\n';
}

struct BlochOptions {
  std::string op;
  int samples = -1;
  std::vector<double> r;
  int dim = 3;
  int n_max = 5;
};

void cmd_bloch(Session& s, const BlochOptions& o) {
  s.no_csv("bloch");
  std::mt19937_64 rng(s.seed());
  json j{{"op", o.op}, {"seed", s.seed()}};
  auto count = [&](int fallback) {
    const int n = o.samples < 0 ? fallback : o.samples;
    if (n < 1) fail(ErrorCode::InvalidArgument, "--samples must be positive");
    j["samples"] = n;
    return n;
  };
  if (o.op == "roundtrip") {
    if (!o.r.empty()) {
      const bloch::BlochVector r(o.r[0], o.r[1], o.r[2]);
      const CMatrix rho = bloch::bloch_to_density(r);
      const bloch::BlochVector back = bloch::density_to_bloch(rho);
      j["rho"] = io::complex_matrix_to_json(rho);
      j["eigenvalues"] = io::vector_to_json(hermitian_eigenvalues(rho));
      j["roundtrip_error"] = (back - r).cwiseAbs().maxCoeff();
    } else {
      const int n = count(1000);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::normal_distribution<double> gauss(0.0, 1.0);
      double rt = 0.0, eig = 0.0;
      for (int k = 0; k < n; ++k) {
        const Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
        const bloch::BlochVector r = v.normalized() * std::cbrt(unif(rng));
        const CMatrix rho = bloch::bloch_to_density(r);
        rt = std::max(rt, (bloch::density_to_bloch(rho) - r).cwiseAbs().maxCoeff());
        const Eigen::VectorXd ev = hermitian_eigenvalues(rho);
        eig = std::max({eig, std::fabs(ev(0) - 0.5 * (1 - r.norm())), std::fabs(ev(1) - 0.5 * (1 + r.norm()))});
      }
      j["max_roundtrip_error"] = rt;
      j["max_eigenvalue_error"] = eig;
    }
  } else if (o.op == "rotation") {
    const int n = count(1000);
    double hom = 0.0, inter = 0.0, det_min = 1e300, det_max = -1e300;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
      const CMatrix u = random_unitary(2, rng);
      const CMatrix v = random_unitary(2, rng);
      const Eigen::Matrix3d ru = bloch::unitary_to_rotation(u);
      hom = std::max(hom, (bloch::unitary_to_rotation(u * v) - ru * bloch::unitary_to_rotation(v)).cwiseAbs().maxCoeff());
      const bloch::BlochVector r = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng)).normalized() * 0.9;
      inter = std::max(inter, (bloch::bloch_to_density(ru * r) - u * bloch::bloch_to_density(r) * u.adjoint())
                                  .cwiseAbs()
                                  .maxCoeff());
      det_min = std::min(det_min, ru.determinant());
      det_max = std::max(det_max, ru.determinant());
    }
    j["max_homomorphism_error"] = hom;
    j["max_intertwining_error"] = inter;
    j["det_min"] = det_min;
    j["det_max"] = det_max;
  } else if (o.op == "average") {
    const int n = count(100000);
    const auto rotations = bloch::haar_rotations(n, s.seed());
    const bloch::BlochVector avg = bloch::group_average_state(rotations, bloch::BlochVector(0, 0, 1));
    j["average"] = io::vector_to_json(avg);
    j["average_norm"] = avg.norm();
    if (n >= bloch::kMinInvariantSamples) {
      const Eigen::Matrix3d g = bloch::invariant_inner_product(rotations, s.seed());
      Eigen::Matrix3d off = g;
      off.diagonal().setZero();
      j["invariant_max_offdiagonal"] = off.cwiseAbs().maxCoeff();
      j["invariant_diagonal_spread"] = g.diagonal().maxCoeff() - g.diagonal().minCoeff();
    }
  } else if (o.op == "convexity") {
    const int n = count(1000);
    const auto rep = bloch::check_strict_convexity_ball(o.dim, n, s.seed());
    j["dimension"] = rep.dimension;
    j["pairs"] = rep.pairs;
    j["min_gap"] = rep.min_gap;
    j["strict"] = rep.strict;
  } else if (o.op == "dimension") {
    const auto rep = bloch::check_dimension_law(o.n_max);
    json rows = json::array();
    for (const auto* list : {&rep.single, &rep.composite}) {
      for (const auto& row : *list) {
        rows.push_back({{"system", row.label}, {"K_A", row.k_a}, {"K_B", row.k_b}, {"K_AB", row.k_ab},
                        {"N_A", row.n_a}, {"N_B", row.n_b}, {"N_AB", row.n_ab}, {"ok", row.ok}});
      }
    }
    j["rows"] = rows;
    j["ok"] = rep.ok;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown bloch op \"" + o.op + "\"");
  }

  if (s.format() == Format::Json) {
    s.emit(j);
    return;
  }
  if (o.op == "dimension") {
    s.out() << std::left << std::setw(28) << "system" << std::right << std::setw(6) << "K" << std::setw(6) << "N"
            << "  check\n";
    for (const auto& row : j["rows"]) {
      s.out() << std::left << std::setw(28) << row["system"].get<std::string>() << std::right << std::setw(6)
              << row["K_AB"].get<long>() << std::setw(6) << row["N_AB"].get<int>() << "  "
              << (row["ok"].get<bool>() ? "ok" : "FAILED") << '\n';
    }
    s.out() << "all laws hold: " << (j["ok"].get<bool>() ? "yes" : "no") << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "op") continue;
    s.out() << key << ": " << (value.is_number_float() ? fmt(value.get<double>()) : value.dump()) << '\n';
  }
}

void cmd_nspolytope(Session& s) {
  s.no_csv("nspolytope");
  const CompositeSpace ns = max_tensor(make_gbit(), make_gbit());
  const auto vertices = enumerate_vertices(ns);
  int deterministic = 0, pr = 0, other = 0;
  json list = json::array();
  Eigen::MatrixXd tables(static_cast<Eigen::Index>(vertices.size()), 16);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const bell::ProbTable222 t = bell::table_from_composite_state(vertices[i]);
    for (std::size_t k = 0; k < 16; ++k) tables(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = t.p[k];
    const bell::TableClass c = bell::classify(t);
    json entry{{"state", io::vector_to_json(vertices[i])}, {"p", io::to_json(t)["p"]}, {"class", bell::to_string(c)}};
    switch (c) {
      case bell::TableClass::Deterministic: ++deterministic; break;
      case bell::TableClass::PrType: {
        ++pr;
        const int v = *bell::pr_variant(t);
        entry["variant"] = std::to_string((v >> 2) & 1) + std::to_string((v >> 1) & 1) + std::to_string(v & 1);
        break;
      }
      case bell::TableClass::Other: ++other; break;
    }
    list.push_back(entry);
  }
  Eigen::MatrixXd centered = tables.rowwise() - tables.row(0);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(centered);
  lu.setThreshold(1e-9);
  const auto affine_dim = lu.rank();
  if (s.format() == Format::Json) {
    s.emit(json{{"vertices", list},
                {"count", vertices.size()},
                {"deterministic", deterministic},
                {"pr_type", pr},
                {"other", other},
                {"affine_dimension", affine_dim}});
    return;
  }
  s.out() << vertices.size() << " vertices: " << deterministic << " deterministic, " << pr << " PR-type";
  if (other) s.out() << ", " << other << " other";
  s.out() << '\n' << "affine dimension: " << affine_dim << '\n';
}

void report(std::ostream& err, const std::string& code, const std::string& message, int exit_code) {
  err << json{{"error", {{"code", code}, {"message", message}, {"exit_code", exit_code}}}}.dump() << '\n';
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || env[0] == '-') {
    fail(ErrorCode::InvalidArgument, std::string(kSeedEnv) + " must be a nonnegative integer");
  }
  return v;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ScaleLimit: return kExitScaleLimit;
    case ErrorCode::NumericalFailure: return kExitNumericalFailure;
    default: return kExitInvalidInput;
  }
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex operational toolkit: state spaces, Bell tables, composites and interference."};
  app.name("gptkit");
  app.require_subcommand(1);
  app.fallthrough();

  std::string format_name = "text";
  std::string output = "-";
  std::uint64_t seed = 0;
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("-o,--output", output, "Output file, - for standard output");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "Random seed (default 0, or $" + std::string(kSeedEnv) + ")");

  std::string table_path;
  auto* chsh = app.add_subcommand("chsh", "Correlators, CHSH value and membership verdicts for a table");
  chsh->add_option("--table", table_path, "Table file (JSON, CSV or text), - for stdin")->required();

  std::string variant = "000";
  auto* prbox = app.add_subcommand("prbox", "Emit a PR-box table");
  prbox->add_option("--variant", variant, "Bits alpha beta gamma, e.g. 000");

  int iterations = 200;
  auto* tsirelson = app.add_subcommand("tsirelson", "See-saw maximization of the quantum CHSH value");
  tsirelson->add_option("--iters", iterations, "See-saw iterations");

  std::string space_path, states_path;
  int capacity_max = 0;
  auto* distinguish = app.add_subcommand("distinguish", "Perfect distinguishability witness");
  distinguish->add_option("--space", space_path, "State-space file")->required();
  distinguish->add_option("--states", states_path, "States file")->required();
  distinguish->add_option("--capacity", capacity_max, "Also report the capacity over the states, up to this size");

  std::string a_path, b_path, kind;
  bool with_vertices = false;
  auto* compose = app.add_subcommand("compose", "Minimal or maximal tensor product of two polytopic spaces");
  compose->add_option("--a", a_path, "First factor")->required();
  compose->add_option("--b", b_path, "Second factor")->required();
  compose->add_option("--kind", kind, "min or max")->required()->check(CLI::IsMember({"min", "max"}));
  compose->add_flag("--vertices", with_vertices, "Include the vertex list");

  std::string exp_path, blockers_path;
  auto* sorkin = app.add_subcommand("sorkin", "Sorkin interference terms I2 / I3");
  sorkin->add_option("--exp", exp_path, "Slit experiment file")->required();
  sorkin->add_option("--blockers", blockers_path, "Blocker file for the non-ideal I3");

  BlochOptions bo;
  auto* bloch_cmd = app.add_subcommand("bloch", "Bloch-ball checks");
  bloch_cmd->add_option("--op", bo.op, "roundtrip, rotation, average, convexity or dimension")
      ->required()
      ->check(CLI::IsMember({"roundtrip", "rotation", "average", "convexity", "dimension"}));
  bloch_cmd->add_option("--samples", bo.samples, "Sample count");
  bloch_cmd->add_option("--r", bo.r, "Bloch vector for roundtrip")->expected(3);
  bloch_cmd->add_option("--dim", bo.dim, "Ball dimension for convexity");
  bloch_cmd->add_option("--nmax", bo.n_max, "Largest N for the dimension law");

  auto* nspolytope = app.add_subcommand("nspolytope", "Enumerate and classify the vertices of gbit x gbit (max)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "InvalidArgument", e.what(), kExitInvalidInput);
    return kExitInvalidInput;
  }

  try {
    if (seed_opt->count() == 0) seed = default_seed();
    const Format format = format_name == "json" ? Format::Json : format_name == "csv" ? Format::Csv : Format::Text;
    Session session(in, format, seed);
    if (chsh->parsed()) cmd_chsh(session, table_path);
    if (prbox->parsed()) cmd_prbox(session, variant);
    if (tsirelson->parsed()) cmd_tsirelson(session, iterations);
    if (distinguish->parsed()) cmd_distinguish(session, space_path, states_path, capacity_max);
    if (compose->parsed()) cmd_compose(session, a_path, b_path, kind, with_vertices);
    if (sorkin->parsed()) cmd_sorkin(session, exp_path, blockers_path);
    if (bloch_cmd->parsed()) cmd_bloch(session, bo);
    if (nspolytope->parsed()) cmd_nspolytope(session);

    if (output == "-") {
      out << session.body();
    } else {
      std::ofstream f(output, std::ios::binary);
      if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + output);
      f << session.body();
    }
    return kExitOk;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report(err, std::string(to_string(e.code())), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report(err, "NumericalFailure", e.what(), kExitNumericalFailure);
    return kExitNumericalFailure;
  }
}

}  // namespace gptkit::cli
