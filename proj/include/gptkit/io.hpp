#pragma once

// JSON and CSV formats shared by the command-line tool and the tests.
//
//   state space   {"kind": "polytopic"|"quantum"|"ball", "vertices": [[...]],
//                  "N": n, "d": d, "u": [...]}
//   composite     {"kind": "min"|"max", "factors": [space, space], "u": [...],
//                  "vertices": [[...]], "inequalities": [[...]]}
//   table         {"p": [16 values in canonical order]}
//   slit setup    {"M": 2|3, "rho": [[[re, im], ...], ...], "Q": ...}
//   blockers      {"preset": "orthogonal"|"rotated"|"depolarizing"|"graded",
//                  "angle": t, "p": p}  or
//                 {"blockers": [{"subset": [1, 2], "kraus": [matrix, ...]}, ...]}

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gptkit/bell.hpp"
#include "gptkit/composites.hpp"
#include "gptkit/hermitian.hpp"
#include "gptkit/interference.hpp"
#include "gptkit/state_space.hpp"

namespace gptkit::io {

using json = nlohmann::json;

/// Parses a whole stream; malformed input raises InvalidArgument.
json parse_json(std::istream& in);
json parse_json(const std::string& text);

json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);
json vectors_to_json(const std::vector<Eigen::VectorXd>& vs);
std::vector<Eigen::VectorXd> vectors_from_json(const json& j);

/// Complex matrices are row lists of [re, im] pairs; plain real entries are
/// accepted on input.
json complex_matrix_to_json(const CMatrix& m);
CMatrix complex_matrix_from_json(const json& j);

json to_json(const StateSpace& space);
/// Also accepts composite documents, which are rebuilt from their factors.
StateSpace state_space_from_json(const json& j);

json to_json(const CompositeSpace& composite, bool with_vertices);
CompositeSpace composite_from_json(const json& j);

/// {"states": [...]} or a bare array of vectors.
std::vector<Eigen::VectorXd> states_from_json(const json& j);

json to_json(const bell::ProbTable222& table);
bell::ProbTable222 table_from_json(const json& j);

/// Rows "x,y,a,b,p" under a header line.
std::string table_to_csv(const bell::ProbTable222& table);
/// Whitespace-aligned "x y a b P" rows.
std::string table_to_text(const bell::ProbTable222& table);
/// Reads JSON, or CSV / whitespace rows of x y a b p; lines that do not start
/// with a number are skipped.
bell::ProbTable222 read_table(const std::string& text);

interference::SlitExperiment slit_experiment_from_json(const json& j);
json to_json(const interference::SlitExperiment& exp);
interference::BlockerSet blockers_from_json(const json& j);

}  // namespace gptkit::io
