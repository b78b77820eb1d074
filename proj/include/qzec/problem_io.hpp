#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qzec/capacity.hpp"
#include "qzec/distinguishability.hpp"
#include "qzec/quantum.hpp"

namespace qzec::io {

/// Raised for malformed input text or unreadable files. Carries the field
/// path of the offending value. Distinct from validation failures, which
/// surface as std::invalid_argument from the constructors.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& message) : std::runtime_error(message) {}
};

// ---------------------------------------------------------------------------
// Problem files
//
// A problem file is one JSON document:
//   dimension   Hilbert-space dimension d
//   kraus       list of d x d matrices
//   states      optional list of {label?, matrix | vector}
//   povm        optional list of d x d matrices
//   tolerances  optional overrides, keys like "tol_prob"
// Complex entries are two-element [re, im] arrays; matrices are row-major
// lists of rows.
// ---------------------------------------------------------------------------

struct Problem {
  int dimension = 0;
  std::vector<ComplexMatrix> kraus;
  std::vector<std::string> state_labels;
  std::vector<ComplexMatrix> state_matrices;  // vectors arrive as projectors
  std::vector<ComplexMatrix> povm;
  Tolerances tol;

  bool has_states() const { return !state_matrices.empty(); }
  bool has_povm() const { return !povm.empty(); }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

inline const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

inline Complex complex_entry(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected a [re, im] pair");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

inline ComplexVector amplitude_vector(const json& v, const std::string& path, int dim) {
  if (!v.is_array()) fail(path, "expected an array of [re, im] pairs");
  if (static_cast<int>(v.size()) != dim) {
    fail(path, "expected " + std::to_string(dim) + " amplitudes, got " +
                   std::to_string(v.size()));
  }
  ComplexVector out(dim);
  for (int i = 0; i < dim; ++i) {
    out(i) = complex_entry(v[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

inline ComplexMatrix matrix(const json& v, const std::string& path, int dim) {
  if (!v.is_array()) fail(path, "expected an array of rows");
  if (static_cast<int>(v.size()) != dim) {
    fail(path, "expected " + std::to_string(dim) + " rows, got " +
                   std::to_string(v.size()));
  }
  ComplexMatrix out(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const json& row = v[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      fail(row_path, "expected " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) {
      out(r, c) = complex_entry(row[c], row_path + "[" + std::to_string(c) + "]");
    }
  }
  return out;
}

inline void apply_tolerance(Tolerances& tol, const std::string& key, double value,
                            const std::string& path) {
  if (value <= 0.0) fail(path, "tolerance must be positive");
  if (key == "tol_herm") tol.herm = value;
  else if (key == "tol_trace") tol.trace = value;
  else if (key == "tol_psd") tol.psd = value;
  else if (key == "tol_tp") tol.tp = value;
  else if (key == "tol_povm") tol.povm = value;
  else if (key == "tol_norm") tol.norm = value;
  else if (key == "tol_rank") tol.rank = value;
  else if (key == "tol_prob") tol.prob = value;
  else if (key == "tol_row") tol.row = value;
  else if (key == "tol_num") tol.num = value;
  else if (key == "tol_orth") tol.orth = value;
  else if (key == "tol_recon") tol.recon = value;
  else fail(path, "unknown tolerance \"" + key + "\"");
}

}  // namespace detail

inline Problem parse_problem_text(const std::string& text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }

  Problem p;
  const detail::json& dim = detail::member(doc, "dimension", "$");
  if (!dim.is_number_integer() || dim.get<int>() < 1) {
    detail::fail("$.dimension", "expected a positive integer");
  }
  p.dimension = dim.get<int>();
  if (p.dimension > 128) {
    detail::fail("$.dimension", "dimension capped at 128");
  }

  const detail::json& kraus = detail::member(doc, "kraus", "$");
  if (!kraus.is_array() || kraus.empty()) {
    detail::fail("$.kraus", "expected a nonempty array of matrices");
  }
  for (std::size_t a = 0; a < kraus.size(); ++a) {
    p.kraus.push_back(
        detail::matrix(kraus[a], "$.kraus[" + std::to_string(a) + "]", p.dimension));
  }

  if (doc.contains("states")) {
    const detail::json& states = doc["states"];
    if (!states.is_array()) detail::fail("$.states", "expected an array");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string path = "$.states[" + std::to_string(i) + "]";
      const detail::json& s = states[i];
      if (!s.is_object()) detail::fail(path, "expected an object");
      std::string label = std::to_string(i);
      if (s.contains("label")) {
        if (!s["label"].is_string()) detail::fail(path + ".label", "expected a string");
        label = s["label"].get<std::string>();
      }
      const bool has_matrix = s.contains("matrix");
      const bool has_vector = s.contains("vector");
      if (has_matrix == has_vector) {
        detail::fail(path, "expected exactly one of \"matrix\" or \"vector\"");
      }
      ComplexMatrix m;
      if (has_matrix) {
        m = detail::matrix(s["matrix"], path + ".matrix", p.dimension);
      } else {
        const ComplexVector v =
            detail::amplitude_vector(s["vector"], path + ".vector", p.dimension);
        m = v * v.adjoint();
      }
      p.state_labels.push_back(std::move(label));
      p.state_matrices.push_back(std::move(m));
    }
  }

  if (doc.contains("povm")) {
    const detail::json& povm = doc["povm"];
    if (!povm.is_array()) detail::fail("$.povm", "expected an array of matrices");
    for (std::size_t j = 0; j < povm.size(); ++j) {
      p.povm.push_back(
          detail::matrix(povm[j], "$.povm[" + std::to_string(j) + "]", p.dimension));
    }
  }

  if (doc.contains("tolerances")) {
    const detail::json& tols = doc["tolerances"];
    if (!tols.is_object()) detail::fail("$.tolerances", "expected an object");
    for (const auto& [key, value] : tols.items()) {
      const std::string path = "$.tolerances." + key;
      detail::apply_tolerance(p.tol, key, detail::number(value, path), path);
    }
  }

  return p;
}

inline Problem load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_text(buffer.str());
}

struct ProblemValidation {
  ValidationReport channel;
  std::vector<std::pair<std::string, ValidationReport>> states;
  std::optional<ValidationReport> povm;

  bool passed() const {
    if (!channel.passed()) return false;
    for (const auto& [label, report] : states) {
      if (!report.passed()) return false;
    }
    return !povm || povm->passed();
  }
};

inline ProblemValidation validate_problem(const Problem& p) {
  ProblemValidation v;
  v.channel = validate_kraus_operators(p.dimension, p.kraus, p.tol);
  for (std::size_t i = 0; i < p.state_matrices.size(); ++i) {
    v.states.emplace_back(p.state_labels[i],
                          validate_density_matrix(p.state_matrices[i], p.tol));
  }
  if (p.has_povm()) {
    v.povm = validate_povm_elements(p.dimension, p.povm, p.tol);
  }
  return v;
}

struct ProblemObjects {
  KrausChannel channel;
  InputEnsemble ensemble;
  Povm povm;
};

/// Builds validated objects; throws std::invalid_argument when any part
/// fails its invariants and ParseError when states or POVM are absent.
inline ProblemObjects build_objects(const Problem& p, const std::string& label = "file") {
  if (!p.has_states() || !p.has_povm()) {
    throw ParseError("problem file needs both \"states\" and \"povm\"");
  }
  KrausChannel channel(p.dimension, p.kraus, label, p.tol);
  std::vector<DensityOperator> states;
  states.reserve(p.state_matrices.size());
  for (const auto& m : p.state_matrices) {
    states.emplace_back(m, p.tol);
  }
  InputEnsemble ensemble(std::move(states), p.state_labels);
  Povm povm(p.dimension, p.povm, p.tol);
  return {std::move(channel), std::move(ensemble), std::move(povm)};
}

// ---------------------------------------------------------------------------
// Serialization. Records are written by hand so field order is fixed and
// every number carries 17 significant digits, which round-trips doubles
// exactly; two runs with the same inputs produce byte-identical text.
// ---------------------------------------------------------------------------

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

namespace detail {

inline void write_complex(std::ostream& o, const Complex& z) {
  o << '[' << format_double(z.real()) << ", " << format_double(z.imag()) << ']';
}

inline void write_matrix(std::ostream& o, const ComplexMatrix& m,
                         const std::string& indent) {
  o << "[\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    o << indent << "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) o << ", ";
      write_complex(o, m(r, c));
    }
    o << ']' << (r + 1 < m.rows() ? "," : "") << '\n';
  }
  o << indent << ']';
}

}  // namespace detail

/// Problem-file text for a (channel, ensemble, POVM) triple.
inline std::string problem_json(const KrausChannel& channel,
                                const InputEnsemble& ensemble, const Povm& povm) {
  std::ostringstream o;
  o << "{\n  \"dimension\": " << channel.dim() << ",\n  \"kraus\": [\n";
  for (std::size_t a = 0; a < channel.operators().size(); ++a) {
    o << "    ";
    detail::write_matrix(o, channel.operators()[a], "    ");
    o << (a + 1 < channel.operators().size() ? "," : "") << '\n';
  }
  o << "  ],\n  \"states\": [\n";
  for (int i = 0; i < ensemble.size(); ++i) {
    o << "    {\"label\": \"" << json_escape(ensemble.label(i)) << "\", \"matrix\": ";
    detail::write_matrix(o, ensemble.state(i).matrix(), "    ");
    o << '}' << (i + 1 < ensemble.size() ? "," : "") << '\n';
  }
  o << "  ],\n  \"povm\": [\n";
  for (int j = 0; j < povm.size(); ++j) {
    o << "    ";
    detail::write_matrix(o, povm.element(j), "    ");
    o << (j + 1 < povm.size() ? "," : "") << '\n';
  }
  o << "  ]\n}\n";
  return o.str();
}

/// Machine-readable capacity record, including the achieving ensemble and
/// POVM in the same matrix encoding the problem files use.
inline std::string capacity_record_json(const std::string& channel_label, int dim,
                                        const CapacityEstimate& est,
                                        const SearchConfig& config,
                                        const std::string& mode) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"channel\": \"" << json_escape(channel_label) << "\",\n";
  o << "  \"dimension\": " << dim << ",\n";
  o << "  \"mode\": \"" << json_escape(mode) << "\",\n";
  o << "  \"config\": {\"n_max\": " << config.n_max << ", \"seed\": " << config.seed
    << ", \"random_bases\": " << config.random_bases
    << ", \"clique_budget\": " << config.clique_budget
    << ", \"tol_prob\": " << format_double(config.tol_prob) << "},\n";
  o << "  \"rate_bits_per_use\": " << format_double(est.rate) << ",\n";
  o << "  \"certified\": \"lower-bound\",\n";
  o << "  \"n_star\": " << est.n_star << ",\n";
  o << "  \"clique_size\": " << est.clique_size << ",\n";
  o << "  \"exact\": " << (est.exact ? "true" : "false") << ",\n";
  o << "  \"clique_by_n\": [";
  for (std::size_t n = 0; n < est.clique_by_n.size(); ++n) {
    if (n > 0) o << ", ";
    o << est.clique_by_n[n];
  }
  o << "],\n";
  o << "  \"certificate\": {\"vertices\": [";
  for (std::size_t i = 0; i < est.certificate.vertices.size(); ++i) {
    if (i > 0) o << ", ";
    o << est.certificate.vertices[i];
  }
  o << "], \"labels\": [";
  for (std::size_t i = 0; i < est.certificate_labels.size(); ++i) {
    if (i > 0) o << ", ";
    o << '"' << json_escape(est.certificate_labels[i]) << '"';
  }
  o << "]},\n";
  o << "  \"ensemble\": [\n";
  for (int i = 0; i < est.ensemble.size(); ++i) {
    o << "    {\"label\": \"" << json_escape(est.ensemble.label(i))
      << "\", \"matrix\": ";
    detail::write_matrix(o, est.ensemble.state(i).matrix(), "    ");
    o << '}' << (i + 1 < est.ensemble.size() ? "," : "") << '\n';
  }
  o << "  ],\n  \"povm\": [\n";
  for (int j = 0; j < est.povm.size(); ++j) {
    o << "    ";
    detail::write_matrix(o, est.povm.element(j), "    ");
    o << (j + 1 < est.povm.size() ? "," : "") << '\n';
  }
  o << "  ]";
  if (!est.warning.empty()) {
    o << ",\n  \"warning\": \"" << json_escape(est.warning) << "\"";
  }
  o << "\n}\n";
  return o.str();
}

/// The parts of a capacity record needed to replay it.
struct CapacityRecord {
  int dimension = 0;
  double rate = 0.0;
  int n_star = 1;
  long long clique_size = 1;
  int n_max = 1;
  std::vector<int> certificate_vertices;
  std::vector<std::string> state_labels;
  std::vector<ComplexMatrix> state_matrices;
  std::vector<ComplexMatrix> povm;
};

inline CapacityRecord parse_capacity_record(const std::string& text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  CapacityRecord rec;
  rec.dimension = detail::member(doc, "dimension", "$").get<int>();
  rec.rate = detail::number(detail::member(doc, "rate_bits_per_use", "$"),
                            "$.rate_bits_per_use");
  rec.n_star = detail::member(doc, "n_star", "$").get<int>();
  rec.clique_size = detail::member(doc, "clique_size", "$").get<long long>();
  rec.n_max = detail::member(detail::member(doc, "config", "$"), "n_max", "$.config")
                  .get<int>();
  const detail::json& cert = detail::member(doc, "certificate", "$");
  for (const auto& v : detail::member(cert, "vertices", "$.certificate")) {
    rec.certificate_vertices.push_back(v.get<int>());
  }
  const detail::json& ensemble = detail::member(doc, "ensemble", "$");
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const std::string path = "$.ensemble[" + std::to_string(i) + "]";
    rec.state_labels.push_back(
        detail::member(ensemble[i], "label", path).get<std::string>());
    rec.state_matrices.push_back(detail::matrix(
        detail::member(ensemble[i], "matrix", path), path + ".matrix", rec.dimension));
  }
  const detail::json& povm = detail::member(doc, "povm", "$");
  for (std::size_t j = 0; j < povm.size(); ++j) {
    rec.povm.push_back(detail::matrix(povm[j], "$.povm[" + std::to_string(j) + "]",
                                      rec.dimension));
  }
  return rec;
}

}  // namespace qzec::io
