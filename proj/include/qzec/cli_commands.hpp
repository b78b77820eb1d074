#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qzec/channels.hpp"
#include "qzec/problem_io.hpp"
#include "qzec/propositions.hpp"

namespace qzec::cli {

// Exit-code contract: 0 success, 1 semantic failure (validation, violated
// proposition), 2 parse or I/O failure.
constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitParse = 2;

/// Builds a zoo channel from a name like "pentagon", "identity-d4",
/// "depolarizing-p0.3" or "bitflip-q0.5".
inline KrausChannel zoo_channel(const std::string& name) {
  auto parse_suffix = [&](const std::string& prefix) -> std::optional<double> {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    const std::string rest = name.substr(prefix.size());
    try {
      std::size_t used = 0;
      const double value = std::stod(rest, &used);
      if (used != rest.size()) return std::nullopt;
      return value;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  if (name == "pentagon") return embed_classical_dmc(pentagon_dmc()).channel;
  if (const auto d = parse_suffix("identity-d")) return identity_channel(static_cast<int>(*d));
  if (const auto p = parse_suffix("depolarizing-p")) return depolarizing_channel(*p);
  if (const auto q = parse_suffix("bitflip-q")) return bitflip_channel(*q);
  throw io::ParseError(
      "unknown channel \"" + name +
      "\"; expected pentagon, identity-d<D>, depolarizing-p<P> or bitflip-q<Q>");
}

namespace detail {

inline void print_report(std::ostream& out, const std::string& subject,
                         const ValidationReport& report) {
  out << subject << ": " << (report.passed() ? "pass" : "FAIL") << '\n'
      << report.summary();
}

inline std::string clique_note(bool exact) {
  return exact ? "[exact]" : "[lower bound only: search budget exhausted]";
}

inline void print_certificate(std::ostream& out, const CliqueCertificate& cert,
                              const std::vector<std::string>& labels) {
  out << "  clique:";
  for (int v : cert.vertices) out << ' ' << v;
  out << "\n  labels:";
  for (const auto& l : labels) out << ' ' << l;
  out << '\n';
}

}  // namespace detail

/// validate: load a problem file and report every invariant deviation.
inline int cmd_validate(const std::string& file, std::ostream& out,
                        std::ostream& err) {
  io::Problem problem;
  try {
    problem = io::load_problem_file(file);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  }
  const io::ProblemValidation v = io::validate_problem(problem);
  detail::print_report(out, "channel", v.channel);
  for (const auto& [label, report] : v.states) {
    detail::print_report(out, "state " + label, report);
  }
  if (v.povm) detail::print_report(out, "povm", *v.povm);
  if (!problem.has_states()) out << "states: none in file\n";
  if (!problem.has_povm()) out << "povm: none in file\n";
  out << (v.passed() ? "validation passed\n" : "validation FAILED\n");
  return v.passed() ? kExitOk : kExitSemantic;
}

struct GraphOptions {
  std::string file;
  int power = 1;         // --n
  std::string dot_path;  // --dot; empty writes nothing
  long long budget = 10'000'000;
  std::optional<double> tol_prob;
};

inline int cmd_graph(const GraphOptions& options, std::ostream& out,
                     std::ostream& err) {
  io::Problem problem;
  try {
    problem = io::load_problem_file(options.file);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  }
  try {
    if (options.tol_prob) problem.tol.prob = *options.tol_prob;
    const io::ProblemObjects objects = io::build_objects(problem);
    const Graph g = build_characteristic_graph(objects.channel, objects.ensemble,
                                               objects.povm, problem.tol.prob);
    out << "characteristic graph: " << g.vertex_count() << " vertices, "
        << g.edge_count() << " edges\n";
    if (g.edge_count() == 0) {
      out << "graph has no edges; zero-error rate 0 at all n\n";
    }
    const CliqueCertificate base = clique_number(g, options.budget);
    out << "omega(G) = " << base.size << "  " << detail::clique_note(base.exact) << '\n';

    auto write_dot = [&](const Graph& graph, const std::string& path) {
      std::ofstream dot(path, std::ios::binary);
      if (!dot) throw io::ParseError("cannot write DOT file: " + path);
      dot << export_dot(graph);
      out << "wrote " << path << '\n';
    };
    if (!options.dot_path.empty()) write_dot(g, options.dot_path);

    if (options.power > 1) {
      const Graph gn = graph_power(g, options.power);
      const CliqueCertificate cert = clique_number(gn, options.budget);
      out << "power n = " << options.power << ": " << gn.vertex_count()
          << " vertices, " << gn.edge_count() << " edges\n";
      out << "omega(G^" << options.power << ") = " << cert.size << "  "
          << detail::clique_note(cert.exact) << '\n';
      std::vector<std::string> labels;
      for (int v : cert.vertices) {
        labels.push_back(gn.has_labels() ? gn.label(v) : std::to_string(v));
      }
      detail::print_certificate(out, cert, labels);
      if (!options.dot_path.empty()) {
        std::string path = options.dot_path;
        const std::size_t dot_pos = path.rfind(".dot");
        const std::string suffix = ".pow" + std::to_string(options.power) + ".dot";
        if (dot_pos != std::string::npos && dot_pos == path.size() - 4) {
          path = path.substr(0, dot_pos) + suffix;
        } else {
          path += suffix;
        }
        write_dot(gn, path);
      }
    }
    return kExitOk;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitSemantic;
  }
}

struct CapacityOptions {
  std::string file;          // problem file, or
  std::string channel_name;  // zoo channel
  int n_max = 2;
  std::uint64_t seed = 0;
  int random_bases = 4;
  std::string json_path;  // --json; empty writes nothing
  long long budget = 10'000'000;
  std::optional<double> tol_prob;
};

/// capacity: a problem file with states and POVM pins the pair and the
/// rate is evaluated for it; a zoo channel (or a file without them) runs
/// the candidate search. Either way the certificate is re-verified from
/// first principles before anything is reported.
inline int cmd_capacity(const CapacityOptions& options, std::ostream& out,
                        std::ostream& err) {
  try {
    SearchConfig config;
    config.n_max = options.n_max;
    config.seed = options.seed;
    config.random_bases = options.random_bases;
    config.clique_budget = options.budget;
    if (options.tol_prob) config.tol_prob = *options.tol_prob;

    std::optional<KrausChannel> channel;
    std::optional<io::ProblemObjects> fixed;
    std::string label;
    if (!options.file.empty() && !options.channel_name.empty()) {
      err << "error: give either a problem file or --channel, not both\n";
      return kExitParse;
    }
    if (!options.file.empty()) {
      io::Problem problem = io::load_problem_file(options.file);
      if (options.tol_prob) problem.tol.prob = *options.tol_prob;
      config.tol_prob = problem.tol.prob;
      label = options.file;
      if (problem.has_states() && problem.has_povm()) {
        fixed = io::build_objects(problem);
        channel = fixed->channel;
      } else {
        channel = KrausChannel(problem.dimension, problem.kraus, label, problem.tol);
      }
    } else if (!options.channel_name.empty()) {
      channel = zoo_channel(options.channel_name);
      label = options.channel_name;
    } else {
      err << "error: a problem file or --channel is required\n";
      return kExitParse;
    }

    const std::string mode = fixed ? "fixed-pair" : "search";
    CapacityEstimate est =
        fixed ? rate_for(*channel, fixed->ensemble, fixed->povm, config.n_max,
                         config.clique_budget, config.tol_prob)
              : estimate_capacity(*channel, config);
    verify_capacity_estimate(*channel, est, config.tol_prob);

    out << "zero-error capacity lower bound (" << mode << ")\n";
    out << "  channel: " << label << "  (dimension " << channel->dim() << ")\n";
    out << "  rate: " << std::fixed << std::setprecision(6) << est.rate
        << std::defaultfloat << " bits/use  [certified lower bound]\n";
    out << "  achieved at block length n = " << est.n_star << " with K = "
        << est.clique_size << " codewords  "
        << detail::clique_note(est.exact) << '\n';
    out << "  omega by block length:";
    for (std::size_t n = 0; n < est.clique_by_n.size(); ++n) {
      out << "  n=" << (n + 1) << ": " << est.clique_by_n[n];
    }
    out << '\n';
    detail::print_certificate(out, est.certificate, est.certificate_labels);
    if (!est.warning.empty()) out << "  warning: " << est.warning << '\n';

    if (!options.json_path.empty()) {
      std::ofstream json_out(options.json_path, std::ios::binary);
      if (!json_out) {
        err << "error: cannot write " << options.json_path << '\n';
        return kExitParse;
      }
      json_out << io::capacity_record_json(label, channel->dim(), est, config, mode);
      out << "wrote " << options.json_path << '\n';
    }
    return kExitOk;
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitSemantic;
  }
}

struct VerifyOptions {
  int prop = 0;  // 1..4
  int trials = 100;
  std::uint64_t seed = 1;
};

/// verify: machine-checks one of the four structural propositions over
/// named channels plus a seeded randomized sweep. Exit 0 only with zero
/// violations; anything else indicates an implementation bug.
inline int cmd_verify(const VerifyOptions& options, std::ostream& out,
                      std::ostream& err) {
  try {
    switch (options.prop) {
      case 1: {
        const EmbeddedDmc pentagon = embed_classical_dmc(pentagon_dmc());
        struct Case {
          std::string name;
          bool expected;
          bool actual;
        };
        std::vector<Case> cases;
        cases.push_back({"identity qubit", true,
                         verify_proposition_1(identity_channel(2),
                                              InputEnsemble::computational_basis(2),
                                              Povm::computational(2))});
        cases.push_back({"depolarizing p=1", false,
                         verify_proposition_1(depolarizing_channel(1.0),
                                              InputEnsemble::computational_basis(2),
                                              Povm::computational(2))});
        cases.push_back({"pentagon", true,
                         verify_proposition_1(pentagon.channel, pentagon.ensemble,
                                              pentagon.povm)});
        int violations = 0;
        for (const auto& c : cases) {
          const bool ok = c.actual == c.expected;
          if (!ok) ++violations;
          out << (ok ? "pass" : "FAIL") << "  " << c.name
              << ": positive capacity = " << (c.actual ? "yes" : "no") << '\n';
        }
        out << "violations: " << violations << '\n';
        return violations == 0 ? kExitOk : kExitSemantic;
      }
      case 2: {
        int violations = 0;
        int orth = 0;
        int nonadj = 0;
        for (const auto& [name, channel] :
             std::vector<std::pair<std::string, KrausChannel>>{
                 {"identity qubit", identity_channel(2)},
                 {"depolarizing p=1", depolarizing_channel(1.0)},
                 {"pentagon", embed_classical_dmc(pentagon_dmc()).channel}}) {
          const Prop2Report r = verify_proposition_2(
              channel, std::max(1, options.trials / 4), options.seed);
          violations += static_cast<int>(r.violations.size());
          orth += r.orthogonal_pairs;
          nonadj += r.nonadjacent_found;
          out << name << ": trials=" << r.trials
              << " orthogonal-pairs=" << r.orthogonal_pairs
              << " non-adjacent=" << r.nonadjacent_found
              << " violations=" << r.violations.size() << '\n';
        }
        const PropositionSweep sweep =
            sweep_propositions_2_4({2, 3, 4}, options.trials, options.seed);
        violations += static_cast<int>(sweep.prop2.violations.size());
        out << "random sweep d in {2,3,4}: trials=" << sweep.prop2.trials
            << " orthogonal-pairs=" << sweep.prop2.orthogonal_pairs
            << " non-adjacent=" << sweep.prop2.nonadjacent_found
            << " violations=" << sweep.prop2.violations.size() << '\n';
        out << "violations: " << violations << '\n';
        return violations == 0 ? kExitOk : kExitSemantic;
      }
      case 3: {
        rnd::Rng rng(options.seed);
        const EmbeddedDmc pentagon = embed_classical_dmc(pentagon_dmc());
        std::vector<std::pair<KrausChannel, Povm>> instances{
            {pentagon.channel, pentagon.povm},
            {identity_channel(2), Povm::computational(2)},
            {identity_channel(3), Povm::computational(3)},
            {bitflip_channel(0.3), Povm::computational(2)},
            {depolarizing_channel(0.5), Povm::computational(2)}};
        int failures = 0;
        long long edges_before = 0;
        long long edges_after = 0;
        for (int t = 0; t < options.trials; ++t) {
          const auto& [channel, povm] = instances[t % instances.size()];
          std::uniform_int_distribution<int> size(2, std::max(2, channel.dim()));
          const InputEnsemble mixed =
              t % 2 == 0 ? block_mixture_ensemble(channel.dim(), rng)
                         : sample_mixed_ensemble(channel.dim(), size(rng), rng);
          const Prop3Report r = verify_proposition_3(channel, mixed, povm);
          edges_before += r.original_edges;
          edges_after += r.purified_edges;
          if (!r.pass()) ++failures;
        }
        out << "ensembles tested: " << options.trials
            << "  edges before: " << edges_before << "  edges after: " << edges_after
            << '\n';
        out << "violations: " << failures << '\n';
        return failures == 0 ? kExitOk : kExitSemantic;
      }
      case 4: {
        const PropositionSweep sweep =
            sweep_propositions_2_4({2, 3, 4}, options.trials, options.seed);
        const Prop4Report& r = sweep.prop4;
        out << "pairs tested: " << r.trials
            << "  non-adjacent pairs found: " << r.nonadjacent_pairs
            << "  max |overlap|: " << r.max_overlap << '\n';
        for (const auto& v : r.violations) out << "violation: " << v << '\n';
        out << "violations: " << r.violations.size() << '\n';
        return r.violations.empty() ? kExitOk : kExitSemantic;
      }
      default:
        err << "error: --prop must be 1, 2, 3 or 4\n";
        return kExitParse;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSemantic;
  }
}

}  // namespace qzec::cli
