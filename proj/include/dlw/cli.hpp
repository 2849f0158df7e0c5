/// Command-line surface. Implemented as a library entry point so the whole
/// surface is testable in-process; tools/dlw.cpp is a thin wrapper.
///
/// Exit codes: 0 success (query verdicts are printed, not encoded), 1 parse
/// or validation error, 2 resource cap exceeded, 3 precondition violation.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dlw/jsonio.hpp>
#include <dlw/parser.hpp>
#include <dlw/verify.hpp>

namespace dlw::cli {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

inline EngineOptions engine_options() {
  EngineOptions opts;
  if (const char* cap = std::getenv("DLW_MAX_PREFIXES")) {
    try {
      opts.max_prefixes = std::stoull(cap);
    } catch (const std::exception&) {
      throw ValidationError("invalid DLW_MAX_PREFIXES value");
    }
  }
  return opts;
}

inline std::string bracketed(const DefaultTheory& t, const Process& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (i) out += ", ";
    out += t.at(p.steps[i]).name;
  }
  return out + "]";
}

inline Process parse_process_names(const DefaultTheory& t,
                                   const std::string& csv) {
  Process p;
  std::string token;
  std::istringstream is(csv);
  while (std::getline(is, token, ',')) {
    while (!token.empty() && token.front() == ' ') token.erase(0, 1);
    while (!token.empty() && token.back() == ' ') token.pop_back();
    if (token.empty()) continue;
    auto idx = t.index_of(token);
    if (!idx) throw ValidationError("unknown default name '" + token + "'");
    p.steps.push_back(*idx);
  }
  return p;
}

struct VerifySweep {
  dlw::verify::Report report;

  template <typename Fn>
  void per_theory(const std::string& id, Fn&& fn) {
    try {
      fn();
    } catch (const GuardError&) {
      ++report.guard_skips;
    } catch (const NoExtensionError&) {
      ++report.guard_skips;
    }
    (void)id;
  }
};

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"dlw - default logic workbench"};
  app.require_subcommand(1);

  std::string theory_path, semantics_name = "reiter", format = "text";
  std::string query_text, process_csv, mode_name, reasoning_name,
      output_formula_text, output_path;
  bool flag_skeptical = false, flag_credulous = false;

  auto add_common = [&](CLI::App* sub, bool needs_semantics) {
    sub->add_option("theory", theory_path, "path to a .dlt theory file")
        ->required();
    if (needs_semantics)
      sub->add_option("--semantics", semantics_name,
                      "reiter | constrained | justified | normal");
    sub->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* cmd_check = app.add_subcommand("check", "parse and validate");
  add_common(cmd_check, false);

  CLI::App* cmd_processes =
      app.add_subcommand("processes", "successful and closed processes");
  add_common(cmd_processes, true);

  CLI::App* cmd_extensions = app.add_subcommand("extensions", "extensions");
  add_common(cmd_extensions, true);

  CLI::App* cmd_entails =
      app.add_subcommand("entails", "skeptical/credulous entailment");
  add_common(cmd_entails, true);
  cmd_entails->add_option("-q,--query", query_text, "query formula")
      ->required();
  auto* opt_sk = cmd_entails->add_flag("--skeptical", flag_skeptical,
                                       "entailed by all extensions");
  cmd_entails
      ->add_flag("--credulous", flag_credulous,
                 "entailed by some extension")
      ->excludes(opt_sk);

  CLI::App* cmd_failsafe =
      app.add_subcommand("failsafe", "fail-safeness of the semantics on "
                                     "this theory");
  add_common(cmd_failsafe, true);

  CLI::App* cmd_complete = app.add_subcommand(
      "complete", "can the given process be completed to a successful and "
                  "closed one");
  add_common(cmd_complete, true);
  cmd_complete
      ->add_option("--process", process_csv,
                   "comma-separated default names, e.g. d1,d2")
      ->required();

  CLI::App* cmd_translate =
      app.add_subcommand("translate", "translate into normal default logic");
  add_common(cmd_translate, true);
  cmd_translate
      ->add_option("--mode", mode_name,
                   "simulate | faithful | almost | enumerate")
      ->required()
      ->check(CLI::IsMember({"simulate", "faithful", "almost", "enumerate"}));
  cmd_translate->add_option("--reasoning", reasoning_name,
                            "skeptical | credulous (almost mode)")
      ->check(CLI::IsMember({"skeptical", "credulous"}));
  cmd_translate->add_option("--output-formula", output_formula_text,
                            "the formula F emitted on rejected simulations "
                            "(simulate mode)");
  cmd_translate->add_option("-o,--output", output_path,
                            "write the result here instead of stdout");

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "corpus-driven property checks");
  std::string suite = "all";
  dlw::verify::CorpusParams params;
  params.count = 50;
  cmd_verify->add_option("--suite", suite,
                         "oracle | failsafe | simulation | faithful | almost "
                         "| properties | all")
      ->check(CLI::IsMember({"oracle", "failsafe", "simulation", "faithful",
                             "almost", "properties", "all"}));
  cmd_verify->add_option("--count", params.count, "corpus size");
  cmd_verify->add_option("--seed", params.seed, "corpus seed");
  cmd_verify->add_option("--max-defaults", params.max_defaults,
                         "defaults per theory");
  cmd_verify->add_option("--max-atoms", params.max_atoms, "alphabet size");
  cmd_verify->add_option("--depth", params.formula_depth, "formula depth");
  cmd_verify->add_option("--format", format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const bool json = format == "json";

  try {
    const SemanticsSpec sem = semantics_by_name(semantics_name);
    const EngineOptions opts = detail::engine_options();

    if (app.got_subcommand(cmd_check)) {
      DefaultTheory t = parse_theory(detail::read_file(theory_path));
      Oracle oracle;
      bool normal = is_normal(t, oracle);
      if (json) {
        nlohmann::json doc = to_json(t);
        doc["normal"] = normal;
        nlohmann::json atoms = nlohmann::json::array();
        for (const Atom& a : t.atoms()) atoms.push_back(a.name());
        doc["atoms"] = atoms;
        out << doc.dump() << '\n';
      } else {
        out << "ok: " << t.size() << " defaults, " << t.atoms().size()
            << " atoms, " << (normal ? "normal" : "not normal") << '\n';
      }
      return 0;
    }

    if (app.got_subcommand(cmd_processes)) {
      DefaultTheory t = parse_theory(detail::read_file(theory_path));
      Engine engine(t, sem, opts);
      auto ps = engine.successful_closed_processes();
      if (json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const Process& p : ps) doc.push_back(to_json(t, p));
        out << doc.dump() << '\n';
      } else if (ps.empty()) {
        out << "no processes\n";
      } else {
        for (const Process& p : ps) out << detail::bracketed(t, p) << '\n';
      }
      return 0;
    }

    if (app.got_subcommand(cmd_extensions)) {
      DefaultTheory t = parse_theory(detail::read_file(theory_path));
      Engine engine(t, sem, opts);
      const auto& exts = engine.extensions();
      if (json) {
        nlohmann::json doc;
        doc["extensions"] = nlohmann::json::array();
        for (const Extension& e : exts)
          doc["extensions"].push_back(to_json(t, e));
        out << doc.dump() << '\n';
      } else if (exts.empty()) {
        out << "no extensions\n";
      } else {
        for (std::size_t i = 0; i < exts.size(); ++i) {
          out << "extension " << (i + 1) << ": " << exts[i].axiom << '\n';
          for (const Process& p : exts[i].witnesses)
            out << "  witness: " << detail::bracketed(t, p) << '\n';
        }
      }
      return 0;
    }

    if (app.got_subcommand(cmd_entails)) {
      Query::Mode mode = flag_credulous ? Query::Mode::Credulous
                                        : Query::Mode::Skeptical;
      Formula q = parse_formula(query_text);
      DefaultTheory t = parse_theory(detail::read_file(theory_path));
      Engine engine(t, sem, opts);
      if (engine.extensions().empty())
        err << "warning: theory has no extensions under '" << sem.name
            << "'; skeptical queries hold vacuously\n";
      bool verdict = mode == Query::Mode::Skeptical
                         ? engine.skeptical_entails(q)
                         : engine.credulous_entails(q);
      if (json) {
        out << nlohmann::json{
                   {"query", q.str()},
                   {"mode", mode == Query::Mode::Skeptical ? "skeptical"
                                                           : "credulous"},
                   {"verdict", verdict},
                   {"extensions", engine.extensions().size()}}
                   .dump()
            << '\n';
      } else {
        out << (verdict ? "true" : "false") << '\n';
      }
      return 0;
    }

    if (app.got_subcommand(cmd_failsafe)) {
      DefaultTheory t = parse_theory(detail::read_file(theory_path));
      Engine engine(t, sem, opts);
      auto fs = engine.fail_safe();
      if (json) {
        nlohmann::json doc{{"fail_safe", fs.fail_safe}};
        doc["witness"] =
            fs.witness ? to_json(t, *fs.witness) : nlohmann::json(nullptr);
        out << doc.dump() << '\n';
      } else if (fs.fail_safe) {
        out << "fail-safe\n";
      } else {
        out << "not fail-safe (witness prefix: "
            << detail::bracketed(t, *fs.witness) << ")\n";
      }
      return 0;
    }

    if (app.got_subcommand(cmd_complete)) {
      DefaultTheory t = parse_theory(detail::read_file(theory_path));
      Engine engine(t, sem, opts);
      Process p = detail::parse_process_names(t, process_csv);
      bool verdict = engine.completable(p);
      if (json)
        out << nlohmann::json{{"process", to_json(t, p)},
                              {"completable", verdict}}
                   .dump()
            << '\n';
      else
        out << (verdict ? "true" : "false") << '\n';
      return 0;
    }

    if (app.got_subcommand(cmd_translate)) {
      DefaultTheory t = parse_theory(detail::read_file(theory_path));

      std::optional<SimulationArtifacts> art;
      std::optional<DefaultTheory> plain;
      std::vector<std::string> info;

      if (mode_name == "simulate") {
        if (output_formula_text.empty())
          throw ValidationError("simulate mode requires --output-formula");
        art = build_simulation(t, sem, parse_formula(output_formula_text));
      } else if (mode_name == "faithful") {
        art = faithful_translate(t, sem, opts);
      } else if (mode_name == "almost") {
        if (reasoning_name.empty())
          throw ValidationError("almost mode requires --reasoning");
        Query::Mode mode = reasoning_name == "credulous"
                               ? Query::Mode::Credulous
                               : Query::Mode::Skeptical;
        AlmostTranslation tr = almost_translate(t, sem, mode);
        info.push_back("flag: " + tr.flag.name());
        info.push_back("query rewrite: q  |->  " +
                       (mode == Query::Mode::Skeptical
                            ? tr.flag.name() + " | q"
                            : tr.flag.name() + " & q"));
        art = std::move(tr.artifacts);
      } else {
        plain = enumerate_translate(t, sem, opts);
      }

      std::string document;
      if (art) {
        std::ostringstream doc;
        doc << "#generated\n";
        for (const std::string& line : info) doc << "# " << line << '\n';
        std::string rest = serialize_artifacts(*art);
        rest.erase(0, std::string("#generated\n").size());
        doc << rest;
        document = doc.str();
      } else {
        document = serialize_theory(*plain);
      }

      if (json) {
        nlohmann::json doc = art ? to_json(*art) : to_json(*plain);
        if (!info.empty()) {
          doc["flag"] = "__a";
          doc["query_rewrite"] = info[1].substr(std::string("query rewrite: ")
                                                    .size());
        }
        document = doc.dump() + "\n";
      }

      if (output_path.empty()) {
        out << document;
      } else {
        detail::write_file(output_path, document);
        std::size_t n = art ? art->theory.size() : plain->size();
        out << "wrote " << output_path << " (" << n << " defaults)\n";
        for (const std::string& line : info) out << line << '\n';
      }
      return 0;
    }

    if (app.got_subcommand(cmd_verify)) {
      using namespace dlw::verify;
      detail::VerifySweep sweep;

      auto run_oracle = [&] {
        for (std::size_t i = 0; i < params.count; ++i) {
          std::string id = "corpus-" + std::to_string(params.seed) + "-" +
                           std::to_string(i);
          sweep.per_theory(id, [&] {
            sweep.report.add(
                check_oracle_equivalence(random_theory(params, i), id, opts));
          });
        }
      };
      auto run_properties = [&] {
        for (std::size_t i = 0; i < params.count; ++i) {
          std::string id = "corpus-" + std::to_string(params.seed) + "-" +
                           std::to_string(i);
          sweep.per_theory(id, [&] {
            DefaultTheory t = random_theory(params, i);
            sweep.report.merge(
                check_process_properties(t, reiter_semantics(), id, opts));
            sweep.report.merge(check_process_properties(
                t, constrained_semantics(), id, opts));
          });
        }
      };
      auto simulation_corpus = [&] {
        CorpusParams small = params;
        small.max_defaults = std::min<std::size_t>(params.max_defaults, 2);
        small.max_atoms = std::min<std::size_t>(params.max_atoms, 2);
        return corpus_with_extensions(small, sem, params.count, opts);
      };
      auto run_simulation = [&] {
        for (const auto& [id, t] : simulation_corpus())
          sweep.per_theory(id, [&, &id = id, &t = t] {
            sweep.report.merge(check_simulation(
                t, sem, Formula::var(Atom("__a")), id, opts));
          });
      };
      auto run_faithful = [&] {
        for (const auto& [id, t] : simulation_corpus())
          sweep.per_theory(id, [&, &id = id, &t = t] {
            sweep.report.merge(check_faithful(t, sem, id, opts));
          });
      };
      auto run_almost = [&] {
        for (const auto& [id, t] : simulation_corpus())
          sweep.per_theory(id, [&, &id = id, &t = t] {
            sweep.report.merge(
                check_almost(t, sem, literal_queries(t), id, opts));
          });
      };

      if (suite == "oracle" || suite == "all") run_oracle();
      if (suite == "failsafe" || suite == "all")
        sweep.report.merge(check_failsafe_asymmetry(params, opts));
      if (suite == "properties" || suite == "all") run_properties();
      if (suite == "simulation" || suite == "all") run_simulation();
      if (suite == "faithful" || suite == "all") run_faithful();
      if (suite == "almost" || suite == "all") run_almost();

      if (json) {
        nlohmann::json doc;
        doc["findings"] = nlohmann::json::array();
        for (const Finding& f : sweep.report.findings)
          doc["findings"].push_back(f.to_json());
        doc["guard_skips"] = sweep.report.guard_skips;
        doc["pass"] = sweep.report.all_passed();
        out << doc.dump() << '\n';
      } else {
        for (const Finding& f : sweep.report.findings)
          out << f.to_json().dump() << '\n';
      }
      std::size_t failures = 0;
      for (const Finding& f : sweep.report.findings)
        if (!f.passed) ++failures;
      err << sweep.report.findings.size() << " findings, " << failures
          << " failures, " << sweep.report.guard_skips << " guard skips\n";
      return sweep.report.all_passed() ? 0 : 1;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace dlw::cli
