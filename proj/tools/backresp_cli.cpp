// Command-line front end: analyze, sample, generate, validate.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "backresp/backresp.hpp"

namespace {

using namespace backresp;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;
constexpr int kExitPlan = 4;

struct CommonArgs {
  std::string input = "-";
  std::string mode = "pessimistic";
  std::string index = "shapley";
  bool use_groups = false;
  std::string output = "table";
  std::optional<std::size_t> threads;
  bool complete_sinks = false;
  bool allow_negative = false;
  std::size_t player_cap = 25;
  unsigned digits = 4;
  std::string out_file;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("FileNotFound", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("FileNotWritable", "cannot write '" + path + "'");
  out << text;
}

std::size_t resolve_threads(const std::optional<std::size_t>& flag) {
  if (flag) return std::max<std::size_t>(1, *flag);
  if (const char* env = std::getenv("RESP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
    }
    throw input_error("BadThreads", std::string("RESP_THREADS must be a positive integer, got '") + env + "'");
  }
  return default_thread_count();
}

GameVariant parse_mode(const std::string& mode) {
  return mode == "optimistic" ? GameVariant::Optimistic : GameVariant::Pessimistic;
}

OutputFormat parse_format(const std::string& f) {
  if (f == "json") return OutputFormat::Json;
  if (f == "csv") return OutputFormat::Csv;
  return OutputFormat::Table;
}

WeightVector make_weights(const std::string& index, std::size_t players, bool allow_negative) {
  if (index == "shapley") return shapley_weights(players);
  if (index == "banzhaf") return banzhaf_weights(players);
  if (index.rfind("custom:", 0) == 0) {
    auto p = parse_weights(read_text(index.substr(7)));
    if (p.size() != players) {
      throw input_error("WeightCountMismatch", "weights file has " + std::to_string(p.size()) +
                                                   " entries but there are " + std::to_string(players) + " players");
    }
    return validate_custom(std::move(p), allow_negative);
  }
  throw input_error("BadIndex", "unknown index '" + index + "'; expected shapley, banzhaf or custom:<file>");
}

Model load_model(const CommonArgs& a) {
  return build_model(parse_model_text(read_text(a.input)), {a.complete_sinks});
}

std::size_t player_count(const Model& m, bool use_groups) {
  return use_groups ? m.grouping.size() : m.system.num_states();
}

void add_common(CLI::App& cmd, CommonArgs& a) {
  cmd.add_option("-i,--input", a.input, "Model file (.tsr or JSON); '-' reads stdin")->capture_default_str();
  cmd.add_option("--mode", a.mode, "Game variant")
      ->check(CLI::IsMember({"pessimistic", "optimistic"}))
      ->capture_default_str();
  cmd.add_option("--index", a.index, "shapley, banzhaf or custom:<weights file>")->capture_default_str();
  cmd.add_flag("--use-groups", a.use_groups, "Treat declared state groups as players");
  cmd.add_option("--output", a.output, "Report format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  cmd.add_option("--threads", a.threads, "Worker threads (default: RESP_THREADS or all cores)");
  cmd.add_flag("--complete-sinks", a.complete_sinks, "Give states without successors a self-loop");
  cmd.add_flag("--allow-negative-weights", a.allow_negative, "Accept custom weights below zero");
  cmd.add_option("--player-cap", a.player_cap, "Largest player count for exact enumeration")->capture_default_str();
  cmd.add_option("--digits", a.digits, "Decimal places in reports")->capture_default_str();
  cmd.add_option("-o,--out", a.out_file, "Write the report to this file instead of stdout");
}

int run_analyze(const CommonArgs& a, const std::string& engine) {
  const Model model = load_model(a);
  const auto variant = parse_mode(a.mode);
  const auto weights = make_weights(a.index, player_count(model, a.use_groups), a.allow_negative);
  ResponsibilityReport report;
  if (engine == "fast") {
    if (variant != GameVariant::Optimistic) {
      throw input_error("FastNeedsOptimistic", "--engine fast is only defined for --mode optimistic");
    }
    if (a.use_groups) {
      throw input_error("FastNeedsStates", "--engine fast works on individual states; drop --use-groups");
    }
    report = optimistic_fast(model, weights);
  } else {
    report = exact(model, variant, weights, a.use_groups, {a.player_cap, resolve_threads(a.threads)});
  }
  write_text(a.out_file, render(report, parse_format(a.output), {a.digits}));
  return kExitOk;
}

int run_sample(const CommonArgs& a, std::optional<std::uint64_t> samples, std::optional<double> time_budget,
               std::uint64_t seed) {
  const Model model = load_model(a);
  const auto variant = parse_mode(a.mode);
  const auto weights = make_weights(a.index, player_count(model, a.use_groups), a.allow_negative);
  const std::size_t threads = resolve_threads(a.threads);
  const SamplingPlan plan = time_budget
                                ? plan_for_time(model, variant, weights, *time_budget, seed, a.use_groups, threads)
                                : plan_samples(weights, samples.value_or(10000), seed);
  const auto report = estimate(model, variant, weights, plan, a.use_groups, threads);
  write_text(a.out_file, render(report, parse_format(a.output), {a.digits}));
  return kExitOk;
}

int run_generate(const std::string& family, const std::vector<std::string>& params, const std::string& format,
                 const std::string& out_file) {
  std::map<std::string, std::string> kv;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw input_error("BadParam", "expected key=value, got '" + p + "'");
    kv[p.substr(0, eq)] = p.substr(eq + 1);
  }
  const RawModel raw = zoo::generate(zoo::family_from(family, kv));
  (void)build_model(raw);
  write_text(out_file, format == "json" ? emit_json_model(raw) : emit_tsr(raw));
  return kExitOk;
}

int run_validate(const std::string& path, bool complete_sinks) {
  const RawModel raw = parse_model_text(read_text(path));
  const auto checked = validate_system(raw, {complete_sinks});
  bool ok = checked.ok();
  for (const auto& d : checked.diagnostics) {
    std::cout << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.code << ": " << d.message << '\n';
  }
  if (ok) {
    try {
      const Model m = build_model(raw, {complete_sinks});
      std::cout << "states: " << m.system.num_states() << '\n'
                << "transitions: " << m.system.num_transitions() << '\n'
                << "counterexample: " << (m.counterexample ? std::to_string(m.counterexample->length()) + " states"
                                                           : std::string("none"))
                << '\n'
                << "groups: " << m.grouping.size() << '\n';
    } catch (const Error& e) {
      std::cout << "error: " << e.what() << '\n';
      ok = false;
    }
  }
  std::cout << (ok ? "valid" : "invalid") << '\n';
  return ok ? kExitOk : kExitInput;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::CapExceeded: return kExitCap;
    case ErrorKind::Plan: return kExitPlan;
    case ErrorKind::Input: return kExitInput;
    case ErrorKind::Internal: return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backward responsibility of states in transition systems"};
  app.require_subcommand(1);

  CommonArgs analyze_args;
  std::string engine = "exact";
  auto* analyze = app.add_subcommand("analyze", "Exact responsibility of every state or group");
  add_common(*analyze, analyze_args);
  analyze->add_option("--engine", engine, "exact, or fast (optimistic only)")
      ->check(CLI::IsMember({"exact", "fast"}))
      ->capture_default_str();

  CommonArgs sample_args;
  std::optional<std::uint64_t> samples;
  std::optional<double> time_budget;
  std::uint64_t seed = 0;
  auto* sample = app.add_subcommand("sample", "Stochastic estimate of responsibility");
  add_common(*sample, sample_args);
  auto* samples_opt = sample->add_option("--samples", samples, "Total coalition samples (default 10000)");
  auto* time_opt = sample->add_option("--time-budget", time_budget, "Seconds to spend; calibrates a sample budget");
  samples_opt->excludes(time_opt);
  sample->add_option("--seed", seed, "RNG seed")->capture_default_str();

  std::string family;
  std::vector<std::string> params;
  std::string gen_format = "tsr";
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Emit a built-in model");
  generate->add_option("family", family, "train, dresden, dining, generals or peg")->required();
  generate->add_option("--param", params, "Family parameter key=value (repeatable)");
  generate->add_option("--format", gen_format, "Output format")
      ->check(CLI::IsMember({"tsr", "json"}))
      ->capture_default_str();
  generate->add_option("-o,--out", gen_out, "Output file (default stdout)");

  std::string validate_path;
  bool validate_complete = false;
  auto* validate = app.add_subcommand("validate", "Check a model file and print diagnostics");
  validate->add_option("file", validate_path, "Model file; '-' reads stdin")->required();
  validate->add_flag("--complete-sinks", validate_complete, "Give states without successors a self-loop");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (analyze->parsed()) return run_analyze(analyze_args, engine);
    if (sample->parsed()) return run_sample(sample_args, samples, time_budget, seed);
    if (generate->parsed()) return run_generate(family, params, gen_format, gen_out);
    if (validate->parsed()) return run_validate(validate_path, validate_complete);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return kExitInput;
}
