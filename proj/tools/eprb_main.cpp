// Command-line surface over the C API: closed-form singlet statistics,
// seeded sampling, stripe-model correlations, oval-ball measurements,
// inequality checks, and the triangle-vs-quantum sweep.
//
// Exit codes: 0 success, 2 invalid arguments, 3 numerical or model errors
// (domain, stripe-edge, mode, consumed, budget), 4 when --fail-on-violation
// is set and the checked inequality is violated.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eprb/eprb.h"
#include "json.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

struct CliFailure {
  int exit_code;
  std::string message;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000000;
  unsigned workers = 1;
  std::string format;  // from config file; empty means per-command default
};

int exit_code_for(eprb_status status) {
  return status == EPRB_ERR_ARGUMENT ? 2 : 3;
}

void check(eprb_status status) {
  if (status == EPRB_OK) return;
  throw CliFailure{exit_code_for(status),
                   std::string(eprb_status_name(status)) + ": " +
                       eprb_last_error_message()};
}

// Angle literals arriving on the command line are usage errors when bad.
eprb_angle parse_angle_arg(const std::string& text) {
  eprb_angle angle;
  const eprb_status status = eprb_angle_parse(text.c_str(), &angle);
  if (status != EPRB_OK)
    throw CliFailure{2, std::string(eprb_status_name(status)) + ": " +
                            eprb_last_error_message()};
  return angle;
}

std::vector<eprb_angle> parse_angle_list(const std::string& text) {
  std::vector<eprb_angle> angles;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    angles.push_back(parse_angle_arg(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return angles;
}

std::string fmt9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

ordered_json run_echo(const RunConfig& cfg) {
  return ordered_json{
      {"seed", cfg.seed}, {"samples", cfg.samples}, {"workers", cfg.workers}};
}

void print_json(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

// Reproducibility stamp leading every CSV document.
void print_csv_stamp(const RunConfig& cfg) {
  std::cout << "# seed=" << cfg.seed << " samples=" << cfg.samples
            << " workers=" << cfg.workers << "\n";
}

std::string resolve_format(const std::string& flag_value,
                           const RunConfig& cfg,
                           const std::string& command_default) {
  if (!flag_value.empty()) return flag_value;
  if (!cfg.format.empty()) return cfg.format;
  return command_default;
}

// ---- subcommand bodies --------------------------------------------------

int cmd_qm_prob(const std::string& theta_str, const RunConfig& cfg,
                const std::string& format) {
  const eprb_angle theta = parse_angle_arg(theta_str);
  double same = 0.0;
  double prime = 0.0;
  check(eprb_p_same(theta.radians, &same));
  check(eprb_p_prime(theta.radians, &prime));
  if (format == "json") {
    ordered_json doc{{"command", "qm prob"},
                     {"theta", theta.radians},
                     {"p_same", same},
                     {"p_prime", prime}};
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "theta,p_same,p_prime\n"
              << fmt9(theta.radians) << "," << fmt9(same) << "," << fmt9(prime)
              << "\n";
  } else {
    std::cout << "theta     = " << fmt9(theta.radians) << " rad\n"
              << "P(theta)  = " << fmt9(same) << "\n"
              << "P'(theta) = " << fmt9(prime) << "\n";
  }
  return 0;
}

int cmd_qm_correlation(const std::string& theta_str, const RunConfig& cfg,
                       const std::string& format) {
  const eprb_angle theta = parse_angle_arg(theta_str);
  double corr = 0.0;
  check(eprb_correlation_qm(theta.radians, &corr));
  if (format == "json") {
    ordered_json doc{{"command", "qm correlation"},
                     {"theta", theta.radians},
                     {"correlation", corr}};
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "theta,correlation\n"
              << fmt9(theta.radians) << "," << fmt9(corr) << "\n";
  } else {
    std::cout << "theta       = " << fmt9(theta.radians) << " rad\n"
              << "correlation = " << fmt9(corr) << "\n";
  }
  return 0;
}

int cmd_qm_joint(const std::string& theta_str, const RunConfig& cfg,
                 const std::string& format) {
  const eprb_angle theta = parse_angle_arg(theta_str);
  double probs[4] = {0.0, 0.0, 0.0, 0.0};
  check(eprb_joint(theta.radians, probs));
  if (format == "json") {
    ordered_json doc{{"command", "qm joint"},
                     {"theta", theta.radians},
                     {"p_pp", probs[0]},
                     {"p_pm", probs[1]},
                     {"p_mp", probs[2]},
                     {"p_mm", probs[3]}};
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "theta,p_pp,p_pm,p_mp,p_mm\n"
              << fmt9(theta.radians) << "," << fmt9(probs[0]) << ","
              << fmt9(probs[1]) << "," << fmt9(probs[2]) << ","
              << fmt9(probs[3]) << "\n";
  } else {
    std::cout << "theta = " << fmt9(theta.radians) << " rad\n"
              << "P(+,+) = " << fmt9(probs[0]) << "\n"
              << "P(+,-) = " << fmt9(probs[1]) << "\n"
              << "P(-,+) = " << fmt9(probs[2]) << "\n"
              << "P(-,-) = " << fmt9(probs[3]) << "\n";
  }
  return 0;
}

int cmd_sample_singlet(const std::string& theta_str, const RunConfig& cfg,
                       const std::string& format) {
  const eprb_angle theta = parse_angle_arg(theta_str);
  eprb_angle zero;
  check(eprb_angle_from_pi_fraction(0, 1, &zero));

  eprb_sampler* sampler = nullptr;
  check(eprb_sampler_new(zero, theta, cfg.seed, &sampler));

  if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "index,outcome1,outcome2\n";
    for (std::uint64_t i = 0; i < cfg.samples; ++i) {
      int e1 = 0;
      int e2 = 0;
      const eprb_status status = eprb_sampler_next(sampler, &e1, &e2);
      if (status != EPRB_OK) {
        eprb_sampler_free(sampler);
        check(status);
      }
      std::cout << i << "," << e1 << "," << e2 << "\n";
    }
    eprb_sampler_free(sampler);
    return 0;
  }

  std::uint64_t counts[4] = {0, 0, 0, 0};
  const eprb_status status = eprb_sampler_tally(sampler, cfg.samples, counts);
  eprb_sampler_free(sampler);
  check(status);

  const double n = static_cast<double>(cfg.samples);
  const double corr =
      (static_cast<double>(counts[0] + counts[3]) -
       static_cast<double>(counts[1] + counts[2])) /
      n;
  double closed_form = 0.0;
  check(eprb_correlation_qm(theta.radians, &closed_form));

  if (format == "json") {
    ordered_json doc{{"command", "sample singlet"},
                     {"theta", theta.radians},
                     {"counts",
                      {{"pp", counts[0]},
                       {"pm", counts[1]},
                       {"mp", counts[2]},
                       {"mm", counts[3]}}},
                     {"empirical_correlation", corr},
                     {"closed_form_correlation", closed_form}};
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else {
    std::cout << "theta = " << fmt9(theta.radians) << " rad, samples = "
              << cfg.samples << ", seed = " << cfg.seed << "\n"
              << "counts (+,+)=" << counts[0] << " (+,-)=" << counts[1]
              << " (-,+)=" << counts[2] << " (-,-)=" << counts[3] << "\n"
              << "empirical correlation   = " << fmt9(corr) << "\n"
              << "closed-form correlation = " << fmt9(closed_form) << "\n";
  }
  return 0;
}

int cmd_bell_check(const std::string& inequality, const std::string& model,
                   const std::string& angles_str, const std::string& mode,
                   bool fail_on_violation, const RunConfig& cfg,
                   const std::string& format) {
  const std::vector<eprb_angle> angles = parse_angle_list(angles_str);
  eprb_report report;
  check(eprb_bell_check(inequality.c_str(), model.c_str(), angles.data(),
                        static_cast<int>(angles.size()), mode.c_str(),
                        cfg.samples, cfg.seed, cfg.workers, &report));

  const char* verdict = report.violated ? "violated" : "satisfied";
  if (format == "json") {
    ordered_json doc{{"inequality", report.inequality},
                     {"model", report.model},
                     {"mode", report.mode}};
    ordered_json angle_list = ordered_json::array();
    for (int i = 0; i < report.n_angles; ++i)
      angle_list.push_back(report.angles[i]);
    doc["angles"] = angle_list;
    doc["lhs"] = report.lhs;
    doc["rhs"] = report.rhs;
    doc["slack"] = report.slack;
    if (report.has_standard_error) doc["stderr"] = report.standard_error;
    doc["verdict"] = verdict;
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "inequality,model,mode,angles,lhs,rhs,slack,stderr,verdict\n";
    std::string joined;
    for (int i = 0; i < report.n_angles; ++i) {
      if (i > 0) joined += ';';
      joined += fmt9(report.angles[i]);
    }
    std::cout << report.inequality << "," << report.model << "," << report.mode
              << "," << joined << "," << fmt9(report.lhs) << ","
              << fmt9(report.rhs) << "," << fmt9(report.slack) << ","
              << (report.has_standard_error ? fmt9(report.standard_error) : "")
              << "," << verdict << "\n";
  } else {
    std::cout << "inequality : " << report.inequality << "\n"
              << "model      : " << report.model << "\n"
              << "mode       : " << report.mode << "\n";
    std::cout << "angles     : ";
    for (int i = 0; i < report.n_angles; ++i)
      std::cout << (i > 0 ? ", " : "") << fmt9(report.angles[i]);
    std::cout << "\n"
              << "lhs        = " << fmt9(report.lhs) << "\n"
              << "rhs        = " << fmt9(report.rhs) << "\n"
              << "slack      = " << fmt9(report.slack) << "\n";
    if (report.has_standard_error)
      std::cout << "stderr     = " << fmt9(report.standard_error) << "\n";
    std::cout << "verdict    : " << verdict << "\n";
  }
  if (fail_on_violation && report.violated) return 4;
  return 0;
}

int cmd_tube_faces(double alpha, const RunConfig& cfg,
                   const std::string& format) {
  static const char* kShiftNames[4] = {"0", "1/4", "1/2", "3/4"};
  int values[4] = {0, 0, 0, 0};
  for (int face = 1; face <= 4; ++face)
    check(eprb_tube_face_value(face, alpha, &values[face - 1]));
  if (format == "json") {
    ordered_json doc{{"command", "tube faces"}, {"alpha", alpha}};
    ordered_json list = ordered_json::array();
    for (int i = 0; i < 4; ++i)
      list.push_back(ordered_json{
          {"face", i + 1}, {"shift", kShiftNames[i]}, {"value", values[i]}});
    doc["faces"] = list;
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "face,shift,value\n";
    for (int i = 0; i < 4; ++i)
      std::cout << (i + 1) << "," << kShiftNames[i] << "," << values[i] << "\n";
  } else {
    std::cout << "alpha = " << fmt9(alpha) << "\n";
    for (int i = 0; i < 4; ++i)
      std::cout << "F" << (i + 1) << " (shift " << kShiftNames[i]
                << "): " << (values[i] > 0 ? "+1" : "-1") << "\n";
  }
  return 0;
}

int cmd_tube_corr(const std::string& faces_str, const std::string& mode,
                  const RunConfig& cfg, const std::string& format) {
  int face_i = 0;
  int face_j = 0;
  if (std::sscanf(faces_str.c_str(), "%d,%d", &face_i, &face_j) != 2)
    throw CliFailure{2, "argument: --faces expects two indices like 1,3"};

  if (mode == "exact") {
    double corr = 0.0;
    std::int64_t num = 0;
    std::int64_t den = 1;
    check(eprb_tube_correlation_exact(face_i, face_j, &corr, &num, &den));
    const std::string fraction =
        den == 1 ? std::to_string(num)
                 : std::to_string(num) + "/" + std::to_string(den);
    if (format == "json") {
      ordered_json doc{{"command", "tube corr"},
                       {"faces", {face_i, face_j}},
                       {"mode", "exact"},
                       {"correlation", corr},
                       {"exact", fraction}};
      doc["run"] = run_echo(cfg);
      print_json(doc);
    } else if (format == "csv") {
      print_csv_stamp(cfg);
      std::cout << "face_i,face_j,mode,correlation,exact\n"
                << face_i << "," << face_j << ",exact," << fmt9(corr) << ","
                << fraction << "\n";
    } else {
      std::cout << "correlation(F" << face_i << ",F" << face_j
                << ") = " << fmt9(corr) << " (exact " << fraction << ")\n";
    }
    return 0;
  }

  double estimate = 0.0;
  double standard_error = 0.0;
  check(eprb_tube_correlation_mc(face_i, face_j, cfg.samples, cfg.seed,
                                 cfg.workers, &estimate, &standard_error));
  if (format == "json") {
    ordered_json doc{{"command", "tube corr"},
                     {"faces", {face_i, face_j}},
                     {"mode", "mc"},
                     {"correlation", estimate},
                     {"stderr", standard_error}};
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "face_i,face_j,mode,correlation,stderr\n"
              << face_i << "," << face_j << ",mc," << fmt9(estimate) << ","
              << fmt9(standard_error) << "\n";
  } else {
    std::cout << "correlation(F" << face_i << ",F" << face_j
              << ") = " << fmt9(estimate) << " +/- " << fmt9(standard_error)
              << " (mc, n=" << cfg.samples << ", seed=" << cfg.seed << ")\n";
  }
  return 0;
}

int cmd_oval_measure(double beta, int face, const RunConfig& cfg,
                     const std::string& format) {
  eprb_oval* ball = nullptr;
  check(eprb_oval_new(beta, &ball));
  int value = 0;
  const eprb_status status = eprb_oval_measure(ball, face, &value);
  eprb_oval_free(ball);
  check(status);
  if (format == "json") {
    ordered_json doc{{"command", "oval measure"},
                     {"beta", beta},
                     {"face", face},
                     {"outcome", value}};
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "beta,face,outcome\n"
              << fmt9(beta) << "," << face << "," << value << "\n";
  } else {
    std::cout << "outcome = " << (value > 0 ? "+1" : "-1")
              << " (ball consumed)\n";
  }
  return 0;
}

int cmd_sweep(const std::string& curve, const std::string& step_str,
              const RunConfig& cfg, const std::string& format) {
  const eprb_angle step = parse_angle_arg(step_str);
  if (!(step.radians > 0.0))
    throw CliFailure{2, "argument: --step must be positive"};

  struct Row {
    double theta;
    double qm;
    double triangle;
    double deviation;
  };
  std::vector<Row> rows;
  const double pi = 3.14159265358979323846;
  if (step.has_pi_fraction && step.pi_num > 0) {
    // exact grid k * (num/den) * pi while k*num <= den
    for (std::int64_t k = 0; k * step.pi_num <= step.pi_den; ++k) {
      const double theta =
          (static_cast<double>(k * step.pi_num) /
           static_cast<double>(step.pi_den)) *
          pi;
      rows.push_back(Row{theta, 0.0, 0.0, 0.0});
    }
  } else {
    for (double theta = 0.0; theta <= pi + 1e-12;
         theta += step.radians)
      rows.push_back(Row{theta, 0.0, 0.0, 0.0});
  }
  for (Row& row : rows) {
    check(eprb_p_prime(row.theta, &row.qm));
    check(eprb_richer_tube_disagreement(row.theta, &row.triangle));
    row.deviation = row.triangle - row.qm;
  }

  if (format == "csv") {
    print_csv_stamp(cfg);
    std::cout << "theta,p_prime_qm,p_prime_triangle,deviation\n";
    for (const Row& row : rows)
      std::cout << fmt9(row.theta) << "," << fmt9(row.qm) << ","
                << fmt9(row.triangle) << "," << fmt9(row.deviation) << "\n";
    return 0;
  }

  double max_dev = 0.0;
  double argmax = 0.0;
  std::vector<double> equal_points;
  for (const Row& row : rows) {
    if (std::abs(row.deviation) > max_dev) {
      max_dev = std::abs(row.deviation);
      argmax = row.theta;
    }
    if (std::abs(row.deviation) <= 1e-12) equal_points.push_back(row.theta);
  }

  if (format == "json") {
    ordered_json doc{{"command", "sweep"},
                     {"curve", curve},
                     {"step", step.radians},
                     {"points", rows.size()},
                     {"max_abs_deviation", max_dev},
                     {"argmax_theta", argmax}};
    ordered_json list = ordered_json::array();
    for (const Row& row : rows)
      list.push_back(ordered_json{{"theta", row.theta},
                                  {"p_prime_qm", row.qm},
                                  {"p_prime_triangle", row.triangle},
                                  {"deviation", row.deviation}});
    doc["rows"] = list;
    doc["run"] = run_echo(cfg);
    print_json(doc);
  } else {
    std::cout << "points          = " << rows.size() << " (step "
              << fmt9(step.radians) << " rad, curve " << curve << ")\n"
              << "max |deviation| = " << fmt9(max_dev) << " at theta = "
              << fmt9(argmax) << "\n";
    std::cout << "curves equal (within 1e-12) at theta in {";
    for (std::size_t i = 0; i < equal_points.size(); ++i)
      std::cout << (i > 0 ? ", " : "") << fmt9(equal_points[i]);
    std::cout << "}\n";
  }
  return 0;
}

// ---- config file ---------------------------------------------------------

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in)
    throw CliFailure{2, "argument: cannot open config file '" + path + "'"};
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw CliFailure{2, "argument: bad config file: " + std::string(e.what())};
  }
  try {
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("samples"))
      cfg.samples = doc["samples"].get<std::uint64_t>();
    if (doc.contains("workers")) cfg.workers = doc["workers"].get<unsigned>();
    if (doc.contains("format")) {
      cfg.format = doc["format"].get<std::string>();
      if (cfg.format != "text" && cfg.format != "csv" && cfg.format != "json")
        throw CliFailure{2, "argument: config format must be text, csv, json"};
    }
  } catch (const CliFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw CliFailure{2, "argument: bad config value: " + std::string(e.what())};
  }
}

std::optional<std::string> find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  RunConfig cfg;
  std::function<int()> action;

  try {
    if (const auto config_path = find_config_arg(argc, argv))
      load_config_file(*config_path, cfg);

    CLI::App app{"Singlet-pair statistics, stripe local models, and "
                 "disagreement-inequality checks"};
    app.require_subcommand(1);
    std::string config_path_opt;
    app.add_option("--config", config_path_opt,
                   "JSON file with seed/samples/workers/format defaults");

    std::string format_flag;
    const auto add_format = [&format_flag](CLI::App* cmd) {
      cmd->add_option("--format", format_flag, "output format")
          ->check(CLI::IsMember({"text", "csv", "json"}));
    };
    const auto add_run = [&](CLI::App* cmd) {
      cmd->add_option("--seed", cfg.seed, "random seed")
          ->capture_default_str();
      cmd->add_option("--samples", cfg.samples, "sample count")
          ->capture_default_str();
      cmd->add_option("--workers", cfg.workers, "parallel workers")
          ->capture_default_str();
    };
    const auto add_config = [&config_path_opt](CLI::App* cmd) {
      cmd->add_option("--config", config_path_opt,
                      "JSON file with seed/samples/workers/format defaults");
    };

    // qm prob | correlation | joint
    CLI::App* qm = app.add_subcommand("qm", "closed-form singlet statistics");
    qm->require_subcommand(1);
    std::string theta_str;
    {
      CLI::App* prob = qm->add_subcommand("prob", "P(theta) and P'(theta)");
      prob->add_option("--theta", theta_str, "separation angle")->required();
      add_format(prob);
      add_config(prob);
      prob->callback([&] {
        action = [&, format = resolve_format(format_flag, cfg, "text")] {
          return cmd_qm_prob(theta_str, cfg, format);
        };
      });
    }
    {
      CLI::App* corr = qm->add_subcommand("correlation", "-cos(theta)");
      corr->add_option("--theta", theta_str, "separation angle")->required();
      add_format(corr);
      add_config(corr);
      corr->callback([&] {
        action = [&, format = resolve_format(format_flag, cfg, "text")] {
          return cmd_qm_correlation(theta_str, cfg, format);
        };
      });
    }
    {
      CLI::App* joint = qm->add_subcommand("joint", "joint outcome law");
      joint->add_option("--theta", theta_str, "separation angle")->required();
      add_format(joint);
      add_config(joint);
      joint->callback([&] {
        action = [&, format = resolve_format(format_flag, cfg, "text")] {
          return cmd_qm_joint(theta_str, cfg, format);
        };
      });
    }

    // sample singlet
    CLI::App* sample = app.add_subcommand("sample", "seeded outcome streams");
    sample->require_subcommand(1);
    bool csv_flag = false;
    {
      CLI::App* singlet = sample->add_subcommand("singlet", "draw outcome pairs");
      singlet->add_option("--theta", theta_str, "separation angle")->required();
      add_run(singlet);
      singlet->add_flag("--csv", csv_flag, "raw samples as CSV");
      add_format(singlet);
      add_config(singlet);
      singlet->callback([&] {
        action = [&] {
          std::string format = resolve_format(format_flag, cfg, "text");
          if (csv_flag) format = "csv";
          return cmd_sample_singlet(theta_str, cfg, format);
        };
      });
    }

    // bell check
    CLI::App* bell = app.add_subcommand("bell", "inequality checks");
    bell->require_subcommand(1);
    std::string inequality;
    std::string model;
    std::string angles_str;
    std::string mode;
    bool fail_on_violation = false;
    {
      CLI::App* bc = bell->add_subcommand("check", "evaluate an inequality");
      bc->add_option("--inequality", inequality, "star or doublestar")
          ->required()
          ->check(CLI::IsMember({"star", "doublestar"}));
      bc->add_option("--model", model, "qm, tube4, or richer-tube")
          ->required()
          ->check(CLI::IsMember({"qm", "tube4", "richer-tube"}));
      bc->add_option("--angles", angles_str,
                     "comma-separated list, e.g. pi/4,pi/4,pi/4")
          ->required();
      bc->add_option("--mode", mode, "exact or mc")
          ->required()
          ->check(CLI::IsMember({"exact", "mc"}));
      bc->add_flag("--fail-on-violation", fail_on_violation,
                   "exit 4 when the verdict is violated");
      add_run(bc);
      add_format(bc);
      add_config(bc);
      bc->callback([&] {
        action = [&, format = resolve_format(format_flag, cfg, "json")] {
          return cmd_bell_check(inequality, model, angles_str, mode,
                                fail_on_violation, cfg, format);
        };
      });
    }

    // tube faces | corr
    CLI::App* tube = app.add_subcommand("tube", "striped-tube responses");
    tube->require_subcommand(1);
    double alpha = 0.0;
    std::string faces_str;
    {
      CLI::App* faces = tube->add_subcommand("faces", "k-values of a height");
      faces->add_option("--alpha", alpha, "ball height")->required();
      add_format(faces);
      add_config(faces);
      faces->callback([&] {
        action = [&, format = resolve_format(format_flag, cfg, "text")] {
          return cmd_tube_faces(alpha, cfg, format);
        };
      });
    }
    {
      CLI::App* corr = tube->add_subcommand("corr", "face-pair correlation");
      corr->add_option("--faces", faces_str, "face pair, e.g. 1,3")->required();
      corr->add_option("--mode", mode, "exact or mc")
          ->required()
          ->check(CLI::IsMember({"exact", "mc"}));
      add_run(corr);
      add_format(corr);
      add_config(corr);
      corr->callback([&] {
        action = [&, format = resolve_format(format_flag, cfg, "text")] {
          return cmd_tube_corr(faces_str, mode, cfg, format);
        };
      });
    }

    // oval measure
    CLI::App* oval = app.add_subcommand("oval", "single-use chaotic balls");
    oval->require_subcommand(1);
    double beta = 0.0;
    int face = 1;
    {
      CLI::App* measure = oval->add_subcommand("measure", "consume one ball");
      measure->add_option("--beta", beta, "ball height")->required();
      measure->add_option("--face", face, "face index 1..4")->required();
      add_format(measure);
      add_config(measure);
      measure->callback([&] {
        action = [&, format = resolve_format(format_flag, cfg, "text")] {
          return cmd_oval_measure(beta, face, cfg, format);
        };
      });
    }

    // sweep
    std::string curve = "both";
    std::string step_str;
    {
      CLI::App* sweep = app.add_subcommand(
          "sweep", "quantum vs triangle disagreement over [0, pi]");
      sweep->add_option("--curve", curve, "qm, triangle, or both")
          ->check(CLI::IsMember({"qm", "triangle", "both"}));
      sweep->add_option("--step", step_str, "grid step, e.g. pi/512")
          ->required();
      sweep->add_flag("--csv", csv_flag, "rows as CSV");
      add_format(sweep);
      add_config(sweep);
      sweep->callback([&] {
        action = [&] {
          std::string format = resolve_format(format_flag, cfg, "text");
          if (csv_flag) format = "csv";
          return cmd_sweep(curve, step_str, cfg, format);
        };
      });
    }

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e);
      return rc == 0 ? 0 : 2;
    }

    if (!action) return 2;
    return action();
  } catch (const CliFailure& failure) {
    std::cerr << "error: " << failure.message << "\n";
    return failure.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
