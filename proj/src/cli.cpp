#include "genuslab/cli.hpp"

#include <algorithm>
#include <sstream>

#include "genuslab/error.hpp"
#include "genuslab/io.hpp"

namespace genuslab {

namespace {

using json = nlohmann::ordered_json;

constexpr int kDefaultCutoff = 4;

struct Output {
  std::ostringstream text;
  json data;
  int exit_code = 0;
};

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const ManifoldData& need_manifold(const InputFile& in, const std::string& command) {
  if (!in.manifold) usage(command + " needs a [manifold] table in the input file");
  return *in.manifold;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string fit_text(const ModularFit& fit) {
  std::ostringstream os;
  os << (fit.member ? "member" : "not a member") << " of weight " << fit.weight;
  if (fit.member) {
    for (const auto& [ab, c] : fit.coordinates) {
      if (sgn(c) == 0) continue;
      os << ", E4^" << ab.first << " E6^" << ab.second << " -> " << to_string(c);
    }
  } else if (fit.witness) {
    os << ", first contradiction at index " << *fit.witness;
  }
  return os.str();
}

void section(Output& o, const std::string& title, const std::string& body) {
  o.text << title << '\n' << body << "\n\n";
}

void do_ahat(const JobSpec&, const InputFile& in, Output& o) {
  const ManifoldData& m = need_manifold(in, "ahat");
  Rational value = integrate(m, ahat_class(m, 1)).at(0);
  o.text << "ahat  " << to_string(value) << '\n';
  o.data = json{{"dim", m.dim}, {"ahat", to_string(value)}, {"integer", is_integer(value)}};
}

void do_localize(const JobSpec& job, const InputFile& in, Output& o) {
  if (in.components.empty()) throw Error(ErrorCode::NoFixedPoints, "no [[fixed_component]] blocks in the input file");
  VanishingReport r = vanishing_check(in.components, job.q_order);
  section(o, "index", series_table(r.index));
  o.text << "vanishes  " << yes_no(r.vanishes) << '\n';
  o.data = to_json(r.index);
  o.data["vanishes"] = r.vanishes;
  if (job.expect_vanish && !r.vanishes) o.exit_code = 1;
}

void do_witten(const JobSpec& job, const InputFile& in, Output& o) {
  const ManifoldData& m = need_manifold(in, "witten");
  if (job.check && *job.check != "integral") {
    // zagier and modular need the Eisenstein form; report the precondition as an input error.
    if (m.dim % 4 != 0) usage("--check " + *job.check + " needs dim divisible by 4");
    if (!m.p1_zero && m.dim > 0) throw Error(ErrorCode::RequiresP1Zero, "--check " + *job.check + " needs p1_zero = true");
  }
  WittenReport r = witten_report(m, job.q_order);
  section(o, "phi", series_table(r.phi));
  section(o, "phi_w", r.phi_w ? series_table(*r.phi_w) : "n/a (needs p1_zero and dim divisible by 4)");
  section(o, "ramond", series_table(r.ramond));
  o.text << "zagier       " << (r.zagier ? yes_no(*r.zagier) : "n/a") << '\n';
  o.text << "integral     " << yes_no(r.integral) << '\n';
  o.text << "modular_fit  " << (r.modular_fit ? fit_text(*r.modular_fit) : "n/a") << '\n';
  o.data = to_json(r);
  if (job.check) {
    bool ok = true;
    if (*job.check == "zagier") ok = r.zagier.value_or(false);
    if (*job.check == "integral") ok = r.integral;
    if (*job.check == "modular") ok = r.modular_fit && r.modular_fit->member;
    if (!ok) o.exit_code = 1;
  }
}

void do_ramond(const JobSpec& job, const InputFile& in, Output& o) {
  const ManifoldData& m = need_manifold(in, "ramond");
  PuiseuxSeries index = ramond_index(m, job.q_order);
  PuiseuxSeries phi = phi_capital(m, job.q_order);
  PuiseuxSeries restored = index * eta_power(m.dim, job.q_order);
  const bool identity = restored.offset() == phi.offset() && !first_difference(restored, phi);
  section(o, "ramond", series_table(index));
  o.text << "times eta^" << m.dim << " equals phi  " << yes_no(identity) << '\n';
  o.data = json{{"ramond", to_json(index)}, {"phi", to_json(phi)}, {"identity", identity}};
  if (!identity) o.exit_code = 1;
}

void do_fock_check(const JobSpec& job, const InputFile& in, Output& o) {
  ModeSpec spec;
  if (job.modes) {
    if (in.fock) usage("give the modes either in the input file or with --modes, not both");
    spec.modes = parse_modes(*job.modes);
    spec.clifford_rank = job.clifford_rank.value_or(0);
    spec.level_cutoff = job.level_cutoff.value_or(kDefaultCutoff);
    validate(spec);
  } else if (in.fock) {
    if (job.clifford_rank) usage("--clifford-rank applies to --modes; the input file sets its own rank");
    FockInput f = *in.fock;
    if (job.level_cutoff) f.cutoff = job.level_cutoff;
    spec = f.resolve(kDefaultCutoff);
  } else {
    usage("fock-check needs --modes or a [fock] table in the input file");
  }
  std::vector<CheckResult> checks = run_fock_suite(spec);
  const bool passed = std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::fail; });
  std::size_t w = 0;
  for (const auto& c : checks) w = std::max(w, c.name.size());
  for (const auto& c : checks) {
    const std::string_view status = to_string(c.status);
    o.text << c.name << std::string(w - c.name.size() + 2, ' ') << status << std::string(9 - status.size(), ' ')
           << c.detail << '\n';
  }
  o.text << (passed ? "all checks passed" : "some checks failed") << '\n';
  json modes = json::array();
  for (const auto& m : spec.modes) modes.push_back(json{{"weight", m.weight}, {"multiplicity", m.multiplicity}});
  o.data = json{{"modes", modes},
                {"clifford_rank", spec.clifford_rank},
                {"cutoff", spec.level_cutoff},
                {"checks", to_json(checks)},
                {"passed", passed}};
  if (!passed) o.exit_code = 1;
}

void do_modular_check(const JobSpec& job, const InputFile& in, Output& o) {
  const ManifoldData& m = need_manifold(in, "modular-check");
  ModularFit fit = modular_weight_check(m, job.q_order);
  o.text << "phi_w  " << fit_text(fit) << '\n';
  o.data = to_json(fit);
  if (!fit.member) o.exit_code = 1;
}

void check_job(const JobSpec& job) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), job.command) == names.end()) usage("unknown command '" + job.command + "'");
  if (job.q_order < 1) usage("--order must be at least 1");
  if (job.level_cutoff && *job.level_cutoff < 0) usage("--cutoff must be nonnegative");
  if (job.format != "text" && job.format != "json") usage("--format must be text or json");
  if (job.check && job.command != "witten") usage("--check applies to the witten command");
  if (job.check && *job.check != "zagier" && *job.check != "integral" && *job.check != "modular") {
    usage("--check must be zagier, integral or modular");
  }
  if (job.expect_vanish && job.command != "localize") usage("--expect-vanish applies to the localize command");
  if ((job.modes || job.clifford_rank) && job.command != "fock-check") {
    usage("--modes and --clifford-rank apply to the fock-check command");
  }
  if (!job.input && job.command != "fock-check") usage(job.command + " needs an input file");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"ahat", "localize", "witten", "ramond", "fock-check", "modular-check"};
  return names;
}

RunResult run(const JobSpec& job) {
  RunResult result;
  Output o;
  try {
    check_job(job);
    InputFile in = job.input ? parse_input(*job.input) : InputFile{};
    if (job.command == "ahat") do_ahat(job, in, o);
    if (job.command == "localize") do_localize(job, in, o);
    if (job.command == "witten") do_witten(job, in, o);
    if (job.command == "ramond") do_ramond(job, in, o);
    if (job.command == "fock-check") do_fock_check(job, in, o);
    if (job.command == "modular-check") do_modular_check(job, in, o);
  } catch (const Error& e) {
    result.exit_code = 2;
    result.err = std::string("genuslab: ") + e.what() + '\n';
    return result;
  }
  result.exit_code = o.exit_code;
  if (job.format == "json") {
    result.out = o.data.dump() + '\n';
  } else {
    result.out = o.text.str();
    while (result.out.size() >= 2 && result.out.ends_with("\n\n")) result.out.pop_back();
  }
  return result;
}

}  // namespace genuslab
