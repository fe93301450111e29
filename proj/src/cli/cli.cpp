#include "dqm/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <numbers>
#include <sstream>

namespace dqm::cli {

namespace {

struct CheckRow {
  std::string name;
  std::size_t terms = 0;
  bool ok() const { return terms == 0; }
};

void add_report(std::vector<CheckRow>& rows, const VerificationReport& r) {
  for (const auto& x : r.residuals) rows.push_back({x.name, x.value.terms().size()});
}

void add_matrix(std::vector<CheckRow>& rows, const std::string& name, const SpinOperatorMatrix& m) {
  std::size_t n = 0;
  for (const auto& row : m.m)
    for (const auto& e : row) n += e.terms().size();
  rows.push_back({name, n});
}

void add_expr(std::vector<CheckRow>& rows, const std::string& name, const AlgebraExpression& e) {
  rows.push_back({name, e.terms().size()});
}

RewriteRules faulty_rules(const std::string& fault) {
  RewriteRules r = RewriteRules::standard();
  if (fault == "gamma-alpha") r.gamma_past_alpha = Laurent::q_power(1);
  else if (fault == "gamma-alpha-star") r.gamma_past_alpha_star = Laurent::q_power(-1);
  else if (fault == "alpha-star-alpha") r.alpha_star_alpha = Laurent::q_power(2);
  else if (fault == "alpha-alpha-star") r.alpha_alpha_star = Laurent(1);
  return r;
}

std::vector<CheckRow> algebra_checks(const RewriteRules& rules) {
  std::vector<CheckRow> rows;
  for (const auto& c : {kSpin, kApparatus, kFrame}) add_report(rows, verify_defining_relations(c, rules));
  add_report(rows, verify_copies_commute(kSpin, kApparatus, rules));
  add_report(rows, verify_copies_commute(kSpin, kFrame, rules));
  add_report(rows, verify_copies_commute(kApparatus, kFrame, rules));
  add_report(rows, verify_isomorphism(rules));

  const Projectors p = build_projectors();
  const SpinOperatorMatrix id = SpinOperatorMatrix::identity();
  add_matrix(rows, "projector up idempotent", p.up * p.up - p.up);
  add_matrix(rows, "projector down idempotent", p.down * p.down - p.down);
  add_matrix(rows, "projectors orthogonal", p.up * p.down);
  add_matrix(rows, "projectors complete", p.up + p.down - id);
  add_matrix(rows, "projector up self-adjoint", p.up.adjoint() - p.up);
  add_matrix(rows, "projector down self-adjoint", p.down.adjoint() - p.down);
  add_matrix(rows, "sigma from projectors",
             Laurent::q_power(1) * p.up - Laurent::q_power(-1) * p.down - build_sigma_q());
  add_matrix(rows, "sigma by conjugation", sigma_by_conjugation() - build_sigma_q());
  add_expr(rows, "sigma q-traceless", q_trace(build_sigma_q()));
  for (const auto& c : {kSpin, kApparatus, kFrame}) {
    const SpinOperatorMatrix u = u_matrix(c);
    add_matrix(rows, "unitarity U^dagger U " + c, u.adjoint() * u - id);
    add_matrix(rows, "unitarity U U^dagger " + c, u * u.adjoint() - id);
  }
  for (Observer o : {Observer::Single, Observer::Two}) {
    const ProbabilityPair pp = probability_exprs(o);
    const std::string tag = o == Observer::Single ? " (one observer)" : " (two observers)";
    add_expr(rows, "complementarity" + tag, pp.up + pp.down - AlgebraExpression(1));
  }
  const ProbabilityPair one = probability_exprs(Observer::Single);
  const SpinVector psi_b = transform_by_frame(spin_state(kSpin).psi);
  add_expr(rows, "frame invariance",
           inner(psi_b, transform_by_frame(build_projectors().up) * psi_b) - one.up);
  return rows;
}

std::string render_checks(const std::vector<CheckRow>& rows, Format f) {
  std::ostringstream os;
  if (f == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : rows) {
      arr.push_back({{"check", r.name}, {"residual_terms", r.terms}, {"pass", r.ok()}});
      ok = ok && r.ok();
    }
    os << nlohmann::json{{"checks", arr}, {"pass", ok}}.dump(2) << '\n';
  } else {
    os << "check,residual_terms,status\n";
    for (const auto& r : rows) os << '"' << r.name << "\"," << r.terms << ',' << (r.ok() ? "PASS" : "FAIL") << '\n';
  }
  return os.str();
}

Role parse_role(const std::string& s) {
  if (s == "spin") return Role::Spin;
  if (s == "stern_gerlach") return Role::SternGerlach;
  return Role::RelativeOrientation;
}

std::string csv_histogram(const ProbabilityLaw& law) {
  std::ostringstream os;
  write_histogram_csv(os, law);
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deformed spin-measurement laboratory: algebra checks, spectra and the alignment protocol", "dqm"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig rc;
  std::string format = "json";
  auto* q_opt = app.add_option("--q", rc.q, "deformation parameter in (0, 1]")->check(CLI::Range(1e-6, 1.0));
  auto* trunc_opt = app.add_option("--truncation", rc.truncation, "levels kept per factor")->check(CLI::PositiveNumber);
  auto* buffer_opt = app.add_option("--buffer", rc.buffer, "guard levels above the truncation")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", rc.seed, "random seed for sampling");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", rc.out, "output file (default: standard output)");

  auto* verify = app.add_subcommand("verify-algebra", "exact symbolic checks of the algebra and observables");
  std::string fault = "none";
  verify->add_option("--fault", fault)
      ->check(CLI::IsMember({"none", "gamma-alpha", "gamma-alpha-star", "alpha-star-alpha", "alpha-alpha-star"}))
      ->group("");

  auto* eig = app.add_subcommand("eigenstates", "residuals of the separable probability eigenstates");
  int eig_n = 40;
  std::vector<double> eig_mu{1.0, 7.0, 17.0};
  double eig_omega = 0.3;
  eig->add_option("--n-max", eig_n, "largest basis level checked")->check(CLI::NonNegativeNumber);
  eig->add_option("--mu", eig_mu, "mu values of the paired semi-classical states");
  eig->add_option("--omega", eig_omega, "phase used for all factors");

  auto* semi = app.add_subcommand("semiclassical", "semi-classical state for a mu or a polar angle");
  double semi_mu = -1.0, semi_theta = -1.0, semi_omega = 0.0;
  std::string semi_role = "spin";
  auto* mu_opt = semi->add_option("--mu", semi_mu, "amplitude parameter")->check(CLI::NonNegativeNumber);
  semi->add_option("--theta", semi_theta, "polar angle in (0, pi]")->excludes(mu_opt);
  semi->add_option("--omega", semi_omega, "azimuthal phase");
  semi->add_option("--role", semi_role)->check(CLI::IsMember({"spin", "stern_gerlach", "relative_orientation"}));

  auto* spec = app.add_subcommand("spectrum", "spectral distribution f(p) of the probability operator");
  std::vector<double> sp_spin{0.0, 0.0}, sp_sg{std::numbers::pi / 2, 0.0}, sp_ro;
  std::string sp_outcome = "up";
  int sp_cap = 48;
  spec->add_option("--spin", sp_spin, "spin direction THETA OMEGA")->expected(2);
  spec->add_option("--sg", sp_sg, "apparatus direction THETA OMEGA")->expected(2);
  spec->add_option("--ro", sp_ro, "relative orientation THETA ALPHA GAMMA (two observers)")->expected(3);
  spec->add_option("--outcome", sp_outcome)->check(CLI::IsMember({"up", "down"}));
  spec->add_option("--levels", sp_cap, "levels per factor in the spectral truncation")->check(CLI::PositiveNumber);

  auto* proto = app.add_subcommand("protocol", "estimate the deformed rotation matrix from a JSON config");
  std::string proto_file;
  proto->add_option("config", proto_file, "protocol configuration (see docs/protocol_config.schema.json)")
      ->required()
      ->check(CLI::ExistingFile);

  auto* repro = app.add_subcommand("reproduce", "compare computed values with reference tables");
  std::string section;
  repro->add_option("section", section)->required()->check(CLI::IsMember({"b-examples", "rotation-matrices", "peaks"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }
  rc.format = format == "csv" ? Format::Csv : Format::Json;

  auto emit = [&](const std::string& content) {
    if (rc.out.empty()) out << content;
    else write_atomically(rc.out, content);
  };

  try {
    const DeformationParameter q(rc.q);
    if (*verify) {
      auto rows = algebra_checks(faulty_rules(fault));
      emit(render_checks(rows, rc.format));
      for (const auto& r : rows)
        if (!r.ok()) return kCheckFailure;
      return kPass;
    }
    if (*eig) {
      EigenReport r = verify_eigenstate_families(q, {0, eig_n}, eig_mu, rc.trunc(), eig_omega);
      std::ostringstream os;
      if (rc.format == Format::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : r.checks)
          arr.push_back({{"family", c.family}, {"label", c.label}, {"eigenvalue", c.eigenvalue}, {"residual", c.residual}});
        os << nlohmann::json{{"q", rc.q}, {"tolerance", r.tolerance}, {"checks", arr}, {"pass", r.ok()}}.dump(2) << '\n';
      } else {
        os << "family,label,eigenvalue,residual,status\n";
        os.precision(12);
        for (const auto& c : r.checks)
          os << c.family << ',' << c.label << ',' << c.eigenvalue << ',' << c.residual << ','
             << (c.residual < r.tolerance ? "PASS" : "FAIL") << '\n';
      }
      emit(os.str());
      return r.ok() ? kPass : kCheckFailure;
    }
    if (*semi) {
      if (semi_mu < 0 && semi_theta < 0) throw std::invalid_argument("give --mu or --theta");
      const Role role = parse_role(semi_role);
      double mu = semi_mu;
      if (semi_theta >= 0) {
        if (semi_theta <= 0.0 || semi_theta > std::numbers::pi) throw std::invalid_argument("--theta must lie in (0, pi]");
        mu = mu_of_theta(q, semi_theta);
      }
      GeometryState s = semiclassical_state(role, q, mu, semi_omega, 0.0, rc.trunc());
      const long peak = f_peak_level(q, mu);
      const Vector& a = s.backing().amplitudes();
      std::ostringstream os;
      if (rc.format == Format::Json) {
        std::vector<double> w;
        for (int n = 0; n < s.backing().config().n_max; ++n) w.push_back(std::norm(a(n)));
        nlohmann::json j{{"q", rc.q},
                         {"role", to_string(role)},
                         {"mu", mu},
                         {"peak_level", peak},
                         {"theta_at_peak", theta_of_n(q, peak)},
                         {"discarded_tail", s.discarded_tail()},
                         {"weights", w}};
        if (peak >= 1) {
          auto [lo, hi] = mu_interval_for_level(q, peak);
          j["mu_interval"] = {lo, hi};
        }
        os << j.dump(2) << '\n';
      } else {
        os << "n,weight\n";
        os.precision(17);
        for (int n = 0; n < s.backing().config().n_max; ++n) os << n << ',' << std::norm(a(n)) << '\n';
      }
      emit(os.str());
      return kPass;
    }
    if (*spec) {
      std::vector<GeometryState> f{direction_state(Role::Spin, q, sp_spin[0], sp_spin[1], rc.trunc()),
                                   direction_state(Role::SternGerlach, q, sp_sg[0], sp_sg[1], rc.trunc())};
      Observer obs = Observer::Single;
      if (!sp_ro.empty()) {
        f.push_back(rotation_state(q, sp_ro[0], sp_ro[1], sp_ro[2], rc.trunc()));
        obs = Observer::Two;
      }
      FullGeometry g(f);
      const Outcome o = sp_outcome == "up" ? Outcome::Up : Outcome::Down;
      SpectralOptions opt;
      opt.truncation_override = sp_cap;
      opt.per_factor_cap = std::max(opt.per_factor_cap, sp_cap);
      ProbabilityLaw law = spectral_distribution(g, o, obs, opt);
      ProbabilityLaw mom = probability_moments(g, o, obs);
      if (rc.format == Format::Json) {
        nlohmann::json j = histogram_json(law);
        j["moments"] = {{"p0", mom.p0}, {"variance", mom.variance}};
        j["levels"] = sp_cap;
        emit(j.dump(2) + "\n");
      } else {
        emit(csv_histogram(law));
      }
      return kPass;
    }
    if (*proto) {
      std::ifstream in(proto_file);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(proto_file + ": not valid JSON: " + e.what());
      }
      ProtocolConfig pc = protocol_config_from_json(j);
      if (q_opt->count()) pc.q = rc.q;
      if (seed_opt->count()) pc.seed = rc.seed;
      if (trunc_opt->count()) pc.truncation.n_max = rc.truncation;
      if (buffer_opt->count()) pc.truncation.buffer = rc.buffer;
      RotationEstimate est = estimate_rotation(pc);

      std::array<std::array<std::string, 3>, 3> refs{};
      const bool histograms = pc.mode == ProtocolMode::MonteCarlo && !rc.out.empty();
      if (histograms) {
        std::filesystem::path base(rc.out);
        for (int i = 0; i < 3; ++i)
          for (int k = 0; k < 3; ++k) {
            std::filesystem::path h = base;
            h.replace_filename(base.stem().string() + "_hist_" + kAxisLabels[i] + "_" + kAxisLabels[k] + ".csv");
            write_atomically(h, csv_histogram(*est.cells[i][k].histogram));
            refs[i][k] = h.filename().string();
          }
      }
      if (rc.format == Format::Json) {
        emit(to_json(est, histograms ? &refs : nullptr).dump(2) + "\n");
      } else {
        std::ostringstream os;
        write_csv(os, est);
        emit(os.str());
      }
      return kPass;
    }
    if (*repro) {
      std::vector<ReproEntry> rows;
      if (section == "peaks") rows = reproduce_peaks(rc);
      else if (section == "rotation-matrices") rows = reproduce_rotation_matrices(rc);
      else rows = reproduce_b_examples(rc);
      emit(render(rows, rc.format));
      for (const auto& r : rows)
        if (!r.pass()) return kCheckFailure;
      return kPass;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
  return kUsageError;
}

}  // namespace dqm::cli
