#include "dqm/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace dqm {

namespace {

struct ObserverExprs {
  AlgebraExpression p[2];   // up, down
  AlgebraExpression p2[2];  // squares
  AlgebraExpression sigma;
  AlgebraExpression sigma_dag_sigma;
  SpinOperatorMatrix sigma_matrix;
  std::array<std::array<AlgebraExpression, 2>, 2> entry_dag_entry;
};

const ObserverExprs& exprs(Observer o) {
  static std::once_flag once[2];
  static ObserverExprs cache[2];
  const int k = o == Observer::Single ? 0 : 1;
  std::call_once(once[k], [&] {
    ObserverExprs& e = cache[k];
    ProbabilityPair pp = probability_exprs(o);
    e.p[0] = pp.up;
    e.p[1] = pp.down;
    e.p2[0] = pp.up * pp.up;
    e.p2[1] = pp.down * pp.down;
    e.sigma = expectation_sigma_expr(o);
    e.sigma_dag_sigma = e.sigma.adjoint() * e.sigma;
    e.sigma_matrix = build_sigma_q(kApparatus);
    if (o == Observer::Two) e.sigma_matrix = transform_by_frame(e.sigma_matrix);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        e.entry_dag_entry[i][j] = e.sigma_matrix.m[i][j].adjoint() * e.sigma_matrix.m[i][j];
  });
  return cache[k];
}

void require_copies(const ProductState& phi, Observer o) {
  std::vector<std::string> need{kApparatus, kSpin};
  if (o == Observer::Two) need = {kApparatus, kFrame, kSpin};
  std::vector<std::string> have;
  for (const auto& [c, s] : phi) have.push_back(c);
  if (have != need)
    throw ArityError(std::string("geometry factors do not match the ") +
                     (o == Observer::Single ? "single" : "two") + "-observer arity");
}

int index_of(Outcome w) { return w == Outcome::Up ? 0 : 1; }

}  // namespace

GeometryMoments pati_moments(const ProductState& phi, const AlgebraExpression& o) {
  ExpectationEvaluator ev(phi);
  cplx mean = ev(o);
  cplx dd = ev(o.adjoint() * o);
  return {mean, dd.real() - std::norm(mean)};
}

ProbabilityLaw probability_moments(const ProductState& phi, Outcome which, Observer observer) {
  require_copies(phi, observer);
  const ObserverExprs& e = exprs(observer);
  ExpectationEvaluator ev(phi);
  cplx p = ev(e.p[index_of(which)]);
  cplx p2 = ev(e.p2[index_of(which)]);
  if (std::abs(p.imag()) > 1e-10) throw std::runtime_error("probability mean is not real");
  ProbabilityLaw law;
  law.p0 = p.real();
  law.variance = p2.real() - p.real() * p.real();
  law.provenance = Provenance::Moments;
  return law;
}

ProbabilityLaw probability_moments(const FullGeometry& geom, Outcome which, Observer observer) {
  return probability_moments(geom.product(), which, observer);
}

GeometryMoments sigma_moments(const FullGeometry& geom, Observer observer) {
  require_copies(geom.product(), observer);
  const ObserverExprs& e = exprs(observer);
  ExpectationEvaluator ev(geom.product());
  cplx mean = ev(e.sigma);
  cplx dd = ev(e.sigma_dag_sigma);
  return {mean, dd.real() - std::norm(mean)};
}

MatrixMoments sigma_matrix_moments(const FullGeometry& geom, Observer observer) {
  const auto& phi = geom.product();
  if (!phi.count(kApparatus) || (observer == Observer::Two && !phi.count(kFrame)))
    throw ArityError("sigma matrix moments need the apparatus (and frame) factors");
  const ObserverExprs& e = exprs(observer);
  ExpectationEvaluator ev(phi);
  MatrixMoments out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.mean[i][j] = ev(e.sigma_matrix.m[i][j]);
      out.pati_variance[i][j] = ev(e.entry_dag_entry[i][j]).real() - std::norm(out.mean[i][j]);
    }
  }
  return out;
}

SpinMoments spin_state_moments(const FullGeometry& geom) {
  if (!geom.has(Role::Spin)) throw ArityError("spin moments need a spin factor");
  auto g = generators_of(kSpin);
  SpinMoments out;
  const AlgebraExpression* comp[2] = {&g.alpha, &g.gamma};
  ExpectationEvaluator ev(geom.product());
  for (int i = 0; i < 2; ++i) {
    out.mean[i] = ev(*comp[i]);
    out.pati_variance[i] = ev(comp[i]->adjoint() * *comp[i]).real() - std::norm(out.mean[i]);
  }
  return out;
}

ProductState spectral_product_state(const FullGeometry& geom, const SpectralOptions& opt) {
  const int levels = opt.truncation_override.value_or(opt.per_factor_cap);
  if (levels < 1) throw std::invalid_argument("spectral truncation must be >= 1");
  if (levels > opt.per_factor_cap)
    throw SpectralCapExceeded("spectral truncation " + std::to_string(levels) +
                              " exceeds the per-factor cap " + std::to_string(opt.per_factor_cap));
  ProductState out;
  for (const auto& [copy, s] : geom.product()) {
    SectorConfig cfg = s.config();
    if (cfg.kind == SectorKind::Rho) {
      out.emplace(copy, s);
      continue;
    }
    const int keep = std::min(levels, cfg.n_max);
    Vector amp = Vector::Zero(keep + cfg.buffer);
    amp.head(keep) = s.amplitudes().head(keep);
    if (amp.norm() == 0.0) throw std::runtime_error("state has no weight inside the spectral truncation");
    amp.normalize();
    cfg.n_max = keep;
    out.emplace(copy, SectorState(cfg, amp));
  }
  return out;
}

namespace {

// Action of one normal-ordered word on basis level n: (target, value).
struct Shift {
  int target = -1;
  cplx value;
};

std::vector<Shift> word_table(const Word& w, const SectorConfig& cfg, int levels) {
  std::vector<Shift> out(levels);
  const cplx I(0.0, 1.0);
  const double q = cfg.q;
  for (int n = 0; n < levels; ++n) {
    Shift s;
    if (cfg.kind == SectorKind::Rho) {
      if (w.gamma + w.gamma_star == 0) s = {0, std::exp(I * (double(w.alpha) * cfg.chi))};
      out[n] = s;
      continue;
    }
    cplx v = std::exp(I * (double(w.gamma - w.gamma_star) * cfg.phi)) *
             std::pow(q, double(n) * double(w.gamma + w.gamma_star));
    int t = n;
    for (int j = 0; j < w.alpha; ++j) {
      v *= std::exp(I * cfg.chi) * std::sqrt(1.0 - std::pow(q, 2.0 * t));
      --t;
    }
    for (int j = 0; j < -w.alpha; ++j) {
      v *= std::exp(-I * cfg.chi) * std::sqrt(1.0 - std::pow(q, 2.0 * t + 2.0));
      ++t;
    }
    if (t >= 0 && t < levels && v != cplx(0.0)) s = {t, v};
    out[n] = s;
  }
  return out;
}

struct CompressedOperator {
  std::vector<std::string> copies;
  std::vector<int> levels;
  std::vector<std::size_t> stride;
  std::size_t dim = 1;
  struct Term {
    cplx coef;
    std::vector<const std::vector<Shift>*> tables;
  };
  std::vector<Term> terms;
  std::map<std::pair<std::string, Word>, std::vector<Shift>> tables;

  CompressedOperator(const AlgebraExpression& e, const ProductState& phi) {
    for (const auto& [copy, s] : phi) {
      copies.push_back(copy);
      levels.push_back(s.config().kind == SectorKind::Rho ? 1 : s.config().n_max);
    }
    stride.assign(copies.size(), 1);
    for (std::size_t i = copies.size(); i-- > 0;) {
      stride[i] = dim;
      dim *= levels[i];
    }
    const double q = phi.begin()->second.config().q;
    for (const auto& [m, c] : e.terms()) {
      Term t{c.evaluate(q), {}};
      for (std::size_t i = 0; i < copies.size(); ++i) {
        Word w = m.word(copies[i]);
        auto key = std::make_pair(copies[i], w);
        auto it = tables.find(key);
        if (it == tables.end())
          it = tables.emplace(key, word_table(w, phi.at(copies[i]).config(), levels[i])).first;
        t.tables.push_back(&it->second);
      }
      terms.push_back(std::move(t));
    }
  }

  template <class F>
  void column(std::size_t idx, F&& emit) const {
    for (const auto& t : terms) {
      cplx v = t.coef;
      std::size_t target = 0;
      bool alive = true;
      for (std::size_t i = 0; i < copies.size() && alive; ++i) {
        const int n = static_cast<int>((idx / stride[i]) % levels[i]);
        const Shift& s = (*t.tables[i])[n];
        if (s.target < 0) alive = false;
        v *= s.value;
        target += static_cast<std::size_t>(s.target) * stride[i];
      }
      if (alive && v != cplx(0.0)) emit(target, v);
    }
  }
};

void gauss_quadrature(const Eigen::SparseMatrix<cplx>& h, const Vector& phi, int nodes,
                      std::vector<std::pair<double, double>>& out) {
  const double w0 = phi.squaredNorm();
  const Eigen::Index n = phi.size();
  const int k_max = static_cast<int>(std::min<Eigen::Index>(nodes, n));
  Eigen::MatrixXcd basis(n, k_max);
  std::vector<double> a, b;
  Vector v = phi / std::sqrt(w0);
  for (int k = 0; k < k_max; ++k) {
    basis.col(k) = v;
    Vector w = h * v;
    double ak = v.dot(w).real();
    a.push_back(ak);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
    double bk = w.norm();
    if (k + 1 == k_max || bk < 1e-12) break;
    b.push_back(bk);
    v = w / bk;
  }
  const int m = static_cast<int>(a.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) t(i, i) = a[i];
  for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = b[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  for (int r = 0; r < m; ++r) {
    double e1 = es.eigenvectors()(0, r);
    out.emplace_back(es.eigenvalues()(r), w0 * e1 * e1);
  }
}

}  // namespace

ProbabilityLaw spectral_distribution(const FullGeometry& geom, Outcome which, Observer observer,
                                     const SpectralOptions& opt) {
  require_copies(geom.product(), observer);
  const ProductState phi = spectral_product_state(geom, opt);
  const ObserverExprs& e = exprs(observer);
  CompressedOperator op(e.p[index_of(which)], phi);
  if (op.dim > (std::size_t(1) << 22))
    throw SpectralCapExceeded("spectral product dimension " + std::to_string(op.dim) + " is too large");
  // Compressed product state: only protected levels of each factor.
  Vector psi = Vector::Ones(1);
  for (std::size_t i = 0; i < op.copies.size(); ++i) {
    const Vector& a = phi.at(op.copies[i]).amplitudes();
    Vector head = a.head(op.levels[i]);
    Vector next(psi.size() * head.size());
    for (Eigen::Index r = 0; r < psi.size(); ++r) next.segment(r * head.size(), head.size()) = psi(r) * head;
    psi.swap(next);
  }

  std::vector<int> component(op.dim, -1);
  std::vector<std::size_t> local(op.dim, 0);
  std::vector<std::pair<double, double>> spikes;
  bool approximate = false;
  int next_id = 0;
  std::vector<std::size_t> members, queue;
  for (std::size_t start = 0; start < op.dim; ++start) {
    if (component[start] >= 0 || psi(start) == cplx(0.0)) continue;
    members.clear();
    queue.assign(1, start);
    component[start] = next_id;
    while (!queue.empty()) {
      std::size_t g = queue.back();
      queue.pop_back();
      local[g] = members.size();
      members.push_back(g);
      op.column(g, [&](std::size_t t, cplx) {
        if (component[t] < 0) {
          component[t] = next_id;
          queue.push_back(t);
        }
      });
    }
    ++next_id;
    const Eigen::Index b = static_cast<Eigen::Index>(members.size());
    Vector phib(b);
    for (Eigen::Index i = 0; i < b; ++i) phib(i) = psi(members[i]);
    if (phib.squaredNorm() < 1e-300) continue;
    std::vector<Eigen::Triplet<cplx>> trip;
    for (Eigen::Index j = 0; j < b; ++j)
      op.column(members[j], [&](std::size_t t, cplx v) { trip.emplace_back(local[t], j, v); });
    if (b <= opt.dense_block_cap) {
      Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(b, b);
      for (const auto& t : trip) h(t.row(), t.col()) += t.value();
      h = 0.5 * (h + h.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      Vector overlaps = es.eigenvectors().adjoint() * phib;
      for (Eigen::Index r = 0; r < b; ++r) spikes.emplace_back(es.eigenvalues()(r), std::norm(overlaps(r)));
    } else {
      Eigen::SparseMatrix<cplx> h(b, b);
      h.setFromTriplets(trip.begin(), trip.end());
      gauss_quadrature(h, phib, opt.krylov_nodes, spikes);
      approximate = approximate || opt.krylov_nodes < b;
    }
  }

  std::sort(spikes.begin(), spikes.end());
  ProbabilityLaw law;
  law.provenance = Provenance::Spectral;
  law.approximate = approximate;
  for (std::size_t i = 0; i < spikes.size();) {
    double start = spikes[i].first, w = 0.0, pw = 0.0;
    std::size_t j = i;
    for (; j < spikes.size() && spikes[j].first - start <= opt.cluster_tolerance; ++j) {
      w += spikes[j].second;
      pw += spikes[j].first * spikes[j].second;
    }
    if (w > 0.0) law.histogram.emplace_back(pw / w, w);
    i = j;
  }
  double total = 0.0, m1 = 0.0, m2 = 0.0;
  for (const auto& [p, w] : law.histogram) {
    total += w;
    m1 += w * p;
    m2 += w * p * p;
  }
  law.p0 = m1 / total;
  law.variance = m2 / total - law.p0 * law.p0;
  return law;
}

void write_histogram_csv(std::ostream& os, const ProbabilityLaw& law) {
  os << "p,weight\n";
  os.precision(17);
  for (const auto& [p, w] : law.histogram) os << p << ',' << w << '\n';
}

nlohmann::json histogram_json(const ProbabilityLaw& law) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& [p, w] : law.histogram) bins.push_back({{"p", p}, {"weight", w}});
  return {{"p0", law.p0},
          {"variance", law.variance},
          {"approximate", law.approximate},
          {"bins", bins}};
}

bool EigenReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [&](const EigenCheck& c) { return c.residual < tolerance; });
}

double EigenReport::worst() const {
  double w = 0.0;
  for (const auto& c : checks) w = std::max(w, c.residual);
  return w;
}

EigenReport verify_eigenstate_families(DeformationParameter q, std::pair<int, int> n_range,
                                       const std::vector<double>& mu_samples, Truncation t,
                                       double omega) {
  const AlgebraExpression& p = exprs(Observer::Single).p[0];
  EigenReport report;
  auto check = [&](const std::string& family, const std::string& label, const GeometryState& s,
                   const GeometryState& a, double eigenvalue) {
    FullGeometry g({s, a});
    Vector phi = product_vector(g.product());
    Vector r = apply_to_product(p, g.product()) - eigenvalue * phi;
    report.checks.push_back({family, label, eigenvalue, r.norm()});
  };
  const double qq = q.value();
  check("rho x rho", "chi", rho_state(Role::Spin, q, omega, t), rho_state(Role::SternGerlach, q, omega, t), 1.0);
  for (int n = n_range.first; n <= n_range.second; ++n) {
    check("rho x pi", "n_a=" + std::to_string(n), rho_state(Role::Spin, q, omega, t),
          pi_basis_state(Role::SternGerlach, q, n, omega, 0.0, t), 1.0 - std::pow(qq, 2.0 * n + 2.0));
    check("pi x rho", "n_s=" + std::to_string(n), pi_basis_state(Role::Spin, q, n, omega, 0.0, t),
          rho_state(Role::SternGerlach, q, omega, t), 1.0 - std::pow(qq, 2.0 * n));
  }
  for (double mu : mu_samples) {
    std::string label = "mu=" + std::to_string(mu);
    check("pochhammer pair", label, semiclassical_state(Role::Spin, q, mu, omega, 0.0, t),
          semiclassical_state(Role::SternGerlach, q, mu, omega, 0.0, t), 1.0);
  }
  return report;
}

VarianceEquivalence variance_equivalence_check(const FullGeometry& geom, Observer observer) {
  GeometryMoments s = sigma_moments(geom, observer);
  ProbabilityLaw law = probability_moments(geom, Outcome::Up, observer);
  const double k = geom.q() + 1.0 / geom.q();
  return {s.pati_variance, k * k * law.variance};
}

}  // namespace dqm
