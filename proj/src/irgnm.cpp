#include "emscat/irgnm.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace emscat {

void IrgnmConfig::validate() const {
  if (alpha0 < 0) throw std::invalid_argument("irgnm: alpha0 must be >= 0");
  if (!(decay > 0 && decay < 1)) throw std::invalid_argument("irgnm: decay must be in (0,1)");
  if (!(tau > 1)) throw std::invalid_argument("irgnm: tau must exceed 1");
  if (!(s > 2)) throw std::invalid_argument("irgnm: Sobolev index must exceed 2");
  if (max_newton < 1 || cg_max < 1 || n_fwd < 1 || n_inv < 0 || n_far < 1)
    throw std::invalid_argument("irgnm: invalid iteration/discretization parameters");
  if (n_inv > n_fwd) throw std::invalid_argument("irgnm: n_inv must not exceed n_fwd");
}

namespace {

Real data_norm(const MeasurementSet& m) {
  Real acc = 0;
  for (const auto& d : m.data) {
    Real v = farfield_norm(d);
    acc += v * v;
  }
  return std::sqrt(acc);
}

// Deterministic standard normals (Box-Muller over mt19937_64), independent of
// the standard library's distribution implementations.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}
  Real next() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    Real u1 = uniform(), u2 = uniform();
    Real r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2 * pi * u2);
    have_ = true;
    return r * std::cos(2 * pi * u2);
  }

 private:
  Real uniform() {
    // in (0,1]
    return (static_cast<Real>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }
  std::mt19937_64 eng_;
  Real spare_ = 0;
  bool have_ = false;
};

}  // namespace

MeasurementSet synthesize_data(const StarShape& truth, const DielectricConfig& cfg,
                               const std::vector<PlaneWave>& incidents, Real noise_level,
                               std::uint64_t seed, int n_synth, int n_far, ExecPolicy policy) {
  if (incidents.empty()) throw std::invalid_argument("synthesize_data: no incident waves");
  MeasurementSet out;
  out.incidents = incidents;
  out.noise_level = noise_level;
  out.seed = seed;
  out.n_far = n_far;
  out.n_synth = n_synth;
  ForwardOptions opts;
  opts.n = n_synth;
  opts.n_far = n_far;
  opts.policy = policy;
  ForwardContext ctx(star_to_param(truth), cfg, opts);
  Real clean_sq = 0;
  for (const auto& inc : incidents) {
    auto sol = ctx.solve_direct(inc);
    Real nn = farfield_norm(sol.far);
    clean_sq += nn * nn;
    out.data.push_back(std::move(sol.far));
  }
  if (noise_level <= 0) {
    out.delta = 0;
    return out;
  }
  QuadratureGrid far = build_gauss_grid(n_far);
  GaussianStream gs(seed);
  std::vector<FarFieldSamples> err(out.data.size());
  Real err_sq = 0;
  for (std::size_t k = 0; k < out.data.size(); ++k) {
    err[k].n_far = n_far;
    err[k].values.resize(out.data[k].values.size());
    for (int rho = 0; rho < far.n_phi(); ++rho)
      for (int tau = 0; tau < far.n_theta(); ++tau) {
        std::size_t i = far.node_index(rho, tau);
        CVec3 v(Complex(gs.next(), gs.next()), Complex(gs.next(), gs.next()),
                Complex(gs.next(), gs.next()));
        Vec3 xh = far.node(rho, tau);
        Complex nr = dot(v, xh);
        err[k].values[i] = v - nr * CVec3(xh);  // keep the error tangential
      }
    Real nn = farfield_norm(err[k]);
    err_sq += nn * nn;
  }
  Real delta = noise_level * std::sqrt(clean_sq);
  Real scale = delta / std::sqrt(err_sq);
  for (std::size_t k = 0; k < out.data.size(); ++k)
    for (std::size_t i = 0; i < out.data[k].values.size(); ++i)
      out.data[k].values[i] += Complex(scale) * err[k].values[i];
  out.delta = delta;
  return out;
}

namespace {

ScalarCoeffVector pad_to(const ScalarCoeffVector& c, int n) {
  ScalarCoeffVector out(n);
  for (int l = 0; l <= std::min(c.n, n); ++l)
    for (int j = -l; j <= l; ++j) out.at(l, j) = c.at(l, j);
  return out;
}

ScalarCoeffVector axpy(const ScalarCoeffVector& x, Real a, const ScalarCoeffVector& y) {
  ScalarCoeffVector out = x;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += a * y.coeffs[i];
  return out;
}

// alpha x + sum_k F'_k* F'_k x
ScalarCoeffVector normal_operator(const NewtonLinearization& lin, const IrgnmConfig& cfg,
                                  Real alpha, const ScalarCoeffVector& x) {
  std::vector<FarFieldSamples> fpx(lin.u_waves.size());
  for (std::size_t k = 0; k < lin.u_waves.size(); ++k)
    fpx[k] = apply_Fprime(*lin.ctx, lin.u_waves[k], x);
  ScalarCoeffVector out = apply_Fprime_adjoint(*lin.ctx, lin.u_waves, fpx, cfg.s, cfg.n_inv);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += alpha * x.coeffs[i];
  return out;
}

}  // namespace

ScalarCoeffVector cg_normal_step(const NewtonLinearization& lin, const ScalarCoeffVector& qN,
                                 const ScalarCoeffVector& q0, Real alpha,
                                 const IrgnmConfig& cfg) {
  auto ip = [&cfg](const ScalarCoeffVector& a, const ScalarCoeffVector& b) {
    return std::real(sobolev_inner(a, b, cfg.s));
  };
  ScalarCoeffVector b =
      apply_Fprime_adjoint(*lin.ctx, lin.u_waves, lin.residuals, cfg.s, cfg.n_inv);
  b = axpy(b, alpha, axpy(pad_to(q0, cfg.n_inv), -1.0, pad_to(qN, cfg.n_inv)));
  make_real_symmetric(b);

  ScalarCoeffVector x(cfg.n_inv);
  ScalarCoeffVector r = b, p = b;
  Real rr = ip(r, r);
  Real rr0 = rr;
  if (rr0 == 0) return x;
  for (int it = 0; it < cfg.cg_max; ++it) {
    ScalarCoeffVector q = normal_operator(lin, cfg, alpha, p);
    make_real_symmetric(q);
    if (cfg.debug_probes) {
      // self-adjointness probe: <Tp, r> vs <p, Tr>
      ScalarCoeffVector tr = normal_operator(lin, cfg, alpha, r);
      Real lhs = ip(q, r), rhs = ip(p, tr);
      Real scale = std::abs(lhs) + std::abs(rhs) + 1e-30;
      if (std::abs(lhs - rhs) / scale > 1e-4)
        throw std::runtime_error("cg_normal_step: normal operator failed the symmetry probe");
    }
    Real pq = ip(p, q);
    if (!(pq > 0))
      throw std::runtime_error(
          "cg_normal_step: non-positive curvature (adjoint/derivative inconsistency), <p,Tp>=" +
          std::to_string(pq));
    Real step = rr / pq;
    x = axpy(x, step, p);
    r = axpy(r, -step, q);
    Real rr_new = ip(r, r);
    if (std::sqrt(rr_new) <= cfg.cg_tol * std::sqrt(rr0)) break;
    p = axpy(r, rr_new / rr, p);
    rr = rr_new;
  }
  make_real_symmetric(x);
  return x;
}

namespace {

Real min_radius(const StarShape& s) {
  QuadratureGrid g = build_gauss_grid(std::max(2 * s.degree() + 2, 8));
  std::vector<Complex> vals;
  HarmonicTables t = build_harmonic_tables(g.theta_nodes, s.degree());
  vals = synthesize_scalar(g, t, s.r_coeffs);
  Real m = std::numeric_limits<Real>::max();
  for (const Complex& v : vals) m = std::min(m, std::real(v));
  return m;
}

}  // namespace

IrgnmResult run_irgnm(const MeasurementSet& meas, const IrgnmConfig& cfg,
                      const DielectricConfig& diel, const StarShape& q0,
                      const IrgnmObserver& observer) {
  cfg.validate();
  if (meas.data.size() != meas.incidents.size() || meas.data.empty())
    throw std::invalid_argument("run_irgnm: inconsistent measurement set");
  IrgnmResult res;
  Real dnorm = data_norm(meas);
  Real delta_eff = std::max(meas.delta, cfg.delta_floor_rel * dnorm);
  Real alpha = cfg.alpha0 > 0 ? cfg.alpha0 : 0.1 * dnorm * dnorm;

  ScalarCoeffVector q = pad_to(q0.r_coeffs, cfg.n_inv);
  make_real_symmetric(q);
  ScalarCoeffVector qinit = q;
  Real prev_residual = std::numeric_limits<Real>::max();
  int consecutive_increase = 0;

  for (int N = 0; N <= cfg.max_newton; ++N) {
    StarShape current{q};
    std::unique_ptr<ForwardContext> ctx;
    NewtonLinearization lin;
    try {
      ForwardOptions opts;
      opts.n = cfg.n_fwd;
      opts.n_far = cfg.n_far;
      opts.policy = cfg.policy;
      ctx = std::make_unique<ForwardContext>(star_to_param(current), diel, opts);
      lin.ctx = ctx.get();
      lin.meas = &meas;
      Real acc = 0;
      for (std::size_t k = 0; k < meas.incidents.size(); ++k) {
        auto sol = ctx->solve_direct(meas.incidents[k]);
        lin.u_waves.push_back(std::move(sol.u));
        FarFieldSamples r = meas.data[k];
        for (std::size_t i = 0; i < r.values.size(); ++i)
          r.values[i] = r.values[i] - sol.far.values[i];
        Real nn = farfield_norm(r);
        acc += nn * nn;
        lin.residuals.push_back(std::move(r));
      }
      lin.residual_norm = std::sqrt(acc);
    } catch (const std::exception&) {
      res.stop_reason = "forward_failure";
      res.final_shape = StarShape{q};
      return res;
    }

    IrgnmIterate it;
    it.N = N;
    it.alpha = alpha;
    it.residual = lin.residual_norm;
    it.r_coeffs = q;
    res.history.push_back(it);
    if (observer) observer(it);

    if (lin.residual_norm <= cfg.tau * delta_eff) {
      res.stop_reason = "discrepancy";
      break;
    }
    if (lin.residual_norm > prev_residual) {
      if (++consecutive_increase >= 2) {
        res.stop_reason = "stagnation";
        break;
      }
      ++res.non_monotone_steps;
    } else {
      consecutive_increase = 0;
    }
    prev_residual = lin.residual_norm;
    if (N == cfg.max_newton) {
      res.stop_reason = "max_newton";
      break;
    }

    ScalarCoeffVector dq = cg_normal_step(lin, q, qinit, alpha, cfg);
    // Positivity of the radial iterate, with step halving as the safeguard.
    ScalarCoeffVector qn = axpy(q, 1.0, dq);
    int halvings = 0;
    while (min_radius(StarShape{qn}) <= 0 && halvings < 60) {
      for (auto& v : dq.coeffs) v *= 0.5;
      qn = axpy(q, 1.0, dq);
      ++halvings;
    }
    if (halvings >= 60) {
      res.stop_reason = "stagnation";
      break;
    }
    q = qn;
    make_real_symmetric(q);
    alpha *= cfg.decay;
  }
  if (res.stop_reason.empty()) res.stop_reason = "max_newton";
  res.final_shape = StarShape{q};
  return res;
}

namespace {

nlohmann::json farfield_to_json(const FarFieldSamples& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : f.values)
    arr.push_back({std::real(v.x), std::imag(v.x), std::real(v.y), std::imag(v.y),
                   std::real(v.z), std::imag(v.z)});
  return arr;
}

FarFieldSamples farfield_from_json(const nlohmann::json& arr, int n_far) {
  FarFieldSamples f;
  f.n_far = n_far;
  for (const auto& e : arr)
    f.values.push_back(CVec3(Complex(e.at(0).get<double>(), e.at(1).get<double>()),
                             Complex(e.at(2).get<double>(), e.at(3).get<double>()),
                             Complex(e.at(4).get<double>(), e.at(5).get<double>())));
  return f;
}

}  // namespace

std::string measurements_to_json(const MeasurementSet& m) {
  nlohmann::json j;
  j["n_far"] = m.n_far;
  j["n_synth"] = m.n_synth;
  j["delta"] = m.delta;
  j["noise_level"] = m.noise_level;
  j["seed"] = m.seed;
  auto incs = nlohmann::json::array();
  for (const auto& w : m.incidents)
    incs.push_back({{"d", {w.d.x, w.d.y, w.d.z}}, {"p", {w.p.x, w.p.y, w.p.z}}});
  j["incidents"] = incs;
  auto data = nlohmann::json::array();
  for (const auto& f : m.data) data.push_back(farfield_to_json(f));
  j["data"] = data;
  return j.dump();
}

MeasurementSet measurements_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MeasurementSet m;
  m.n_far = j.at("n_far").get<int>();
  m.n_synth = j.value("n_synth", 0);
  m.delta = j.at("delta").get<double>();
  m.noise_level = j.value("noise_level", 0.0);
  m.seed = j.value("seed", std::uint64_t{0});
  for (const auto& e : j.at("incidents")) {
    PlaneWave w;
    w.d = {e.at("d").at(0).get<double>(), e.at("d").at(1).get<double>(),
           e.at("d").at(2).get<double>()};
    w.p = {e.at("p").at(0).get<double>(), e.at("p").at(1).get<double>(),
           e.at("p").at(2).get<double>()};
    m.incidents.push_back(w);
  }
  for (const auto& e : j.at("data")) m.data.push_back(farfield_from_json(e, m.n_far));
  std::size_t expect = build_gauss_grid(m.n_far).size();
  for (const auto& f : m.data)
    if (f.values.size() != expect)
      throw std::invalid_argument("measurements_from_json: sample count mismatch");
  return m;
}

}  // namespace emscat
