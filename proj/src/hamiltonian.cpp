#include "cstirap/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cstirap {

Eigen::VectorXd rabi_frequencies(const ChainSystem& system, double t) {
  Eigen::VectorXd rabi(static_cast<Eigen::Index>(system.couplings.size()));
  for (std::size_t i = 0; i < system.couplings.size(); ++i)
    rabi[static_cast<Eigen::Index>(i)] = envelope_eval(system.couplings[i].drive, t);
  return rabi;
}

Eigen::VectorXd detunings(const ChainSystem& system) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(system.size()));
  for (std::size_t i = 0; i < system.size(); ++i) d[static_cast<Eigen::Index>(i)] = system.levels[i].detuning;
  return d;
}

Eigen::VectorXd loss_rates(const ChainSystem& system) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(system.size()));
  for (std::size_t i = 0; i < system.size(); ++i) g[static_cast<Eigen::Index>(i)] = system.levels[i].loss_rate;
  return g;
}

Eigen::MatrixXd chain_hamiltonian(const Eigen::VectorXd& rabi, const Eigen::VectorXd& detuning) {
  const Eigen::Index n = detuning.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h.diagonal() = detuning;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = -rabi[i];
    h(i + 1, i) = -rabi[i];
  }
  return h;
}

Eigen::MatrixXd build_hamiltonian(const ChainSystem& system, double t) {
  return chain_hamiltonian(rabi_frequencies(system, t), detunings(system));
}

namespace {

std::vector<bool> support_of(const Eigen::VectorXd& v) {
  std::vector<bool> s(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) s[static_cast<std::size_t>(i)] = v[i] != 0.0;
  return s;
}

// Largest-magnitude component made positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < 0.0) v = -v;
}

}  // namespace

DarkState dark_state_analytic5(double omega1, double omega2, double omega3, double omega4) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(5);
  v[0] = omega2 * omega4;
  v[2] = -omega4 * omega1;
  v[4] = omega1 * omega3;
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw DegenerateDriveError("five-level dark state undefined: all numerator products vanish");
  v /= norm;
  return {v, support_of(v)};
}

std::vector<DarkState> dark_states_numeric(const Eigen::MatrixXd& h) {
  const Eigen::Index n = h.rows();
  const Eigen::Index n_ground = (n + 1) / 2;
  const Eigen::Index n_excited = n / 2;

  // A vector supported on ground levels is annihilated by H iff the
  // excited-row / ground-column block maps it to zero (ground diagonals vanish).
  Eigen::MatrixXd block(std::max<Eigen::Index>(n_excited, 1), n_ground);
  block.setZero();
  for (Eigen::Index e = 0; e < n_excited; ++e)
    for (Eigen::Index g = 0; g < n_ground; ++g) block(e, g) = h(2 * e + 1, 2 * g);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv[0] : 0.0;
  const double cutoff = 1e-10 * largest;

  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff && sv[i] > 0.0) ++rank;

  std::vector<DarkState> out;
  for (Eigen::Index k = rank; k < n_ground; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (Eigen::Index g = 0; g < n_ground; ++g) v[2 * g] = svd.matrixV()(g, k);
    v.normalize();
    fix_sign(v);
    out.push_back({v, support_of(v)});
  }
  return out;
}

std::optional<double> mixing_angle(double pump, double stokes) {
  if (pump == 0.0 && stokes == 0.0) return std::nullopt;
  return std::atan2(pump, stokes);
}

namespace {

// Column among the near-zero eigenvalues with the least excited-level weight.
Eigen::Index find_dark_column(const Eigen::VectorXd& eig, const Eigen::MatrixXd& w) {
  const double scale = std::max(eig.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  Eigen::Index best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < eig.size(); ++j) {
    double excited = 0.0;
    for (Eigen::Index i = 1; i < w.rows(); i += 2) excited += w(i, j) * w(i, j);
    const double score = std::abs(eig[j]) / scale + excited;
    if (score < best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

}  // namespace

AdiabaticFrame adiabatic_frame(const ChainSystem& system, double t) {
  const Eigen::MatrixXd h = build_hamiltonian(system, t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw FrameBreakdownError("eigensolver failed at t = " + std::to_string(t));

  AdiabaticFrame f;
  f.time = t;
  f.eigenvalues = solver.eigenvalues();
  f.w = solver.eigenvectors();
  for (Eigen::Index j = 0; j < f.w.cols(); ++j) fix_sign(f.w.col(j));
  f.dark_index = find_dark_column(f.eigenvalues, f.w);

  const double pump = envelope_eval(system.couplings.front().drive, t);
  const double stokes = envelope_eval(system.couplings.back().drive, t);
  f.theta = mixing_angle(pump, stokes);
  f.omega_eff = std::hypot(pump, stokes);
  if (system.size() == 5) {
    const double omega0 = envelope_eval(system.couplings[1].drive, t);
    f.xi = omega0 > 0.0 ? f.omega_eff / omega0 : 0.0;
  }
  return f;
}

FrameTracker::FrameTracker(ChainSystem system) : system_(std::move(system)) {}

void FrameTracker::align(AdiabaticFrame& frame, const Eigen::MatrixXd& reference, double* min_overlap) {
  const Eigen::Index n = frame.w.cols();
  const Eigen::MatrixXd overlap = reference.transpose() * frame.w;

  std::vector<Eigen::Index> assignment(static_cast<std::size_t>(n), -1);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  // Greedy matching, strongest overlaps first.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return std::abs(overlap(a.first, a.second)) > std::abs(overlap(b.first, b.second));
  });
  for (const auto& [i, j] : pairs) {
    if (assignment[static_cast<std::size_t>(i)] >= 0 || taken[static_cast<std::size_t>(j)]) continue;
    assignment[static_cast<std::size_t>(i)] = j;
    taken[static_cast<std::size_t>(j)] = true;
  }

  double worst = 1.0;
  Eigen::MatrixXd w(frame.w.rows(), n);
  Eigen::VectorXd eig(n);
  Eigen::Index dark = frame.dark_index;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = assignment[static_cast<std::size_t>(i)];
    const double o = overlap(i, j);
    worst = std::min(worst, std::abs(o));
    w.col(i) = o < 0.0 ? Eigen::VectorXd(-frame.w.col(j)) : Eigen::VectorXd(frame.w.col(j));
    eig[i] = frame.eigenvalues[j];
    if (j == frame.dark_index) dark = i;
  }
  if (worst < 0.5)
    throw FrameBreakdownError("adiabatic frame breakdown at t = " + std::to_string(frame.time) +
                              ": eigenvector overlap " + std::to_string(worst));
  frame.w = std::move(w);
  frame.eigenvalues = std::move(eig);
  frame.dark_index = dark;
  if (min_overlap) *min_overlap = worst;
}

const AdiabaticFrame& FrameTracker::frame_at(double t) {
  AdiabaticFrame f = adiabatic_frame(system_, t);
  if (last_) {
    double worst = 1.0;
    align(f, last_->w, &worst);
    min_overlap_ = std::min(min_overlap_, worst);
    // The dark column keeps its identity along a trajectory.
    f.dark_index = last_->dark_index;
  }
  last_ = std::move(f);
  return *last_;
}

Eigen::MatrixXd nonadiabatic_coupling(const Eigen::MatrixXd& w_minus, const Eigen::MatrixXd& w,
                                      const Eigen::MatrixXd& w_plus, double h) {
  const Eigen::MatrixXd delta = w.transpose() * (w_plus - w_minus);
  const double residual = (delta + delta.transpose()).norm();
  if (residual > 1e-6)
    throw StepTooLargeError("nonadiabatic coupling step too large: antisymmetry residual " +
                            std::to_string(residual));
  Eigen::MatrixXd k = delta / (2.0 * h);
  return 0.5 * (k - k.transpose());
}

Eigen::MatrixXd nonadiabatic_coupling(FrameTracker& tracker, double t, double h) {
  const AdiabaticFrame centre = tracker.frame_at(t);
  AdiabaticFrame minus = adiabatic_frame(tracker.system(), t - h);
  AdiabaticFrame plus = adiabatic_frame(tracker.system(), t + h);
  FrameTracker::align(minus, centre.w);
  FrameTracker::align(plus, centre.w);
  return nonadiabatic_coupling(minus.w, centre.w, plus.w, h);
}

}  // namespace cstirap
