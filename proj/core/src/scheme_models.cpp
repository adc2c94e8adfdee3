#include "phonon_chill/scheme_models.hpp"

#include "phonon_chill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace phonon_chill {

namespace {

ComplexMatrix ket_bra(std::size_t i, std::size_t j) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix sigma_x(std::size_t i, std::size_t j) { return ket_bra(i, j) + ket_bra(j, i); }

double require(const std::optional<double>& field, const char* name, SchemeKind kind) {
  if (!field) {
    std::ostringstream msg;
    msg << to_string(kind) << " scheme requires field '" << name << "'";
    throw ConfigError(msg.str());
  }
  return *field;
}

ComplexMatrix position(const HilbertSpace& space) {
  const ComplexMatrix a = annihilation(space.fock_dim());
  return a + a.adjoint();
}

ComplexMatrix phonon_free_energy(const SchemeConfig& cfg, const HilbertSpace& space) {
  const ComplexMatrix a = annihilation(space.fock_dim());
  return cfg.omega_k * space.embed_phonon(a.adjoint() * a);
}

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt6 = 2.4494897427831781;

}  // namespace

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Asymmetric: return "asymmetric";
    case SchemeKind::Symmetric: return "symmetric";
    case SchemeKind::EitBaseline: return "eit";
    case SchemeKind::StarkBaseline: return "stark";
  }
  return "unknown";
}

SchemeKind scheme_kind_from_string(std::string_view name) {
  if (name == "asymmetric") return SchemeKind::Asymmetric;
  if (name == "symmetric") return SchemeKind::Symmetric;
  if (name == "eit") return SchemeKind::EitBaseline;
  if (name == "stark") return SchemeKind::StarkBaseline;
  throw ConfigError("unknown scheme kind '" + std::string(name) +
                    "' (expected asymmetric, symmetric, eit or stark)");
}

void SchemeConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(omega_k) || omega_k <= 0.0) throw ConfigError("omega_k must be > 0");
  if (!finite(lambda) || lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (!finite(laser_rabi)) throw ConfigError("Omega must be finite");
  if (!finite(decay_rate) || decay_rate <= 0.0) throw ConfigError("Gamma must be > 0");
  if (fock_dim < 2) throw ConfigError("fock_dim must be >= 2");
  if (!finite(phonon_damping) || phonon_damping < 0.0) {
    throw ConfigError("gamma_k must be >= 0");
  }
  if (!finite(bath_occupation) || bath_occupation < 0.0) {
    throw ConfigError("n_thermal must be >= 0");
  }
  for (double b : branching) {
    if (!finite(b) || b < 0.0) throw ConfigError("branching fractions must be >= 0");
  }
  const double total = std::accumulate(branching.begin(), branching.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("branching must sum to 1");

  for (const auto* field : {&microwave_rabi, &laser_detuning_plus, &laser_detuning_minus,
                            &laser_detuning, &microwave_detuning}) {
    if (*field && !finite(**field)) throw ConfigError("scheme parameters must be finite");
  }

  switch (kind) {
    case SchemeKind::Asymmetric: {
      const double wg = require(microwave_rabi, "Omega_g", kind);
      const double dp = require(laser_detuning_plus, "Delta_plus", kind);
      const double dm = require(laser_detuning_minus, "Delta_minus", kind);
      const double offset = wg / 2.0 - (dm - dp);
      const double scale = std::max({1.0, std::abs(wg), std::abs(dm), std::abs(dp)});
      if (!allow_dark_offset && std::abs(offset) > 1e-12 * scale) {
        throw ConfigError(
            "asymmetric scheme requires Delta_minus = Delta_plus + Omega_g/2 "
            "(set allow_dark_offset to scan away from it)");
      }
      break;
    }
    case SchemeKind::Symmetric:
      require(microwave_rabi, "Omega_g", kind);
      require(laser_detuning, "Delta", kind);
      require(microwave_detuning, "Delta_g", kind);
      break;
    case SchemeKind::EitBaseline:
      require(laser_detuning, "Delta", kind);
      if (branching[0] + branching[2] <= 0.0) {
        throw ConfigError("eit baseline needs decay into |+1> or |-1>");
      }
      break;
    case SchemeKind::StarkBaseline:
      require(microwave_rabi, "Omega_g", kind);
      require(laser_detuning, "Delta", kind);
      require(microwave_detuning, "Delta_g", kind);
      if (branching[0] + branching[1] <= 0.0) {
        throw ConfigError("stark baseline needs decay into |+1> or |0>");
      }
      break;
  }
}

SchemeConfig asymmetric_gate_point(double lambda, double laser_rabi, double decay_rate,
                                   std::optional<double> detuning_minus) {
  SchemeConfig cfg;
  cfg.kind = SchemeKind::Asymmetric;
  cfg.lambda = lambda;
  cfg.laser_rabi = laser_rabi;
  cfg.decay_rate = decay_rate;
  const double wg = 4.0 * cfg.omega_k / 3.0;
  const double dm = detuning_minus.value_or(
      3.0 * laser_rabi * laser_rabi / (7.0 * cfg.omega_k) - cfg.omega_k);
  cfg.microwave_rabi = wg;
  cfg.laser_detuning_minus = dm;
  cfg.laser_detuning_plus = dm - wg / 2.0;
  return cfg;
}

SchemeConfig symmetric_gate_point(double lambda, double laser_rabi, double decay_rate,
                                  double laser_detuning, double microwave_rabi) {
  SchemeConfig cfg;
  cfg.kind = SchemeKind::Symmetric;
  cfg.lambda = lambda;
  cfg.laser_rabi = laser_rabi;
  cfg.decay_rate = decay_rate;
  cfg.microwave_rabi = microwave_rabi * cfg.omega_k;
  cfg.laser_detuning = laser_detuning;
  cfg.microwave_detuning = -cfg.omega_k;
  return cfg;
}

SchemeConfig eit_baseline(double lambda, double laser_rabi, double decay_rate) {
  SchemeConfig cfg;
  cfg.kind = SchemeKind::EitBaseline;
  cfg.lambda = lambda;
  cfg.laser_rabi = laser_rabi;
  cfg.decay_rate = decay_rate;
  cfg.laser_detuning = laser_rabi * laser_rabi / (2.0 * cfg.omega_k) - cfg.omega_k;
  return cfg;
}

SchemeConfig stark_baseline(double lambda, double laser_rabi, double decay_rate) {
  SchemeConfig cfg;
  cfg.kind = SchemeKind::StarkBaseline;
  cfg.lambda = lambda;
  cfg.laser_rabi = laser_rabi;
  cfg.decay_rate = decay_rate;
  const double detuning = -2.0 * laser_rabi;
  cfg.laser_detuning = detuning;
  cfg.microwave_rabi = cfg.omega_k / 4.0;
  cfg.microwave_detuning =
      detuning == 0.0 ? -cfg.omega_k
                      : -cfg.omega_k + laser_rabi * laser_rabi / (4.0 * detuning);
  return cfg;
}

std::vector<std::size_t> active_levels(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::EitBaseline: return {kA2, kPlusOne, kMinusOne};
    case SchemeKind::StarkBaseline: return {kA2, kPlusOne, kZero};
    default: return {kA2, kPlusOne, kZero, kMinusOne};
  }
}

double dark_condition_offset(const SchemeConfig& cfg) {
  if (cfg.kind != SchemeKind::Asymmetric) return 0.0;
  return cfg.microwave_rabi.value_or(0.0) / 2.0 -
         (cfg.laser_detuning_minus.value_or(0.0) - cfg.laser_detuning_plus.value_or(0.0));
}

ComplexMatrix sigma_z_prime() { return ket_bra(kPlusOne, kPlusOne) - ket_bra(kMinusOne, kMinusOne); }

ComplexMatrix internal_hamiltonian(const SchemeConfig& cfg) {
  cfg.validate();
  const double w = cfg.laser_rabi;
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  switch (cfg.kind) {
    case SchemeKind::Asymmetric: {
      const double wg = *cfg.microwave_rabi;
      const double dm = *cfg.laser_detuning_minus;
      const double dp = *cfg.laser_detuning_plus;
      h += -dm * ket_bra(kA2, kA2);
      h += -(dm - dp) * (ket_bra(kPlusOne, kPlusOne) + ket_bra(kZero, kZero));
      h += (w / 2.0) * (sigma_x(kA2, kPlusOne) + sigma_x(kA2, kMinusOne));
      h += (wg / 2.0) * sigma_x(kPlusOne, kZero);
      break;
    }
    case SchemeKind::Symmetric: {
      const double wg = *cfg.microwave_rabi;
      h += -*cfg.laser_detuning * ket_bra(kA2, kA2);
      h += *cfg.microwave_detuning * ket_bra(kZero, kZero);
      h += (w / 2.0) * (sigma_x(kA2, kPlusOne) + sigma_x(kA2, kMinusOne));
      h += (wg / 2.0) * (sigma_x(kPlusOne, kZero) + sigma_x(kMinusOne, kZero));
      break;
    }
    case SchemeKind::EitBaseline:
      h += -*cfg.laser_detuning * ket_bra(kA2, kA2);
      h += (w / 2.0) * (sigma_x(kA2, kPlusOne) + sigma_x(kA2, kMinusOne));
      break;
    case SchemeKind::StarkBaseline:
      h += -*cfg.laser_detuning * ket_bra(kA2, kA2);
      h += *cfg.microwave_detuning * ket_bra(kZero, kZero);
      h += (w / 2.0) * sigma_x(kA2, kPlusOne);
      h += (*cfg.microwave_rabi / 2.0) * sigma_x(kPlusOne, kZero);
      break;
  }
  return h;
}

ComplexMatrix bare_hamiltonian(const SchemeConfig& cfg, const HilbertSpace& space) {
  cfg.validate();
  return space.embed_internal(internal_hamiltonian(cfg)) + phonon_free_energy(cfg, space) +
         cfg.lambda * kron(sigma_z_prime(), position(space));
}

DressedBasis dressed_basis(SchemeKind kind) {
  DressedBasis basis;
  basis.u = ComplexMatrix::Zero(4, 4);
  basis.u(0, kA2) = 1.0;
  if (kind == SchemeKind::Asymmetric) {
    basis.labels = {"A2", "d", "b", "Y"};
    basis.u.row(1) << 0.0, 1.0 / kSqrt3, 1.0 / kSqrt3, -1.0 / kSqrt3;
    basis.u.row(2) << 0.0, 1.0 / kSqrt6, 1.0 / kSqrt6, 2.0 / kSqrt6;
    basis.u.row(3) << 0.0, 1.0 / kSqrt2, -1.0 / kSqrt2, 0.0;
  } else if (kind == SchemeKind::Symmetric) {
    basis.labels = {"A2", "D", "B", "0"};
    basis.u.row(1) << 0.0, 1.0 / kSqrt2, 0.0, -1.0 / kSqrt2;
    basis.u.row(2) << 0.0, 1.0 / kSqrt2, 0.0, 1.0 / kSqrt2;
    basis.u.row(3) << 0.0, 0.0, 1.0, 0.0;
  } else {
    throw ConfigError("dressed_basis: only defined for the asymmetric and symmetric schemes");
  }
  return basis;
}

ComplexMatrix effective_hamiltonian(const SchemeConfig& cfg, const HilbertSpace& space) {
  cfg.validate();
  const double w = cfg.laser_rabi;
  const ComplexMatrix x = position(space);

  // Dressed-basis indices.
  constexpr std::size_t a2 = 0, first = 1, second = 2, third = 3;
  ComplexMatrix drive = ComplexMatrix::Zero(4, 4);
  ComplexMatrix force = ComplexMatrix::Zero(4, 4);

  if (cfg.kind == SchemeKind::Asymmetric) {
    // first = d, second = b, third = Y
    const double wg = *cfg.microwave_rabi;
    drive += -*cfg.laser_detuning_minus * ket_bra(a2, a2);
    drive += (kSqrt6 * w / 4.0) * sigma_x(a2, second);
    drive += -wg * ket_bra(third, third);
    drive += (kSqrt2 * w / 4.0) * sigma_x(a2, third);
    force += (kSqrt2 / 2.0) * sigma_x(second, first);
    force += (kSqrt6 / 6.0) * sigma_x(first, third);
  } else if (cfg.kind == SchemeKind::Symmetric) {
    // first = D, second = B, third = |0>
    const double d = *cfg.laser_detuning;
    drive += -d * (ket_bra(a2, a2) - ket_bra(second, second));
    drive += (kSqrt2 * w / 2.0) * sigma_x(a2, second);
    drive += *cfg.microwave_detuning * ket_bra(third, third) - d * ket_bra(second, second);
    drive += (kSqrt2 * *cfg.microwave_rabi / 2.0) * sigma_x(third, second);
    force += sigma_x(second, first);
  } else {
    throw ConfigError("effective_hamiltonian: baselines have no dressed-state form");
  }

  const ComplexMatrix u = dressed_basis(cfg.kind).u;
  ComplexMatrix internal = u.adjoint() * drive * u;
  if (cfg.kind == SchemeKind::Asymmetric) {
    const double offset = dark_condition_offset(cfg);
    internal += offset * (ket_bra(kPlusOne, kPlusOne) + ket_bra(kZero, kZero));
  }
  const ComplexMatrix coupling = u.adjoint() * force * u;
  return space.embed_internal(internal) + phonon_free_energy(cfg, space) +
         cfg.lambda * kron(coupling, x);
}

ComplexMatrix asymmetric_residual_coupling(const SchemeConfig& cfg, const HilbertSpace& space) {
  if (cfg.kind != SchemeKind::Asymmetric) {
    throw ConfigError("asymmetric_residual_coupling: asymmetric scheme only");
  }
  constexpr std::size_t b = 2, y = 3;
  ComplexMatrix residual = 0.5 * (ket_bra(y, y) - ket_bra(b, b)) +
                           (1.0 / std::sqrt(12.0)) * sigma_x(b, y);
  const ComplexMatrix u = dressed_basis(cfg.kind).u;
  return cfg.lambda * kron(u.adjoint() * residual * u, position(space));
}

std::vector<Jump> internal_dissipators(const SchemeConfig& cfg) {
  cfg.validate();
  std::array<double, 3> fractions = cfg.branching;
  if (cfg.kind == SchemeKind::EitBaseline) {
    const double s = fractions[0] + fractions[2];
    fractions = {fractions[0] / s, 0.0, fractions[2] / s};
  } else if (cfg.kind == SchemeKind::StarkBaseline) {
    const double s = fractions[0] + fractions[1];
    fractions = {fractions[0] / s, fractions[1] / s, 0.0};
  }

  constexpr std::array<std::size_t, 3> targets{kPlusOne, kZero, kMinusOne};
  constexpr std::array<const char*, 3> names{"A2->+1", "A2->0", "A2->-1"};
  std::vector<Jump> jumps;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double rate = fractions[i] * cfg.decay_rate;
    if (rate < 0.0) throw ConfigError("negative decay rate");
    if (rate == 0.0) continue;
    jumps.push_back({rate, ket_bra(targets[i], kA2), names[i]});
  }
  return jumps;
}

std::vector<Jump> dissipators(const SchemeConfig& cfg, const HilbertSpace& space) {
  std::vector<Jump> jumps = internal_dissipators(cfg);
  for (auto& j : jumps) j.op = space.embed_internal(j.op);
  if (cfg.phonon_damping > 0.0) {
    const ComplexMatrix b = space.annihilation();
    jumps.push_back({(cfg.bath_occupation + 1.0) * cfg.phonon_damping, b, "b"});
    if (cfg.bath_occupation > 0.0) {
      jumps.push_back({cfg.bath_occupation * cfg.phonon_damping, b.adjoint(), "b+"});
    }
  }
  return jumps;
}

ComplexVector dark_state(const SchemeConfig& cfg) {
  ComplexVector v = ComplexVector::Zero(4);
  switch (cfg.kind) {
    case SchemeKind::Asymmetric:
      v << 0.0, 1.0 / kSqrt3, 1.0 / kSqrt3, -1.0 / kSqrt3;
      break;
    case SchemeKind::Symmetric:
    case SchemeKind::EitBaseline:
      v << 0.0, 1.0 / kSqrt2, 0.0, -1.0 / kSqrt2;
      break;
    case SchemeKind::StarkBaseline:
      throw ConfigError("dark_state: the Stark baseline has no dark state");
  }
  return v;
}

ComplexVector ansatz_steady_state_unnormalized(const SchemeConfig& cfg,
                                               const HilbertSpace& space) {
  cfg.validate();
  const std::size_t nf = space.fock_dim();
  auto fock = [nf](std::size_t n) {
    ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(nf));
    e(static_cast<Eigen::Index>(n)) = 1.0;
    return e;
  };
  auto product = [](const ComplexVector& internal, const ComplexVector& phonon) {
    ComplexVector out(internal.size() * phonon.size());
    for (Eigen::Index i = 0; i < internal.size(); ++i) {
      out.segment(i * phonon.size(), phonon.size()) = internal(i) * phonon;
    }
    return out;
  };

  const double eta = cfg.eta();
  if (cfg.kind == SchemeKind::Asymmetric) {
    const DressedBasis basis = dressed_basis(cfg.kind);
    const ComplexVector excited = basis.state(2) - kSqrt3 * basis.state(3);
    return product(basis.state(1), fock(0)) - (eta / kSqrt2) * product(excited, fock(1));
  }
  if (cfg.kind == SchemeKind::Symmetric) {
    const double wg = *cfg.microwave_rabi;
    if (wg == 0.0) throw ConfigError("ansatz_steady_state: Omega_g = 0 leaves it undefined");
    ComplexVector zero = ComplexVector::Zero(4);
    zero(kZero) = 1.0;
    return product(dark_state(cfg), fock(0)) -
           (kSqrt2 * eta * cfg.omega_k / wg) * product(zero, fock(1));
  }
  throw ConfigError("ansatz_steady_state: asymmetric or symmetric scheme required");
}

ComplexVector ansatz_steady_state(const SchemeConfig& cfg, const HilbertSpace& space) {
  return ansatz_steady_state_unnormalized(cfg, space).normalized();
}

ComplexVector leakage_state(const SchemeConfig& cfg, const HilbertSpace& space) {
  ComplexVector internal;
  if (cfg.kind == SchemeKind::Asymmetric) {
    internal = dressed_basis(cfg.kind).state(3);
  } else if (cfg.kind == SchemeKind::Symmetric) {
    internal = ComplexVector::Zero(4);
    internal(kZero) = 1.0;
  } else {
    throw ConfigError("leakage_state: asymmetric or symmetric scheme required");
  }
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(space.total_dim()));
  for (Eigen::Index i = 0; i < 4; ++i) {
    out(static_cast<Eigen::Index>(space.index(static_cast<std::size_t>(i), 1))) = internal(i);
  }
  return out;
}

double gate_point_residual(const SchemeConfig& cfg) {
  const HilbertSpace space(std::max<std::size_t>(cfg.fock_dim, 3));
  const ComplexVector image =
      effective_hamiltonian(cfg, space) * ansatz_steady_state_unnormalized(cfg, space);
  return leakage_state(cfg, space).dot(image).real();
}

double analytic_gate_point_residual(const SchemeConfig& cfg) {
  cfg.validate();
  const double eta = cfg.eta();
  const double w = cfg.omega_k;
  if (cfg.kind == SchemeKind::Asymmetric) {
    return std::sqrt(1.5) * eta * (4.0 * w / 3.0 - *cfg.microwave_rabi);
  }
  if (cfg.kind == SchemeKind::Symmetric) {
    const double wg = *cfg.microwave_rabi;
    if (wg == 0.0) throw ConfigError("gate_point_residual: Omega_g = 0");
    return -(kSqrt2 * eta * w / wg) * (w + *cfg.microwave_detuning);
  }
  throw ConfigError("gate_point_residual: asymmetric or symmetric scheme required");
}

}  // namespace phonon_chill
