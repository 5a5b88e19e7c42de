//! Physical parameters, energy conversions, and turning-point geometry.
//!
//! The dimensionless energy `eps = (E - m c^2) / (m c^2)` is the
//! authoritative energy field; everything else is derived from it. All of
//! the series work downstream is a pure function of `eps`, with the physical
//! scales `m`, `k`, `c` restored only in prefactors.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("epsilon must be positive for oscillatory motion, got {value} (no oscillation)")]
    NonPositiveEpsilon { value: f64 },
}

/// Mass, spring constant, and light speed of the oscillator.
///
/// Immutable once constructed; `new` rejects non-positive values, so
/// `omega0 = sqrt(k/m)` is always well defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    mass: f64,
    spring_constant: f64,
    light_speed: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, spring_constant: f64, light_speed: f64) -> Result<Self, ModelError> {
        for (name, value) in [
            ("mass", mass),
            ("spring_constant", spring_constant),
            ("light_speed", light_speed),
        ] {
            if value <= 0.0 || !value.is_finite() {
                return Err(ModelError::NonPositiveParameter { name, value });
            }
        }
        Ok(Self {
            mass,
            spring_constant,
            light_speed,
        })
    }

    /// Natural units `m = k = c = 1`, the CLI default.
    pub fn natural() -> Self {
        Self {
            mass: 1.0,
            spring_constant: 1.0,
            light_speed: 1.0,
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spring_constant(&self) -> f64 {
        self.spring_constant
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    /// Non-relativistic angular frequency `omega0 = sqrt(k/m)`.
    pub fn omega0(&self) -> f64 {
        (self.spring_constant / self.mass).sqrt()
    }

    /// Rest energy `m c^2`.
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.light_speed * self.light_speed
    }
}

/// Total, excess, and dimensionless energy of one oscillator state.
///
/// `epsilon` is authoritative; `excess_energy = eps * m c^2` and
/// `total_energy = excess_energy + m c^2` are derived at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySpec {
    epsilon: f64,
    excess_energy: f64,
    total_energy: f64,
}

impl EnergySpec {
    pub fn from_epsilon(params: &OscillatorParams, epsilon: f64) -> Result<Self, ModelError> {
        if epsilon <= 0.0 || !epsilon.is_finite() {
            return Err(ModelError::NonPositiveEpsilon { value: epsilon });
        }
        let rest = params.rest_energy();
        Ok(Self {
            epsilon,
            excess_energy: epsilon * rest,
            total_energy: (1.0 + epsilon) * rest,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Mechanical energy above rest energy, the paper's driving quantity.
    pub fn excess_energy(&self) -> f64 {
        self.excess_energy
    }

    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }
}

/// The annulus in the momentum plane collapses at this `eps` (`sqrt(2) - 1`):
/// the inner turning momentum reaches the relativistic branch points at
/// `|p| = m c`.
pub const EPSILON_ANNULUS_COLLAPSE: f64 = std::f64::consts::SQRT_2 - 1.0;

/// Coordinate-plane branch points on the positive real axis.
///
/// `inner` is the physical turning point; `outer` is the entirely
/// relativistic branch point beyond it. Their mirror images at `-inner`,
/// `-outer` follow by symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPointsX {
    inner: f64,
    outer: f64,
}

impl TurningPointsX {
    /// Physical turning point `x_2R = sqrt(2 Etilde / k)`.
    pub fn inner(&self) -> f64 {
        self.inner
    }

    /// Relativistic branch point `x_4R = x_2R sqrt(1 + 2/eps)`.
    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// Expansion ratio `(x_2R / x_4R)^2 = eps / (2 + eps)`, always in (0, 1).
    pub fn ratio_sq(&self) -> f64 {
        (self.inner / self.outer).powi(2)
    }
}

/// Momentum-plane branch points.
///
/// `inner` is the turning momentum on the real axis; the relativistic branch
/// points sit on the imaginary axis at `±i m c`, so only their magnitude is
/// carried.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPointsP {
    inner: f64,
    outer_magnitude: f64,
}

impl TurningPointsP {
    /// Turning momentum `p_2R = sqrt(2 m Etilde (1 + eps/2))`.
    pub fn inner(&self) -> f64 {
        self.inner
    }

    /// `|p_4R| = m c`, the distance to the imaginary-axis branch points.
    pub fn outer_magnitude(&self) -> f64 {
        self.outer_magnitude
    }

    /// `(p_2R / |p_4R|)^2 = 2 eps (1 + eps/2)`.
    pub fn ratio_sq(&self) -> f64 {
        (self.inner / self.outer_magnitude).powi(2)
    }

    /// Whether the Laurent annulus `p_2R < |p| < m c` is nonempty, i.e.
    /// `eps < sqrt(2) - 1`. Emptiness is reported, never raised as an error.
    pub fn annulus_is_valid(&self) -> bool {
        self.inner < self.outer_magnitude
    }
}

/// Coordinate-plane turning points for the given energy.
///
/// The `inner` value coincides exactly with the non-relativistic turning
/// point `sqrt(2 Etilde / k)` at every energy.
pub fn turning_points_x(params: &OscillatorParams, energy: &EnergySpec) -> TurningPointsX {
    let inner = (2.0 * energy.excess_energy() / params.spring_constant()).sqrt();
    let outer = inner * (1.0 + 2.0 / energy.epsilon()).sqrt();
    TurningPointsX { inner, outer }
}

/// Momentum-plane turning points for the given energy.
pub fn turning_points_p(params: &OscillatorParams, energy: &EnergySpec) -> TurningPointsP {
    let eps = energy.epsilon();
    let inner = (2.0 * params.mass() * energy.excess_energy() * (1.0 + eps / 2.0)).sqrt();
    TurningPointsP {
        inner,
        outer_magnitude: params.mass() * params.light_speed(),
    }
}
