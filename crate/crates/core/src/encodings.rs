//! Conjugate-coding schemes on a single qubit.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{re, spin_operator, Complex64, PureState};

/// Which qubit encoding is in use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    FourState,
    SixState,
    EightState,
}

/// A basis label `b`. For the 8-state scheme `b = 2u + w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis(pub u8);

impl Basis {
    /// `(u, w)` bits of an 8-state label.
    pub fn uw(self) -> (u8, u8) {
        (self.0 >> 1, self.0 & 1)
    }
}

const FOUR_BASES: [Basis; 2] = [Basis(0), Basis(1)];
const SIX_BASES: [Basis; 3] = [Basis(1), Basis(2), Basis(3)];
const EIGHT_BASES: [Basis; 4] = [Basis(0), Basis(1), Basis(2), Basis(3)];

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::FourState, Scheme::SixState, Scheme::EightState];

    /// Ordered basis set.
    pub fn bases(self) -> &'static [Basis] {
        match self {
            Scheme::FourState => &FOUR_BASES,
            Scheme::SixState => &SIX_BASES,
            Scheme::EightState => &EIGHT_BASES,
        }
    }

    pub fn size(self) -> usize {
        self.bases().len()
    }

    /// Number of encoding states, `2|ℬ|`.
    pub fn states(self) -> usize {
        2 * self.size()
    }

    /// Position of `b` within [`Scheme::bases`].
    pub fn index_of(self, b: Basis) -> Result<usize> {
        self.bases()
            .iter()
            .position(|&x| x == b)
            .ok_or(Error::UnknownBasis {
                scheme: self,
                label: b.0,
            })
    }

    pub fn label(self, b: Basis) -> String {
        match self {
            Scheme::EightState => {
                let (u, w) = b.uw();
                format!("{u}{w}")
            }
            _ => b.0.to_string(),
        }
    }

    /// Short name used in CSV output.
    pub fn short_name(self) -> &'static str {
        match self {
            Scheme::FourState => "4-state",
            Scheme::SixState => "6-state",
            Scheme::EightState => "8-state",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "4" | "4-state" | "four" => Ok(Scheme::FourState),
            "6" | "6-state" | "six" => Ok(Scheme::SixState),
            "8" | "8-state" | "eight" => Ok(Scheme::EightState),
            other => Err(Error::InvalidConfig(format!("unknown scheme '{other}'"))),
        }
    }
}

/// The 8-state tilt angle, `cos α = 1/√3`.
pub fn encoding_angle() -> f64 {
    (1.0 / 3f64.sqrt()).acos()
}

/// Unit vector on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Accepts vectors whose norm is 1 within 1e-12.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::ZeroVector);
        }
        if (n2.sqrt() - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(n2));
        }
        Ok(BlochVector { x, y, z })
    }

    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(BlochVector {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Direction from spherical angles.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        BlochVector {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    /// `(θ, φ)` with `θ ∈ [0, π]`, `φ ∈ (−π, π]`; `φ = 0` on the poles.
    pub fn angles(&self) -> (f64, f64) {
        let theta = self.z.clamp(-1.0, 1.0).acos();
        let phi = if self.x == 0.0 && self.y == 0.0 {
            0.0
        } else {
            self.y.atan2(self.x)
        };
        (theta, phi)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }
}

impl std::ops::Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

fn check_bit(g: u8) -> Result<()> {
    if g > 1 {
        Err(Error::InvalidConfig(format!("bit value {g} is not 0 or 1")))
    } else {
        Ok(())
    }
}

/// Bloch direction of the state encoding bit `g` in basis `b`.
pub fn bloch_vector(scheme: Scheme, b: Basis, g: u8) -> Result<BlochVector> {
    scheme.index_of(b)?;
    check_bit(g)?;
    let sign = if g == 0 { 1.0 } else { -1.0 };
    let [x, y, z] = match scheme {
        Scheme::FourState => match b.0 {
            0 => [0.0, 0.0, 1.0],
            _ => [1.0, 0.0, 0.0],
        },
        Scheme::SixState => match b.0 {
            1 => [1.0, 0.0, 0.0],
            2 => [0.0, 1.0, 0.0],
            _ => [0.0, 0.0, 1.0],
        },
        Scheme::EightState => {
            let (u, w) = b.uw();
            let s = 1.0 / 3f64.sqrt();
            let pm = |k: u8| if k.is_multiple_of(2) { s } else { -s };
            [pm(u), pm(u + w), pm(w)]
        }
    };
    Ok(BlochVector {
        x: sign * x,
        y: sign * y,
        z: sign * z,
    })
}

/// `(|v⟩, |v̄⟩)` with `|v⟩ = (e^{−iφ/2} cos θ/2, e^{iφ/2} sin θ/2)`.
pub fn measurement_basis(v: &BlochVector) -> Result<(PureState, PureState)> {
    let n2 = v.x * v.x + v.y * v.y + v.z * v.z;
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::ZeroVector);
    }
    let (theta, phi) = v.angles();
    let (sh, ch) = (theta / 2.0).sin_cos();
    let em = Complex64::from_polar(1.0, -phi / 2.0);
    let ep = Complex64::from_polar(1.0, phi / 2.0);
    let up = PureState::normalized(vec![em * ch, ep * sh])?;
    let down = PureState::normalized(vec![-em * sh, ep * ch])?;
    Ok((up, down))
}

/// Qubit state encoding bit `g` in basis `b`.
///
/// The 4- and 6-state schemes use the `|v⟩` convention of
/// [`measurement_basis`]; the 8-state scheme uses the explicit cube-corner
/// states with their fixed phases.
pub fn state(scheme: Scheme, b: Basis, g: u8) -> Result<PureState> {
    let n = bloch_vector(scheme, b, g)?;
    match scheme {
        Scheme::EightState => {
            let (u, w) = b.uw();
            let half = encoding_angle() / 2.0;
            let sqrt_i = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
            let sign = |k: u8| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            let global = sign(g * u);
            let a = (-sqrt_i).powu(g as u32) * half.cos();
            let bb = sqrt_i.powu(1 - g as u32) * (sign(u) * half.sin());
            let hi = ((g ^ w) & 1) as usize;
            let mut amps = vec![re(0.0); 2];
            amps[hi] = a * global;
            amps[1 - hi] = bb * global;
            PureState::normalized(amps)
        }
        _ => Ok(measurement_basis(&n)?.0),
    }
}

/// Every `(b, g)` pair of a scheme with its state, in basis order.
pub fn all_states(scheme: Scheme) -> Vec<(Basis, u8, PureState)> {
    let mut out = Vec::with_capacity(scheme.states());
    for &b in scheme.bases() {
        for g in 0..2 {
            out.push((b, g, state(scheme, b, g).expect("valid label")));
        }
    }
    out
}

/// `⟨ψ|σ·n|ψ⟩`.
pub fn spin_expectation(psi: &PureState, n: &BlochVector) -> f64 {
    psi.expectation(&spin_operator(n.as_array())).re
}
