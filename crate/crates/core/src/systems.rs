//! The qubit and qutrit protocol families, parametrized by a single angle
//! used for both intervals and started from a thermal state.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{ComplexMatrix, EnergyLevels, ProtocolSpec, UnitaryMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Qubit,
    Qutrit,
}

impl SystemKind {
    pub fn dim(self) -> usize {
        match self {
            SystemKind::Qubit => 2,
            SystemKind::Qutrit => 3,
        }
    }

    /// Levels in units of the ground-to-top gap.
    pub fn levels(self) -> EnergyLevels {
        let v = match self {
            SystemKind::Qubit => vec![0.0, 1.0],
            SystemKind::Qutrit => vec![0.0, 0.5, 1.0],
        };
        EnergyLevels::new(v).expect("fixed spectra are non-degenerate")
    }

    pub fn unitary(self, theta: f64) -> Result<UnitaryMatrix> {
        match self {
            SystemKind::Qubit => qubit_unitary(theta),
            SystemKind::Qutrit => qutrit_unitary(theta),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::Qubit => "qubit",
            SystemKind::Qutrit => "qutrit",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qubit" => Ok(SystemKind::Qubit),
            "qutrit" => Ok(SystemKind::Qutrit),
            other => Err(Error::Parameter(format!(
                "unknown system '{other}', expected qubit or qutrit"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemFamily {
    pub kind: SystemKind,
    /// Rotation angle shared by both intervals, in radians.
    pub theta: f64,
    /// Inverse temperature in units of the inverse gap.
    pub beta: f64,
}

impl SystemFamily {
    pub fn new(kind: SystemKind, theta: f64, beta: f64) -> Self {
        SystemFamily { kind, theta, beta }
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if theta.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "rotation angle must be finite, got {theta}"
        )))
    }
}

/// Planar rotation by `theta / 2`.
pub fn qubit_unitary(theta: f64) -> Result<UnitaryMatrix> {
    check_angle(theta)?;
    let (s, c) = (theta / 2.0).sin_cos();
    UnitaryMatrix::new(ComplexMatrix::from_real_rows(&[vec![c, -s], vec![s, c]])?)
}

/// Real rotation by `theta` about the axis `(1, 0, 1) / sqrt 2`.
pub fn qutrit_unitary(theta: f64) -> Result<UnitaryMatrix> {
    check_angle(theta)?;
    let (s, c) = theta.sin_cos();
    let r = std::f64::consts::SQRT_2 * s;
    let rows = [
        vec![1.0 + c, -r, 1.0 - c],
        vec![r, 2.0 * c, -r],
        vec![1.0 - c, r, 1.0 + c],
    ]
    .map(|row| row.into_iter().map(|x| 0.5 * x).collect::<Vec<_>>());
    UnitaryMatrix::new(ComplexMatrix::from_real_rows(&rows)?)
}

pub fn make_protocol(family: &SystemFamily) -> Result<ProtocolSpec> {
    let u = family.kind.unitary(family.theta)?;
    let levels = family.kind.levels();
    ProtocolSpec::new(
        levels.clone(),
        levels.clone(),
        levels,
        family.beta,
        u.clone(),
        u,
    )
}
