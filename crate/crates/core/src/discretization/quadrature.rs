//! Discrete-ordinates angular quadrature sets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    LevelSymmetric,
    GaussChebyshev,
}

impl fmt::Display for QuadratureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadratureKind::LevelSymmetric => "level-symmetric",
            QuadratureKind::GaussChebyshev => "gauss-chebyshev",
        })
    }
}

impl FromStr for QuadratureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "level-symmetric" | "ls" => Ok(QuadratureKind::LevelSymmetric),
            "gauss-chebyshev" | "gc" => Ok(QuadratureKind::GaussChebyshev),
            other => Err(Error::Unsupported(format!("quadrature kind `{other}`"))),
        }
    }
}

/// Directions `Ω_d` with weights `w_d` summing to `4π`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularQuadrature {
    pub kind: QuadratureKind,
    pub directions: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

const MIRROR_TOL: f64 = 1e-12;

// LQn first cosines and point weights (octant-normalized). The remaining
// cosines follow from mu_i^2 = mu_1^2 + 2 (i-1) (1 - 3 mu_1^2) / (N - 2).
const LQ_MU1: [(usize, f64); 4] = [(2, 0.577_350_269_189_625_8), (4, 0.350_021_2), (6, 0.266_635_5), (8, 0.218_217_9)];
const LQ6_WEIGHTS: [f64; 2] = [0.176_126_3, 0.157_207_1];
const LQ8_WEIGHTS: [f64; 3] = [0.120_987_7, 0.090_740_7, 0.092_592_6];

/// Builds a supported quadrature. Level-symmetric takes the SN order
/// (2, 4, 6, 8); Gauss-Chebyshev takes the direction count (8, 16, 32).
pub fn build_quadrature(kind: QuadratureKind, order: usize) -> Result<AngularQuadrature> {
    let q = match kind {
        QuadratureKind::LevelSymmetric => level_symmetric(order)?,
        QuadratureKind::GaussChebyshev => gauss_chebyshev(order)?,
    };
    q.validate()?;
    Ok(q)
}

fn octant_signs() -> [[f64; 3]; 8] {
    std::array::from_fn(|o| {
        [
            if o & 1 == 0 { 1.0 } else { -1.0 },
            if o & 2 == 0 { 1.0 } else { -1.0 },
            if o & 4 == 0 { 1.0 } else { -1.0 },
        ]
    })
}

fn level_symmetric(order: usize) -> Result<AngularQuadrature> {
    let mu1 = LQ_MU1
        .iter()
        .find(|(n, _)| *n == order)
        .map(|&(_, m)| m)
        .ok_or_else(|| Error::Unsupported(format!("level-symmetric order S{order}")))?;
    let n = order / 2;
    let mu: Vec<f64> = if order == 2 {
        vec![mu1]
    } else {
        (0..n)
            .map(|i| (mu1 * mu1 + i as f64 * 2.0 * (1.0 - 3.0 * mu1 * mu1) / (order as f64 - 2.0)).sqrt())
            .collect()
    };

    // Points of one octant: index triples (i, j, k) with i + j + k = n - 1.
    let mut octant = Vec::new();
    for i in 0..n {
        for j in 0..n - i {
            let k = n - 1 - i - j;
            let mut sorted = [i, j, k];
            sorted.sort_unstable();
            let w = match order {
                2 | 4 => 1.0,
                6 => match sorted {
                    [0, 0, 2] => LQ6_WEIGHTS[0],
                    _ => LQ6_WEIGHTS[1],
                },
                _ => match sorted {
                    [0, 0, 3] => LQ8_WEIGHTS[0],
                    [0, 1, 2] => LQ8_WEIGHTS[1],
                    _ => LQ8_WEIGHTS[2],
                },
            };
            let v = [mu[i], mu[j], mu[k]];
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            octant.push((v.map(|c| c / norm), w));
        }
    }

    let mut directions = Vec::with_capacity(8 * octant.len());
    let mut weights = Vec::with_capacity(8 * octant.len());
    for s in octant_signs() {
        for &(v, w) in &octant {
            directions.push([s[0] * v[0], s[1] * v[1], s[2] * v[2]]);
            weights.push(w);
        }
    }
    normalize_weights(&mut weights);
    Ok(AngularQuadrature {
        kind: QuadratureKind::LevelSymmetric,
        directions,
        weights,
    })
}

fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    match n {
        2 => {
            let x = 1.0 / 3f64.sqrt();
            vec![(-x, 1.0), (x, 1.0)]
        }
        4 => {
            let r = (6.0f64 / 5.0).sqrt();
            let a = (3.0 / 7.0 - 2.0 / 7.0 * r).sqrt();
            let b = (3.0 / 7.0 + 2.0 / 7.0 * r).sqrt();
            let wa = (18.0 + 30f64.sqrt()) / 36.0;
            let wb = (18.0 - 30f64.sqrt()) / 36.0;
            vec![(-b, wb), (-a, wa), (a, wa), (b, wb)]
        }
        _ => unreachable!("only 2- and 4-point polar rules are used"),
    }
}

/// Product set: Gauss-Legendre in the polar cosine, equally spaced
/// (Chebyshev) azimuths at `(2k + 1) π / n_azi`.
fn gauss_chebyshev(n_directions: usize) -> Result<AngularQuadrature> {
    let (n_polar, n_azi) = match n_directions {
        8 => (2, 4),
        16 => (2, 8),
        32 => (4, 8),
        other => {
            return Err(Error::Unsupported(format!(
                "Gauss-Chebyshev with {other} directions (supported: 8, 16, 32)"
            )))
        }
    };
    let mut directions = Vec::with_capacity(n_directions);
    let mut weights = Vec::with_capacity(n_directions);
    for (mu, wp) in gauss_legendre(n_polar) {
        let sin_theta = (1.0 - mu * mu).sqrt();
        for k in 0..n_azi {
            let phi = (2 * k + 1) as f64 * PI / n_azi as f64;
            let v = [sin_theta * phi.cos(), sin_theta * phi.sin(), mu];
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            directions.push(v.map(|c| c / norm));
            weights.push(wp * 2.0 * PI / n_azi as f64);
        }
    }
    normalize_weights(&mut weights);
    Ok(AngularQuadrature {
        kind: QuadratureKind::GaussChebyshev,
        directions,
        weights,
    })
}

fn normalize_weights(w: &mut [f64]) {
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x *= 4.0 * PI / total);
}

impl AngularQuadrature {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.directions.len() != self.weights.len() || self.is_empty() {
            return Err(Error::InvalidInput("quadrature directions/weights mismatch".into()));
        }
        if self.weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidInput("quadrature weights must be positive".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 4.0 * PI).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("quadrature weights sum to {total}, not 4π")));
        }
        for o in &self.directions {
            let n = (o[0] * o[0] + o[1] * o[1] + o[2] * o[2]).sqrt();
            if (n - 1.0).abs() > 1e-14 {
                return Err(Error::InvalidInput("quadrature direction is not unit length".into()));
            }
        }
        let m = self.first_moment();
        if m.iter().any(|c| c.abs() > 1e-12) {
            return Err(Error::InvalidInput(format!("quadrature first moment {m:?} is not zero")));
        }
        Ok(())
    }

    /// `Σ_d w_d Ω_d`
    pub fn first_moment(&self) -> [f64; 3] {
        let mut m = [0.0; 3];
        for (o, w) in self.directions.iter().zip(&self.weights) {
            for a in 0..3 {
                m[a] += w * o[a];
            }
        }
        m
    }

    /// Index of the direction reflected across the plane with unit normal
    /// along `axis`, i.e. `Ω - 2 (Ω·n) n`.
    pub fn mirror(&self, d: usize, axis: usize) -> Option<usize> {
        let mut target = self.directions[d];
        target[axis] = -target[axis];
        self.directions.iter().position(|o| {
            (0..3).all(|a| (o[a] - target[a]).abs() <= MIRROR_TOL)
        })
    }
}
