//! Generators for the built-in test problems.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::discretization::config::{MaterialMapConfig, ProblemConfig, QuadratureConfig, SCHEMA_VERSION};
use crate::discretization::{BoundaryKind, Material, QuadratureKind, Side, Stabilization, StructuredMesh};
use crate::error::{Error, Result};

pub const PIN_PITCH: f64 = 1.26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    InfiniteMedium,
    PureAbsorber,
    MiniLattice,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::InfiniteMedium => "infinite_medium",
            GeneratorKind::PureAbsorber => "pure_absorber",
            GeneratorKind::MiniLattice => "mini_lattice",
        })
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "infinite_medium" => Ok(GeneratorKind::InfiniteMedium),
            "pure_absorber" => Ok(GeneratorKind::PureAbsorber),
            "mini_lattice" => Ok(GeneratorKind::MiniLattice),
            other => Err(Error::InvalidInput(format!(
                "unknown problem kind `{other}` (expected infinite_medium, pure_absorber or mini_lattice)"
            ))),
        }
    }
}

fn uniform_bcs(kind: BoundaryKind) -> BTreeMap<Side, BoundaryKind> {
    Side::ALL.iter().map(|&s| (s, kind)).collect()
}

/// Uniform material in a reflecting box of `n^3` cubes of edge `h`.
pub fn infinite_medium(material: Material, n: usize, h: f64, quadrature: QuadratureConfig) -> Result<ProblemConfig> {
    material.validate()?;
    let id = material.id;
    Ok(ProblemConfig {
        schema: SCHEMA_VERSION,
        mesh: StructuredMesh::cube(n, h)?,
        quadrature,
        materials: vec![material],
        material_map: MaterialMapConfig::Uniform { material: id },
        bcs: uniform_bcs(BoundaryKind::Reflecting),
        stabilization: Stabilization::default(),
    })
}

/// One-group infinite medium with the given constants.
pub fn one_group_material(sigma_t: f64, sigma_s: f64, nu_sigma_f: f64) -> Material {
    Material {
        id: 0,
        sigma_t: vec![sigma_t],
        sigma_s: vec![vec![sigma_s]],
        nu_sigma_f: vec![nu_sigma_f],
        chi: vec![1.0],
    }
}

/// Purely absorbing medium with vacuum on every side.
pub fn pure_absorber(sigma_t: Vec<f64>, n: usize, h: f64, quadrature: QuadratureConfig) -> Result<ProblemConfig> {
    let g = sigma_t.len();
    let material = Material {
        id: 0,
        sigma_t,
        sigma_s: vec![vec![0.0; g]; g],
        nu_sigma_f: vec![0.0; g],
        chi: vec![0.0; g],
    };
    material.validate()?;
    Ok(ProblemConfig {
        schema: SCHEMA_VERSION,
        mesh: StructuredMesh::cube(n, h)?,
        quadrature,
        materials: vec![material],
        material_map: MaterialMapConfig::Uniform { material: 0 },
        bcs: uniform_bcs(BoundaryKind::Vacuum),
        stabilization: Stabilization::default(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MiniLatticeParams {
    pub pins: usize,
    pub cells_per_pin: usize,
    pub groups: usize,
    pub quadrature: QuadratureConfig,
    /// Pin radius as a fraction of the pitch.
    pub pin_radius: f64,
}

impl Default for MiniLatticeParams {
    fn default() -> Self {
        MiniLatticeParams {
            pins: 2,
            cells_per_pin: 4,
            groups: 2,
            quadrature: QuadratureConfig {
                kind: QuadratureKind::LevelSymmetric,
                order: 2,
            },
            pin_radius: 0.4,
        }
    }
}

pub const FUEL_ID: usize = 1;
pub const MODERATOR_ID: usize = 2;

/// Fuel-like and moderator-like materials with `groups` energy groups and
/// down-scattering only.
pub fn lattice_materials(groups: usize) -> Result<[Material; 2]> {
    if groups == 0 {
        return Err(Error::InvalidInput("mini lattice needs at least one group".into()));
    }
    let (fuel, moderator) = match groups {
        1 => (
            Material {
                id: FUEL_ID,
                sigma_t: vec![0.5],
                sigma_s: vec![vec![0.35]],
                nu_sigma_f: vec![0.2],
                chi: vec![1.0],
            },
            Material {
                id: MODERATOR_ID,
                sigma_t: vec![0.6],
                sigma_s: vec![vec![0.55]],
                nu_sigma_f: vec![0.0],
                chi: vec![0.0],
            },
        ),
        2 => (
            Material {
                id: FUEL_ID,
                sigma_t: vec![0.30, 0.90],
                sigma_s: vec![vec![0.26, 0.02], vec![0.0, 0.65]],
                nu_sigma_f: vec![0.008, 0.25],
                chi: vec![1.0, 0.0],
            },
            Material {
                id: MODERATOR_ID,
                sigma_t: vec![0.40, 1.50],
                sigma_s: vec![vec![0.34, 0.06], vec![0.0, 1.47]],
                nu_sigma_f: vec![0.0, 0.0],
                chi: vec![0.0, 0.0],
            },
        ),
        g => {
            let frac = |i: usize| i as f64 / (g - 1) as f64;
            let scatter = |sigma_t: &[f64], self_ratio: f64, down_ratio: f64| {
                let mut s = vec![vec![0.0; g]; g];
                for i in 0..g {
                    s[i][i] = self_ratio * sigma_t[i];
                    if i + 1 < g {
                        s[i][i + 1] = down_ratio * sigma_t[i];
                    }
                }
                s
            };
            let fuel_t: Vec<f64> = (0..g).map(|i| 0.3 + 0.6 * frac(i)).collect();
            let mod_t: Vec<f64> = (0..g).map(|i| 0.4 + 1.1 * frac(i)).collect();
            let mut chi = vec![0.0; g];
            chi[0] = 0.7;
            chi[1] = 0.3;
            (
                Material {
                    id: FUEL_ID,
                    sigma_s: scatter(&fuel_t, 0.72, 0.08),
                    nu_sigma_f: (0..g).map(|i| 0.01 + 0.24 * frac(i)).collect(),
                    sigma_t: fuel_t,
                    chi,
                },
                Material {
                    id: MODERATOR_ID,
                    sigma_s: scatter(&mod_t, 0.85, 0.13),
                    nu_sigma_f: vec![0.0; g],
                    sigma_t: mod_t,
                    chi: vec![0.0; g],
                },
            )
        }
    };
    fuel.validate()?;
    moderator.validate()?;
    Ok([fuel, moderator])
}

/// `pins x pins` pin cells of `cells_per_pin^2` elements each, one element
/// layer thick. Vacuum on x+ and y+, reflecting elsewhere.
pub fn mini_lattice(params: &MiniLatticeParams) -> Result<ProblemConfig> {
    if params.pins == 0 || params.cells_per_pin == 0 {
        return Err(Error::InvalidInput("mini lattice needs pins >= 1 and cells_per_pin >= 1".into()));
    }
    let n = params.pins * params.cells_per_pin;
    let h = PIN_PITCH / params.cells_per_pin as f64;
    let mut bcs = uniform_bcs(BoundaryKind::Reflecting);
    bcs.insert(Side::XMax, BoundaryKind::Vacuum);
    bcs.insert(Side::YMax, BoundaryKind::Vacuum);
    Ok(ProblemConfig {
        schema: SCHEMA_VERSION,
        mesh: StructuredMesh::new(n, n, 1, h, h, h)?,
        quadrature: params.quadrature,
        materials: lattice_materials(params.groups)?.to_vec(),
        material_map: MaterialMapConfig::PinLattice {
            pins: params.pins,
            pin_radius: params.pin_radius,
            fuel: FUEL_ID,
            moderator: MODERATOR_ID,
        },
        bcs,
        stabilization: Stabilization::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse() {
        assert_eq!("mini-lattice".parse::<GeneratorKind>().unwrap(), GeneratorKind::MiniLattice);
        assert!("cube".parse::<GeneratorKind>().is_err());
        assert_eq!(GeneratorKind::PureAbsorber.to_string(), "pure_absorber");
    }

    #[test]
    fn lattice_has_two_materials() {
        let params = MiniLatticeParams { pins: 4, cells_per_pin: 4, ..Default::default() };
        let cfg = mini_lattice(&params).unwrap();
        let spec = cfg.to_spec().unwrap();
        assert_eq!((spec.mesh.nx, spec.mesh.ny, spec.mesh.nz), (16, 16, 1));
        let mut ids = spec.material_map.clone();
        ids.sort();
        ids.dedup();
        assert_eq!(ids, vec![FUEL_ID, MODERATOR_ID]);
    }

    #[test]
    fn multigroup_materials_validate() {
        for g in 1..=7 {
            let [f, m] = lattice_materials(g).unwrap();
            assert!(f.is_fissile() && !m.is_fissile());
        }
    }
}
