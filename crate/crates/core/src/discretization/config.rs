//! JSON problem description.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "mesh": {"nx": 4, "ny": 4, "nz": 4, "hx": 1.0, "hy": 1.0, "hz": 1.0},
//!   "quadrature": {"kind": "level-symmetric", "order": 2},
//!   "materials": [{"id": 0, "sigma_t": [1.0], "sigma_s": [[0.5]], "nu_sigma_f": [0.6], "chi": [1.0]}],
//!   "material_map": {"kind": "uniform", "material": 0},
//!   "bcs": {"x-": "reflecting", "x+": "reflecting", "y-": "reflecting",
//!           "y+": "reflecting", "z-": "reflecting", "z+": "reflecting"},
//!   "stabilization": {"c": 1.0, "varsigma": 0.5}
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{
    build_quadrature, BoundaryConditions, BoundaryKind, CrossSectionSet, Material, ProblemSpec,
    QuadratureKind, Side, Stabilization, StructuredMesh,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub kind: QuadratureKind,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialMapConfig {
    Uniform {
        material: usize,
    },
    /// Square lattice of `pins x pins` cylindrical pins voxelized by element
    /// centroid; `pin_radius` is a fraction of the pin pitch.
    PinLattice {
        pins: usize,
        pin_radius: f64,
        fuel: usize,
        moderator: usize,
    },
    Explicit {
        elements: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub schema: u32,
    pub mesh: StructuredMesh,
    pub quadrature: QuadratureConfig,
    pub materials: Vec<Material>,
    pub material_map: MaterialMapConfig,
    pub bcs: BTreeMap<Side, BoundaryKind>,
    #[serde(default)]
    pub stabilization: Stabilization,
}

fn config_error(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

impl ProblemConfig {
    /// Parses JSON; errors carry the path of the offending key.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ProblemConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            config_error(&path, e.into_inner().to_string())
        })?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(config_error(
                "schema",
                format!("unsupported schema {}, expected {SCHEMA_VERSION}", cfg.schema),
            ));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn element_materials(&self) -> Result<Vec<usize>> {
        let mesh = &self.mesh;
        match &self.material_map {
            MaterialMapConfig::Uniform { material } => Ok(vec![*material; mesh.n_elements()]),
            MaterialMapConfig::Explicit { elements } => {
                if elements.len() != mesh.n_elements() {
                    return Err(config_error(
                        "material_map.elements",
                        format!("expected {} entries, got {}", mesh.n_elements(), elements.len()),
                    ));
                }
                Ok(elements.clone())
            }
            MaterialMapConfig::PinLattice {
                pins,
                pin_radius,
                fuel,
                moderator,
            } => {
                if *pins == 0 {
                    return Err(config_error("material_map.pins", "must be >= 1"));
                }
                if !(*pin_radius > 0.0 && *pin_radius < 0.5) {
                    return Err(config_error("material_map.pin_radius", "must lie in (0, 0.5)"));
                }
                Ok(pin_lattice_map(mesh, *pins, *pin_radius, *fuel, *moderator))
            }
        }
    }

    pub fn boundary_conditions(&self) -> Result<BoundaryConditions> {
        let mut bcs = BoundaryConditions::all_vacuum();
        for side in Side::ALL {
            let kind = self
                .bcs
                .get(&side)
                .ok_or_else(|| config_error(&format!("bcs.{}", side.name()), "missing boundary condition"))?;
            bcs = bcs.with(side, *kind);
        }
        Ok(bcs)
    }

    pub fn to_spec(&self) -> Result<ProblemSpec> {
        self.mesh.validate().map_err(|e| config_error("mesh", e.to_string()))?;
        let quadrature = build_quadrature(self.quadrature.kind, self.quadrature.order)
            .map_err(|e| config_error("quadrature", e.to_string()))?;
        let xs = CrossSectionSet::new(self.materials.clone())
            .map_err(|e| config_error("materials", e.to_string()))?;
        let material_map = self.element_materials()?;
        let bcs = self.boundary_conditions()?;
        ProblemSpec::new(self.mesh, quadrature, xs, material_map, bcs, self.stabilization)
    }
}

/// Material id per element: `fuel` when the element centroid lies inside
/// the pin of its lattice cell, `moderator` otherwise.
pub fn pin_lattice_map(mesh: &StructuredMesh, pins: usize, radius_fraction: f64, fuel: usize, moderator: usize) -> Vec<usize> {
    let [lx, ly, _] = mesh.extent();
    let (px, py) = (lx / pins as f64, ly / pins as f64);
    (0..mesh.n_elements())
        .map(|e| {
            let [x, y, _] = mesh.element_centroid(e);
            let (cx, cy) = ((x / px).floor().min(pins as f64 - 1.0), (y / py).floor().min(pins as f64 - 1.0));
            let dx = (x - (cx + 0.5) * px) / px;
            let dy = (y - (cy + 0.5) * py) / py;
            if (dx * dx + dy * dy).sqrt() < radius_fraction {
                fuel
            } else {
                moderator
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "schema": 1,
        "mesh": {"nx": 2, "ny": 2, "nz": 1, "hx": 1.0, "hy": 1.0, "hz": 1.0},
        "quadrature": {"kind": "level-symmetric", "order": 2},
        "materials": [{"id": 3, "sigma_t": [1.0], "sigma_s": [[0.5]], "nu_sigma_f": [0.6], "chi": [1.0]}],
        "material_map": {"kind": "uniform", "material": 3},
        "bcs": {"x-": "reflecting", "x+": "vacuum", "y-": "reflecting",
                "y+": "vacuum", "z-": "reflecting", "z+": "reflecting"}
    }"#;

    #[test]
    fn parses_and_builds() {
        let cfg = ProblemConfig::from_json(SAMPLE).unwrap();
        assert_eq!(cfg.stabilization, Stabilization::default());
        let spec = cfg.to_spec().unwrap();
        assert_eq!(spec.material_map, vec![3; 4]);
        assert!(spec.bcs.is_reflecting(Side::XMin));
        assert!(!spec.bcs.is_reflecting(Side::YMax));
        let again = ProblemConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn unknown_key_is_named() {
        let bad = SAMPLE.replace("\"hz\": 1.0", "\"hz\": 1.0, \"hw\": 2.0");
        let err = ProblemConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("mesh") && err.contains("hw"), "{err}");
    }

    #[test]
    fn wrong_type_is_located() {
        let bad = SAMPLE.replace("\"order\": 2", "\"order\": \"two\"");
        let err = ProblemConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("quadrature.order"), "{err}");
    }

    #[test]
    fn missing_side_is_named() {
        let bad = SAMPLE.replace("\"z+\": \"reflecting\"", "\"z-\": \"reflecting\"");
        let bad = bad.replace("\"z-\": \"reflecting\", \"z-\"", "\"z-\"");
        let err = ProblemConfig::from_json(&bad).unwrap().to_spec().unwrap_err().to_string();
        assert!(err.contains("bcs.z+"), "{err}");
    }

    #[test]
    fn pin_lattice_places_fuel_at_pin_centres() {
        let mesh = StructuredMesh::new(8, 8, 1, 0.5, 0.5, 1.0).unwrap();
        let map = pin_lattice_map(&mesh, 2, 0.3, 1, 2);
        // centre element of pin (0,0) sits at x,y in [1.0, 1.5)... check corners are moderator
        assert_eq!(map[mesh.element_index(0, 0, 0)], 2);
        assert_eq!(map[mesh.element_index(1, 1, 0)], 1);
        assert_eq!(map[mesh.element_index(2, 2, 0)], 1);
        assert!(map.contains(&1) && map.contains(&2));
    }
}
