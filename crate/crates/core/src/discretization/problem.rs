use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{AngularQuadrature, CrossSectionSet, Side, StructuredMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Vacuum,
    Reflecting,
}

/// Boundary condition per side of the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryConditions {
    kinds: [BoundaryKind; 6],
}

impl BoundaryConditions {
    pub fn uniform(kind: BoundaryKind) -> Self {
        BoundaryConditions { kinds: [kind; 6] }
    }

    pub fn all_vacuum() -> Self {
        Self::uniform(BoundaryKind::Vacuum)
    }

    pub fn all_reflecting() -> Self {
        Self::uniform(BoundaryKind::Reflecting)
    }

    pub fn with(mut self, side: Side, kind: BoundaryKind) -> Self {
        self.kinds[side.index()] = kind;
        self
    }

    pub fn get(&self, side: Side) -> BoundaryKind {
        self.kinds[side.index()]
    }

    pub fn is_reflecting(&self, side: Side) -> bool {
        self.get(side) == BoundaryKind::Reflecting
    }
}

/// Parameters of the stabilization length `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stabilization {
    pub c: f64,
    pub varsigma: f64,
}

impl Default for Stabilization {
    fn default() -> Self {
        Stabilization { c: 1.0, varsigma: 0.5 }
    }
}

/// Everything needed to assemble the transport operators.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub mesh: StructuredMesh,
    pub quadrature: AngularQuadrature,
    pub xs: CrossSectionSet,
    /// Material id of each element.
    pub material_map: Vec<usize>,
    pub bcs: BoundaryConditions,
    pub stabilization: Stabilization,
}

impl ProblemSpec {
    pub fn new(
        mesh: StructuredMesh,
        quadrature: AngularQuadrature,
        xs: CrossSectionSet,
        material_map: Vec<usize>,
        bcs: BoundaryConditions,
        stabilization: Stabilization,
    ) -> Result<Self> {
        let spec = ProblemSpec {
            mesh,
            quadrature,
            xs,
            material_map,
            bcs,
            stabilization,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.mesh.validate()?;
        self.quadrature.validate()?;
        if self.material_map.len() != self.mesh.n_elements() {
            return Err(Error::dim(
                "material map",
                self.mesh.n_elements(),
                self.material_map.len(),
            ));
        }
        if let Some((e, id)) = self
            .material_map
            .iter()
            .enumerate()
            .find(|(_, &id)| self.xs.position(id).is_none())
        {
            return Err(Error::InvalidInput(format!(
                "element {e} references unknown material {id}"
            )));
        }
        let Stabilization { c, varsigma } = self.stabilization;
        if !(c > 0.0 && varsigma > 0.0) {
            return Err(Error::InvalidInput("stabilization c and varsigma must be > 0".into()));
        }
        for side in Side::ALL {
            if self.bcs.is_reflecting(side) {
                for d in 0..self.quadrature.len() {
                    if self.quadrature.mirror(d, side.axis()).is_none() {
                        return Err(Error::InvalidInput(format!(
                            "reflecting side {} needs a mirror partner for direction {d}",
                            side.name()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_groups(&self) -> usize {
        self.xs.n_groups
    }

    pub fn n_directions(&self) -> usize {
        self.quadrature.len()
    }

    /// Index into `xs.materials` for every element.
    pub fn element_materials(&self) -> Vec<usize> {
        self.material_map
            .iter()
            .map(|&id| self.xs.position(id).expect("validated material id"))
            .collect()
    }

    pub fn is_fissile(&self) -> bool {
        let mut used = vec![false; self.xs.materials.len()];
        for m in self.element_materials() {
            used[m] = true;
        }
        self.xs
            .materials
            .iter()
            .zip(used)
            .any(|(m, u)| u && m.is_fissile())
    }
}

/// Stabilization length for one element and group:
/// `1/(c Σ_t)` when `c h Σ_t >= ς`, otherwise `h/ς`.
pub fn tau_value(sigma_t: f64, h: f64, stab: Stabilization) -> Result<f64> {
    if !(sigma_t > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sigma_t = {sigma_t}: stabilization needs sigma_t > 0"
        )));
    }
    let Stabilization { c, varsigma } = stab;
    Ok(if c * h * sigma_t >= varsigma {
        1.0 / (c * sigma_t)
    } else {
        h / varsigma
    })
}

/// `τ` per element and group.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizedTau {
    pub n_groups: usize,
    values: Vec<f64>,
}

impl StabilizedTau {
    pub fn get(&self, element: usize, group: usize) -> f64 {
        self.values[element * self.n_groups + group]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn compute_tau(spec: &ProblemSpec) -> Result<StabilizedTau> {
    let h = spec.mesh.characteristic_length();
    let g = spec.n_groups();
    let mut values = Vec::with_capacity(spec.mesh.n_elements() * g);
    for m in spec.element_materials() {
        for &st in &spec.xs.materials[m].sigma_t {
            values.push(tau_value(st, h, spec.stabilization)?);
        }
    }
    Ok(StabilizedTau { n_groups: g, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_branches() {
        let s = Stabilization::default();
        assert_eq!(tau_value(1.0, 1.0, s).unwrap(), 1.0);
        assert_eq!(tau_value(0.1, 1.0, s).unwrap(), 2.0);
        assert_eq!(tau_value(10.0, 0.2, Stabilization { c: 2.0, varsigma: 0.5 }).unwrap(), 0.05);
        assert!(tau_value(0.0, 1.0, s).is_err());
    }

    #[test]
    fn tau_is_continuous_at_the_switch() {
        // c h Σ = 0.25 * 2 * 1 = ς: first branch, which coincides with h/ς
        let s = Stabilization { c: 0.25, varsigma: 0.5 };
        assert_eq!(tau_value(1.0, 2.0, s).unwrap(), 1.0 / 0.25);
        assert_eq!(tau_value(1.0, 2.0, s).unwrap(), 2.0 / 0.5);
    }
}
