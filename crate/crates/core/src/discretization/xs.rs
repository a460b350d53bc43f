use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multigroup macroscopic data of one material. `sigma_s[from][to]` is the
/// isotropic scattering cross section from group `from` into group `to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub id: usize,
    pub sigma_t: Vec<f64>,
    pub sigma_s: Vec<Vec<f64>>,
    pub nu_sigma_f: Vec<f64>,
    pub chi: Vec<f64>,
}

impl Material {
    pub fn n_groups(&self) -> usize {
        self.sigma_t.len()
    }

    pub fn is_fissile(&self) -> bool {
        self.nu_sigma_f.iter().any(|&v| v > 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.n_groups();
        let bad = |what: String| Error::InvalidInput(format!("material {}: {what}", self.id));
        if g == 0 {
            return Err(bad("no energy groups".into()));
        }
        if self.nu_sigma_f.len() != g || self.chi.len() != g || self.sigma_s.len() != g {
            return Err(bad(format!("all cross-section arrays must have {g} groups")));
        }
        if self.sigma_s.iter().any(|row| row.len() != g) {
            return Err(bad(format!("sigma_s must be {g}x{g}")));
        }
        let all = self
            .sigma_t
            .iter()
            .chain(self.nu_sigma_f.iter())
            .chain(self.chi.iter())
            .chain(self.sigma_s.iter().flatten());
        for &v in all {
            if !(v.is_finite() && v >= 0.0) {
                return Err(bad("cross sections must be finite and non-negative".into()));
            }
        }
        if let Some(gz) = self.sigma_t.iter().position(|&s| s <= 0.0) {
            return Err(bad(format!("sigma_t must be > 0 (group {gz})")));
        }
        if self.is_fissile() {
            let total: f64 = self.chi.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(bad(format!("fission spectrum sums to {total}, expected 1")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionSet {
    pub n_groups: usize,
    pub materials: Vec<Material>,
}

impl CrossSectionSet {
    pub fn new(materials: Vec<Material>) -> Result<Self> {
        let n_groups = materials
            .first()
            .ok_or_else(|| Error::InvalidInput("at least one material is required".into()))?
            .n_groups();
        for m in &materials {
            m.validate()?;
            if m.n_groups() != n_groups {
                return Err(Error::InvalidInput(format!(
                    "material {} has {} groups, expected {n_groups}",
                    m.id,
                    m.n_groups()
                )));
            }
        }
        let mut ids: Vec<usize> = materials.iter().map(|m| m.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate material id".into()));
        }
        Ok(CrossSectionSet { n_groups, materials })
    }

    /// Position of material `id` in `materials`.
    pub fn position(&self, id: usize) -> Option<usize> {
        self.materials.iter().position(|m| m.id == id)
    }

    pub fn get(&self, id: usize) -> Option<&Material> {
        self.materials.iter().find(|m| m.id == id)
    }
}
