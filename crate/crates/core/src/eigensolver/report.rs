use serde::{Deserialize, Serialize};

/// Iteration counts and timings of one eigenvalue solve. Times are wall
/// seconds floored to milliseconds; PC setup and apply are part of KSP.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceReport {
    pub iter_newton: usize,
    /// GMRES iterations per Newton step.
    pub iter_gmres_avg: f64,
    pub time_pcsetup: f64,
    pub time_pcapply: f64,
    pub time_ksp: f64,
    pub time_total: f64,
    pub time_func: f64,
    pub time_jac: f64,
    pub time_ls: f64,
    pub time_mf: f64,
    pub final_k: f64,
    pub final_residual_norm: f64,
}

pub(crate) fn to_millis(seconds: f64) -> f64 {
    (seconds * 1000.0).floor() / 1000.0
}

impl ConvergenceReport {
    /// Zeroes every timing field.
    pub fn mask_timings(&mut self) {
        self.time_pcsetup = 0.0;
        self.time_pcapply = 0.0;
        self.time_ksp = 0.0;
        self.time_total = 0.0;
        self.time_func = 0.0;
        self.time_jac = 0.0;
        self.time_ls = 0.0;
        self.time_mf = 0.0;
    }

    /// `pcsetup + pcapply <= ksp <= total`, all non-negative.
    pub fn timing_containment_holds(&self) -> bool {
        let times = [
            self.time_pcsetup,
            self.time_pcapply,
            self.time_ksp,
            self.time_total,
            self.time_func,
            self.time_jac,
            self.time_ls,
            self.time_mf,
        ];
        times.iter().all(|t| *t >= 0.0)
            && self.time_pcsetup + self.time_pcapply <= self.time_ksp + 1e-9
            && self.time_ksp <= self.time_total
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_has_exact_field_names() {
        let v: serde_json::Value = serde_json::from_str(&ConvergenceReport::default().to_json()).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        let mut expected = vec![
            "iter_newton",
            "iter_gmres_avg",
            "time_pcsetup",
            "time_pcapply",
            "time_ksp",
            "time_total",
            "time_func",
            "time_jac",
            "time_ls",
            "time_mf",
            "final_k",
            "final_residual_norm",
        ];
        expected.sort();
        assert_eq!(keys, expected);
    }

    #[test]
    fn flooring_preserves_containment() {
        let (a, b) = (0.0014, 0.0027);
        assert!(to_millis(a) + to_millis(b) <= to_millis(a + b));
    }
}
