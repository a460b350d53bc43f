//! Scalar-flux export as CSV or legacy VTK.

use std::fmt::Write as _;
use std::path::Path;

use masm_core::discretization::StructuredMesh;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FluxFormat {
    Csv,
    Vtk,
}

impl FluxFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FluxFormat::Csv => "csv",
            FluxFormat::Vtk => "vtk",
        }
    }
}

fn check(phi: &[f64], mesh: &StructuredMesh, n_groups: usize) -> CliResult<()> {
    if phi.len() != n_groups * mesh.n_vertices() {
        return Err(CliError::Usage(format!(
            "flux has {} values, expected {} groups x {} vertices",
            phi.len(),
            n_groups,
            mesh.n_vertices()
        )));
    }
    Ok(())
}

/// `x,y,z,group,phi`, one row per (vertex, group). `phi` is group-major.
pub fn flux_csv(phi: &[f64], mesh: &StructuredMesh, n_groups: usize) -> CliResult<String> {
    check(phi, mesh, n_groups)?;
    let n = mesh.n_vertices();
    let mut out = String::from("x,y,z,group,phi\n");
    for v in 0..n {
        let [x, y, z] = mesh.vertex_coords(v);
        for g in 0..n_groups {
            writeln!(out, "{x},{y},{z},{g},{}", phi[g * n + v]).unwrap();
        }
    }
    Ok(out)
}

/// Legacy ASCII structured grid with one `phi_g<g>` point field per group.
pub fn flux_vtk(phi: &[f64], mesh: &StructuredMesh, n_groups: usize) -> CliResult<String> {
    check(phi, mesh, n_groups)?;
    let n = mesh.n_vertices();
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\nscalar flux\nASCII\nDATASET STRUCTURED_GRID\n");
    writeln!(out, "DIMENSIONS {} {} {}", mesh.nx + 1, mesh.ny + 1, mesh.nz + 1).unwrap();
    writeln!(out, "POINTS {n} double").unwrap();
    for v in 0..n {
        let [x, y, z] = mesh.vertex_coords(v);
        writeln!(out, "{x} {y} {z}").unwrap();
    }
    writeln!(out, "POINT_DATA {n}").unwrap();
    for g in 0..n_groups {
        writeln!(out, "SCALARS phi_g{g} double 1\nLOOKUP_TABLE default").unwrap();
        for v in 0..n {
            writeln!(out, "{}", phi[g * n + v]).unwrap();
        }
    }
    Ok(out)
}

pub fn export_flux(phi: &[f64], mesh: &StructuredMesh, n_groups: usize, format: FluxFormat, path: &Path) -> CliResult<()> {
    let text = match format {
        FluxFormat::Csv => flux_csv(phi, mesh, n_groups)?,
        FluxFormat::Vtk => flux_vtk(phi, mesh, n_groups)?,
    };
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Reads a CSV written by [`flux_csv`] back into group-major order.
pub fn read_flux_csv(text: &str, n_vertices: usize, n_groups: usize) -> CliResult<Vec<f64>> {
    let mut lines = text.lines();
    if lines.next() != Some("x,y,z,group,phi") {
        return Err(CliError::Usage("missing flux CSV header".into()));
    }
    let mut phi = vec![0.0; n_vertices * n_groups];
    for (k, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let parsed = (fields.len() == 5)
            .then(|| Some((fields[3].parse::<usize>().ok()?, fields[4].parse::<f64>().ok()?)))
            .flatten();
        let (g, value) = parsed.ok_or_else(|| CliError::Usage(format!("bad flux CSV row {}", k + 2)))?;
        let v = k / n_groups;
        if g >= n_groups || v >= n_vertices {
            return Err(CliError::Usage(format!("flux CSV row {} out of range", k + 2)));
        }
        phi[g * n_vertices + v] = value;
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mesh = StructuredMesh::new(2, 1, 1, 0.5, 1.0, 1.0).unwrap();
        let phi: Vec<f64> = (0..2 * mesh.n_vertices()).map(|i| (i as f64).sqrt() / 3.0).collect();
        let text = flux_csv(&phi, &mesh, 2).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * mesh.n_vertices());
        assert_eq!(read_flux_csv(&text, mesh.n_vertices(), 2).unwrap(), phi);
    }

    #[test]
    fn vtk_has_one_field_per_group() {
        let mesh = StructuredMesh::cube(1, 1.0).unwrap();
        let text = flux_vtk(&vec![1.0; 16], &mesh, 2).unwrap();
        assert!(text.contains("DATASET STRUCTURED_GRID"));
        assert!(text.contains("SCALARS phi_g0") && text.contains("SCALARS phi_g1"));
        assert!(!text.contains("phi_g2"));
    }
}
