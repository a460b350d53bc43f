use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the six axis-aligned sides of the box domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "x-")]
    XMin,
    #[serde(rename = "x+")]
    XMax,
    #[serde(rename = "y-")]
    YMin,
    #[serde(rename = "y+")]
    YMax,
    #[serde(rename = "z-")]
    ZMin,
    #[serde(rename = "z+")]
    ZMax,
}

impl Side {
    pub const ALL: [Side; 6] = [Side::XMin, Side::XMax, Side::YMin, Side::YMax, Side::ZMin, Side::ZMax];

    pub fn axis(self) -> usize {
        match self {
            Side::XMin | Side::XMax => 0,
            Side::YMin | Side::YMax => 1,
            Side::ZMin | Side::ZMax => 2,
        }
    }

    pub fn is_max(self) -> bool {
        matches!(self, Side::XMax | Side::YMax | Side::ZMax)
    }

    /// Outward unit normal.
    pub fn normal(self) -> [f64; 3] {
        let mut n = [0.0; 3];
        n[self.axis()] = if self.is_max() { 1.0 } else { -1.0 };
        n
    }

    pub fn index(self) -> usize {
        2 * self.axis() + usize::from(self.is_max())
    }

    pub fn name(self) -> &'static str {
        ["x-", "x+", "y-", "y+", "z-", "z+"][self.index()]
    }
}

/// Uniform structured hexahedral mesh of the box
/// `[0, nx*hx] x [0, ny*hy] x [0, nz*hz]`. Vertices and elements are
/// numbered with x fastest, then y, then z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredMesh {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
}

/// A boundary face: the owning element and its four vertices in the
/// element-local order of the matching side.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryFace {
    pub element: usize,
    pub vertices: [usize; 4],
}

impl StructuredMesh {
    pub fn new(nx: usize, ny: usize, nz: usize, hx: f64, hy: f64, hz: f64) -> Result<Self> {
        let m = StructuredMesh { nx, ny, nz, hx, hy, hz };
        m.validate()?;
        Ok(m)
    }

    /// Cube of `n^3` elements with edge `h`.
    pub fn cube(n: usize, h: f64) -> Result<Self> {
        Self::new(n, n, n, h, h, h)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 || self.nz == 0 {
            return Err(Error::InvalidInput("mesh element counts must be >= 1".into()));
        }
        let positive = |h: f64| h.is_finite() && h > 0.0;
        if !(positive(self.hx) && positive(self.hy) && positive(self.hz)) {
            return Err(Error::InvalidInput("mesh edge lengths must be > 0".into()));
        }
        Ok(())
    }

    pub fn n_elements(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn n_vertices(&self) -> usize {
        (self.nx + 1) * (self.ny + 1) * (self.nz + 1)
    }

    pub fn vertex_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + (self.nx + 1) * (j + (self.ny + 1) * k)
    }

    pub fn vertex_ijk(&self, v: usize) -> [usize; 3] {
        let i = v % (self.nx + 1);
        let r = v / (self.nx + 1);
        [i, r % (self.ny + 1), r / (self.ny + 1)]
    }

    pub fn vertex_coords(&self, v: usize) -> [f64; 3] {
        let [i, j, k] = self.vertex_ijk(v);
        [i as f64 * self.hx, j as f64 * self.hy, k as f64 * self.hz]
    }

    pub fn element_ijk(&self, e: usize) -> [usize; 3] {
        let i = e % self.nx;
        let r = e / self.nx;
        [i, r % self.ny, r / self.ny]
    }

    pub fn element_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    /// Vertices of element `e`; local node `a` sits at offset
    /// `(a & 1, (a >> 1) & 1, (a >> 2) & 1)`.
    pub fn element_vertices(&self, e: usize) -> [usize; 8] {
        let [i, j, k] = self.element_ijk(e);
        std::array::from_fn(|a| self.vertex_index(i + (a & 1), j + ((a >> 1) & 1), k + ((a >> 2) & 1)))
    }

    pub fn element_centroid(&self, e: usize) -> [f64; 3] {
        let [i, j, k] = self.element_ijk(e);
        [
            (i as f64 + 0.5) * self.hx,
            (j as f64 + 0.5) * self.hy,
            (k as f64 + 0.5) * self.hz,
        ]
    }

    /// Characteristic element length used by the stabilization parameter.
    pub fn characteristic_length(&self) -> f64 {
        self.hx.min(self.hy).min(self.hz)
    }

    /// Extent of the domain along each axis.
    pub fn extent(&self) -> [f64; 3] {
        [
            self.nx as f64 * self.hx,
            self.ny as f64 * self.hy,
            self.nz as f64 * self.hz,
        ]
    }

    /// Boundary faces on `side`.
    pub fn boundary_faces(&self, side: Side) -> Vec<BoundaryFace> {
        let local = face_local_nodes(side);
        let (n, fixed) = ([self.nx, self.ny, self.nz], if side.is_max() { None } else { Some(0) });
        let axis = side.axis();
        let layer = fixed.unwrap_or(n[axis] - 1);
        let mut faces = Vec::new();
        for k in 0..self.nz {
            for j in 0..self.ny {
                for i in 0..self.nx {
                    if [i, j, k][axis] != layer {
                        continue;
                    }
                    let e = self.element_index(i, j, k);
                    let ev = self.element_vertices(e);
                    faces.push(BoundaryFace {
                        element: e,
                        vertices: local.map(|a| ev[a]),
                    });
                }
            }
        }
        faces
    }

    /// Element lists per vertex.
    pub fn vertex_elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_vertices()];
        for e in 0..self.n_elements() {
            for v in self.element_vertices(e) {
                out[v].push(e);
            }
        }
        out
    }
}

/// Element-local node numbers lying on `side`.
pub fn face_local_nodes(side: Side) -> [usize; 4] {
    let axis = side.axis();
    let bit = usize::from(side.is_max());
    let mut out = [0; 4];
    let mut k = 0;
    for a in 0..8 {
        if (a >> axis) & 1 == bit {
            out[k] = a;
            k += 1;
        }
    }
    out
}
