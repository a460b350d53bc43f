//! Trilinear reference-element matrices on an `hx x hy x hz` box,
//! integrated with 2x2x2 Gauss points.

use super::mesh::{face_local_nodes, Side};

pub type Mat8 = [[f64; 8]; 8];
pub type Mat4 = [[f64; 4]; 4];

#[derive(Debug, Clone)]
pub struct ElementMatrices {
    /// `∫ φ_i φ_j`
    pub mass: Mat8,
    /// `grad_test[a][i][j] = ∫ ∂_a φ_i φ_j`
    pub grad_test: [Mat8; 3],
    /// `stiffness[a][b][i][j] = ∫ ∂_a φ_i ∂_b φ_j`
    pub stiffness: [[Mat8; 3]; 3],
    /// Face mass per side (indexed by `Side::index`), rows/cols follow
    /// `face_local_nodes(side)`.
    pub face_mass: [Mat4; 6],
}

fn gauss_2pt() -> [(f64, f64); 2] {
    let d = 0.5 / 3f64.sqrt();
    [(0.5 - d, 0.5), (0.5 + d, 0.5)]
}

/// 1D linear shape function `bit` at reference coordinate `t` in [0, 1].
fn lin(bit: usize, t: f64) -> f64 {
    if bit == 0 {
        1.0 - t
    } else {
        t
    }
}

fn dlin(bit: usize) -> f64 {
    if bit == 0 {
        -1.0
    } else {
        1.0
    }
}

fn bits(a: usize) -> [usize; 3] {
    [a & 1, (a >> 1) & 1, (a >> 2) & 1]
}

impl ElementMatrices {
    pub fn new(h: [f64; 3]) -> Self {
        let mut mass = [[0.0; 8]; 8];
        let mut grad_test = [[[0.0; 8]; 8]; 3];
        let mut stiffness = [[[[0.0; 8]; 8]; 3]; 3];
        let vol = h[0] * h[1] * h[2];
        let gp = gauss_2pt();

        for &(tx, wx) in &gp {
            for &(ty, wy) in &gp {
                for &(tz, wz) in &gp {
                    let t = [tx, ty, tz];
                    let w = wx * wy * wz * vol;
                    let mut phi = [0.0; 8];
                    let mut grad = [[0.0; 3]; 8];
                    for a in 0..8 {
                        let b = bits(a);
                        let l = [lin(b[0], t[0]), lin(b[1], t[1]), lin(b[2], t[2])];
                        phi[a] = l[0] * l[1] * l[2];
                        grad[a] = [
                            dlin(b[0]) / h[0] * l[1] * l[2],
                            dlin(b[1]) / h[1] * l[0] * l[2],
                            dlin(b[2]) / h[2] * l[0] * l[1],
                        ];
                    }
                    for i in 0..8 {
                        for j in 0..8 {
                            mass[i][j] += w * phi[i] * phi[j];
                            for a in 0..3 {
                                grad_test[a][i][j] += w * grad[i][a] * phi[j];
                                for b in 0..3 {
                                    stiffness[a][b][i][j] += w * grad[i][a] * grad[j][b];
                                }
                            }
                        }
                    }
                }
            }
        }

        let mut face_mass = [[[0.0; 4]; 4]; 6];
        for side in Side::ALL {
            let axis = side.axis();
            let others: Vec<usize> = (0..3).filter(|&c| c != axis).collect();
            let area = h[others[0]] * h[others[1]];
            let fixed = if side.is_max() { 1.0 } else { 0.0 };
            let nodes = face_local_nodes(side);
            for &(s, ws) in &gp {
                for &(u, wu) in &gp {
                    let mut t = [0.0; 3];
                    t[axis] = fixed;
                    t[others[0]] = s;
                    t[others[1]] = u;
                    let w = ws * wu * area;
                    let phi: [f64; 4] = nodes.map(|a| {
                        let b = bits(a);
                        lin(b[0], t[0]) * lin(b[1], t[1]) * lin(b[2], t[2])
                    });
                    for p in 0..4 {
                        for q in 0..4 {
                            face_mass[side.index()][p][q] += w * phi[p] * phi[q];
                        }
                    }
                }
            }
        }

        ElementMatrices {
            mass,
            grad_test,
            stiffness,
            face_mass,
        }
    }

    /// `∫ (Ω·∇φ_i)(Ω·∇φ_j)`
    pub fn streaming_stiffness(&self, omega: [f64; 3]) -> Mat8 {
        let mut k = [[0.0; 8]; 8];
        for a in 0..3 {
            for b in 0..3 {
                let c = omega[a] * omega[b];
                if c == 0.0 {
                    continue;
                }
                for i in 0..8 {
                    for j in 0..8 {
                        k[i][j] += c * self.stiffness[a][b][i][j];
                    }
                }
            }
        }
        k
    }

    /// `∫ (Ω·∇φ_i) φ_j`
    pub fn streaming_test(&self, omega: [f64; 3]) -> Mat8 {
        let mut g = [[0.0; 8]; 8];
        for a in 0..3 {
            for i in 0..8 {
                for j in 0..8 {
                    g[i][j] += omega[a] * self.grad_test[a][i][j];
                }
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Closed-form 1D factors on [0, h]: mass, test-derivative ∫ φ_i' φ_j,
    // stiffness ∫ φ_i' φ_j'.
    fn m1(h: f64, i: usize, j: usize) -> f64 {
        if i == j {
            h / 3.0
        } else {
            h / 6.0
        }
    }
    fn d1(i: usize) -> f64 {
        if i == 0 {
            -0.5
        } else {
            0.5
        }
    }
    fn k1(h: f64, i: usize, j: usize) -> f64 {
        if i == j {
            1.0 / h
        } else {
            -1.0 / h
        }
    }

    #[test]
    fn matches_tensor_product_closed_forms() {
        let h = [0.7, 1.3, 0.4];
        let e = ElementMatrices::new(h);
        for i in 0..8 {
            for j in 0..8 {
                let (bi, bj) = (bits(i), bits(j));
                let mass: f64 = (0..3).map(|c| m1(h[c], bi[c], bj[c])).product();
                assert!((e.mass[i][j] - mass).abs() < 1e-15);
                for a in 0..3 {
                    let g: f64 = (0..3)
                        .map(|c| if c == a { d1(bi[c]) } else { m1(h[c], bi[c], bj[c]) })
                        .product();
                    assert!((e.grad_test[a][i][j] - g).abs() < 1e-15);
                    for b in 0..3 {
                        let k: f64 = if a == b {
                            (0..3)
                                .map(|c| if c == a { k1(h[c], bi[c], bj[c]) } else { m1(h[c], bi[c], bj[c]) })
                                .product()
                        } else {
                            (0..3)
                                .map(|c| {
                                    if c == a {
                                        d1(bi[c])
                                    } else if c == b {
                                        d1(bj[c])
                                    } else {
                                        m1(h[c], bi[c], bj[c])
                                    }
                                })
                                .product()
                        };
                        assert!(
                            (e.stiffness[a][b][i][j] - k).abs() < 1e-14,
                            "K[{a}][{b}][{i}][{j}] = {} vs {k}",
                            e.stiffness[a][b][i][j]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn face_mass_sums_to_area() {
        let e = ElementMatrices::new([1.0, 2.0, 3.0]);
        for side in Side::ALL {
            let total: f64 = e.face_mass[side.index()].iter().flatten().sum();
            let area = match side.axis() {
                0 => 6.0,
                1 => 3.0,
                _ => 2.0,
            };
            assert!((total - area).abs() < 1e-14);
        }
    }
}
