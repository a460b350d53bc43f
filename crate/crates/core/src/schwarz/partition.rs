use crate::discretization::StructuredMesh;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub np1: usize,
    pub np2: usize,
    pub element_part: Vec<usize>,
    pub vertex_owner: Vec<usize>,
}

impl Partition {
    pub fn n_parts(&self) -> usize {
        self.np1 * self.np2
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_parts()];
        for &p in &self.element_part {
            sizes[p] += 1;
        }
        sizes
    }
}

/// Recursive coordinate bisection of `ids` into `k` groups. Each cut runs
/// along the longest extent of the current point cloud (lowest axis on
/// ties) and splits `n` points at `n * floor(k/2) / k`.
pub fn rcb(points: &[[f64; 3]], ids: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k <= 1 {
        return vec![ids.to_vec()];
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for &i in ids {
        for a in 0..3 {
            lo[a] = lo[a].min(points[i][a]);
            hi[a] = hi[a].max(points[i][a]);
        }
    }
    let mut axis = 0;
    for a in 1..3 {
        if hi[a] - lo[a] > hi[axis] - lo[axis] {
            axis = a;
        }
    }
    let mut sorted = ids.to_vec();
    sorted.sort_by(|&x, &y| points[x][axis].total_cmp(&points[y][axis]).then(x.cmp(&y)));
    let k1 = k / 2;
    let cut = ids.len() * k1 / k;
    let mut parts = rcb(points, &sorted[..cut], k1);
    parts.extend(rcb(points, &sorted[cut..], k - k1));
    parts
}

/// Two-stage RCB: `np1` outer parts, each split into `np2` inner parts;
/// part id `outer * np2 + inner`. Vertex owners follow
/// [`assign_shared_vertices`].
pub fn hierarchical_partition(mesh: &StructuredMesh, np1: usize, np2: usize) -> Result<Partition> {
    let n = mesh.n_elements();
    let np = np1 * np2;
    if np1 == 0 || np2 == 0 || np > n {
        return Err(Error::InvalidInput(format!(
            "cannot split {n} elements into np1*np2 = {np1}*{np2} parts"
        )));
    }
    let centroids: Vec<[f64; 3]> = (0..n).map(|e| mesh.element_centroid(e)).collect();
    let all: Vec<usize> = (0..n).collect();
    let mut element_part = vec![0; n];
    for (outer, group) in rcb(&centroids, &all, np1).into_iter().enumerate() {
        for (inner, part) in rcb(&centroids, &group, np2).into_iter().enumerate() {
            for e in part {
                element_part[e] = outer * np2 + inner;
            }
        }
    }
    let vertex_owner = assign_shared_vertices(mesh, &element_part, np);
    Ok(Partition {
        np1,
        np2,
        element_part,
        vertex_owner,
    })
}

/// Owner of each vertex: the adjacent part holding most adjacent elements.
/// Ties go to the tied part with the fewest tie-broken vertices so far
/// (scanning vertices in index order), then to the lowest part id.
pub fn assign_shared_vertices(mesh: &StructuredMesh, element_part: &[usize], n_parts: usize) -> Vec<usize> {
    let adjacency = mesh.vertex_elements();
    let mut tie_wins = vec![0usize; n_parts];
    let mut counts: Vec<(usize, usize)> = Vec::with_capacity(8);
    adjacency
        .iter()
        .map(|elements| {
            counts.clear();
            for &e in elements {
                let p = element_part[e];
                match counts.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((p, 1)),
                }
            }
            counts.sort();
            let best = counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
            let tied: Vec<usize> = counts.iter().filter(|(_, c)| *c == best).map(|(p, _)| *p).collect();
            if tied.len() == 1 {
                return tied[0];
            }
            let owner = *tied.iter().min_by_key(|&&p| (tie_wins[p], p)).unwrap();
            tie_wins[owner] += 1;
            owner
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrants_on_square_mesh() {
        let mesh = StructuredMesh::new(8, 8, 1, 1.0, 1.0, 1.0).unwrap();
        let p = hierarchical_partition(&mesh, 2, 2).unwrap();
        assert_eq!(p.part_sizes(), vec![16; 4]);
        for e in 0..64 {
            let [i, j, _] = mesh.element_ijk(e);
            let expected = (i / 4) * 2 + (j / 4);
            assert_eq!(p.element_part[e], expected, "element ({i},{j})");
        }
    }

    #[test]
    fn degenerate_outer_stage_is_flat_rcb() {
        let mesh = StructuredMesh::new(6, 5, 2, 1.0, 0.7, 1.3).unwrap();
        let a = hierarchical_partition(&mesh, 1, 6).unwrap();
        let centroids: Vec<_> = (0..mesh.n_elements()).map(|e| mesh.element_centroid(e)).collect();
        let ids: Vec<usize> = (0..mesh.n_elements()).collect();
        for (p, part) in rcb(&centroids, &ids, 6).iter().enumerate() {
            for &e in part {
                assert_eq!(a.element_part[e], p);
            }
        }
    }

    #[test]
    fn too_many_parts_is_an_error() {
        let mesh = StructuredMesh::cube(2, 1.0).unwrap();
        assert!(hierarchical_partition(&mesh, 3, 3).is_err());
    }

    #[test]
    fn straight_interface_is_balanced() {
        let mesh = StructuredMesh::new(4, 4, 1, 1.0, 1.0, 1.0).unwrap();
        let p = hierarchical_partition(&mesh, 1, 2).unwrap();
        let interface: Vec<usize> = (0..mesh.n_vertices()).filter(|&v| mesh.vertex_ijk(v)[0] == 2).collect();
        let zeros = interface.iter().filter(|&&v| p.vertex_owner[v] == 0).count();
        let ones = interface.len() - zeros;
        assert!(zeros.abs_diff(ones) <= 1);
    }
}
