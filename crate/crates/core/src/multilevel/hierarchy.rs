use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::Preconditioner;
use crate::schwarz::{RasPreconditioner, SchwarzOptions};
use crate::sparse::{block_view, triple_product, BlockLayout, ComponentLu, CsrMatrix};

use super::aggregation::{aggregate, build_sub_interpolation, extend_interpolation, Aggregation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoarseningMode {
    /// Coarsen the full matrix.
    Masm,
    /// Coarsen one diagonal block and replicate its interpolation.
    MasmSub,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoarsenOptions {
    pub theta: f64,
    pub max_levels: usize,
    /// Stop once the matrix handed to the coarsener has at most this many rows.
    pub coarsest_size: usize,
    pub pre_its: usize,
    pub post_its: usize,
    /// Diagonal block coarsened by MASM_sub.
    pub coarsen_block: usize,
}

impl Default for CoarsenOptions {
    fn default() -> Self {
        CoarsenOptions {
            theta: 0.08,
            max_levels: 10,
            coarsest_size: 200,
            pre_its: 1,
            post_its: 1,
            coarsen_block: 0,
        }
    }
}

impl CoarsenOptions {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.theta) {
            return Err(Error::InvalidInput(format!("theta must lie in [0, 1), got {}", self.theta)));
        }
        if self.max_levels == 0 || self.coarsest_size == 0 {
            return Err(Error::InvalidInput("max levels and coarsest size must be >= 1".into()));
        }
        Ok(())
    }
}

/// Partition data for the level smoothers: the owning subdomain of every
/// finest-level unknown.
#[derive(Debug, Clone)]
pub struct SmootherSetup {
    pub owner: Vec<usize>,
    pub n_parts: usize,
    pub schwarz: SchwarzOptions,
}

impl SmootherSetup {
    /// One subdomain covering everything.
    pub fn single(dim: usize, schwarz: SchwarzOptions) -> Self {
        SmootherSetup {
            owner: vec![0; dim],
            n_parts: 1,
            schwarz,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Level {
    pub p: CsrMatrix,
    /// Block layout; MASM_sub keeps one on every level, MASM only on the finest.
    pub layout: Option<BlockLayout>,
    /// Block id of every unknown.
    pub block_of: Vec<usize>,
    /// Subdomain owner of every unknown.
    pub owner: Vec<usize>,
    /// Interpolation to the next coarser level.
    pub interp: Option<CsrMatrix>,
    /// Sub-interpolation `Ĩ` (MASM_sub only).
    pub sub_interp: Option<CsrMatrix>,
    pub aggregation: Option<Aggregation>,
    /// Rows handed to the coarsener on this level.
    pub coarsened_rows: usize,
    smoother: Option<RasPreconditioner>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSummary {
    pub level: usize,
    pub rows: usize,
    pub nnz: usize,
    pub n_blocks: usize,
    pub coarsened_rows: usize,
}

#[derive(Debug, Clone)]
pub struct MultilevelHierarchy {
    pub mode: CoarseningMode,
    pub levels: Vec<Level>,
    pub options: CoarsenOptions,
    coarse_lu: ComponentLu,
}

fn plurality(members: &[Vec<usize>], fine_owner: &[usize]) -> Vec<usize> {
    members
        .iter()
        .map(|m| {
            let mut owners: Vec<usize> = m.iter().map(|&i| fine_owner[i]).collect();
            owners.sort_unstable();
            let mut best = (0, usize::MAX);
            let mut k = 0;
            while k < owners.len() {
                let run = owners[k..].iter().take_while(|&&o| o == owners[k]).count();
                if run > best.0 {
                    best = (run, owners[k]);
                }
                k += run;
            }
            best.1
        })
        .collect()
}

fn count_distinct(ids: &[usize]) -> usize {
    let mut v = ids.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn make_level(
    p: CsrMatrix,
    layout: Option<BlockLayout>,
    block_of: Vec<usize>,
    owner: Vec<usize>,
) -> Level {
    Level {
        p,
        layout,
        block_of,
        owner,
        interp: None,
        sub_interp: None,
        aggregation: None,
        coarsened_rows: 0,
        smoother: None,
    }
}

fn finest_level(p: &CsrMatrix, layout: &BlockLayout, smoother: &SmootherSetup) -> Result<Level> {
    if !p.is_square() || p.n_rows() != layout.dim() {
        return Err(Error::dim("hierarchy finest matrix", layout.dim(), p.n_rows()));
    }
    if smoother.owner.len() != p.n_rows() {
        return Err(Error::dim("smoother owner map", p.n_rows(), smoother.owner.len()));
    }
    let block_of = (0..layout.dim()).map(|i| i / layout.n_space).collect();
    Ok(make_level(p.clone(), Some(*layout), block_of, smoother.owner.clone()))
}

fn finish(
    mode: CoarseningMode,
    mut levels: Vec<Level>,
    options: &CoarsenOptions,
    smoother: &SmootherSetup,
) -> Result<MultilevelHierarchy> {
    let n = levels.len();
    for (l, level) in levels.iter_mut().enumerate().take(n - 1) {
        level.smoother = Some(RasPreconditioner::from_owner(&level.p, &level.owner, smoother.n_parts, &smoother.schwarz).map_err(
            |e| match e {
                Error::Singular(msg) => Error::Singular(format!("level {l} {msg}")),
                other => other,
            },
        )?);
    }
    let coarse_lu = ComponentLu::factor(&levels[n - 1].p, &format!("coarsest level {}", n - 1))?;
    Ok(MultilevelHierarchy {
        mode,
        levels,
        options: *options,
        coarse_lu,
    })
}

/// Subspace-based coarsening: aggregates one diagonal block per level and
/// extends its interpolation to every block.
pub fn setup_masm_sub(
    p: &CsrMatrix,
    layout: &BlockLayout,
    options: &CoarsenOptions,
    smoother: &SmootherSetup,
) -> Result<MultilevelHierarchy> {
    options.validate()?;
    if options.coarsen_block >= layout.n_blocks() {
        return Err(Error::IndexOutOfRange {
            index: options.coarsen_block,
            dim: layout.n_blocks(),
        });
    }
    let mut levels = vec![finest_level(p, layout, smoother)?];
    while levels.len() < options.max_levels {
        let cur = levels.last_mut().unwrap();
        let fine_layout = cur.layout.expect("masm_sub levels keep their layout");
        let sub = block_view(&cur.p, &fine_layout, options.coarsen_block)?;
        if sub.n_rows() <= options.coarsest_size {
            break;
        }
        cur.coarsened_rows = sub.n_rows();
        let agg = aggregate(&sub, options.theta)?;
        if agg.n_agg >= sub.n_rows() {
            break;
        }
        let coarse_layout = fine_layout.with_space(agg.n_agg);
        let sub_interp = build_sub_interpolation(&agg);
        let interp = extend_interpolation(&sub_interp, &fine_layout, &coarse_layout)?;
        let coarse_p = triple_product(&interp, &cur.p)?;
        let space_owner = plurality(&agg.members(), &cur.owner[..fine_layout.n_space]);
        let owner = crate::schwarz::unknown_owner(&space_owner, &coarse_layout)?;
        let block_of = (0..coarse_layout.dim()).map(|i| i / coarse_layout.n_space).collect();
        cur.interp = Some(interp);
        cur.sub_interp = Some(sub_interp);
        cur.aggregation = Some(agg);
        levels.push(make_level(coarse_p, Some(coarse_layout), block_of, owner));
    }
    finish(CoarseningMode::MasmSub, levels, options, smoother)
}

/// Traditional coarsening of the full matrix on every level.
pub fn setup_masm(
    p: &CsrMatrix,
    layout: &BlockLayout,
    options: &CoarsenOptions,
    smoother: &SmootherSetup,
) -> Result<MultilevelHierarchy> {
    options.validate()?;
    let mut levels = vec![finest_level(p, layout, smoother)?];
    while levels.len() < options.max_levels {
        let cur = levels.last_mut().unwrap();
        if cur.p.n_rows() <= options.coarsest_size {
            break;
        }
        cur.coarsened_rows = cur.p.n_rows();
        let agg = aggregate(&cur.p, options.theta)?;
        if agg.n_agg >= cur.p.n_rows() {
            break;
        }
        let interp = build_sub_interpolation(&agg);
        let coarse_p = triple_product(&interp, &cur.p)?;
        let members = agg.members();
        let owner = plurality(&members, &cur.owner);
        let block_of = plurality(&members, &cur.block_of);
        cur.interp = Some(interp);
        cur.aggregation = Some(agg);
        levels.push(make_level(coarse_p, None, block_of, owner));
    }
    finish(CoarseningMode::Masm, levels, options, smoother)
}

impl MultilevelHierarchy {
    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    /// Rows handed to the coarsener on the finest level.
    pub fn coarsened_rows(&self) -> usize {
        self.levels[0].coarsened_rows
    }

    pub fn summary(&self) -> Vec<LevelSummary> {
        self.levels
            .iter()
            .enumerate()
            .map(|(l, level)| LevelSummary {
                level: l,
                rows: level.p.n_rows(),
                nnz: level.p.nnz(),
                n_blocks: count_distinct(&level.block_of),
                coarsened_rows: level.coarsened_rows,
            })
            .collect()
    }

    fn richardson(&self, l: usize, r: &[f64], e: &mut [f64], its: usize) -> Result<()> {
        let level = &self.levels[l];
        let smoother = level.smoother.as_ref().expect("non-coarsest levels have smoothers");
        for _ in 0..its {
            let pe = level.p.spmv(e)?;
            let res: Vec<f64> = r.iter().zip(&pe).map(|(a, b)| a - b).collect();
            let de = smoother.apply(&res)?;
            for (ei, d) in e.iter_mut().zip(de) {
                *ei += d;
            }
        }
        Ok(())
    }

    /// One V-cycle on level `l` (0 = finest) from a zero initial guess.
    pub fn v_cycle(&self, l: usize, r: &[f64]) -> Result<Vec<f64>> {
        let n_levels = self.levels.len();
        if l >= n_levels {
            return Err(Error::IndexOutOfRange { index: l, dim: n_levels });
        }
        let level = &self.levels[l];
        if r.len() != level.p.n_rows() {
            return Err(Error::dim("v-cycle residual", level.p.n_rows(), r.len()));
        }
        if l == n_levels - 1 {
            return self.coarse_lu.solve(r);
        }
        let interp = level.interp.as_ref().expect("non-coarsest levels interpolate");
        let mut e = vec![0.0; r.len()];
        self.richardson(l, r, &mut e, self.options.pre_its)?;
        let pe = level.p.spmv(&e)?;
        let res: Vec<f64> = r.iter().zip(&pe).map(|(a, b)| a - b).collect();
        let rc = interp.spmv_transpose(&res)?;
        let zc = self.v_cycle(l + 1, &rc)?;
        let corr = interp.spmv(&zc)?;
        for (ei, c) in e.iter_mut().zip(corr) {
            *ei += c;
        }
        self.richardson(l, r, &mut e, self.options.post_its)?;
        Ok(e)
    }
}

impl Preconditioner for MultilevelHierarchy {
    fn dim(&self) -> usize {
        self.levels[0].p.n_rows()
    }

    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        self.v_cycle(0, r)
    }
}
