//! Residual evaluators for the structure equations of a Lagrangian surface.
//!
//! Each identity yields an absolute defect and a scale per point. The
//! relative residual is `abs / (1 + scale)`. Reports keep the maximum of
//! both over a point set together with the point attaining the relative
//! maximum.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{MetricStage, PointGeometry, LAGRANGIAN_TOL};
use crate::jets::DEFAULT_ORDER;
use crate::surface::{ParamPoint, SurfaceAtlas};
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    SymmetryA,
    TracefreeCheckA,
    TracefreeT,
    SymmetricT,
    Codazzi,
    Gauss,
    Ricci,
    Prop31Norm,
    Prop31Div,
    KLagrangian,
    Bochner,
    ElDual,
    LagrangianDefect,
}

impl Identity {
    pub const CHEAP: [Identity; 11] = [
        Identity::SymmetryA,
        Identity::TracefreeCheckA,
        Identity::TracefreeT,
        Identity::SymmetricT,
        Identity::Codazzi,
        Identity::Gauss,
        Identity::Ricci,
        Identity::Prop31Norm,
        Identity::Prop31Div,
        Identity::KLagrangian,
        Identity::LagrangianDefect,
    ];

    pub const ALL: [Identity; 13] = [
        Identity::SymmetryA,
        Identity::TracefreeCheckA,
        Identity::TracefreeT,
        Identity::SymmetricT,
        Identity::Codazzi,
        Identity::Gauss,
        Identity::Ricci,
        Identity::Prop31Norm,
        Identity::Prop31Div,
        Identity::KLagrangian,
        Identity::Bochner,
        Identity::ElDual,
        Identity::LagrangianDefect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::SymmetryA => "symmetry_A",
            Identity::TracefreeCheckA => "tracefree_checkA",
            Identity::TracefreeT => "tracefree_T",
            Identity::SymmetricT => "symmetric_T",
            Identity::Codazzi => "codazzi",
            Identity::Gauss => "gauss",
            Identity::Ricci => "ricci",
            Identity::Prop31Norm => "prop31_norm",
            Identity::Prop31Div => "prop31_div",
            Identity::KLagrangian => "K_lagrangian",
            Identity::Bochner => "bochner",
            Identity::ElDual => "el_dual",
            Identity::LagrangianDefect => "lagrangian_defect",
        }
    }

    pub fn is_cheap(self) -> bool {
        !matches!(self, Identity::Bochner | Identity::ElDual)
    }
}

/// One identity's defect at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defect {
    pub abs: f64,
    pub scale: f64,
}

impl Defect {
    pub fn new(abs: f64, scale: f64) -> Self {
        Defect { abs, scale }
    }

    pub fn rel(&self) -> f64 {
        self.abs / (1.0 + self.scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub max_abs: f64,
    pub max_rel: f64,
    pub argmax_point: Option<ParamPoint>,
    /// Points at which the identity was evaluated.
    pub samples: usize,
}

impl ResidualEntry {
    fn empty() -> Self {
        ResidualEntry {
            max_abs: 0.0,
            max_rel: 0.0,
            argmax_point: None,
            samples: 0,
        }
    }

    fn absorb(&mut self, p: ParamPoint, d: Defect) {
        let rel = d.rel();
        if !self.max_abs.is_nan() && !(d.abs <= self.max_abs) {
            self.max_abs = d.abs;
        }
        if self.argmax_point.is_none() || (!self.max_rel.is_nan() && !(rel <= self.max_rel)) {
            self.max_rel = rel;
            self.argmax_point = Some(p);
        }
        self.samples += 1;
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub surface_label: String,
    pub entries: BTreeMap<String, ResidualEntry>,
    pub node_count: usize,
}

impl ResidualReport {
    pub fn entry(&self, id: Identity) -> Option<&ResidualEntry> {
        self.entries.get(id.name())
    }

    pub fn max_rel(&self) -> f64 {
        self.entries.values().map(|e| e.max_rel).fold(0.0, f64::max)
    }

    /// Entries whose relative residual exceeds `tol`, in name order.
    pub fn failures(&self, tol: f64) -> Vec<(&str, &ResidualEntry)> {
        self.entries
            .iter()
            .filter(|(_, e)| !e.passes(tol))
            .map(|(k, e)| (k.as_str(), e))
            .collect()
    }
}

/// Both readings of the Bochner identity at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BochnerResidual {
    /// `‖ΔǍ − RHS‖ / (1 + ‖ΔǍ‖)` with the stated right-hand side.
    pub stated: f64,
    /// Same with the symmetrized four-term right-hand side.
    pub presymmetrized: f64,
    /// `|⟨ΔǍ − 3KǍ − P, Ǎ⟩| / (1 + ‖ΔǍ‖‖Ǎ‖)` for the unsymmetrized `P`.
    pub contracted: f64,
    pub lap_norm: f64,
    pub abs: f64,
}

impl BochnerResidual {
    pub fn value(&self) -> f64 {
        self.stated.max(self.presymmetrized)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElResidual {
    pub residual: f64,
    pub rhs_norm: f64,
    pub lhs_norm: f64,
    pub abs: f64,
}

/// `T_{ij,k} = ∇_k T_ij`.
fn t_comma(pg: &PointGeometry, i: usize, j: usize, k: usize) -> f64 {
    pg.nabla_t.get(&[k, i, j])
}

/// `T_{km,m}`.
fn t_div(pg: &PointGeometry, k: usize) -> f64 {
    -pg.div_t.get(&[k])
}

/// Right-hand side of the Bochner identity in its stated form.
pub fn bochner_rhs_stated(pg: &PointGeometry) -> Tensor {
    let g = &pg.g;
    let k_gauss = pg.k_intrinsic;
    Tensor::from_fn(3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        let sym = (t_comma(pg, i, j, k) - 0.5 * g[i][j] * t_div(pg, k))
            + (t_comma(pg, j, k, i) - 0.5 * g[j][k] * t_div(pg, i))
            + (t_comma(pg, i, k, j) - 0.5 * g[i][k] * t_div(pg, j));
        3.0 * k_gauss * pg.check_a.get(x) + sym / 3.0
    })
}

/// The unsymmetrized four-term tensor `P`.
pub fn bochner_p(pg: &PointGeometry) -> Tensor {
    let g = &pg.g;
    Tensor::from_fn(3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        (2.0 * t_comma(pg, i, j, k) + t_comma(pg, j, k, i) + t_comma(pg, i, k, j)
            - g[i][k] * t_div(pg, j)
            - g[j][k] * t_div(pg, i))
            / 4.0
    })
}

pub fn bochner_from_geometry(pg: &PointGeometry) -> BochnerResidual {
    let gi = &pg.ginv;
    let lap = &pg.lap_check_a;
    let lap_norm = lap.norm(gi);
    let stated_abs = lap.sub(&bochner_rhs_stated(pg)).norm(gi);
    let kca = pg.check_a.scale(3.0 * pg.k_intrinsic);
    let p = bochner_p(pg);
    let presym_abs = lap.sub(&kca).sub(&p.symmetrized()).norm(gi);
    let raw = lap.sub(&kca).sub(&p).inner(&pg.check_a, gi).abs();
    let check_norm = pg.norm_check_a2.sqrt();
    BochnerResidual {
        stated: stated_abs / (1.0 + lap_norm),
        presymmetrized: presym_abs / (1.0 + lap_norm),
        contracted: raw / (1.0 + lap_norm * check_norm),
        lap_norm,
        abs: stated_abs.max(presym_abs),
    }
}

pub fn el_from_geometry(pg: &PointGeometry) -> ElResidual {
    let w = pg.willmore_dual();
    ElResidual {
        residual: w.diff_norm / (1.0 + w.lhs_norm),
        rhs_norm: w.rhs_norm,
        lhs_norm: w.lhs_norm,
        abs: w.diff_norm,
    }
}

pub fn bochner_residual(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<BochnerResidual> {
    Ok(bochner_from_geometry(&PointGeometry::compute(atlas, p)?))
}

pub fn el_residual(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<ElResidual> {
    Ok(el_from_geometry(&PointGeometry::compute(atlas, p)?))
}

/// `g^{mn}(A_{mik}A_{njl} − A_{mjk}A_{nil})` against `K(g_ik g_jl − g_il g_jk)`.
fn ricci_defect(pg: &PointGeometry) -> Defect {
    let (g, gi, a) = (&pg.g, &pg.ginv, &pg.a);
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut lhs = 0.0;
                    for m in 0..2 {
                        for n in 0..2 {
                            lhs += gi[m][n]
                                * (a.get(&[m, i, k]) * a.get(&[n, j, l])
                                    - a.get(&[m, j, k]) * a.get(&[n, i, l]));
                        }
                    }
                    let rhs = pg.k_intrinsic * (g[i][k] * g[j][l] - g[i][l] * g[j][k]);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
    }
    Defect::new(worst, pg.norm_a2)
}

/// `g^{ab} S_{ab…}` as a value tensor.
fn trace_values(s: &Tensor, gi: &[[f64; 2]; 2]) -> Tensor {
    let r = s.rank - 2;
    Tensor::from_fn(r, |rest| {
        let mut acc = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let mut idx = vec![a, b];
                idx.extend_from_slice(rest);
                acc += gi[a][b] * s.get(&idx);
            }
        }
        acc
    })
}

fn max_abs(t: &Tensor) -> f64 {
    t.data.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Defects of every requested identity at one point of a Lagrangian surface.
pub fn point_defects(pg: &PointGeometry, which: &[Identity]) -> Vec<(Identity, Defect)> {
    let gi = &pg.ginv;
    let a_norm = pg.norm_a2.sqrt();
    which
        .iter()
        .map(|&id| {
            let d = match id {
                Identity::SymmetryA => {
                    let sym = pg.a.symmetrized();
                    Defect::new(max_abs(&pg.a.sub(&sym)) * 2.0, a_norm)
                }
                Identity::TracefreeCheckA => {
                    let tr = trace_values(&pg.check_a, gi);
                    Defect::new(tr.norm(gi), a_norm)
                }
                Identity::TracefreeT => {
                    Defect::new(trace_values(&pg.t, gi).get(&[]).abs(), pg.nabla_h.norm(gi))
                }
                Identity::SymmetricT => {
                    Defect::new(pg.t.max_swap_defect(0, 1), pg.nabla_h.norm(gi))
                }
                Identity::Codazzi => {
                    Defect::new(pg.nabla_a.max_swap_defect(0, 1), pg.nabla_a.norm(gi))
                }
                Identity::Gauss => {
                    let ks = [pg.k_intrinsic, pg.k_extrinsic, pg.k_lagrangian];
                    let spread = (ks[0] - ks[1])
                        .abs()
                        .max((ks[0] - ks[2]).abs())
                        .max((ks[1] - ks[2]).abs());
                    Defect::new(spread, ks.iter().fold(0.0, |m: f64, k| m.max(k.abs())))
                }
                Identity::Ricci => ricci_defect(pg),
                Identity::Prop31Norm => Defect::new(
                    (pg.norm_check_a2 - (pg.norm_a2 - 0.75 * pg.norm_h2)).abs(),
                    pg.norm_a2,
                ),
                Identity::Prop31Div => Defect::new(pg.t.sub(&pg.t_route2).norm(gi), pg.t.norm(gi)),
                Identity::KLagrangian => Defect::new(
                    (pg.k_intrinsic - pg.k_lagrangian).abs(),
                    pg.k_intrinsic.abs().max(pg.k_lagrangian.abs()),
                ),
                Identity::Bochner => {
                    let b = bochner_from_geometry(pg);
                    Defect::new(b.abs, b.lap_norm)
                }
                Identity::ElDual => {
                    let e = el_from_geometry(pg);
                    Defect::new(e.abs, e.lhs_norm)
                }
                Identity::LagrangianDefect => Defect::new(pg.lagrangian_defect, 0.0),
            };
            (id, d)
        })
        .collect()
}

/// Per-point outcome: either the full defect list or only the Lagrangian defect.
fn evaluate_point(
    atlas: &SurfaceAtlas,
    p: ParamPoint,
    which: &[Identity],
) -> Result<Vec<(Identity, Defect)>> {
    match PointGeometry::compute_with_order(atlas, p, DEFAULT_ORDER) {
        Ok(pg) => Ok(point_defects(&pg, which)),
        Err(Error::NotLagrangian { .. }) => {
            let m = MetricStage::compute(atlas, p, 2)?;
            debug_assert!(m.lagrangian_defect > LAGRANGIAN_TOL);
            Ok(vec![(
                Identity::LagrangianDefect,
                Defect::new(m.lagrangian_defect, 0.0),
            )])
        }
        Err(e) => Err(e),
    }
}

/// Evaluates the listed identities at every point and aggregates them.
///
/// Points where the surface fails to be Lagrangian only contribute to
/// `lagrangian_defect`; the other identities presuppose it.
pub fn residual_report(
    atlas: &SurfaceAtlas,
    points: &[ParamPoint],
    which: &[Identity],
) -> Result<ResidualReport> {
    let per_point: Vec<Result<Vec<(Identity, Defect)>>> = points
        .par_iter()
        .map(|&p| evaluate_point(atlas, p, which))
        .collect();
    let mut acc: BTreeMap<Identity, ResidualEntry> = which
        .iter()
        .map(|&id| (id, ResidualEntry::empty()))
        .collect();
    for (p, res) in points.iter().zip(per_point) {
        for (id, d) in res? {
            acc.entry(id)
                .or_insert_with(ResidualEntry::empty)
                .absorb(*p, d);
        }
    }
    Ok(ResidualReport {
        surface_label: atlas.label.clone(),
        entries: acc
            .into_iter()
            .map(|(k, v)| (k.name().to_string(), v))
            .collect(),
        node_count: points.len(),
    })
}

/// The cheap group: everything except the Bochner and Euler–Lagrange checks.
pub fn residual_suite(atlas: &SurfaceAtlas, points: &[ParamPoint]) -> Result<ResidualReport> {
    residual_report(atlas, points, &Identity::CHEAP)
}

pub fn full_residual_suite(atlas: &SurfaceAtlas, points: &[ParamPoint]) -> Result<ResidualReport> {
    residual_report(atlas, points, &Identity::ALL)
}
