//! Gauss–Legendre quadrature over surface atlases and the global energies.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{MetricStage, PointGeometry};
use crate::jets::{Jet2, Lift, DEFAULT_ORDER};
use crate::surface::{Chart, ParamPoint, SurfaceAtlas};
use crate::tensor::{adjoint_of_derivative, covariant_derivative, TensorField};

pub const MIN_NODES: usize = 4;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(n, z).1;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))`.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// Pairwise summation in a fixed order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureSpec {
    pub n_u: usize,
    pub n_v: usize,
    /// Also evaluate with doubled node counts and report the difference.
    pub richardson: bool,
}

impl QuadratureSpec {
    pub fn new(n_u: usize, n_v: usize) -> Result<Self> {
        if n_u < MIN_NODES || n_v < MIN_NODES {
            return Err(Error::invalid(
                "nodes",
                format!("need at least {MIN_NODES} nodes per direction"),
            ));
        }
        Ok(QuadratureSpec {
            n_u,
            n_v,
            richardson: false,
        })
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    /// `n` nodes along `u` and `n · max(1, round(len_v / len_u))` along `v`,
    /// using the first chart's proportions.
    pub fn from_nodes(atlas: &SurfaceAtlas, n: usize) -> Result<Self> {
        let [lu, lv] = atlas.charts[0].lengths();
        let ratio = ((lv / lu).round() as usize).max(1);
        QuadratureSpec::new(n, n * ratio)
    }

    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            n_u: 2 * self.n_u,
            n_v: 2 * self.n_v,
            richardson: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadNode {
    pub point: ParamPoint,
    /// Parameter-space weight, without the area density.
    pub weight: f64,
}

/// The interval actually integrated along direction `k` of a chart.
pub fn quadrature_interval(chart: &Chart, k: usize, n: usize) -> [f64; 2] {
    let eps = if chart.singular_edges[k] {
        chart
            .exclusion_margin
            .max(1e-3_f64.min(1.0 / (n * n) as f64))
    } else {
        0.0
    };
    [chart.domain[k][0] + eps, chart.domain[k][1] - eps]
}

/// Tensor-product nodes, ordered by chart, then `u`, then `v`.
pub fn quadrature_nodes(atlas: &SurfaceAtlas, q: &QuadratureSpec) -> Vec<QuadNode> {
    let (xu, wu) = gauss_legendre(q.n_u);
    let (xv, wv) = gauss_legendre(q.n_v);
    let mut out = Vec::with_capacity(atlas.charts.len() * q.n_u * q.n_v);
    for (ci, chart) in atlas.charts.iter().enumerate() {
        let iu = quadrature_interval(chart, 0, q.n_u);
        let iv = quadrature_interval(chart, 1, q.n_v);
        let (hu, mu) = (0.5 * (iu[1] - iu[0]), 0.5 * (iu[1] + iu[0]));
        let (hv, mv) = (0.5 * (iv[1] - iv[0]), 0.5 * (iv[1] + iv[0]));
        for i in 0..q.n_u {
            for j in 0..q.n_v {
                out.push(QuadNode {
                    point: ParamPoint {
                        chart: ci,
                        u: mu + hu * xu[i],
                        v: mv + hv * xv[j],
                    },
                    weight: wu[i] * hu * wv[j] * hv,
                });
            }
        }
    }
    out
}

/// Evaluates `eval` at every node in parallel, returning results in node
/// order. The first failing node in that order is reported.
pub fn map_nodes<T: Send>(
    nodes: &[QuadNode],
    eval: impl Fn(&QuadNode) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let results: Vec<Result<T>> = nodes.par_iter().map(&eval).collect();
    results.into_iter().collect()
}

/// `∫ field dμ` for each field, sharing one geometry evaluation per node.
pub fn integrate_fields(
    atlas: &SurfaceAtlas,
    fields: &[&(dyn Fn(&PointGeometry) -> f64 + Sync)],
    q: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let nodes = quadrature_nodes(atlas, q);
    let samples = map_nodes(&nodes, |n| {
        let pg = PointGeometry::compute_with_order(atlas, n.point, DEFAULT_ORDER)?;
        let dmu = n.weight * pg.sqrt_det_g;
        Ok(fields.iter().map(|f| f(&pg) * dmu).collect::<Vec<f64>>())
    })?;
    Ok((0..fields.len())
        .map(|k| pairwise_sum(&samples.iter().map(|s| s[k]).collect::<Vec<_>>()))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
}

pub fn integrate_scalar(
    atlas: &SurfaceAtlas,
    field: &(dyn Fn(&PointGeometry) -> f64 + Sync),
    q: &QuadratureSpec,
) -> Result<Integral> {
    let value = integrate_fields(atlas, &[field], q)?[0];
    let error_estimate = if q.richardson {
        (value - integrate_fields(atlas, &[field], &q.doubled())?[0]).abs()
    } else {
        0.0
    };
    Ok(Integral {
        value,
        error_estimate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    pub area: f64,
    #[serde(rename = "E_A")]
    pub e_a: f64,
    #[serde(rename = "E_checkA")]
    pub e_check_a: f64,
    #[serde(rename = "E_AA")]
    pub e_aa: f64,
    #[serde(rename = "E_H")]
    pub e_h: f64,
    pub willmore: f64,
    #[serde(rename = "total_K")]
    pub total_k: f64,
    /// `∫K − 2πχ`, closed surfaces only.
    pub gauss_bonnet_defect: Option<f64>,
    /// `E_checkA − (½E_AA − 2πχ)`, closed surfaces only.
    pub cor41_defect: Option<f64>,
    pub quad_error_estimate: f64,
}

fn energy_values(atlas: &SurfaceAtlas, q: &QuadratureSpec) -> Result<[f64; 6]> {
    let v = integrate_fields(
        atlas,
        &[
            &|_| 1.0,
            &|pg| pg.norm_a2,
            &|pg| pg.norm_check_a2,
            &|pg| pg.norm_aa2,
            &|pg| pg.norm_h2,
            &|pg| pg.k_intrinsic,
        ],
        q,
    )?;
    Ok([v[0], v[1], v[2], v[3], v[4], v[5]])
}

pub fn energy_report(atlas: &SurfaceAtlas, q: &QuadratureSpec) -> Result<EnergyReport> {
    let [area, e_a, e_check_a, e_aa, e_h, total_k] = energy_values(atlas, q)?;
    let quad_error_estimate = if q.richardson {
        let fine = energy_values(atlas, &q.doubled())?;
        [area, e_a, e_check_a, e_aa, e_h, total_k]
            .iter()
            .zip(fine)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    let chi = atlas.euler_characteristic().map(f64::from);
    Ok(EnergyReport {
        area,
        e_a,
        e_check_a,
        e_aa,
        e_h,
        willmore: e_aa,
        total_k,
        gauss_bonnet_defect: chi.map(|c| total_k - 2.0 * PI * c),
        cor41_defect: chi.map(|c| e_check_a - (0.5 * e_aa - 2.0 * PI * c)),
        quad_error_estimate,
    })
}

/// `Σ a cos(k·x) + b sin(k·x)` over integer frequencies `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigPolynomial {
    pub terms: Vec<TrigTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigTerm {
    pub freq: [i32; 2],
    pub cos: f64,
    pub sin: f64,
}

impl TrigPolynomial {
    pub fn constant(c: f64) -> Self {
        TrigPolynomial {
            terms: vec![TrigTerm {
                freq: [0, 0],
                cos: c,
                sin: 0.0,
            }],
        }
    }

    /// All frequencies with `|k₁|, |k₂| ≤ degree`, coefficients in `[-1, 1]`.
    pub fn random(rng: &mut impl Rng, degree: i32) -> Self {
        let mut terms = Vec::new();
        for k1 in -degree..=degree {
            for k2 in -degree..=degree {
                terms.push(TrigTerm {
                    freq: [k1, k2],
                    cos: rng.gen_range(-1.0..=1.0),
                    sin: rng.gen_range(-1.0..=1.0),
                });
            }
        }
        TrigPolynomial { terms }
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.cos.abs() + t.sin.abs()).sum()
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let a = t.freq[0] as f64 * u + t.freq[1] as f64 * v;
                t.cos * a.cos() + t.sin * a.sin()
            })
            .sum()
    }

    pub fn eval_jet(&self, u: f64, v: f64, order: usize) -> Jet2 {
        let ju = Jet2::variable(u, Lift::U, order);
        let jv = Jet2::variable(v, Lift::V, order);
        let mut acc = Jet2::zero(order);
        for t in &self.terms {
            let a = ju.scale(t.freq[0] as f64) + jv.scale(t.freq[1] as f64);
            acc = acc + a.cos().scale(t.cos) + a.sin().scale(t.sin);
        }
        acc
    }
}

/// A covariant tensor field whose coordinate components are trigonometric
/// polynomials in the chart parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigTensorField {
    pub rank: usize,
    pub comps: Vec<TrigPolynomial>,
}

impl TrigTensorField {
    pub fn new(rank: usize, comps: Vec<TrigPolynomial>) -> Result<Self> {
        if comps.len() != 1 << rank {
            return Err(Error::invalid(
                "comps",
                format!("rank {rank} needs {} components", 1 << rank),
            ));
        }
        Ok(TrigTensorField { rank, comps })
    }

    pub fn random(rng: &mut impl Rng, rank: usize, degree: i32) -> Self {
        let comps = (0..1 << rank)
            .map(|_| TrigPolynomial::random(rng, degree))
            .collect();
        TrigTensorField { rank, comps }
    }

    pub fn jets(&self, u: f64, v: f64, order: usize) -> TensorField {
        let comps: Vec<Jet2> = self.comps.iter().map(|c| c.eval_jet(u, v, order)).collect();
        TensorField::from_fn(self.rank, |idx| comps[crate::tensor::flat_index(idx)])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Adjointness {
    /// `∫⟨∇S, T⟩ dμ`.
    pub lhs: f64,
    /// `∫⟨S, ∇*T⟩ dμ`.
    pub rhs: f64,
    pub residual: f64,
}

/// Compares `∫⟨∇S, T⟩` with `∫⟨S, ∇*T⟩` on a closed surface whose charts
/// are periodic without degenerate edges.
pub fn adjointness_check(
    atlas: &SurfaceAtlas,
    s: &TrigTensorField,
    t: &TrigTensorField,
    q: &QuadratureSpec,
) -> Result<Adjointness> {
    if !atlas.closed {
        return Err(Error::NotClosed(atlas.label.clone()));
    }
    if atlas
        .charts
        .iter()
        .any(|c| c.singular_edges.iter().any(|&b| b) || !c.periodic.iter().all(|&b| b))
    {
        return Err(Error::invalid(
            "surface",
            "integration by parts needs doubly periodic charts without degenerate edges",
        ));
    }
    if t.rank != s.rank + 1 {
        return Err(Error::invalid(
            "fields",
            "T must have one index more than S",
        ));
    }
    let nodes = quadrature_nodes(atlas, q);
    let samples = map_nodes(&nodes, |n| {
        let m = MetricStage::compute(atlas, n.point, 3)?;
        let (u, v) = (n.point.u, n.point.v);
        let sj = s.jets(u, v, 2);
        let tj = t.jets(u, v, 2);
        let ginv = m.ginv_values();
        let ds = covariant_derivative(&sj, &m.gamma).values();
        let dt = adjoint_of_derivative(&covariant_derivative(&tj, &m.gamma), &m.ginv).values();
        let dmu = n.weight * m.sqrt_det_g;
        Ok([
            ds.inner(&tj.values(), &ginv) * dmu,
            sj.values().inner(&dt, &ginv) * dmu,
        ])
    })?;
    let lhs = pairwise_sum(&samples.iter().map(|x| x[0]).collect::<Vec<_>>());
    let rhs = pairwise_sum(&samples.iter().map(|x| x[1]).collect::<Vec<_>>());
    Ok(Adjointness {
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / (1.0 + lhs.abs()),
    })
}
