//! Pointwise curvature of a Lagrangian immersion.
//!
//! Everything lives in the coordinate basis of the chart with explicit index
//! raising by `g^{ab}`. Normal-bundle quantities are carried through their
//! `ω`-duals: for a normal vector `N` the 1-form `⟨N, J∂_c f⟩`. In particular
//!
//! * `A_abc = ⟨∂_a∂_b f, J∂_c f⟩` (fully symmetric on Lagrangian surfaces),
//! * `h_c = g^{ab} A_abc = ⟨H, J∂_c f⟩`,
//! * `Å_abc = A_abc − ½ g_ab h_c`,
//! * `Ǎ_abc = A_abc − ¼(g_ab h_c + g_ac h_b + g_bc h_a)`,
//! * `T_ab = ∇_a h_b − ½ (g^{lm}∇_l h_m) g_ab`.
//!
//! Fields are propagated as jets, losing one order per derivative, so the
//! default order 4 closes at the Laplacians `ΔǍ` and `Δh`.

use serde::Serialize;

use crate::ambient::{apply_j_jets, dot_jets, omega_jets, Vector4};
use crate::error::{Error, Result};
use crate::jets::{Jet2, DEFAULT_ORDER};
use crate::surface::{ParamPoint, SurfaceAtlas, RANK_TOL};
use crate::tensor::{
    adjoint_of_derivative, covariant_derivative, trace_first_two, Christoffel, Tensor, TensorField,
};

/// Largest normalized `ω`-pullback at which the Lagrangian-only formulas are
/// still applied.
pub const LAGRANGIAN_TOL: f64 = 1e-8;

/// Minimum jet order for the full pipeline.
pub const MIN_ORDER: usize = 4;

/// Jets of the immersion and its metric at one point.
#[derive(Debug, Clone)]
pub struct MetricStage {
    pub point: ParamPoint,
    pub f: [Jet2; 4],
    /// `∂_a f`.
    pub df: [[Jet2; 4]; 2],
    pub g: [[Jet2; 2]; 2],
    pub ginv: [[Jet2; 2]; 2],
    pub sqrt_det_g: f64,
    pub gamma: Christoffel,
    pub lagrangian_defect: f64,
}

impl MetricStage {
    pub fn compute(atlas: &SurfaceAtlas, p: ParamPoint, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::invalid(
                "order",
                "the metric stage needs jets of order >= 2",
            ));
        }
        let f = atlas.immersion_jets(p.chart, p.uv(), order)?;
        Self::from_jets(p, f)
    }

    /// Metric stage for given immersion jets; `p` labels the point.
    pub fn from_jets(p: ParamPoint, f: [Jet2; 4]) -> Result<Self> {
        let df = [f.map(|j| j.partial(0)), f.map(|j| j.partial(1))];
        let g: [[Jet2; 2]; 2] =
            std::array::from_fn(|a| std::array::from_fn(|b| dot_jets(&df[a], &df[b])));
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let sqrt_det_g = det.value().max(0.0).sqrt();
        if !(sqrt_det_g > RANK_TOL) {
            return Err(Error::RankDeficient {
                chart: p.chart,
                u: p.u,
                v: p.v,
                sqrt_det: sqrt_det_g,
            });
        }
        let inv_det = det.checked_recip().map_err(|e| Error::SingularEvaluation {
            what: e.to_string(),
            chart: p.chart,
            u: p.u,
            v: p.v,
        })?;
        let ginv = [
            [g[1][1] * inv_det, -(g[0][1] * inv_det)],
            [-(g[1][0] * inv_det), g[0][0] * inv_det],
        ];
        let gamma = Christoffel::from_metric(&g, &ginv);
        let lagrangian_defect = omega_jets(&df[0], &df[1]).value().abs() / sqrt_det_g;
        Ok(MetricStage {
            point: p,
            f,
            df,
            g,
            ginv,
            sqrt_det_g,
            gamma,
            lagrangian_defect,
        })
    }

    pub fn g_values(&self) -> [[f64; 2]; 2] {
        self.g.map(|r| r.map(|j| j.value()))
    }

    pub fn ginv_values(&self) -> [[f64; 2]; 2] {
        self.ginv.map(|r| r.map(|j| j.value()))
    }

    fn metric_field(&self) -> TensorField {
        TensorField::from_fn(2, |i| self.g[i[0]][i[1]])
    }

    /// `∂_d Γ^c_ab` as `[d][c][a][b]`.
    pub fn dgamma_values(&self) -> [[[[f64; 2]; 2]; 2]; 2] {
        std::array::from_fn(|d| {
            std::array::from_fn(|c| {
                std::array::from_fn(|x| {
                    std::array::from_fn(|y| self.gamma.0[c][x][y].partial(d).value())
                })
            })
        })
    }
}

/// The full pointwise curvature state.
#[derive(Debug, Clone, Serialize)]
pub struct PointGeometry {
    pub point: ParamPoint,
    pub f: Vector4,
    pub g: [[f64; 2]; 2],
    pub ginv: [[f64; 2]; 2],
    pub sqrt_det_g: f64,
    /// `Γ^c_ab` as `[c][a][b]`.
    pub gamma: [[[f64; 2]; 2]; 2],
    /// `∂_d Γ^c_ab` as `[d][c][a][b]`.
    pub dgamma: [[[[f64; 2]; 2]; 2]; 2],
    pub lagrangian_defect: f64,
    pub a: Tensor,
    pub h: Tensor,
    /// Dual of `Å`.
    pub aa: Tensor,
    /// Dual of `Ǎ`.
    pub check_a: Tensor,
    /// `(∇h)_{la} = ∇_l h_a`, unsymmetrized.
    pub nabla_h: Tensor,
    /// `T` from the trace-free part of `∇h`.
    pub t: Tensor,
    /// `T = 2 g^{lm} (∇Ǎ)_{l m ab}`.
    pub t_route2: Tensor,
    pub nabla_a: Tensor,
    pub nabla_check_a: Tensor,
    pub lap_check_a: Tensor,
    /// `(∇T)_{l ab} = ∇_l T_ab`.
    pub nabla_t: Tensor,
    /// `∇*T`.
    pub div_t: Tensor,
    /// Rough Laplacian of the 1-form `h`.
    pub lap_h: Tensor,
    /// `∇g`, zero for the Levi-Civita connection.
    pub nabla_g: Tensor,
    pub k_intrinsic: f64,
    pub k_extrinsic: f64,
    pub k_lagrangian: f64,
    pub norm_h2: f64,
    pub norm_a2: f64,
    pub norm_aa2: f64,
    pub norm_check_a2: f64,
    pub norm_t2: f64,
}

impl PointGeometry {
    pub fn compute(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<Self> {
        Self::compute_with_order(atlas, p, DEFAULT_ORDER)
    }

    pub fn compute_with_order(atlas: &SurfaceAtlas, p: ParamPoint, order: usize) -> Result<Self> {
        if order < MIN_ORDER {
            return Err(Error::invalid(
                "order",
                format!("the curvature pipeline needs jets of order >= {MIN_ORDER}"),
            ));
        }
        let m = MetricStage::compute(atlas, p, order)?;
        if m.lagrangian_defect > LAGRANGIAN_TOL {
            return Err(Error::NotLagrangian {
                u: p.u,
                v: p.v,
                defect: m.lagrangian_defect,
                limit: LAGRANGIAN_TOL,
            });
        }
        let chart = atlas.chart(p.chart)?;
        let Some(q) = chart.tilted_point(p.uv()) else {
            return Ok(Self::from_stage(&m));
        };
        let mt = MetricStage::from_jets(p, atlas.tilted_jets(p.chart, q, order)?)?;
        let inner = Self::from_stage(&mt);
        let gt = mt.ginv_values();
        let cross: [[f64; 2]; 2] = std::array::from_fn(|c| {
            std::array::from_fn(|a| {
                (0..4)
                    .map(|k| mt.df[c][k].value() * m.df[a][k].value())
                    .sum()
            })
        });
        let jac: [[f64; 2]; 2] = std::array::from_fn(|b| {
            std::array::from_fn(|a| gt[b][0] * cross[0][a] + gt[b][1] * cross[1][a])
        });
        let pb = |s: &Tensor| s.pulled_back(&jac);
        let gamma = m.gamma.values();
        Ok(PointGeometry {
            point: p,
            f: Vector4(m.f.map(|j| j.value())),
            g: m.g_values(),
            ginv: m.ginv_values(),
            sqrt_det_g: m.sqrt_det_g,
            gamma,
            dgamma: m.dgamma_values(),
            lagrangian_defect: m.lagrangian_defect,
            a: pb(&inner.a),
            h: pb(&inner.h),
            aa: pb(&inner.aa),
            check_a: pb(&inner.check_a),
            nabla_h: pb(&inner.nabla_h),
            t: pb(&inner.t),
            t_route2: pb(&inner.t_route2),
            nabla_a: pb(&inner.nabla_a),
            nabla_check_a: pb(&inner.nabla_check_a),
            lap_check_a: pb(&inner.lap_check_a),
            nabla_t: pb(&inner.nabla_t),
            div_t: pb(&inner.div_t),
            lap_h: pb(&inner.lap_h),
            nabla_g: pb(&inner.nabla_g),
            ..inner
        })
    }

    /// Curvature state computed in the coordinates of `m`.
    fn from_stage(m: &MetricStage) -> Self {
        let p = m.point;
        let g = &m.g;
        let ginv = &m.ginv;
        let jdf = [apply_j_jets(&m.df[0]), apply_j_jets(&m.df[1])];
        let d2f: [[[Jet2; 4]; 2]; 2] =
            std::array::from_fn(|a| std::array::from_fn(|b| m.df[a].map(|j| j.partial(b))));

        let a = TensorField::from_fn(3, |i| dot_jets(&d2f[i[0]][i[1]], &jdf[i[2]]));
        let h = TensorField::from_fn(1, |i| {
            let c = i[0];
            ginv[0][0] * a.get(&[0, 0, c])
                + ginv[0][1] * a.get(&[0, 1, c])
                + ginv[1][0] * a.get(&[1, 0, c])
                + ginv[1][1] * a.get(&[1, 1, c])
        });
        let hv = |k: usize| h.get(&[k]);
        let aa = TensorField::from_fn(3, |i| a.get(i) - (g[i[0]][i[1]] * hv(i[2])).scale(0.5));
        let check_a = TensorField::from_fn(3, |i| {
            let corr =
                g[i[0]][i[1]] * hv(i[2]) + g[i[0]][i[2]] * hv(i[1]) + g[i[1]][i[2]] * hv(i[0]);
            a.get(i) - corr.scale(0.25)
        });

        let gamma = &m.gamma;
        let nabla_h = covariant_derivative(&h, gamma);
        let div_h = trace_first_two(&nabla_h, ginv).get(&[]);
        let t = TensorField::from_fn(2, |i| nabla_h.get(i) - (div_h * g[i[0]][i[1]]).scale(0.5));
        let nabla_check_a = covariant_derivative(&check_a, gamma);
        let t_route2 = {
            let tr = trace_first_two(&nabla_check_a, ginv);
            TensorField::from_fn(2, |i| tr.get(i).scale(2.0))
        };
        let nabla_a = covariant_derivative(&a, gamma);
        let lap_check_a = trace_first_two(&covariant_derivative(&nabla_check_a, gamma), ginv);
        let nabla_t = covariant_derivative(&t, gamma);
        let div_t = adjoint_of_derivative(&nabla_t, ginv);
        let lap_h = trace_first_two(&covariant_derivative(&nabla_h, gamma), ginv);
        let nabla_g = covariant_derivative(&m.metric_field(), gamma);

        let gv = m.g_values();
        let giv = m.ginv_values();
        let gamma_v = gamma.values();
        let dgamma = m.dgamma_values();
        let k_intrinsic = intrinsic_curvature(&gv, &gamma_v, &dgamma);

        let a_v = a.values();
        let h_v = h.values();
        let aa_v = aa.values();
        let check_a_v = check_a.values();
        let t_v = t.values();
        let norm_h2 = h_v.norm_sq(&giv);
        let norm_a2 = a_v.norm_sq(&giv);
        let norm_aa2 = aa_v.norm_sq(&giv);
        let norm_check_a2 = check_a_v.norm_sq(&giv);
        let norm_t2 = t_v.norm_sq(&giv);

        PointGeometry {
            point: p,
            f: Vector4(m.f.map(|j| j.value())),
            g: gv,
            ginv: giv,
            sqrt_det_g: m.sqrt_det_g,
            gamma: gamma_v,
            dgamma,
            lagrangian_defect: m.lagrangian_defect,
            a: a_v,
            h: h_v,
            aa: aa_v,
            check_a: check_a_v,
            nabla_h: nabla_h.values(),
            t: t_v,
            t_route2: t_route2.values(),
            nabla_a: nabla_a.values(),
            nabla_check_a: nabla_check_a.values(),
            lap_check_a: lap_check_a.values(),
            nabla_t: nabla_t.values(),
            div_t: div_t.values(),
            lap_h: lap_h.values(),
            nabla_g: nabla_g.values(),
            k_intrinsic,
            k_extrinsic: 0.5 * (norm_h2 - norm_a2),
            k_lagrangian: norm_h2 / 8.0 - norm_check_a2 / 2.0,
            norm_h2,
            norm_a2,
            norm_aa2,
            norm_check_a2,
            norm_t2,
        }
    }

    /// `h^a`.
    pub fn h_up(&self) -> [f64; 2] {
        let r = self.h.raised(&self.ginv);
        [r.data[0], r.data[1]]
    }

    /// `(Q(S)H)_k = S_{ijk} S^{ij}{}_s h^s` for a symmetric-in-`ij` 3-tensor.
    pub fn q_term(&self, s: &Tensor) -> Tensor {
        let hu = self.h_up();
        let gi = &self.ginv;
        Tensor::from_fn(1, |k| {
            let k = k[0];
            let mut acc = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    for i2 in 0..2 {
                        for j2 in 0..2 {
                            let w = gi[i][i2] * gi[j][j2];
                            if w == 0.0 {
                                continue;
                            }
                            let inner: f64 = (0..2).map(|s_| s.get(&[i2, j2, s_]) * hu[s_]).sum();
                            acc += w * s.get(&[i, j, k]) * inner;
                        }
                    }
                }
            }
            acc
        })
    }

    /// The `ω`-dual of the Willmore operator in both forms.
    pub fn willmore_dual(&self) -> WillmoreDual {
        let hu = self.h_up();
        let lhs = self.lap_h.add(&self.q_term(&self.aa));
        let check_hh = Tensor::from_fn(1, |k| {
            let mut acc = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    acc += self.check_a.get(&[a, b, k[0]]) * hu[a] * hu[b];
                }
            }
            acc
        });
        let rhs = self
            .div_t
            .scale(-2.0)
            .add(&self.h.scale(0.5 * self.norm_check_a2))
            .add(&self.q_term(&self.check_a))
            .add(&check_hh);
        let diff_norm = lhs.sub(&rhs).norm(&self.ginv);
        WillmoreDual {
            lhs_norm: lhs.norm(&self.ginv),
            rhs_norm: rhs.norm(&self.ginv),
            lhs,
            rhs,
            diff_norm,
        }
    }
}

/// `K = R_1212 / det g` from the connection and its first derivatives.
pub fn intrinsic_curvature(
    g: &[[f64; 2]; 2],
    gamma: &[[[f64; 2]; 2]; 2],
    dgamma: &[[[[f64; 2]; 2]; 2]; 2],
) -> f64 {
    // R^m_{212} = ∂_1 Γ^m_22 − ∂_2 Γ^m_12 + Γ^m_1λ Γ^λ_22 − Γ^m_2λ Γ^λ_12 (1-based)
    let r_up: [f64; 2] = std::array::from_fn(|m| {
        let mut r = dgamma[0][m][1][1] - dgamma[1][m][0][1];
        for l in 0..2 {
            r += gamma[m][0][l] * gamma[l][1][1] - gamma[m][1][l] * gamma[l][0][1];
        }
        r
    });
    let r1212 = g[0][0] * r_up[0] + g[0][1] * r_up[1];
    r1212 / (g[0][0] * g[1][1] - g[0][1] * g[1][0])
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricBlock {
    pub g: [[f64; 2]; 2],
    pub ginv: [[f64; 2]; 2],
    pub sqrt_det_g: f64,
    pub gamma: [[[f64; 2]; 2]; 2],
    pub dgamma: [[[[f64; 2]; 2]; 2]; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct SecondForm {
    pub a: Tensor,
    pub h: Tensor,
    pub norm_h2: f64,
    pub norm_a2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceFree {
    pub check_a: Tensor,
    pub aa: Tensor,
    pub norm_check_a2: f64,
    pub norm_aa2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorT {
    pub route1: Tensor,
    pub route2: Tensor,
    /// `|route1 − route2|` in the metric norm.
    pub difference: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaussCurvature {
    pub intrinsic: f64,
    pub extrinsic: f64,
    pub lagrangian: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WillmoreDual {
    /// `Δh + Q(Å)H` dualized.
    pub lhs: Tensor,
    /// `−2∇*T + ½|Ǎ|²h + Q(Ǎ)H + Ǎ(JH, JH)` dualized.
    pub rhs: Tensor,
    pub lhs_norm: f64,
    pub rhs_norm: f64,
    pub diff_norm: f64,
}

/// Metric, inverse metric and connection. Works on non-Lagrangian surfaces.
pub fn first_fundamental(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<MetricBlock> {
    let m = MetricStage::compute(atlas, p, 3)?;
    let dgamma = std::array::from_fn(|d| {
        std::array::from_fn(|c| {
            std::array::from_fn(|x| std::array::from_fn(|y| m.gamma.0[c][x][y].partial(d).value()))
        })
    });
    Ok(MetricBlock {
        g: m.g_values(),
        ginv: m.ginv_values(),
        sqrt_det_g: m.sqrt_det_g,
        gamma: m.gamma.values(),
        dgamma,
    })
}

pub fn second_form(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<SecondForm> {
    let pg = PointGeometry::compute(atlas, p)?;
    Ok(SecondForm {
        a: pg.a,
        h: pg.h,
        norm_h2: pg.norm_h2,
        norm_a2: pg.norm_a2,
    })
}

pub fn lagrangian_trace_free(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<TraceFree> {
    let pg = PointGeometry::compute(atlas, p)?;
    Ok(TraceFree {
        check_a: pg.check_a,
        aa: pg.aa,
        norm_check_a2: pg.norm_check_a2,
        norm_aa2: pg.norm_aa2,
    })
}

pub fn tensor_t(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<TensorT> {
    let pg = PointGeometry::compute(atlas, p)?;
    let difference = pg.t.sub(&pg.t_route2).norm(&pg.ginv);
    Ok(TensorT {
        route1: pg.t,
        route2: pg.t_route2,
        difference,
    })
}

pub fn laplacian_check_a(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<Tensor> {
    Ok(PointGeometry::compute(atlas, p)?.lap_check_a)
}

pub fn gauss_curvature(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<GaussCurvature> {
    let pg = PointGeometry::compute(atlas, p)?;
    Ok(GaussCurvature {
        intrinsic: pg.k_intrinsic,
        extrinsic: pg.k_extrinsic,
        lagrangian: pg.k_lagrangian,
    })
}

pub fn willmore_dual(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<WillmoreDual> {
    Ok(PointGeometry::compute(atlas, p)?.willmore_dual())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly2;
    use crate::surface::{build_surface, SurfaceSpec};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn cubic_graph() -> SurfaceAtlas {
        build_surface(&SurfaceSpec::GradientGraph {
            potential: Poly2::from_terms(&[(3, 0, 1.0 / 6.0), (0, 3, 1.0 / 6.0)]).unwrap(),
            domain: [[-2.0, 2.0], [-2.0, 2.0]],
        })
        .unwrap()
    }

    fn plane() -> SurfaceAtlas {
        build_surface(&SurfaceSpec::Plane {
            basis: [
                Vector4::new(1.0, 0.0, 0.0, 0.0),
                Vector4::new(0.0, 0.0, 1.0, 0.0),
            ],
            domain: [[-1.0, 1.0], [-1.0, 1.0]],
        })
        .unwrap()
    }

    fn clifford() -> SurfaceAtlas {
        build_surface(&SurfaceSpec::clifford_torus()).unwrap()
    }

    fn whitney() -> SurfaceAtlas {
        build_surface(&SurfaceSpec::whitney(1.0, Vector4::ZERO)).unwrap()
    }

    #[test]
    fn tilted_path_agrees_with_polar_chart() {
        let w = whitney();
        let p = ParamPoint::new(0.9, 2.3);
        assert!(w.chart(0).unwrap().tilted_point(p.uv()).is_some());
        let direct =
            PointGeometry::from_stage(&MetricStage::compute(&w, p, DEFAULT_ORDER).unwrap());
        let pg = PointGeometry::compute(&w, p).unwrap();
        for (x, y) in [
            (&pg.a, &direct.a),
            (&pg.h, &direct.h),
            (&pg.nabla_h, &direct.nabla_h),
            (&pg.lap_check_a, &direct.lap_check_a),
            (&pg.lap_h, &direct.lap_h),
        ] {
            assert!(x.sub(y).norm(&pg.ginv) < 1e-10);
        }
        assert!((pg.k_intrinsic - direct.k_intrinsic).abs() < 1e-10);
    }

    #[test]
    fn whitney_is_umbilic_near_pole() {
        let w = whitney();
        let pg = PointGeometry::compute(&w, ParamPoint::new(1e-3, 0.4)).unwrap();
        assert!(pg.check_a.norm(&pg.ginv) < 1e-12);
        assert!(pg.div_t.norm(&pg.ginv) < 1e-12);
    }

    #[test]
    fn metric_examples() {
        let m = first_fundamental(&plane(), ParamPoint::new(0.2, -0.4)).unwrap();
        assert_eq!(m.g, [[1.0, 0.0], [0.0, 1.0]]);
        assert!(m.gamma.iter().flatten().flatten().all(|x| *x == 0.0));

        let a = 0.8;
        let t = build_surface(&SurfaceSpec::Torus { a1: a, a2: a }).unwrap();
        let m = first_fundamental(&t, ParamPoint::new(1.3, 4.1)).unwrap();
        for (x, y) in m.g.iter().flatten().zip([a * a, 0.0, 0.0, a * a]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(m.gamma.iter().flatten().flatten().all(|x| x.abs() < 1e-15));

        // g = I + (∇²u)² with ∇²u = diag(x₁, x₂)
        let m = first_fundamental(&cubic_graph(), ParamPoint::new(1.0, 1.0)).unwrap();
        assert_eq!(m.g, [[2.0, 0.0], [0.0, 2.0]]);
    }

    #[test]
    fn cubic_form_of_gradient_graph_is_third_derivative() {
        let s = second_form(&cubic_graph(), ParamPoint::new(0.7, -0.3)).unwrap();
        assert!((s.a.get(&[0, 0, 0]) - 1.0).abs() < 1e-14);
        assert!((s.a.get(&[1, 1, 1]) - 1.0).abs() < 1e-14);
        for idx in [
            [0, 0, 1],
            [0, 1, 0],
            [1, 0, 0],
            [0, 1, 1],
            [1, 0, 1],
            [1, 1, 0],
        ] {
            assert!(s.a.get(&idx).abs() < 1e-14);
        }
    }

    #[test]
    fn clifford_torus_closed_forms() {
        let pg = PointGeometry::compute(&clifford(), ParamPoint::new(0.4, 2.2)).unwrap();
        assert!((pg.norm_h2 - 4.0).abs() < 1e-12);
        assert!((pg.norm_a2 - 4.0).abs() < 1e-12);
        assert!((pg.norm_check_a2 - 1.0).abs() < 1e-12);
        assert!(pg.norm_t2.sqrt() < 1e-12);
        for k in [pg.k_intrinsic, pg.k_extrinsic] {
            assert!(k.abs() < 1e-12);
        }
        assert!((pg.k_lagrangian - 0.0).abs() < 1e-12);
        let _ = FRAC_1_SQRT_2;
    }

    #[test]
    fn plane_is_totally_geodesic() {
        let pg = PointGeometry::compute(&plane(), ParamPoint::new(0.1, 0.5)).unwrap();
        for t in [&pg.a, &pg.h, &pg.check_a, &pg.aa, &pg.lap_check_a, &pg.t] {
            assert!(t.data.iter().all(|x| *x == 0.0));
        }
        let w = pg.willmore_dual();
        assert_eq!(w.lhs_norm, 0.0);
        assert_eq!(w.rhs_norm, 0.0);
    }

    #[test]
    fn whitney_is_lagrangian_umbilic() {
        let w = whitney();
        for &(t, p) in &[(0.5, 0.3), (1.2, 2.0), (2.9, 5.5)] {
            let pg = PointGeometry::compute(&w, ParamPoint::new(t, p)).unwrap();
            assert!(pg.norm_check_a2 < 1e-20, "{}", pg.norm_check_a2);
            assert!(pg.norm_t2.sqrt() < 1e-9);
            assert!(pg.lap_check_a.data.iter().all(|x| x.abs() < 1e-8));
            assert!((pg.k_lagrangian - pg.norm_h2 / 8.0).abs() < 1e-12);
            assert!((pg.k_intrinsic - pg.k_extrinsic).abs() < 1e-9 * (1.0 + pg.k_intrinsic.abs()));
            let wd = pg.willmore_dual();
            assert!(wd.rhs_norm < 1e-8);
        }
    }

    #[test]
    fn both_routes_to_t_agree_on_graph() {
        let t = tensor_t(&cubic_graph(), ParamPoint::new(0.3, -0.2)).unwrap();
        assert!(t.difference < 1e-9);
        assert!(t.route1.data.iter().any(|x| x.abs() > 1e-3));
    }

    #[test]
    fn metric_compatibility_and_codazzi() {
        for atlas in [cubic_graph(), whitney(), clifford()] {
            let pg = PointGeometry::compute(&atlas, ParamPoint::new(0.9, 0.4)).unwrap();
            assert!(pg.nabla_g.data.iter().all(|x| x.abs() < 1e-12));
            assert!(pg.nabla_a.max_swap_defect(0, 1) < 1e-9);
        }
    }

    #[test]
    fn whitney_gauss_routes_agree_away_from_poles() {
        let k = gauss_curvature(&whitney(), ParamPoint::new(PI / 3.0, 1.0)).unwrap();
        assert!((k.intrinsic - k.extrinsic).abs() < 1e-10);
        assert!((k.intrinsic - k.lagrangian).abs() < 1e-10);
        assert!(k.intrinsic > 0.0);
    }

    #[test]
    fn non_lagrangian_points_are_refused() {
        let s = build_surface(&SurfaceSpec::RoundSphere { radius: 1.0 }).unwrap();
        assert!(matches!(
            second_form(&s, ParamPoint::new(1.0, 1.0)),
            Err(Error::NotLagrangian { .. })
        ));
        assert!(first_fundamental(&s, ParamPoint::new(1.0, 1.0)).is_ok());
    }

    #[test]
    fn order_too_low_is_rejected() {
        assert!(PointGeometry::compute_with_order(&plane(), ParamPoint::new(0.0, 0.0), 3).is_err());
    }
}
