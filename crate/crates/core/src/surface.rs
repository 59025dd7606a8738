//! Parametric immersions `f: Σ → R⁴` given by charts, and the built-in
//! surface families.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ambient::{dot_jets, omega_jets, Symplectomorphism, Vector4};
use crate::error::{Error, Result};
use crate::jets::{Jet2, Lift, MAX_ORDER};
use crate::poly::Poly2;

/// Below this `√det g` an immersion is treated as rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// A parameter point in one chart of an atlas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub chart: usize,
    pub u: f64,
    pub v: f64,
}

impl ParamPoint {
    pub fn new(u: f64, v: f64) -> Self {
        ParamPoint { chart: 0, u, v }
    }

    pub fn uv(&self) -> [f64; 2] {
        [self.u, self.v]
    }
}

/// The immersion formula of a chart.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartMap {
    /// `s·b₁ + t·b₂`.
    Plane { b1: Vector4, b2: Vector4 },
    /// The Whitney immersion composed with spherical coordinates `(θ, φ)`.
    Whitney { r: f64, center: Vector4 },
    /// `(a₁cosθ, a₁sinθ, a₂cosφ, a₂sinφ)`.
    Torus { a1: f64, a2: f64 },
    /// `(x₁, ∂₁u, x₂, ∂₂u)`; stores the gradient of the potential.
    GradientGraph { grad: [Poly2; 2] },
    /// Round sphere in the `(x₁, y₁, x₂)` hyperplane; not Lagrangian.
    RoundSphere { radius: f64 },
    /// A spherical map in coordinates `(α, β)` with
    /// `x = (cos α, sin α cos β, sin α sin β)`, whose poles lie on the equator
    /// of the polar coordinates.
    Tilted { base: Box<ChartMap> },
    /// `base(M·(s, t) + offset)`.
    Reparam {
        base: Box<ChartMap>,
        matrix: [[f64; 2]; 2],
        offset: [f64; 2],
    },
}

impl ChartMap {
    /// The map as a function of a point `x` of the unit sphere in `R³`, for
    /// the spherical families.
    pub fn on_sphere(&self, x: &[Jet2; 3]) -> Option<[Jet2; 4]> {
        match self {
            ChartMap::Whitney { r, center } => {
                let w = (x[2] * x[2] + 1.0).recip().scale(*r);
                let (a, b) = (w * x[0], w * x[1]);
                Some([
                    a + center.0[0],
                    a * x[2] + center.0[1],
                    b + center.0[2],
                    b * x[2] + center.0[3],
                ])
            }
            ChartMap::RoundSphere { radius } => Some([
                x[0].scale(*radius),
                x[1].scale(*radius),
                x[2].scale(*radius),
                Jet2::zero(x[0].order()),
            ]),
            _ => None,
        }
    }

    pub fn eval(&self, u: &Jet2, v: &Jet2) -> [Jet2; 4] {
        match self {
            ChartMap::Plane { b1, b2 } => {
                std::array::from_fn(|k| u.scale(b1.0[k]) + v.scale(b2.0[k]))
            }
            ChartMap::Whitney { .. } | ChartMap::RoundSphere { .. } => {
                let st = u.sin();
                let x = [st * v.cos(), st * v.sin(), u.cos()];
                self.on_sphere(&x).expect("spherical chart")
            }
            ChartMap::Tilted { base } => {
                let sa = u.sin();
                let x = [u.cos(), sa * v.cos(), sa * v.sin()];
                base.on_sphere(&x)
                    .expect("tilted charts wrap spherical maps")
            }
            ChartMap::Torus { a1, a2 } => [
                u.cos().scale(*a1),
                u.sin().scale(*a1),
                v.cos().scale(*a2),
                v.sin().scale(*a2),
            ],
            ChartMap::GradientGraph { grad } => {
                [*u, grad[0].eval_jet(u, v), *v, grad[1].eval_jet(u, v)]
            }
            ChartMap::Reparam {
                base,
                matrix,
                offset,
            } => {
                let a = u.scale(matrix[0][0]) + v.scale(matrix[0][1]) + offset[0];
                let b = u.scale(matrix[1][0]) + v.scale(matrix[1][1]) + offset[1];
                base.eval(&a, &b)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    /// `[[u₀, u₁], [v₀, v₁]]`.
    pub domain: [[f64; 2]; 2],
    pub map: ChartMap,
    /// Distance kept from edges flagged in `singular_edges`.
    pub exclusion_margin: f64,
    /// Per parameter direction: whether the edges of that direction are
    /// chart-degenerate (spherical poles).
    pub singular_edges: [bool; 2],
    /// Per parameter direction: whether the chart wraps around periodically.
    pub periodic: [bool; 2],
    /// Second parametrization used for pointwise evaluation near the poles
    /// of a spherical chart.
    pub tilted: Option<ChartMap>,
}

impl Chart {
    fn new(domain: [[f64; 2]; 2], map: ChartMap) -> Self {
        Chart {
            domain,
            map,
            exclusion_margin: 0.0,
            singular_edges: [false; 2],
            periodic: [false; 2],
            tilted: None,
        }
    }

    /// Admissible: inside the closed domain and at least `exclusion_margin`
    /// away from singular edges.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        (0..2).all(|k| {
            let m = if self.singular_edges[k] {
                self.exclusion_margin
            } else {
                0.0
            };
            p[k] >= self.domain[k][0] + m && p[k] <= self.domain[k][1] - m
        })
    }

    pub fn contains_with_margin(&self, p: [f64; 2], margin: f64) -> bool {
        (0..2).all(|k| p[k] >= self.domain[k][0] + margin && p[k] <= self.domain[k][1] - margin)
    }

    /// The tilted coordinates of `p` when evaluation should use them, that is
    /// on a spherical chart with `|cos θ| > ½`.
    pub fn tilted_point(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        if self.tilted.is_none() || p[0].cos().abs() <= 0.5 {
            return None;
        }
        let (st, ct) = p[0].sin_cos();
        let (sp, cp) = p[1].sin_cos();
        Some([(st * cp).clamp(-1.0, 1.0).acos(), ct.atan2(st * sp)])
    }

    pub fn lengths(&self) -> [f64; 2] {
        [
            self.domain[0][1] - self.domain[0][0],
            self.domain[1][1] - self.domain[1][0],
        ]
    }

    /// The same surface seen through the affine parameter change
    /// `(s, t) ↦ M·(s, t) + offset`, on the given new domain.
    pub fn reparametrized(
        &self,
        matrix: [[f64; 2]; 2],
        offset: [f64; 2],
        domain: [[f64; 2]; 2],
    ) -> Chart {
        Chart {
            domain,
            map: ChartMap::Reparam {
                base: Box::new(self.map.clone()),
                matrix,
                offset,
            },
            exclusion_margin: 0.0,
            singular_edges: [false; 2],
            periodic: [false; 2],
            tilted: None,
        }
    }
}

/// Euler characteristic, or `Open` for surfaces with boundary or noncompact ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Closed(i32),
    Open,
}

impl Serialize for Topology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Topology::Closed(chi) => s.serialize_i32(*chi),
            Topology::Open => s.serialize_str("open"),
        }
    }
}

/// Surface description as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    Plane {
        basis: [Vector4; 2],
        #[serde(default = "unit_square")]
        domain: [[f64; 2]; 2],
    },
    Whitney {
        r: f64,
        #[serde(default)]
        center: Vector4,
    },
    Torus {
        a1: f64,
        a2: f64,
    },
    GradientGraph {
        potential: Poly2,
        #[serde(default = "unit_square")]
        domain: [[f64; 2]; 2],
    },
    RoundSphere {
        #[serde(default = "one")]
        radius: f64,
    },
    Deformed {
        base: Box<SurfaceSpec>,
        map: Symplectomorphism,
    },
}

fn unit_square() -> [[f64; 2]; 2] {
    [[-1.0, 1.0], [-1.0, 1.0]]
}

fn one() -> f64 {
    1.0
}

impl SurfaceSpec {
    pub fn whitney(r: f64, center: Vector4) -> Self {
        SurfaceSpec::Whitney { r, center }
    }

    pub fn clifford_torus() -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        SurfaceSpec::Torus { a1: a, a2: a }
    }

    pub fn deformed(self, map: Symplectomorphism) -> Self {
        SurfaceSpec::Deformed {
            base: Box::new(self),
            map,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SurfaceSpec::Plane { basis, .. } => {
                format!("plane(b1={:?}, b2={:?})", basis[0].0, basis[1].0)
            }
            SurfaceSpec::Whitney { r, center } => format!("whitney(r={r}, center={:?})", center.0),
            SurfaceSpec::Torus { a1, a2 } => format!("torus(a1={a1}, a2={a2})"),
            SurfaceSpec::GradientGraph { potential, .. } => {
                format!("gradient_graph(degree={})", potential.degree())
            }
            SurfaceSpec::RoundSphere { radius } => format!("round_sphere(radius={radius})"),
            SurfaceSpec::Deformed { base, .. } => format!("deformed({})", base.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceAtlas {
    pub charts: Vec<Chart>,
    pub topology: Topology,
    pub closed: bool,
    /// Applied in list order after the chart map.
    pub post_maps: Vec<Symplectomorphism>,
    pub label: String,
}

fn check_finite(field: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, "must be finite"))
    }
}

fn check_domain(domain: &[[f64; 2]; 2]) -> Result<()> {
    for d in domain {
        check_finite("domain", d[0])?;
        check_finite("domain", d[1])?;
        if !(d[0] < d[1]) {
            return Err(Error::invalid("domain", "each interval needs lo < hi"));
        }
    }
    Ok(())
}

/// Builds the atlas described by `spec`, validating its parameters.
pub fn build_surface(spec: &SurfaceSpec) -> Result<SurfaceAtlas> {
    let label = spec.label();
    match spec {
        SurfaceSpec::Plane { basis, domain } => {
            check_domain(domain)?;
            let [b1, b2] = basis;
            let w = crate::ambient::omega(b1, b2);
            if w.abs() > 1e-12 {
                return Err(Error::invalid(
                    "basis",
                    format!("not Lagrangian: omega(b1, b2) = {w:e}"),
                ));
            }
            let gram = [b1.dot(b1) - 1.0, b2.dot(b2) - 1.0, b1.dot(b2)];
            if gram.iter().any(|x| x.abs() > 1e-12) {
                return Err(Error::invalid("basis", "vectors must be orthonormal"));
            }
            Ok(SurfaceAtlas {
                charts: vec![Chart::new(*domain, ChartMap::Plane { b1: *b1, b2: *b2 })],
                topology: Topology::Open,
                closed: false,
                post_maps: Vec::new(),
                label,
            })
        }
        SurfaceSpec::Whitney { r, center } => {
            check_finite("r", *r)?;
            if *r <= 0.0 {
                return Err(Error::invalid("r", "radius must be positive"));
            }
            Ok(SurfaceAtlas {
                charts: vec![spherical_chart(ChartMap::Whitney {
                    r: *r,
                    center: *center,
                })],
                topology: Topology::Closed(2),
                closed: true,
                post_maps: Vec::new(),
                label,
            })
        }
        SurfaceSpec::Torus { a1, a2 } => {
            for (name, a) in [("a1", a1), ("a2", a2)] {
                check_finite(name, *a)?;
                if *a <= 0.0 {
                    return Err(Error::invalid(name, "radius must be positive"));
                }
            }
            let mut chart = Chart::new(
                [[0.0, 2.0 * PI], [0.0, 2.0 * PI]],
                ChartMap::Torus { a1: *a1, a2: *a2 },
            );
            chart.periodic = [true, true];
            Ok(SurfaceAtlas {
                charts: vec![chart],
                topology: Topology::Closed(0),
                closed: true,
                post_maps: Vec::new(),
                label,
            })
        }
        SurfaceSpec::GradientGraph { potential, domain } => {
            check_domain(domain)?;
            Ok(SurfaceAtlas {
                charts: vec![Chart::new(
                    *domain,
                    ChartMap::GradientGraph {
                        grad: potential.gradient(),
                    },
                )],
                topology: Topology::Open,
                closed: false,
                post_maps: Vec::new(),
                label,
            })
        }
        SurfaceSpec::RoundSphere { radius } => {
            check_finite("radius", *radius)?;
            if *radius <= 0.0 {
                return Err(Error::invalid("radius", "radius must be positive"));
            }
            Ok(SurfaceAtlas {
                charts: vec![spherical_chart(ChartMap::RoundSphere { radius: *radius })],
                topology: Topology::Closed(2),
                closed: true,
                post_maps: Vec::new(),
                label,
            })
        }
        SurfaceSpec::Deformed { base, map } => {
            let mut atlas = build_surface(base)?;
            atlas.post_maps.push(map.clone());
            atlas.label = label;
            Ok(atlas)
        }
    }
}

fn spherical_chart(map: ChartMap) -> Chart {
    let mut chart = Chart::new([[0.0, PI], [0.0, 2.0 * PI]], map);
    chart.exclusion_margin = 1e-6;
    chart.singular_edges = [true, false];
    chart.periodic = [false, true];
    chart.tilted = Some(ChartMap::Tilted {
        base: Box::new(chart.map.clone()),
    });
    chart
}

impl SurfaceAtlas {
    pub fn chart(&self, idx: usize) -> Result<&Chart> {
        self.charts
            .get(idx)
            .ok_or_else(|| Error::invalid("chart", format!("no chart with index {idx}")))
    }

    pub fn euler_characteristic(&self) -> Option<i32> {
        match self.topology {
            Topology::Closed(chi) => Some(chi),
            Topology::Open => None,
        }
    }

    /// Applies `post` after the existing post-maps.
    pub fn deform(&self, post: Symplectomorphism) -> SurfaceAtlas {
        let mut out = self.clone();
        out.post_maps.push(post);
        out.label = format!("deformed({})", self.label);
        out
    }

    /// Jets of the four immersion components at `p`, post-maps included.
    pub fn immersion_jets(&self, chart: usize, p: [f64; 2], order: usize) -> Result<[Jet2; 4]> {
        let ch = self.chart(chart)?;
        if !ch.contains(p) || !p.iter().all(|x| x.is_finite()) {
            return Err(Error::OutsideChart {
                chart,
                u: p[0],
                v: p[1],
            });
        }
        self.jets_through(&ch.map, chart, p, order)
    }

    /// Jets of the immersion in the tilted coordinates `q` of a spherical
    /// chart.
    pub fn tilted_jets(&self, chart: usize, q: [f64; 2], order: usize) -> Result<[Jet2; 4]> {
        let map = self.chart(chart)?.tilted.as_ref().ok_or_else(|| {
            Error::invalid("chart", format!("chart {chart} has no tilted coordinates"))
        })?;
        self.jets_through(map, chart, q, order)
    }

    fn jets_through(
        &self,
        map: &ChartMap,
        chart: usize,
        p: [f64; 2],
        order: usize,
    ) -> Result<[Jet2; 4]> {
        if order > MAX_ORDER {
            return Err(crate::error::JetError::OrderTooLarge(order).into());
        }
        let u = Jet2::variable(p[0], Lift::U, order);
        let v = Jet2::variable(p[1], Lift::V, order);
        let mut f = map.eval(&u, &v);
        for s in &self.post_maps {
            f = s.apply_jets(&f);
        }
        if f.iter().any(|j| !j.is_finite()) {
            return Err(Error::SingularEvaluation {
                what: "non-finite immersion jet".into(),
                chart,
                u: p[0],
                v: p[1],
            });
        }
        Ok(f)
    }

    pub fn position(&self, p: ParamPoint) -> Result<Vector4> {
        let f = self.immersion_jets(p.chart, p.uv(), 0)?;
        Ok(Vector4(f.map(|j| j.value())))
    }
}

/// `|ω(∂₁f, ∂₂f)| / √det g`: zero exactly where the immersion is Lagrangian.
pub fn lagrangian_defect(atlas: &SurfaceAtlas, p: ParamPoint) -> Result<f64> {
    let f = atlas.immersion_jets(p.chart, p.uv(), 1)?;
    let du = f.map(|j| j.partial(0));
    let dv = f.map(|j| j.partial(1));
    let g11 = dot_jets(&du, &du).value();
    let g12 = dot_jets(&du, &dv).value();
    let g22 = dot_jets(&dv, &dv).value();
    let sqrt_det = (g11 * g22 - g12 * g12).max(0.0).sqrt();
    if !(sqrt_det > RANK_TOL) {
        return Err(Error::RankDeficient {
            chart: p.chart,
            u: p.u,
            v: p.v,
            sqrt_det,
        });
    }
    Ok(omega_jets(&du, &dv).value().abs() / sqrt_det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::apply_j;

    fn whitney1() -> SurfaceAtlas {
        build_surface(&SurfaceSpec::whitney(1.0, Vector4::ZERO)).unwrap()
    }

    #[test]
    fn whitney_equator_and_poles() {
        let w = whitney1();
        // (x1, x2, x3) = (1, 0, 0) is θ = π/2, φ = 0
        let p = w.position(ParamPoint::new(PI / 2.0, 0.0)).unwrap();
        for (a, b) in p.0.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        // near both poles the image approaches the double point at the origin
        for theta in [1e-6, PI - 1e-6] {
            let q = w.position(ParamPoint::new(theta, 0.8)).unwrap();
            assert!(q.norm() < 2e-6);
        }
        // at the poles themselves the formula gives the origin exactly
        let f = ChartMap::Whitney {
            r: 1.0,
            center: Vector4::ZERO,
        };
        for theta in [0.0, PI] {
            let out = f.eval(&Jet2::constant(theta, 0), &Jet2::constant(0.3, 0));
            assert!(out.iter().all(|j| j.value().abs() < 1e-15));
        }
    }

    #[test]
    fn gradient_graph_point() {
        let u = Poly2::from_terms(&[(3, 0, 1.0 / 6.0), (0, 3, 1.0 / 6.0)]).unwrap();
        let s = build_surface(&SurfaceSpec::GradientGraph {
            potential: u,
            domain: [[-2.0, 2.0], [-2.0, 2.0]],
        })
        .unwrap();
        let p = s.position(ParamPoint::new(1.0, 1.0)).unwrap();
        assert_eq!(p, Vector4::new(1.0, 0.5, 1.0, 0.5));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(matches!(
            build_surface(&SurfaceSpec::whitney(0.0, Vector4::ZERO)),
            Err(Error::InvalidParameter { field, .. }) if field == "r"
        ));
        let bad_plane = SurfaceSpec::Plane {
            basis: [
                Vector4::new(1.0, 0.0, 0.0, 0.0),
                Vector4::new(0.0, 1.0, 0.0, 0.0),
            ],
            domain: unit_square(),
        };
        assert!(matches!(
            build_surface(&bad_plane),
            Err(Error::InvalidParameter { field, .. }) if field == "basis"
        ));
    }

    #[test]
    fn lagrangian_defect_examples() {
        let w = whitney1();
        for &(t, p) in &[(0.3, 0.1), (1.0, 0.7), (2.5, 4.0), (PI / 2.0, 6.2)] {
            assert!(lagrangian_defect(&w, ParamPoint::new(t, p)).unwrap() < 1e-12);
        }
        let g = build_surface(&SurfaceSpec::GradientGraph {
            potential: Poly2::from_terms(&[(4, 0, 0.3), (2, 2, -0.7), (1, 3, 0.2), (0, 2, 1.0)])
                .unwrap(),
            domain: unit_square(),
        })
        .unwrap();
        assert!(lagrangian_defect(&g, ParamPoint::new(0.4, -0.6)).unwrap() < 1e-14);
        let s = build_surface(&SurfaceSpec::RoundSphere { radius: 1.0 }).unwrap();
        assert!(lagrangian_defect(&s, ParamPoint::new(PI / 4.0, PI / 4.0)).unwrap() > 0.1);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let s = build_surface(&SurfaceSpec::RoundSphere { radius: 1.0 }).unwrap();
        let mut atlas = s.clone();
        atlas.charts[0].exclusion_margin = 0.0;
        assert!(matches!(
            lagrangian_defect(&atlas, ParamPoint::new(0.0, 1.0)),
            Err(Error::RankDeficient { .. })
        ));
        assert!(matches!(
            lagrangian_defect(&s, ParamPoint::new(0.0, 1.0)),
            Err(Error::OutsideChart { .. })
        ));
    }

    #[test]
    fn whitney_radius_scaling() {
        let c = Vector4::new(1.0, -0.5, 0.25, 2.0);
        let w1 = whitney1();
        let w2 = build_surface(&SurfaceSpec::whitney(2.0, c)).unwrap();
        for k in 0..20 {
            let p = ParamPoint::new(0.1 + 0.14 * k as f64, 0.31 * k as f64);
            let a = w1.position(p).unwrap().scale(2.0).add(&c);
            let b = w2.position(p).unwrap();
            assert!(a.sub(&b).norm() < 1e-14);
        }
    }

    #[test]
    fn tangent_plane_is_totally_real() {
        // J maps the tangent plane of a Lagrangian surface to its normal plane
        let w = whitney1();
        let f = w.immersion_jets(0, [1.1, 2.3], 1).unwrap();
        let du = Vector4(f.map(|j| j.derivative(1, 0).unwrap()));
        let dv = Vector4(f.map(|j| j.derivative(0, 1).unwrap()));
        for t in [du, dv] {
            let jt = apply_j(&t);
            assert!(jt.dot(&du).abs() < 1e-14 && jt.dot(&dv).abs() < 1e-14);
        }
    }

    #[test]
    fn spec_json_parses() {
        let s: SurfaceSpec = serde_json::from_str(
            r#"{"kind":"deformed","base":{"kind":"whitney","r":1.0},
                "map":{"kind":"hshear","potential":[{"degrees":[2,1],"coeff":0.1}]}}"#,
        )
        .unwrap();
        let atlas = build_surface(&s).unwrap();
        assert_eq!(atlas.post_maps.len(), 1);
        assert!(atlas.closed);
        let err = serde_json::from_str::<SurfaceSpec>(r#"{"kind":"torus","a1":1.0}"#).unwrap_err();
        assert!(err.to_string().contains("a2"));
    }
}
