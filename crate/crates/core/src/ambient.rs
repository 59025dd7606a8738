//! Flat ambient space `R⁴ ≅ C²` with coordinates ordered `(x₁, y₁, x₂, y₂)`,
//! its Euclidean metric, the symplectic form `ω = dx₁∧dy₁ + dx₂∧dy₂`, the
//! complex structure `J`, and closed-form symplectomorphisms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Jet2, Lift};
use crate::poly::Poly2;

/// A point or vector of `R⁴` in the order `(x₁, y₁, x₂, y₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Vector4(pub [f64; 4]);

impl TryFrom<[f64; 4]> for Vector4 {
    type Error = Error;
    fn try_from(a: [f64; 4]) -> Result<Self> {
        Vector4::checked(a)
    }
}

impl From<Vector4> for [f64; 4] {
    fn from(v: Vector4) -> Self {
        v.0
    }
}

impl Vector4 {
    pub const ZERO: Vector4 = Vector4([0.0; 4]);

    pub const fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Vector4([x1, y1, x2, y2])
    }

    /// Rejects NaN and infinite components.
    pub fn checked(a: [f64; 4]) -> Result<Self> {
        if a.iter().all(|c| c.is_finite()) {
            Ok(Vector4(a))
        } else {
            Err(Error::invalid("vector", "components must be finite"))
        }
    }

    pub fn dot(&self, other: &Vector4) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vector4 {
        Vector4(self.0.map(|c| c * s))
    }

    pub fn add(&self, other: &Vector4) -> Vector4 {
        Vector4(std::array::from_fn(|k| self.0[k] + other.0[k]))
    }

    pub fn sub(&self, other: &Vector4) -> Vector4 {
        Vector4(std::array::from_fn(|k| self.0[k] - other.0[k]))
    }
}

/// `J(x₁, y₁, x₂, y₂) = (−y₁, x₁, −y₂, x₂)`.
pub fn apply_j(v: &Vector4) -> Vector4 {
    let [x1, y1, x2, y2] = v.0;
    Vector4([-y1, x1, -y2, x2])
}

/// `J` acting on jet-valued vectors.
pub fn apply_j_jets(v: &[Jet2; 4]) -> [Jet2; 4] {
    [-v[1], v[0], -v[3], v[2]]
}

pub fn omega(v: &Vector4, w: &Vector4) -> f64 {
    v.0[0] * w.0[1] - v.0[1] * w.0[0] + v.0[2] * w.0[3] - v.0[3] * w.0[2]
}

pub fn omega_jets(v: &[Jet2; 4], w: &[Jet2; 4]) -> Jet2 {
    v[0] * w[1] - v[1] * w[0] + v[2] * w[3] - v[3] * w[2]
}

pub fn dot_jets(v: &[Jet2; 4], w: &[Jet2; 4]) -> Jet2 {
    v[0] * w[0] + v[1] * w[1] + v[2] * w[2] + v[3] * w[3]
}

/// `⟨v, w⟩ − ω(v, Jw)`, identically zero for the standard structures.
pub fn compatibility_residual(v: &Vector4, w: &Vector4) -> f64 {
    v.dot(w) - omega(v, &apply_j(w))
}

/// Matrix of `ω`: `ω(v, w) = vᵀ Ω w`.
pub const OMEGA_MATRIX: [[f64; 4]; 4] = [
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
];

/// Tolerance on `MᵀΩM − Ω` for linear symplectic maps.
pub const SYMPLECTIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SymplectoKind {
    /// `p ↦ M p`.
    Linear([[f64; 4]; 4]),
    /// `(x, y) ↦ (x, y + ∇W(x))` with `W` a polynomial in `(x₁, x₂)`.
    HorizontalShear(Poly2),
    /// `(x, y) ↦ (x + ∇V(y), y)` with `V` a polynomial in `(y₁, y₂)`.
    VerticalShear(Poly2),
    /// Applied right to left: the last map acts first.
    Compose(Vec<Symplectomorphism>),
}

/// An exact symplectomorphism of `R⁴`, validated at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymplectoRepr", into = "SymplectoRepr")]
pub struct Symplectomorphism {
    kind: SymplectoKind,
    // cached potential gradients for the shears
    grad: Option<[Poly2; 2]>,
}

impl Symplectomorphism {
    pub fn identity() -> Self {
        Symplectomorphism {
            kind: SymplectoKind::Compose(Vec::new()),
            grad: None,
        }
    }

    pub fn linear(m: [[f64; 4]; 4]) -> Result<Self> {
        let defect = symplectic_defect(&m);
        if !(defect <= SYMPLECTIC_TOL) {
            return Err(Error::NotSymplectic(defect));
        }
        Ok(Symplectomorphism {
            kind: SymplectoKind::Linear(m),
            grad: None,
        })
    }

    pub fn horizontal_shear(potential: Poly2) -> Self {
        let grad = Some(potential.gradient());
        Symplectomorphism {
            kind: SymplectoKind::HorizontalShear(potential),
            grad,
        }
    }

    pub fn vertical_shear(potential: Poly2) -> Self {
        let grad = Some(potential.gradient());
        Symplectomorphism {
            kind: SymplectoKind::VerticalShear(potential),
            grad,
        }
    }

    pub fn compose(maps: Vec<Symplectomorphism>) -> Self {
        Symplectomorphism {
            kind: SymplectoKind::Compose(maps),
            grad: None,
        }
    }

    /// Rotation by `a₁` in the `(x₁, y₁)` plane and `a₂` in the `(x₂, y₂)`
    /// plane: multiplication by `diag(e^{i a₁}, e^{i a₂})` on `C²`.
    pub fn phase_rotation(a1: f64, a2: f64) -> Self {
        let (s1, c1) = a1.sin_cos();
        let (s2, c2) = a2.sin_cos();
        let m = [
            [c1, -s1, 0.0, 0.0],
            [s1, c1, 0.0, 0.0],
            [0.0, 0.0, c2, -s2],
            [0.0, 0.0, s2, c2],
        ];
        Symplectomorphism::linear(m).expect("phase rotations are symplectic")
    }

    /// The real rotation of `C²` by angle `t` mixing `z₁` and `z₂`.
    pub fn real_rotation(t: f64) -> Self {
        let (s, c) = t.sin_cos();
        let m = [
            [c, 0.0, -s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, s, 0.0, c],
        ];
        Symplectomorphism::linear(m).expect("real rotations are symplectic")
    }

    pub fn kind(&self) -> &SymplectoKind {
        &self.kind
    }

    pub fn apply(&self, p: &Vector4) -> Vector4 {
        let jets = p.0.map(|c| Jet2::constant(c, 0));
        Vector4(self.apply_jets(&jets).map(|j| j.value()))
    }

    /// Applies the map to a jet-valued point so that derivatives propagate.
    pub fn apply_jets(&self, p: &[Jet2; 4]) -> [Jet2; 4] {
        match &self.kind {
            SymplectoKind::Linear(m) => std::array::from_fn(|i| {
                let mut acc = p[0].scale(m[i][0]);
                for j in 1..4 {
                    acc += p[j].scale(m[i][j]);
                }
                acc
            }),
            SymplectoKind::HorizontalShear(_) => {
                let [gx, gy] = self.grad.as_ref().expect("shear gradient cached");
                let d1 = gx.eval_jet(&p[0], &p[2]);
                let d2 = gy.eval_jet(&p[0], &p[2]);
                [p[0], p[1] + d1, p[2], p[3] + d2]
            }
            SymplectoKind::VerticalShear(_) => {
                let [gx, gy] = self.grad.as_ref().expect("shear gradient cached");
                let d1 = gx.eval_jet(&p[1], &p[3]);
                let d2 = gy.eval_jet(&p[1], &p[3]);
                [p[0] + d1, p[1], p[2] + d2, p[3]]
            }
            SymplectoKind::Compose(maps) => maps.iter().rev().fold(*p, |q, s| s.apply_jets(&q)),
        }
    }

    /// True when the map is a linear map that is also orthogonal (unitary on
    /// `C²`), i.e. an isometry of the ambient space.
    pub fn is_unitary(&self) -> bool {
        match &self.kind {
            SymplectoKind::Linear(m) => {
                let mut worst: f64 = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        let mtm: f64 = (0..4).map(|k| m[k][i] * m[k][j]).sum();
                        let id = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((mtm - id).abs());
                    }
                }
                worst <= SYMPLECTIC_TOL
            }
            SymplectoKind::Compose(maps) => maps.iter().all(|m| m.is_unitary()),
            _ => false,
        }
    }
}

/// `max |MᵀΩM − Ω|` entrywise.
pub fn symplectic_defect(m: &[[f64; 4]; 4]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    s += m[a][i] * OMEGA_MATRIX[a][b] * m[b][j];
                }
            }
            let d = (s - OMEGA_MATRIX[i][j]).abs();
            worst = if d.is_nan() { f64::NAN } else { worst.max(d) };
        }
    }
    worst
}

/// `ω(dS·v, dS·w) − ω(v, w)` at `p`, with the differential taken exactly
/// through jets.
pub fn map_pullback_defect(s: &Symplectomorphism, p: &Vector4, v: &Vector4, w: &Vector4) -> f64 {
    let a = Jet2::variable(0.0, Lift::U, 1);
    let b = Jet2::variable(0.0, Lift::V, 1);
    let q: [Jet2; 4] = std::array::from_fn(|k| a.scale(v.0[k]) + b.scale(w.0[k]) + p.0[k]);
    let img = s.apply_jets(&q);
    let ds = img.map(|j| j.partial(0));
    let dt = img.map(|j| j.partial(1));
    omega_jets(&ds, &dt).value() - omega(v, w)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MatrixRepr {
    Rows([[f64; 4]; 4]),
    Flat(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum SymplectoRepr {
    Linear { matrix: MatrixRepr },
    Hshear { potential: Poly2 },
    Vshear { potential: Poly2 },
    Compose { maps: Vec<Symplectomorphism> },
}

impl TryFrom<SymplectoRepr> for Symplectomorphism {
    type Error = Error;
    fn try_from(r: SymplectoRepr) -> Result<Self> {
        Ok(match r {
            SymplectoRepr::Linear { matrix } => {
                let rows = match matrix {
                    MatrixRepr::Rows(rows) => rows,
                    MatrixRepr::Flat(flat) => {
                        if flat.len() != 16 {
                            return Err(Error::invalid(
                                "matrix",
                                format!("expected 16 row-major entries, got {}", flat.len()),
                            ));
                        }
                        std::array::from_fn(|i| std::array::from_fn(|j| flat[4 * i + j]))
                    }
                };
                Symplectomorphism::linear(rows)?
            }
            SymplectoRepr::Hshear { potential } => Symplectomorphism::horizontal_shear(potential),
            SymplectoRepr::Vshear { potential } => Symplectomorphism::vertical_shear(potential),
            SymplectoRepr::Compose { maps } => Symplectomorphism::compose(maps),
        })
    }
}

impl From<Symplectomorphism> for SymplectoRepr {
    fn from(s: Symplectomorphism) -> Self {
        match s.kind {
            SymplectoKind::Linear(m) => SymplectoRepr::Linear {
                matrix: MatrixRepr::Rows(m),
            },
            SymplectoKind::HorizontalShear(p) => SymplectoRepr::Hshear { potential: p },
            SymplectoKind::VerticalShear(p) => SymplectoRepr::Vshear { potential: p },
            SymplectoKind::Compose(maps) => SymplectoRepr::Compose { maps },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complex_structure_examples() {
        assert_eq!(
            apply_j(&Vector4::new(1.0, 0.0, 0.0, 0.0)),
            Vector4::new(0.0, 1.0, 0.0, 0.0)
        );
        assert_eq!(
            apply_j(&Vector4::new(0.0, 1.0, 0.0, 0.0)),
            Vector4::new(-1.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(
            apply_j(&Vector4::new(0.0, 0.0, 2.0, 3.0)),
            Vector4::new(0.0, 0.0, -3.0, 2.0)
        );
    }

    #[test]
    fn symplectic_form_examples() {
        let e = |k: usize| {
            let mut a = [0.0; 4];
            a[k] = 1.0;
            Vector4(a)
        };
        assert_eq!(omega(&e(0), &e(1)), 1.0);
        assert_eq!(omega(&e(0), &e(3)), 0.0);
        let v = Vector4::new(0.3, -1.2, 2.0, 0.7);
        assert_eq!(omega(&v, &v), 0.0);
    }

    #[test]
    fn compatibility_examples() {
        let e = |k: usize| {
            let mut a = [0.0; 4];
            a[k] = 1.0;
            Vector4(a)
        };
        assert_eq!(compatibility_residual(&e(0), &e(0)), 0.0);
        assert_eq!(compatibility_residual(&e(1), &e(2)), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let v = Vector4(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            let w = Vector4(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            worst = worst.max(compatibility_residual(&v, &w).abs());
        }
        assert!(worst < 1e-14, "{worst}");
    }

    #[test]
    fn shear_and_identity_examples() {
        let w = Poly2::from_terms(&[(2, 0, 0.5)]).unwrap();
        let s = Symplectomorphism::horizontal_shear(w);
        assert_eq!(
            s.apply(&Vector4::new(1.0, 0.0, 0.0, 0.0)),
            Vector4::new(1.0, 1.0, 0.0, 0.0)
        );

        let mut id = [[0.0; 4]; 4];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let lin = Symplectomorphism::linear(id).unwrap();
        let p = Vector4::new(0.1, 0.2, -0.3, 4.0);
        assert_eq!(lin.apply(&p), p);
    }

    #[test]
    fn shear_preserves_omega() {
        let s = Symplectomorphism::horizontal_shear(Poly2::from_terms(&[(1, 1, 1.0)]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let mut r = || Vector4(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            let (p, v, w) = (r(), r(), r());
            worst = worst.max(map_pullback_defect(&s, &p, &v, &w).abs());
        }
        assert!(worst < 1e-14, "{worst}");
    }

    #[test]
    fn rejects_non_symplectic_linear_maps() {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        m[0][0] = 2.0;
        assert!(matches!(
            Symplectomorphism::linear(m),
            Err(Error::NotSymplectic(_))
        ));
        let json = r#"{"kind":"linear","matrix":[2,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]}"#;
        assert!(serde_json::from_str::<Symplectomorphism>(json).is_err());
    }

    #[test]
    fn composition_applies_right_to_left() {
        let shift_y1 =
            Symplectomorphism::horizontal_shear(Poly2::from_terms(&[(1, 0, 1.0)]).unwrap());
        let quarter = Symplectomorphism::phase_rotation(std::f64::consts::FRAC_PI_2, 0.0);
        // rotate first, then shift y1: (1,0,0,0) -> (0,1,0,0) -> (0,2,0,0)
        let c = Symplectomorphism::compose(vec![shift_y1, quarter]);
        let out = c.apply(&Vector4::new(1.0, 0.0, 0.0, 0.0));
        assert!((out.0[1] - 2.0).abs() < 1e-15 && out.0[0].abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"kind":"compose","maps":[
            {"kind":"hshear","potential":[{"degrees":[2,1],"coeff":0.1}]},
            {"kind":"vshear","potential":[{"degrees":[0,3],"coeff":-0.2}]},
            {"kind":"linear","matrix":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}]}"#;
        let s: Symplectomorphism = serde_json::from_str(json).unwrap();
        let back: Symplectomorphism =
            serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
        assert!(!s.is_unitary());
        assert!(Symplectomorphism::real_rotation(0.4).is_unitary());
    }

    fn arb_vec() -> impl Strategy<Value = Vector4> {
        proptest::array::uniform4(-100.0f64..100.0).prop_map(Vector4)
    }

    proptest! {
        #[test]
        fn j_squared_is_minus_identity(v in arb_vec()) {
            let jj = apply_j(&apply_j(&v));
            for k in 0..4 {
                prop_assert!((jj.0[k] + v.0[k]).abs() < 1e-15);
            }
        }

        #[test]
        fn metric_and_symplectic_form_are_compatible(v in arb_vec(), w in arb_vec()) {
            let scale = 1.0 + v.norm() * w.norm();
            prop_assert!(compatibility_residual(&v, &w).abs() < 1e-14 * scale);
        }

        #[test]
        fn every_constructible_map_preserves_omega(
            c in proptest::collection::vec(-1.0f64..1.0, 4),
            a in -3.0f64..3.0,
            p in arb_vec(), v in arb_vec(), w in arb_vec(),
        ) {
            let h = Symplectomorphism::horizontal_shear(
                Poly2::from_terms(&[(2, 1, c[0]), (0, 3, c[1])]).unwrap());
            let vs = Symplectomorphism::vertical_shear(
                Poly2::from_terms(&[(1, 1, c[2]), (3, 0, c[3])]).unwrap());
            let s = Symplectomorphism::compose(vec![h, Symplectomorphism::real_rotation(a), vs]);
            let p = p.scale(0.01);
            let v = v.scale(0.01);
            let w = w.scale(0.01);
            prop_assert!(map_pullback_defect(&s, &p, &v, &w).abs() < 1e-12);
        }
    }
}
