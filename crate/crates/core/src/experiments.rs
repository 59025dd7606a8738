//! Gap scans around closed seeds, the Sobolev ratio probe and Ǎ-based
//! recognition.

use rand::Rng;
use serde::Serialize;
use serde_json::Value;

use crate::ambient::{Symplectomorphism, Vector4};
use crate::error::{Error, Result};
use crate::geometry::PointGeometry;
use crate::integrate::{
    energy_report, map_nodes, pairwise_sum, quadrature_nodes, QuadratureSpec, TrigPolynomial,
};
use crate::jets::{Jet2, DEFAULT_ORDER};
use crate::surface::{build_surface, ParamPoint, SurfaceAtlas, SurfaceSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub t: f64,
    #[serde(rename = "E_checkA")]
    pub e_check_a: f64,
    pub sup_check_a: f64,
    pub sup_div_t: f64,
    #[serde(rename = "E_A")]
    pub e_a: f64,
    pub quad_error_estimate: f64,
    pub max_lagrangian_defect: f64,
    /// Set when the row could not be evaluated; numeric fields are then NaN.
    pub error: Option<String>,
}

impl ScanRow {
    pub const CSV_HEADER: &'static str = "t,E_checkA,sup_checkA,sup_divT,E_A,quad_err";

    pub fn csv_line(&self) -> String {
        format!(
            "{:?},{:?},{:?},{:?},{:?},{:?}",
            self.t,
            self.e_check_a,
            self.sup_check_a,
            self.sup_div_t,
            self.e_a,
            self.quad_error_estimate
        )
    }

    fn failed(t: f64, e: &Error) -> Self {
        ScanRow {
            t,
            e_check_a: f64::NAN,
            sup_check_a: f64::NAN,
            sup_div_t: f64::NAN,
            e_a: f64::NAN,
            quad_error_estimate: f64::NAN,
            max_lagrangian_defect: f64::NAN,
            error: Some(e.to_string()),
        }
    }
}

/// A symplectomorphism template in which string leaves `"t"`, `"-t"`,
/// `"c*t"` and `"t*c"` stand for multiples of the scan parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationFamily {
    template: Value,
}

impl DeformationFamily {
    pub fn from_json(text: &str) -> Result<Self> {
        let template: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let fam = DeformationFamily { template };
        fam.at(0.0)?;
        Ok(fam)
    }

    pub fn from_value(template: Value) -> Result<Self> {
        let fam = DeformationFamily { template };
        fam.at(0.0)?;
        Ok(fam)
    }

    /// `W = c · t · x₁^a x₂^b` as a horizontal shear.
    pub fn horizontal_monomial(degrees: [u32; 2], c: f64) -> Self {
        DeformationFamily {
            template: serde_json::json!({
                "kind": "hshear",
                "potential": [{"degrees": degrees, "coeff": format!("{c}*t")}]
            }),
        }
    }

    pub fn at(&self, t: f64) -> Result<Symplectomorphism> {
        let v = substitute(&self.template, t)?;
        serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn substitute(v: &Value, t: f64) -> Result<Value> {
    Ok(match v {
        Value::String(s) => match parse_t_expr(s) {
            Some(c) => Value::from(c * t),
            None => Value::String(s.clone()),
        },
        Value::Array(a) => Value::Array(a.iter().map(|x| substitute(x, t)).collect::<Result<_>>()?),
        Value::Object(o) => Value::Object(
            o.iter()
                .map(|(k, x)| Ok((k.clone(), substitute(x, t)?)))
                .collect::<Result<_>>()?,
        ),
        other => other.clone(),
    })
}

/// The coefficient `c` of an expression `c·t`, if the string is one.
fn parse_t_expr(s: &str) -> Option<f64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    match s.as_str() {
        "t" => return Some(1.0),
        "-t" => return Some(-1.0),
        _ => {}
    }
    if let Some(c) = s.strip_suffix("*t") {
        return c.parse().ok();
    }
    if let Some(c) = s.strip_prefix("t*") {
        return c.parse().ok();
    }
    None
}

fn check_identity_at_zero(family: &DeformationFamily) -> Result<()> {
    let id = family.at(0.0)?;
    let probes = [
        Vector4::new(0.3, -0.7, 1.1, 0.2),
        Vector4::new(-1.4, 0.5, -0.2, 0.9),
        Vector4::new(2.0, 1.0, -1.5, -0.4),
    ];
    for p in probes {
        if id.apply(&p).sub(&p).norm() > 1e-14 * (1.0 + p.norm()) {
            return Err(Error::invalid(
                "deform",
                "the family must be the identity at t = 0",
            ));
        }
    }
    Ok(())
}

fn scan_row(
    seed: &SurfaceSpec,
    map: Symplectomorphism,
    t: f64,
    q: &QuadratureSpec,
) -> Result<ScanRow> {
    let atlas = build_surface(&seed.clone().deformed(map))?;
    let nodes = quadrature_nodes(&atlas, q);
    let samples = map_nodes(&nodes, |n| {
        let pg = PointGeometry::compute_with_order(&atlas, n.point, DEFAULT_ORDER)?;
        let dmu = n.weight * pg.sqrt_det_g;
        Ok([
            pg.norm_check_a2 * dmu,
            pg.norm_a2 * dmu,
            pg.norm_check_a2.sqrt(),
            pg.div_t.norm(&pg.ginv),
            pg.lagrangian_defect,
        ])
    })?;
    let column = |k: usize| samples.iter().map(|s| s[k]).collect::<Vec<_>>();
    let sup = |k: usize| samples.iter().fold(0.0, |m: f64, s| m.max(s[k]));
    let e_check_a = pairwise_sum(&column(0));
    let quad_error_estimate = if q.richardson {
        (e_check_a - energy_report(&atlas, &q.doubled())?.e_check_a).abs()
    } else {
        0.0
    };
    Ok(ScanRow {
        t,
        e_check_a,
        sup_check_a: sup(2),
        sup_div_t: sup(3),
        e_a: pairwise_sum(&column(1)),
        quad_error_estimate,
        max_lagrangian_defect: sup(4),
        error: None,
    })
}

/// One row per grid value, in grid order. Rows that fail to evaluate carry
/// the error and the scan continues.
pub fn gap_scan(
    seed: &SurfaceSpec,
    family: &DeformationFamily,
    grid: &[f64],
    q: &QuadratureSpec,
) -> Result<Vec<ScanRow>> {
    let base = build_surface(seed)?;
    if !base.closed {
        return Err(Error::NotClosed(base.label));
    }
    check_identity_at_zero(family)?;
    if let Some(t) = grid.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::invalid(
            "grid",
            format!("deformation magnitudes must be finite and >= 0, got {t}"),
        ));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &t in grid {
        let row = family
            .at(t)
            .and_then(|map| scan_row(seed, map, t, q))
            .unwrap_or_else(|e| ScanRow::failed(t, &e));
        rows.push(row);
    }
    Ok(rows)
}

/// A scalar function on a chart, given through its jets.
pub trait ScalarField: Sync {
    fn jet(&self, p: ParamPoint, order: usize) -> Jet2;
}

impl ScalarField for TrigPolynomial {
    fn jet(&self, p: ParamPoint, order: usize) -> Jet2 {
        self.eval_jet(p.u, p.v, order)
    }
}

impl TrigPolynomial {
    /// A random trigonometric polynomial shifted by its coefficient mass,
    /// hence nonnegative.
    pub fn random_nonnegative(rng: &mut impl Rng, degree: i32) -> Self {
        let mut p = TrigPolynomial::random(rng, degree);
        let shift = p.l1_norm();
        if let Some(c) = p.terms.iter_mut().find(|t| t.freq == [0, 0]) {
            c.cos += shift;
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevProbe {
    /// `∫v² / ((∫|∇v|)² + (∫v|H|)²)` per test function; `None` when the
    /// denominator vanishes.
    pub ratios: Vec<Option<f64>>,
    pub max_ratio: Option<f64>,
}

pub fn sobolev_probe(
    atlas: &SurfaceAtlas,
    fields: &[&dyn ScalarField],
    q: &QuadratureSpec,
) -> Result<SobolevProbe> {
    let nodes = quadrature_nodes(atlas, q);
    let samples = map_nodes(&nodes, |n| {
        let pg = PointGeometry::compute_with_order(atlas, n.point, DEFAULT_ORDER)?;
        let dmu = n.weight * pg.sqrt_det_g;
        let h = pg.norm_h2.sqrt();
        fields
            .iter()
            .map(|f| {
                let j = f.jet(n.point, 1);
                let v = j.value();
                if v < -1e-12 {
                    return Err(Error::invalid(
                        "field",
                        format!("test functions must be >= 0, got {v}"),
                    ));
                }
                let d = [j.coeff(1, 0), j.coeff(0, 1)];
                let gi = &pg.ginv;
                let grad2 =
                    gi[0][0] * d[0] * d[0] + 2.0 * gi[0][1] * d[0] * d[1] + gi[1][1] * d[1] * d[1];
                Ok([v * v * dmu, grad2.max(0.0).sqrt() * dmu, v * h * dmu])
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let ratios: Vec<Option<f64>> = (0..fields.len())
        .map(|k| {
            let col = |c: usize| pairwise_sum(&samples.iter().map(|s| s[k][c]).collect::<Vec<_>>());
            let (num, grad, mean) = (col(0), col(1), col(2));
            let den = grad * grad + mean * mean;
            if den > 0.0 {
                Some(num / den)
            } else {
                None
            }
        })
        .collect();
    let max_ratio = ratios.iter().flatten().copied().reduce(f64::max);
    Ok(SobolevProbe { ratios, max_ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    TotallyGeodesic,
    WhitneyType,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub tau_a: f64,
    pub tau_check_a: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            tau_a: 1e-6,
            tau_check_a: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recognition {
    pub verdict: Verdict,
    #[serde(rename = "E_A")]
    pub e_a: f64,
    #[serde(rename = "E_checkA")]
    pub e_check_a: f64,
}

pub fn recognize(atlas: &SurfaceAtlas, q: &QuadratureSpec, th: Thresholds) -> Result<Recognition> {
    let r = energy_report(atlas, q)?;
    let verdict = if r.e_a < th.tau_a {
        Verdict::TotallyGeodesic
    } else if r.e_check_a < th.tau_check_a {
        Verdict::WhitneyType
    } else {
        Verdict::Other
    };
    Ok(Recognition {
        verdict,
        e_a: r.e_a,
        e_check_a: r.e_check_a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn whitney() -> SurfaceSpec {
        SurfaceSpec::whitney(1.0, Vector4::ZERO)
    }

    #[test]
    fn t_expressions() {
        assert_eq!(parse_t_expr("t"), Some(1.0));
        assert_eq!(parse_t_expr("-t"), Some(-1.0));
        assert_eq!(parse_t_expr("0.5 * t"), Some(0.5));
        assert_eq!(parse_t_expr("t*-2"), Some(-2.0));
        assert_eq!(parse_t_expr("hshear"), None);
    }

    #[test]
    fn family_substitution() {
        let f = DeformationFamily::horizontal_monomial([2, 1], 1.0);
        let s = f.at(0.2).unwrap();
        let p = s.apply(&Vector4::new(1.0, 0.0, 1.0, 0.0));
        assert!((p.0[1] - 0.4).abs() < 1e-15 && (p.0[3] - 0.2).abs() < 1e-15);
        assert!(check_identity_at_zero(&f).is_ok());
        let shifted = DeformationFamily::from_json(
            r#"{"kind":"hshear","potential":[{"degrees":[1,0],"coeff":1.0}]}"#,
        )
        .unwrap();
        assert!(check_identity_at_zero(&shifted).is_err());
    }

    #[test]
    fn scan_requires_closed_seed() {
        let plane = SurfaceSpec::GradientGraph {
            potential: crate::poly::Poly2::from_terms(&[(2, 0, 1.0)]).unwrap(),
            domain: [[-1.0, 1.0], [-1.0, 1.0]],
        };
        let q = QuadratureSpec::new(8, 8).unwrap();
        let f = DeformationFamily::horizontal_monomial([2, 1], 1.0);
        assert!(gap_scan(&plane, &f, &[0.0], &q).is_err());
    }

    #[test]
    fn scan_starts_at_seed() {
        let q = QuadratureSpec::new(16, 32).unwrap();
        let f = DeformationFamily::horizontal_monomial([2, 1], 1.0);
        let rows = gap_scan(&whitney(), &f, &[0.0, 0.1], &q).unwrap();
        assert!(rows[0].e_check_a < 1e-8 && rows[0].sup_div_t < 1e-8);
        assert!(rows[1].e_check_a > rows[0].e_check_a);
        assert!(rows.iter().all(|r| r.max_lagrangian_defect < 1e-9));
        let seed = energy_report(&build_surface(&whitney()).unwrap(), &q).unwrap();
        assert!((rows[0].e_a - seed.e_a).abs() < 1e-12);
        assert_eq!(
            ScanRow::CSV_HEADER.split(',').count(),
            rows[0].csv_line().split(',').count()
        );
    }

    #[test]
    fn sobolev_examples() {
        let torus = build_surface(&SurfaceSpec::clifford_torus()).unwrap();
        let q = QuadratureSpec::new(16, 16).unwrap();
        let one = TrigPolynomial::constant(1.0);
        let zero = TrigPolynomial::constant(0.0);
        let r = sobolev_probe(&torus, &[&one, &zero], &q).unwrap();
        assert!((r.ratios[0].unwrap() - 1.0 / (8.0 * PI * PI)).abs() < 1e-12);
        assert_eq!(r.ratios[1], None);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fs: Vec<TrigPolynomial> = (0..4)
            .map(|_| TrigPolynomial::random_nonnegative(&mut rng, 2))
            .collect();
        let refs: Vec<&dyn ScalarField> = fs.iter().map(|f| f as &dyn ScalarField).collect();
        let r = sobolev_probe(&torus, &refs, &q).unwrap();
        assert!(r.max_ratio.unwrap().is_finite());
        let neg = TrigPolynomial::constant(-1.0);
        assert!(sobolev_probe(&torus, &[&neg], &q).is_err());
    }

    #[test]
    fn recognition() {
        let q = QuadratureSpec::new(16, 32).unwrap();
        let th = Thresholds::default();
        let w =
            build_surface(&SurfaceSpec::whitney(2.0, Vector4::new(1.0, 0.0, 0.0, 0.0))).unwrap();
        assert_eq!(recognize(&w, &q, th).unwrap().verdict, Verdict::WhitneyType);
        let t = build_surface(&SurfaceSpec::clifford_torus()).unwrap();
        assert_eq!(recognize(&t, &q, th).unwrap().verdict, Verdict::Other);
        let p = build_surface(&SurfaceSpec::Plane {
            basis: [
                Vector4::new(1.0, 0.0, 0.0, 0.0),
                Vector4::new(0.0, 0.0, 1.0, 0.0),
            ],
            domain: [[-1.0, 1.0], [-1.0, 1.0]],
        })
        .unwrap();
        assert_eq!(
            recognize(&p, &QuadratureSpec::new(8, 8).unwrap(), th)
                .unwrap()
                .verdict,
            Verdict::TotallyGeodesic
        );
    }
}
