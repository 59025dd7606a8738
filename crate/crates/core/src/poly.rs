//! Bivariate polynomials with explicit coefficient storage, shared by shear
//! potentials and gradient-graph potentials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet2;

/// Highest total degree a potential may have.
pub const MAX_DEGREE: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub degrees: [u32; 2],
    pub coeff: f64,
}

/// `Σ coeff · x^d1 · y^d2`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Monomial>", into = "Vec<Monomial>")]
pub struct Poly2 {
    terms: Vec<Monomial>,
}

impl TryFrom<Vec<Monomial>> for Poly2 {
    type Error = Error;

    fn try_from(terms: Vec<Monomial>) -> Result<Self> {
        Poly2::new(terms)
    }
}

impl From<Poly2> for Vec<Monomial> {
    fn from(p: Poly2) -> Self {
        p.terms
    }
}

impl Poly2 {
    pub fn new(terms: Vec<Monomial>) -> Result<Self> {
        for m in &terms {
            if m.degrees[0] + m.degrees[1] > MAX_DEGREE {
                return Err(Error::invalid(
                    "degrees",
                    format!(
                        "total degree {} exceeds {MAX_DEGREE}",
                        m.degrees[0] + m.degrees[1]
                    ),
                ));
            }
            if !m.coeff.is_finite() {
                return Err(Error::invalid("coeff", "must be finite"));
            }
        }
        Ok(Poly2 { terms })
    }

    /// Convenience constructor from `(d1, d2, coeff)` triples.
    pub fn from_terms(terms: &[(u32, u32, f64)]) -> Result<Self> {
        Poly2::new(
            terms
                .iter()
                .map(|&(a, b, c)| Monomial {
                    degrees: [a, b],
                    coeff: c,
                })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|m| m.coeff != 0.0)
            .map(|m| m.degrees[0] + m.degrees[1])
            .max()
            .unwrap_or(0)
    }

    pub fn partial(&self, axis: usize) -> Poly2 {
        let terms = self
            .terms
            .iter()
            .filter(|m| m.degrees[axis] > 0)
            .map(|m| {
                let mut degrees = m.degrees;
                degrees[axis] -= 1;
                Monomial {
                    degrees,
                    coeff: m.coeff * m.degrees[axis] as f64,
                }
            })
            .collect();
        Poly2 { terms }
    }

    pub fn gradient(&self) -> [Poly2; 2] {
        [self.partial(0), self.partial(1)]
    }

    pub fn scaled(&self, s: f64) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial {
                    degrees: m.degrees,
                    coeff: m.coeff * s,
                })
                .collect(),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|m| m.coeff * x.powi(m.degrees[0] as i32) * y.powi(m.degrees[1] as i32))
            .sum()
    }

    pub fn eval_jet(&self, x: &Jet2, y: &Jet2) -> Jet2 {
        let order = x.order().min(y.order());
        let max = self
            .terms
            .iter()
            .map(|m| m.degrees[0].max(m.degrees[1]))
            .max()
            .unwrap_or(0) as usize;
        let mut xp = Vec::with_capacity(max + 1);
        let mut yp = Vec::with_capacity(max + 1);
        xp.push(Jet2::constant(1.0, order));
        yp.push(Jet2::constant(1.0, order));
        for k in 1..=max {
            xp.push(xp[k - 1] * *x);
            yp.push(yp[k - 1] * *y);
        }
        let mut acc = Jet2::zero(order);
        for m in &self.terms {
            acc += (xp[m.degrees[0] as usize] * yp[m.degrees[1] as usize]).scale(m.coeff);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Lift;

    #[test]
    fn rejects_high_degree() {
        assert!(Poly2::from_terms(&[(4, 3, 1.0)]).is_err());
        assert!(Poly2::from_terms(&[(3, 3, 1.0)]).is_ok());
    }

    #[test]
    fn gradient_of_cubic() {
        let p = Poly2::from_terms(&[(3, 0, 1.0 / 6.0), (0, 3, 1.0 / 6.0)]).unwrap();
        let [px, py] = p.gradient();
        assert!((px.eval(1.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((py.eval(2.0, 2.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn jet_evaluation_matches_point_evaluation() {
        let p = Poly2::from_terms(&[(2, 1, 1.5), (0, 2, -0.5), (1, 0, 2.0), (0, 0, 0.25)]).unwrap();
        let x = Jet2::variable(0.3, Lift::U, 3);
        let y = Jet2::variable(-0.7, Lift::V, 3);
        let j = p.eval_jet(&x, &y);
        assert!((j.value() - p.eval(0.3, -0.7)).abs() < 1e-15);
        assert!((j.derivative(1, 0).unwrap() - p.partial(0).eval(0.3, -0.7)).abs() < 1e-14);
        assert!((j.derivative(2, 1).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn json_encoding() {
        let p: Poly2 = serde_json::from_str(r#"[{"degrees":[2,0],"coeff":0.5}]"#).unwrap();
        assert_eq!(p.terms()[0].degrees, [2, 0]);
        let bad: std::result::Result<Poly2, _> =
            serde_json::from_str(r#"[{"degrees":[7,0],"coeff":0.5}]"#);
        assert!(bad.is_err());
    }
}
