//! Truncated bivariate Taylor jets.
//!
//! A [`Jet2`] of order `n` stores the Taylor coefficients
//! `c[i][j] = ∂_u^i ∂_v^j f / (i! j!)` for `i + j <= n` at a fixed expansion
//! point. Arithmetic on jets is arithmetic on truncated power series, so any
//! composite built from jet operations carries exact partial derivatives up to
//! order `n`.
//!
//! Coefficients are stored densely in graded-lexicographic order: all entries
//! of total degree `d` come before degree `d + 1`, and within a degree they are
//! ordered by the power of `v`.
//!
//! Binary operators on jets of different orders truncate to the smaller
//! order. The checked entry points [`jet_arith`] and [`jet_elementary`]
//! reject mismatched orders and singular evaluations instead.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, JetError, Result};
use crate::surface::SurfaceAtlas;

/// Largest supported jet order.
pub const MAX_ORDER: usize = 6;
/// Order used by the curvature pipeline unless configured otherwise.
pub const DEFAULT_ORDER: usize = 4;

const CAPACITY: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

/// Number of coefficients of a jet of the given order.
pub const fn coeff_count(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

#[inline]
const fn slot(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

/// Which parameter a lifted value represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lift {
    Const,
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Powi(i32),
    Recip,
}

#[derive(Clone, Copy)]
pub struct Jet2 {
    order: usize,
    c: [f64; CAPACITY],
}

impl std::fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Jet2")
            .field("order", &self.order)
            .field("coeffs", &self.coeffs())
            .finish()
    }
}

impl PartialEq for Jet2 {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs() == other.coeffs()
    }
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} > {MAX_ORDER}");
        Jet2 {
            order,
            c: [0.0; CAPACITY],
        }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.c[0] = value;
        j
    }

    /// The coordinate function `u` (or `v`) expanded at `value`.
    pub fn variable(value: f64, which: Lift, order: usize) -> Self {
        let mut j = Self::constant(value, order);
        if order >= 1 {
            match which {
                Lift::Const => {}
                Lift::U => j.c[slot(1, 0)] = 1.0,
                Lift::V => j.c[slot(0, 1)] = 1.0,
            }
        }
        j
    }

    /// Builds a jet from graded-lexicographic coefficients.
    pub fn from_coeffs(order: usize, coeffs: &[f64]) -> std::result::Result<Self, JetError> {
        if order > MAX_ORDER {
            return Err(JetError::OrderTooLarge(order));
        }
        if coeffs.len() != coeff_count(order) {
            return Err(JetError::OrderMismatch(coeffs.len(), coeff_count(order)));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(JetError::Singular("non-finite coefficient"));
        }
        let mut j = Self::zero(order);
        j.c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(j)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Value at the expansion point.
    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.c[..coeff_count(self.order)]
    }

    /// Taylor coefficient of `u^i v^j`; zero beyond the stored order.
    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            0.0
        } else {
            self.c[slot(i, j)]
        }
    }

    /// The mixed partial `∂_u^i ∂_v^k` at the expansion point.
    pub fn derivative(&self, i: usize, k: usize) -> std::result::Result<f64, JetError> {
        if i + k > self.order {
            return Err(JetError::IndexBeyondOrder {
                i,
                k,
                order: self.order,
            });
        }
        Ok(factorial(i) * factorial(k) * self.c[slot(i, k)])
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_finite())
    }

    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return *self;
        }
        let mut j = Self::zero(order);
        let n = coeff_count(order);
        j.c[..n].copy_from_slice(&self.c[..n]);
        j
    }

    /// Partial derivative along parameter `axis` (0 = u, 1 = v). The result
    /// has one order less; an order-0 jet differentiates to the zero jet.
    pub fn partial(&self, axis: usize) -> Self {
        if self.order == 0 {
            return Self::zero(0);
        }
        let n = self.order - 1;
        let mut out = Self::zero(n);
        for d in 0..=n {
            for j in 0..=d {
                let i = d - j;
                out.c[slot(i, j)] = if axis == 0 {
                    (i + 1) as f64 * self.c[slot(i + 1, j)]
                } else {
                    (j + 1) as f64 * self.c[slot(i, j + 1)]
                };
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for c in &mut out.c[..coeff_count(self.order)] {
            *c *= s;
        }
        out
    }

    /// Division by the recurrence `c_α = (a_α − Σ_{0<β≤α} b_β c_{α−β}) / b_0`.
    pub fn checked_div(&self, rhs: &Jet2) -> std::result::Result<Jet2, JetError> {
        if rhs.c[0].abs() <= 1e-300 {
            return Err(JetError::Singular(
                "division by a jet with vanishing constant term",
            ));
        }
        Ok(self.div_unchecked(rhs))
    }

    fn div_unchecked(&self, rhs: &Jet2) -> Jet2 {
        let n = self.order.min(rhs.order);
        let mut out = Self::zero(n);
        let b0 = rhs.c[0];
        for d in 0..=n {
            for j in 0..=d {
                let i = d - j;
                let mut acc = self.c[slot(i, j)];
                for bi in 0..=i {
                    for bj in 0..=j {
                        if bi + bj == 0 {
                            continue;
                        }
                        acc -= rhs.c[slot(bi, bj)] * out.c[slot(i - bi, j - bj)];
                    }
                }
                out.c[slot(i, j)] = acc / b0;
            }
        }
        out
    }

    pub fn recip(&self) -> Jet2 {
        Jet2::constant(1.0, self.order).div_unchecked(self)
    }

    pub fn checked_recip(&self) -> std::result::Result<Jet2, JetError> {
        Jet2::constant(1.0, self.order).checked_div(self)
    }

    /// Square root by the recurrence `s_α = (a_α − Σ_{0<β<α} s_β s_{α−β}) / (2 s_0)`.
    pub fn checked_sqrt(&self) -> std::result::Result<Jet2, JetError> {
        if self.c[0] <= 0.0 || !self.c[0].is_finite() {
            return Err(JetError::Singular(
                "sqrt of a jet with nonpositive constant term",
            ));
        }
        let n = self.order;
        let mut out = Self::zero(n);
        let s0 = self.c[0].sqrt();
        out.c[0] = s0;
        for d in 1..=n {
            for j in 0..=d {
                let i = d - j;
                let mut acc = self.c[slot(i, j)];
                for bi in 0..=i {
                    for bj in 0..=j {
                        if (bi == 0 && bj == 0) || (bi == i && bj == j) {
                            continue;
                        }
                        acc -= out.c[slot(bi, bj)] * out.c[slot(i - bi, j - bj)];
                    }
                }
                out.c[slot(i, j)] = acc / (2.0 * s0);
            }
        }
        Ok(out)
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.c[0].exp();
        let mut series = [0.0; MAX_ORDER + 1];
        let mut fact = 1.0;
        for (k, s) in series.iter_mut().enumerate().take(self.order + 1) {
            if k > 0 {
                fact *= k as f64;
            }
            *s = e / fact;
        }
        self.compose(&series)
    }

    pub fn sin(&self) -> Jet2 {
        self.compose(&trig_series(self.c[0], 0, self.order))
    }

    pub fn cos(&self) -> Jet2 {
        self.compose(&trig_series(self.c[0], 1, self.order))
    }

    pub fn powi(&self, n: i32) -> Jet2 {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Jet2::constant(1.0, self.order);
        let mut base = *self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        result
    }

    /// Evaluates `Σ_k series[k] (self − self(0))^k` by Horner's scheme, where
    /// `series` holds the univariate Taylor coefficients of the outer function
    /// at the constant term.
    fn compose(&self, series: &[f64]) -> Jet2 {
        let n = self.order;
        let mut delta = *self;
        delta.c[0] = 0.0;
        let mut acc = Jet2::constant(series[n], n);
        for k in (0..n).rev() {
            acc = acc * delta;
            acc.c[0] += series[k];
        }
        acc
    }
}

fn trig_series(x: f64, phase: usize, order: usize) -> [f64; MAX_ORDER + 1] {
    // derivatives of sin cycle as sin, cos, -sin, -cos; cos is sin shifted by one
    let (s, c) = x.sin_cos();
    let cycle = [s, c, -s, -c];
    let mut out = [0.0; MAX_ORDER + 1];
    let mut fact = 1.0;
    for (k, o) in out.iter_mut().enumerate().take(order + 1) {
        if k > 0 {
            fact *= k as f64;
        }
        *o = cycle[(k + phase) % 4] / fact;
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        let n = self.order.min(rhs.order);
        let mut out = self.truncate(n);
        for k in 0..coeff_count(n) {
            out.c[k] += rhs.c[k];
        }
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        let n = self.order.min(rhs.order);
        let mut out = self.truncate(n);
        for k in 0..coeff_count(n) {
            out.c[k] -= rhs.c[k];
        }
        out
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    /// Cauchy product truncated at the smaller order.
    fn mul(self, rhs: Jet2) -> Jet2 {
        let n = self.order.min(rhs.order);
        let mut out = Jet2::zero(n);
        for d1 in 0..=n {
            for j1 in 0..=d1 {
                let a = self.c[slot(d1 - j1, j1)];
                if a == 0.0 {
                    continue;
                }
                for d2 in 0..=(n - d1) {
                    for j2 in 0..=d2 {
                        out.c[slot(d1 + d2 - j1 - j2, j1 + j2)] += a * rhs.c[slot(d2 - j2, j2)];
                    }
                }
            }
        }
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    /// Unchecked division; a vanishing denominator yields non-finite
    /// coefficients. Use [`Jet2::checked_div`] where that can happen.
    fn div(self, rhs: Jet2) -> Jet2 {
        self.div_unchecked(&rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: f64) -> Jet2 {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, rhs: f64) -> Jet2 {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        rhs.scale(self)
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, rhs: Jet2) {
        *self = *self - rhs;
    }
}

impl MulAssign<f64> for Jet2 {
    fn mul_assign(&mut self, rhs: f64) {
        *self = self.scale(rhs);
    }
}

/// `jet_lift`: constant or coordinate function at `value`.
pub fn jet_lift(value: f64, which: Lift, order: usize) -> std::result::Result<Jet2, JetError> {
    if order > MAX_ORDER {
        return Err(JetError::OrderTooLarge(order));
    }
    Ok(Jet2::variable(value, which, order))
}

/// Checked binary arithmetic: orders must match and division must be regular.
pub fn jet_arith(a: &Jet2, b: &Jet2, op: ArithOp) -> std::result::Result<Jet2, JetError> {
    if a.order != b.order {
        return Err(JetError::OrderMismatch(a.order, b.order));
    }
    Ok(match op {
        ArithOp::Add => *a + *b,
        ArithOp::Sub => *a - *b,
        ArithOp::Mul => *a * *b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

pub fn jet_elementary(a: &Jet2, f: Elementary) -> std::result::Result<Jet2, JetError> {
    Ok(match f {
        Elementary::Sin => a.sin(),
        Elementary::Cos => a.cos(),
        Elementary::Exp => a.exp(),
        Elementary::Sqrt => a.checked_sqrt()?,
        Elementary::Recip => a.checked_recip()?,
        Elementary::Powi(n) => {
            if n < 0 && a.value().abs() <= 1e-300 {
                return Err(JetError::Singular("negative power of a vanishing jet"));
            }
            a.powi(n)
        }
    })
}

/// Finite-difference step used for derivatives of the given total order.
///
/// First derivatives use `1e-4`; higher orders use wider steps so that the
/// `ε / h^k` rounding term of the 4th-order stencils stays below `1e-7`.
pub fn fd_step(total_order: usize) -> f64 {
    match total_order {
        0 | 1 => 1e-4,
        2 => 1e-3,
        _ => 5e-3,
    }
}

/// 4th-order central stencils for the 0th..3rd derivative as (offset, weight)
/// pairs, in units of the step.
fn stencil(k: usize) -> &'static [(i32, f64)] {
    const D0: &[(i32, f64)] = &[(0, 1.0)];
    const D1: &[(i32, f64)] = &[
        (-2, 1.0 / 12.0),
        (-1, -8.0 / 12.0),
        (1, 8.0 / 12.0),
        (2, -1.0 / 12.0),
    ];
    const D2: &[(i32, f64)] = &[
        (-2, -1.0 / 12.0),
        (-1, 16.0 / 12.0),
        (0, -30.0 / 12.0),
        (1, 16.0 / 12.0),
        (2, -1.0 / 12.0),
    ];
    const D3: &[(i32, f64)] = &[
        (-3, 1.0 / 8.0),
        (-2, -1.0),
        (-1, 13.0 / 8.0),
        (1, -13.0 / 8.0),
        (2, 1.0),
        (3, -1.0 / 8.0),
    ];
    match k {
        0 => D0,
        1 => D1,
        2 => D2,
        3 => D3,
        _ => panic!("no stencil for derivative order {k}"),
    }
}

/// Central finite-difference estimate of `∂_u^i ∂_v^k` of a scalar function.
pub fn finite_difference<F: Fn(f64, f64) -> f64>(f: F, u: f64, v: f64, i: usize, k: usize) -> f64 {
    let h = fd_step(i + k);
    let mut acc = 0.0;
    for &(ou, wu) in stencil(i) {
        for &(ov, wv) in stencil(k) {
            acc += wu * wv * f(u + ou as f64 * h, v + ov as f64 * h);
        }
    }
    acc / h.powi((i + k) as i32)
}

/// Compares every jet partial of the four immersion components, up to
/// `min(order, 3)`, with central finite differences. Returns the largest
/// discrepancy `|jet − fd| / (1 + |jet|)`.
pub fn jet_selftest(
    atlas: &SurfaceAtlas,
    chart: usize,
    point: [f64; 2],
    order: usize,
) -> Result<f64> {
    let ch = atlas.chart(chart)?;
    let top = order.min(3);
    let margin = 10.0 * fd_step(top.max(1));
    if !ch.contains_with_margin(point, margin) {
        return Err(Error::invalid(
            "point",
            format!(
                "({}, {}) is closer than {margin} to the chart boundary",
                point[0], point[1]
            ),
        ));
    }
    let jets = atlas.immersion_jets(chart, point, order)?;
    let component = |k: usize| {
        move |u: f64, v: f64| -> f64 {
            atlas
                .immersion_jets(chart, [u, v], 0)
                .map(|f| f[k].value())
                .unwrap_or(f64::NAN)
        }
    };
    let mut worst: f64 = 0.0;
    for (k, jet) in jets.iter().enumerate() {
        for d in 0..=top {
            for j in 0..=d {
                let i = d - j;
                let exact = jet.derivative(i, j)?;
                let approx = finite_difference(component(k), point[0], point[1], i, j);
                worst = worst.max((exact - approx).abs() / (1.0 + exact.abs()));
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn lift_examples() {
        let c = jet_lift(3.0, Lift::Const, 4).unwrap();
        assert_eq!(c.coeffs().len(), 15);
        assert_eq!(c.value(), 3.0);
        assert!(c.coeffs()[1..].iter().all(|&x| x == 0.0));

        let u = jet_lift(0.5, Lift::U, 2).unwrap();
        assert_eq!(u.coeffs(), &[0.5, 1.0, 0.0, 0.0, 0.0, 0.0]);

        let z = jet_lift(0.0, Lift::V, 0).unwrap();
        assert_eq!(z.coeffs(), &[0.0]);
    }

    #[test]
    fn square_of_u() {
        let u = Jet2::variable(2.0, Lift::U, 2);
        let sq = jet_arith(&u, &u, ArithOp::Mul).unwrap();
        assert_eq!(sq.coeff(0, 0), 4.0);
        assert_eq!(sq.coeff(1, 0), 4.0);
        assert_eq!(sq.coeff(2, 0), 1.0);
    }

    #[test]
    fn sine_series_at_zero() {
        let s = Jet2::variable(0.0, Lift::U, 3).sin();
        assert_abs_diff_eq!(s.coeff(0, 0), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(s.coeff(1, 0), 1.0, epsilon = 1e-16);
        assert_abs_diff_eq!(s.coeff(2, 0), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(s.coeff(3, 0), -1.0 / 6.0, epsilon = 1e-16);
    }

    #[test]
    fn reciprocal_of_one_plus_u_squared() {
        // f(1) = 1/2, f'(1) = -1/2, f''(1)/2 = 1/4
        let u = Jet2::variable(1.0, Lift::U, 2);
        let one = Jet2::constant(1.0, 2);
        let f = jet_arith(&one, &(u * u + 1.0), ArithOp::Div).unwrap();
        assert_abs_diff_eq!(f.coeff(0, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.coeff(1, 0), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.coeff(2, 0), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let s = Jet2::variable(0.0, Lift::U, 3).sin();
        assert_abs_diff_eq!(s.derivative(1, 0).unwrap(), 1.0, epsilon = 1e-16);
        let uv = Jet2::variable(1.0, Lift::U, 2) * Jet2::variable(1.0, Lift::V, 2);
        assert_eq!(uv.derivative(1, 1).unwrap(), 1.0);
        assert!(matches!(
            uv.derivative(2, 1),
            Err(JetError::IndexBeyondOrder { .. })
        ));
    }

    #[test]
    fn singular_operations_are_reported() {
        let zero = Jet2::constant(0.0, 3);
        let one = Jet2::constant(1.0, 3);
        assert!(matches!(
            jet_arith(&one, &zero, ArithOp::Div),
            Err(JetError::Singular(_))
        ));
        assert!(matches!(
            jet_elementary(&(zero - 1.0), Elementary::Sqrt),
            Err(JetError::Singular(_))
        ));
        assert!(matches!(
            jet_arith(&one, &Jet2::constant(1.0, 2), ArithOp::Add),
            Err(JetError::OrderMismatch(3, 2))
        ));
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        // exp(u + v) at (0.3, 0): every coefficient is e^0.3 / (i! j!)
        let x = Jet2::variable(0.3, Lift::U, 4) + Jet2::variable(0.0, Lift::V, 4);
        let e = x.exp();
        for i in 0..=4 {
            for j in 0..=(4 - i) {
                let want = 0.3f64.exp() / (factorial(i) * factorial(j));
                assert_abs_diff_eq!(e.coeff(i, j), want, epsilon = 1e-14);
            }
        }
        // sqrt(u)^2 == u and cos^2 + sin^2 == 1
        let u = Jet2::variable(2.5, Lift::U, 5) + Jet2::variable(0.0, Lift::V, 5).scale(0.7);
        let r = u.checked_sqrt().unwrap();
        for (a, b) in (r * r).coeffs().iter().zip(u.coeffs()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        let s = u.sin();
        let c = u.cos();
        let one = s * s + c * c;
        assert_abs_diff_eq!(one.value(), 1.0, epsilon = 1e-15);
        assert!(one.coeffs()[1..].iter().all(|x| x.abs() < 1e-14));
        // powi against repeated multiplication, negative powers against recip
        assert_eq!(u.powi(3), u * u * u);
        let inv = u.powi(-2) * u * u;
        assert_abs_diff_eq!(inv.value(), 1.0, epsilon = 1e-15);
        assert!(inv.coeffs()[1..].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn partial_lowers_order() {
        // f = u^2 v + v^3 at (1, 2): ∂_u f = 2uv, ∂_v f = u^2 + 3v^2
        let u = Jet2::variable(1.0, Lift::U, 4);
        let v = Jet2::variable(2.0, Lift::V, 4);
        let f = u * u * v + v * v * v;
        let fu = f.partial(0);
        let fv = f.partial(1);
        assert_eq!(fu.order(), 3);
        assert_abs_diff_eq!(fu.value(), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fv.value(), 13.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fv.derivative(0, 1).unwrap(), 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fu.derivative(1, 1).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn finite_difference_stencils_are_fourth_order_exact_on_quartics() {
        let f = |u: f64, v: f64| u * u * u * v + 0.5 * v * v;
        assert_abs_diff_eq!(
            finite_difference(f, 0.4, 0.3, 2, 1),
            6.0 * 0.4,
            epsilon = 1e-7
        );
        assert_abs_diff_eq!(finite_difference(f, 0.4, 0.3, 0, 2), 1.0, epsilon = 1e-8);
    }

    fn arb_jet(order: usize) -> impl Strategy<Value = Jet2> {
        proptest::collection::vec(-2.0f64..2.0, coeff_count(order))
            .prop_map(move |c| Jet2::from_coeffs(order, &c).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn distributive_law(a in arb_jet(4), b in arb_jet(4), c in arb_jet(4)) {
            let lhs = (a + b) * c;
            let rhs = a * c + b * c;
            for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
                prop_assert!((x - y).abs() < 1e-13);
            }
        }

        #[test]
        fn multiplication_is_exact_for_low_degree_products(
            p in proptest::collection::vec(-1.0f64..1.0, 3),
            q in proptest::collection::vec(-1.0f64..1.0, 6),
        ) {
            // degree 1 times degree 2 fits exactly in order 3
            let mut pc = vec![0.0; coeff_count(3)];
            pc[..3].copy_from_slice(&p);
            let mut qc = vec![0.0; coeff_count(3)];
            qc[..6].copy_from_slice(&q);
            let a = Jet2::from_coeffs(3, &pc).unwrap();
            let b = Jet2::from_coeffs(3, &qc).unwrap();
            let prod = a * b;
            // evaluate both sides of the polynomial identity at a sample point
            let eval = |j: &Jet2, x: f64, y: f64| {
                let mut s = 0.0;
                for i in 0..=3 {
                    for k in 0..=(3 - i) {
                        s += j.coeff(i, k) * x.powi(i as i32) * y.powi(k as i32);
                    }
                }
                s
            };
            let (x, y) = (0.37, -0.81);
            prop_assert!((eval(&prod, x, y) - eval(&a, x, y) * eval(&b, x, y)).abs() < 1e-13);
        }

        #[test]
        fn lifted_variable_has_unit_slope(x in -5.0f64..5.0, n in 1usize..=MAX_ORDER) {
            let j = jet_lift(x, Lift::U, n).unwrap();
            prop_assert_eq!(j.derivative(1, 0).unwrap(), 1.0);
        }

        #[test]
        fn division_inverts_multiplication(a in arb_jet(4), b in arb_jet(4)) {
            let b = b + 3.0;
            let q = (a * b).checked_div(&b).unwrap();
            for (x, y) in q.coeffs().iter().zip(a.coeffs()) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
