//! Plain f64 interval arithmetic over boxes, used to bound polynomial values,
//! gradient components and Hessian row sums on a search region.
//!
//! The bounds steer register widths and step sizes; they are conservative in
//! the interval-arithmetic sense but do not round outward, so callers keep a
//! headroom factor (at least one spare bit) on top of what is returned here.

use crate::polysys::{Polynomial, PolynomialSystem};
use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        Self { lo: self.lo + other.lo, hi: self.hi + other.hi }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        let products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        Self {
            lo: products.iter().copied().fold(f64::INFINITY, f64::min),
            hi: products.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn pow(self, k: u32) -> Self {
        // even powers of sign-crossing intervals hug zero from below
        if k == 0 {
            return Self::point(1.0);
        }
        if k.is_multiple_of(2) && self.lo < 0.0 && self.hi > 0.0 {
            let m = self.lo.abs().max(self.hi.abs());
            return Self { lo: 0.0, hi: m.powi(k as i32) };
        }
        let a = self.lo.powi(k as i32);
        let b = self.hi.powi(k as i32);
        Self { lo: a.min(b), hi: a.max(b) }
    }

    pub fn scale(self, c: f64) -> Self {
        let a = self.lo * c;
        let b = self.hi * c;
        Self { lo: a.min(b), hi: a.max(b) }
    }

    /// max(|lo|, |hi|)
    pub fn magnitude(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
}

/// Axis-aligned box; one interval per variable.
pub type Box_ = Vec<Interval>;

/// Box centered at `center` with full width `width` per coordinate.
pub fn centered_box(center: &[f64], width: f64) -> Box_ {
    center.iter().map(|&c| Interval::new(c - width / 2.0, c + width / 2.0)).collect()
}

/// Box centered at a rational point.
pub fn centered_box_rational(center: &[BigRational], width: &BigRational) -> Box_ {
    let w = crate::rational::to_f64(width);
    let c: Vec<f64> = center.iter().map(crate::rational::to_f64).collect();
    centered_box(&c, w)
}

/// Interval enclosure of a polynomial over a box.
pub fn poly_range(poly: &Polynomial, bx: &Box_) -> Interval {
    assert_eq!(bx.len(), poly.n_vars(), "box arity mismatch");
    let mut acc = Interval::point(0.0);
    for term in poly.terms() {
        let mut t = Interval::point(crate::rational::to_f64(&term.coefficient));
        for (iv, &e) in bx.iter().zip(&term.exponents) {
            if e > 0 {
                t = t.mul(iv.pow(e));
            }
        }
        acc = acc.add(t);
    }
    acc
}

/// Enclosure of ∂F/∂xⱼ = 2·Σᵢ fᵢ·∂fᵢ/∂xⱼ over a box, for every j.
pub fn grad_sum_of_squares_range(system: &PolynomialSystem, bx: &Box_) -> Vec<Interval> {
    let f_ranges: Vec<Interval> = system.equations().iter().map(|eq| poly_range(eq, bx)).collect();
    (0..system.n())
        .map(|j| {
            let mut acc = Interval::point(0.0);
            for (eq, f) in system.equations().iter().zip(&f_ranges) {
                acc = acc.add(f.mul(poly_range(&eq.derivative(j), bx)));
            }
            acc.scale(2.0)
        })
        .collect()
}

/// Bound on maxⱼ |∂F/∂xⱼ| over the box.
pub fn grad_bound(system: &PolynomialSystem, bx: &Box_) -> f64 {
    grad_sum_of_squares_range(system, bx)
        .into_iter()
        .map(Interval::magnitude)
        .fold(0.0, f64::max)
}

/// Bound on the Hessian of F in the row-sum (infinity) norm over the box:
/// maxⱼ Σₖ max|∂²F/∂xⱼ∂xₖ|. Dominates the largest Hessian eigenvalue, so
/// 1/bound is a safe gradient-descent step scale.
pub fn hessian_rowsum_bound(system: &PolynomialSystem, bx: &Box_) -> f64 {
    let n = system.n();
    let f_ranges: Vec<Interval> = system.equations().iter().map(|eq| poly_range(eq, bx)).collect();
    let d1: Vec<Vec<Polynomial>> = system
        .equations()
        .iter()
        .map(|eq| (0..n).map(|j| eq.derivative(j)).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let mut row = 0.0;
        for k in 0..n {
            let mut acc = Interval::point(0.0);
            for (i, _eq) in system.equations().iter().enumerate() {
                let a = poly_range(&d1[i][j], bx).mul(poly_range(&d1[i][k], bx));
                let b = f_ranges[i].mul(poly_range(&d1[i][j].derivative(k), bx));
                acc = acc.add(a).add(b);
            }
            row += acc.scale(2.0).magnitude();
        }
        worst = worst.max(row);
    }
    worst
}

/// Bound on maxᵢ |fᵢ| over the box; sizes the residual register.
pub fn residual_bound(system: &PolynomialSystem, bx: &Box_) -> f64 {
    system
        .equations()
        .iter()
        .map(|eq| poly_range(eq, bx).magnitude())
        .fold(0.0, f64::max)
}
