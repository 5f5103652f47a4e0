//! Double-double accumulation for the coefficient-wise integrals.
//!
//! Integrals of monomial-basis polynomials are sums of terms with large,
//! alternating coefficients. Accumulating them in plain binary64 loses most
//! of the significant digits already at degree 8; carrying the running sum as
//! an unevaluated pair `hi + lo` keeps roughly 106 bits until the final
//! rounding.

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    hi: f64,
    lo: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
    }

    /// Adds `a * b / k`, keeping the low-order part of both the product and
    /// the quotient.
    #[inline]
    pub(crate) fn add_product_ratio(&mut self, a: f64, b: f64, k: f64) {
        let (p, pe) = two_prod(a, b);
        let q = p / k;
        let rem = (-q).mul_add(k, p) + pe;
        self.add(q);
        self.lo += rem / k;
    }

    #[inline]
    pub(crate) fn add_ratio(&mut self, a: f64, k: f64) {
        self.add_product_ratio(a, 1.0, k);
    }

    pub(crate) fn value(&self) -> f64 {
        self.hi + self.lo
    }
}
