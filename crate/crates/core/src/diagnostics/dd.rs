//! Minimal double-double arithmetic (about 32 significant digits).
//!
//! Only what the best-approximation estimate needs: the field operations,
//! `exp`, `ln`, integer powers and the cosine of Lobatto angles.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};
pub const PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.2246467991473532e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Exact scaling by a power of two.
    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn powi(self, mut k: u32) -> Self {
        let mut base = self;
        let mut acc = Dd::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn exp(self) -> Self {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        let k = (self.hi / LN2.hi).round();
        // r = x − k·ln2, |r| ≤ ln2/2; plain Taylor series (no squaring, which
        // would amplify the rounding error).
        let r = self - LN2 * Dd::new(k);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..=32 {
            term = term * r / Dd::new(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        // Split the power of two to stay clear of overflow in 2^k.
        let k = k as i32;
        sum.ldexp(k / 2).ldexp(k - k / 2)
    }

    /// Natural logarithm of a positive number by Newton steps on `exp`.
    pub fn ln(self) -> Self {
        if !(self.hi > 0.0) {
            return Dd::new(f64::NAN);
        }
        let mut y = Dd::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    /// `self^p` for a positive base and real exponent.
    pub fn powf(self, p: f64) -> Self {
        if p == p.trunc() && p.abs() <= 64.0 {
            let r = self.powi(p.abs() as u32);
            return if p < 0.0 { Dd::ONE / r } else { r };
        }
        (self.ln() * Dd::new(p)).exp()
    }

    fn taylor_sin(x: Dd) -> Dd {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for i in 1..=20 {
            term = -(term * x2) / Dd::new(((2 * i) * (2 * i + 1)) as f64);
            sum = sum + term;
        }
        sum
    }

    fn taylor_cos(x: Dd) -> Dd {
        let x2 = x * x;
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..=20 {
            term = -(term * x2) / Dd::new(((2 * i - 1) * (2 * i)) as f64);
            sum = sum + term;
        }
        sum
    }

    /// `cos(π·p/q)` for `0 ≤ p ≤ q`.
    pub fn cos_pi_ratio(p: usize, q: usize) -> Dd {
        assert!(p <= q && q > 0);
        // Fold into [0, 1/4] (in units of π) with exact integer arithmetic.
        let (p, q4) = (4 * p, 4 * q);
        if p > q4 / 2 {
            return -Self::cos_pi_ratio_scaled(q4 - p, q4);
        }
        Self::cos_pi_ratio_scaled(p, q4)
    }

    // cos(π·p/q4) with p ≤ q4/2.
    fn cos_pi_ratio_scaled(p: usize, q4: usize) -> Dd {
        if 4 * p > q4 {
            let angle = PI * Dd::new((q4 - 2 * p) as f64) / Dd::new((2 * q4) as f64);
            return Self::taylor_sin(angle);
        }
        let angle = PI * Dd::new(p as f64) / Dd::new(q4 as f64);
        Self::taylor_cos(angle)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}
