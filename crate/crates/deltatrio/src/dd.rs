//! Double-double arithmetic: unevaluated sums `hi + lo` of two `f64`,
//! carrying roughly 32 significant decimal digits.
//!
//! Used only by the extended-precision evaluation of the threshold kernel,
//! where the target accuracy exceeds what `f64` can carry. Algorithms are
//! the classical error-free transformations (two_sum / two_prod with FMA).

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

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
    /// π to double-double precision.
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion of a decimal mantissa; `value` must stay below
    /// `2^106` for the split to be lossless.
    pub fn from_u128(value: u128) -> Self {
        debug_assert!(value < (1u128 << 106));
        let hi = value as f64;
        let rem = value as i128 - hi as i128;
        Dd::new(hi, rem as f64)
    }

    /// `10^k` exactly (valid for `k <= 31`).
    pub fn pow10(k: u32) -> Self {
        let mut acc = Dd::ONE;
        for _ in 0..k {
            acc = acc * Dd::from_f64(10.0);
        }
        acc
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        assert!(self.hi > 0.0, "sqrt of negative double-double");
        // One Newton correction on the f64 seed doubles the precision.
        let s0 = self.hi.sqrt();
        let s0dd = Dd::from_f64(s0);
        let diff = self - s0dd * s0dd;
        s0dd + Dd::from_f64(diff.hi / (2.0 * s0))
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Decimal rendering with `digits` significant digits, for reporting
    /// extended-precision results.
    pub fn to_decimal_string(self, digits: usize) -> String {
        if self.hi == 0.0 && self.lo == 0.0 {
            return "0".to_string();
        }
        let neg = self.hi < 0.0;
        let mut x = self.abs();
        let mut exp10: i32 = x.hi.log10().floor() as i32;
        // Normalize into [1, 10); correct the estimate if needed.
        let scale = |e: i32| -> Dd {
            if e >= 0 {
                Dd::pow10(e as u32)
            } else {
                Dd::ONE / Dd::pow10((-e) as u32)
            }
        };
        x = x / scale(exp10);
        while x.hi >= 10.0 {
            x = x / Dd::from_f64(10.0);
            exp10 += 1;
        }
        while x.hi < 1.0 {
            x = x * Dd::from_f64(10.0);
            exp10 -= 1;
        }
        let mut raw = Vec::with_capacity(digits + 1);
        for _ in 0..digits + 1 {
            let d = x.hi.floor();
            let di = (d as i64).clamp(0, 9);
            raw.push(di as u8);
            x = (x - Dd::from_f64(di as f64)) * Dd::from_f64(10.0);
        }
        // Round the final guard digit and carry.
        if raw[digits] >= 5 {
            let mut i = digits;
            loop {
                if i == 0 {
                    raw.insert(0, 1);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if raw[i] == 9 {
                    raw[i] = 0;
                } else {
                    raw[i] += 1;
                    break;
                }
            }
        }
        raw.truncate(digits);
        let mantissa: String = raw.iter().map(|d| (b'0' + d) as char).collect();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if exp10 >= 0 && (exp10 as usize) < digits.min(16) {
            let split = exp10 as usize + 1;
            out.push_str(&mantissa[..split]);
            out.push('.');
            out.push_str(&mantissa[split..]);
        } else if exp10 < 0 && exp10 >= -4 {
            out.push_str("0.");
            for _ in 0..(-exp10 - 1) {
                out.push('0');
            }
            out.push_str(&mantissa);
        } else {
            out.push_str(&mantissa[..1]);
            out.push('.');
            out.push_str(&mantissa[1..]);
            out.push('e');
            out.push_str(&exp10.to_string());
        }
        out
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - Dd::from_f64(q1) * rhs;
        let q2 = r.hi / rhs.hi;
        let r = r - Dd::from_f64(q2) * rhs;
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// Gauss–Legendre rule on `(-1, 1)` refined to double-double precision by
/// Newton iteration from the `f64` nodes.
pub fn gauss_legendre_dd(n: usize) -> (Vec<Dd>, Vec<Dd>) {
    let (xs, _) = crate::quadrature::gauss_legendre(n);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &seed in &xs {
        let mut x = Dd::from_f64(seed);
        let mut dp = Dd::ONE;
        for _ in 0..4 {
            let (p, d) = legendre_dd(n, x);
            dp = d;
            x = x - p / d;
        }
        let w = Dd::from_f64(2.0) / ((Dd::ONE - x * x) * dp * dp);
        nodes.push(x);
        weights.push(w);
    }
    (nodes, weights)
}

fn legendre_dd(n: usize, x: Dd) -> (Dd, Dd) {
    let mut p0 = Dd::ONE;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = (Dd::from_f64(2.0 * kf - 1.0) * x * p1 - Dd::from_f64(kf - 1.0) * p0)
            / Dd::from_f64(kf);
        p0 = p1;
        p1 = p2;
    }
    let d = Dd::from_f64(n as f64) * (x * p1 - p0) / (x * x - Dd::ONE);
    (p1, d)
}

/// Nodes/weights of the double-double half-line rule with the algebraic map
/// `p = scale·t/(1-t)`.
pub fn half_line_rule_dd(n: usize, scale: f64) -> (Vec<Dd>, Vec<Dd>) {
    let (xs, ws) = gauss_legendre_dd(n);
    let half = Dd::from_f64(0.5);
    let l = Dd::from_f64(scale);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (x, w) in xs.into_iter().zip(ws) {
        let t = half * (x + Dd::ONE);
        let u = Dd::ONE - t;
        nodes.push(l * t / u);
        weights.push(half * w * l / (u * u));
    }
    (nodes, weights)
}
