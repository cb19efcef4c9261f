//! Exact arithmetic in `Q(√d)` for rotation words.
//!
//! A letter of a rotation word is decided by comparing `n·α mod 1` with an
//! interval endpoint. For irrational `α` the orbit comes arbitrarily close to
//! the endpoints, so every comparison here is done on integers.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// The number `(a + b·√d) / c` with `c > 0`.
///
/// `d` is either zero (a rational number, `b == 0`) or a positive non-square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: i128,
    b: i128,
    c: i128,
    d: i128,
}

fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl QuadSurd {
    /// `(a + b·√d) / c`. A perfect-square radicand is folded into the rational part.
    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Result<Self> {
        if c == 0 {
            return Err(Error::validation("surd", "zero denominator"));
        }
        if d < 0 {
            return Err(Error::validation("surd", "negative radicand"));
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c < 0 {
            (a, b, c) = (-a, -b, -c);
        }
        let root = isqrt(d);
        let (a, b, d) = if b == 0 || d == 0 {
            (a, 0, 0)
        } else if root * root == d {
            (a + b * root, 0, 0)
        } else {
            (a, b, d)
        };
        let g = gcd(gcd(a, b), c);
        let g = if g == 0 { 1 } else { g };
        Ok(QuadSurd { a: a / g, b: b / g, c: c / g, d })
    }

    pub fn rational(p: i128, q: i128) -> Result<Self> {
        Self::new(p, 0, q, 0)
    }

    pub fn integer(n: i128) -> Self {
        QuadSurd { a: n, b: 0, c: 1, d: 0 }
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn radicand(&self) -> i128 {
        self.d
    }

    /// Numerator and denominator when rational.
    pub fn as_fraction(&self) -> Option<(i128, i128)> {
        self.is_rational().then_some((self.a, self.c))
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.d as f64).sqrt()) / self.c as f64
    }

    fn common_radicand(&self, other: &Self) -> Result<i128> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d, e) if d == e => Ok(d),
            _ => Err(Error::validation("surd", "operands live in different quadratic fields")),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Self::new(self.a * other.c - other.a * self.c, self.b * other.c - other.b * self.c, self.c * other.c, d)
    }

    pub fn mul_int(&self, n: i128) -> Self {
        // gcd normalization cannot fail here: c stays positive and non-zero.
        Self::new(self.a * n, self.b * n, self.c, self.d).expect("valid surd")
    }

    pub fn sub_int(&self, n: i128) -> Self {
        Self::new(self.a - n * self.c, self.b, self.c, self.d).expect("valid surd")
    }

    /// Exact sign of the number.
    pub fn signum(&self) -> i32 {
        // The denominator is positive, so the sign is that of a + b·√d.
        let (a, b) = (self.a, self.b);
        let sa = a.signum() as i32;
        let sb = b.signum() as i32;
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a² with b²·d.
        match (a * a).cmp(&(b * b * self.d)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn floor(&self) -> i128 {
        let mut k = self.to_f64().floor() as i128;
        while self.sub_int(k).signum() < 0 {
            k -= 1;
        }
        while self.sub_int(k + 1).signum() >= 0 {
            k += 1;
        }
        k
    }

    /// `self mod 1`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self.sub_int(self.floor())
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.signum().cmp(&0))
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}/{}", self.a, self.c)
        } else {
            write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
        }
    }
}

/// Rotation parameters: `b(n) = 1` iff `n·α mod 1` lies in `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationParams {
    alpha: QuadSurd,
    lo: QuadSurd,
    hi: QuadSurd,
}

impl RotationParams {
    pub fn new(alpha: QuadSurd, lo: QuadSurd, hi: QuadSurd) -> Result<Self> {
        let zero = QuadSurd::integer(0);
        let one = QuadSurd::integer(1);
        if alpha.signum() <= 0 || alpha.cmp_exact(&one)? != Ordering::Less {
            return Err(Error::validation("alpha", "must lie strictly between 0 and 1"));
        }
        if lo.cmp_exact(&zero)? == Ordering::Less || hi.cmp_exact(&one)? == Ordering::Greater {
            return Err(Error::validation("interval", "must be a sub-interval of [0,1)"));
        }
        if lo.cmp_exact(&hi)? != Ordering::Less {
            return Err(Error::validation("interval", "must be non-empty"));
        }
        // All three must share a field so membership tests stay exact.
        alpha.common_radicand(&lo)?;
        alpha.common_radicand(&hi)?;
        lo.common_radicand(&hi)?;
        Ok(RotationParams { alpha, lo, hi })
    }

    /// `α = (√5 − 1)/2` with the interval `[1 − α, 1)`.
    pub fn fibonacci() -> Self {
        let alpha = QuadSurd::new(-1, 1, 2, 5).expect("valid surd");
        let lo = QuadSurd::integer(1).checked_sub(&alpha).expect("same field");
        Self::new(alpha, lo, QuadSurd::integer(1)).expect("valid rotation")
    }

    /// The rational rotation with `α_m = F(m+1)/F(m+2)`, the `m`-th continued
    /// fraction convergent of the golden rotation, and interval `[1 − α_m, 1)`.
    pub fn fibonacci_convergent(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("m", "convergent index starts at 1"));
        }
        let (mut f0, mut f1) = (1i128, 1i128);
        for _ in 0..m {
            (f0, f1) = (f1, f0 + f1);
        }
        // Now f0 = F(m+1), f1 = F(m+2).
        let alpha = QuadSurd::rational(f0, f1)?;
        let lo = QuadSurd::integer(1).checked_sub(&alpha)?;
        Self::new(alpha, lo, QuadSurd::integer(1))
    }

    pub fn alpha(&self) -> QuadSurd {
        self.alpha
    }

    pub fn interval(&self) -> (QuadSurd, QuadSurd) {
        (self.lo, self.hi)
    }

    pub fn is_rational(&self) -> bool {
        self.alpha.is_rational()
    }

    /// Least period of the word when `α = p/q` is rational.
    pub fn period(&self) -> Option<usize> {
        self.alpha.as_fraction().map(|(_, q)| q as usize)
    }

    pub fn letter(&self, n: i64) -> u8 {
        let x = self.alpha.mul_int(n as i128).fract();
        let above_lo = x.cmp_exact(&self.lo).expect("same field") != Ordering::Less;
        let below_hi = x.cmp_exact(&self.hi).expect("same field") == Ordering::Less;
        u8::from(above_lo && below_hi)
    }
}
