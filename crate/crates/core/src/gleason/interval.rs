//! Outward-rounded `f64` intervals and dyadic parameters.
//!
//! Every operation widens its result by one ulp on each side, so the true
//! real-number result always lies inside.

use std::cmp::Ordering;

/// Dyadic points are `num / 2^SCALE`; with `|c| ≤ 2` the numerator needs at
/// most 53 bits, so every point converts to `f64` exactly.
pub const SCALE: u32 = 52;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dyadic(pub i64);

impl Dyadic {
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        let scaled = x * (1u64 << SCALE) as f64;
        (scaled.fract() == 0.0 && scaled.abs() < 2f64.powi(62)).then_some(Dyadic(scaled as i64))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / (1u64 << SCALE) as f64
    }

    pub fn midpoint(self, other: Dyadic) -> Dyadic {
        Dyadic(self.0 + (other.0 - self.0) / 2)
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn contains_zero(self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    /// `Some(sign)` when the interval excludes 0.
    pub fn sign(self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn disjoint(self, other: Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }

    pub fn add_scalar(self, c: f64) -> Interval {
        self.add(Interval::point(c))
    }

    pub fn mul(self, o: Interval) -> Interval {
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }

    pub fn square(self) -> Interval {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.contains_zero() {
            Interval::new(0.0, a.max(b).next_up())
        } else {
            Interval::new(a.min(b).next_down(), a.max(b).next_up())
        }
    }

    pub fn scale2(self) -> Interval {
        // doubling is exact in binary floating point
        Interval::new(2.0 * self.lo, 2.0 * self.hi)
    }
}

/// Enclosures of `f_c^k(0)` for `k = 1..=n` and of `d/dc f_c^n(0)`, for `c` in `[lo, hi]`.
pub fn critical_orbit_enclosure(lo: f64, hi: f64, n: usize) -> (Vec<Interval>, Interval) {
    let c = Interval::new(lo, hi);
    let mut z = Interval::point(0.0);
    let mut dz = Interval::point(0.0);
    let mut orbit = Vec::with_capacity(n);
    for _ in 0..n {
        dz = z.mul(dz).scale2().add_scalar(1.0);
        z = z.square().add(c);
        orbit.push(z);
    }
    (orbit, dz)
}
