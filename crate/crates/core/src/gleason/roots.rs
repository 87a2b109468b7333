//! Certified isolation and refinement of the real roots of `Gₙ`.
//!
//! Isolation never evaluates `Gₙ` in floating point. Interval enclosures of
//! the critical orbit discard subintervals where `Qₙ ≠ 0` and certify those
//! where `Qₙ` is monotone; on a monotone piece `Qₙ` has at most one root, and
//! an exact sign change of `Gₙ` between the endpoints attributes it to `Gₙ`.
//! The bracket count must then equal `γₙ`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::interval::{critical_orbit_enclosure, Dyadic, Interval, SCALE};
use super::kneading::{kneading_angle, kneading_sequence, Angle};
use super::{gleason, squarefree_certificate, IntPoly, MAX_INT_N};
use crate::bijections::{cycle_from_ranks, CyclicUnimodalPermutation, ItinerarySymbolic, Symbol};
use crate::counting;
use crate::error::{Error, Result};
use crate::words::BitString;

/// Default bracket width for refined centers.
pub const DEFAULT_PRECISION: f64 = 1e-12;

/// Orbit values closer to 0 than this are not trusted for a sign.
pub const SIGN_TOLERANCE: f64 = 1e-6;

// all real centers lie in [−2, 1/4]
const SEARCH_LO: i64 = -2 << SCALE;
const SEARCH_HI: i64 = 1 << (SCALE - 2);
const MAX_DEPTH: u32 = 64;

/// A closed interval with dyadic endpoints `num / 2⁵²`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Bracket {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        (self.hi.0 - self.lo.0) as f64 / (1u64 << SCALE) as f64
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.midpoint(self.hi)
    }

    fn units(&self) -> i64 {
        self.hi.0 - self.lo.0
    }

    fn enclosure(&self, n: usize) -> (Vec<Interval>, Interval) {
        critical_orbit_enclosure(self.lo.to_f64(), self.hi.to_f64(), n)
    }
}

impl Dyadic {
    /// The value as a reduced fraction `"p/2^k"` written out, e.g. `"-7/4"`.
    pub fn to_rational_string(self) -> String {
        let (mut p, mut k) = (self.0, SCALE);
        while k > 0 && p % 2 == 0 {
            p /= 2;
            k -= 1;
        }
        format!("{p}/{}", 1u64 << k)
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_rational_string(),
            self.hi.to_rational_string()
        )
    }
}

impl Serialize for Bracket {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo.to_rational_string(), self.hi.to_rational_string()].serialize(s)
    }
}

/// A real root of `Gₙ` with its certified dynamical data.
#[derive(Clone, PartialEq, Debug)]
pub struct HyperbolicCenter {
    pub period: usize,
    /// Midpoint of `bracket`.
    pub value: f64,
    /// `Gₙ` has strictly opposite exact signs at the endpoints.
    pub bracket: Bracket,
    /// `f_c(0), …, f_cⁿ(0)` evaluated at `value`.
    pub orbit: Vec<f64>,
    /// `rᵢ`, the rank of `f_cⁱ(0)` within the orbit, with `f_cⁿ(0) = 0`.
    pub ranks: Vec<usize>,
    /// `(κ₁, …, κₙ₋₁, ⋆)`.
    pub itinerary: ItinerarySymbolic,
    pub kneading: BitString,
    pub kneading_angle: Angle,
    pub orbit_permutation: CyclicUnimodalPermutation,
}

impl HyperbolicCenter {
    /// `(⋆, κ₁, …, κₙ₋₁)`.
    pub fn kappa(&self) -> Vec<Symbol> {
        kappa_order(&self.itinerary)
    }
}

/// Rotates an itinerary right by one so that `⋆` leads.
pub fn kappa_order(itinerary: &ItinerarySymbolic) -> Vec<Symbol> {
    let mut symbols = itinerary.symbols().to_vec();
    symbols.rotate_right(1);
    symbols
}

/// `f_c(0), f_c²(0), …, f_cⁿ(0)` in `f64`.
pub fn critical_orbit(c: f64, n: usize) -> Vec<f64> {
    std::iter::successors(Some(c), |z| Some(z * z + c))
        .take(n)
        .collect()
}

/// Signs of `f_c¹(0) … f_cⁿ⁻¹(0)` followed by `⋆`.
pub fn itinerary_of_center(orbit: &[f64]) -> Result<ItinerarySymbolic> {
    let Some((last, rest)) = orbit.split_last() else {
        return Err(Error::InvalidLength {
            len: 0,
            reason: "orbit must be non-empty",
        });
    };
    if last.abs() > SIGN_TOLERANCE {
        return Err(Error::precondition(last, "orbit does not return to 0"));
    }
    let mut symbols = Vec::with_capacity(orbit.len());
    for (i, &z) in rest.iter().enumerate() {
        if z.abs() < SIGN_TOLERANCE || z.is_nan() {
            return Err(Error::precondition(
                z,
                format!("sign of f^{}(0) is undecidable", i + 1),
            ));
        }
        symbols.push(if z > 0.0 { Symbol::Plus } else { Symbol::Minus });
    }
    symbols.push(Symbol::Star);
    ItinerarySymbolic::new(symbols)
}

fn isolation_error(n: usize, reason: impl Into<String>) -> Error {
    Error::Isolation {
        n: n as u32,
        reason: reason.into(),
    }
}

/// Sign of `Gₙ(x)`; exact evaluation only when the orbit enclosures meet 0.
fn sign_at(n: usize, g: &IntPoly, x: Dyadic) -> Ordering {
    enclosure_sign(n, x).unwrap_or_else(|| g.sign_at_dyadic(x.0, SCALE))
}

/// `Q_d = ∏_{e | d} G_e` and `f_cᵈ(0) = Q_d(c)`, so when the enclosures of
/// `f_cᵈ(0)` for `d | n` all exclude 0 they fix the sign of every `G_d`.
fn enclosure_sign(n: usize, x: Dyadic) -> Option<Ordering> {
    let c = x.to_f64();
    let (orbit, _) = critical_orbit_enclosure(c, c, n);
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut g_signs: Vec<bool> = Vec::with_capacity(divisors.len());
    for &d in &divisors {
        let mut negative = orbit[d - 1].sign()? == Ordering::Less;
        for (&e, &neg) in divisors.iter().zip(&g_signs) {
            if d % e == 0 {
                negative ^= neg;
            }
        }
        g_signs.push(negative);
    }
    Some(if g_signs[g_signs.len() - 1] {
        Ordering::Less
    } else {
        Ordering::Greater
    })
}

/// Brackets for every real root of `Gₙ`, ascending.
fn isolate(n: usize, g: &IntPoly) -> Result<Vec<Bracket>> {
    let mut brackets = Vec::new();
    let mut exact = BTreeSet::new();
    let mut stack = vec![(
        Bracket {
            lo: Dyadic(SEARCH_LO),
            hi: Dyadic(SEARCH_HI),
        },
        0u32,
    )];
    while let Some((b, depth)) = stack.pop() {
        let (orbit, deriv) = b.enclosure(n);
        if !orbit[n - 1].contains_zero() {
            continue;
        }
        if !deriv.contains_zero() {
            let (sl, sh) = (sign_at(n, g, b.lo), sign_at(n, g, b.hi));
            for (s, x) in [(sl, b.lo), (sh, b.hi)] {
                if s == Ordering::Equal {
                    exact.insert(x);
                }
            }
            if sl != Ordering::Equal && sh != Ordering::Equal && sl != sh {
                brackets.push(b);
            }
            continue;
        }
        if depth >= MAX_DEPTH || b.units() < 2 {
            return Err(isolation_error(
                n,
                format!("could not separate roots near {}", b.lo.to_f64()),
            ));
        }
        let m = b.midpoint();
        stack.push((Bracket { lo: b.lo, hi: m }, depth + 1));
        stack.push((Bracket { lo: m, hi: b.hi }, depth + 1));
    }
    // a monic integer polynomial has only integer rational roots; snap onto
    // them so their centers come out exact
    for k in -2i64..=0 {
        let x = Dyadic(k << SCALE);
        if sign_at(n, g, x) == Ordering::Equal {
            brackets.retain(|b| !(b.lo < x && x < b.hi));
            exact.insert(x);
        }
    }
    for x in exact {
        brackets.push(exact_root_bracket(n, g, x)?);
    }
    brackets.sort_by_key(|b| b.lo);
    Ok(brackets)
}

/// A root at a dyadic point gets the bracket one unit either side.
fn exact_root_bracket(n: usize, g: &IntPoly, x: Dyadic) -> Result<Bracket> {
    let b = Bracket {
        lo: Dyadic(x.0 - 1),
        hi: Dyadic(x.0 + 1),
    };
    let (sl, sh) = (sign_at(n, g, b.lo), sign_at(n, g, b.hi));
    if sl == Ordering::Equal || sh == Ordering::Equal || sl == sh {
        return Err(isolation_error(
            n,
            format!("root {} is not simple", x.to_f64()),
        ));
    }
    Ok(b)
}

/// Bisects on exact signs until the bracket is narrower than `precision`
/// and its orbit enclosures decide every rank and sign.
fn refine(n: usize, g: &IntPoly, mut b: Bracket, precision: f64) -> Result<HyperbolicCenter> {
    let sign_lo = sign_at(n, g, b.lo);
    loop {
        if b.width() <= precision {
            if let Some(center) = certify(n, b)? {
                return Ok(center);
            }
        }
        if b.units() < 2 {
            return Err(isolation_error(
                n,
                format!(
                    "orbit of {} not separated at full resolution",
                    b.lo.to_f64()
                ),
            ));
        }
        let m = b.midpoint();
        match sign_at(n, g, m) {
            Ordering::Equal => {
                let exact = exact_root_bracket(n, g, m)?;
                return certify(n, exact)?.ok_or_else(|| {
                    isolation_error(
                        n,
                        format!("orbit of exact root {} not separated", m.to_f64()),
                    )
                });
            }
            s if s == sign_lo => b.lo = m,
            _ => b.hi = m,
        }
    }
}

/// `None` when the bracket is still too wide to read the orbit off.
fn certify(n: usize, b: Bracket) -> Result<Option<HyperbolicCenter>> {
    let (enclosure, _) = b.enclosure(n);
    let inner = &enclosure[..n - 1];
    if inner.iter().any(|z| z.contains_zero()) {
        return Ok(None);
    }
    for (i, x) in inner.iter().enumerate() {
        if inner[i + 1..].iter().any(|y| !x.disjoint(*y)) {
            return Ok(None);
        }
    }
    let value = b.midpoint().to_f64();
    let orbit = critical_orbit(value, n);
    if orbit[n - 1].abs() > SIGN_TOLERANCE {
        return Ok(None);
    }

    // f^n(0) = 0 exactly at the root; it sits between the negative and positive points
    let key = |i: usize| {
        if i + 1 == n {
            Interval::point(0.0)
        } else {
            enclosure[i]
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| key(i).lo.total_cmp(&key(j).lo));
    let mut ranks = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r + 1;
    }

    let mut symbols: Vec<Symbol> = inner
        .iter()
        .map(|z| match z.sign() {
            Some(Ordering::Greater) => Symbol::Plus,
            _ => Symbol::Minus,
        })
        .collect();
    symbols.push(Symbol::Star);
    let itinerary = ItinerarySymbolic::new(symbols)?;
    if itinerary_of_center(&orbit)? != itinerary {
        return Err(Error::consistency(
            "point orbit agrees with enclosures",
            format!("c = {value}"),
        ));
    }

    let kneading = kneading_sequence(&kappa_order(&itinerary))?;
    let kneading_angle = kneading_angle(&kneading)?;
    if !kneading.is_primitive() {
        return Err(Error::consistency(
            "kneading angle has primitive period n",
            format!("c = {value}, angle {kneading_angle}"),
        ));
    }
    let orbit_permutation = cycle_from_ranks(&ranks)?;
    Ok(Some(HyperbolicCenter {
        period: n,
        value,
        bracket: b,
        orbit,
        ranks,
        itinerary,
        kneading,
        kneading_angle,
        orbit_permutation,
    }))
}

/// Every real root of `Gₙ`, ascending, each refined to `precision`.
///
/// Fails unless `Gₙ` is certified squarefree and exactly `γₙ` brackets are found.
pub fn real_roots(n: usize, precision: f64) -> Result<Vec<HyperbolicCenter>> {
    if n == 0 || n > MAX_INT_N {
        return Err(Error::InvalidLength {
            len: n,
            reason: "real_roots supports 1 ≤ n ≤ 14",
        });
    }
    if precision.is_nan() || precision <= 0.0 {
        return Err(Error::precondition(precision, "precision must be positive"));
    }
    squarefree_certificate(n)?;
    let g = gleason(n)?;
    let brackets = isolate(n, g)?;
    let expected = counting::gamma(n as u64)?;
    if expected.to_usize() != Some(brackets.len()) {
        return Err(isolation_error(
            n,
            format!(
                "found {} brackets, expected γₙ = {expected}",
                brackets.len()
            ),
        ));
    }
    brackets
        .into_iter()
        .map(|b| refine(n, g, b, precision))
        .collect()
}
