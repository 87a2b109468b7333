//! Gleason polynomials over `ℤ` and `𝔽₂`, with the real-root layer on top.
//!
//! `Qₙ(c) = f_cⁿ(0)` for `f_c(z) = z² + c`, and `Gₙ = Qₙ / ∏_{d | n, d < n} G_d`.
//! Both families are cached per `n` behind [`OnceLock`] cells, so concurrent
//! callers share one computation.

mod interval;
pub mod kneading;
pub mod roots;
pub mod row;

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gf2::Gf2Poly;

pub use interval::{Dyadic, SCALE};
pub use kneading::{
    doubling_map, enumerate_dbar, fold, fold_max, is_closest_to_half, kneading_angle,
    kneading_sequence, Angle, DCycle, DbarClass,
};
pub use roots::{
    critical_orbit, itinerary_of_center, kappa_order, real_roots, Bracket, HyperbolicCenter,
    DEFAULT_PRECISION,
};
pub use row::{assemble_row, format_center, CorrespondenceRow};

/// Largest `n` for which [`qn`] and [`gleason`] are computed over `ℤ`.
///
/// `Q₁₄` has degree 8192 with coefficients of about 5400 bits; one more step
/// multiplies both by roughly 2 and 4.
pub const MAX_INT_N: usize = 14;

/// Largest `n` for [`gleason_mod2`]; `Q̄₂₀` has degree `2¹⁹`.
pub const MAX_MOD2_N: usize = 20;

// below this many terms schoolbook beats packing into one big integer
const KRONECKER_MIN: usize = 24;

/// Integer polynomial in `c`; `coeffs[i]` multiplies `cⁱ`, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    /// The polynomial `c`.
    pub fn c() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        IntPoly::new(mul_signed(&self.coeffs, &other.coeffs))
    }

    pub fn square(&self) -> IntPoly {
        self.mul(self)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    /// Quotient and remainder by a monic divisor, in exact integer arithmetic.
    pub fn div_rem_monic(&self, d: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        if !d.is_monic() {
            return Err(Error::precondition(d, "divisor must be monic"));
        }
        let Some(ds) = self.degree().filter(|&ds| ds >= dd) else {
            return Ok((IntPoly::zero(), self.clone()));
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); ds - dd + 1];
        for i in (0..=ds - dd).rev() {
            let lead = std::mem::take(&mut rem[i + dd]);
            if lead.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs[..dd].iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] -= &lead * dj;
                }
            }
            quot[i] = lead;
        }
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// `self / d`, failing if the remainder is nonzero.
    pub fn div_exact(&self, d: &IntPoly) -> Result<IntPoly> {
        let (q, r) = self.div_rem_monic(d)?;
        if !r.is_zero() {
            return Err(Error::consistency(
                "exact division in ℤ[c]",
                format!("remainder of degree {:?}", r.degree()),
            ));
        }
        Ok(q)
    }

    pub fn reduce_mod2(&self) -> Gf2Poly {
        let odd: Vec<usize> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.bit(0))
            .map(|(i, _)| i)
            .collect();
        Gf2Poly::from_exponents(&odd)
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let modulus = BigInt::from(p);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|a| {
                let r = ((a % &modulus) + &modulus) % &modulus;
                r.try_into().expect("residue below p")
            })
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// Exact sign of `self(num / 2^scale)`.
    pub fn sign_at_dyadic(&self, mut num: i64, mut scale: u32) -> Ordering {
        let Some(d) = self.degree() else {
            return Ordering::Equal;
        };
        while scale > 0 && num % 2 == 0 {
            num /= 2;
            scale -= 1;
        }
        if num == 0 {
            return self.coeff(0).sign().cmp_zero();
        }
        // 2^{scale·d} · self(num / 2^scale) = Σ aᵢ numⁱ 2^{scale(d−i)}
        let p = BigInt::from(num);
        let mut acc = self.coeffs[d].clone();
        for i in (0..d).rev() {
            acc *= &p;
            let a = &self.coeffs[i];
            if !a.is_zero() {
                acc += a << (scale as usize * (d - i));
            }
        }
        acc.sign().cmp_zero()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN))
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for BigSign {
    fn cmp_zero(self) -> Ordering {
        match self {
            BigSign::Minus => Ordering::Less,
            BigSign::NoSign => Ordering::Equal,
            BigSign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            if a.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("c")?,
                _ => write!(f, "c^{i}")?,
            }
        }
        Ok(())
    }
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn split_signs(a: &[BigInt]) -> (Vec<BigUint>, Vec<BigUint>) {
    a.iter()
        .map(|x| match x.sign() {
            BigSign::Minus => (BigUint::zero(), x.magnitude().clone()),
            _ => (x.magnitude().clone(), BigUint::zero()),
        })
        .unzip()
}

/// Product of nonnegative coefficient vectors by Kronecker substitution:
/// pack into one integer with slots wide enough that no carry crosses a slot.
/// `b = None` squares `a`.
fn kronecker(a: &[BigUint], b: Option<&[BigUint]>) -> Option<Vec<BigUint>> {
    let bits = |v: &[BigUint]| v.iter().map(BigUint::bits).max().unwrap_or(0);
    let other = b.unwrap_or(a);
    let (ba, bb) = (bits(a), bits(other));
    if ba == 0 || bb == 0 {
        return None;
    }
    let guard = u64::from(usize::BITS - a.len().min(other.len()).leading_zeros());
    let words = (ba + bb + guard).div_ceil(32) as usize;
    let pack = |v: &[BigUint]| {
        let mut digits = vec![0u32; v.len() * words];
        for (i, x) in v.iter().enumerate() {
            let d = x.to_u32_digits();
            digits[i * words..i * words + d.len()].copy_from_slice(&d);
        }
        BigUint::new(digits)
    };
    let x = pack(a);
    let prod = match b {
        None => &x * &x,
        Some(b) => x * pack(b),
    };
    let digits = prod.to_u32_digits();
    let len = a.len() + other.len() - 1;
    Some(
        (0..len)
            .map(|i| {
                let lo = (i * words).min(digits.len());
                let hi = ((i + 1) * words).min(digits.len());
                BigUint::from_slice(&digits[lo..hi])
            })
            .collect(),
    )
}

fn mul_signed(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len().min(b.len()) < KRONECKER_MIN {
        return schoolbook(a, b);
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    let mut accumulate = |prod: Option<Vec<BigUint>>, sign: BigSign| {
        for (o, p) in out.iter_mut().zip(prod.into_iter().flatten()) {
            *o += BigInt::from_biguint(sign, p);
        }
    };
    let (ap, an) = split_signs(a);
    if std::ptr::eq(a, b) {
        accumulate(kronecker(&ap, None), BigSign::Plus);
        accumulate(kronecker(&an, None), BigSign::Plus);
        let cross = kronecker(&ap, Some(&an));
        accumulate(cross.clone(), BigSign::Minus);
        accumulate(cross, BigSign::Minus);
    } else {
        let (bp, bn) = split_signs(b);
        accumulate(kronecker(&ap, Some(&bp)), BigSign::Plus);
        accumulate(kronecker(&an, Some(&bn)), BigSign::Plus);
        accumulate(kronecker(&ap, Some(&bn)), BigSign::Minus);
        accumulate(kronecker(&an, Some(&bp)), BigSign::Minus);
    }
    out
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::InvalidLength {
            len: n,
            reason: "period out of the supported range",
        });
    }
    Ok(())
}

type Cell<T> = OnceLock<Result<T>>;

fn cached<T>(cell: &'static Cell<T>, init: impl FnOnce() -> Result<T>) -> Result<&'static T> {
    cell.get_or_init(init).as_ref().map_err(Clone::clone)
}

fn proper_divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..n).filter(move |d| n % d == 0)
}

static Q_CACHE: [Cell<IntPoly>; MAX_INT_N + 1] = [const { OnceLock::new() }; MAX_INT_N + 1];
static G_CACHE: [Cell<IntPoly>; MAX_INT_N + 1] = [const { OnceLock::new() }; MAX_INT_N + 1];
static QBAR_CACHE: [Cell<Gf2Poly>; MAX_MOD2_N + 1] = [const { OnceLock::new() }; MAX_MOD2_N + 1];
static GBAR_CACHE: [Cell<Gf2Poly>; MAX_MOD2_N + 1] = [const { OnceLock::new() }; MAX_MOD2_N + 1];

/// `Q₁ = c`, `Qₖ₊₁ = Qₖ² + c`.
pub fn qn(n: usize) -> Result<&'static IntPoly> {
    check_n(n, MAX_INT_N)?;
    cached(&Q_CACHE[n], || {
        if n == 1 {
            return Ok(IntPoly::c());
        }
        Ok(qn(n - 1)?.square().add(&IntPoly::c()))
    })
}

/// `Gₙ = Qₙ / ∏_{d | n, d < n} G_d`.
pub fn gleason(n: usize) -> Result<&'static IntPoly> {
    check_n(n, MAX_INT_N)?;
    cached(&G_CACHE[n], || {
        let mut divisor = IntPoly::one();
        for d in proper_divisors(n) {
            divisor = divisor.mul(gleason(d)?);
        }
        qn(n)?.div_exact(&divisor)
    })
}

fn qn_mod2(n: usize) -> Result<&'static Gf2Poly> {
    check_n(n, MAX_MOD2_N)?;
    cached(&QBAR_CACHE[n], || {
        if n == 1 {
            return Ok(Gf2Poly::x());
        }
        Ok(&qn_mod2(n - 1)?.square() + &Gf2Poly::x())
    })
}

/// `Ḡₙ`, computed in `𝔽₂[c]` from `Q̄ₖ₊₁ = Q̄ₖ² + c` without touching integers.
pub fn gleason_mod2(n: usize) -> Result<&'static Gf2Poly> {
    check_n(n, MAX_MOD2_N)?;
    cached(&GBAR_CACHE[n], || {
        let mut divisor = Gf2Poly::one();
        for d in proper_divisors(n) {
            divisor = &divisor * gleason_mod2(d)?;
        }
        qn_mod2(n)?.div_exact(&divisor)
    })
}

/// Prime `p` for which `gcd(Gₙ mod p, Gₙ′ mod p) = 1`.
///
/// `Gₙ` is monic, so a repeated factor over `ℚ` would survive reduction
/// modulo every prime; one coprime reduction proves `Gₙ` squarefree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SquarefreeCertificate {
    pub n: usize,
    pub prime: u64,
}

const CERTIFICATE_PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

pub fn squarefree_certificate(n: usize) -> Result<SquarefreeCertificate> {
    let gbar = gleason_mod2(n)?;
    if gbar.gcd(&gbar.derivative()).is_one() {
        return Ok(SquarefreeCertificate { n, prime: 2 });
    }
    let g = gleason(n)?;
    for p in CERTIFICATE_PRIMES {
        let gp = g.reduce_mod(p);
        let dp = g.derivative().reduce_mod(p);
        if gcd_mod(gp, dp, p).len() == 1 {
            return Ok(SquarefreeCertificate { n, prime: p });
        }
    }
    Err(Error::Isolation {
        n: n as u32,
        reason: "no prime certifies that Gₙ is squarefree".into(),
    })
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Remainder in `𝔽_p[c]`; both inputs trimmed, divisor nonzero.
fn rem_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    while a.len() > db {
        let top = a.len() - 1;
        let f = ((a[top] as u128 * inv as u128) % p as u128) as u64;
        for (j, &bj) in b.iter().enumerate() {
            let k = top - db + j;
            let sub = ((f as u128 * bj as u128) % p as u128) as u64;
            a[k] = (a[k] + p - sub) % p;
        }
        while a.last() == Some(&0) {
            a.pop();
        }
    }
    a
}

/// Non-monic gcd in `𝔽_p[c]`; a constant result has length 1.
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        let r = rem_mod(a, &b, p);
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn qn_small() {
        assert_eq!(qn(1).unwrap(), &poly(&[0, 1]));
        assert_eq!(qn(2).unwrap(), &poly(&[0, 1, 1]));
        assert_eq!(qn(3).unwrap(), &poly(&[0, 1, 1, 2, 1]));
        // ((c² + c)² + c)² + c, expanded by squaring the line above
        let q3 = poly(&[0, 1, 1, 2, 1]);
        assert_eq!(qn(4).unwrap(), &q3.square().add(&IntPoly::c()));
        assert_eq!(qn(4).unwrap().degree(), Some(8));
    }

    #[test]
    fn gleason_small() {
        assert_eq!(gleason(1).unwrap(), &poly(&[0, 1]));
        assert_eq!(gleason(2).unwrap(), &poly(&[1, 1]));
        assert_eq!(gleason(3).unwrap(), &poly(&[1, 1, 2, 1]));
        assert_eq!(gleason(4).unwrap(), &poly(&[1, 0, 2, 3, 3, 3, 1]));
        assert_eq!(gleason(3).unwrap().to_string(), "c^3+2c^2+c+1");
        assert_eq!(gleason(4).unwrap().to_string(), "c^6+3c^5+3c^4+3c^3+2c^2+1");
        assert_eq!(
            qn(3).unwrap(),
            &gleason(1).unwrap().mul(gleason(3).unwrap())
        );
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a: Vec<BigInt> = (0..60)
            .map(|i| BigInt::from((i * 7919 % 113) - 56) << (i % 70))
            .collect();
        let b: Vec<BigInt> = (0..45)
            .map(|i| BigInt::from((i * 104729 % 97) - 48) << (i % 50))
            .collect();
        assert_eq!(mul_signed(&a, &b), schoolbook(&a, &b));
        assert_eq!(mul_signed(&a, &a), schoolbook(&a, &a));
    }

    #[test]
    fn division_remainder() {
        let (q, r) = poly(&[1, 0, 0, 1]).div_rem_monic(&poly(&[1, 1])).unwrap();
        assert_eq!(q, poly(&[1, -1, 1]));
        assert!(r.is_zero());
        let (_, r) = poly(&[2, 0, 1]).div_rem_monic(&poly(&[0, 1])).unwrap();
        assert_eq!(r, poly(&[2]));
        assert!(poly(&[1, 2]).div_rem_monic(&poly(&[1, 2])).is_err());
        assert!(poly(&[2, 0, 1]).div_exact(&poly(&[0, 1])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(poly(&[0, -1, 0, 2]).to_string(), "2c^3-c");
        assert_eq!(poly(&[-3]).to_string(), "-3");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_signs() {
        let g3 = gleason(3).unwrap();
        // root near −1.7549
        assert_eq!(g3.sign_at_dyadic(-15 << 49, 52), Ordering::Less);
        assert_eq!(g3.sign_at_dyadic(-7 << 50, 52), Ordering::Greater);
        assert_eq!(
            gleason(2).unwrap().sign_at_dyadic(-1 << 52, 52),
            Ordering::Equal
        );
        assert_eq!(gleason(1).unwrap().sign_at_dyadic(0, 52), Ordering::Equal);
        assert_eq!(poly(&[-1, 0, 4]).sign_at_dyadic(1, 1), Ordering::Equal);
        assert_eq!(poly(&[-1, 0, 4]).sign_at_dyadic(3, 2), Ordering::Greater);
    }

    #[test]
    fn mod2_small() {
        assert_eq!(gleason_mod2(1).unwrap().to_string(), "x");
        assert_eq!(gleason_mod2(3).unwrap().to_string(), "x^3+x+1");
        let product = &"x^4+x+1".parse::<Gf2Poly>().unwrap() * &"x^2+x+1".parse().unwrap();
        assert_eq!(gleason_mod2(4).unwrap(), &product);
        assert_eq!(gleason_mod2(4).unwrap().to_string(), "x^6+x^5+x^4+x^3+1");
    }

    #[test]
    fn mod2_matches_integer_reduction() {
        for n in 1..=12 {
            assert_eq!(
                &gleason(n).unwrap().reduce_mod2(),
                gleason_mod2(n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn squarefree_small() {
        for n in 1..=10 {
            squarefree_certificate(n).unwrap();
        }
        // x(x + 1)² is not squarefree modulo anything
        let f = poly(&[0, 1, 2, 1]);
        for p in CERTIFICATE_PRIMES {
            assert!(gcd_mod(f.reduce_mod(p), f.derivative().reduce_mod(p), p).len() > 1);
        }
    }

    #[test]
    fn range_errors() {
        assert!(qn(0).is_err());
        assert!(gleason(MAX_INT_N + 1).is_err());
        assert!(gleason_mod2(0).is_err());
    }
}
