//! Arithmetic over `𝔽₂`: the polynomial ring `𝔽₂[x]` with factorization,
//! the fields `𝔽_{2ⁿ}` for `n ≤ 64`, normal bases, and the correspondence
//! between necklaces and irreducible polynomials through a normal basis.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::words::{BitString, Necklace};

/// A polynomial over `𝔽₂`; bit `i` of the packed words is the coefficient
/// of `xⁱ`. No trailing zero words, so the zero polynomial has no words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let w = shift / 64;
    let b = shift % 64;
    if b == 0 {
        for (d, s) in dst[w..].iter_mut().zip(src) {
            *d ^= s;
        }
    } else {
        for (i, &s) in src.iter().enumerate() {
            dst[w + i] ^= s << b;
            let hi = s >> (64 - b);
            if hi != 0 {
                dst[w + i + 1] ^= hi;
            }
        }
    }
}

fn spread(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & 0x5555_5555_5555_5555
}

fn compress(x: u64) -> u32 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    ((x | (x >> 16)) & 0xFFFF_FFFF) as u32
}

impl Gf2Poly {
    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Gf2Poly { words }
    }

    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn from_u128(bits: u128) -> Self {
        Self::from_words(vec![bits as u64, (bits >> 64) as u64])
    }

    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn x() -> Self {
        Self::from_u64(2)
    }

    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0; k / 64 + 1];
        words[k / 64] = 1 << (k % 64);
        Gf2Poly { words }
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        exps.iter()
            .fold(Self::zero(), |acc, &k| &acc + &Self::monomial(k))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some(64 * (self.words.len() - 1) + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> u8 {
        self.words
            .get(i / 64)
            .map_or(0, |w| (w >> (i % 64) & 1) as u8)
    }

    /// The packed value, if the degree is below 128.
    pub fn to_u128(&self) -> Option<u128> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0] as u128),
            2 => Some(self.words[0] as u128 | (self.words[1] as u128) << 64),
            _ => None,
        }
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn square(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.words.len());
        for &w in &self.words {
            out.push(spread(w as u32));
            out.push(spread((w >> 32) as u32));
        }
        Self::from_words(out)
    }

    /// `g` with `g² = self`, if `self` is a square.
    pub fn sqrt(&self) -> Option<Self> {
        if self.words.iter().any(|w| w & 0xAAAA_AAAA_AAAA_AAAA != 0) {
            return None;
        }
        let mut out = vec![0u64; self.words.len().div_ceil(2)];
        for (i, &w) in self.words.iter().enumerate() {
            out[i / 2] |= (compress(w) as u64) << (32 * (i % 2));
        }
        Some(Self::from_words(out))
    }

    pub fn derivative(&self) -> Self {
        // odd-power terms survive, shifted down by one
        let words = self
            .words
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let next = self.words.get(i + 1).copied().unwrap_or(0);
                ((w >> 1) | (next << 63)) & 0x5555_5555_5555_5555
            })
            .collect();
        Self::from_words(words)
    }

    pub fn divrem(&self, g: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly)> {
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let Some(df) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if df < dg {
            return Ok((Self::zero(), self.clone()));
        }
        let mut r = self.words.clone();
        let mut q = vec![0u64; (df - dg) / 64 + 1];
        for i in (dg..=df).rev() {
            if r[i / 64] >> (i % 64) & 1 == 1 {
                xor_shifted(&mut r, &g.words, i - dg);
                q[(i - dg) / 64] |= 1 << ((i - dg) % 64);
            }
        }
        Ok((Self::from_words(q), Self::from_words(r)))
    }

    pub fn rem(&self, g: &Gf2Poly) -> Result<Gf2Poly> {
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let Some(df) = self.degree() else {
            return Ok(Self::zero());
        };
        if df < dg {
            return Ok(self.clone());
        }
        let mut r = self.words.clone();
        for i in (dg..=df).rev() {
            if r[i / 64] >> (i % 64) & 1 == 1 {
                xor_shifted(&mut r, &g.words, i - dg);
            }
        }
        Ok(Self::from_words(r))
    }

    /// Exact quotient; errors if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Gf2Poly) -> Result<Gf2Poly> {
        let (q, r) = self.divrem(g)?;
        if !r.is_zero() {
            return Err(Error::consistency(
                "exact division in 𝔽₂[x]",
                format!("{g} ∤ {self}"),
            ));
        }
        Ok(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(&self, other: &Gf2Poly, m: &Gf2Poly) -> Result<Gf2Poly> {
        (self * other).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &Gf2Poly) -> Result<Gf2Poly> {
        let mut base = self.rem(m)?;
        let mut acc = Self::one().rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m)?;
            }
            base = base.square().rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Rabin's test: `f | x^{2ⁿ} − x` and `gcd(x^{2^{n/p}} − x, f) = 1` for primes `p | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => {
                return Err(Error::precondition(self, "irreducibility needs degree ≥ 1"))
            }
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let x = Self::x();
        let mut powers = Vec::with_capacity(n + 1);
        let mut h = x.clone();
        powers.push(h.clone());
        for _ in 0..n {
            h = h.square().rem(self)?;
            powers.push(h.clone());
        }
        if powers[n] != x {
            return Ok(false);
        }
        for p in prime_divisors(n) {
            let diff = &powers[n / p] + &x;
            if !diff.gcd(self).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coefficient of `x^{d−1}` vanishes; constants are not centered.
    pub fn is_centered(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(d) => self.coeff(d - 1) == 0,
        }
    }

    /// Irreducible factors with multiplicity, sorted by degree then value.
    pub fn factor(&self) -> Result<Vec<(Gf2Poly, u32)>> {
        match self.degree() {
            None | Some(0) => return Err(Error::precondition(self, "factor needs degree ≥ 1")),
            Some(_) => {}
        }
        let mut out: Vec<(Gf2Poly, u32)> = Vec::new();
        for (part, mult) in squarefree_decomposition(self)? {
            for (block, d) in distinct_degree(&part)? {
                for p in equal_degree(&block, d)? {
                    out.push((p, mult));
                }
            }
        }
        out.sort();
        let mut merged: Vec<(Gf2Poly, u32)> = Vec::with_capacity(out.len());
        for (p, m) in out {
            match merged.last_mut() {
                Some((q, k)) if *q == p => *k += m,
                _ => merged.push((p, m)),
            }
        }
        Ok(merged)
    }

    /// `0x…` with bit `i` the coefficient of `xⁱ`.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0x0".into();
        }
        let mut s = format!("0x{:x}", self.words.last().unwrap());
        for w in self.words.iter().rev().skip(1) {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let digits = text
            .trim()
            .trim_start_matches("0x")
            .trim_start_matches("0X");
        if digits.is_empty() {
            return Err(Error::parse("hex polynomial", text, "no digits"));
        }
        let mut words = vec![0u64; digits.len().div_ceil(16)];
        for (i, c) in digits.chars().rev().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::parse("hex polynomial", text, format!("bad digit {c:?}")))?;
            words[i / 16] |= (v as u64) << (4 * (i % 16));
        }
        Ok(Self::from_words(words))
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Pairs `(g, m)` with `f = ∏ gᵐ`, each `g` squarefree and coprime.
fn squarefree_decomposition(f: &Gf2Poly) -> Result<Vec<(Gf2Poly, u32)>> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let d = f.derivative();
    if d.is_zero() {
        let g = f
            .sqrt()
            .expect("zero derivative in characteristic 2 means a square");
        for (p, m) in squarefree_decomposition(&g)? {
            out.push((p, 2 * m));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y)?;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y)?;
        w = y;
    }
    if !c.is_one() {
        let g = c.sqrt().ok_or_else(|| {
            Error::consistency(
                "squarefree decomposition",
                format!("cofactor {c} is not a square"),
            )
        })?;
        for (p, m) in squarefree_decomposition(&g)? {
            out.push((p, 2 * m));
        }
    }
    Ok(out)
}

/// Splits a squarefree `f` into products of all irreducible factors of each degree.
fn distinct_degree(f: &Gf2Poly) -> Result<Vec<(Gf2Poly, usize)>> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = Gf2Poly::x();
    let mut h = x.rem(&f)?;
    let mut i = 1;
    while f.degree().unwrap_or(0) >= 2 * i {
        h = h.square().rem(&f)?;
        let g = (&h + &x).gcd(&f);
        if !g.is_one() {
            f = f.div_exact(&g)?;
            h = h.rem(&f)?;
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = f.degree().filter(|&d| d > 0) {
        out.push((f, d));
    }
    Ok(out)
}

/// Splits a product of distinct irreducibles of degree `d` using trace maps
/// of pseudo-random elements of `𝔽₂[x]/(f)`.
///
/// The trace is linear, so structured elements such as `x, x + 1, x², …`
/// span too little to separate factors that agree in their top
/// coefficients; full-degree random elements split with probability ½ per
/// pair. The seed is fixed and the factors are sorted afterwards, so the
/// result does not depend on it.
fn equal_degree(f: &Gf2Poly, d: usize) -> Result<Vec<Gf2Poly>> {
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(f.degree().unwrap_or(0) as u64);
    let mut out = Vec::new();
    let mut pending = vec![f.clone()];
    while let Some(f) = pending.pop() {
        let deg = f.degree().unwrap_or(0);
        if deg == d {
            out.push(f);
            continue;
        }
        loop {
            let mut words: Vec<u64> = (0..f.words.len()).map(|_| rng.next_u64()).collect();
            if deg % 64 != 0 {
                // keep the degree below deg f
                *words.last_mut().expect("non-empty") &= (1u64 << (deg % 64)) - 1;
            } else {
                words.pop();
            }
            let a = Gf2Poly::from_words(words);
            let mut t = a.clone();
            let mut trace = a;
            for _ in 1..d {
                t = t.square().rem(&f)?;
                trace = &trace + &t;
            }
            let g = trace.gcd(&f);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < deg {
                pending.push(f.div_exact(&g)?);
                pending.push(g);
                break;
            }
        }
    }
    Ok(out)
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.words.len() >= rhs.words.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Gf2Poly::from_words(words)
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;

    /// Shift-and-add over the set bits of the sparser operand.
    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || rhs.is_zero() {
            return Gf2Poly::zero();
        }
        let (dense, sparse) = if self.weight() >= rhs.weight() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let total = dense.degree().unwrap() + sparse.degree().unwrap();
        let mut out = vec![0u64; total / 64 + 1];
        for (wi, &w) in sparse.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                xor_shifted(&mut out, &dense.words, 64 * wi + b);
                bits &= bits - 1;
            }
        }
        Gf2Poly::from_words(out)
    }
}

impl Ord for Gf2Poly {
    /// Degree first, then the coefficient bits read as an integer.
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Gf2Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Gf2Poly {
    /// Sparse form, highest power first: `x^6+x^4+x^2+x+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return f.write_str("0");
        };
        let mut first = true;
        for i in (0..=deg).rev().filter(|&i| self.coeff(i) == 1) {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match i {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    /// `0x…` is hex; text with `x` or `^` is the sparse form; anything else is hex.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with("0x") || t.starts_with("0X") {
            return Self::from_hex(t);
        }
        if !(t.contains('x') || t.contains('^')) {
            return Self::from_hex(t);
        }
        let mut exps = Vec::new();
        for term in t.split('+').map(str::trim) {
            let k = match term {
                "1" => 0,
                "x" => 1,
                _ => term
                    .strip_prefix("x^")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse("polynomial", s, format!("bad term {term:?}")))?,
            };
            exps.push(k);
        }
        Ok(Self::from_exponents(&exps))
    }
}

/// An element of `𝔽_{2ⁿ}` in the power basis `1, α, …, α^{n−1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Gf2nElement(pub u64);

impl Gf2nElement {
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// addition in characteristic 2 is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Gf2nElement {
    type Output = Gf2nElement;

    fn add(self, rhs: Gf2nElement) -> Gf2nElement {
        Gf2nElement(self.0 ^ rhs.0)
    }
}

/// `𝔽₂[x] / (f)` for an irreducible `f` of degree `1 ≤ n ≤ 64`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2nField {
    n: usize,
    modulus: Gf2Poly,
    modbits: u128,
}

fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut bits = b;
    while bits != 0 {
        let i = bits.trailing_zeros();
        acc ^= (a as u128) << i;
        bits &= bits - 1;
    }
    acc
}

impl Gf2nField {
    pub fn new(modulus: Gf2Poly) -> Result<Self> {
        let n = modulus.degree().unwrap_or(0);
        if !(1..=64).contains(&n) {
            return Err(Error::InvalidLength {
                len: n,
                reason: "field degree must be 1..=64",
            });
        }
        if !modulus.is_irreducible()? {
            return Err(Error::NotIrreducible {
                poly: modulus.to_string(),
            });
        }
        let modbits = modulus.to_u128().expect("degree ≤ 64");
        Ok(Gf2nField {
            n,
            modulus,
            modbits,
        })
    }

    /// The configured default modulus for degree `n`.
    pub fn default_for(n: usize) -> Result<Self> {
        Self::new(default_modulus(n)?)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    fn reduce(&self, mut v: u128) -> u64 {
        let n = self.n;
        while v >> n != 0 {
            let top = 127 - v.leading_zeros() as usize;
            v ^= self.modbits << (top - n);
        }
        v as u64
    }

    /// The class of `x`.
    pub fn alpha(&self) -> Gf2nElement {
        Gf2nElement(self.reduce(2))
    }

    pub fn one(&self) -> Gf2nElement {
        Gf2nElement(1)
    }

    pub fn mul(&self, a: Gf2nElement, b: Gf2nElement) -> Gf2nElement {
        Gf2nElement(self.reduce(clmul(a.0, b.0)))
    }

    /// The Frobenius map `a ↦ a²`.
    pub fn square(&self, a: Gf2nElement) -> Gf2nElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Gf2nElement, mut e: u128) -> Gf2nElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `∏ (X − c)` over the Frobenius orbit of `a`, checked to lie in `𝔽₂[X]`.
    pub fn minimal_polynomial(&self, a: Gf2nElement) -> Result<Gf2Poly> {
        let mut conjugates = vec![a];
        let mut c = self.square(a);
        while c != a {
            conjugates.push(c);
            c = self.square(c);
        }
        // coefficients of the running product, lowest degree first
        let mut coeffs = vec![self.one()];
        for &r in &conjugates {
            let mut next = vec![Gf2nElement(0); coeffs.len() + 1];
            for (i, &k) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1] + k;
                next[i] = next[i] + self.mul(k, r);
            }
            coeffs = next;
        }
        let mut words = vec![0u64; coeffs.len() / 64 + 1];
        for (i, k) in coeffs.iter().enumerate() {
            match k.0 {
                0 => {}
                1 => words[i / 64] |= 1 << (i % 64),
                _ => {
                    return Err(Error::consistency(
                        "minimal polynomial has 𝔽₂ coefficients",
                        format!("coefficient {i} is {:#x}", k.0),
                    ))
                }
            }
        }
        Ok(Gf2Poly::from_words(words))
    }
}

/// The modulus used when none is configured: `x⁴+x+1`, `x⁵+x²+1`, `x⁶+x+1`
/// for `n = 4, 5, 6`, otherwise the smallest irreducible of degree `n` other
/// than `x` some power of whose root generates a normal basis.
pub fn default_modulus(n: usize) -> Result<Gf2Poly> {
    match n {
        4 => return Ok(Gf2Poly::from_u64(0b10011)),
        5 => return Ok(Gf2Poly::from_u64(0b100101)),
        6 => return Ok(Gf2Poly::from_u64(0b1000011)),
        _ => {}
    }
    if !(1..=64).contains(&n) {
        return Err(Error::InvalidLength {
            len: n,
            reason: "field degree must be 1..=64",
        });
    }
    let base = 1u128 << n;
    (1u128..)
        .step_by(2)
        .take(1 << 20)
        .map(|low| Gf2Poly::from_u128(base | low))
        .filter(|f| f.is_irreducible().unwrap_or(false))
        .find(|f| {
            let field = Gf2nField::new(f.clone()).expect("irreducible");
            NormalBasis::find(&field, None).is_ok()
        })
        .ok_or_else(|| Error::precondition(n, "no suitable irreducible found"))
}

/// Exponent `k` of the default `β = αᵏ`, when one is pinned for `n`.
pub fn default_beta_exponent(n: usize) -> Option<u64> {
    match n {
        4 | 5 => Some(3),
        6 => Some(5),
        _ => None,
    }
}

/// A normal basis `β, β², …, β^{2^{n−1}}` of `𝔽_{2ⁿ}` with `β = αᵏ`.
#[derive(Clone, Debug)]
pub struct NormalBasis {
    field: Gf2nField,
    exponent: u64,
    orbit: Vec<Gf2nElement>,
}

/// Largest exponent tried when searching for a normal element.
const MAX_BETA_SEARCH: u64 = 1 << 16;

fn rank(vectors: &[u64]) -> usize {
    let mut rows = vectors.to_vec();
    let mut r = 0;
    for bit in (0..64).rev() {
        let Some(p) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[r];
            }
        }
        r += 1;
    }
    r
}

impl NormalBasis {
    /// `β = αᵏ`; errors unless its Frobenius orbit is a basis.
    pub fn with_exponent(field: &Gf2nField, k: u64) -> Result<Self> {
        let beta = field.pow(field.alpha(), k as u128);
        if Self::orbit_rank(field, beta) != field.degree() {
            return Err(Error::NoNormalBasis {
                modulus: format!("{} with β = α^{k}", field.modulus()),
            });
        }
        let mut orbit = vec![beta];
        for _ in 1..field.degree() {
            orbit.push(field.square(*orbit.last().unwrap()));
        }
        Ok(NormalBasis {
            field: field.clone(),
            exponent: k,
            orbit,
        })
    }

    /// The hinted exponent if given, else the smallest `k ≥ 1` that works.
    /// The search stops once `αᵏ` cycles back to 1.
    pub fn find(field: &Gf2nField, hint: Option<u64>) -> Result<Self> {
        if let Some(k) = hint {
            return Self::with_exponent(field, k);
        }
        let alpha = field.alpha();
        let mut power = alpha;
        for k in 1..=MAX_BETA_SEARCH {
            if Self::orbit_rank(field, power) == field.degree() {
                return Self::with_exponent(field, k);
            }
            power = field.mul(power, alpha);
            if power == field.one() {
                break;
            }
        }
        Err(Error::NoNormalBasis {
            modulus: field.modulus().to_string(),
        })
    }

    fn orbit_rank(field: &Gf2nField, beta: Gf2nElement) -> usize {
        let mut coords = vec![beta.0];
        for _ in 1..field.degree() {
            coords.push(field.square(Gf2nElement(*coords.last().unwrap())).0);
        }
        rank(&coords)
    }

    /// Default modulus and default exponent for `n`.
    pub fn default_for(n: usize) -> Result<Self> {
        Self::find(&Gf2nField::default_for(n)?, default_beta_exponent(n))
    }

    pub fn field(&self) -> &Gf2nField {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn beta(&self) -> Gf2nElement {
        self.orbit[0]
    }

    /// `β, φ(β), …, φ^{n−1}(β)`.
    pub fn frobenius_orbit(&self) -> &[Gf2nElement] {
        &self.orbit
    }

    /// Columns are the power-basis coordinates of `φ^{n−1}(β), …, φ(β), β`.
    pub fn change_matrix(&self) -> Vec<u64> {
        self.orbit.iter().rev().map(|e| e.0).collect()
    }

    /// `Σ sᵢ φ^{n−i}(β)`, so `s₁` weighs `β^{2^{n−1}}` and `sₙ` weighs `β`.
    pub fn element_from_word(&self, s: &BitString) -> Result<Gf2nElement> {
        let n = self.field.degree();
        if s.len() != n {
            return Err(Error::InvalidLength {
                len: s.len(),
                reason: "word length must equal the field degree",
            });
        }
        let mut acc = Gf2nElement(0);
        for i in 0..n {
            if s.bit(i) == 1 {
                acc = acc + self.orbit[n - 1 - i];
            }
        }
        Ok(acc)
    }
}

/// The minimal polynomial of the element a necklace names in the basis.
///
/// Necklaces of length `d | n` are repeated to length `n`. The zero word
/// names `0`, whose minimal polynomial is `x`.
pub fn reutenauer(x: &Necklace, basis: &NormalBasis) -> Result<Gf2Poly> {
    let n = basis.field().degree();
    let d = x.len();
    if n % d != 0 {
        return Err(Error::NotADivisor { k: d, n });
    }
    let word = x.canonical().repeat(n / d)?;
    let e = basis.element_from_word(&word)?;
    basis.field().minimal_polynomial(e)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum IrreducibleSet {
    /// `I⁻(n)`: non-centered irreducibles of degree `n`.
    IMinus,
    /// `Ĩ⁺(n)`: centered irreducibles of degree `n` and non-centered ones of degree `n/2`.
    ITildePlus,
}

impl IrreducibleSet {
    pub fn name(self) -> &'static str {
        match self {
            IrreducibleSet::IMinus => "I-",
            IrreducibleSet::ITildePlus => "It+",
        }
    }
}

impl FromStr for IrreducibleSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I-" | "I⁻" | "i-" | "iminus" => Ok(IrreducibleSet::IMinus),
            "It+" | "Ĩ⁺" | "I~+" | "it+" | "itildeplus" => Ok(IrreducibleSet::ITildePlus),
            _ => Err(Error::parse("irreducible set", s, "expected I- or It+")),
        }
    }
}

/// Upper bound on the degree for brute-force irreducible enumeration.
pub const MAX_ENUM_DEGREE: usize = 24;

/// All irreducibles of degree `d`, ascending.
pub fn irreducibles_of_degree(d: usize) -> Result<Vec<Gf2Poly>> {
    if !(1..=MAX_ENUM_DEGREE).contains(&d) {
        return Err(Error::InvalidLength {
            len: d,
            reason: "irreducible enumeration supports degree 1..=24",
        });
    }
    if d == 1 {
        return Ok(vec![Gf2Poly::from_u64(0b10), Gf2Poly::from_u64(0b11)]);
    }
    let high = 1u64 << d;
    let mut out = Vec::new();
    for low in (1..high).step_by(2) {
        let f = Gf2Poly::from_u64(high | low);
        if f.is_irreducible()? {
            out.push(f);
        }
    }
    Ok(out)
}

pub fn enumerate_irreducibles(kind: IrreducibleSet, n: usize) -> Result<Vec<Gf2Poly>> {
    let full = irreducibles_of_degree(n)?;
    let mut out: Vec<Gf2Poly> = match kind {
        IrreducibleSet::IMinus => full.into_iter().filter(|f| !f.is_centered()).collect(),
        IrreducibleSet::ITildePlus => {
            let mut v: Vec<Gf2Poly> = full.into_iter().filter(Gf2Poly::is_centered).collect();
            if n % 2 == 0 {
                v.extend(
                    irreducibles_of_degree(n / 2)?
                        .into_iter()
                        .filter(|f| !f.is_centered()),
                );
            }
            v
        }
    };
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Gf2Poly {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("x^2+x+1") * &p("x^4+x+1"), p("x^6+x^5+x^4+x^3+1"));
        assert_eq!(p("x^2+x").gcd(&p("x")), p("x"));
        assert_eq!(p("x^4+x+1").derivative(), p("1"));
        assert_eq!(p("x^5+x^3+x^2").derivative(), p("x^4+x^2"));
        let (q, r) = p("x^6+x^5+x^4+x^3+1").divrem(&p("x^2+x+1")).unwrap();
        assert_eq!((q, r), (p("x^4+x+1"), Gf2Poly::zero()));
        assert_eq!(
            p("x^3+1").divrem(&Gf2Poly::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(p("x").powmod(16, &p("x^4+x+1")).unwrap(), p("x"));
        assert_eq!(p("x^3+x+1").square(), p("x^6+x^2+1"));
        assert_eq!(p("x^6+x^2+1").sqrt(), Some(p("x^3+x+1")));
        assert_eq!(p("x^3+1").sqrt(), None);
    }

    #[test]
    fn multiword_arithmetic() {
        let a = Gf2Poly::from_exponents(&[130, 64, 63, 1, 0]);
        let b = Gf2Poly::from_exponents(&[70, 3]);
        let prod = &a * &b;
        assert_eq!(
            prod,
            Gf2Poly::from_exponents(&[200, 134, 133, 71, 70, 133, 67, 66, 4, 3])
        );
        assert_eq!(prod.divrem(&b).unwrap(), (a.clone(), Gf2Poly::zero()));
        assert_eq!(a.square().sqrt(), Some(a.clone()));
        assert_eq!(a.square(), &a * &a);
    }

    #[test]
    fn text_forms() {
        let f = p("x^6+x^4+x^2+x+1");
        assert_eq!(f.to_string(), "x^6+x^4+x^2+x+1");
        assert_eq!(f.to_hex(), "0x57");
        assert_eq!(p("0x57"), f);
        assert_eq!(p("57"), f);
        assert_eq!(Gf2Poly::zero().to_string(), "0");
        assert!("x^a".parse::<Gf2Poly>().is_err());
        assert!("0xzz".parse::<Gf2Poly>().is_err());
        let big = Gf2Poly::from_exponents(&[100, 0]);
        assert_eq!(p(&big.to_hex()), big);
    }

    #[test]
    fn irreducibility() {
        assert!(p("x^3+x+1").is_irreducible().unwrap());
        assert!(!p("x^2+1").is_irreducible().unwrap());
        assert!(p("x^5+x^2+1").is_irreducible().unwrap());
        assert!(!p("x^4+x^2+1").is_irreducible().unwrap());
        assert!(p("1").is_irreducible().is_err());
        // degree-d irreducible counts: (1/d) Σ μ(d/e) 2^e
        let counts: Vec<usize> = (1..=10)
            .map(|d| irreducibles_of_degree(d).unwrap().len())
            .collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9, 18, 30, 56, 99]);
    }

    #[test]
    fn factor_examples() {
        assert_eq!(
            p("x^6+x^5+x^4+x^3+1").factor().unwrap(),
            vec![(p("x^2+x+1"), 1), (p("x^4+x+1"), 1)]
        );
        assert_eq!(p("x^3+x+1").factor().unwrap(), vec![(p("x^3+x+1"), 1)]);
        assert_eq!(p("x^2").factor().unwrap(), vec![(p("x"), 2)]);
        assert_eq!(
            p("x^8+x^4").factor().unwrap(),
            vec![(p("x"), 4), (p("x+1"), 4)]
        );
        assert!(p("1").factor().is_err());
    }

    #[test]
    fn factor_reproduces_input() {
        // products of known irreducibles with multiplicities
        let irr: Vec<Gf2Poly> = (1..=6)
            .flat_map(|d| irreducibles_of_degree(d).unwrap())
            .collect();
        for (i, a) in irr.iter().enumerate() {
            for (j, b) in irr.iter().enumerate().skip(i) {
                let f = &(&(a * b) * b) * &irr[(i * 7 + j) % irr.len()];
                let factors = f.factor().unwrap();
                let back = factors.iter().fold(Gf2Poly::one(), |acc, (g, m)| {
                    (0..*m).fold(acc, |acc, _| &acc * g)
                });
                assert_eq!(back, f);
                assert!(factors.iter().all(|(g, _)| g.is_irreducible().unwrap()));
                assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
            }
        }
    }

    #[test]
    fn centered() {
        assert!(p("x^4+x+1").is_centered());
        assert!(!p("x^2+x+1").is_centered());
        assert!(!p("x+1").is_centered());
        assert!(p("x").is_centered());
    }

    #[test]
    fn normal_bases() {
        let f4 = Gf2nField::new(p("x^4+x+1")).unwrap();
        let nb = NormalBasis::find(&f4, Some(3)).unwrap();
        assert_eq!(nb.beta(), f4.pow(f4.alpha(), 3));
        assert_eq!(nb.frobenius_orbit().len(), 4);
        // α itself is not normal here: its trace is 0
        assert!(NormalBasis::with_exponent(&f4, 1).is_err());
        let f6 = Gf2nField::new(p("x^6+x+1")).unwrap();
        assert_eq!(NormalBasis::find(&f6, Some(5)).unwrap().exponent(), 5);
        let f1 = Gf2nField::new(p("x+1")).unwrap();
        let nb1 = NormalBasis::find(&f1, None).unwrap();
        assert_eq!(nb1.beta(), Gf2nElement(1));
        assert!(Gf2nField::new(p("x^4+x^2+1")).is_err());
    }

    #[test]
    fn defaults() {
        assert_eq!(default_modulus(1).unwrap(), p("x+1"));
        assert_eq!(default_modulus(2).unwrap(), p("x^2+x+1"));
        assert_eq!(default_modulus(3).unwrap(), p("x^3+x+1"));
        assert_eq!(default_modulus(7).unwrap(), p("x^7+x+1"));
        assert_eq!(default_modulus(8).unwrap(), p("x^8+x^4+x^3+x+1"));
        assert!(default_modulus(64).unwrap().is_irreducible().unwrap());
        // α for x^12+x^3+1 has order 45; no power of it is normal
        let f12 = Gf2nField::new(p("x^12+x^3+1")).unwrap();
        assert!(NormalBasis::find(&f12, None).is_err());
        assert_eq!(default_modulus(12).unwrap(), p("x^12+x^4+x^2+x+1"));
        // (n, modulus bits, smallest exponent), frozen from an independent search
        let frozen = [
            (2, 0b111, 1),
            (3, 0b1011, 3),
            (7, 0b10000011, 13),
            (8, 0b100011011, 5),
            (9, 0b1000000011, 9),
            (10, 0b10000001001, 7),
            (11, 0b100000000101, 9),
            (12, 0b1000000010111, 11),
            (13, 0b10000000011011, 9),
            (14, 0b100000000100001, 9),
            (15, 0b1000000000000011, 29),
            (16, 0b10000000000101011, 11),
        ];
        for (n, bits, k) in frozen {
            let nb = NormalBasis::default_for(n).unwrap();
            assert_eq!(nb.field().modulus(), &Gf2Poly::from_u64(bits), "n={n}");
            assert_eq!(nb.exponent(), k, "n={n}");
        }
        for n in 1..=16 {
            NormalBasis::default_for(n).unwrap();
        }
    }

    #[test]
    fn reutenauer_examples() {
        let nb4 = NormalBasis::default_for(4).unwrap();
        let f4 = nb4.field().clone();
        let e = nb4.element_from_word(&"0011".parse().unwrap()).unwrap();
        assert_eq!(e, f4.square(f4.alpha()));
        assert_eq!(
            reutenauer(&"0011".parse().unwrap(), &nb4).unwrap(),
            p("x^4+x+1")
        );
        assert_eq!(
            reutenauer(&"0101".parse().unwrap(), &nb4).unwrap(),
            p("x^2+x+1")
        );
        assert_eq!(
            reutenauer(&"01".parse().unwrap(), &nb4).unwrap(),
            p("x^2+x+1")
        );
        assert_eq!(reutenauer(&"0000".parse().unwrap(), &nb4).unwrap(), p("x"));
        assert_eq!(
            reutenauer(&"1111".parse().unwrap(), &nb4).unwrap(),
            p("x+1")
        );
        assert!(reutenauer(&"001".parse().unwrap(), &nb4).is_err());
        let nb5 = NormalBasis::default_for(5).unwrap();
        // the table row pairs x^5+x^2+1 with the even-weight word 11000
        assert_eq!(
            reutenauer(&"11000".parse().unwrap(), &nb5).unwrap(),
            p("x^5+x^2+1")
        );
        assert_eq!(
            reutenauer(&"01001".parse().unwrap(), &nb5).unwrap(),
            p("x^5+x^3+x^2+x+1")
        );
        assert_eq!(
            reutenauer(&"11011".parse().unwrap(), &nb5).unwrap(),
            p("x^5+x^3+1")
        );
    }

    #[test]
    fn irreducible_sets() {
        let mut it4 = enumerate_irreducibles(IrreducibleSet::ITildePlus, 4).unwrap();
        it4.sort();
        assert_eq!(it4, vec![p("x^2+x+1"), p("x^4+x+1")]);
        let it6 = enumerate_irreducibles(IrreducibleSet::ITildePlus, 6).unwrap();
        let mut expect = vec![
            p("x^6+x+1"),
            p("x^6+x^3+1"),
            p("x^6+x^4+x^2+x+1"),
            p("x^6+x^4+x^3+x+1"),
            p("x^3+x^2+1"),
        ];
        expect.sort();
        assert_eq!(it6, expect);
        assert_eq!(
            enumerate_irreducibles(IrreducibleSet::IMinus, 1).unwrap(),
            vec![p("x+1")]
        );
        assert_eq!(
            enumerate_irreducibles(IrreducibleSet::ITildePlus, 1).unwrap(),
            vec![p("x")]
        );
    }
}
