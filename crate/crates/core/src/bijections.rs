//! Bijections between `Ñ⁺(n)`, `N̄(n)`, `N⁻(n)` and cyclic unimodal
//! permutations.
//!
//! ```text
//!   Ñ⁺(n) ──ψ⁺──▶ N̄(n) ──λ──▶ CUP(n) ──φ──▶ Ñ⁺(n)
//!   N⁻(n) ──Φ──▶ CUP(n) ──Ψ──▶ N⁻(n)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::shiftdyn::{f_orbit, ftilde_orbit};
use crate::words::{BitString, InversionClass, InversionKind, Necklace};

/// Partial sums mod 2: `Ξ(s)ᵢ = s₁ + ⋯ + sᵢ`.
pub fn xi(s: &BitString) -> BitString {
    let n = s.len();
    let mut bits = s.bits();
    let mut shift = 1;
    while shift < n {
        bits ^= bits >> shift;
        shift <<= 1;
    }
    BitString::from_raw(bits, n)
}

/// `Ξ⁻¹(s) = (s₁, s₁ + s₂, …, sₙ₋₁ + sₙ)`.
pub fn xi_inv(s: &BitString) -> BitString {
    BitString::from_raw(s.bits() ^ (s.bits() >> 1), s.len())
}

/// `ψ⁺(⟨s⟩) = [Ξ(s)]`.
pub fn psi_plus(x: &Necklace) -> Result<InversionClass> {
    if !x.in_ntilde_plus() {
        return Err(Error::NotInSet {
            value: format!("⟨{x}⟩"),
            set: "Ñ⁺(n)",
        });
    }
    Ok(InversionClass::new(xi(&x.canonical())))
}

/// `θ⁺([α]) = ⟨Ξ⁻¹(s)⟩` for a representative `s ∈ [α]` ending in 0.
pub fn theta_plus(y: &InversionClass) -> Result<Necklace> {
    if !y.is_primitive() {
        return Err(Error::NotPrimitive {
            value: y.to_string(),
        });
    }
    let rep = y
        .members()
        .into_iter()
        .find(|s| s.last() == 0)
        .expect("inversion closes the class, so some member ends in 0");
    Ok(Necklace::new(xi_inv(&rep)))
}

/// A cyclic unimodal permutation of `{1, …, n}`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicUnimodalPermutation {
    // images[i - 1] = σ(i)
    images: Vec<usize>,
}

impl CyclicUnimodalPermutation {
    /// Validates that `images` (1-based values) is a single unimodal `n`-cycle.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidLength {
                len: 0,
                reason: "permutations need n ≥ 1",
            });
        }
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::precondition(
                    format!("{images:?}"),
                    "not a permutation of 1..=n",
                ));
            }
            seen[v] = true;
        }
        let m = images.iter().position(|&v| v == 1).expect("1 is an image");
        let decreasing = images[..=m].windows(2).all(|w| w[0] > w[1]);
        let increasing = images[m..].windows(2).all(|w| w[0] < w[1]);
        if !(decreasing && increasing) {
            return Err(Error::precondition(format!("{images:?}"), "not unimodal"));
        }
        let sigma = CyclicUnimodalPermutation { images };
        if sigma.cycle().len() != n {
            return Err(Error::precondition(
                sigma.images_text(),
                "not a single n-cycle",
            ));
        }
        Ok(sigma)
    }

    /// The cycle `(c₁ c₂ ⋯ cₙ)`, i.e. `σ(cᵢ) = cᵢ₊₁` and `σ(cₙ) = c₁`.
    pub fn from_cycle(cycle: &[usize]) -> Result<Self> {
        let n = cycle.len();
        let mut images = vec![0; n];
        for (i, &c) in cycle.iter().enumerate() {
            if c == 0 || c > n || images[c - 1] != 0 {
                return Err(Error::precondition(
                    format!("{cycle:?}"),
                    "cycle must list each of 1..=n once",
                ));
            }
            images[c - 1] = cycle[(i + 1) % n];
        }
        Self::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)` for `1 ≤ i ≤ n`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// The unique `m` with `σ(m) = 1`.
    pub fn m(&self) -> usize {
        self.images
            .iter()
            .position(|&v| v == 1)
            .expect("1 is an image")
            + 1
    }

    /// The cycle through 1, starting at 1.
    pub fn cycle(&self) -> Vec<usize> {
        let mut out = vec![1];
        let mut x = self.apply(1);
        while x != 1 && out.len() <= self.n() {
            out.push(x);
            x = self.apply(x);
        }
        out
    }

    fn images_text(&self) -> String {
        format!("{:?}", self.images)
    }
}

impl fmt::Display for CyclicUnimodalPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() >= 10 { "," } else { "" };
        let parts: Vec<String> = self.cycle().iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(sep))
    }
}

impl fmt::Debug for CyclicUnimodalPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CyclicUnimodalPermutation {
    type Err = Error;

    /// Accepts `(165324)` (single digits) or `(1,10,4,…)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse("permutation", s, "expected cycle notation (…)"))?;
        let cycle: Vec<usize> = if inner.contains(',') {
            inner
                .split(',')
                .map(|tok| tok.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse("permutation", s, e.to_string()))?
        } else {
            inner
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::parse("permutation", s, "non-digit in cycle"))?
        };
        Self::from_cycle(&cycle).map_err(|e| Error::parse("permutation", s, e.to_string()))
    }
}

/// Cycle `(r₁ r₂ ⋯ rₙ)` built from an orbit's rank vector.
pub fn cycle_from_ranks(ranks: &[usize]) -> Result<CyclicUnimodalPermutation> {
    CyclicUnimodalPermutation::from_cycle(ranks).map_err(|e| {
        Error::consistency(
            "orbit ranks form a cyclic unimodal permutation",
            e.to_string(),
        )
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Symbol {
    Plus,
    Minus,
    Star,
}

impl Symbol {
    pub fn symbol(self) -> char {
        match self {
            Symbol::Plus => '+',
            Symbol::Minus => '-',
            Symbol::Star => '*',
        }
    }
}

/// `Itin(σ) ∈ {+, −, ⋆}ⁿ` with the single `⋆` in last position.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ItinerarySymbolic {
    symbols: Vec<Symbol>,
}

impl ItinerarySymbolic {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        let n = symbols.len();
        let stars = symbols.iter().filter(|&&s| s == Symbol::Star).count();
        if n == 0 || stars != 1 || symbols[n - 1] != Symbol::Star {
            let text: String = symbols.iter().map(|s| s.symbol()).collect();
            return Err(Error::precondition(text, "exactly one ⋆, in last position"));
        }
        Ok(ItinerarySymbolic { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `+ → 0`, `− → 1`, `⋆ →` the bit giving weight parity `star_parity`.
    fn to_bits(&self, star_parity: u32) -> BitString {
        let mut bits = 0u64;
        let mut ones = 0;
        for s in &self.symbols[..self.len() - 1] {
            bits <<= 1;
            if *s == Symbol::Minus {
                bits |= 1;
                ones += 1;
            }
        }
        bits = (bits << 1) | u64::from((ones + star_parity) % 2);
        BitString::from_raw(bits, self.len())
    }
}

impl fmt::Display for ItinerarySymbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols
            .iter()
            .try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

impl FromStr for ItinerarySymbolic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Symbol::Plus),
                '-' | '−' => Ok(Symbol::Minus),
                '*' | '⋆' => Ok(Symbol::Star),
                other => Err(Error::parse(
                    "itinerary",
                    s,
                    format!("bad symbol {other:?}"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        ItinerarySymbolic::new(symbols).map_err(|e| Error::parse("itinerary", s, e.to_string()))
    }
}

/// `Itin(σ)ᵢ = +` iff `σⁱ(m) > m`, `−` iff `σⁱ(m) < m`, `⋆` at `i = n`.
pub fn itinerary(sigma: &CyclicUnimodalPermutation) -> ItinerarySymbolic {
    let n = sigma.n();
    let m = sigma.m();
    let mut x = m;
    let mut symbols = Vec::with_capacity(n);
    for _ in 1..n {
        x = sigma.apply(x);
        symbols.push(if x > m { Symbol::Plus } else { Symbol::Minus });
    }
    symbols.push(Symbol::Star);
    ItinerarySymbolic { symbols }
}

/// `A(σ)`: the itinerary with `⋆` chosen so the weight is even.
pub fn a_of_sigma(sigma: &CyclicUnimodalPermutation) -> BitString {
    itinerary(sigma).to_bits(0)
}

/// `Ξ` of `A(σ)` rotated so the `⋆` digit (the slot for `m`) comes first.
///
/// Inverted to start with 1, this is the least string in its `F`/`F̃`-orbit.
/// Unrotated `Ξ(A(σ))` only agrees up to rotation, which fails from `n = 3`.
pub fn orbit_start(sigma: &CyclicUnimodalPermutation) -> BitString {
    let a = a_of_sigma(sigma);
    xi(&a.rotate_left(a.len() - 1))
}

/// `φ(σ) = ⟨A(σ)⟩ ∈ Ñ⁺(n)`.
pub fn phi(sigma: &CyclicUnimodalPermutation) -> Necklace {
    Necklace::new(a_of_sigma(sigma))
}

/// `λ([t])`: ranks of the `F`- or `F̃`-orbit of the smallest member starting with 1.
pub fn lambda(y: &InversionClass) -> Result<CyclicUnimodalPermutation> {
    let t = y.min_member_starting_with_one();
    let ranks = match y.kind()? {
        InversionKind::Paired => f_orbit(&t)?.ranks(),
        InversionKind::SelfInverse => ftilde_orbit(&t)?.ranks(),
    };
    cycle_from_ranks(&ranks)
}

/// `Φ(⟨s⟩)`: ranks of `νᵢ = ι(Ξ(L^{i−1}(s)))`.
pub fn wr_phi(x: &Necklace) -> Result<CyclicUnimodalPermutation> {
    if !x.in_n_minus() {
        return Err(Error::NotInSet {
            value: format!("⟨{x}⟩"),
            set: "N⁻(n)",
        });
    }
    let s = x.canonical();
    let mut nu: Vec<BitString> = (0..s.len())
        .map(|i| xi(&s.rotate_left(i)).invert())
        .collect();
    let items = nu.clone();
    nu.sort();
    if nu.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::consistency(
            "Weiss–Rogers ranks distinct",
            format!("⟨{s}⟩"),
        ));
    }
    let ranks: Vec<usize> = items
        .iter()
        .map(|v| nu.binary_search(v).expect("present") + 1)
        .collect();
    cycle_from_ranks(&ranks)
}

/// `Ψ(σ)`: the itinerary with `⋆` chosen so the weight is odd.
pub fn wr_psi_word(sigma: &CyclicUnimodalPermutation) -> BitString {
    itinerary(sigma).to_bits(1)
}

pub fn wr_psi(sigma: &CyclicUnimodalPermutation) -> Necklace {
    Necklace::new(wr_psi_word(sigma))
}

/// Upper bound on `n` for [`enumerate_cup`]; the candidate count is `2ⁿ⁻¹`.
pub const MAX_CUP_N: usize = 30;

/// Every cyclic unimodal permutation of `[n]`, sorted by image array.
pub fn enumerate_cup(n: usize) -> Result<Vec<CyclicUnimodalPermutation>> {
    if n == 0 || n > MAX_CUP_N {
        return Err(Error::InvalidLength {
            len: n,
            reason: "enumerate_cup supports 1 ≤ n ≤ 30",
        });
    }
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(n);
    // bit j of `prefix` set: value j + 2 goes before the 1
    for prefix in 0u64..(1u64 << (n - 1)) {
        images.clear();
        images.extend((2..=n).rev().filter(|v| prefix >> (v - 2) & 1 == 1));
        images.push(1);
        images.extend((2..=n).filter(|v| prefix >> (v - 2) & 1 == 0));
        if is_single_cycle(&images) {
            out.push(CyclicUnimodalPermutation {
                images: images.clone(),
            });
        }
    }
    out.sort();
    Ok(out)
}

fn is_single_cycle(images: &[usize]) -> bool {
    let mut x = images[0];
    let mut len = 1;
    while x != 1 {
        x = images[x - 1];
        len += 1;
    }
    len == images.len()
}

/// `n` even and the cycle from 1 reads `(x₁…x_{n/2} y₁…y_{n/2})` with
/// `yᵢ = xᵢ + 1` for odd `xᵢ` and `yᵢ = xᵢ − 1` for even `xᵢ`.
pub fn is_satellite_cup(sigma: &CyclicUnimodalPermutation) -> bool {
    let n = sigma.n();
    if n % 2 != 0 {
        return false;
    }
    let cycle = sigma.cycle();
    let (x, y) = cycle.split_at(n / 2);
    x.iter()
        .zip(y)
        .all(|(&a, &b)| b == if a % 2 == 1 { a + 1 } else { a - 1 })
}
