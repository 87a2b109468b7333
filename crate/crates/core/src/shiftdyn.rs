//! Symbolic dynamics: the twisted shift `F`, its sign-extended version `F̃`,
//! and the `±1`-sequence twisted shift together with the map `ω` that
//! semi-conjugates it to the cyclic shift.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::words::{BitString, InversionClass, InversionKind, Sign, SignedBitString};

/// `L(s)` if it starts with 1, otherwise `ι(L(s))`.
pub fn twisted_shift(s: &BitString) -> BitString {
    let shifted = s.rotate_left(1);
    if shifted.first() == 1 {
        shifted
    } else {
        shifted.invert()
    }
}

/// `F̃(s^b) = F(s)^b` when `F(s)` ends in 1, and `F(s)^{ι(b)}` otherwise.
pub fn extended_twisted_shift(x: &SignedBitString) -> SignedBitString {
    let word = twisted_shift(&x.word);
    let sign = if word.last() == 1 {
        x.sign
    } else {
        x.sign.flip()
    };
    SignedBitString::new(word, sign)
}

/// A finite orbit `μ₁, …, μₙ` whose items are pairwise distinct.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orbit<T> {
    items: Vec<T>,
}

impl<T: Ord + Copy + fmt::Display> Orbit<T> {
    fn from_items(items: Vec<T>) -> Result<Self> {
        let mut sorted = items.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::consistency(
                "orbit items distinct",
                format!("{} occurs twice", w[0]),
            ));
        }
        Ok(Orbit { items })
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// `rᵢ = 1 + #{j : μⱼ < μᵢ}`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut sorted = self.items.clone();
        sorted.sort();
        self.items
            .iter()
            .map(|x| sorted.binary_search(x).expect("item is present") + 1)
            .collect()
    }
}

fn orbit_start(t: &BitString) -> Result<(InversionKind, BitString)> {
    if t.first() != 1 {
        return Err(Error::precondition(t, "orbit start must begin with 1"));
    }
    Ok((InversionClass::new(*t).kind()?, *t))
}

/// `μ₁ = t`, `μᵢ = F(μᵢ₋₁)`; requires `[t] ∈ N̄₂(n)`.
pub fn f_orbit(t: &BitString) -> Result<Orbit<BitString>> {
    let (kind, t) = orbit_start(t)?;
    if kind != InversionKind::Paired {
        return Err(Error::precondition(
            InversionClass::new(t),
            "class is self-inverse (N̄₁); use the extended orbit",
        ));
    }
    let items = std::iter::successors(Some(t), |s| Some(twisted_shift(s)))
        .take(t.len())
        .collect();
    Orbit::from_items(items)
}

/// `μ₁ = t⁻`, `μᵢ = F̃(μᵢ₋₁)`; requires `[t] ∈ N̄₁(n)`.
pub fn ftilde_orbit(t: &BitString) -> Result<Orbit<SignedBitString>> {
    let (kind, t) = orbit_start(t)?;
    if kind != InversionKind::SelfInverse {
        return Err(Error::precondition(
            InversionClass::new(t),
            "class is not self-inverse (N̄₂); use the plain orbit",
        ));
    }
    let start = SignedBitString::new(t, Sign::Minus);
    let items = std::iter::successors(Some(start), |x| Some(extended_twisted_shift(x)))
        .take(t.len())
        .collect();
    Orbit::from_items(items)
}

/// One period `(ε₁, …, εₙ)` of an `F`-periodic `±1` sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PmSequence {
    entries: Vec<i8>,
}

impl PmSequence {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidLength {
                len: 0,
                reason: "sequence must be non-empty",
            });
        }
        if let Some(bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::precondition(bad, "entries must be +1 or -1"));
        }
        Ok(PmSequence { entries })
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// `εₙ`, constant along an `F`-cycle.
    pub fn signature(&self) -> i8 {
        *self.entries.last().expect("non-empty")
    }
}

impl fmt::Display for PmSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *e > 0 { "+1" } else { "-1" })?;
        }
        Ok(())
    }
}

impl FromStr for PmSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = inner
            .split(',')
            .map(|tok| match tok.trim() {
                "+1" | "1" => Ok(1),
                "-1" => Ok(-1),
                other => Err(Error::parse(
                    "±1 sequence",
                    s,
                    format!("bad entry {other:?}"),
                )),
            })
            .collect::<Result<Vec<i8>>>()?;
        PmSequence::new(entries)
    }
}

/// `εᵢ = (−1)^{s₁ + ⋯ + sᵢ}`, so that `F ∘ ω = ω ∘ L`.
pub fn omega(s: &BitString) -> PmSequence {
    let mut parity = 0u8;
    let entries = (0..s.len())
        .map(|i| {
            parity ^= s.bit(i);
            if parity == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    PmSequence { entries }
}

/// `F(ε)ᵢ = ε₁ εᵢ₊₁`, where the periodic continuation is `εₙ₊₁ = εₙ ε₁`.
pub fn pm_twisted_shift(e: &PmSequence) -> PmSequence {
    let v = &e.entries;
    let n = v.len();
    let first = v[0];
    let entries = (0..n)
        .map(|i| {
            if i + 1 < n {
                first * v[i + 1]
            } else {
                v[n - 1]
            }
        })
        .collect();
    PmSequence { entries }
}
