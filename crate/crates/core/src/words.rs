//! Binary strings, necklaces and necklace inversion classes.
//!
//! A [`BitString`] of length `n ≤ 64` is packed into a `u64` with the first
//! symbol `s₁` in the most significant position, so lexicographic order on
//! strings of equal length coincides with integer order on the packed value.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_LEN: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    // field order matters for the derived Ord: length first, then value
    len: u8,
    bits: u64,
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitString {
    /// Builds a string from its packed value; `s₁` is bit `len - 1`.
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength {
                len,
                reason: "binary strings must have length 1..=64",
            });
        }
        if bits & !mask(len) != 0 {
            return Err(Error::InvalidLength {
                len,
                reason: "value has bits beyond the string length",
            });
        }
        Ok(BitString {
            len: len as u8,
            bits,
        })
    }

    pub(crate) fn from_raw(bits: u64, len: usize) -> Self {
        debug_assert!((1..=MAX_LEN).contains(&len) && bits & !mask(len) == 0);
        BitString {
            len: len as u8,
            bits,
        }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::parse(
                "binary string",
                &format!("{bits:?}"),
                "symbols must be 0 or 1",
            ));
        }
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        BitString::new(value, bits.len())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        BitString::new(0, len)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Symbol at 0-based position `i` (so `bit(0)` is `s₁`).
    pub fn bit(&self, i: usize) -> u8 {
        assert!(
            i < self.len(),
            "index {i} out of range for length {}",
            self.len
        );
        ((self.bits >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn first(&self) -> u8 {
        self.bit(0)
    }

    pub fn last(&self) -> u8 {
        (self.bits & 1) as u8
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.bit(i)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn has_odd_weight(&self) -> bool {
        self.weight() % 2 == 1
    }

    pub fn with_bit(&self, i: usize, value: u8) -> Self {
        let shift = self.len() - 1 - i;
        let bits = (self.bits & !(1u64 << shift)) | ((value as u64 & 1) << shift);
        BitString::from_raw(bits, self.len())
    }

    /// `result_i = s_{(i+k) mod n}`.
    pub fn rotate_left(&self, k: usize) -> Self {
        let n = self.len();
        let k = k % n;
        if k == 0 {
            return *self;
        }
        let bits = ((self.bits << k) | (self.bits >> (n - k))) & mask(n);
        BitString::from_raw(bits, n)
    }

    pub fn invert(&self) -> Self {
        BitString::from_raw(!self.bits & mask(self.len()), self.len())
    }

    pub fn rotations(&self) -> impl Iterator<Item = BitString> + '_ {
        (0..self.len()).map(move |k| self.rotate_left(k))
    }

    /// Smallest `d ≥ 1` with `L^d(s) = s`; always a divisor of the length.
    pub fn primitive_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| self.rotate_left(d) == *self)
            .unwrap_or(n)
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_period() == self.len()
    }

    /// The inversion of `s` is one of its rotations.
    pub fn is_reflexive(&self) -> bool {
        let inv = self.invert();
        self.rotations().any(|r| r == inv)
    }

    /// `s = s′ ι(s′) s′ ι(s′) …` with `k` blocks of length `n / k`.
    pub fn is_k_alternating(&self, k: usize) -> Result<bool> {
        let n = self.len();
        if k == 0 || n % k != 0 {
            return Err(Error::NotADivisor { k, n });
        }
        let block_len = n / k;
        let first = self.slice(0, block_len);
        let first_inv = first.invert();
        Ok((1..k).all(|j| {
            let block = self.slice(j * block_len, block_len);
            block == if j % 2 == 0 { first } else { first_inv }
        }))
    }

    /// Substring of `len` symbols starting at 0-based position `start`.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(len >= 1 && start + len <= self.len());
        let shift = self.len() - start - len;
        BitString::from_raw((self.bits >> shift) & mask(len), len)
    }

    pub fn concat(&self, other: &BitString) -> Result<Self> {
        let len = self.len() + other.len();
        if len > MAX_LEN {
            return Err(Error::InvalidLength {
                len,
                reason: "concatenation exceeds 64 symbols",
            });
        }
        Ok(BitString::from_raw(
            (self.bits << other.len()) | other.bits,
            len,
        ))
    }

    pub fn repeat(&self, times: usize) -> Result<Self> {
        let mut out = *self;
        for _ in 1..times {
            out = out.concat(self)?;
        }
        Ok(out)
    }

    /// All `2ⁿ` strings of length `n`, in lexicographic order.
    pub fn all(len: usize) -> Result<impl Iterator<Item = BitString>> {
        BitString::zeros(len)?;
        if len > 32 {
            return Err(Error::InvalidLength {
                len,
                reason: "exhaustive enumeration is limited to length 32",
            });
        }
        Ok((0..(1u64 << len)).map(move |bits| BitString::from_raw(bits, len)))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::parse("binary string", s, "empty input"));
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => {
                    return Err(Error::parse(
                        "binary string",
                        s,
                        format!("unexpected symbol {c:?}"),
                    ))
                }
            }
        }
        if bits.len() > MAX_LEN {
            return Err(Error::parse("binary string", s, "longer than 64 symbols"));
        }
        BitString::from_bits(&bits)
    }
}

fn strip_delimiters<'a>(s: &'a str, open: &[&str], close: &[&str]) -> &'a str {
    let mut s = s.trim();
    for o in open {
        if let Some(rest) = s.strip_prefix(o) {
            s = rest;
            break;
        }
    }
    for c in close {
        if let Some(rest) = s.strip_suffix(c) {
            s = rest;
            break;
        }
    }
    s
}

/// A binary string up to cyclic rotation, stored as its smallest rotation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Necklace {
    canonical: BitString,
}

impl Necklace {
    pub fn new(s: BitString) -> Self {
        Necklace {
            canonical: s.rotations().min().expect("length is at least 1"),
        }
    }

    pub fn canonical(&self) -> BitString {
        self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn weight(&self) -> u32 {
        self.canonical.weight()
    }

    pub fn is_primitive(&self) -> bool {
        self.canonical.is_primitive()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        Necklace::new(*s) == *self
    }

    /// For a necklace of the form `⟨s′s′⟩` with `s′` primitive of odd weight,
    /// returns `⟨s′⟩`; these are the length-`n/2` members of `Ñ⁺(n)`.
    pub fn doubled_half(&self) -> Option<Necklace> {
        let n = self.len();
        if n % 2 != 0 || self.canonical.primitive_period() != n / 2 {
            return None;
        }
        let half = self.canonical.slice(0, n / 2);
        half.has_odd_weight().then(|| Necklace::new(half))
    }

    pub fn in_n_minus(&self) -> bool {
        self.is_primitive() && self.canonical.has_odd_weight()
    }

    pub fn in_n_plus(&self) -> bool {
        self.is_primitive() && !self.canonical.has_odd_weight()
    }

    /// Membership in `Ñ⁺(n) = N⁺(n) ∪ N⁻(n/2)` (the latter stored doubled).
    pub fn in_ntilde_plus(&self) -> bool {
        self.in_n_plus() || self.doubled_half().is_some()
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canonical.fmt(f)
    }
}

impl FromStr for Necklace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = strip_delimiters(s, &["⟨", "<"], &["⟩", ">"]);
        Ok(Necklace::new(inner.parse()?))
    }
}

/// Which half of the partition `N̄(n) = N̄₁(n) ∪ N̄₂(n)` a class belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum InversionKind {
    /// `N̄₁`: `ι(s)` is a rotation of `s`.
    SelfInverse,
    /// `N̄₂`: the class holds two distinct necklaces.
    Paired,
}

/// A binary string up to rotation and inversion, stored as the smallest
/// member over all rotations of `s` and of `ι(s)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct InversionClass {
    canonical: BitString,
}

impl InversionClass {
    pub fn new(s: BitString) -> Self {
        let a = Necklace::new(s).canonical;
        let b = Necklace::new(s.invert()).canonical;
        InversionClass {
            canonical: a.min(b),
        }
    }

    pub fn canonical(&self) -> BitString {
        self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_primitive(&self) -> bool {
        self.canonical.is_primitive()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        InversionClass::new(*s) == *self
    }

    /// All distinct members, sorted.
    pub fn members(&self) -> Vec<BitString> {
        let set: BTreeSet<BitString> = self
            .canonical
            .rotations()
            .chain(self.canonical.invert().rotations())
            .collect();
        set.into_iter().collect()
    }

    /// Smallest member whose first symbol is `1`.
    pub fn min_member_starting_with_one(&self) -> BitString {
        // rotations of a primitive class always include one starting with 1;
        // for the all-zero class the inversion does
        self.members()
            .into_iter()
            .find(|s| s.first() == 1)
            .expect("inversion closes the class, so some member starts with 1")
    }

    pub fn kind(&self) -> Result<InversionKind> {
        if !self.is_primitive() {
            return Err(Error::NotPrimitive {
                value: self.to_string(),
            });
        }
        Ok(if self.canonical.is_reflexive() {
            InversionKind::SelfInverse
        } else {
            InversionKind::Paired
        })
    }
}

/// `N̄₁` iff the class is reflexive; rejects non-primitive classes.
pub fn classify_inversion_class(x: &InversionClass) -> Result<InversionKind> {
    x.kind()
}

impl fmt::Display for InversionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.canonical)
    }
}

impl FromStr for InversionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = strip_delimiters(s, &["["], &["]"]);
        Ok(InversionClass::new(inner.parse()?))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sign {
    // declared first so that `Minus < Plus`
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// An extended string `s^±`, ordered by word first and then `− < +`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedBitString {
    pub word: BitString,
    pub sign: Sign,
}

impl SignedBitString {
    pub fn new(word: BitString, sign: Sign) -> Self {
        SignedBitString { word, sign }
    }
}

impl fmt::Display for SignedBitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.word, self.sign.symbol())
    }
}

impl FromStr for SignedBitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (word, sign) = match s.chars().last() {
            Some('+') => (&s[..s.len() - 1], Sign::Plus),
            Some('-') => (&s[..s.len() - 1], Sign::Minus),
            _ => {
                return Err(Error::parse(
                    "signed string",
                    s,
                    "expected trailing '+' or '-'",
                ))
            }
        };
        Ok(SignedBitString::new(word.parse()?, sign))
    }
}

/// The necklace families enumerated by [`enumerate_set`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum NecklaceSet {
    /// `N⁻(n)`: primitive, odd weight.
    NMinus,
    /// `N⁺(n)`: primitive, even weight.
    NPlus,
    /// `Ñ⁺(n) = N⁺(n) ∪ N⁻(n/2)`, the latter as doubled strings.
    NTildePlus,
    /// `N̄(n)`: primitive inversion classes.
    NBar,
    NBar1,
    NBar2,
}

impl NecklaceSet {
    pub const ALL: [NecklaceSet; 6] = [
        NecklaceSet::NMinus,
        NecklaceSet::NPlus,
        NecklaceSet::NTildePlus,
        NecklaceSet::NBar,
        NecklaceSet::NBar1,
        NecklaceSet::NBar2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NecklaceSet::NMinus => "N-",
            NecklaceSet::NPlus => "N+",
            NecklaceSet::NTildePlus => "Nt+",
            NecklaceSet::NBar => "Nbar",
            NecklaceSet::NBar1 => "Nbar1",
            NecklaceSet::NBar2 => "Nbar2",
        }
    }

    pub fn holds_classes(self) -> bool {
        matches!(
            self,
            NecklaceSet::NBar | NecklaceSet::NBar1 | NecklaceSet::NBar2
        )
    }
}

impl fmt::Display for NecklaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NecklaceSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "N-" | "Nminus" | "N1" | "n-" => NecklaceSet::NMinus,
            "N+" | "Nplus" | "n+" => NecklaceSet::NPlus,
            "Nt+" | "Ntilde+" | "Ntilde" | "N2" | "nt+" => NecklaceSet::NTildePlus,
            "Nbar" | "N3" | "nbar" => NecklaceSet::NBar,
            "Nbar1" | "nbar1" => NecklaceSet::NBar1,
            "Nbar2" | "nbar2" => NecklaceSet::NBar2,
            other => {
                return Err(Error::parse(
                    "necklace set",
                    other,
                    "expected one of N-, N+, Nt+, Nbar, Nbar1, Nbar2",
                ))
            }
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SetMembers {
    Necklaces(Vec<Necklace>),
    Classes(Vec<InversionClass>),
}

impl SetMembers {
    pub fn len(&self) -> usize {
        match self {
            SetMembers::Necklaces(v) => v.len(),
            SetMembers::Classes(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn render(&self) -> Vec<String> {
        match self {
            SetMembers::Necklaces(v) => v.iter().map(|x| x.to_string()).collect(),
            SetMembers::Classes(v) => v.iter().map(|x| x.to_string()).collect(),
        }
    }
}

fn is_own_necklace_rep(s: &BitString) -> bool {
    s.rotations().all(|r| r >= *s)
}

/// Necklaces of one family, in order of canonical representative.
pub fn enumerate_necklaces(set: NecklaceSet, n: usize) -> Result<Vec<Necklace>> {
    let keep: fn(&Necklace) -> bool = match set {
        NecklaceSet::NMinus => Necklace::in_n_minus,
        NecklaceSet::NPlus => Necklace::in_n_plus,
        NecklaceSet::NTildePlus => Necklace::in_ntilde_plus,
        _ => {
            return Err(Error::precondition(
                set,
                "holds inversion classes; use enumerate_classes",
            ))
        }
    };
    Ok(BitString::all(n)?
        .filter(is_own_necklace_rep)
        .map(|s| Necklace { canonical: s })
        .filter(keep)
        .collect())
}

/// Primitive inversion classes of one family, in canonical order.
pub fn enumerate_classes(set: NecklaceSet, n: usize) -> Result<Vec<InversionClass>> {
    let want = match set {
        NecklaceSet::NBar => None,
        NecklaceSet::NBar1 => Some(InversionKind::SelfInverse),
        NecklaceSet::NBar2 => Some(InversionKind::Paired),
        _ => {
            return Err(Error::precondition(
                set,
                "holds necklaces; use enumerate_necklaces",
            ))
        }
    };
    Ok(BitString::all(n)?
        .filter(|s| s.is_primitive() && InversionClass::new(*s).canonical == *s)
        .map(|s| InversionClass { canonical: s })
        .filter(|c| match want {
            None => true,
            Some(kind) => c.kind().ok() == Some(kind),
        })
        .collect())
}

pub fn enumerate_set(set: NecklaceSet, n: usize) -> Result<SetMembers> {
    if set.holds_classes() {
        enumerate_classes(set, n).map(SetMembers::Classes)
    } else {
        enumerate_necklaces(set, n).map(SetMembers::Necklaces)
    }
}
