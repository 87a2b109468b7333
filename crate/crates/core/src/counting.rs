//! Closed-form counts and their brute-force cross-checks: the Möbius
//! function, `γₙ`, primitive and reflexive string counts, and the
//! subset-sum counts compared against cyclic unimodal permutations.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::bijections::enumerate_cup;
use crate::error::{Error, Result};
use crate::words::{enumerate_classes, BitString, NecklaceSet};

/// An exact count; serializes as a JSON number when it fits in `u64`,
/// otherwise as a decimal string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Count(pub BigUint);

impl Count {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn mobius(m: u64) -> i8 {
    assert!(m >= 1, "μ is defined on positive integers");
    let mut m = m;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn pow2(e: u64) -> BigInt {
    BigInt::from(1u8) << e as usize
}

fn exact_div(num: BigInt, den: u64, what: &'static str) -> Result<BigUint> {
    let den = BigInt::from(den);
    if !(&num % &den).is_zero() {
        return Err(Error::consistency(
            what,
            format!("{num} is not divisible by {den}"),
        ));
    }
    (num / den)
        .to_biguint()
        .ok_or_else(|| Error::consistency(what, "negative count".to_string()))
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::precondition(n, "n must be at least 1"));
    }
    Ok(())
}

/// `γₙ = (1/2n) Σ_{m | n, m odd} μ(m) 2^{n/m}`.
pub fn gamma(n: u64) -> Result<BigUint> {
    check_n(n)?;
    let sum: BigInt = divisors(n)
        .into_iter()
        .filter(|m| m % 2 == 1)
        .map(|m| BigInt::from(mobius(m)) * pow2(n / m))
        .sum();
    exact_div(sum, 2 * n, "γₙ is an integer")
}

/// `pₙ = Σ_{d | n} μ(n/d) 2^d`, the number of primitive strings of length `n`.
pub fn primitive_strings(n: u64) -> Result<BigUint> {
    check_n(n)?;
    let sum: BigInt = divisors(n)
        .into_iter()
        .map(|d| BigInt::from(mobius(n / d)) * pow2(d))
        .sum();
    exact_div(sum, 1, "pₙ is a count")
}

/// `ξₙ = Σ_{m | n/2, m odd} μ(m) 2^{n/2m}` for even `n`, and 0 for odd `n`.
pub fn primitive_reflexive_strings(n: u64) -> Result<BigUint> {
    check_n(n)?;
    if n % 2 == 1 {
        return Ok(BigUint::zero());
    }
    let half = n / 2;
    let sum: BigInt = divisors(half)
        .into_iter()
        .filter(|m| m % 2 == 1)
        .map(|m| BigInt::from(mobius(m)) * pow2(half / m))
        .sum();
    exact_div(sum, 1, "ξₙ is a count")
}

/// `(1/2n) Σ_{d | n, d odd} φ(d) 2^{n/d}`: necklaces of length `n` with odd weight.
pub fn odd_weight_necklaces(n: u64) -> Result<BigUint> {
    check_n(n)?;
    let sum: BigInt = divisors(n)
        .into_iter()
        .filter(|d| d % 2 == 1)
        .map(|d| BigInt::from(totient(d)) * pow2(n / d))
        .sum();
    exact_div(sum, 2 * n, "|T⁻(n)| is an integer")
}

fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// String, necklace and inversion-class counts for one `n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AppendixCounts {
    pub n: u64,
    pub gamma: Count,
    pub p: Count,
    pub c: Count,
    pub xi: Count,
    pub epsilon: Count,
    pub delta: Count,
    /// `εₙ + δₙ = γₙ` (also `cₙ / 2 = γₙ` for odd `n`).
    pub classes_match_gamma: bool,
}

pub fn appendix_counts(n: u64) -> Result<AppendixCounts> {
    let gamma = gamma(n)?;
    let p = primitive_strings(n)?;
    let c = exact_div(BigInt::from(p.clone()), n, "cₙ = pₙ / n")?;
    let xi = primitive_reflexive_strings(n)?;
    let epsilon = exact_div(BigInt::from(xi.clone()), n, "εₙ = ξₙ / n")?;
    let delta = exact_div(
        BigInt::from(p.clone()) - BigInt::from(xi.clone()),
        2 * n,
        "δₙ = (pₙ − nεₙ) / 2n",
    )?;
    let mut ok = &epsilon + &delta == gamma;
    if n % 2 == 1 {
        ok &= c == &gamma * 2u32;
    }
    Ok(AppendixCounts {
        n,
        gamma: Count(gamma),
        p: Count(p),
        c: Count(c),
        xi: Count(xi),
        epsilon: Count(epsilon),
        delta: Count(delta),
        classes_match_gamma: ok,
    })
}

/// Largest `n` for the subset-sum report; `enumerate_cup` walks `2ⁿ⁻¹` candidates.
pub const MAX_SUBSET_N: u64 = 24;

/// Subset-sum counts over `{1, …, n−1}` and the CUP statistics they are compared to.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SubsetSumCounts {
    /// Not serialized: the report this is flattened into already carries `n`.
    #[serde(skip_serializing)]
    pub n: u64,
    /// Subsets (the empty set included) with sum `≡ 0 (mod n)`.
    pub s0: Count,
    /// Subsets with sum `≡ 1 (mod n)`.
    pub s1: Count,
    /// `s1_by_k[k]`: `k`-element subsets with sum `≡ 1`, for `k = 0..=n`.
    pub s1_by_k: Vec<Count>,
    /// `cup_by_k[k] = |{σ ∈ CUP(n) : σ(k) = 1}|`, for `k = 0..=n` (entry 0 is 0).
    pub cup_by_k: Vec<Count>,
    pub t_minus: Count,
    pub s1_matches_gamma: bool,
    /// `s1_by_k[k] = cup_by_k[k + 1]` for every `k < n`.
    pub s1_by_k_matches_cup: bool,
    pub s0_matches_t_minus: bool,
}

/// `counts[k][r]`: `k`-element subsets of `{1, …, n−1}` with sum `≡ r (mod n)`.
pub fn subset_sum_table(n: u64) -> Vec<Vec<u64>> {
    let n = n as usize;
    let mut dp = vec![vec![0u64; n]; n + 1];
    dp[0][0] = 1;
    for x in 1..n {
        for k in (0..x).rev() {
            for r in 0..n {
                let v = dp[k][r];
                if v != 0 {
                    dp[k + 1][(r + x) % n] += v;
                }
            }
        }
    }
    dp
}

pub fn subset_sum_counts(n: u64) -> Result<SubsetSumCounts> {
    if !(2..=MAX_SUBSET_N).contains(&n) {
        return Err(Error::precondition(n, "subset-sum counts need 2 ≤ n ≤ 24"));
    }
    let table = subset_sum_table(n);
    let s0: u64 = table.iter().map(|row| row[0]).sum();
    let s1_by_k: Vec<u64> = table.iter().map(|row| row[1]).collect();
    let s1: u64 = s1_by_k.iter().sum();
    let mut cup_by_k = vec![0u64; n as usize + 1];
    for sigma in enumerate_cup(n as usize)? {
        cup_by_k[sigma.m()] += 1;
    }
    let t_minus = odd_weight_necklaces(n)?;
    let gamma = gamma(n)?;
    let s1_by_k_matches_cup = (0..n as usize).all(|k| s1_by_k[k] == cup_by_k[k + 1]);
    Ok(SubsetSumCounts {
        n,
        s0: s0.into(),
        s1: s1.into(),
        s1_matches_gamma: BigUint::from(s1) == gamma,
        s1_by_k: s1_by_k.into_iter().map(Count::from).collect(),
        cup_by_k: cup_by_k.into_iter().map(Count::from).collect(),
        s0_matches_t_minus: BigUint::from(s0) == t_minus,
        t_minus: Count(t_minus),
        s1_by_k_matches_cup,
    })
}

/// Both reports for one `n`; the subset-sum part is absent outside `2..=24`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CountReport {
    #[serde(flatten)]
    pub appendix: AppendixCounts,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub subset_sums: Option<SubsetSumCounts>,
}

pub fn count_report(n: u64) -> Result<CountReport> {
    let appendix = appendix_counts(n)?;
    let subset_sums = if (2..=MAX_SUBSET_N).contains(&n) {
        Some(subset_sum_counts(n)?)
    } else {
        None
    };
    Ok(CountReport {
        appendix,
        subset_sums,
    })
}

impl CountReport {
    pub fn all_verdicts_hold(&self) -> bool {
        self.appendix.classes_match_gamma
            && self
                .subset_sums
                .as_ref()
                .is_none_or(|s| s.s1_matches_gamma && s.s1_by_k_matches_cup && s.s0_matches_t_minus)
    }
}

/// For every `s′` of length `n/2`: `s′ι(s′)` is non-primitive iff `s′` is
/// `m`-alternating for some odd divisor `m ≥ 3` of `n/2`.
pub fn doubled_primitivity_holds(n: usize) -> Result<bool> {
    if n % 2 != 0 || n < 2 {
        return Err(Error::precondition(n, "needs even n ≥ 2"));
    }
    let half = n / 2;
    let odd_divisors: Vec<usize> = (3..=half).filter(|m| m % 2 == 1 && half % m == 0).collect();
    for sp in BitString::all(half)? {
        let s = sp.concat(&sp.invert())?;
        let alternating = odd_divisors
            .iter()
            .map(|&m| sp.is_k_alternating(m))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .any(|b| b);
        if s.is_primitive() == alternating {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|N̄(n)|` by enumerating all strings; the oracle for [`gamma`].
pub fn gamma_brute_force(n: usize) -> Result<usize> {
    Ok(enumerate_classes(NecklaceSet::NBar, n)?.len())
}

/// Primitive reflexive strings of length `n`, by enumeration.
pub fn primitive_reflexive_brute_force(n: usize) -> Result<u64> {
    Ok(BitString::all(n)?
        .filter(|s| s.is_primitive() && s.is_reflexive())
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn mobius_recursion() {
        for n in 1..=10_000u64 {
            let s: i64 = divisors(n).iter().map(|&d| mobius(d) as i64).sum();
            assert_eq!(s, i64::from(n == 1), "n={n}");
        }
    }

    #[test]
    fn gamma_sequence() {
        let g: Vec<BigUint> = (1..=10).map(|n| gamma(n).unwrap()).collect();
        let expect: Vec<BigUint> = [1, 1, 1, 2, 3, 5, 9, 16, 28, 51].map(big).to_vec();
        assert_eq!(g, expect);
        assert!(gamma(0).is_err());
        assert_eq!(gamma(100).unwrap().bits(), 93);
    }

    #[test]
    fn gamma_matches_enumeration() {
        for n in 1..=16 {
            assert_eq!(
                gamma(n as u64).unwrap(),
                big(gamma_brute_force(n).unwrap() as u64),
                "n={n}"
            );
        }
    }

    #[test]
    fn appendix_examples() {
        let r = appendix_counts(4).unwrap();
        assert_eq!((r.p.0.clone(), r.c.0.clone()), (big(12), big(3)));
        // brute force: 0011, 0110, 1001, 1100
        assert_eq!(r.xi.0, big(4));
        assert_eq!((r.epsilon.0.clone(), r.delta.0.clone()), (big(1), big(1)));
        assert!(r.classes_match_gamma);
        let r1 = appendix_counts(1).unwrap();
        assert_eq!(
            (r1.p.0.clone(), r1.c.0.clone(), r1.gamma.0.clone()),
            (big(2), big(2), big(1))
        );
        assert_eq!(appendix_counts(6).unwrap().gamma.0, big(5));
    }

    #[test]
    fn appendix_matches_brute_force() {
        for n in 1..=16u64 {
            let r = appendix_counts(n).unwrap();
            assert!(r.classes_match_gamma, "n={n}");
            let primitive = BitString::all(n as usize)
                .unwrap()
                .filter(|s| s.is_primitive())
                .count();
            assert_eq!(r.p.0, big(primitive as u64));
            assert_eq!(
                r.xi.0,
                big(primitive_reflexive_brute_force(n as usize).unwrap())
            );
        }
    }

    #[test]
    fn doubled_primitivity() {
        for n in (2..=16).step_by(2) {
            assert!(doubled_primitivity_holds(n).unwrap(), "n={n}");
        }
        assert!(doubled_primitivity_holds(5).is_err());
    }

    fn subsets_oracle(n: u64) -> (u64, Vec<u64>) {
        let mut s0 = 0;
        let mut by_k = vec![0u64; n as usize + 1];
        for mask in 0u64..(1 << (n - 1)) {
            let sum: u64 = (1..n).filter(|x| mask >> (x - 1) & 1 == 1).sum();
            match sum % n {
                0 => s0 += 1,
                1 => by_k[mask.count_ones() as usize] += 1,
                _ => {}
            }
        }
        (s0, by_k)
    }

    #[test]
    fn subset_dp_matches_bitmasks() {
        for n in 2..=18 {
            let r = subset_sum_counts(n).unwrap();
            let (s0, by_k) = subsets_oracle(n);
            assert_eq!(r.s0.to_u64(), Some(s0));
            assert_eq!(
                r.s1_by_k,
                by_k.into_iter().map(Count::from).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn subset_examples() {
        let r = subset_sum_counts(4).unwrap();
        // {1} and {2,3}
        assert_eq!(r.s1.to_u64(), Some(2));
        assert!(r.s1_matches_gamma);
        let six = subset_sum_counts(6).unwrap();
        let v = |xs: &[Count]| xs.iter().map(|c| c.to_u64().unwrap()).collect::<Vec<_>>();
        assert_eq!(v(&six.s1_by_k), vec![0, 1, 2, 1, 1, 0, 0]);
        assert_eq!(v(&six.cup_by_k), vec![0, 0, 1, 2, 1, 1, 0]);
        let ten = subset_sum_counts(10).unwrap();
        assert_eq!(v(&ten.s1_by_k), vec![0, 1, 4, 8, 12, 13, 9, 3, 1, 0, 0]);
        assert!(subset_sum_counts(1).is_err());
    }

    #[test]
    fn subset_verdicts() {
        for n in 2..=16 {
            let r = subset_sum_counts(n).unwrap();
            assert!(r.s1_matches_gamma && r.s0_matches_t_minus, "n={n}");
            if n <= 10 {
                assert!(r.s1_by_k_matches_cup, "n={n}");
            }
        }
    }

    #[test]
    fn t_minus_matches_enumeration() {
        for n in 1..=14usize {
            let mut set = std::collections::BTreeSet::new();
            for s in BitString::all(n).unwrap().filter(|s| s.has_odd_weight()) {
                set.insert(crate::words::Necklace::new(s));
            }
            assert_eq!(
                odd_weight_necklaces(n as u64).unwrap(),
                big(set.len() as u64)
            );
        }
    }

    #[test]
    fn json_names() {
        let json = serde_json::to_value(count_report(6).unwrap()).unwrap();
        for key in [
            "gamma", "p", "c", "xi", "epsilon", "delta", "s0", "s1", "s1_by_k", "cup_by_k",
            "t_minus",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
        // to_value would silently merge repeated keys
        let text = serde_json::to_string(&count_report(6).unwrap()).unwrap();
        assert_eq!(text.matches("\"n\":").count(), 1);
        let huge = serde_json::to_value(count_report(80).unwrap()).unwrap();
        assert!(huge["p"].is_string());
        assert!(huge.get("s1").is_none());
    }
}
