//! Kneading sequences and angles, and the doubling map on period-`n` points.
//!
//! A period-`n` point of `D(x) = 2x mod 1` is `a / (2ⁿ − 1)` with `a < 2ⁿ − 1`,
//! and its binary expansion repeats the `n`-bit word of `a`. All arithmetic
//! here is on those numerators.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::bijections::Symbol;
use crate::error::{Error, Result};
use crate::words::{BitString, InversionClass, InversionKind};

/// Longest period an [`Angle`] can carry; `2ⁿ − 1` must fit in a `u64`.
pub const MAX_ANGLE_PERIOD: usize = 63;

/// Largest `n` for [`enumerate_dbar`], which walks all `2ⁿ` numerators.
pub const MAX_DBAR_N: usize = 24;

/// The rational `a / (2ⁿ − 1)`, kept unreduced so the period survives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Angle {
    numerator: u64,
    period: u8,
}

fn denominator_of(period: usize) -> u64 {
    (1u64 << period) - 1
}

impl Angle {
    pub fn new(numerator: u64, period: usize) -> Result<Self> {
        if period == 0 || period > MAX_ANGLE_PERIOD {
            return Err(Error::InvalidLength {
                len: period,
                reason: "angle period must be 1..=63",
            });
        }
        // for n = 1 the only point is 0
        if numerator >= denominator_of(period).max(1) {
            return Err(Error::precondition(
                format!("{numerator}/{}", denominator_of(period)),
                "numerator must be below 2^n - 1",
            ));
        }
        Ok(Angle {
            numerator,
            period: period as u8,
        })
    }

    /// The point `.w̄`; the all-ones word names `1 ≡ 0` and is rejected.
    pub fn from_word(w: &BitString) -> Result<Self> {
        Angle::new(w.bits(), w.len()).map_err(|_| Error::precondition(w, "word names 1 ≡ 0 mod 1"))
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn period(&self) -> usize {
        self.period as usize
    }

    /// `2ⁿ − 1`, except that the period-1 point `0` is written `0/1`.
    pub fn denominator(&self) -> u64 {
        denominator_of(self.period()).max(1)
    }

    /// The repeating binary block `t₁ … tₙ`.
    pub fn word(&self) -> BitString {
        BitString::new(self.numerator, self.period()).expect("numerator fits the period")
    }

    pub fn reduced(&self) -> (u64, u64) {
        let g = self.numerator.gcd(&self.denominator());
        (self.numerator / g, self.denominator() / g)
    }

    pub fn reduced_string(&self) -> String {
        let (a, b) = self.reduced();
        format!("{a}/{b}")
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator() as f64
    }

    /// Exact comparison of values, ignoring period.
    pub fn cmp_value(&self, other: &Angle) -> Ordering {
        let lhs = u128::from(self.numerator) * u128::from(other.denominator());
        let rhs = u128::from(other.numerator) * u128::from(self.denominator());
        lhs.cmp(&rhs)
    }

    /// `|2a − (2ⁿ − 1)|`, proportional to the distance from `1/2`.
    fn distance_to_half(&self) -> u64 {
        (2 * self.numerator).abs_diff(denominator_of(self.period()))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator())
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `t₁ = 0`; `tᵢ₊₁ = tᵢ` after `+` and `1 − tᵢ` after `−`, reading `κ` from `κ₀ = ⋆`.
pub fn kneading_sequence(kappa: &[Symbol]) -> Result<BitString> {
    let text = || kappa.iter().map(|s| s.symbol()).collect::<String>();
    if kappa.first() != Some(&Symbol::Star) || kappa[1..].contains(&Symbol::Star) {
        return Err(Error::precondition(
            text(),
            "κ must hold one ⋆, in first position",
        ));
    }
    let mut bits = vec![0u8; kappa.len()];
    for i in 1..kappa.len() {
        bits[i] = match kappa[i] {
            Symbol::Plus => bits[i - 1],
            _ => 1 - bits[i - 1],
        };
    }
    BitString::from_bits(&bits)
}

/// `θ = .t̄`, which must lie in `[0, 1/2]`.
pub fn kneading_angle(t: &BitString) -> Result<Angle> {
    let theta = Angle::from_word(t)?;
    if theta.numerator * 2 > denominator_of(theta.period()) {
        return Err(Error::precondition(theta, "kneading angle exceeds 1/2"));
    }
    Ok(theta)
}

/// `D(θ) = 2θ mod 1`, a left rotation of the digit block.
pub fn doubling_map(theta: &Angle) -> Angle {
    Angle::from_word(&theta.word().rotate_left(1)).expect("rotation keeps a non-all-ones word")
}

/// `π(θ) = min(θ, 1 − θ)`.
pub fn fold(theta: &Angle) -> Angle {
    let d = denominator_of(theta.period());
    Angle {
        numerator: theta.numerator.min(d - theta.numerator) % theta.denominator(),
        ..*theta
    }
}

/// `π′(θ) = max(θ, 1 − θ)`; `0` maps to `1 ≡ 0`.
pub fn fold_max(theta: &Angle) -> Angle {
    let d = denominator_of(theta.period());
    Angle {
        numerator: theta.numerator.max(d - theta.numerator) % theta.denominator(),
        ..*theta
    }
}

/// No point of the `D`-orbit of `θ` is strictly closer to `1/2`.
pub fn is_closest_to_half(theta: &Angle) -> bool {
    let best = std::iter::successors(Some(*theta), |x| Some(doubling_map(x)))
        .take(theta.period())
        .map(|x| x.distance_to_half())
        .min()
        .expect("period ≥ 1");
    theta.distance_to_half() == best
}

/// One periodic cycle of `D`, starting from its smallest point.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DCycle {
    pub points: Vec<Angle>,
}

impl DCycle {
    pub fn min_point(&self) -> Angle {
        self.points[0]
    }

    /// `I(C)`, the cycle of the points `−x`.
    pub fn involute(&self) -> DCycle {
        let d = denominator_of(self.points[0].period());
        let mut points: Vec<Angle> = self
            .points
            .iter()
            .map(|x| Angle {
                numerator: d - x.numerator,
                ..*x
            })
            .collect();
        let start = (0..points.len())
            .min_by_key(|&i| points[i].numerator)
            .expect("non-empty");
        points.rotate_left(start);
        DCycle { points }
    }
}

/// An `I`-orbit of primitive period-`n` cycles of `D`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DbarClass {
    /// One cycle if `I(C) = C`, otherwise `C` and `I(C)` by smallest point.
    pub cycles: Vec<DCycle>,
    /// Its image `τ(α)`: the class of the word of `π(x)` for any member `x`.
    #[serde(serialize_with = "serialize_display")]
    pub class: InversionClass,
}

fn serialize_display<S: Serializer, T: fmt::Display>(
    x: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl DbarClass {
    /// `I(C) = C`.
    pub fn is_self_paired(&self) -> bool {
        self.cycles.len() == 1
    }

    /// `"D1"` for self-paired classes, `"D2"` otherwise.
    pub fn tag(&self) -> &'static str {
        if self.is_self_paired() {
            "D1"
        } else {
            "D2"
        }
    }
}

/// All `I`-orbits of cycles of primitive period `n`, sorted by smallest point.
pub fn enumerate_dbar(n: usize) -> Result<Vec<DbarClass>> {
    if !(2..=MAX_DBAR_N).contains(&n) {
        return Err(Error::InvalidLength {
            len: n,
            reason: "enumerate_dbar supports 2 ≤ n ≤ 24",
        });
    }
    let d = denominator_of(n);
    let mut seen = vec![false; d as usize];
    let mut classes = Vec::new();
    for a in 0..d {
        if seen[a as usize] {
            continue;
        }
        let start = Angle::new(a, n)?;
        let points: Vec<Angle> = std::iter::successors(Some(start), |x| Some(doubling_map(x)))
            .take_while({
                let mut first = true;
                move |x| std::mem::take(&mut first) || *x != start
            })
            .collect();
        for x in &points {
            seen[x.numerator as usize] = true;
        }
        if points.len() != n {
            continue;
        }
        let cycle = DCycle { points };
        let partner = cycle.involute();
        let cycles = if partner == cycle {
            vec![cycle]
        } else {
            for x in &partner.points {
                seen[x.numerator as usize] = true;
            }
            vec![cycle, partner]
        };
        let class = InversionClass::new(fold(&cycles[0].min_point()).word());
        let self_paired = cycles.len() == 1;
        let expect = if self_paired {
            InversionKind::SelfInverse
        } else {
            InversionKind::Paired
        };
        if class.kind()? != expect {
            return Err(Error::consistency(
                "τ preserves the D̄₁/D̄₂ split",
                format!("{class} from cycle of {}", cycles[0].min_point()),
            ));
        }
        classes.push(DbarClass { cycles, class });
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn kappa(s: &str) -> Vec<Symbol> {
        s.chars()
            .map(|c| match c {
                '*' => Symbol::Star,
                '+' => Symbol::Plus,
                _ => Symbol::Minus,
            })
            .collect()
    }

    fn angle(a: u64, n: usize) -> Angle {
        Angle::new(a, n).unwrap()
    }

    #[test]
    fn kneading_sequences() {
        assert_eq!(kneading_sequence(&kappa("*-+")).unwrap(), bs("011"));
        assert_eq!(kneading_sequence(&kappa("*+++++")).unwrap(), bs("000000"));
        assert_eq!(kneading_sequence(&kappa("*-++")).unwrap(), bs("0111"));
        assert_eq!(kneading_sequence(&kappa("*")).unwrap(), bs("0"));
        assert!(kneading_sequence(&kappa("-+*")).is_err());
        assert!(kneading_sequence(&kappa("*+*")).is_err());
    }

    #[test]
    fn kneading_angles() {
        assert_eq!(kneading_angle(&bs("011")).unwrap(), angle(3, 3));
        assert_eq!(kneading_angle(&bs("0111")).unwrap().to_string(), "7/15");
        assert_eq!(kneading_angle(&bs("000")).unwrap().to_string(), "0/7");
        assert_eq!(kneading_angle(&bs("0")).unwrap().to_string(), "0/1");
        assert!(kneading_angle(&bs("100")).is_err());
        assert!(kneading_angle(&bs("111")).is_err());
    }

    #[test]
    fn angle_forms() {
        let a = angle(28, 6);
        assert_eq!(a.to_string(), "28/63");
        assert_eq!(a.reduced_string(), "4/9");
        assert_eq!(a.word(), bs("011100"));
        assert_eq!(angle(6, 4).reduced(), (2, 5));
        assert_eq!(angle(1, 3).cmp_value(&angle(10, 6)), Ordering::Less);
        assert_eq!(angle(1, 3).cmp_value(&angle(9, 6)), Ordering::Equal);
        assert!(Angle::new(7, 3).is_err());
        assert!(Angle::new(0, 0).is_err());
    }

    #[test]
    fn doubling_and_folding() {
        assert_eq!(doubling_map(&angle(1, 3)), angle(2, 3));
        assert_eq!(doubling_map(&angle(7, 4)), angle(14, 4));
        assert_eq!(doubling_map(&angle(0, 5)), angle(0, 5));
        assert_eq!(fold(&angle(6, 3)), angle(1, 3));
        assert_eq!(fold(&angle(3, 4)), angle(3, 4));
        assert_eq!(fold(&angle(14, 4)), angle(1, 4));
        assert_eq!(fold_max(&angle(1, 4)), angle(14, 4));
        assert_eq!(fold(&angle(0, 2)), angle(0, 2));
    }

    #[test]
    fn doubling_is_numerator_doubling() {
        for n in 1..=10 {
            let d = denominator_of(n).max(1);
            for a in 0..d {
                assert_eq!(doubling_map(&angle(a, n)).numerator(), (2 * a) % d);
            }
        }
    }

    #[test]
    fn closest_to_half() {
        assert!(is_closest_to_half(&angle(7, 4)));
        assert!(!is_closest_to_half(&angle(1, 4)));
        // 6/15 and 9/15 tie
        assert!(is_closest_to_half(&angle(6, 4)));
        assert!(is_closest_to_half(&angle(28, 6)));
    }

    #[test]
    fn dbar_small() {
        let classes = enumerate_dbar(3).unwrap();
        assert_eq!(classes.len(), 1);
        let pts: Vec<Vec<String>> = classes[0]
            .cycles
            .iter()
            .map(|c| c.points.iter().map(Angle::to_string).collect())
            .collect();
        assert_eq!(pts, [["1/7", "2/7", "4/7"], ["3/7", "6/7", "5/7"]]);
        assert_eq!(classes[0].tag(), "D2");

        let classes = enumerate_dbar(4).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].cycles[0].min_point(), angle(1, 4));
        assert_eq!(classes[0].cycles[1].min_point(), angle(7, 4));
        assert_eq!(classes[1].cycles.len(), 1);
        assert_eq!(classes[1].cycles[0].min_point(), angle(3, 4));
        assert!(classes[1].cycles[0].points.contains(&angle(6, 4)));
        assert_eq!(classes[1].tag(), "D1");

        let classes = enumerate_dbar(2).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].cycles[0].points, [angle(1, 2), angle(2, 2)]);
        assert!(classes[0].is_self_paired());
        assert_eq!(classes[0].class, InversionClass::new(bs("01")));
    }
}
