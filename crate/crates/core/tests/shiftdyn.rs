//! Orbit structure of the twisted shifts over every primitive inversion class.

use necklace_core::shiftdyn::{extended_twisted_shift, f_orbit, ftilde_orbit, twisted_shift};
use necklace_core::words::{enumerate_classes, InversionKind};
use necklace_core::{BitString, NecklaceSet, Sign, SignedBitString};

#[test]
fn orbits_have_distinct_items() {
    // the constructors reject repeated items
    for n in 1..=14 {
        for y in enumerate_classes(NecklaceSet::NBar, n).unwrap() {
            let t = y.min_member_starting_with_one();
            let len = match y.kind().unwrap() {
                InversionKind::Paired => f_orbit(&t).unwrap().len(),
                InversionKind::SelfInverse => ftilde_orbit(&t).unwrap().len(),
            };
            assert_eq!(len, n);
        }
    }
}

#[test]
fn twisted_shift_lands_on_strings_starting_with_one() {
    for n in 1..=12 {
        for s in BitString::all(n).unwrap() {
            let f = twisted_shift(&s);
            assert_eq!(f.first(), 1);
            for sign in [Sign::Minus, Sign::Plus] {
                assert_eq!(
                    extended_twisted_shift(&SignedBitString::new(s, sign)).word,
                    f
                );
            }
        }
    }
}

#[test]
fn self_inverse_orbits_are_doubled() {
    for n in (2..=14).step_by(2) {
        for y in enumerate_classes(NecklaceSet::NBar1, n).unwrap() {
            let orbit = ftilde_orbit(&y.min_member_starting_with_one()).unwrap();
            let items = orbit.items();
            for i in 0..n / 2 {
                assert_eq!(items[i].word, items[i + n / 2].word);
                assert_ne!(items[i].sign, items[i + n / 2].sign);
            }
        }
    }
}
