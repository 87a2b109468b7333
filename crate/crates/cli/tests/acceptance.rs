//! One PASS/FAIL line per acceptance criterion, each with its time budget.
//!
//! Reference values are written out here by hand, and the irreducible,
//! subset-sum and necklace counts are recomputed by brute force that does
//! not go through the library.

// reference tables are indexed by n, which reads better than zipped iterators
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use necklace_core::bijections::{enumerate_cup, lambda, phi, psi_plus, wr_phi, wr_psi};
use necklace_core::counting::{
    appendix_counts, doubled_primitivity_holds, primitive_reflexive_brute_force, subset_sum_counts,
};
use necklace_core::gf2::reutenauer;
use necklace_core::gleason::{
    assemble_row, gleason, gleason_mod2, real_roots, DEFAULT_PRECISION, SCALE,
};
use necklace_core::words::{enumerate_classes, enumerate_necklaces};
use necklace_core::{Gf2Poly, NecklaceSet, NormalBasis};

const GAMMA: [u64; 17] = [
    0, 1, 1, 1, 2, 3, 5, 9, 16, 28, 51, 93, 170, 315, 585, 1091, 2048,
];

type Verdict = Result<String, String>;

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_necklace"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("UTF-8"),
    )
}

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// Brute-force enumerations independent of the library.

fn is_irreducible_u64(f: u64, small: &[u64]) -> bool {
    let deg = 63 - f.leading_zeros();
    small
        .iter()
        .take_while(|&&g| 2 * (63 - g.leading_zeros()) <= deg)
        .all(|&g| {
            let mut r = f;
            let dg = 63 - g.leading_zeros();
            while r != 0 && 63 - r.leading_zeros() >= dg {
                r ^= g << (63 - r.leading_zeros() - dg);
            }
            r != 0
        })
}

/// Irreducibles by degree (as bit masks) up to `max`, by trial division.
fn irreducibles_by_degree(max: u32) -> Vec<Vec<u64>> {
    let mut found: Vec<u64> = Vec::new();
    let mut by_degree = vec![Vec::new(); max as usize + 1];
    for d in 1..=max {
        for f in (1u64 << d)..(1u64 << (d + 1)) {
            if is_irreducible_u64(f, &found) {
                by_degree[d as usize].push(f);
            }
        }
        found.extend(by_degree[d as usize].iter().copied());
    }
    by_degree
}

/// Centered means the coefficient of `x^(d−1)` vanishes.
fn centered(f: u64) -> bool {
    let d = 63 - f.leading_zeros();
    f >> (d - 1) & 1 == 0
}

fn poly(f: u64) -> Gf2Poly {
    Gf2Poly::from_u64(f)
}

fn necklace_reps(n: usize) -> Vec<u64> {
    let mask = (1u64 << n) - 1;
    let rot = |s: u64| ((s << 1) | (s >> (n - 1))) & mask;
    (0..=mask)
        .filter(|&s| {
            let mut r = s;
            (1..n).all(|_| {
                r = rot(r);
                r >= s
            })
        })
        .collect()
}

fn criterion_1() -> Verdict {
    let (code, out) = binary(&["count", "--max-n", "10", "--format", "csv"]);
    need(code == 0, || format!("exit status {code}"))?;
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let gammas: Vec<u64> = reader
        .records()
        .map(|r| r.expect("csv")[1].parse().expect("integer"))
        .collect();
    need(gammas == GAMMA[1..=10], || format!("got {gammas:?}"))?;
    Ok("γ₁..γ₁₀ = 1,1,1,2,3,5,9,16,28,51".into())
}

fn criterion_2() -> Verdict {
    let g3 = gleason(3).map_err(|e| e.to_string())?.to_string();
    let g4 = gleason(4).map_err(|e| e.to_string())?.to_string();
    need(g3 == "c^3+2c^2+c+1", || format!("G₃ = {g3}"))?;
    need(g4 == "c^6+3c^5+3c^4+3c^3+2c^2+1", || format!("G₄ = {g4}"))?;
    let gb3 = gleason_mod2(3).map_err(|e| e.to_string())?;
    need(gb3.is_irreducible().unwrap(), || {
        format!("Ḡ₃ = {gb3} is reducible")
    })?;
    let f4: BTreeSet<String> = gleason_mod2(4)
        .unwrap()
        .factor()
        .unwrap()
        .iter()
        .map(|(f, e)| format!("{f}^{e}"))
        .collect();
    let want: BTreeSet<String> = ["x^4+x+1^1", "x^2+x+1^1"].map(String::from).into();
    need(f4 == want, || format!("Ḡ₄ factors {f4:?}"))?;
    Ok("G₃, G₄ exact; Ḡ₃ irreducible; Ḡ₄ = (c⁴+c+1)(c²+c+1)".into())
}

fn criterion_3() -> Verdict {
    for n in 1..=10usize {
        let g = gleason(n).unwrap();
        let roots = real_roots(n, DEFAULT_PRECISION).map_err(|e| e.to_string())?;
        for c in &roots {
            let (lo, hi) = (
                g.sign_at_dyadic(c.bracket.lo.0, SCALE),
                g.sign_at_dyadic(c.bracket.hi.0, SCALE),
            );
            need(lo != hi && lo.is_ne() && hi.is_ne(), || {
                format!("n = {n}: bracket {} not certified", c.bracket)
            })?;
        }
        let factors = gleason_mod2(n).unwrap().factor().unwrap().len();
        need(
            roots.len() as u64 == GAMMA[n] && factors as u64 == GAMMA[n],
            || {
                format!(
                    "n = {n}: {} roots, {factors} factors, γ = {}",
                    roots.len(),
                    GAMMA[n]
                )
            },
        )?;
    }
    Ok("roots = factors = γₙ for n ≤ 10, every bracket sign-certified".into())
}

fn reference_rows(n: usize) -> Vec<[&'static str; 7]> {
    match n {
        4 => vec![
            [
                "-1.9408...",
                "x^4+x+1",
                "7/15",
                "(1432)",
                "1000",
                "1100",
                "0111",
            ],
            [
                "-1.3107...",
                "x^2+x+1",
                "6/15",
                "(1423)",
                "1011",
                "0101",
                "0110",
            ],
        ],
        5 => vec![
            [
                "-1.9854...",
                "x^5+x^2+1",
                "15/31",
                "(15432)",
                "10000",
                "11000",
                "01111",
            ],
            [
                "-1.8607...",
                "x^5+x^3+x^2+x+1",
                "14/31",
                "(15423)",
                "10011",
                "01001",
                "01110",
            ],
            [
                "-1.6254...",
                "x^5+x^3+1",
                "13/31",
                "(15324)",
                "10110",
                "11011",
                "01101",
            ],
        ],
        6 => vec![
            [
                "-1.9963...",
                "x^6+x+1",
                "31/63",
                "(165432)",
                "100000",
                "110000",
                "011111",
            ],
            [
                "-1.9667...",
                "x^6+x^3+1",
                "30/63",
                "(165423)",
                "100011",
                "010001",
                "011110",
            ],
            [
                "-1.9072...",
                "x^6+x^4+x^2+x+1",
                "29/63",
                "(165324)",
                "100110",
                "110011",
                "011101",
            ],
            [
                "-1.4760...",
                "x^6+x^4+x^3+x+1",
                "26/63",
                "(163425)",
                "101111",
                "010111",
                "011010",
            ],
            [
                "-1.7728...",
                "x^3+x^2+1",
                "28/63",
                "(164253)",
                "100101",
                "010010",
                "011100",
            ],
        ],
        _ => unreachable!(),
    }
}

fn criterion_4() -> Verdict {
    let mut literal_max = 0f64;
    let mut interval_max = 0f64;
    for n in [4usize, 5, 6] {
        let (code, out) = binary(&["table", "--n", &n.to_string(), "--format", "csv"]);
        need(code == 0, || format!("table --n {n}: exit status {code}"))?;
        let mut reader = csv::Reader::from_reader(out.as_bytes());
        let got: Vec<Vec<String>> = reader
            .records()
            .map(|r| r.expect("csv").iter().map(String::from).collect())
            .collect();
        let want: Vec<Vec<String>> = reference_rows(n)
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        // the reference lists the n = 6 satellite row last rather than in c order
        let same = if n == 6 {
            got.iter().collect::<BTreeSet<_>>() == want.iter().collect::<BTreeSet<_>>()
        } else {
            got == want
        };
        need(same, || format!("n = {n}: got {got:?}"))?;

        let roots = real_roots(n, DEFAULT_PRECISION).unwrap();
        for (c, row) in roots.iter().zip(&got) {
            let printed: f64 = row[0].trim_end_matches("...").parse().unwrap();
            literal_max = literal_max.max((c.value - printed).abs());
            // "-1.8607..." stands for a value in [-1.8608, -1.8607]
            let (lo, hi) = (printed - 1e-4, printed);
            interval_max = interval_max.max((lo - c.value).max(c.value - hi).max(0.0));
        }
    }
    need(interval_max <= 5e-5, || {
        format!("center off its printed interval by {interval_max:.2e}")
    })?;
    Ok(format!(
        "all cells byte-exact; n = 6 rows match as a set (satellite printed last); \
         max distance to printed interval {interval_max:.1e}; literal max |Δc| {literal_max:.1e} \
         because the printed centers are truncated"
    ))
}

fn criterion_5() -> Verdict {
    let mut total = 0;
    for n in 1..=14usize {
        let ntilde = enumerate_necklaces(NecklaceSet::NTildePlus, n).unwrap();
        let cup = enumerate_cup(n).unwrap();
        let nbar = enumerate_classes(NecklaceSet::NBar, n).unwrap();
        need(ntilde.len() as u64 == GAMMA[n], || {
            format!("|Ñ⁺({n})| = {}", ntilde.len())
        })?;
        for x in &ntilde {
            need(phi(&lambda(&psi_plus(x).unwrap()).unwrap()) == *x, || {
                format!("φλψ⁺ at {x}")
            })?;
        }
        for s in &cup {
            need(lambda(&psi_plus(&phi(s)).unwrap()).unwrap() == *s, || {
                format!("λψ⁺φ at {s}")
            })?;
        }
        for y in &nbar {
            need(psi_plus(&phi(&lambda(y).unwrap())).unwrap() == *y, || {
                format!("ψ⁺φλ at {y}")
            })?;
        }
        total += ntilde.len() + cup.len() + nbar.len();
    }
    Ok(format!(
        "three compositions are the identity for n ≤ 14 ({total} evaluations)"
    ))
}

fn criterion_6() -> Verdict {
    for n in 1..=14usize {
        for x in enumerate_necklaces(NecklaceSet::NMinus, n).unwrap() {
            need(wr_psi(&wr_phi(&x).unwrap()) == x, || format!("ΨΦ at {x}"))?;
        }
        for s in enumerate_cup(n).unwrap() {
            need(wr_phi(&wr_psi(&s)).unwrap() == s, || format!("ΦΨ at {s}"))?;
        }
    }
    Ok("Φ and Ψ mutually inverse for n ≤ 14".into())
}

fn criterion_7() -> Verdict {
    let irr = irreducibles_by_degree(12);
    for n in 1..=12usize {
        let basis = NormalBasis::default_for(n).unwrap();
        let want_minus: BTreeSet<Gf2Poly> = irr[n]
            .iter()
            .filter(|&&f| !centered(f))
            .map(|&f| poly(f))
            .collect();
        let mut want_tilde: BTreeSet<Gf2Poly> = irr[n]
            .iter()
            .filter(|&&f| centered(f))
            .map(|&f| poly(f))
            .collect();
        if n % 2 == 0 {
            want_tilde.extend(
                irr[n / 2]
                    .iter()
                    .filter(|&&f| !centered(f))
                    .map(|&f| poly(f)),
            );
        }
        for (set, want) in [
            (NecklaceSet::NMinus, &want_minus),
            (NecklaceSet::NTildePlus, &want_tilde),
        ] {
            let images: Vec<Gf2Poly> = enumerate_necklaces(set, n)
                .unwrap()
                .iter()
                .map(|x| {
                    let f = reutenauer(x, &basis).unwrap();
                    // trace bit = weight parity; doubled necklaces have even weight and non-centered images
                    let odd = x.weight() % 2 == 1;
                    assert!(x.is_primitive() || !f.is_centered());
                    if x.is_primitive() {
                        assert_eq!(!f.is_centered(), odd, "n = {n}, {x} ↦ {f}");
                    }
                    f
                })
                .collect();
            let distinct: BTreeSet<Gf2Poly> = images.iter().cloned().collect();
            need(distinct.len() == images.len() && distinct == *want, || {
                format!(
                    "n = {n}, {set}: {} images, {} distinct, target {}",
                    images.len(),
                    distinct.len(),
                    want.len()
                )
            })?;
        }
    }
    Ok("N⁻(n) → I⁻(n) and Ñ⁺(n) → Ĩ⁺(n) bijective with trace = parity, n ≤ 12".into())
}

fn closest_to_half(num: u64, n: u32) -> bool {
    let d = (1u64 << n) - 1;
    let dist = |x: u64| (2 * x as i64 - d as i64).unsigned_abs();
    let mut x = num;
    let mine = dist(num);
    (0..n).all(|_| {
        x = (2 * x) % d;
        dist(x) >= mine
    })
}

fn criterion_8() -> Verdict {
    let mut rows = 0;
    for n in 1..=10usize {
        let roots = real_roots(n, DEFAULT_PRECISION).unwrap();
        let basis = NormalBasis::default_for(n).unwrap();
        for w in roots.windows(2) {
            let (a, b) = (w[0].kneading_angle, w[1].kneading_angle);
            need(
                w[0].value < w[1].value && a.numerator() > b.numerator(),
                || {
                    format!(
                        "n = {n}: {} at {} then {} at {}",
                        a, w[0].value, b, w[1].value
                    )
                },
            )?;
        }
        for c in &roots {
            let a = c.kneading_angle;
            need(n == 1 || closest_to_half(a.numerator(), n as u32), || {
                format!("{a} not closest to 1/2")
            })?;
            assemble_row(n, c, &basis).map_err(|e| format!("n = {n}: {e}"))?;
            rows += 1;
        }
    }
    Ok(format!(
        "order reversal, closest-to-1/2 and correspondence checks on {rows} centers, n ≤ 10"
    ))
}

fn criterion_9() -> Verdict {
    for n in 1..=16u64 {
        let a = appendix_counts(n).unwrap();
        need(a.gamma.to_u64() == Some(GAMMA[n as usize]), || {
            format!("γ_{n} = {}", a.gamma)
        })?;
        let holds = if n % 2 == 0 {
            a.epsilon.to_u64().unwrap() + a.delta.to_u64().unwrap() == GAMMA[n as usize]
        } else {
            a.c.to_u64().unwrap() / 2 == GAMMA[n as usize]
        };
        need(holds && a.classes_match_gamma, || {
            format!("n = {n}: class identity fails")
        })?;
        let xi = primitive_reflexive_brute_force(n as usize).unwrap();
        need(a.xi.to_u64() == Some(xi), || {
            format!("ξ_{n} = {} vs brute force {xi}", a.xi)
        })?;
        if n % 2 == 0 {
            need(doubled_primitivity_holds(n as usize).unwrap(), || {
                format!("s′ι(s′) primitivity rule fails at n = {n}")
            })?;
        }
    }
    Ok("ε + δ = γ (even), c/2 = γ (odd), ξ brute force, s′ι(s′) primitivity rule, n ≤ 16".into())
}

fn cup_by_m(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for s in enumerate_cup(n).unwrap() {
        let m = (1..=n).find(|&i| s.apply(i) == 1).unwrap();
        counts[m] += 1;
    }
    counts
}

fn criterion_10() -> Verdict {
    for n in 2..=16usize {
        let mut by_k = vec![[0u64; 2]; n + 1];
        for mask in 0u64..(1 << (n - 1)) {
            let sum: usize = (1..n).filter(|i| mask >> (i - 1) & 1 == 1).sum();
            let r = sum % n;
            if r <= 1 {
                by_k[mask.count_ones() as usize][r] += 1;
            }
        }
        let s0: u64 = by_k.iter().map(|c| c[0]).sum();
        let s1: u64 = by_k.iter().map(|c| c[1]).sum();
        let t_minus = necklace_reps(n)
            .iter()
            .filter(|&&s| s.count_ones() % 2 == 1)
            .count() as u64;
        need(s1 == GAMMA[n] && s0 == t_minus, || {
            format!("n = {n}: |S₁| = {s1}, |S₀| = {s0}, |T⁻| = {t_minus}")
        })?;
        let report = subset_sum_counts(n as u64).unwrap();
        need(
            report.s0.to_u64() == Some(s0) && report.s1.to_u64() == Some(s1),
            || format!("n = {n}: library counts differ from brute force"),
        )?;
        if n <= 10 {
            let cup = cup_by_m(n);
            // a k-subset matches the cycles with σ(k + 1) = 1
            for k in 0..n {
                need(by_k[k][1] == cup[k + 1], || {
                    format!(
                        "n = {n}, k = {k}: |S₁(n,k)| = {} vs |CUP_{}(n)| = {}",
                        by_k[k][1],
                        k + 1,
                        cup[k + 1]
                    )
                })?;
            }
        }
    }
    Ok(
        "|S₁(n)| = γₙ and |S₀(n)| = |T⁻(n)| for n ≤ 16; |S₁(n,k)| = |CUP_{k+1}(n)| for n ≤ 10"
            .into(),
    )
}

type Criterion = (u32, &'static str, fn() -> Verdict, Duration);

// Runs without the libtest harness so the verdict lines are never captured.
fn main() {
    let criteria: [Criterion; 10] = [
        (1, "γ-sequence", criterion_1, Duration::from_secs(1)),
        (
            2,
            "Gleason polynomials",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            3,
            "roots = factors = γₙ",
            criterion_3,
            Duration::from_secs(300),
        ),
        (
            4,
            "correspondence tables",
            criterion_4,
            Duration::from_secs(30),
        ),
        (
            5,
            "cycle of bijections",
            criterion_5,
            Duration::from_secs(120),
        ),
        (6, "Weiss–Rogers", criterion_6, Duration::from_secs(120)),
        (7, "Reutenauer", criterion_7, Duration::from_secs(120)),
        (
            8,
            "kneading monotonicity",
            criterion_8,
            Duration::from_secs(300),
        ),
        (
            9,
            "inversion-class counts",
            criterion_9,
            Duration::from_secs(60),
        ),
        (10, "subset sums", criterion_10, Duration::from_secs(60)),
    ];
    let mut failures = Vec::new();
    for (id, name, f, budget) in criteria {
        let start = Instant::now();
        let verdict = f();
        let t = start.elapsed();
        let (ok, detail) = match verdict {
            Ok(d) if t <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget {budget:?}")),
            Err(d) => (false, d),
        };
        println!(
            "criterion {id:>2} {} {name} ({:.2}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            t.as_secs_f64()
        );
        if !ok {
            failures.push(id);
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
