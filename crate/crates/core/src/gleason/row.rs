//! One real center together with its image in every other set.

use std::fmt;

use serde::{Serialize, Serializer};

use super::kneading::{is_closest_to_half, Angle};
use super::roots::{Bracket, HyperbolicCenter};
use crate::bijections::{
    a_of_sigma, is_satellite_cup, itinerary, lambda, orbit_start, phi, psi_plus, wr_phi,
    wr_psi_word, xi, xi_inv, CyclicUnimodalPermutation,
};
use crate::error::{Error, Result};
use crate::gf2::{reutenauer, Gf2Poly, NormalBasis};
use crate::words::{BitString, InversionClass, Necklace};

/// Columns `M1 … N3` for one center.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CorrespondenceRow {
    pub n: usize,
    /// The refined center `c`.
    pub c: f64,
    pub bracket: Bracket,
    /// Irreducible factor of `Ḡₙ` attached to `c`, of degree `n` or `n/2`.
    #[serde(serialize_with = "display")]
    pub m2: Gf2Poly,
    /// Kneading angle `θ(c)`.
    pub d1: Angle,
    #[serde(serialize_with = "display")]
    pub p1: CyclicUnimodalPermutation,
    /// `Ψ(σ)` as the raw itinerary word, an odd-weight representative.
    #[serde(serialize_with = "display")]
    pub n1: BitString,
    /// `Ξ⁻¹` of whichever of `t`, `ι(t)` ends in 0.
    #[serde(serialize_with = "display")]
    pub n2: BitString,
    /// The kneading sequence `t`, starting with 0.
    #[serde(serialize_with = "display")]
    pub n3: BitString,
    pub satellite: bool,
}

fn display<S: Serializer, T: fmt::Display>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Rounds to 6 places and keeps 4, so `−1.9407998` prints as `-1.9408...`.
pub fn format_center(c: f64) -> String {
    let c = if c == 0.0 { 0.0 } else { c };
    let six = format!("{c:.6}");
    format!("{}...", &six[..six.len() - 2])
}

impl CorrespondenceRow {
    pub fn m1_cell(&self) -> String {
        format_center(self.c)
    }

    /// The seven cells in column order.
    pub fn cells(&self) -> [String; 7] {
        [
            self.m1_cell(),
            self.m2.to_string(),
            self.d1.to_string(),
            self.p1.to_string(),
            self.n1.to_string(),
            self.n2.to_string(),
            self.n3.to_string(),
        ]
    }
}

fn check(ok: bool, name: &'static str, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::consistency(name, detail()))
    }
}

/// Builds the row for `center` and runs every correspondence check on it.
pub fn assemble_row(
    n: usize,
    center: &HyperbolicCenter,
    basis: &NormalBasis,
) -> Result<CorrespondenceRow> {
    let at = || format!("c = {}", center.value);
    check(center.period == n, "center has period n", at)?;
    check(basis.field().degree() == n, "basis has degree n", at)?;

    let t = center.kneading;
    let class = InversionClass::new(t);
    let sigma = center.orbit_permutation.clone();

    check(
        center.ranks[0] == 1,
        "f_c(0) is the smallest orbit point",
        at,
    )?;
    check(t.is_primitive(), "kneading sequence is primitive", || {
        format!("t = {t}")
    })?;
    check(
        is_closest_to_half(&center.kneading_angle),
        "θ closest to 1/2 in its orbit",
        || format!("θ = {}", center.kneading_angle),
    )?;
    check(
        class.min_member_starting_with_one() == t.invert(),
        "ι(t) is the least member starting with 1",
        || format!("t = {t}"),
    )?;
    let lam = lambda(&class)?;
    check(lam == sigma, "σ = λ([t])", || {
        format!("σ = {sigma}, λ([t]) = {lam}")
    })?;
    check(
        itinerary(&sigma) == center.itinerary,
        "Itin(σ) matches the critical orbit",
        || {
            format!(
                "Itin(σ) = {}, orbit gives {}",
                itinerary(&sigma),
                center.itinerary
            )
        },
    )?;
    let xa = xi(&a_of_sigma(&sigma));
    check(
        InversionClass::new(xa) == class,
        "[Ξ(A(σ))] = [t]",
        || format!("Ξ(A(σ)) = {xa}, t = {t}"),
    )?;

    let start = orbit_start(&sigma);
    check(
        start == t || start == t.invert(),
        "Ξ(A(σ)) from ⋆ is t or ι(t)",
        || format!("σ = {sigma}, start = {start}, t = {t}"),
    )?;

    let n2_necklace = phi(&sigma);
    check(
        psi_plus(&n2_necklace)? == class,
        "ψ⁺(φ(σ)) = [t]",
        || format!("t = {t}"),
    )?;
    let ends_in_zero = if t.last() == 0 { t } else { t.invert() };
    let n2 = xi_inv(&ends_in_zero);
    check(
        Necklace::new(n2) == n2_necklace,
        "N2 cell names φ(σ)",
        || format!("{n2} vs {n2_necklace}"),
    )?;

    let n1 = wr_psi_word(&sigma);
    let back = wr_phi(&Necklace::new(n1))?;
    check(back == sigma, "Φ(Ψ(σ)) = σ", || {
        format!("σ = {sigma}, Φ(Ψ(σ)) = {back}")
    })?;

    let m2 = reutenauer(&n2_necklace, basis)?;
    let satellite = is_satellite_cup(&sigma);
    let degree = m2.degree().unwrap_or(0);
    check(
        satellite == (n % 2 == 0 && degree == n / 2) && satellite == !n2_necklace.is_primitive(),
        "satellite ⇔ half-degree factor ⇔ doubled necklace",
        || format!("σ = {sigma}, M2 = {m2}, N2 = {n2_necklace}"),
    )?;
    check(
        satellite || degree == n,
        "primitive centers carry degree-n factors",
        || format!("M2 = {m2}"),
    )?;

    Ok(CorrespondenceRow {
        n,
        c: center.value,
        bracket: center.bracket,
        m2,
        d1: center.kneading_angle,
        p1: sigma,
        n1,
        n2,
        n3: t,
        satellite,
    })
}
