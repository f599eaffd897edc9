//! Closed-form L(d,1)-labelings of span `2d + 2` for cycle bundles, and the
//! shift conditions under which each one is valid.
//!
//! With `s = 2d + 3` and `n` a multiple of `s`, every scheme labels vertex
//! `(i, j)` by `(alpha * i + beta * j) mod s`:
//!
//! | bundle    | scheme | alpha   | beta    |
//! |-----------|--------|---------|---------|
//! | direct    | F      | 1       | d + a   |
//! | direct    | G      | d + a   | 1       |
//! | cartesian | F      | d       | d + a   |
//! | cartesian | G      | d + a   | d       |
//!
//! The product part is always labeled correctly; the twisted edges between
//! fibre `m - 1` and fibre `0` are only compatible for shifts of the forms
//! enumerated by [`certify`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_bundle, BundleSpec, GraphError, ProductKind};
use crate::labeling::{verify_labeling, Labeling, LabelingError, ValidityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("separation d must be at least 1")]
    ZeroSeparation,
    #[error("scheme parameter a must be 1 or 2, got {0}")]
    BadOffset(u8),
    #[error("fibre order n = {n} is not a multiple of s = {s}")]
    FibreNotMultiple { n: usize, s: usize },
    #[error("shift {ell} is not admissible for the {kind} bundle with m = {m}, n = {n}, d = {d}")]
    NotAdmissible {
        kind: ProductKind,
        m: usize,
        n: usize,
        ell: usize,
        d: u32,
    },
    #[error("internal verification failure: closed-form labeling has {} violations", .0.violations.len())]
    InternalVerification(ValidityReport),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
}

// ---------------------------------------------------------------------------
// Modular predicates

/// `|(a mod n) - (b mod n)|` with nonnegative residues.
pub fn residue_gap(a: i64, b: i64, n: i64) -> i64 {
    (a.rem_euclid(n) - b.rem_euclid(n)).abs()
}

/// `|a - b| mod n`, the cyclic offset between `a` and `b` in one direction.
pub fn abs_diff_mod(a: i64, b: i64, n: i64) -> i64 {
    ((a as i128 - b as i128).abs() % n as i128) as i64
}

/// `d <= (|x - y| mod n) <= n - d`: the residues of `x` and `y` are at cyclic
/// distance at least `d` on `Z_n`. Whenever this holds, the residues also
/// differ by at least `d` as ordinary integers.
pub fn mod_abs_diff_in_range(x: i64, y: i64, n: i64, d: i64) -> bool {
    let r = abs_diff_mod(x, y, n);
    d <= r && r <= n - d
}

/// The residue gap of `a` and `b` is either `|a - b| mod n` or its complement.
pub fn residue_gap_is_offset_or_complement(a: i64, b: i64, n: i64) -> bool {
    let gap = residue_gap(a, b, n);
    let r = abs_diff_mod(a, b, n);
    gap == r || gap == n - r
}

/// `mod_abs_diff_in_range` is a sufficient condition for a residue gap of at least `d`.
pub fn cyclic_gap_bounds_residue_gap(a: i64, b: i64, n: i64, d: i64) -> bool {
    !mod_abs_diff_in_range(a, b, n, d) || residue_gap(a, b, n) >= d
}

/// `|a*n - b| mod n` is `b mod n` or `n - (b mod n)`.
pub fn offset_by_multiple_reduces_to_residue(a: i64, b: i64, n: i64) -> bool {
    let lhs = ((a as i128 * n as i128 - b as i128).abs() % n as i128) as i64;
    let r = b.rem_euclid(n);
    lhs == r || lhs == n - r
}

// ---------------------------------------------------------------------------
// Schemes

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeKind {
    F,
    G,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::F => "f",
            SchemeKind::G => "g",
        })
    }
}

/// One of the four linear labelings, parameterised by `d` and `a ∈ {1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelScheme {
    pub d: u32,
    pub scheme: SchemeKind,
    pub a: u8,
}

impl LabelScheme {
    pub fn new(d: u32, scheme: SchemeKind, a: u8) -> Result<Self, ClosedFormError> {
        if d == 0 {
            return Err(ClosedFormError::ZeroSeparation);
        }
        if !(1..=2).contains(&a) {
            return Err(ClosedFormError::BadOffset(a));
        }
        Ok(LabelScheme { d, scheme, a })
    }

    /// Label alphabet size, `2d + 3`.
    pub fn s(&self) -> usize {
        2 * self.d as usize + 3
    }

    /// Coefficients `(alpha, beta)` of `i` and `j`.
    pub fn coefficients(&self, kind: ProductKind) -> (usize, usize) {
        let d = self.d as usize;
        let da = d + self.a as usize;
        match (kind, self.scheme) {
            (ProductKind::Direct, SchemeKind::F) => (1, da),
            (ProductKind::Direct, SchemeKind::G) => (da, 1),
            (ProductKind::Cartesian, SchemeKind::F) => (d, da),
            (ProductKind::Cartesian, SchemeKind::G) => (da, d),
        }
    }

    pub fn label(&self, kind: ProductKind, i: usize, j: usize) -> u32 {
        let (alpha, beta) = self.coefficients(kind);
        ((alpha * i + beta * j) % self.s()) as u32
    }

    /// Human-readable formula, e.g. `f_1(i,j) = [i+3j] mod 7`.
    pub fn formula(&self, kind: ProductKind) -> String {
        let term = |c: usize, var: &str| {
            if c == 1 {
                var.to_string()
            } else {
                format!("{c}{var}")
            }
        };
        let (alpha, beta) = self.coefficients(kind);
        format!(
            "{}_{}(i,j) = [{}+{}] mod {}",
            self.scheme,
            self.a,
            term(alpha, "i"),
            term(beta, "j"),
            self.s()
        )
    }
}

fn check_fibre(n: usize, d: u32) -> Result<usize, ClosedFormError> {
    if d == 0 {
        return Err(ClosedFormError::ZeroSeparation);
    }
    let s = 2 * d as usize + 3;
    if !n.is_multiple_of(s) {
        return Err(ClosedFormError::FibreNotMultiple { n, s });
    }
    Ok(s)
}

/// Labels every vertex of the bundle by the given scheme. Does not check that
/// the shift is admissible; see [`label_optimal`] for that.
pub fn labels_from_scheme(spec: &BundleSpec, scheme: &LabelScheme) -> Result<Labeling, ClosedFormError> {
    spec.validate()?;
    check_fibre(spec.n, scheme.d)?;
    let labels = (0..spec.vertex_count())
        .map(|v| {
            let c = spec.coord(v);
            scheme.label(spec.kind, c.i, c.j)
        })
        .collect();
    Ok(Labeling::new(scheme.d, labels)?)
}

// ---------------------------------------------------------------------------
// Admissibility

/// Which shift condition a certificate witnesses.
///
/// Direct bundles have one form per scheme. Cartesian bundles use `F` under
/// the linear form and `G` under one of three forms selected by `d mod 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ShiftCase {
    /// `ell = ks + (-1)^a 2m`.
    #[serde(rename = "direct-f")]
    DirectF,
    /// `ell = ks - (-1)^a (d+1) m`.
    #[serde(rename = "direct-g")]
    DirectG,
    /// `ell = ks + (-1)^a 2dm`.
    #[serde(rename = "cartesian-a")]
    CartesianLinear,
    /// `d = 3t + 2`, `ell = ks - (2t+3)(d+a) m`.
    #[serde(rename = "cartesian-b")]
    CartesianTwoModThree,
    /// `d = 3t + 1`, `ell = ks + (2t+1)(d+a) m`.
    #[serde(rename = "cartesian-c")]
    CartesianOneModThree,
    /// `d = 3t`, `m = ps + 3t'`, `ell = ks + (i+a-1) s/3 - (-1)^a t'`.
    #[serde(rename = "cartesian-d")]
    CartesianZeroModThree,
}

impl ShiftCase {
    pub fn tag(&self) -> &'static str {
        match self {
            ShiftCase::DirectF => "direct-f",
            ShiftCase::DirectG => "direct-g",
            ShiftCase::CartesianLinear => "cartesian-a",
            ShiftCase::CartesianTwoModThree => "cartesian-b",
            ShiftCase::CartesianOneModThree => "cartesian-c",
            ShiftCase::CartesianZeroModThree => "cartesian-d",
        }
    }

    pub fn scheme(&self) -> SchemeKind {
        match self {
            ShiftCase::DirectF | ShiftCase::CartesianLinear => SchemeKind::F,
            _ => SchemeKind::G,
        }
    }
}

impl fmt::Display for ShiftCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Integer witnesses showing that a shift has one of the admissible forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissibilityCertificate {
    pub case: ShiftCase,
    pub a: u8,
    pub k: i64,
    pub t: Option<i64>,
    pub t_prime: Option<i64>,
    pub p: Option<i64>,
    pub i_case: Option<i64>,
}

impl AdmissibilityCertificate {
    fn plain(case: ShiftCase, a: u8, k: i64) -> Self {
        AdmissibilityCertificate {
            case,
            a,
            k,
            t: None,
            t_prime: None,
            p: None,
            i_case: None,
        }
    }

    /// Evaluates the case's shift formula at the witnesses, reduced into `[0, n)`.
    pub fn shift(&self, m: usize, n: usize, d: u32) -> usize {
        let (m, n, d) = (m as i64, n as i64, d as i64);
        let s = 2 * d + 3;
        let a = self.a as i64;
        let sign = if a % 2 == 1 { -1 } else { 1 };
        let ks = self.k * s;
        let t = self.t.unwrap_or(0);
        let raw = match self.case {
            ShiftCase::DirectF => ks + sign * 2 * m,
            ShiftCase::DirectG => ks - sign * (d + 1) * m,
            ShiftCase::CartesianLinear => ks + sign * 2 * d * m,
            ShiftCase::CartesianTwoModThree => ks - (2 * t + 3) * (d + a) * m,
            ShiftCase::CartesianOneModThree => ks + (2 * t + 1) * (d + a) * m,
            ShiftCase::CartesianZeroModThree => {
                ks + (self.i_case.unwrap_or(0) + a - 1) * (s / 3) - sign * self.t_prime.unwrap_or(0)
            }
        };
        raw.rem_euclid(n) as usize
    }

    /// Whether witness fields are present exactly when the case needs them.
    pub fn is_well_formed(&self) -> bool {
        let has = (
            self.t.is_some(),
            self.t_prime.is_some(),
            self.p.is_some(),
            self.i_case.is_some(),
        );
        match self.case {
            ShiftCase::DirectF | ShiftCase::DirectG | ShiftCase::CartesianLinear => {
                has == (false, false, false, false)
            }
            ShiftCase::CartesianTwoModThree | ShiftCase::CartesianOneModThree => {
                has == (true, false, false, false)
            }
            ShiftCase::CartesianZeroModThree => has == (true, true, true, true),
        }
    }
}

pub type Certified = (LabelScheme, AdmissibilityCertificate);

fn preference_key(entry: &Certified) -> impl Ord {
    let (scheme, cert) = entry;
    (
        scheme.scheme,
        scheme.a,
        cert.case,
        cert.k,
        cert.t_prime,
        cert.i_case,
    )
}

/// Every (scheme, certificate) pair for base order `m`, fibre order `n` and
/// separation `d`, regardless of shift, in preference order.
fn all_certificates(kind: ProductKind, m: usize, n: usize, d: u32) -> Result<Vec<Certified>, ClosedFormError> {
    let s = check_fibre(n, d)?;
    let d64 = d as i64;
    // ks mod n has period n / s in k.
    let ks = 0..(n / s) as i64;
    let mut out = Vec::new();
    for a in 1..=2u8 {
        let scheme = |kind| LabelScheme::new(d, kind, a);
        for k in ks.clone() {
            match kind {
                ProductKind::Direct => {
                    out.push((scheme(SchemeKind::F)?, AdmissibilityCertificate::plain(ShiftCase::DirectF, a, k)));
                    out.push((scheme(SchemeKind::G)?, AdmissibilityCertificate::plain(ShiftCase::DirectG, a, k)));
                }
                ProductKind::Cartesian => {
                    out.push((
                        scheme(SchemeKind::F)?,
                        AdmissibilityCertificate::plain(ShiftCase::CartesianLinear, a, k),
                    ));
                    let g = scheme(SchemeKind::G)?;
                    let t = d64 / 3;
                    match d64 % 3 {
                        2 => out.push((
                            g,
                            AdmissibilityCertificate {
                                t: Some(t),
                                ..AdmissibilityCertificate::plain(ShiftCase::CartesianTwoModThree, a, k)
                            },
                        )),
                        1 => out.push((
                            g,
                            AdmissibilityCertificate {
                                t: Some(t),
                                ..AdmissibilityCertificate::plain(ShiftCase::CartesianOneModThree, a, k)
                            },
                        )),
                        _ => {
                            let m64 = m as i64;
                            let s64 = s as i64;
                            for t_prime in 0..=2 * t {
                                let rest = m64 - 3 * t_prime;
                                if rest < 0 || rest % s64 != 0 {
                                    continue;
                                }
                                for i_case in 0..3 {
                                    out.push((
                                        g,
                                        AdmissibilityCertificate {
                                            case: ShiftCase::CartesianZeroModThree,
                                            a,
                                            k,
                                            t: Some(t),
                                            t_prime: Some(t_prime),
                                            p: Some(rest / s64),
                                            i_case: Some(i_case),
                                        },
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(preference_key);
    Ok(out)
}

/// Every (scheme, certificate) pair under which `spec.ell` is admissible for
/// separation `d`, in preference order. Empty when no condition applies.
pub fn certify(spec: &BundleSpec, d: u32) -> Result<Vec<Certified>, ClosedFormError> {
    spec.validate()?;
    Ok(all_certificates(spec.kind, spec.m, spec.n, d)?
        .into_iter()
        .filter(|(_, cert)| cert.shift(spec.m, spec.n, d) == spec.ell)
        .collect())
}

/// All admissible shifts for the given bundle shape, each with its certificates.
pub fn admissible_shifts(
    kind: ProductKind,
    m: usize,
    n: usize,
    d: u32,
) -> Result<BTreeMap<usize, Vec<Certified>>, ClosedFormError> {
    BundleSpec::new(kind, m, n, 0)?;
    let mut shifts: BTreeMap<usize, Vec<Certified>> = BTreeMap::new();
    for entry in all_certificates(kind, m, n, d)? {
        shifts.entry(entry.1.shift(m, n, d)).or_default().push(entry);
    }
    Ok(shifts)
}

/// A verified closed-form labeling together with the certificate that selected it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalLabeling {
    pub labeling: Labeling,
    pub scheme: LabelScheme,
    pub certificate: AdmissibilityCertificate,
    pub report: ValidityReport,
    /// True when `d <= 4`, where the span `2d + 2` matches the degree lower bound.
    /// Otherwise the span is only an upper bound.
    pub optimal: bool,
}

/// Labels an admissible bundle with span `2d + 2`, picking the first
/// certificate in preference order and verifying the result.
pub fn label_optimal(spec: &BundleSpec, d: u32) -> Result<OptimalLabeling, ClosedFormError> {
    let (scheme, certificate) = certify(spec, d)?.into_iter().next().ok_or(
        ClosedFormError::NotAdmissible {
            kind: spec.kind,
            m: spec.m,
            n: spec.n,
            ell: spec.ell,
            d,
        },
    )?;
    let labeling = labels_from_scheme(spec, &scheme)?;
    let graph = build_bundle(spec)?;
    let report = verify_labeling(&graph, &labeling)?;
    if !report.valid || report.span != 2 * d + 2 {
        return Err(ClosedFormError::InternalVerification(report));
    }
    Ok(OptimalLabeling {
        labeling,
        scheme,
        certificate,
        report,
        optimal: d <= 4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn spec(kind: ProductKind, m: usize, n: usize, ell: usize) -> BundleSpec {
        BundleSpec::new(kind, m, n, ell).unwrap()
    }

    fn shift_set(kind: ProductKind, m: usize, n: usize, d: u32) -> BTreeSet<usize> {
        admissible_shifts(kind, m, n, d).unwrap().into_keys().collect()
    }

    #[test]
    fn mod_abs_diff_examples() {
        assert!(!mod_abs_diff_in_range(10, 3, 7, 2));
        assert!(mod_abs_diff_in_range(5, 0, 7, 2));
        // Wrap case: residues 6 and 0 differ by 6 but sit at cyclic distance 1.
        assert!(!mod_abs_diff_in_range(6, 0, 7, 2));
        assert_eq!(residue_gap(6, 0, 7), 6);
        assert!(mod_abs_diff_in_range(-3, 1, 7, 2));
    }

    #[test]
    fn modular_identities_on_a_grid() {
        for n in 1..12 {
            for a in -30..30 {
                for b in -30..30 {
                    assert!(residue_gap_is_offset_or_complement(a, b, n));
                    assert!(offset_by_multiple_reduces_to_residue(a, b, n));
                    for d in 1..6 {
                        assert!(cyclic_gap_bounds_residue_gap(a, b, n, d));
                    }
                }
            }
        }
    }

    #[test]
    fn scheme_labels() {
        let direct = spec(ProductKind::Direct, 9, 7, 3);
        let f1 = LabelScheme::new(2, SchemeKind::F, 1).unwrap();
        let lab = labels_from_scheme(&direct, &f1).unwrap();
        assert_eq!(lab.get(direct.index(2, 1)), 5);
        assert_eq!(lab.get(0), 0);
        assert_eq!(f1.formula(ProductKind::Direct), "f_1(i,j) = [i+3j] mod 7");

        let cart = spec(ProductKind::Cartesian, 9, 7, 6);
        let lab = labels_from_scheme(&cart, &f1).unwrap();
        let (x, y) = (lab.get(cart.index(8, 0)), lab.get(cart.index(0, 6)));
        assert_eq!((x, y), (2, 4));
        assert_eq!(f1.formula(ProductKind::Cartesian), "f_1(i,j) = [2i+3j] mod 7");
        let g2 = LabelScheme::new(2, SchemeKind::G, 2).unwrap();
        assert_eq!(g2.formula(ProductKind::Cartesian), "g_2(i,j) = [4i+2j] mod 7");
    }

    #[test]
    fn scheme_rejects_bad_parameters() {
        assert_eq!(
            LabelScheme::new(0, SchemeKind::F, 1),
            Err(ClosedFormError::ZeroSeparation)
        );
        assert_eq!(
            LabelScheme::new(1, SchemeKind::F, 3),
            Err(ClosedFormError::BadOffset(3))
        );
        let f = LabelScheme::new(2, SchemeKind::F, 1).unwrap();
        assert_eq!(
            labels_from_scheme(&spec(ProductKind::Direct, 3, 8, 0), &f),
            Err(ClosedFormError::FibreNotMultiple { n: 8, s: 7 })
        );
        assert!(certify(&spec(ProductKind::Direct, 3, 8, 0), 2).is_err());
        assert!(certify(&spec(ProductKind::Direct, 3, 5, 0), 0).is_err());
    }

    #[test]
    fn figure_shift_sets() {
        let expected: BTreeSet<usize> = [1, 3, 4, 6].into();
        assert_eq!(shift_set(ProductKind::Direct, 9, 7, 2), expected);
        assert_eq!(shift_set(ProductKind::Cartesian, 9, 7, 2), expected);
        assert_eq!(shift_set(ProductKind::Direct, 3, 5, 1), [1, 4].into());

        let certs = certify(&spec(ProductKind::Direct, 9, 7, 3), 2).unwrap();
        let (scheme, cert) = certs[0];
        assert_eq!((scheme.scheme, scheme.a, cert.case), (SchemeKind::F, 1, ShiftCase::DirectF));

        let certs = certify(&spec(ProductKind::Cartesian, 9, 7, 6), 2).unwrap();
        assert!(certs
            .iter()
            .any(|(s, c)| c.case == ShiftCase::CartesianLinear && s.a == 1));
        let certs = certify(&spec(ProductKind::Cartesian, 9, 7, 3), 2).unwrap();
        assert!(certs.iter().any(|(s, c)| c.case == ShiftCase::CartesianTwoModThree
            && s.a == 1
            && c.t == Some(0)));
    }

    #[test]
    fn zero_mod_three_witnesses() {
        // d = 3, s = 9: m = 6 = 0*9 + 3*2 and m = 9 = 1*9 + 3*0.
        let certs = all_certificates(ProductKind::Cartesian, 6, 9, 3).unwrap();
        let d_case: Vec<_> = certs
            .iter()
            .filter(|(_, c)| c.case == ShiftCase::CartesianZeroModThree)
            .collect();
        assert_eq!(d_case.len(), 6);
        assert!(d_case
            .iter()
            .all(|(_, c)| c.t_prime == Some(2) && c.p == Some(0) && c.t == Some(1)));
        let certs = all_certificates(ProductKind::Cartesian, 9, 9, 3).unwrap();
        assert!(certs.iter().any(|(_, c)| c.t_prime == Some(0) && c.p == Some(1)));
        // m = 4 is not of the form 9p + 3t'.
        let certs = all_certificates(ProductKind::Cartesian, 4, 9, 3).unwrap();
        assert!(certs
            .iter()
            .all(|(_, c)| c.case != ShiftCase::CartesianZeroModThree));
    }

    #[test]
    fn certificates_are_well_formed() {
        for d in 1..=6 {
            let s = 2 * d as usize + 3;
            for kind in [ProductKind::Direct, ProductKind::Cartesian] {
                for m in 3..=10 {
                    for (_, cert) in all_certificates(kind, m, 2 * s, d).unwrap() {
                        assert!(cert.is_well_formed(), "{cert:?}");
                        assert!((0..2).contains(&cert.k));
                    }
                }
            }
        }
    }

    #[test]
    fn label_optimal_examples() {
        let out = label_optimal(&spec(ProductKind::Direct, 9, 7, 3), 2).unwrap();
        assert!(out.report.valid);
        assert_eq!(out.report.span, 6);
        assert!(out.optimal);

        let out = label_optimal(&spec(ProductKind::Direct, 3, 5, 1), 1).unwrap();
        assert_eq!(out.report.span, 4);

        assert_eq!(
            label_optimal(&spec(ProductKind::Direct, 9, 7, 2), 2).unwrap_err(),
            ClosedFormError::NotAdmissible {
                kind: ProductKind::Direct,
                m: 9,
                n: 7,
                ell: 2,
                d: 2
            }
        );
    }

    #[test]
    fn large_d_is_upper_bound_only() {
        let s = 13;
        let shifts = admissible_shifts(ProductKind::Direct, 4, s, 5).unwrap();
        let ell = *shifts.keys().next().unwrap();
        let out = label_optimal(&spec(ProductKind::Direct, 4, s, ell), 5).unwrap();
        assert_eq!(out.report.span, 12);
        assert!(!out.optimal);
    }

    #[test]
    fn certificate_json_shape() {
        let cert = AdmissibilityCertificate::plain(ShiftCase::DirectF, 1, 0);
        assert_eq!(
            serde_json::to_string(&cert).unwrap(),
            r#"{"case":"direct-f","a":1,"k":0,"t":null,"t_prime":null,"p":null,"i_case":null}"#
        );
    }
}
