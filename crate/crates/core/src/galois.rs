//! Abelian Galois families over `K = F_q(θ)`: constant-field extensions
//! `F_{q^n}(θ)/K` and quadratic Kummer extensions `K(√D)/K`, their Frobenius
//! classes, the Frobenius-evaluation map into truncated residue families,
//! constructive realizations of Frobenian sets as linear recurrences, and
//! density estimation.
//!
//! Both families are abelian, so a Frobenius "conjugacy class" is a single
//! group element and every equivariant map on the group is plain K-valued.
//! Non-abelian extensions are out of scope here; the group-theoretic side of
//! the story lives in [`crate::grouplab`].

use crate::ak::{AkElement, AkError};
use crate::gf::FieldSpec;
use crate::lrs::{self, LrsError, LrsSpec};
use crate::polyring::{
    irreducible_count, irreducibles_up_to, Poly, PolyError, PolyOverK, RationalFn,
};
use crate::residue::{legendre_symbol, AtPrime, ResidueError, ResidueField};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaloisError {
    #[error("unsupported family parameters: {0}")]
    UnsupportedFamily(&'static str),
    #[error("construction size guard exceeded")]
    SizeExceeded,
    #[error("polynomial has an inseparable factor")]
    InseparableInput,
    #[error("class function must assign a value to every group element")]
    IncompleteClassFunction,
    #[error("unknown class label: {0}")]
    UnknownClass(String),
    #[error(transparent)]
    Field(#[from] crate::gf::GfError),
    #[error(transparent)]
    Lrs(#[from] LrsError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ak(#[from] AkError),
}

/// A supported abelian extension `L/K` with its Galois group.
///
/// * `ConstantField(n)`: `L = F_{q^n}(θ)`, group `Z/n`, Frobenius class of
///   `P` is `deg P mod n`; never ramified, never geometric for `n > 1`.
/// * `KummerQuadratic(D)`: `L = K(√D)` for odd `q`, group `Z/2` written as
///   `{+1, −1}`, Frobenius class of `P` is the Legendre symbol `(D/P)`;
///   ramified at the zeros of `D`, geometric when `D` is non-constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisFamily {
    ConstantField { n: usize },
    KummerQuadratic { dpoly: Poly },
}

/// The Frobenius class of a prime, indexed 0..group order. For the Kummer
/// family index 0 is the class `+1` and index 1 is `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobClass {
    Class(usize),
    Ramified,
}

impl GaloisFamily {
    pub fn constant_field(n: usize) -> Result<Self, GaloisError> {
        if n == 0 {
            return Err(GaloisError::UnsupportedFamily("constant-field order must be ≥ 1"));
        }
        Ok(GaloisFamily::ConstantField { n })
    }

    pub fn kummer_quadratic(dpoly: Poly, field: &FieldSpec) -> Result<Self, GaloisError> {
        if field.q() % 2 == 0 {
            return Err(GaloisError::Residue(ResidueError::EvenCharacteristic));
        }
        if dpoly.is_zero() {
            return Err(GaloisError::UnsupportedFamily("Kummer discriminant must be nonzero"));
        }
        match dpoly.degree() {
            None | Some(0) => {
                // a constant: the extension is trivial unless it is a
                // non-square in F_q
                let c = dpoly.coeff(0, field);
                let mut is_square = false;
                for x in field.elements() {
                    if field.mul(&x, &x)? == c {
                        is_square = true;
                        break;
                    }
                }
                if is_square {
                    return Err(GaloisError::UnsupportedFamily(
                        "constant discriminant is a square, the extension is trivial",
                    ));
                }
            }
            Some(_) => {
                let deriv = crate::polyring::derivative_r(&dpoly, field)?;
                let g = Poly::gcd(&dpoly, &deriv, field)?;
                if g.degree() != Some(0) {
                    return Err(GaloisError::UnsupportedFamily(
                        "Kummer discriminant must be squarefree",
                    ));
                }
            }
        }
        Ok(GaloisFamily::KummerQuadratic { dpoly })
    }

    pub fn group_order(&self) -> usize {
        match self {
            GaloisFamily::ConstantField { n } => *n,
            GaloisFamily::KummerQuadratic { .. } => 2,
        }
    }

    /// Index of the identity element.
    pub fn identity_class(&self) -> usize {
        0
    }

    pub fn class_label(&self, i: usize) -> String {
        match self {
            GaloisFamily::ConstantField { .. } => i.to_string(),
            GaloisFamily::KummerQuadratic { .. } => {
                if i == 0 {
                    "+1".into()
                } else {
                    "-1".into()
                }
            }
        }
    }

    pub fn parse_class(&self, s: &str) -> Result<usize, GaloisError> {
        match self {
            GaloisFamily::ConstantField { n } => match s.parse::<usize>() {
                Ok(i) if i < *n => Ok(i),
                _ => Err(GaloisError::UnknownClass(s.to_string())),
            },
            GaloisFamily::KummerQuadratic { .. } => match s {
                "+1" | "1" => Ok(0),
                "-1" => Ok(1),
                _ => Err(GaloisError::UnknownClass(s.to_string())),
            },
        }
    }

    /// Whether `L/K` is geometric (the constant field does not grow).
    /// Natural densities exist only in the geometric case; the
    /// constant-field family has oscillating per-degree fractions instead.
    pub fn geometric(&self) -> bool {
        match self {
            GaloisFamily::ConstantField { n } => *n == 1,
            GaloisFamily::KummerQuadratic { dpoly } => dpoly.degree().map_or(false, |d| d > 0),
        }
    }

    pub fn frobenius_class(
        &self,
        p: &Poly,
        field: &FieldSpec,
    ) -> Result<FrobClass, GaloisError> {
        match self {
            GaloisFamily::ConstantField { n } => {
                let d = p.degree().ok_or(GaloisError::Poly(PolyError::ZeroPolynomial))?;
                Ok(FrobClass::Class(d % n))
            }
            GaloisFamily::KummerQuadratic { dpoly } => {
                let fp = ResidueField::trusted(p.clone(), field.clone());
                let c = RationalFn::from_poly(dpoly.clone(), field);
                match legendre_symbol(&c, &fp)? {
                    1 => Ok(FrobClass::Class(0)),
                    -1 => Ok(FrobClass::Class(1)),
                    _ => Ok(FrobClass::Ramified),
                }
            }
        }
    }
}

/// A K-valued function on the Galois group, indexed by class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    values: Vec<RationalFn>,
}

impl ClassFunction {
    pub fn new(family: &GaloisFamily, values: Vec<RationalFn>) -> Result<Self, GaloisError> {
        if values.len() != family.group_order() {
            return Err(GaloisError::IncompleteClassFunction);
        }
        Ok(ClassFunction { values })
    }

    pub fn constant(family: &GaloisFamily, c: RationalFn) -> Self {
        ClassFunction {
            values: vec![c; family.group_order()],
        }
    }

    pub fn value(&self, class: usize) -> &RationalFn {
        &self.values[class]
    }

    pub fn values(&self) -> &[RationalFn] {
        &self.values
    }
}

/// The Frobenius-evaluation map: the element of the truncated residue
/// family whose entry at `P` is `g(φ_P) mod P`. Ramified primes and
/// coefficient poles go to the bad set.
pub fn ev_l(
    family: &GaloisFamily,
    g: &ClassFunction,
    cutoff: usize,
    field: &FieldSpec,
) -> Result<AkElement, GaloisError> {
    if g.values.len() != family.group_order() {
        return Err(GaloisError::IncompleteClassFunction);
    }
    let mut failure = None;
    let out = AkElement::build(field, cutoff, |fp| {
        let class = match family.frobenius_class(fp.modulus(), field) {
            Ok(FrobClass::Class(i)) => i,
            Ok(FrobClass::Ramified) => return Ok(AtPrime::BadPrime),
            Err(e) => {
                failure = Some(e);
                return Ok(AtPrime::BadPrime);
            }
        };
        match crate::residue::reduce(g.value(class), fp) {
            Ok(v) => Ok(AtPrime::Value(v)),
            Err(ResidueError::DenominatorVanishes) => Ok(AtPrime::BadPrime),
            Err(e) => Err(e.into()),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// A linear recurrence whose zero set `{P : a_{q^{deg P}} ≡ 0 mod P}` is
/// the Frobenian set `{P : φ_P ∈ C}`, up to the finitely many ramified
/// primes.
///
/// Constant-field construction: the period-`(q^n − 1)` indicator sequence
/// that vanishes at the residues `q^j mod (q^n − 1)` with `j ∈ C`; its
/// eigen polynomial `x^N − 1` is separable since `p ∤ N`. Guarded by
/// `N ≤ 2^20`.
///
/// Kummer construction for `C = {s}`: the order-2 sequence with
/// `a_1 = 1, a_2 = 0, a_{n+2} = D·a_n`, whose value at `q^d` is
/// `D^{(q^d−1)/2} ≡ (D/P) mod P`, direct-summed with the constant `−s`;
/// eigen polynomial `(x² − D)(x − 1)`, separable for odd `q`. For the full
/// class set the squared sequence shifted by `−1` vanishes at every
/// unramified prime.
pub fn realize_frobenian_lrs(
    family: &GaloisFamily,
    class_set: &BTreeSet<usize>,
    field: &FieldSpec,
) -> Result<LrsSpec, GaloisError> {
    let order = family.group_order();
    if class_set.iter().any(|&c| c >= order) {
        return Err(GaloisError::UnsupportedFamily("class index out of range"));
    }
    if class_set.is_empty() {
        return Ok(LrsSpec::constant(RationalFn::one(field), field));
    }
    match family {
        GaloisFamily::ConstantField { n } => {
            let q = field.q();
            let mut big_n: u64 = 1;
            for _ in 0..*n {
                big_n = big_n
                    .checked_mul(q)
                    .filter(|&v| v <= 1 << 20)
                    .ok_or(GaloisError::SizeExceeded)?;
            }
            let big_n = big_n - 1;
            if big_n == 0 {
                // trivial group: C = {0} is the full set, every prime
                return Ok(LrsSpec::constant(RationalFn::zero(field), field));
            }
            let mut zero_residues = BTreeSet::new();
            for &j in class_set {
                let mut r: u64 = 1;
                for _ in 0..j {
                    r = (r * q) % big_n;
                }
                zero_residues.insert(r % big_n);
            }
            let len = big_n as usize;
            let mut initial = Vec::with_capacity(len);
            for m in 0..len {
                let v = if zero_residues.contains(&(m as u64)) {
                    RationalFn::zero(field)
                } else {
                    RationalFn::one(field)
                };
                initial.push(v);
            }
            let mut coeffs = vec![RationalFn::zero(field); len];
            coeffs[len - 1] = RationalFn::one(field);
            Ok(LrsSpec::new(coeffs, initial, 0)?)
        }
        GaloisFamily::KummerQuadratic { dpoly } => {
            let base = kummer_symbol_spec(dpoly, field)?;
            if class_set.len() == order {
                // symbol² − 1 vanishes at every unramified prime
                let sq = lrs::product(&base, &base, field)?;
                let minus_one = RationalFn::one(field).neg(field);
                Ok(lrs::shift_by_constant(&sq, &minus_one, field)?)
            } else {
                let s = if class_set.contains(&0) {
                    RationalFn::one(field)
                } else {
                    RationalFn::one(field).neg(field)
                };
                Ok(lrs::shift_by_constant(&base, &s.neg(field), field)?)
            }
        }
    }
}

/// The sequence whose value at index `q^d` is `D^{(q^d−1)/2}`, congruent to
/// the Legendre symbol `(D/P)` mod every `P` of degree `d`.
pub fn kummer_symbol_spec(dpoly: &Poly, field: &FieldSpec) -> Result<LrsSpec, GaloisError> {
    let d = RationalFn::from_poly(dpoly.clone(), field);
    Ok(LrsSpec::new(
        vec![RationalFn::zero(field), d],
        vec![RationalFn::one(field), RationalFn::zero(field)],
        1,
    )?)
}

/// Per-degree hit counts for a predicate on primes, with a natural
/// fraction at the cutoff and a truncated Dirichlet estimate on a grid of
/// exponents.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub predicate: String,
    /// (degree, hits, total) per degree up to the cutoff.
    pub by_degree: Vec<(usize, usize, usize)>,
    pub natural_fraction: f64,
    /// (s, estimate) pairs; the estimate uses degree-weighted sums
    /// `Σ d·m_d·q^{−sd} / Σ d·π_d·q^{−sd}`, the truncation of the
    /// logarithmic-derivative form of the Dirichlet series. The limit
    /// `s → 1⁺` does not commute with truncation, so the grid reports a
    /// trend rather than a single number.
    pub dirichlet: Vec<(f64, f64)>,
    pub expected: Option<f64>,
    pub geometric: bool,
}

pub const DIRICHLET_GRID: [f64; 4] = [1.2, 1.1, 1.05, 1.02];

impl DensityReport {
    pub fn from_counts(
        predicate: impl Into<String>,
        by_degree: Vec<(usize, usize, usize)>,
        q: u64,
        expected: Option<f64>,
        geometric: bool,
    ) -> Self {
        let hits: usize = by_degree.iter().map(|&(_, h, _)| h).sum();
        let total: usize = by_degree.iter().map(|&(_, _, t)| t).sum();
        let natural_fraction = if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        };
        let dirichlet = DIRICHLET_GRID
            .iter()
            .map(|&s| {
                let mut num = 0.0;
                let mut den = 0.0;
                for &(d, h, t) in &by_degree {
                    let w = d as f64 * (q as f64).powf(-s * d as f64);
                    num += h as f64 * w;
                    den += t as f64 * w;
                }
                (s, if den == 0.0 { 0.0 } else { num / den })
            })
            .collect();
        DensityReport {
            predicate: predicate.into(),
            by_degree,
            natural_fraction,
            dirichlet,
            expected,
            geometric,
        }
    }

    pub fn dirichlet_at(&self, s: f64) -> Option<f64> {
        self.dirichlet
            .iter()
            .find(|&&(gs, _)| (gs - s).abs() < 1e-9)
            .map(|&(_, v)| v)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,hits,total,cumulative_fraction\n");
        let (mut ch, mut ct) = (0usize, 0usize);
        for &(d, h, t) in &self.by_degree {
            ch += h;
            ct += t;
            let frac = if ct == 0 { 0.0 } else { ch as f64 / ct as f64 };
            out.push_str(&format!("{d},{h},{t},{frac}\n"));
        }
        out
    }
}

/// Evaluates a predicate at every monic irreducible of degree ≤ `cutoff`
/// and aggregates the counts.
pub fn density_report(
    predicate_id: impl Into<String>,
    cutoff: usize,
    field: &FieldSpec,
    expected: Option<f64>,
    geometric: bool,
    mut pred: impl FnMut(&Poly) -> Result<bool, GaloisError>,
) -> Result<DensityReport, GaloisError> {
    let mut by_degree = Vec::with_capacity(cutoff);
    for (i, level) in irreducibles_up_to(cutoff, field)?.into_iter().enumerate() {
        let d = i + 1;
        let total = level.len();
        let mut hits = 0;
        for p in level {
            if pred(&p)? {
                hits += 1;
            }
        }
        by_degree.push((d, hits, total));
    }
    Ok(DensityReport::from_counts(
        predicate_id,
        by_degree,
        field.q(),
        expected,
        geometric,
    ))
}

/// Density of `{P : φ_P ∈ C}` by enumeration; the expected value is
/// `#C / #Γ` by the Chebotarev theorem for these families.
pub fn class_density_report(
    family: &GaloisFamily,
    class_set: &BTreeSet<usize>,
    cutoff: usize,
    field: &FieldSpec,
) -> Result<DensityReport, GaloisError> {
    let labels: Vec<String> = class_set.iter().map(|&c| family.class_label(c)).collect();
    let expected = class_set.len() as f64 / family.group_order() as f64;
    density_report(
        format!("class in {{{}}}", labels.join(",")),
        cutoff,
        field,
        Some(expected),
        family.geometric(),
        |p| match family.frobenius_class(p, field)? {
            FrobClass::Class(i) => Ok(class_set.contains(&i)),
            FrobClass::Ramified => Ok(false),
        },
    )
}

/// Constant-field class densities from the necklace counts alone: the
/// predicate depends only on `deg P`, so no enumeration is needed and the
/// cutoff can be far larger than a prime list would allow.
pub fn constant_field_density_counts(
    n: usize,
    class_set: &BTreeSet<usize>,
    cutoff: usize,
    q: u64,
) -> DensityReport {
    let labels: Vec<String> = class_set.iter().map(|c| c.to_string()).collect();
    let mut by_degree = Vec::with_capacity(cutoff);
    for d in 1..=cutoff {
        let total: usize = irreducible_count(q, d)
            .try_into()
            .unwrap_or(usize::MAX);
        let hits = if class_set.contains(&(d % n)) { total } else { 0 };
        by_degree.push((d, hits, total));
    }
    DensityReport::from_counts(
        format!("degree mod {n} in {{{}}}", labels.join(",")),
        by_degree,
        q,
        Some(class_set.len() as f64 / n as f64),
        false,
    )
}

/// One candidate's score in a root-density experiment.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateScore {
    pub name: String,
    pub hits: usize,
    pub total: usize,
    pub fraction: f64,
    /// Primes excluded from the count because the sequence is undefined
    /// there (the candidate's bad set within the cutoff).
    pub bad: Vec<String>,
    /// The minority side (hit primes if the fraction is small, miss
    /// primes if it is close to 1), listed when it has at most 32
    /// members; this is the explicit finite exception set.
    pub exceptions: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootDensityReport {
    pub root_density: DensityReport,
    pub candidates: Vec<CandidateScore>,
}

/// Compares the density of `{P : f has a root mod P}` with the densities
/// `{P : f(a_{q^{deg P}}) ≡ 0 mod P}` achieved by candidate sequences.
/// For an `f` without a root in `K` every candidate stays strictly below
/// the root density; no sequence attains the supremum.
pub fn root_density_experiment(
    f: &PolyOverK,
    candidates: &[(String, LrsSpec)],
    cutoff: usize,
    field: &FieldSpec,
) -> Result<RootDensityReport, GaloisError> {
    if !crate::polyring::is_product_of_separable(f, field)? {
        return Err(GaloisError::InseparableInput);
    }
    let root_density = density_report(
        format!("{} has a root mod P", f.format(field)),
        cutoff,
        field,
        None,
        true,
        |p| {
            let fp = ResidueField::trusted(p.clone(), field.clone());
            match crate::residue::root_count(f, &fp)? {
                AtPrime::Value(c) => Ok(c > 0),
                AtPrime::BadPrime => Ok(false),
            }
        },
    )?;
    let mut scores = Vec::with_capacity(candidates.len());
    for (name, spec) in candidates {
        let alpha = AkElement::from_lrs(spec, cutoff, field)?;
        let values = alpha.poly_eval(f)?;
        let mut hit_primes = Vec::new();
        let mut miss_primes = Vec::new();
        for (p, v) in values.entries() {
            if v.0.is_zero() {
                hit_primes.push(p.clone());
            } else {
                miss_primes.push(p.clone());
            }
        }
        let hits = hit_primes.len();
        let total = hits + miss_primes.len();
        let fraction = if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        };
        let minority = if hit_primes.len() <= miss_primes.len() {
            hit_primes
        } else {
            miss_primes
        };
        let exceptions = if minority.len() <= 32 {
            minority.iter().map(|p| p.format(field)).collect()
        } else {
            Vec::new()
        };
        scores.push(CandidateScore {
            name: name.clone(),
            hits,
            total,
            fraction,
            bad: values.bad().iter().map(|p| p.format(field)).collect(),
            exceptions,
        });
    }
    Ok(RootDensityReport {
        root_density,
        candidates: scores,
    })
}

/// The documented candidate family for root-density experiments over an
/// odd-characteristic field: diagonal constants of degree ≤ 1 together
/// with the quadratic-symbol sequences attached to `dpoly`, their shifts
/// by `±1` and their θ-multiples.
pub fn standard_candidate_family(
    dpoly: &Poly,
    field: &FieldSpec,
) -> Result<Vec<(String, LrsSpec)>, GaloisError> {
    let mut out = Vec::new();
    for c in 0..field.q() {
        let v = RationalFn::constant(field.from_u64(c), field);
        out.push((format!("const {c}"), LrsSpec::constant(v, field)));
    }
    out.push((
        "const θ".into(),
        LrsSpec::constant(RationalFn::theta(field), field),
    ));
    let base = kummer_symbol_spec(dpoly, field)?;
    let label = dpoly.format(field);
    out.push((format!("symbol({label})"), base.clone()));
    let one = RationalFn::one(field);
    out.push((
        format!("symbol({label})+1"),
        lrs::shift_by_constant(&base, &one, field)?,
    ));
    out.push((
        format!("symbol({label})-1"),
        lrs::shift_by_constant(&base, &one.neg(field), field)?,
    ));
    out.push((
        format!("θ·symbol({label})"),
        lrs::scale(&base, &RationalFn::theta(field), field)?,
    ));
    out.push((
        format!("symbol({label})²"),
        lrs::product(&base, &base, field)?,
    ));
    Ok(out)
}

/// An element with a certified annihilating polynomial and its root in K.
///
/// For a K-valued class function `g` the element `ev_L(g)` is annihilated
/// by `f = Π_c (x − g(c))` away from finitely many primes, and `g` at the
/// identity class is a root of `f` lying in `K`.
#[derive(Debug, Clone)]
pub struct CertifiedPair {
    pub alpha: AkElement,
    pub f: PolyOverK,
    pub root: RationalFn,
}

pub fn certified_pair(
    family: &GaloisFamily,
    g: &ClassFunction,
    cutoff: usize,
    field: &FieldSpec,
) -> Result<CertifiedPair, GaloisError> {
    let alpha = ev_l(family, g, cutoff, field)?;
    let mut f = PolyOverK::one(field);
    let mut seen = Vec::new();
    for v in g.values() {
        if seen.contains(v) {
            continue;
        }
        seen.push(v.clone());
        let lin = PolyOverK::from_coeffs(vec![v.neg(field), RationalFn::one(field)]);
        f = f.mul(&lin, field)?;
    }
    let root = g.value(family.identity_class()).clone();
    Ok(CertifiedPair { alpha, f, root })
}
