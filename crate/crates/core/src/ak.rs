//! Truncated residue families: one residue per monic irreducible `P` with
//! `deg P ≤ D`, plus an explicit finite set of excluded primes.
//!
//! The full object of interest is the quotient `∏_P R/(P) / ⊕_P R/(P)`,
//! where two families are identified when they agree at all but finitely
//! many primes. No finite computation sees the quotient, so the types here
//! store a window `deg P ≤ D` and phrase every claim "for all `deg P` in
//! `[d₀, D]`", with the excluded primes reported rather than hidden.

use crate::gf::FieldSpec;
use crate::lrs::{eval_at_frobenius_index, LrsError, LrsSpec};
use crate::polyring::{irreducibles_up_to, Poly, PolyError, PolyOverK, RationalFn};
use crate::residue::{reduce, AtPrime, ResidueElem, ResidueError, ResidueField};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AkError {
    #[error("operands live over different base fields")]
    FieldMismatch,
    #[error(transparent)]
    Lrs(#[from] LrsError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A family of residues indexed by the monic irreducibles of degree ≤ `D`,
/// minus a finite bad set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AkElement {
    field: FieldSpec,
    cutoff: usize,
    entries: BTreeMap<Poly, ResidueElem>,
    bad: BTreeSet<Poly>,
}

impl AkElement {
    /// Builds an element by evaluating `value_at` at every prime of degree
    /// ≤ `D`; `BadPrime` results go to the bad set.
    pub fn build(
        field: &FieldSpec,
        cutoff: usize,
        mut value_at: impl FnMut(&ResidueField) -> Result<AtPrime<ResidueElem>, AkError>,
    ) -> Result<Self, AkError> {
        let mut entries = BTreeMap::new();
        let mut bad = BTreeSet::new();
        for level in irreducibles_up_to(cutoff, field)? {
            for p in level {
                let fp = ResidueField::trusted(p.clone(), field.clone());
                match value_at(&fp)? {
                    AtPrime::Value(v) => {
                        entries.insert(p, v);
                    }
                    AtPrime::BadPrime => {
                        bad.insert(p);
                    }
                }
            }
        }
        Ok(AkElement {
            field: field.clone(),
            cutoff,
            entries,
            bad,
        })
    }

    /// The diagonal image of `c ∈ K`: `c mod P` at every prime away from
    /// the poles of `c`.
    pub fn from_rational(c: &RationalFn, cutoff: usize, field: &FieldSpec) -> Result<Self, AkError> {
        Self::build(field, cutoff, |fp| match reduce(c, fp) {
            Ok(v) => Ok(AtPrime::Value(v)),
            Err(ResidueError::DenominatorVanishes) => Ok(AtPrime::BadPrime),
            Err(e) => Err(e.into()),
        })
    }

    /// The family `(a_{q^{deg P}} mod P)_P` of a linear recurrent sequence.
    pub fn from_lrs(spec: &LrsSpec, cutoff: usize, field: &FieldSpec) -> Result<Self, AkError> {
        Self::build(field, cutoff, |fp| {
            Ok(eval_at_frobenius_index(spec, fp)?)
        })
    }

    /// Zero at every prime.
    pub fn zero(cutoff: usize, field: &FieldSpec) -> Result<Self, AkError> {
        Self::from_rational(&RationalFn::zero(field), cutoff, field)
    }

    /// The element whose value at every prime of degree `d` is `θ^{e(d)}`,
    /// where degrees are grouped in blocks of lengths 1, 2, 3, … and the
    /// exponent walks 0, 1, …, k−1 inside the block of length k. The
    /// per-degree values read 1, 1, θ, 1, θ, θ², 1, θ, θ², θ³, … so every
    /// power of θ reappears at infinitely many degrees; no diagonal element
    /// behaves like that, which is what the repeat-witness diagnostic
    /// detects.
    pub fn staircase(cutoff: usize, field: &FieldSpec) -> Result<Self, AkError> {
        let mut exponent_at = vec![0usize; cutoff + 1];
        let (mut d, mut block) = (1usize, 1usize);
        'fill: loop {
            for e in 0..block {
                if d > cutoff {
                    break 'fill;
                }
                exponent_at[d] = e;
                d += 1;
            }
            block += 1;
        }
        Self::build(field, cutoff, |fp| {
            let mut coeffs = vec![field.zero(); exponent_at[fp.degree()] + 1];
            *coeffs.last_mut().unwrap() = field.one();
            let v = fp.from_poly(&Poly::from_coeffs(coeffs))?;
            Ok(AtPrime::Value(v))
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn entries(&self) -> &BTreeMap<Poly, ResidueElem> {
        &self.entries
    }

    pub fn bad(&self) -> &BTreeSet<Poly> {
        &self.bad
    }

    pub fn entry(&self, p: &Poly) -> Option<&ResidueElem> {
        self.entries.get(p)
    }

    fn combine(
        &self,
        other: &Self,
        mut op: impl FnMut(&ResidueField, &ResidueElem, &ResidueElem) -> Result<ResidueElem, AkError>,
    ) -> Result<Self, AkError> {
        if self.field != other.field {
            return Err(AkError::FieldMismatch);
        }
        let cutoff = self.cutoff.min(other.cutoff);
        let mut entries = BTreeMap::new();
        let mut bad: BTreeSet<Poly> = self
            .bad
            .union(&other.bad)
            .filter(|p| p.degree().unwrap_or(0) <= cutoff)
            .cloned()
            .collect();
        for (p, x) in self.entries.range(..).filter(|(p, _)| {
            p.degree().unwrap_or(0) <= cutoff
        }) {
            if bad.contains(p) {
                continue;
            }
            match other.entries.get(p) {
                Some(y) => {
                    let fp = ResidueField::trusted(p.clone(), self.field.clone());
                    entries.insert(p.clone(), op(&fp, x, y)?);
                }
                None => {
                    bad.insert(p.clone());
                }
            }
        }
        Ok(AkElement {
            field: self.field.clone(),
            cutoff,
            entries,
            bad,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AkError> {
        self.combine(other, |fp, x, y| Ok(fp.add(x, y)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AkError> {
        self.combine(other, |fp, x, y| Ok(fp.sub(x, y)?))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AkError> {
        self.combine(other, |fp, x, y| Ok(fp.mul(x, y)?))
    }

    /// `k · x` for a scalar `k ∈ K`; poles of `k` join the bad set.
    pub fn scalar_mul(&self, k: &RationalFn) -> Result<Self, AkError> {
        let diag = Self::from_rational(k, self.cutoff, &self.field)?;
        self.mul(&diag)
    }

    /// Horner evaluation of `f ∈ K[x]` at this element, componentwise.
    /// Primes where a coefficient has a pole join the bad set.
    pub fn poly_eval(&self, f: &PolyOverK) -> Result<Self, AkError> {
        let mut entries = BTreeMap::new();
        let mut bad = self.bad.clone();
        'primes: for (p, x) in &self.entries {
            let fp = ResidueField::trusted(p.clone(), self.field.clone());
            let mut acc = fp.zero();
            for c in f.coeffs().iter().rev() {
                let cbar = match reduce(c, &fp) {
                    Ok(v) => v,
                    Err(ResidueError::DenominatorVanishes) => {
                        bad.insert(p.clone());
                        continue 'primes;
                    }
                    Err(e) => return Err(e.into()),
                };
                acc = fp.add(&fp.mul(&acc, x)?, &cbar)?;
            }
            entries.insert(p.clone(), acc);
        }
        Ok(AkElement {
            field: self.field.clone(),
            cutoff: self.cutoff,
            entries,
            bad,
        })
    }

    /// Whether every good-prime entry with `deg P ≥ min_degree` vanishes,
    /// together with the nonzero witnesses.
    pub fn is_zero_up_to_finite(&self, min_degree: usize) -> (bool, Vec<Poly>) {
        let witnesses: Vec<Poly> = self
            .entries
            .iter()
            .filter(|(p, v)| p.degree().unwrap_or(0) >= min_degree && !v.0.is_zero())
            .map(|(p, _)| p.clone())
            .collect();
        (witnesses.is_empty(), witnesses)
    }

    /// The transcendence red flag: polynomials `a ∈ R` with `deg a ≤
    /// max_lift_degree` that occur verbatim as the entry at two or more
    /// good primes of degree above `max_lift_degree`, sorted by occurrence
    /// count descending. A diagonal element `from_rational(a)` produces a
    /// single witness; a roster of distinct witnesses that keeps growing
    /// with the cutoff is incompatible with algebraicity over `K`.
    pub fn repeat_witnesses(&self, max_lift_degree: usize) -> Vec<(Poly, usize)> {
        let mut counts: BTreeMap<Poly, usize> = BTreeMap::new();
        for (p, v) in &self.entries {
            if p.degree().unwrap_or(0) <= max_lift_degree {
                continue;
            }
            // deg v < deg P, so v is its own lift exactly when its degree
            // is within the search bound
            if v.0.degree().map_or(true, |d| d <= max_lift_degree) {
                *counts.entry(v.0.clone()).or_insert(0) += 1;
            }
        }
        let mut out: Vec<(Poly, usize)> = counts.into_iter().filter(|(_, c)| *c >= 2).collect();
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|(p, v)| {
                serde_json::json!({
                    "P": p.to_ints(&self.field),
                    "value": v.0.to_ints(&self.field),
                })
            })
            .collect();
        serde_json::json!({
            "field": self.field,
            "cutoff": self.cutoff,
            "bad": self.bad.iter().map(|p| p.to_ints(&self.field)).collect::<Vec<_>>(),
            "entries": entries,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,P,value\n");
        for (p, v) in &self.entries {
            out.push_str(&format!(
                "{},{},{}\n",
                p.degree().unwrap_or(0),
                p.format(&self.field),
                v.0.format(&self.field)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrs;
    use crate::residue::legendre_symbol;
    use rand::{Rng, SeedableRng};

    fn f3() -> FieldSpec {
        FieldSpec::prime(3).unwrap()
    }

    fn legendre_spec(f: &FieldSpec) -> LrsSpec {
        LrsSpec::new(
            vec![RationalFn::zero(f), RationalFn::theta(f)],
            vec![RationalFn::one(f), RationalFn::zero(f)],
            1,
        )
        .unwrap()
    }

    fn parity_spec(f: &FieldSpec) -> LrsSpec {
        let q = f.q() as usize;
        LrsSpec::new(vec![RationalFn::one(f); q], vec![RationalFn::one(f); q], 0).unwrap()
    }

    fn rand_rational(rng: &mut rand_chacha::ChaCha8Rng, f: &FieldSpec) -> RationalFn {
        let q = f.q();
        let num = Poly::from_ints(f, &(0..3).map(|_| rng.gen_range(0..q)).collect::<Vec<_>>());
        let mut den = Poly::from_ints(f, &(0..2).map(|_| rng.gen_range(0..q)).collect::<Vec<_>>());
        if den.is_zero() {
            den = Poly::one(f);
        }
        RationalFn::new(num, den, f).unwrap()
    }

    #[test]
    fn from_rational_examples() {
        let f = f3();
        let zero = AkElement::from_rational(&RationalFn::zero(&f), 3, &f).unwrap();
        assert!(zero.entries().values().all(|v| v.0.is_zero()));
        assert!(zero.bad().is_empty());

        let inv_theta =
            RationalFn::new(Poly::one(&f), Poly::theta(&f), &f).unwrap();
        let x = AkElement::from_rational(&inv_theta, 3, &f).unwrap();
        assert_eq!(x.bad().len(), 1);
        assert!(x.bad().contains(&Poly::theta(&f)));
        for (p, v) in x.entries() {
            let fp = ResidueField::trusted(p.clone(), f.clone());
            let prod = fp.mul(v, &fp.from_poly(&Poly::theta(&f)).unwrap()).unwrap();
            assert_eq!(prod, fp.one());
        }

        // θ ≡ −1 = 2 mod θ+1
        let diag = AkElement::from_rational(&RationalFn::theta(&f), 2, &f).unwrap();
        let p = Poly::from_ints(&f, &[1, 1]);
        assert_eq!(diag.entry(&p).unwrap().0, Poly::from_ints(&f, &[2]));
    }

    #[test]
    fn from_lrs_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let alpha = AkElement::from_lrs(&parity_spec(&f2), 5, &f2).unwrap();
        assert!(alpha.bad().is_empty());
        for (p, v) in alpha.entries() {
            let d = p.degree().unwrap();
            let expected = if (1 + d) % 2 == 0 {
                Poly::zero()
            } else {
                Poly::one(&f2)
            };
            assert_eq!(v.0, expected, "degree {d}");
        }

        let f = f3();
        let alpha = AkElement::from_lrs(&legendre_spec(&f), 5, &f).unwrap();
        assert!(alpha.bad().is_empty());
        for (p, v) in alpha.entries() {
            let fp = ResidueField::trusted(p.clone(), f.clone());
            let sym = legendre_symbol(&RationalFn::theta(&f), &fp).unwrap();
            let expected = match sym {
                0 => fp.zero(),
                1 => fp.one(),
                _ => fp.neg(&fp.one()),
            };
            assert_eq!(*v, expected, "at {}", p.format(&f));
        }
        // θ itself is a good prime with entry 0
        assert!(alpha.entry(&Poly::theta(&f)).unwrap().0.is_zero());

        let one_seq = LrsSpec::constant(RationalFn::one(&f), &f);
        assert_eq!(
            AkElement::from_lrs(&one_seq, 4, &f).unwrap(),
            AkElement::from_rational(&RationalFn::one(&f), 4, &f).unwrap()
        );
    }

    #[test]
    fn arith_examples() {
        let f = f3();
        let alpha = AkElement::from_lrs(&legendre_spec(&f), 5, &f).unwrap();
        let zero = AkElement::zero(5, &f).unwrap();
        assert_eq!(alpha.add(&zero).unwrap(), alpha);

        // symbol values square to 1 away from θ
        let sq = alpha.mul(&alpha).unwrap();
        let one = AkElement::from_rational(&RationalFn::one(&f), 5, &f).unwrap();
        let diff = sq.sub(&one).unwrap();
        let (ok, witnesses) = diff.is_zero_up_to_finite(2);
        assert!(ok, "witnesses: {witnesses:?}");
        assert_eq!(diff.entries()[&Poly::theta(&f)].0, Poly::from_ints(&f, &[2]));

        let scaled = one.scalar_mul(&RationalFn::theta(&f)).unwrap();
        assert_eq!(
            scaled,
            AkElement::from_rational(&RationalFn::theta(&f), 5, &f).unwrap()
        );
    }

    #[test]
    fn poly_eval_examples() {
        let f = f3();
        let alpha = AkElement::from_lrs(&legendre_spec(&f), 5, &f).unwrap();
        // x² − 1
        let x2m1 = PolyOverK::from_coeffs(vec![
            RationalFn::one(&f).neg(&f),
            RationalFn::zero(&f),
            RationalFn::one(&f),
        ]);
        let v = alpha.poly_eval(&x2m1).unwrap();
        let (ok, _) = v.is_zero_up_to_finite(2);
        assert!(ok);
        assert!(!v.entries()[&Poly::theta(&f)].0.is_zero());

        let f2 = FieldSpec::prime(2).unwrap();
        let beta = AkElement::from_lrs(&parity_spec(&f2), 6, &f2).unwrap();
        // x² + x kills both values 0 and 1
        let x2px = PolyOverK::from_coeffs(vec![
            RationalFn::zero(&f2),
            RationalFn::one(&f2),
            RationalFn::one(&f2),
        ]);
        let (ok, _) = beta.poly_eval(&x2px).unwrap().is_zero_up_to_finite(1);
        assert!(ok);

        let z = alpha.poly_eval(&PolyOverK::zero()).unwrap();
        assert!(z.is_zero_up_to_finite(1).0);

        // a coefficient pole lands in the bad set
        let pole = PolyOverK::from_coeffs(vec![
            RationalFn::new(Poly::one(&f), Poly::theta(&f), &f).unwrap(),
            RationalFn::one(&f),
        ]);
        let w = alpha.poly_eval(&pole).unwrap();
        assert!(w.bad().contains(&Poly::theta(&f)));
    }

    #[test]
    fn zero_up_to_finite_examples() {
        let f = f3();
        let one = AkElement::from_rational(&RationalFn::one(&f), 4, &f).unwrap();
        let (ok, witnesses) = one.is_zero_up_to_finite(1);
        assert!(!ok);
        assert_eq!(witnesses.len(), one.entries().len());
        assert!(AkElement::zero(4, &f).unwrap().is_zero_up_to_finite(1).0);
    }

    #[test]
    fn repeat_witnesses_examples() {
        let f = f3();
        let stair = AkElement::staircase(10, &f).unwrap();
        let witnesses = stair.repeat_witnesses(3);
        assert!(witnesses.len() >= 3, "got {witnesses:?}");
        let names: Vec<Poly> = witnesses.iter().map(|(a, _)| a.clone()).collect();
        assert!(names.contains(&Poly::one(&f)));
        assert!(names.contains(&Poly::theta(&f)));
        assert!(names.contains(&Poly::from_ints(&f, &[0, 0, 1])));

        let diag = AkElement::from_rational(&RationalFn::theta(&f), 8, &f).unwrap();
        let witnesses = diag.repeat_witnesses(3);
        assert_eq!(witnesses.len(), 1);
        assert_eq!(witnesses[0].0, Poly::theta(&f));
        let high_primes: usize = stair
            .entries()
            .keys()
            .filter(|p| p.degree().unwrap() > 3 && p.degree().unwrap() <= 8)
            .count();
        assert_eq!(witnesses[0].1, high_primes);

        let alpha = AkElement::from_lrs(&legendre_spec(&f), 6, &f).unwrap();
        let witnesses = alpha.repeat_witnesses(3);
        let names: BTreeSet<Poly> = witnesses.iter().map(|(a, _)| a.clone()).collect();
        let expected: BTreeSet<Poly> =
            [Poly::one(&f), Poly::from_ints(&f, &[2])].into_iter().collect();
        assert_eq!(names, expected);
    }

    #[test]
    fn staircase_per_degree_values() {
        let f = f3();
        let stair = AkElement::staircase(6, &f).unwrap();
        let expected_exponents = [0usize, 0, 0, 1, 0, 1, 2];
        for (p, v) in stair.entries() {
            let d = p.degree().unwrap();
            let e = expected_exponents[d];
            let mut coeffs = vec![f.zero(); e + 1];
            coeffs[e] = f.one();
            assert_eq!(v.0, Poly::from_coeffs(coeffs), "degree {d}");
        }
    }

    #[test]
    fn ring_laws_random() {
        let f = f3();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let x = AkElement::from_rational(&rand_rational(&mut rng, &f), 3, &f).unwrap();
            let y = AkElement::from_rational(&rand_rational(&mut rng, &f), 3, &f).unwrap();
            let z = AkElement::from_rational(&rand_rational(&mut rng, &f), 3, &f).unwrap();
            assert_eq!(
                x.add(&y).unwrap().add(&z).unwrap(),
                x.add(&y.add(&z).unwrap()).unwrap()
            );
            let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
            let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn from_rational_is_multiplicative() {
        let f = f3();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let a = rand_rational(&mut rng, &f);
            let b = rand_rational(&mut rng, &f);
            let prod = AkElement::from_rational(&a.mul(&b, &f).unwrap(), 3, &f).unwrap();
            let xy = AkElement::from_rational(&a, 3, &f)
                .unwrap()
                .mul(&AkElement::from_rational(&b, 3, &f).unwrap())
                .unwrap();
            for (p, v) in xy.entries() {
                assert_eq!(prod.entry(p), Some(v));
            }
        }
    }

    #[test]
    fn shifted_window_gives_equal_element() {
        // re-basing the initial window onto a later index leaves the tail,
        // hence the whole family at good primes, unchanged
        let f = f3();
        let spec = legendre_spec(&f);
        let shifted = LrsSpec::new(
            spec.coeffs().to_vec(),
            vec![
                lrs::term(&spec, 5, &f).unwrap(),
                lrs::term(&spec, 6, &f).unwrap(),
            ],
            5,
        )
        .unwrap();
        let x = AkElement::from_lrs(&spec, 4, &f).unwrap();
        let y = AkElement::from_lrs(&shifted, 4, &f).unwrap();
        let (ok, witnesses) = x.sub(&y).unwrap().is_zero_up_to_finite(2);
        assert!(ok, "witnesses: {witnesses:?}");
    }

    #[test]
    fn json_and_csv_dumps() {
        let f = f3();
        let x = AkElement::from_rational(
            &RationalFn::new(Poly::one(&f), Poly::theta(&f), &f).unwrap(),
            2,
            &f,
        )
        .unwrap();
        let j = x.to_json();
        assert_eq!(j["cutoff"], 2);
        assert_eq!(j["bad"].as_array().unwrap().len(), 1);
        let csv = x.to_csv();
        assert!(csv.starts_with("degree,P,value\n"));
        assert_eq!(csv.lines().count(), 1 + x.entries().len());
    }
}
