//! Residue fields `F_P = R/(P) ≅ F_{q^d}` for monic irreducible `P`,
//! reduction of rationals, big-exponent powering, Legendre symbols and
//! root counting/finding modulo `P`.

use crate::gf::{Exponent, FieldSpec};
use crate::polyring::{is_irreducible, Poly, PolyError, PolyOverK, RationalFn};
use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResidueError {
    #[error("denominator vanishes modulo P")]
    DenominatorVanishes,
    #[error("modulus is not a monic irreducible polynomial")]
    NotIrreducible,
    #[error("Legendre symbol requires odd q")]
    EvenCharacteristic,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("root finding in characteristic 2 is exhaustive and limited to q^d <= 2^16")]
    SplitterUnsupported,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Outcome of a per-prime computation: either a value, or the marker that
/// `P` is one of the finitely many excluded primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtPrime<T> {
    Value(T),
    BadPrime,
}

impl<T> AtPrime<T> {
    pub fn value(self) -> Option<T> {
        match self {
            AtPrime::Value(v) => Some(v),
            AtPrime::BadPrime => None,
        }
    }

    pub fn as_ref(&self) -> AtPrime<&T> {
        match self {
            AtPrime::Value(v) => AtPrime::Value(v),
            AtPrime::BadPrime => AtPrime::BadPrime,
        }
    }

    pub fn is_bad(&self) -> bool {
        matches!(self, AtPrime::BadPrime)
    }
}

/// The residue field `R/(P)` for a monic irreducible `P` of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    modulus: Poly,
    d: usize,
    field: FieldSpec,
}

/// Element of `R/(P)`: representative of degree `< d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueElem(pub Poly);

impl ResidueField {
    pub fn new(modulus: Poly, field: FieldSpec) -> Result<Self, ResidueError> {
        if !modulus.is_monic(&field) || !is_irreducible(&modulus, &field).unwrap_or(false) {
            return Err(ResidueError::NotIrreducible);
        }
        Ok(Self::trusted(modulus, field))
    }

    /// Skips the irreducibility check; for bulk construction from an
    /// enumeration that already guarantees it.
    pub fn trusted(modulus: Poly, field: FieldSpec) -> Self {
        let d = modulus.degree().expect("nonzero modulus");
        debug_assert!(d >= 1);
        ResidueField { modulus, d, field }
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// `q^d`, the order of the residue field.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.field.q()).pow(self.d as u32)
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem(Poly::zero())
    }

    pub fn one(&self) -> ResidueElem {
        ResidueElem(Poly::one(&self.field))
    }

    pub fn from_poly(&self, p: &Poly) -> Result<ResidueElem, ResidueError> {
        Ok(ResidueElem(p.rem(&self.modulus, &self.field)?))
    }

    pub fn is_zero(&self, a: &ResidueElem) -> bool {
        a.0.is_zero()
    }

    pub fn add(&self, a: &ResidueElem, b: &ResidueElem) -> Result<ResidueElem, ResidueError> {
        Ok(ResidueElem(a.0.add(&b.0, &self.field)?))
    }

    pub fn sub(&self, a: &ResidueElem, b: &ResidueElem) -> Result<ResidueElem, ResidueError> {
        Ok(ResidueElem(a.0.sub(&b.0, &self.field)?))
    }

    pub fn neg(&self, a: &ResidueElem) -> ResidueElem {
        ResidueElem(a.0.neg(&self.field))
    }

    pub fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> Result<ResidueElem, ResidueError> {
        Ok(ResidueElem(
            a.0.mul(&b.0, &self.field)?.rem(&self.modulus, &self.field)?,
        ))
    }

    pub fn inv(&self, a: &ResidueElem) -> Result<ResidueElem, ResidueError> {
        if self.is_zero(a) {
            return Err(ResidueError::DenominatorVanishes);
        }
        let (g, s, _) = Poly::ext_gcd(&a.0, &self.modulus, &self.field)?;
        debug_assert_eq!(g.degree(), Some(0));
        Ok(ResidueElem(s.rem(&self.modulus, &self.field)?))
    }

    /// Square-and-multiply over the binary digits of `e`; `a^0 = 1`.
    pub fn pow(&self, a: &ResidueElem, e: &Exponent) -> Result<ResidueElem, ResidueError> {
        let e = e.to_biguint();
        let mut result = self.one();
        let mut base = a.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = self.mul(&result, &base)?;
            }
            if i + 1 < bits {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// All `q^d` residues in ascending order (small fields only).
    pub fn elements(&self) -> Vec<ResidueElem> {
        let fq = self.field.elements();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.d];
        loop {
            let coeffs: Vec<_> = idx.iter().map(|&i| fq[i].clone()).collect();
            out.push(ResidueElem(Poly::from_coeffs(coeffs)));
            let mut i = 0;
            loop {
                if i == self.d {
                    out.sort();
                    return out;
                }
                idx[i] += 1;
                if idx[i] < fq.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
}

/// `num·den⁻¹ mod P`; fails when `P` divides the denominator.
pub fn reduce(c: &RationalFn, fp: &ResidueField) -> Result<ResidueElem, ResidueError> {
    let den = fp.from_poly(c.den())?;
    if fp.is_zero(&den) {
        return Err(ResidueError::DenominatorVanishes);
    }
    let num = fp.from_poly(c.num())?;
    fp.mul(&num, &fp.inv(&den)?)
}

/// Euler-criterion Legendre symbol `(c/P) ∈ {−1, 0, +1}` for odd `q`.
pub fn legendre_symbol(c: &RationalFn, fp: &ResidueField) -> Result<i32, ResidueError> {
    if fp.field().q() % 2 == 0 {
        return Err(ResidueError::EvenCharacteristic);
    }
    let a = reduce(c, fp)?;
    if fp.is_zero(&a) {
        return Ok(0);
    }
    let e = (fp.order() - BigUint::one()) / BigUint::from(2u32);
    let r = fp.pow(&a, &Exponent::Int(e))?;
    if r == fp.one() {
        Ok(1)
    } else {
        debug_assert_eq!(r, fp.neg(&fp.one()));
        Ok(-1)
    }
}

// ---------------------------------------------------------------------------
// Polynomials over the residue field (dense, coefficients are residues).

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RPoly(pub Vec<ResidueElem>);

impl RPoly {
    pub fn from_coeffs(mut coeffs: Vec<ResidueElem>, fp: &ResidueField) -> Self {
        while coeffs.last().map(|c| fp.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        RPoly(coeffs)
    }

    pub fn zero() -> Self {
        RPoly(vec![])
    }

    pub fn one(fp: &ResidueField) -> Self {
        RPoly(vec![fp.one()])
    }

    pub fn x(fp: &ResidueField) -> Self {
        RPoly(vec![fp.zero(), fp.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize, fp: &ResidueField) -> ResidueElem {
        self.0.get(i).cloned().unwrap_or_else(|| fp.zero())
    }

    pub fn sub(&self, other: &Self, fp: &ResidueField) -> Result<Self, ResidueError> {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(fp.sub(&self.coeff(i, fp), &other.coeff(i, fp))?);
        }
        Ok(RPoly::from_coeffs(out, fp))
    }

    pub fn mul(&self, other: &Self, fp: &ResidueField) -> Result<Self, ResidueError> {
        if self.is_zero() || other.is_zero() {
            return Ok(RPoly::zero());
        }
        let mut out = vec![fp.zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if fp.is_zero(a) {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                let prod = fp.mul(a, b)?;
                out[i + j] = fp.add(&out[i + j], &prod)?;
            }
        }
        Ok(RPoly::from_coeffs(out, fp))
    }

    pub fn divrem(&self, other: &Self, fp: &ResidueField) -> Result<(Self, Self), ResidueError> {
        let bd = other.degree().ok_or(ResidueError::ZeroPolynomial)?;
        let lead_inv = fp.inv(&other.0[bd])?;
        let mut rem = self.0.clone();
        let mut quot = vec![fp.zero(); self.0.len().saturating_sub(bd)];
        loop {
            let d = match rem.iter().rposition(|c| !fp.is_zero(c)) {
                Some(d) if d >= bd => d,
                _ => break,
            };
            let factor = fp.mul(&rem[d], &lead_inv)?;
            let shift = d - bd;
            quot[shift] = factor.clone();
            for i in 0..=bd {
                let sub = fp.mul(&factor, &other.0[i])?;
                rem[i + shift] = fp.sub(&rem[i + shift], &sub)?;
            }
        }
        Ok((RPoly::from_coeffs(quot, fp), RPoly::from_coeffs(rem, fp)))
    }

    pub fn rem(&self, other: &Self, fp: &ResidueField) -> Result<Self, ResidueError> {
        Ok(self.divrem(other, fp)?.1)
    }

    pub fn monic(&self, fp: &ResidueField) -> Result<Self, ResidueError> {
        match self.degree() {
            None => Ok(RPoly::zero()),
            Some(d) => {
                let inv = fp.inv(&self.0[d])?;
                let mut out = Vec::with_capacity(self.0.len());
                for c in &self.0 {
                    out.push(fp.mul(c, &inv)?);
                }
                Ok(RPoly::from_coeffs(out, fp))
            }
        }
    }

    pub fn gcd(a: &Self, b: &Self, fp: &ResidueField) -> Result<Self, ResidueError> {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        while !r1.is_zero() {
            let r = r0.rem(&r1, fp)?;
            r0 = r1;
            r1 = r;
        }
        r0.monic(fp)
    }

    pub fn powmod(&self, base: &Self, e: &BigUint, fp: &ResidueField) -> Result<Self, ResidueError> {
        let mut result = RPoly::one(fp).rem(self, fp)?;
        if *e == BigUint::from(0u32) {
            return Ok(result);
        }
        let mut b = base.rem(self, fp)?;
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&b, fp)?.rem(self, fp)?;
            }
            if i + 1 < bits {
                b = b.mul(&b, fp)?.rem(self, fp)?;
            }
        }
        Ok(result)
    }

    pub fn eval(&self, x: &ResidueElem, fp: &ResidueField) -> Result<ResidueElem, ResidueError> {
        let mut acc = fp.zero();
        for c in self.0.iter().rev() {
            acc = fp.add(&fp.mul(&acc, x)?, c)?;
        }
        Ok(acc)
    }
}

/// Reduces `f ∈ K[x]` coefficientwise mod `P`. `BadPrime` when a coefficient
/// denominator or the leading coefficient vanishes.
pub(crate) fn reduce_poly_over_k(
    f: &PolyOverK,
    fp: &ResidueField,
) -> Result<AtPrime<RPoly>, ResidueError> {
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        match reduce(c, fp) {
            Ok(r) => coeffs.push(r),
            Err(ResidueError::DenominatorVanishes) => return Ok(AtPrime::BadPrime),
            Err(e) => return Err(e),
        }
    }
    let rp = RPoly::from_coeffs(coeffs, fp);
    if rp.degree() != f.degree() {
        // leading coefficient vanished mod P
        return Ok(AtPrime::BadPrime);
    }
    Ok(AtPrime::Value(rp))
}

/// The monic product of the distinct linear factors of `f mod P`, computed
/// as `gcd(f mod P, x^{q^d} − x)` with the power reduced by modular
/// exponentiation.
fn linear_part(f: &PolyOverK, fp: &ResidueField) -> Result<AtPrime<RPoly>, ResidueError> {
    if f.is_zero() {
        return Err(ResidueError::ZeroPolynomial);
    }
    let fbar = match reduce_poly_over_k(f, fp)? {
        AtPrime::Value(v) => v,
        AtPrime::BadPrime => return Ok(AtPrime::BadPrime),
    };
    if fbar.degree() == Some(0) || fbar.is_zero() {
        return Ok(AtPrime::Value(RPoly::one(fp)));
    }
    let xq = fbar.powmod(&RPoly::x(fp), &fp.order(), fp)?;
    let diff = xq.sub(&RPoly::x(fp), fp)?;
    let g = RPoly::gcd(&fbar, &diff, fp)?;
    Ok(AtPrime::Value(g))
}

/// Number of distinct roots of `f mod P` in `R/(P)`.
pub fn root_count(f: &PolyOverK, fp: &ResidueField) -> Result<AtPrime<usize>, ResidueError> {
    Ok(match linear_part(f, fp)? {
        AtPrime::Value(g) => AtPrime::Value(g.degree().unwrap_or(0)),
        AtPrime::BadPrime => AtPrime::BadPrime,
    })
}

/// All distinct roots of `f mod P`, via equal-degree splitting of the linear
/// part (random-shift quadratic-residue splitter for odd `q`; exhaustive
/// search for even `q` with `q^d ≤ 2^16`). The generator is taken by value,
/// so concurrent calls never contend.
pub fn find_roots(
    f: &PolyOverK,
    fp: &ResidueField,
    mut rng: ChaCha8Rng,
) -> Result<AtPrime<Vec<ResidueElem>>, ResidueError> {
    let g = match linear_part(f, fp)? {
        AtPrime::Value(g) => g,
        AtPrime::BadPrime => return Ok(AtPrime::BadPrime),
    };
    let mut roots = Vec::new();
    if fp.field().q() % 2 == 0 {
        let order = fp.order();
        if order > BigUint::from(1u32 << 16) {
            return Err(ResidueError::SplitterUnsupported);
        }
        for a in fp.elements() {
            if fp.is_zero(&g.eval(&a, fp)?) {
                roots.push(a);
            }
        }
    } else {
        split_linear(&g, fp, &mut rng, &mut roots)?;
    }
    roots.sort();
    Ok(AtPrime::Value(roots))
}

/// `find_roots` with the default fixed seed 0.
pub fn find_roots_default(
    f: &PolyOverK,
    fp: &ResidueField,
) -> Result<AtPrime<Vec<ResidueElem>>, ResidueError> {
    find_roots(f, fp, ChaCha8Rng::seed_from_u64(0))
}

fn split_linear(
    g: &RPoly,
    fp: &ResidueField,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<ResidueElem>,
) -> Result<(), ResidueError> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            // monic x + c, root is −c
            out.push(fp.neg(&g.0[0]));
            return Ok(());
        }
        _ => {}
    }
    // roots of g are distinct elements of F_P; (x+a)^{(q^d−1)/2} ± 1 splits them
    let e = (fp.order() - BigUint::one()) / BigUint::from(2u32);
    loop {
        let shift = random_residue(fp, rng);
        let xa = RPoly::from_coeffs(vec![shift, fp.one()], fp);
        let pw = g.powmod(&xa, &e, fp)?;
        let h = RPoly::gcd(&pw.sub(&RPoly::one(fp), fp)?, g, fp)?;
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < g.degree().unwrap() {
            let (other, r) = g.divrem(&h, fp)?;
            debug_assert!(r.is_zero());
            split_linear(&h, fp, rng, out)?;
            split_linear(&other, fp, rng, out)?;
            return Ok(());
        }
    }
}

fn random_residue(fp: &ResidueField, rng: &mut ChaCha8Rng) -> ResidueElem {
    let p = fp.field().p();
    let r = fp.field().r();
    let coeffs = (0..fp.degree())
        .map(|_| {
            let digits = (0..r).map(|_| rng.gen_range(0..p)).collect();
            crate::gf::FqElem(digits)
        })
        .collect();
    ResidueElem(Poly::from_coeffs(coeffs))
}
