//! The polynomial ring `R = F_q[θ]`, the fraction field `K = F_q(θ)`,
//! irreducibility and enumeration of monic irreducibles, and the
//! characteristic-`p` "product of separable polynomials" test.

use crate::gf::{Exponent, FieldSpec, FqElem, GfError};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("operation requires a non-constant polynomial")]
    ConstantInput,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Element of `R = F_q[θ]`: ascending coefficients, trailing zeros stripped;
/// the zero polynomial is the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Poly::constant(field.one())
    }

    pub fn theta(field: &FieldSpec) -> Self {
        Poly {
            coeffs: vec![field.zero(), field.one()],
        }
    }

    pub fn constant(c: FqElem) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Self {
        while coeffs
            .last()
            .map(|c| c.0.iter().all(|&x| x == 0))
            .unwrap_or(false)
        {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds a polynomial from base-`p` encoded integer coefficients:
    /// the integer `n` stands for the field element `Σ n_i u^i` with `n_i`
    /// the base-`p` digits of `n`.
    pub fn from_ints(field: &FieldSpec, ints: &[u64]) -> Self {
        let coeffs = ints
            .iter()
            .map(|&n| {
                let mut digits = vec![0u64; field.r()];
                let mut m = n;
                for d in digits.iter_mut() {
                    *d = m % field.p();
                    m /= field.p();
                }
                FqElem(digits)
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Inverse of [`Poly::from_ints`].
    pub fn to_ints(&self, field: &FieldSpec) -> Vec<u64> {
        self.coeffs
            .iter()
            .map(|c| {
                c.0.iter()
                    .rev()
                    .fold(0u64, |acc, &d| acc * field.p() + d)
            })
            .collect()
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, field: &FieldSpec) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, field: &FieldSpec) -> bool {
        self.leading() == Some(&field.one())
    }

    pub fn add(&self, other: &Poly, field: &FieldSpec) -> Result<Poly, PolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(&self.coeff(i, field), &other.coeff(i, field))?);
        }
        Ok(Poly::from_coeffs(out))
    }

    pub fn sub(&self, other: &Poly, field: &FieldSpec) -> Result<Poly, PolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.sub(&self.coeff(i, field), &other.coeff(i, field))?);
        }
        Ok(Poly::from_coeffs(out))
    }

    pub fn neg(&self, field: &FieldSpec) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly, field: &FieldSpec) -> Result<Poly, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = field.mul(a, b)?;
                out[i + j] = field.add(&out[i + j], &prod)?;
            }
        }
        Ok(Poly::from_coeffs(out))
    }

    pub fn scale(&self, c: &FqElem, field: &FieldSpec) -> Result<Poly, PolyError> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(field.mul(a, c)?);
        }
        Ok(Poly::from_coeffs(out))
    }

    /// Exact division with remainder: `self = q·other + r`, `deg r < deg other`.
    pub fn divrem(&self, other: &Poly, field: &FieldSpec) -> Result<(Poly, Poly), PolyError> {
        let bd = other.degree().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = field.inv(other.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); self.coeffs.len().saturating_sub(bd)];
        loop {
            let d = match rem.iter().rposition(|c| !field.is_zero(c)) {
                Some(d) if d >= bd => d,
                _ => break,
            };
            let factor = field.mul(&rem[d], &lead_inv)?;
            let shift = d - bd;
            quot[shift] = factor.clone();
            for i in 0..=bd {
                let sub = field.mul(&factor, &other.coeffs[i])?;
                rem[i + shift] = field.sub(&rem[i + shift], &sub)?;
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, other: &Poly, field: &FieldSpec) -> Result<Poly, PolyError> {
        Ok(self.divrem(other, field)?.1)
    }

    pub fn monic(&self, field: &FieldSpec) -> Result<Poly, PolyError> {
        match self.leading() {
            None => Ok(Poly::zero()),
            Some(l) => self.scale(&field.inv(l)?, field),
        }
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(a: &Poly, b: &Poly, field: &FieldSpec) -> Result<Poly, PolyError> {
        if a.is_zero() && b.is_zero() {
            return Err(PolyError::BothZero);
        }
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        while !r1.is_zero() {
            let r = r0.rem(&r1, field)?;
            r0 = r1;
            r1 = r;
        }
        r0.monic(field)
    }

    /// Extended gcd: returns `(g, s, t)` monic with `g = s·a + t·b`.
    pub fn ext_gcd(a: &Poly, b: &Poly, field: &FieldSpec) -> Result<(Poly, Poly, Poly), PolyError> {
        if a.is_zero() && b.is_zero() {
            return Err(PolyError::BothZero);
        }
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = Poly::one(field);
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one(field);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, field)?;
            let ns = s0.sub(&q.mul(&s1, field)?, field)?;
            let nt = t0.sub(&q.mul(&t1, field)?, field)?;
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        let lead_inv = field.inv(r0.leading().unwrap())?;
        Ok((
            r0.scale(&lead_inv, field)?,
            s0.scale(&lead_inv, field)?,
            t0.scale(&lead_inv, field)?,
        ))
    }

    pub fn eval(&self, x: &FqElem, field: &FieldSpec) -> Result<FqElem, PolyError> {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x)?, c)?;
        }
        Ok(acc)
    }

    /// `x^e mod self` by square-and-multiply.
    pub fn powmod_x(&self, e: &BigUint, field: &FieldSpec) -> Result<Poly, PolyError> {
        let x = Poly::theta(field);
        self.powmod(&x, e, field)
    }

    /// `base^e mod self`.
    pub fn powmod(&self, base: &Poly, e: &BigUint, field: &FieldSpec) -> Result<Poly, PolyError> {
        if self.degree().is_none() {
            return Err(PolyError::DivisionByZero);
        }
        let mut result = Poly::one(field).rem(self, field)?;
        if e.is_zero() {
            return Ok(result);
        }
        let mut b = base.rem(self, field)?;
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&b, field)?.rem(self, field)?;
            }
            if i + 1 < bits {
                b = b.mul(&b, field)?.rem(self, field)?;
            }
        }
        Ok(result)
    }

    /// Pretty form like `θ^2+2θ+1`.
    pub fn format(&self, field: &FieldSpec) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if field.is_zero(c) {
                continue;
            }
            let cs = field.format(c);
            let term = match i {
                0 => cs,
                _ => {
                    let var = if i == 1 { "θ".to_string() } else { format!("θ^{i}") };
                    if cs == "1" {
                        var
                    } else if cs.contains('+') {
                        format!("({cs}){var}")
                    } else {
                        format!("{cs}{var}")
                    }
                }
            };
            parts.push(term);
        }
        parts.join("+")
    }
}

// Canonical ordering: degree first, then lexicographic on the ascending
// coefficient list (each FqElem by its ascending F_p coefficient list).
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Rabin's irreducibility test over `F_q`.
pub fn is_irreducible(f: &Poly, field: &FieldSpec) -> Result<bool, PolyError> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(PolyError::ConstantInput),
    };
    if d == 1 {
        return Ok(true);
    }
    let q = field.q();
    let x = Poly::theta(field);
    let xq = f.powmod_x(&Exponent::q_pow(q, d as u32).to_biguint(), field)?;
    if !xq.sub(&x, field)?.is_zero() {
        return Ok(false);
    }
    for l in crate::gf::prime_factors(d as u64) {
        let e = Exponent::q_pow(q, (d as u64 / l) as u32).to_biguint();
        let xe = f.powmod_x(&e, field)?;
        let diff = xe.sub(&x, field)?;
        let g = Poly::gcd(&diff, f, field)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All monic polynomials of degree exactly `d`, ascending lex order on the
/// ascending coefficient list.
pub fn monic_polys(d: usize, field: &FieldSpec) -> Vec<Poly> {
    let els = field.elements();
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let mut coeffs: Vec<FqElem> = idx.iter().map(|&i| els[i].clone()).collect();
        coeffs.push(field.one());
        out.push(Poly { coeffs });
        // lex order: index 0 is the most significant position
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < els.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// All monic irreducibles of degree exactly `d`, lex order, via per-polynomial
/// Rabin tests. For bulk enumeration across all degrees use
/// [`irreducibles_up_to`].
pub fn enumerate_monic_irreducibles(d: usize, field: &FieldSpec) -> Result<Vec<Poly>, PolyError> {
    if d == 0 {
        return Err(PolyError::ConstantInput);
    }
    let mut out = Vec::new();
    for f in monic_polys(d, field) {
        if is_irreducible(&f, field)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Sieve enumeration of all monic irreducibles of degree `1..=dmax`,
/// returned per degree in lex order. Marks products of smaller irreducibles
/// instead of running a point test per polynomial.
pub fn irreducibles_up_to(dmax: usize, field: &FieldSpec) -> Result<Vec<Vec<Poly>>, PolyError> {
    let mut by_degree: Vec<Vec<Poly>> = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let mut reducible: HashSet<Poly> = HashSet::new();
        for irr_list in by_degree.iter().take(d / 2) {
            for p in irr_list {
                let dp = p.degree().unwrap();
                for g in monic_polys(d - dp, field) {
                    reducible.insert(p.mul(&g, field)?);
                }
            }
        }
        let mut irr = Vec::new();
        for f in monic_polys(d, field) {
            if !reducible.contains(&f) {
                irr.push(f);
            }
        }
        by_degree.push(irr);
    }
    Ok(by_degree)
}

/// Möbius necklace count of monic irreducibles of degree `d` over `F_q`:
/// `(1/d) Σ_{e|d} μ(e) q^{d/e}`.
pub fn irreducible_count(q: u64, d: usize) -> u64 {
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let mu = moebius(e as u64);
        if mu == 0 {
            continue;
        }
        total += mu as i128 * (q as i128).pow((d / e) as u32);
    }
    (total / d as i128) as u64
}

fn moebius(n: u64) -> i64 {
    let mut m = n;
    let mut count = 0;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            count += 1;
        }
        d += 1;
    }
    if m > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// The fraction field K = F_q(θ).

/// Element of `K = F_q(θ)` in lowest terms: monic denominator, coprime to the
/// numerator; zero is `0/1`. Normalization is eager so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly, field: &FieldSpec) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFn {
                num: Poly::zero(),
                den: Poly::one(field),
            });
        }
        let g = Poly::gcd(&num, &den, field)?;
        let (num, _) = num.divrem(&g, field)?;
        let (den, _) = den.divrem(&g, field)?;
        let lead_inv = field.inv(den.leading().unwrap())?;
        Ok(RationalFn {
            num: num.scale(&lead_inv, field)?,
            den: den.scale(&lead_inv, field)?,
        })
    }

    pub fn from_poly(p: Poly, field: &FieldSpec) -> Self {
        RationalFn {
            num: p,
            den: Poly::one(field),
        }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        RationalFn::from_poly(Poly::zero(), field)
    }

    pub fn one(field: &FieldSpec) -> Self {
        RationalFn::from_poly(Poly::one(field), field)
    }

    pub fn theta(field: &FieldSpec) -> Self {
        RationalFn::from_poly(Poly::theta(field), field)
    }

    pub fn constant(c: FqElem, field: &FieldSpec) -> Self {
        RationalFn::from_poly(Poly::constant(c), field)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self, field: &FieldSpec) -> Result<Self, PolyError> {
        let n = self
            .num
            .mul(&other.den, field)?
            .add(&other.num.mul(&self.den, field)?, field)?;
        let d = self.den.mul(&other.den, field)?;
        RationalFn::new(n, d, field)
    }

    pub fn sub(&self, other: &Self, field: &FieldSpec) -> Result<Self, PolyError> {
        self.add(&other.neg(field), field)
    }

    pub fn neg(&self, field: &FieldSpec) -> Self {
        RationalFn {
            num: self.num.neg(field),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self, field: &FieldSpec) -> Result<Self, PolyError> {
        RationalFn::new(
            self.num.mul(&other.num, field)?,
            self.den.mul(&other.den, field)?,
            field,
        )
    }

    pub fn inv(&self, field: &FieldSpec) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        RationalFn::new(self.den.clone(), self.num.clone(), field)
    }

    pub fn div(&self, other: &Self, field: &FieldSpec) -> Result<Self, PolyError> {
        self.mul(&other.inv(field)?, field)
    }

    pub fn format(&self, field: &FieldSpec) -> String {
        if self.den.is_monic(field) && self.den.degree() == Some(0) {
            self.num.format(field)
        } else {
            format!("({})/({})", self.num.format(field), self.den.format(field))
        }
    }
}

impl RationalFn {
    /// If `self ∈ K^p`, returns the `p`-th root, else `None`. In lowest
    /// terms, `c ∈ K^p` iff every nonzero coefficient of `num` and `den`
    /// sits at a θ-degree divisible by `p` (the base field is perfect).
    pub fn pth_root(&self, field: &FieldSpec) -> Result<Option<RationalFn>, PolyError> {
        let num = poly_pth_root(&self.num, field)?;
        let den = poly_pth_root(&self.den, field)?;
        match (num, den) {
            (Some(n), Some(d)) => Ok(Some(RationalFn::new(n, d, field)?)),
            _ => Ok(None),
        }
    }
}

fn poly_pth_root(f: &Poly, field: &FieldSpec) -> Result<Option<Poly>, PolyError> {
    if f.is_zero() {
        return Ok(Some(Poly::zero()));
    }
    let p = field.p() as usize;
    let mut out = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        if i % p != 0 {
            return Ok(None);
        }
        let j = i / p;
        if out.len() <= j {
            out.resize(j + 1, field.zero());
        }
        out[j] = field.pth_root(c)?;
    }
    Ok(Some(Poly::from_coeffs(out)))
}

// ---------------------------------------------------------------------------
// Polynomials over K.

/// Element of `K[x]`: ascending coefficients in `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyOverK {
    coeffs: Vec<RationalFn>,
}

impl PolyOverK {
    pub fn zero() -> Self {
        PolyOverK { coeffs: vec![] }
    }

    pub fn one(field: &FieldSpec) -> Self {
        PolyOverK::from_coeffs(vec![RationalFn::one(field)])
    }

    pub fn x(field: &FieldSpec) -> Self {
        PolyOverK::from_coeffs(vec![RationalFn::zero(field), RationalFn::one(field)])
    }

    pub fn from_coeffs(mut coeffs: Vec<RationalFn>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        PolyOverK { coeffs }
    }

    pub fn constant(c: RationalFn) -> Self {
        PolyOverK::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[RationalFn] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, field: &FieldSpec) -> RationalFn {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| RationalFn::zero(field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&RationalFn> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self, field: &FieldSpec) -> Result<Self, PolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i, field).add(&other.coeff(i, field), field)?);
        }
        Ok(PolyOverK::from_coeffs(out))
    }

    pub fn sub(&self, other: &Self, field: &FieldSpec) -> Result<Self, PolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i, field).sub(&other.coeff(i, field), field)?);
        }
        Ok(PolyOverK::from_coeffs(out))
    }

    pub fn mul(&self, other: &Self, field: &FieldSpec) -> Result<Self, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(PolyOverK::zero());
        }
        let mut out = vec![RationalFn::zero(field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a.mul(b, field)?;
                out[i + j] = out[i + j].add(&prod, field)?;
            }
        }
        Ok(PolyOverK::from_coeffs(out))
    }

    pub fn divrem(&self, other: &Self, field: &FieldSpec) -> Result<(Self, Self), PolyError> {
        let bd = other.degree().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = other.leading().unwrap().inv(field)?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![RationalFn::zero(field); self.coeffs.len().saturating_sub(bd)];
        loop {
            let d = match rem.iter().rposition(|c| !c.is_zero()) {
                Some(d) if d >= bd => d,
                _ => break,
            };
            let factor = rem[d].mul(&lead_inv, field)?;
            let shift = d - bd;
            quot[shift] = factor.clone();
            for i in 0..=bd {
                let sub = factor.mul(&other.coeffs[i], field)?;
                rem[i + shift] = rem[i + shift].sub(&sub, field)?;
            }
        }
        Ok((PolyOverK::from_coeffs(quot), PolyOverK::from_coeffs(rem)))
    }

    pub fn monic(&self, field: &FieldSpec) -> Result<Self, PolyError> {
        match self.leading() {
            None => Ok(PolyOverK::zero()),
            Some(l) => {
                let inv = l.inv(field)?;
                let mut out = Vec::with_capacity(self.coeffs.len());
                for c in &self.coeffs {
                    out.push(c.mul(&inv, field)?);
                }
                Ok(PolyOverK::from_coeffs(out))
            }
        }
    }

    pub fn gcd(a: &Self, b: &Self, field: &FieldSpec) -> Result<Self, PolyError> {
        if a.is_zero() && b.is_zero() {
            return Err(PolyError::BothZero);
        }
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        while !r1.is_zero() {
            let r = r0.divrem(&r1, field)?.1;
            r0 = r1;
            r1 = r;
        }
        r0.monic(field)
    }

    pub fn eval(&self, x: &RationalFn, field: &FieldSpec) -> Result<RationalFn, PolyError> {
        let mut acc = RationalFn::zero(field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, field)?.add(c, field)?;
        }
        Ok(acc)
    }

    pub fn format(&self, field: &FieldSpec) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.format(field);
            let term = match i {
                0 => cs,
                _ => {
                    let var = if i == 1 { "x".to_string() } else { format!("x^{i}") };
                    if cs == "1" {
                        var
                    } else if cs.contains('+') && !cs.starts_with('(') {
                        format!("({cs}){var}")
                    } else {
                        format!("{cs}{var}")
                    }
                }
            };
            parts.push(term);
        }
        parts.join("+")
    }
}

/// Formal derivative in `R = F_q[θ]`.
pub fn derivative_r(f: &Poly, field: &FieldSpec) -> Result<Poly, PolyError> {
    let mut out = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate().skip(1) {
        let scalar = field.from_u64(i as u64);
        out.push(field.mul(c, &scalar)?);
    }
    Ok(Poly::from_coeffs(out))
}

/// Formal derivative `Σ i·c_i x^{i-1}` with `i` reduced mod `p`.
pub fn derivative(f: &PolyOverK, field: &FieldSpec) -> Result<PolyOverK, PolyError> {
    let mut out = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate().skip(1) {
        let scalar = field.from_u64(i as u64);
        out.push(c.mul(&RationalFn::constant(scalar, field), field)?);
    }
    Ok(PolyOverK::from_coeffs(out))
}

/// Whether every irreducible factor of `f` over `K` has nonzero derivative.
///
/// Iterative form of: if `deg f ≤ 1` true; if `f' = 0`, `f = Σ c_i x^{pi}`
/// and the answer reduces to `Σ c_i^{1/p} x^i` provided every `c_i` is a
/// `p`-th power in `K` (false otherwise); else recurse into `gcd(f, f')`,
/// which carries exactly the repeated and inseparable factors.
pub fn is_product_of_separable(f: &PolyOverK, field: &FieldSpec) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let p = field.p() as usize;
    let mut g = f.clone();
    loop {
        match g.degree() {
            None | Some(0) | Some(1) => return Ok(true),
            _ => {}
        }
        let dg = derivative(&g, field)?;
        if dg.is_zero() {
            // g = Σ c_i x^{pi}; all factors separable forces g ∈ K[x]^p
            let mut reduced = Vec::new();
            let mut ok = true;
            for (i, c) in g.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                debug_assert_eq!(i % p, 0);
                match c.pth_root(field)? {
                    Some(root) => {
                        if reduced.len() <= i / p {
                            reduced.resize(i / p + 1, RationalFn::zero(field));
                        }
                        reduced[i / p] = root;
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                return Ok(false);
            }
            g = PolyOverK::from_coeffs(reduced);
            continue;
        }
        let h = PolyOverK::gcd(&g, &dg, field)?;
        if h.degree() == Some(0) {
            return Ok(true);
        }
        g = h;
    }
}
