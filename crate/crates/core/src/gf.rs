//! The base finite field `F_q` with `q = p^r`, represented as
//! `F_p[u] / (m(u))` for a monic irreducible `m` of degree `r`.
//!
//! Elements are dense coefficient vectors over `F_p` (ascending powers of
//! the generator `u`). All operations are pure; a [`FieldSpec`] is cheap to
//! clone and safe to share across threads.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not a monic irreducible of the stated degree")]
    BadModulus,
    #[error("no irreducible of degree {0} found (degree must be >= 1)")]
    BadDegree(usize),
}

/// Exponent for powering: either an explicit big integer or the pair
/// `(base, exp)` standing for `base^exp`, which overflows machine words
/// immediately for the exponents `q^d` used throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Int(BigUint),
    Pow { base: u64, exp: u32 },
}

impl Exponent {
    pub fn from_u64(e: u64) -> Self {
        Exponent::Int(BigUint::from(e))
    }

    /// The exponent `q^d`.
    pub fn q_pow(q: u64, d: u32) -> Self {
        Exponent::Pow { base: q, exp: d }
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            Exponent::Int(n) => n.clone(),
            Exponent::Pow { base, exp } => BigUint::from(*base).pow(*exp),
        }
    }
}

impl From<u64> for Exponent {
    fn from(e: u64) -> Self {
        Exponent::from_u64(e)
    }
}

/// The field `F_q = F_p[u]/(m)`, `q = p^r`, `deg m = r`.
///
/// Serialized as `{"p": .., "r": .., "modulus": [..]}` with the modulus as
/// an ascending coefficient list over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u64,
    r: usize,
    modulus: Vec<u64>,
}

/// An element of `F_q`: exactly `r` coefficients in `[0, p)`, ascending
/// powers of `u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FqElem(pub Vec<u64>);

impl FieldSpec {
    /// Builds `F_{p^r}` from an explicit monic irreducible modulus
    /// (ascending coefficients, length `r + 1`).
    pub fn new(p: u64, r: usize, modulus: Vec<u64>) -> Result<Self, GfError> {
        if !is_prime_u64(p) {
            return Err(GfError::NotPrime(p));
        }
        if r == 0
            || modulus.len() != r + 1
            || modulus[r] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(GfError::BadModulus);
        }
        if !fp_is_irreducible(&modulus, p) {
            return Err(GfError::BadModulus);
        }
        Ok(FieldSpec { p, r, modulus })
    }

    /// The prime field `F_p` (modulus `u`).
    pub fn prime(p: u64) -> Result<Self, GfError> {
        Self::new(p, 1, vec![0, 1])
    }

    /// `F_{p^r}` with the lexicographically least monic irreducible modulus
    /// of degree `r` (ascending-coefficient order). Deterministic, so
    /// fixtures built from `(p, r)` alone are reproducible.
    pub fn extension(p: u64, r: usize) -> Result<Self, GfError> {
        if !is_prime_u64(p) {
            return Err(GfError::NotPrime(p));
        }
        if r == 0 {
            return Err(GfError::BadDegree(r));
        }
        if r == 1 {
            return Self::prime(p);
        }
        let mut coeffs = vec![0u64; r + 1];
        coeffs[r] = 1;
        loop {
            if fp_is_irreducible(&coeffs, p) {
                return Self::new(p, r, coeffs);
            }
            // advance the lower r coefficients in lex order (index 0 most
            // significant for the ordering)
            let mut i = r;
            loop {
                if i == 0 {
                    return Err(GfError::BadDegree(r));
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `q = p^r`. Desk-scale fields only; panics on overflow.
    pub fn q(&self) -> u64 {
        self.p.checked_pow(self.r as u32).expect("q overflows u64")
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.r])
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    /// The generator `u` of the extension (equals `0` only when `r = 1`
    /// would make it the residue of `u`, i.e. `0` in the prime field).
    pub fn gen(&self) -> FqElem {
        if self.r == 1 {
            // u ≡ 0 mod u
            self.zero()
        } else {
            let mut c = vec![0; self.r];
            c[1] = 1;
            FqElem(c)
        }
    }

    /// Embeds an integer via reduction mod `p` into the constant coefficient.
    pub fn from_u64(&self, n: u64) -> FqElem {
        let mut c = vec![0; self.r];
        c[0] = n % self.p;
        FqElem(c)
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FqElem, GfError> {
        if coeffs.len() != self.r || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::FieldMismatch);
        }
        Ok(FqElem(coeffs))
    }

    fn check(&self, a: &FqElem) -> Result<(), GfError> {
        if a.0.len() != self.r || a.0.iter().any(|&c| c >= self.p) {
            return Err(GfError::FieldMismatch);
        }
        Ok(())
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> Result<FqElem, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        ))
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> Result<FqElem, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        ))
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> Result<FqElem, GfError> {
        self.check(a)?;
        self.check(b)?;
        let prod = fp_poly_mul(&a.0, &b.0, self.p);
        let rem = fp_poly_rem(&prod, &self.modulus, self.p);
        let mut c = rem;
        c.resize(self.r, 0);
        Ok(FqElem(c))
    }

    /// Inverse via extended gcd over `F_p[u]`.
    pub fn inv(&self, a: &FqElem) -> Result<FqElem, GfError> {
        self.check(a)?;
        if self.is_zero(a) {
            return Err(GfError::ZeroInverse);
        }
        let (g, s, _) = fp_poly_ext_gcd(&a.0, &self.modulus, self.p);
        // g is a nonzero constant since the modulus is irreducible
        debug_assert_eq!(fp_poly_deg(&g), Some(0));
        let ginv = mod_inv_u64(g[0], self.p);
        let mut c: Vec<u64> = s.iter().map(|&x| x * ginv % self.p).collect();
        c = fp_poly_rem(&c, &self.modulus, self.p);
        c.resize(self.r, 0);
        Ok(FqElem(c))
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, a: &FqElem, e: &Exponent) -> Result<FqElem, GfError> {
        self.check(a)?;
        let e = e.to_biguint();
        if e.is_zero() {
            return Ok(self.one());
        }
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

    /// The unique `b` with `b^p = a` (the field is perfect); computed as
    /// `a^{p^{r-1}}`.
    pub fn pth_root(&self, a: &FqElem) -> Result<FqElem, GfError> {
        self.pow(a, &Exponent::q_pow(self.p, self.r as u32 - 1))
    }

    /// All `q` field elements in ascending lex order of the ascending
    /// coefficient list.
    pub fn elements(&self) -> Vec<FqElem> {
        let mut out = Vec::with_capacity(self.q() as usize);
        let mut c = vec![0u64; self.r];
        loop {
            out.push(FqElem(c.clone()));
            let mut i = 0;
            loop {
                if i == self.r {
                    out.sort();
                    return out;
                }
                c[i] += 1;
                if c[i] < self.p {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }

    /// Pretty form like `u+1`, constant `2`, or `0`.
    pub fn format(&self, a: &FqElem) -> String {
        if self.is_zero(a) {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}u"),
                (i, 1) => format!("u^{i}"),
                (i, c) => format!("{c}u^{i}"),
            };
            parts.push(term);
        }
        parts.join("+")
    }
}

// ---------------------------------------------------------------------------
// Arithmetic in F_p[u] on raw coefficient vectors (ascending powers).

fn fp_poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn fp_poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn fp_poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let md = fp_poly_deg(m).expect("zero modulus");
    let lead_inv = mod_inv_u64(m[md], p);
    let mut rem = a.to_vec();
    while let Some(d) = fp_poly_deg(&rem) {
        if d < md {
            break;
        }
        let factor = rem[d] * lead_inv % p;
        let shift = d - md;
        for i in 0..=md {
            let sub = factor * m[i] % p;
            rem[i + shift] = (rem[i + shift] + p - sub) % p;
        }
    }
    fp_poly_trim(rem)
}

fn fp_poly_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut r0 = fp_poly_trim(a.to_vec());
    let mut r1 = fp_poly_trim(b.to_vec());
    let mut s0 = vec![1u64];
    let mut s1: Vec<u64> = vec![];
    let mut t0: Vec<u64> = vec![];
    let mut t1 = vec![1u64];
    while !r1.is_empty() {
        let (q, r) = fp_poly_divrem(&r0, &r1, p);
        let new_s = fp_poly_sub(&s0, &fp_poly_mul(&q, &s1, p), p);
        let new_t = fp_poly_sub(&t0, &fp_poly_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = new_s;
        t0 = t1;
        t1 = new_t;
    }
    (r0, s0, t0)
}

fn fp_poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    fp_poly_trim(out)
}

fn fp_poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let bd = fp_poly_deg(b).expect("division by zero polynomial");
    let lead_inv = mod_inv_u64(b[bd], p);
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len().saturating_sub(bd)];
    while let Some(d) = fp_poly_deg(&rem) {
        if d < bd {
            break;
        }
        let factor = rem[d] * lead_inv % p;
        let shift = d - bd;
        quot[shift] = factor;
        for i in 0..=bd {
            let sub = factor * b[i] % p;
            rem[i + shift] = (rem[i + shift] + p - sub) % p;
        }
    }
    (fp_poly_trim(quot), fp_poly_trim(rem))
}

fn fp_poly_powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    if e.is_zero() {
        return result;
    }
    let mut b = fp_poly_rem(base, m, p);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = fp_poly_rem(&fp_poly_mul(&result, &b, p), m, p);
        }
        if i + 1 < bits {
            b = fp_poly_rem(&fp_poly_mul(&b, &b, p), m, p);
        }
    }
    result
}

/// Rabin's irreducibility test over `F_p`.
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let d = match fp_poly_deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^{p^d} ≡ x mod f
    let e = BigUint::from(p).pow(d as u32);
    let xq = fp_poly_powmod(&x, &e, f, p);
    if fp_poly_trim(fp_poly_sub(&xq, &x, p)) != Vec::<u64>::new() {
        return false;
    }
    for l in prime_factors(d as u64) {
        let e = BigUint::from(p).pow((d as u64 / l) as u32);
        let xe = fp_poly_powmod(&x, &e, f, p);
        let diff = fp_poly_sub(&xe, &x, p);
        let (g, _, _) = fp_poly_ext_gcd(&diff, f, p);
        if fp_poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a nonzero mod p
    mod_pow_u64(a % p, p - 2, p)
}

fn mod_pow_u64(base: u64, mut e: u64, m: u64) -> u64 {
    let mut result = 1u128;
    let mut b = base as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    result as u64
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
