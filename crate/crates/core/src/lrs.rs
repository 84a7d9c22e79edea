//! Linear recurrent sequences over `K = F_q(θ)` and fast evaluation of the
//! term with index `q^{deg P}` modulo a monic irreducible `P`.
//!
//! A spec stores the recurrence `a_n = c_1 a_{n−1} + … + c_l a_{n−l}`, an
//! initial window, and the index of its first term. Evaluation at the
//! Frobenius index reduces everything mod `P` and computes
//! `x^{q^d − start} mod χ̄` in `F_P[x]`, then combines the remainder's
//! coefficients with the reduced initial window, so the cost is
//! `O(l²·d·log q)` field operations instead of `q^d` iterations.

use crate::gf::{FieldSpec};
use crate::polyring::{PolyOverK, PolyError, RationalFn};
use crate::residue::{reduce, AtPrime, ResidueElem, ResidueError, ResidueField, RPoly};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LrsError {
    #[error("invalid recurrence spec: {0}")]
    BadSpec(&'static str),
    #[error("term index precedes the first given term")]
    IndexBeforeStart,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

/// A linear recurrence `a_n = c_1 a_{n−1} + … + c_l a_{n−l}` with initial
/// terms `a_start .. a_{start+l−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LrsSpec {
    coeffs: Vec<RationalFn>,
    initial: Vec<RationalFn>,
    start: i64,
}

/// JSON form of a spec: coefficients and initial values as
/// `{"num": [..], "den": [..]}` with base-`p` encoded integer lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LrsSpecJson {
    pub order: usize,
    pub coeffs: Vec<RationalFnJson>,
    pub initial: Vec<RationalFnJson>,
    pub start: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalFnJson {
    pub num: Vec<u64>,
    pub den: Vec<u64>,
}

/// The eigen polynomial `χ = x^l − c_1 x^{l−1} − … − c_l` and whether it is
/// a product of separable polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    pub chi: PolyOverK,
    pub separable_product: bool,
}

impl LrsSpec {
    pub fn new(
        coeffs: Vec<RationalFn>,
        initial: Vec<RationalFn>,
        start: i64,
    ) -> Result<Self, LrsError> {
        if coeffs.is_empty() {
            return Err(LrsError::BadSpec("order must be positive"));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(LrsError::BadSpec("c_l must be nonzero (full order)"));
        }
        if coeffs.len() != initial.len() {
            return Err(LrsError::BadSpec("initial window must have length l"));
        }
        Ok(LrsSpec {
            coeffs,
            initial,
            start,
        })
    }

    /// The constant sequence `a_n = c` (order 1, `a_{n} = a_{n−1}`).
    pub fn constant(c: RationalFn, field: &FieldSpec) -> Self {
        LrsSpec {
            coeffs: vec![RationalFn::one(field)],
            initial: vec![c],
            start: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[RationalFn] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[RationalFn] {
        &self.initial
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn to_json(&self, field: &FieldSpec) -> LrsSpecJson {
        let conv = |c: &RationalFn| RationalFnJson {
            num: c.num().to_ints(field),
            den: c.den().to_ints(field),
        };
        LrsSpecJson {
            order: self.order(),
            coeffs: self.coeffs.iter().map(conv).collect(),
            initial: self.initial.iter().map(conv).collect(),
            start: self.start,
        }
    }

    pub fn from_json(json: &LrsSpecJson, field: &FieldSpec) -> Result<Self, LrsError> {
        let conv = |c: &RationalFnJson| -> Result<RationalFn, LrsError> {
            Ok(RationalFn::new(
                crate::polyring::Poly::from_ints(field, &c.num),
                crate::polyring::Poly::from_ints(field, &c.den),
                field,
            )?)
        };
        let coeffs = json.coeffs.iter().map(conv).collect::<Result<_, _>>()?;
        let initial = json.initial.iter().map(conv).collect::<Result<_, _>>()?;
        LrsSpec::new(coeffs, initial, json.start)
    }
}

/// The eigen polynomial of the recurrence, with its separability certificate.
pub fn eigen(spec: &LrsSpec, field: &FieldSpec) -> Result<EigenData, LrsError> {
    let l = spec.order();
    let mut coeffs = vec![RationalFn::zero(field); l + 1];
    coeffs[l] = RationalFn::one(field);
    for (i, c) in spec.coeffs.iter().enumerate() {
        // coefficient of x^{l-1-i} is −c_{i+1}
        coeffs[l - 1 - i] = c.neg(field);
    }
    let chi = PolyOverK::from_coeffs(coeffs);
    let separable_product = crate::polyring::is_product_of_separable(&chi, field)?;
    Ok(EigenData {
        chi,
        separable_product,
    })
}

/// `a_n` by direct iteration in `K`; the slow oracle the fast path is
/// checked against.
pub fn term(spec: &LrsSpec, n: i64, field: &FieldSpec) -> Result<RationalFn, LrsError> {
    if n < spec.start {
        return Err(LrsError::IndexBeforeStart);
    }
    let idx = (n - spec.start) as usize;
    let l = spec.order();
    if idx < l {
        return Ok(spec.initial[idx].clone());
    }
    let mut window: Vec<RationalFn> = spec.initial.clone();
    for _ in l..=idx {
        let mut next = RationalFn::zero(field);
        for (i, c) in spec.coeffs.iter().enumerate() {
            // c_1 pairs with the newest term in the window
            let t = &window[l - 1 - i];
            next = next.add(&c.mul(t, field)?, field)?;
        }
        window.rotate_left(1);
        window[l - 1] = next;
    }
    Ok(window[l - 1].clone())
}

/// `a_{q^{deg P}} mod P` without iterating the sequence.
pub fn eval_at_frobenius_index(
    spec: &LrsSpec,
    fp: &ResidueField,
) -> Result<AtPrime<ResidueElem>, LrsError> {
    let l = spec.order();
    let mut cbar = Vec::with_capacity(l);
    for c in &spec.coeffs {
        match reduce(c, fp) {
            Ok(v) => cbar.push(v),
            Err(ResidueError::DenominatorVanishes) => return Ok(AtPrime::BadPrime),
            Err(e) => return Err(e.into()),
        }
    }
    let mut ibar = Vec::with_capacity(l);
    for a in &spec.initial {
        match reduce(a, fp) {
            Ok(v) => ibar.push(v),
            Err(ResidueError::DenominatorVanishes) => return Ok(AtPrime::BadPrime),
            Err(e) => return Err(e.into()),
        }
    }
    // n = q^d; the window index is m = n − start ≥ 0
    let n = BigUint::from(fp.field().q()).pow(fp.degree() as u32);
    let m = if spec.start >= 0 {
        let s = BigUint::from(spec.start as u64);
        if s > n {
            return Ok(AtPrime::BadPrime);
        }
        n - s
    } else {
        n + BigUint::from((-spec.start) as u64)
    };
    // χ̄ = x^l − Σ c̄_i x^{l−i}, monic of degree l in F_P[x]
    let mut chi = vec![fp.zero(); l + 1];
    chi[l] = fp.one();
    for (i, c) in cbar.iter().enumerate() {
        chi[l - 1 - i] = fp.neg(c);
    }
    let chi = RPoly::from_coeffs(chi, fp);
    let r = chi.powmod(&RPoly::x(fp), &m, fp)?;
    let mut acc = fp.zero();
    for (j, a) in ibar.iter().enumerate() {
        let rj = r.coeff(j, fp);
        acc = fp.add(&acc, &fp.mul(&rj, a)?)?;
    }
    Ok(AtPrime::Value(acc))
}

/// The sum sequence `a + b`: eigen polynomials multiply, the initial window
/// is the termwise sum.
pub fn direct_sum(a: &LrsSpec, b: &LrsSpec, field: &FieldSpec) -> Result<LrsSpec, LrsError> {
    let chi = eigen(a, field)?.chi.mul(&eigen(b, field)?.chi, field)?;
    let start = a.start.max(b.start);
    spec_from_chi(&chi, start, field, |n, f| {
        Ok(term(a, n, f)?.add(&term(b, n, f)?, f)?)
    })
}

/// The product sequence `a · b`, built from the Kronecker product of the two
/// companion matrices.
pub fn product(a: &LrsSpec, b: &LrsSpec, field: &FieldSpec) -> Result<LrsSpec, LrsError> {
    let ca = companion(a, field);
    let cb = companion(b, field);
    let m = kronecker(&ca, &cb, field)?;
    let chi = charpoly(&m, field)?;
    let start = a.start.max(b.start);
    spec_from_chi(&chi, start, field, |n, f| {
        Ok(term(a, n, f)?.mul(&term(b, n, f)?, f)?)
    })
}

/// `spec + c` for a constant `c ∈ K`.
pub fn shift_by_constant(
    spec: &LrsSpec,
    c: &RationalFn,
    field: &FieldSpec,
) -> Result<LrsSpec, LrsError> {
    direct_sum(spec, &LrsSpec::constant(c.clone(), field), field)
}

/// `k · spec` for a scalar `k ∈ K`; the recurrence is unchanged.
pub fn scale(spec: &LrsSpec, k: &RationalFn, field: &FieldSpec) -> Result<LrsSpec, LrsError> {
    let initial = spec
        .initial
        .iter()
        .map(|a| a.mul(k, field))
        .collect::<Result<_, _>>()?;
    Ok(LrsSpec {
        coeffs: spec.coeffs.clone(),
        initial,
        start: spec.start,
    })
}

fn spec_from_chi(
    chi: &PolyOverK,
    start: i64,
    field: &FieldSpec,
    mut term_fn: impl FnMut(i64, &FieldSpec) -> Result<RationalFn, LrsError>,
) -> Result<LrsSpec, LrsError> {
    let l = chi.degree().expect("monic eigen polynomial");
    debug_assert_eq!(chi.leading(), Some(&RationalFn::one(field)));
    let mut coeffs = Vec::with_capacity(l);
    for i in 1..=l {
        coeffs.push(chi.coeff(l - i, field).neg(field));
    }
    let mut initial = Vec::with_capacity(l);
    for j in 0..l {
        initial.push(term_fn(start + j as i64, field)?);
    }
    LrsSpec::new(coeffs, initial, start)
}

// ---------------------------------------------------------------------------
// Companion matrices and characteristic polynomials over K.

type Matrix = Vec<Vec<RationalFn>>;

fn companion(spec: &LrsSpec, field: &FieldSpec) -> Matrix {
    let l = spec.order();
    let mut m = vec![vec![RationalFn::zero(field); l]; l];
    for (j, c) in spec.coeffs.iter().enumerate() {
        m[0][j] = c.clone();
    }
    for i in 1..l {
        m[i][i - 1] = RationalFn::one(field);
    }
    m
}

fn kronecker(a: &Matrix, b: &Matrix, field: &FieldSpec) -> Result<Matrix, LrsError> {
    let n = a.len();
    let m = b.len();
    let mut out = vec![vec![RationalFn::zero(field); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j].mul(&b[k][l], field)?;
                }
            }
        }
    }
    Ok(out)
}

/// Monic characteristic polynomial via Hessenberg reduction; works over any
/// exact field, no division by integers.
fn charpoly(m: &Matrix, field: &FieldSpec) -> Result<PolyOverK, LrsError> {
    let n = m.len();
    let mut h = m.to_vec();
    // similarity reduction to upper Hessenberg form
    for j in 0..n.saturating_sub(2) {
        let pivot = (j + 1..n).find(|&i| !h[i][j].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        if pivot != j + 1 {
            h.swap(pivot, j + 1);
            for row in h.iter_mut() {
                row.swap(pivot, j + 1);
            }
        }
        let inv = h[j + 1][j].inv(field)?;
        for i in j + 2..n {
            if h[i][j].is_zero() {
                continue;
            }
            let factor = h[i][j].mul(&inv, field)?;
            for col in 0..n {
                let sub = factor.mul(&h[j + 1][col], field)?;
                h[i][col] = h[i][col].sub(&sub, field)?;
            }
            // preserve similarity: add factor times column i to column j+1
            for row in 0..n {
                let add = factor.mul(&h[row][i], field)?;
                h[row][j + 1] = h[row][j + 1].add(&add, field)?;
            }
        }
    }
    // leading-principal-minor recurrence for Hessenberg matrices
    let x = PolyOverK::x(field);
    let mut p: Vec<PolyOverK> = vec![PolyOverK::one(field)];
    for i in 1..=n {
        let diag = PolyOverK::constant(h[i - 1][i - 1].clone());
        let mut pi = x.sub(&diag, field)?.mul(&p[i - 1], field)?;
        let mut subdiag = RationalFn::one(field);
        for m_off in 1..i {
            subdiag = subdiag.mul(&h[i - m_off][i - m_off - 1], field)?;
            if h[i - 1 - m_off][i - 1].is_zero() {
                continue;
            }
            let c = h[i - 1 - m_off][i - 1].mul(&subdiag, field)?;
            let t = PolyOverK::constant(c).mul(&p[i - 1 - m_off], field)?;
            pi = pi.sub(&t, field)?;
        }
        p.push(pi);
    }
    Ok(p[n].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{enumerate_monic_irreducibles, Poly};
    use crate::residue::legendre_symbol;

    fn f3() -> FieldSpec {
        FieldSpec::prime(3).unwrap()
    }

    /// Example spec with `a_1 = 1`, `a_2 = 0`, `a_{n+2} = θ·a_n`: the term
    /// with odd index `2k+1` is `θ^k`, so the term at `q^d` is
    /// `θ^{(q^d−1)/2}`, the Euler power behind the Legendre symbol.
    pub(crate) fn legendre_spec(field: &FieldSpec) -> LrsSpec {
        LrsSpec::new(
            vec![RationalFn::zero(field), RationalFn::theta(field)],
            vec![RationalFn::one(field), RationalFn::zero(field)],
            1,
        )
        .unwrap()
    }

    /// Example spec over `F_2 ⊂ F_q`, `q = 2^r`: order-`q` all-ones
    /// recurrence with all-ones initial window; period `q + 1`, and the
    /// term at `q^d` is `(1 + d) mod 2`.
    pub(crate) fn parity_spec(field: &FieldSpec) -> LrsSpec {
        let q = field.q() as usize;
        LrsSpec::new(
            vec![RationalFn::one(field); q],
            vec![RationalFn::one(field); q],
            0,
        )
        .unwrap()
    }

    #[test]
    fn eigen_examples() {
        let f = f3();
        let spec = legendre_spec(&f);
        let e = eigen(&spec, &f).unwrap();
        let x2_theta = PolyOverK::from_coeffs(vec![
            RationalFn::theta(&f).neg(&f),
            RationalFn::zero(&f),
            RationalFn::one(&f),
        ]);
        assert_eq!(e.chi, x2_theta);
        assert!(e.separable_product);

        let f2 = FieldSpec::prime(2).unwrap();
        let fib = parity_spec(&f2);
        let e = eigen(&fib, &f2).unwrap();
        assert_eq!(
            e.chi,
            PolyOverK::from_coeffs(vec![
                RationalFn::one(&f2),
                RationalFn::one(&f2),
                RationalFn::one(&f2),
            ])
        );
        assert!(e.separable_product);

        // order-q spec with chi = x^q − θ is not a separable product
        let q = f.q() as usize;
        let mut coeffs = vec![RationalFn::zero(&f); q - 1];
        coeffs.push(RationalFn::theta(&f));
        let spec = LrsSpec::new(coeffs, vec![RationalFn::one(&f); q], 0).unwrap();
        assert!(!eigen(&spec, &f).unwrap().separable_product);
    }

    #[test]
    fn term_examples() {
        let f = f3();
        let spec = legendre_spec(&f);
        // a₁..a₅ = 1, 0, θ, 0, θ²; oracle = hand iteration
        assert_eq!(term(&spec, 1, &f).unwrap(), RationalFn::one(&f));
        assert_eq!(term(&spec, 2, &f).unwrap(), RationalFn::zero(&f));
        assert_eq!(term(&spec, 3, &f).unwrap(), RationalFn::theta(&f));
        assert_eq!(term(&spec, 4, &f).unwrap(), RationalFn::zero(&f));
        assert_eq!(
            term(&spec, 5, &f).unwrap(),
            RationalFn::from_poly(Poly::from_ints(&f, &[0, 0, 1]), &f)
        );

        let f2 = FieldSpec::prime(2).unwrap();
        let fib = parity_spec(&f2);
        let vals: Vec<_> = (0..6).map(|n| term(&fib, n, &f2).unwrap()).collect();
        let one = RationalFn::one(&f2);
        let zero = RationalFn::zero(&f2);
        assert_eq!(
            vals,
            vec![
                one.clone(),
                one.clone(),
                zero.clone(),
                one.clone(),
                one,
                zero
            ]
        );
        assert_eq!(term(&fib, 0, &f2).unwrap(), RationalFn::one(&f2));
        assert_eq!(term(&fib, -1, &f2), Err(LrsError::IndexBeforeStart));
    }

    #[test]
    fn frobenius_eval_examples() {
        let f = f3();
        let spec = legendre_spec(&f);
        let p = ResidueField::trusted(Poly::from_ints(&f, &[1, 1]), f.clone());
        let v = eval_at_frobenius_index(&spec, &p).unwrap().value().unwrap();
        assert_eq!(v, p.from_poly(&Poly::from_ints(&f, &[2])).unwrap());
        assert_eq!(legendre_symbol(&RationalFn::theta(&f), &p).unwrap(), -1);

        let f2 = FieldSpec::prime(2).unwrap();
        let fib = parity_spec(&f2);
        for d in 1..=5usize {
            for modulus in enumerate_monic_irreducibles(d, &f2).unwrap() {
                let fp = ResidueField::trusted(modulus, f2.clone());
                let v = eval_at_frobenius_index(&fib, &fp).unwrap().value().unwrap();
                let expected = if d % 2 == 0 { fp.one() } else { fp.zero() };
                assert_eq!(v, expected, "degree {d}");
            }
        }

        // a prime dividing a coefficient denominator is a bad prime
        let bad = LrsSpec::new(
            vec![RationalFn::new(Poly::one(&f), Poly::theta(&f), &f).unwrap()],
            vec![RationalFn::one(&f)],
            0,
        )
        .unwrap();
        let p_theta = ResidueField::trusted(Poly::theta(&f), f.clone());
        assert!(eval_at_frobenius_index(&bad, &p_theta).unwrap().is_bad());
    }

    #[test]
    fn fast_eval_matches_iteration_for_random_specs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in [2u64, 3] {
            let f = FieldSpec::prime(q).unwrap();
            let primes: Vec<_> = (1..=3usize)
                .flat_map(|d| enumerate_monic_irreducibles(d, &f).unwrap())
                .collect();
            for _ in 0..30 {
                let order = rng.gen_range(1..=3usize);
                let rand_rat = |rng: &mut rand_chacha::ChaCha8Rng| {
                    RationalFn::from_poly(
                        Poly::from_ints(
                            &f,
                            &(0..3).map(|_| rng.gen_range(0..q)).collect::<Vec<_>>(),
                        ),
                        &f,
                    )
                };
                let mut coeffs: Vec<_> = (0..order).map(|_| rand_rat(&mut rng)).collect();
                if coeffs[order - 1].is_zero() {
                    coeffs[order - 1] = RationalFn::one(&f);
                }
                let initial: Vec<_> = (0..order).map(|_| rand_rat(&mut rng)).collect();
                let spec = LrsSpec::new(coeffs, initial, 0).unwrap();
                for modulus in &primes {
                    let fp = ResidueField::trusted(modulus.clone(), f.clone());
                    let d = fp.degree();
                    let n = q.pow(d as u32) as i64;
                    let slow = reduce(&term(&spec, n, &f).unwrap(), &fp).unwrap();
                    let fast = eval_at_frobenius_index(&spec, &fp)
                        .unwrap()
                        .value()
                        .unwrap();
                    assert_eq!(fast, slow);
                }
            }
        }
    }

    #[test]
    fn direct_sum_is_linear_at_good_primes() {
        let f = f3();
        let a = legendre_spec(&f);
        let b = LrsSpec::constant(RationalFn::one(&f), &f);
        let sum = direct_sum(&a, &b, &f).unwrap();
        // eigen polynomials multiply
        let ea = eigen(&a, &f).unwrap().chi;
        let eb = eigen(&b, &f).unwrap().chi;
        assert_eq!(eigen(&sum, &f).unwrap().chi, ea.mul(&eb, &f).unwrap());
        for d in 1..=4usize {
            for modulus in enumerate_monic_irreducibles(d, &f).unwrap() {
                let fp = ResidueField::trusted(modulus, f.clone());
                let va = eval_at_frobenius_index(&a, &fp).unwrap().value().unwrap();
                let vb = eval_at_frobenius_index(&b, &fp).unwrap().value().unwrap();
                let vs = eval_at_frobenius_index(&sum, &fp).unwrap().value().unwrap();
                assert_eq!(vs, fp.add(&va, &vb).unwrap());
            }
        }
    }

    #[test]
    fn product_matches_termwise_multiplication() {
        let f = f3();
        let a = legendre_spec(&f);
        let prod = product(&a, &a, &f).unwrap();
        for n in 1..20 {
            let expected = term(&a, n, &f)
                .unwrap()
                .mul(&term(&a, n, &f).unwrap(), &f)
                .unwrap();
            assert_eq!(term(&prod, n, &f).unwrap(), expected);
        }
        // the eigen polynomial of the square has the squared eigenvalues:
        // for χ = x²−θ it is divisible by (x−θ)(x+θ)
        let e = eigen(&prod, &f).unwrap();
        let lin = PolyOverK::from_coeffs(vec![
            RationalFn::theta(&f).neg(&f),
            RationalFn::one(&f),
        ]);
        let (_, r) = e.chi.divrem(&lin, &f).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn charpoly_of_companion_recovers_eigen() {
        let f = f3();
        let spec = legendre_spec(&f);
        let m = companion(&spec, &f);
        let chi = charpoly(&m, &f).unwrap();
        assert_eq!(chi, eigen(&spec, &f).unwrap().chi);

        // a denser matrix: [[1, θ], [θ, 2]] has char poly x² − 3x + (2 − θ²)
        // = x² + (2 − θ²) over F_3
        let th = RationalFn::theta(&f);
        let m = vec![
            vec![RationalFn::one(&f), th.clone()],
            vec![th.clone(), RationalFn::constant(f.from_u64(2), &f)],
        ];
        let chi = charpoly(&m, &f).unwrap();
        let th2 = th.mul(&th, &f).unwrap();
        let c0 = RationalFn::constant(f.from_u64(2), &f).sub(&th2, &f).unwrap();
        assert_eq!(
            chi,
            PolyOverK::from_coeffs(vec![c0, RationalFn::zero(&f), RationalFn::one(&f)])
        );
    }

    #[test]
    fn spec_json_round_trip() {
        let f = f3();
        let spec = legendre_spec(&f);
        let json = spec.to_json(&f);
        let s = serde_json::to_string(&json).unwrap();
        let back: LrsSpecJson = serde_json::from_str(&s).unwrap();
        assert_eq!(LrsSpec::from_json(&back, &f).unwrap(), spec);
    }
}
