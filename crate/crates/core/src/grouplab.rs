//! Finite groups as explicit multiplication tables: conjugacy classes,
//! centralizers, the `S₁`/`S₂` sets attached to a list of subgroups, and
//! wreath products `A^{|G|} ⋊ G` with `A = (Z/2)^r`.
//!
//! Everything here is verified by exhaustive enumeration. The point of the
//! wreath construction is the amplification effect: `S₂` of the wreath
//! product fills up a fraction `(1 − |G|/2^r)` of `S₁`, so the ratio
//! `#S₂′/#Γ′` climbs toward `#S₁/#Γ` as `r` grows.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(&'static str),
    #[error("element index out of range")]
    BadElement,
    #[error("subgroup list must be nonempty")]
    EmptySubgroupList,
    #[error("marked subset is not a subgroup")]
    NotASubgroup,
    #[error("construction size guard exceeded")]
    SizeExceeded,
}

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

/// Exhaustive associativity checking is cubic; above this order the table
/// is spot-checked on random triples instead.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 400;

impl GroupTable {
    pub fn new(mul: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let m = mul.len();
        if m == 0 {
            return Err(GroupError::NotAGroup("empty table"));
        }
        for row in &mul {
            if row.len() != m || row.iter().any(|&v| v >= m) {
                return Err(GroupError::NotAGroup("table is not square over 0..m"));
            }
        }
        let flat: Vec<usize> = mul.iter().flatten().copied().collect();
        let at = |i: usize, j: usize| flat[i * m + j];
        // rows and columns must be permutations (cancellation laws)
        for i in 0..m {
            let mut seen_row = vec![false; m];
            let mut seen_col = vec![false; m];
            for j in 0..m {
                seen_row[at(i, j)] = true;
                seen_col[at(j, i)] = true;
            }
            if seen_row.contains(&false) || seen_col.contains(&false) {
                return Err(GroupError::NotAGroup("cancellation fails"));
            }
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NotAGroup("no identity"))?;
        let mut inverse = vec![0; m];
        for x in 0..m {
            inverse[x] = (0..m)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(GroupError::NotAGroup("missing inverse"))?;
        }
        if m <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if at(at(a, b), c) != at(a, at(b, c)) {
                            return Err(GroupError::NotAGroup("associativity fails"));
                        }
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
            for _ in 0..10_000 {
                let (a, b, c) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAGroup("associativity fails"));
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (0..m).map(|i| i.to_string()).collect());
        if labels.len() != m {
            return Err(GroupError::NotAGroup("label count mismatch"));
        }
        Ok(GroupTable {
            order: m,
            mul: flat,
            inverse,
            identity,
            labels,
        })
    }

    /// The cyclic group `Z/n`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::NotAGroup("order must be positive"));
        }
        let mul = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(mul, None)
    }

    /// The symmetric group on `n` points, elements in lexicographic
    /// one-line order, product `(p·q)(i) = p(q(i))`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::SizeExceeded);
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let mut mul = Vec::with_capacity(perms.len());
        for p in &perms {
            let mut row = Vec::with_capacity(perms.len());
            for q in &perms {
                let comp: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                row.push(index(&comp));
            }
            mul.push(row);
        }
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
            .collect();
        Self::new(mul, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// The cyclic subgroup generated by `a`, as a sorted element list.
    pub fn cyclic_span(&self, a: usize) -> Vec<usize> {
        let mut out = vec![self.identity];
        let mut x = a;
        while x != self.identity {
            out.push(x);
            x = self.mul(x, a);
        }
        out.sort_unstable();
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        let mut rest: Vec<usize> = cur[k..].to_vec();
        rest.sort_unstable();
        for v in rest {
            let pos = cur[k..].iter().position(|&x| x == v).unwrap() + k;
            cur.swap(k, pos);
            rec(cur, k + 1, out);
            // restore sorted tail order by re-deriving from scratch is
            // wasteful; swap back instead
            let pos_back = cur[k..].iter().position(|&x| x == v).unwrap() + k;
            cur.swap(k, pos_back);
        }
    }
    rec(&mut cur, 0, &mut out);
    out.sort_unstable();
    out
}

/// A subgroup of a table group, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupMark {
    members: Vec<bool>,
}

impl SubgroupMark {
    pub fn new(parent: &GroupTable, members: Vec<bool>) -> Result<Self, GroupError> {
        if members.len() != parent.order() {
            return Err(GroupError::BadElement);
        }
        if !members[parent.identity()] {
            return Err(GroupError::NotASubgroup);
        }
        let elems: Vec<usize> = (0..parent.order()).filter(|&i| members[i]).collect();
        for &a in &elems {
            if !members[parent.inv(a)] {
                return Err(GroupError::NotASubgroup);
            }
            for &b in &elems {
                if !members[parent.mul(a, b)] {
                    return Err(GroupError::NotASubgroup);
                }
            }
        }
        Ok(SubgroupMark { members })
    }

    pub fn from_elements(parent: &GroupTable, elems: &[usize]) -> Result<Self, GroupError> {
        let mut members = vec![false; parent.order()];
        for &e in elems {
            *members.get_mut(e).ok_or(GroupError::BadElement)? = true;
        }
        Self::new(parent, members)
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members[a]
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }
}

/// The point stabilizers of a [`GroupTable::symmetric`] group, recovered
/// from its one-line labels.
pub fn symmetric_point_stabilizers(
    g: &GroupTable,
    n: usize,
) -> Result<Vec<SubgroupMark>, GroupError> {
    (0..n)
        .map(|pt| {
            let elems: Vec<usize> = (0..g.order())
                .filter(|&i| {
                    g.label(i)
                        .as_bytes()
                        .get(pt)
                        .map_or(false, |&b| (b - b'0') as usize == pt)
                })
                .collect();
            SubgroupMark::from_elements(g, &elems)
        })
        .collect()
}

/// Orbit partition of the group under conjugation.
pub fn conjugacy_classes(g: &GroupTable) -> Vec<Vec<usize>> {
    let m = g.order();
    let mut seen = vec![false; m];
    let mut classes = Vec::new();
    for x in 0..m {
        if seen[x] {
            continue;
        }
        let mut class: Vec<usize> = (0..m)
            .map(|s| g.mul(g.mul(s, x), g.inv(s)))
            .collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            seen[y] = true;
        }
        classes.push(class);
    }
    classes
}

/// `{s : sx = xs}`, always a subgroup.
pub fn centralizer(g: &GroupTable, x: usize) -> SubgroupMark {
    let members = (0..g.order()).map(|s| g.mul(s, x) == g.mul(x, s)).collect();
    SubgroupMark { members }
}

/// `S₁ = ∪ᵢ Γᵢ` and `S₂ = {σ : C_G(σ) ⊆ Γᵢ for some i}` as masks.
/// `S₂ ⊆ S₁` always, since `σ` centralizes itself.
pub fn s1_s2(
    g: &GroupTable,
    subgroups: &[SubgroupMark],
) -> Result<(Vec<bool>, Vec<bool>), GroupError> {
    if subgroups.is_empty() {
        return Err(GroupError::EmptySubgroupList);
    }
    let m = g.order();
    let mut s1 = vec![false; m];
    let mut s2 = vec![false; m];
    for x in 0..m {
        s1[x] = subgroups.iter().any(|h| h.contains(x));
        let c = centralizer(g, x);
        s2[x] = subgroups
            .iter()
            .any(|h| (0..m).all(|y| !c.contains(y) || h.contains(y)));
    }
    Ok((s1, s2))
}

/// The wreath product `Γ′ = A^{|G|} ⋊ G` with `A = (Z/2)^r`; `G` permutes
/// the coordinates by left translation.
///
/// Elements are encoded as `f_bits · |G| + σ`, where bit `g·r + t` of
/// `f_bits` is coordinate `t` of `f(g)`. Products never materialize a
/// table: `(f₁,σ₁)(f₂,σ₂) = (f₁ ⊕ σ₁·f₂, σ₁σ₂)` with
/// `(σ·f)(g) = f(σ⁻¹g)` is a block permutation plus an XOR.
#[derive(Debug, Clone)]
pub struct WreathGroup {
    base: GroupTable,
    r: usize,
    order: u64,
}

pub fn wreath_product(g: &GroupTable, r: usize) -> Result<WreathGroup, GroupError> {
    let m = g.order() as u64;
    let bits = r
        .checked_mul(g.order())
        .filter(|&b| b < 63)
        .ok_or(GroupError::SizeExceeded)?;
    let order = (1u64 << bits)
        .checked_mul(m)
        .filter(|&o| o <= 1 << 20)
        .ok_or(GroupError::SizeExceeded)?;
    Ok(WreathGroup {
        base: g.clone(),
        r,
        order,
    })
}

impl WreathGroup {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn base(&self) -> &GroupTable {
        &self.base
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn identity(&self) -> u64 {
        self.base.identity() as u64
    }

    pub fn encode(&self, f_bits: u64, sigma: usize) -> u64 {
        f_bits * self.base.order() as u64 + sigma as u64
    }

    /// Projection `π : Γ′ → G`.
    pub fn project(&self, x: u64) -> usize {
        (x % self.base.order() as u64) as usize
    }

    pub fn f_bits(&self, x: u64) -> u64 {
        x / self.base.order() as u64
    }

    fn act(&self, sigma: usize, f_bits: u64) -> u64 {
        let m = self.base.order();
        let mask = (1u64 << self.r) - 1;
        let sigma_inv = self.base.inv(sigma);
        let mut out = 0u64;
        for g in 0..m {
            let src = self.base.mul(sigma_inv, g);
            let block = (f_bits >> (src * self.r)) & mask;
            out |= block << (g * self.r);
        }
        out
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        let (fx, sx) = (self.f_bits(x), self.project(x));
        let (fy, sy) = (self.f_bits(y), self.project(y));
        self.encode(fx ^ self.act(sx, fy), self.base.mul(sx, sy))
    }

    pub fn inv(&self, x: u64) -> u64 {
        let (fx, sx) = (self.f_bits(x), self.project(x));
        let si = self.base.inv(sx);
        // every element of A is its own inverse
        self.encode(self.act(si, fx), si)
    }

    /// Materializes the multiplication table; quadratic in the order, so
    /// capped well below the enumeration guard.
    pub fn to_table(&self) -> Result<GroupTable, GroupError> {
        if self.order > 1 << 12 {
            return Err(GroupError::SizeExceeded);
        }
        let m = self.order as usize;
        let mul = (0..m)
            .map(|i| (0..m).map(|j| self.mul(i as u64, j as u64) as usize).collect())
            .collect();
        let labels = (0..m)
            .map(|i| {
                format!(
                    "({:0width$b},{})",
                    self.f_bits(i as u64),
                    self.base.label(self.project(i as u64)),
                    width = self.r * self.base.order()
                )
            })
            .collect();
        GroupTable::new(mul, Some(labels))
    }
}

/// Exhaustive verification report for the wreath amplification bound.
#[derive(Debug, Clone, Serialize)]
pub struct Rosen3Report {
    pub group_order: usize,
    pub r: usize,
    pub s1_size: usize,
    pub s2_size: usize,
    pub wreath_order: u64,
    pub s1_prime_size: u64,
    pub s2_prime_size: u64,
    /// Elements `ξ ∈ S′ = π⁻¹(S₁)` with `π(C_{Γ′}(ξ)) ⊆ ⟨π(ξ)⟩`.
    pub qualifying_count: u64,
    /// `(1 − |G|/2^r) · #S′`; the qualifying count must reach it.
    pub bound: f64,
    /// True when `2^r ≤ |G|`, making the bound nonpositive.
    pub vacuous: bool,
    pub s2_prime_ratio: f64,
    pub s1_ratio: f64,
}

/// Enumerates the wreath product `Γ′ = (Z/2)^{r·|G|} ⋊ G` and verifies the
/// amplification bound: at least `(1 − |G|/2^r)·#S′` elements of
/// `S′ = π⁻¹(S₁)` have `π(C_{Γ′}(ξ)) ⊆ ⟨π(ξ)⟩`.
///
/// The report also computes `S₂′` for the subgroups `Γᵢ′ = π⁻¹(Γᵢ)` by the
/// plain definition, independently of the qualifying count; the two
/// quantities are related but not defined identically, so both are
/// returned side by side.
pub fn rosen3_check(
    g: &GroupTable,
    subgroups: &[SubgroupMark],
    r: usize,
) -> Result<Rosen3Report, GroupError> {
    if subgroups.is_empty() {
        return Err(GroupError::EmptySubgroupList);
    }
    let (s1, s2) = s1_s2(g, subgroups)?;
    let s1_size = s1.iter().filter(|&&b| b).count();
    let s2_size = s2.iter().filter(|&&b| b).count();
    let w = wreath_product(g, r)?;
    let order = w.order();
    let m = g.order();

    let mut s1_prime_size = 0u64;
    let mut s2_prime_size = 0u64;
    let mut qualifying = 0u64;
    for x in 0..order {
        let sigma = w.project(x);
        let in_s1_prime = s1[sigma];
        if in_s1_prime {
            s1_prime_size += 1;
        }
        // π(C_{Γ′}(x)) as a mask over G
        let mut proj_cent = vec![false; m];
        for y in 0..order {
            if w.mul(x, y) == w.mul(y, x) {
                proj_cent[w.project(y)] = true;
            }
        }
        // S₂′ membership: C(x) ⊆ π⁻¹(Γᵢ) iff π(C(x)) ⊆ Γᵢ
        let in_s2_prime = subgroups
            .iter()
            .any(|h| (0..m).all(|t| !proj_cent[t] || h.contains(t)));
        if in_s2_prime {
            s2_prime_size += 1;
        }
        if in_s1_prime {
            let span = g.cyclic_span(sigma);
            let contained = (0..m).all(|t| !proj_cent[t] || span.binary_search(&t).is_ok());
            if contained {
                qualifying += 1;
            }
        }
    }

    let a_size = (1u64 << r) as f64;
    let bound = (1.0 - m as f64 / a_size) * s1_prime_size as f64;
    Ok(Rosen3Report {
        group_order: m,
        r,
        s1_size,
        s2_size,
        wreath_order: order,
        s1_prime_size,
        s2_prime_size,
        qualifying_count: qualifying,
        bound,
        vacuous: (1usize << r) <= m,
        s2_prime_ratio: s2_prime_size as f64 / order as f64,
        s1_ratio: s1_size as f64 / m as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The three point stabilizers of S₃ acting on {0,1,2}.
    fn s3_stabilizers(s3: &GroupTable) -> Vec<SubgroupMark> {
        symmetric_point_stabilizers(s3, 3).unwrap()
    }

    #[test]
    fn construction_and_axioms() {
        let z5 = GroupTable::cyclic(5).unwrap();
        assert_eq!(z5.order(), 5);
        assert_eq!(z5.identity(), 0);
        assert_eq!(z5.inv(2), 3);

        let s3 = GroupTable::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.label(s3.identity()), "012");

        // a latin square that is not associative
        let bad = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert_eq!(
            GroupTable::new(bad, None),
            Err(GroupError::NotAGroup("associativity fails"))
        );
    }

    #[test]
    fn conjugacy_class_examples() {
        let s3 = GroupTable::symmetric(3).unwrap();
        let mut sizes: Vec<usize> = conjugacy_classes(&s3).iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);

        let z6 = GroupTable::cyclic(6).unwrap();
        assert!(conjugacy_classes(&z6).iter().all(|c| c.len() == 1));

        // orbit-stabilizer on an order-8 wreath product
        let z2 = GroupTable::cyclic(2).unwrap();
        let w8 = wreath_product(&z2, 1).unwrap().to_table().unwrap();
        for class in conjugacy_classes(&w8) {
            let c = centralizer(&w8, class[0]);
            assert_eq!(class.len() * c.size(), w8.order());
        }
    }

    #[test]
    fn centralizer_examples() {
        let s3 = GroupTable::symmetric(3).unwrap();
        // "021" is the transposition fixing 0
        let t = (0..6).find(|&i| s3.label(i) == "021").unwrap();
        assert_eq!(centralizer(&s3, t).size(), 2);
        assert_eq!(centralizer(&s3, s3.identity()).size(), 6);
        let z6 = GroupTable::cyclic(6).unwrap();
        for x in 0..6 {
            assert_eq!(centralizer(&z6, x).size(), 6);
        }
    }

    #[test]
    fn s1_s2_examples() {
        let s3 = GroupTable::symmetric(3).unwrap();
        let stabs = s3_stabilizers(&s3);
        assert!(stabs.iter().all(|h| h.size() == 2));
        let (s1, s2) = s1_s2(&s3, &stabs).unwrap();
        assert_eq!(s1.iter().filter(|&&b| b).count(), 4);
        assert_eq!(s2.iter().filter(|&&b| b).count(), 3);
        // S₂ is exactly the transpositions: the identity has centralizer
        // S₃ and the 3-cycles are missing from S₁ entirely
        assert!(!s2[s3.identity()]);

        let z2 = GroupTable::cyclic(2).unwrap();
        let trivial = SubgroupMark::from_elements(&z2, &[0]).unwrap();
        let (s1, s2) = s1_s2(&z2, &[trivial]).unwrap();
        assert_eq!(s1, vec![true, false]);
        assert_eq!(s2, vec![false, false]);

        let whole = SubgroupMark::from_elements(&z2, &[0, 1]).unwrap();
        let (s1, s2) = s1_s2(&z2, &[whole]).unwrap();
        assert!(s1.iter().all(|&b| b));
        assert!(s2.iter().all(|&b| b));
    }

    #[test]
    fn s2_subset_s1_and_identity_rule() {
        let s3 = GroupTable::symmetric(3).unwrap();
        for subgroups in [
            s3_stabilizers(&s3),
            vec![SubgroupMark::from_elements(&s3, &(0..6).collect::<Vec<_>>()).unwrap()],
        ] {
            let (s1, s2) = s1_s2(&s3, &subgroups).unwrap();
            for x in 0..6 {
                assert!(!s2[x] || s1[x]);
            }
            let has_full = subgroups.iter().any(|h| h.size() == 6);
            assert_eq!(s2[s3.identity()], has_full);
        }
    }

    #[test]
    fn subgroup_validation() {
        let s3 = GroupTable::symmetric(3).unwrap();
        // {e, one 3-cycle} is not closed
        let three_cycle = (0..6)
            .find(|&i| s3.label(i) == "120")
            .unwrap();
        assert!(SubgroupMark::from_elements(&s3, &[s3.identity(), three_cycle]).is_err());
        assert!(SubgroupMark::from_elements(&s3, &[three_cycle]).is_err());
    }

    #[test]
    fn wreath_orders_and_projection() {
        let z2 = GroupTable::cyclic(2).unwrap();
        assert_eq!(wreath_product(&z2, 1).unwrap().order(), 8);
        let w = wreath_product(&z2, 2).unwrap();
        assert_eq!(w.order(), 32);
        let kernel = (0..w.order())
            .filter(|&x| w.project(x) == w.base().identity())
            .count();
        assert_eq!(kernel, 16);
        let image: std::collections::BTreeSet<usize> =
            (0..w.order()).map(|x| w.project(x)).collect();
        assert_eq!(image.len(), 2);

        let s3 = GroupTable::symmetric(3).unwrap();
        assert_eq!(wreath_product(&s3, 1).unwrap().order(), 384);
        assert!(matches!(
            wreath_product(&s3, 3).unwrap_err(),
            GroupError::SizeExceeded
        ));
    }

    #[test]
    fn wreath_table_matches_formula_mul() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let w = wreath_product(&z2, 2).unwrap();
        // to_table revalidates the axioms from scratch
        let table = w.to_table().unwrap();
        for a in 0..w.order() {
            for b in 0..w.order() {
                assert_eq!(table.mul(a as usize, b as usize), w.mul(a, b) as usize);
            }
            assert_eq!(table.inv(a as usize), w.inv(a) as usize);
        }
    }

    #[test]
    fn rosen3_z2_closed_forms() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let trivial = SubgroupMark::from_elements(&z2, &[0]).unwrap();
        for r in 1..=4usize {
            let report = rosen3_check(&z2, &[trivial.clone()], r).unwrap();
            assert_eq!(report.s1_prime_size, 1 << (2 * r));
            assert!(
                report.qualifying_count as f64 >= report.bound,
                "r = {r}: {} < {}",
                report.qualifying_count,
                report.bound
            );
            let expected_ratio = (1.0 - 0.5f64.powi(r as i32)) / 2.0;
            assert!(
                (report.s2_prime_ratio - expected_ratio).abs() < 1e-12,
                "r = {r}: {} vs {}",
                report.s2_prime_ratio,
                expected_ratio
            );
            assert_eq!(report.vacuous, r == 1);
        }
        // r = 2 numbers spelled out
        let report = rosen3_check(&z2, &[trivial], 2).unwrap();
        assert_eq!(report.s1_prime_size, 16);
        assert_eq!(report.s2_prime_size, 12);
        assert_eq!(report.bound, 8.0);
    }

    #[test]
    fn rosen3_s3_stabilizers() {
        let s3 = GroupTable::symmetric(3).unwrap();
        let stabs = s3_stabilizers(&s3);
        let report = rosen3_check(&s3, &stabs, 1).unwrap();
        assert_eq!(report.s1_size, 4);
        assert_eq!(report.s2_size, 3);
        assert_eq!(report.wreath_order, 384);
        assert!(report.qualifying_count as f64 >= report.bound);
        assert!(report.vacuous);
        assert!(report.s2_prime_ratio <= report.s1_ratio);
    }

    #[test]
    fn rosen3_ratio_monotone_in_r() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let z3 = GroupTable::cyclic(3).unwrap();
        for g in [z2, z3] {
            let trivial = SubgroupMark::from_elements(&g, &[g.identity()]).unwrap();
            let mut prev = -1.0f64;
            for r in 1..=3usize {
                if wreath_product(&g, r).is_err() {
                    break;
                }
                let report = rosen3_check(&g, &[trivial.clone()], r).unwrap();
                assert!(report.s2_prime_ratio >= prev);
                assert!(report.s2_prime_ratio <= report.s1_ratio + 1e-12);
                prev = report.s2_prime_ratio;
            }
        }
    }
}
