//! Signed permutations, the groups W(Dₙ), O(Dₙ), O′(D₄), invariance tests,
//! and brute-force lattice enumeration.
//!
//! `Dₙ` is the set of integer vectors with even coordinate sum. Its Weyl
//! group W(Dₙ) acts by permutations combined with an even number of sign
//! changes; O(Dₙ) allows any number of sign changes. For n = 4 the full
//! integral orthogonal group is strictly larger (triality); only the signed
//! permutation subgroup O′(D₄) is modelled here and requests for full O(D₄)
//! are rejected.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::qexp::QExpansion;

/// Permutation combined with sign flips: `(g·x)_i = sign[i] · x[source[i]]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedPermutation {
    source: Vec<usize>,
    sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(source: Vec<usize>, sign: Vec<i8>) -> Result<Self> {
        let n = source.len();
        if sign.len() != n {
            return Err(Error::VarMismatch(sign.len(), n));
        }
        let mut seen = vec![false; n];
        for &s in &source {
            if s >= n || seen[s] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[s] = true;
        }
        if sign.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("signs must be ±1".into()));
        }
        Ok(SignedPermutation { source, sign })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            source: (0..n).collect(),
            sign: vec![1; n],
        }
    }

    /// Swaps coordinates `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut source: Vec<usize> = (0..n).collect();
        source.swap(i, j);
        SignedPermutation { source, sign: vec![1; n] }
    }

    /// Flips the sign of a single coordinate.
    pub fn sign_flip(n: usize, i: usize) -> Self {
        let mut sign = vec![1; n];
        sign[i] = -1;
        SignedPermutation { source: (0..n).collect(), sign }
    }

    /// Flips the signs of two coordinates simultaneously.
    pub fn double_flip(n: usize, i: usize, j: usize) -> Self {
        let mut sign = vec![1; n];
        sign[i] = -1;
        sign[j] = -1;
        SignedPermutation { source: (0..n).collect(), sign }
    }

    pub fn size(&self) -> usize {
        self.source.len()
    }

    /// Number of `-1` signs mod 2.
    pub fn parity(&self) -> u8 {
        (self.sign.iter().filter(|&&s| s == -1).count() % 2) as u8
    }

    /// Applies to an integer vector (doubled exponents or lattice points).
    pub fn apply(&self, v: &[i32]) -> SmallVec<[i32; 8]> {
        self.source
            .iter()
            .zip(&self.sign)
            .map(|(&src, &s)| (s as i32) * v[src])
            .collect()
    }

    /// Composition: `(a.compose(b))·x = a·(b·x)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let n = self.size();
        if other.size() != n {
            return Err(Error::VarMismatch(other.size(), n));
        }
        let mut source = Vec::with_capacity(n);
        let mut sign = Vec::with_capacity(n);
        for i in 0..n {
            source.push(other.source[self.source[i]]);
            sign.push(self.sign[i] * other.sign[self.source[i]]);
        }
        Ok(SignedPermutation { source, sign })
    }

    pub fn inverse(&self) -> Self {
        let n = self.size();
        let mut source = vec![0usize; n];
        let mut sign = vec![1i8; n];
        for i in 0..n {
            source[self.source[i]] = i;
            sign[self.source[i]] = self.sign[i];
        }
        SignedPermutation { source, sign }
    }
}

/// Which signed-permutation group to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupTag {
    /// Weyl group: permutations and evenly many sign changes.
    Weyl(usize),
    /// Full integral orthogonal group of Dₙ for n ≠ 4.
    Orthogonal(usize),
    /// Signed-permutation subgroup of O(D₄); the triality rotations are
    /// deliberately not modelled.
    OPrimeD4,
}

impl GroupTag {
    pub fn rank(&self) -> usize {
        match *self {
            GroupTag::Weyl(n) | GroupTag::Orthogonal(n) => n,
            GroupTag::OPrimeD4 => 4,
        }
    }

    fn check(&self) -> Result<()> {
        match *self {
            GroupTag::Orthogonal(4) => Err(Error::Unsupported(
                "O(D4) contains triality rotations beyond signed permutations; use OPrimeD4".into(),
            )),
            GroupTag::Weyl(n) | GroupTag::Orthogonal(n) if n >= 1 => Ok(()),
            GroupTag::OPrimeD4 => Ok(()),
            _ => Err(Error::InvalidArgument("group rank must be positive".into())),
        }
    }
}

/// Generators: adjacent transpositions plus a single sign flip on the first
/// coordinate for O(Dₙ) and O′(D₄), or a simultaneous flip of the first two
/// coordinates for W(Dₙ).
pub fn group_generators(tag: GroupTag) -> Result<Vec<SignedPermutation>> {
    tag.check()?;
    let n = tag.rank();
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        gens.push(SignedPermutation::transposition(n, i, i + 1));
    }
    match tag {
        GroupTag::Weyl(_) => {
            if n >= 2 {
                gens.push(SignedPermutation::double_flip(n, 0, 1));
            }
        }
        GroupTag::Orthogonal(_) | GroupTag::OPrimeD4 => {
            gens.push(SignedPermutation::sign_flip(n, 0));
        }
    }
    Ok(gens)
}

/// Full group by closure under the generators. Only sensible for small n;
/// used as the oracle against the generator-only invariance tests.
pub fn enumerate_group(tag: GroupTag) -> Result<Vec<SignedPermutation>> {
    let gens = group_generators(tag)?;
    let n = tag.rank();
    let mut elems = vec![SignedPermutation::identity(n)];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for h in &gens {
                let gh = g.compose(h)?;
                if !elems.contains(&gh) {
                    elems.push(gh.clone());
                    next.push(gh);
                }
            }
        }
        frontier = next;
    }
    Ok(elems)
}

/// Invariance of every stored coefficient under every generator. Testing
/// generators suffices because the action is a homomorphism.
pub fn is_invariant(a: &QExpansion, tag: GroupTag) -> Result<bool> {
    let gens = group_generators(tag)?;
    if tag.rank() != a.nvars() {
        return Err(Error::VarMismatch(tag.rank(), a.nvars()));
    }
    for g in &gens {
        for (_, coeff) in a.levels() {
            if &coeff.act(g)? != coeff {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Invariant under the Weyl generators and negated by a single sign flip.
pub fn is_anti_invariant(a: &QExpansion, tag: GroupTag) -> Result<bool> {
    let n = tag.rank();
    match tag {
        GroupTag::Orthogonal(_) | GroupTag::OPrimeD4 => {}
        GroupTag::Weyl(_) => {
            return Err(Error::InvalidArgument(
                "anti-invariance is relative to the orthogonal group".into(),
            ))
        }
    }
    tag.check()?;
    if !is_invariant(a, GroupTag::Weyl(n))? {
        return Ok(false);
    }
    let flip = SignedPermutation::sign_flip(n, 0);
    for (_, coeff) in a.levels() {
        if coeff.act(&flip)? != coeff.neg() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lattices the enumeration oracle understands. Points are produced in
/// doubled coordinates so that the half-integer glue vectors stay integral.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lattice {
    /// Integer vectors with even coordinate sum.
    Dn(usize),
    /// All integer vectors.
    Zn(usize),
    /// The coset Dₙ + (1/2, …, 1/2): in doubled coordinates, all-odd vectors
    /// whose entry sum is ≡ n mod 4 (equivalently Σ mᵢ even for the integer
    /// offsets).
    DnGlue(usize),
}

impl Lattice {
    pub fn rank(&self) -> usize {
        match *self {
            Lattice::Dn(n) | Lattice::Zn(n) | Lattice::DnGlue(n) => n,
        }
    }
}

/// All lattice vectors with `(l,l) ≤ max_norm`, each exactly once, in doubled
/// coordinates (`max_norm` is in semantic units: `(l,l) = Σ (xᵢ/2)²`).
///
/// Recursive box search with a norm budget, so 16-dimensional cosets stay
/// cheap at the small norms the oracles need.
pub fn enumerate_lattice_vectors(lattice: Lattice, max_norm: i64) -> Vec<Vec<i32>> {
    let n = lattice.rank();
    // Doubled-coordinate norm bound: Σ xᵢ² ≤ 4·max_norm.
    let budget = 4 * max_norm;
    let mut out = Vec::new();
    let mut current = vec![0i32; n];
    let odd = matches!(lattice, Lattice::DnGlue(_));
    search(&mut out, &mut current, 0, budget, odd);
    out.retain(|v| match lattice {
        Lattice::Zn(_) => true,
        // Doubled even coordinates with even integer sum ⇒ Σ xᵢ ≡ 0 mod 4.
        Lattice::Dn(_) => v.iter().map(|&x| x as i64).sum::<i64>() % 4 == 0,
        // Integer offsets mᵢ = (xᵢ - 1)/2 must have even sum.
        Lattice::DnGlue(_) => {
            v.iter().map(|&x| ((x as i64) - 1) / 2).sum::<i64>() % 2 == 0
        }
    });
    out.sort();
    out
}

fn search(out: &mut Vec<Vec<i32>>, current: &mut Vec<i32>, idx: usize, budget: i64, odd: bool) {
    if budget < 0 {
        return;
    }
    if idx == current.len() {
        out.push(current.clone());
        return;
    }
    let step = 2;
    let start: i32 = if odd { 1 } else { 0 };
    // x = ±(start + 2k); x = 0 only in the even case.
    let mut x = start;
    loop {
        let sq = (x as i64) * (x as i64);
        if sq > budget {
            break;
        }
        current[idx] = x;
        search(out, current, idx + 1, budget - sq, odd);
        if x != 0 {
            current[idx] = -x;
            search(out, current, idx + 1, budget - sq, odd);
        }
        x += step;
    }
    current[idx] = 0;
}

/// Semantic norm `(l,l)` of a doubled-coordinate point.
pub fn point_norm4(v: &[i32]) -> i64 {
    v.iter().map(|&x| (x as i64) * (x as i64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_counts() {
        let w2 = group_generators(GroupTag::Weyl(2)).unwrap();
        assert_eq!(w2.len(), 2); // swap(1,2) and flip(1,2)
        let o3 = group_generators(GroupTag::Orthogonal(3)).unwrap();
        assert_eq!(o3.len(), 3); // two transpositions + one flip
        assert!(group_generators(GroupTag::Orthogonal(4)).is_err());
        assert!(group_generators(GroupTag::OPrimeD4).is_ok());
    }

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_group(GroupTag::Weyl(2)).unwrap().len(), 4);
        assert_eq!(enumerate_group(GroupTag::Orthogonal(2)).unwrap().len(), 8);
        assert_eq!(enumerate_group(GroupTag::Weyl(3)).unwrap().len(), 24);
        assert_eq!(enumerate_group(GroupTag::Orthogonal(3)).unwrap().len(), 48);
    }

    #[test]
    fn composition_and_inverse() {
        let g = SignedPermutation::new(vec![1, 2, 0], vec![1, -1, 1]).unwrap();
        let h = SignedPermutation::sign_flip(3, 2);
        let gh = g.compose(&h).unwrap();
        let v = [5, 7, -3];
        let via_compose = gh.apply(&v);
        let via_steps = g.apply(&h.apply(&v));
        assert_eq!(via_compose, via_steps);
        let id = g.compose(&g.inverse()).unwrap();
        assert_eq!(id, SignedPermutation::identity(3));
    }

    #[test]
    fn d2_vectors_norm_two() {
        // {0, (±1, ±1)} — five vectors.
        let pts = enumerate_lattice_vectors(Lattice::Dn(2), 2);
        assert_eq!(pts.len(), 5);
        assert!(pts.contains(&vec![0, 0]));
        assert!(pts.contains(&vec![2, 2]));
        assert!(pts.contains(&vec![-2, 2]));
    }

    #[test]
    fn e8_root_count() {
        // Roots of E8 = D8 ∪ (D8 + glue): norm 2 vectors.
        let mut count = 0;
        for pts in [
            enumerate_lattice_vectors(Lattice::Dn(8), 2),
            enumerate_lattice_vectors(Lattice::DnGlue(8), 2),
        ] {
            count += pts.iter().filter(|v| point_norm4(v) == 8).count();
        }
        assert_eq!(count, 240);
    }

    #[test]
    fn d16_root_count() {
        let pts = enumerate_lattice_vectors(Lattice::Dn(16), 2);
        let roots = pts.iter().filter(|v| point_norm4(v) == 8).count();
        assert_eq!(roots, 480);
    }

    #[test]
    fn enumeration_closed_under_generators() {
        let pts = enumerate_lattice_vectors(Lattice::Dn(3), 4);
        let gens = group_generators(GroupTag::Orthogonal(3)).unwrap();
        for g in &gens {
            for p in &pts {
                let image: Vec<i32> = g.apply(p).to_vec();
                assert!(pts.contains(&image));
            }
        }
    }

    #[test]
    fn glue_coset_minimum() {
        // Smallest D8+s vectors: all entries ±1/2 with evenly many minus
        // signs — 128 of them at norm 2.
        let pts = enumerate_lattice_vectors(Lattice::DnGlue(8), 2);
        assert_eq!(pts.len(), 128);
        assert!(pts.iter().all(|v| point_norm4(v) == 8));
    }
}
