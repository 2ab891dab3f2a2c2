//! Sparse multivariate Laurent polynomials over exact rationals.
//!
//! Exponents live in `(1/2)ℤⁿ` and are stored doubled, so the exponent
//! vector of `ζ₁^{1/2}ζ₂^{-1/2}` is `[1, -1]`. The doubling convention is
//! applied uniformly: every consumer of [`ExponentVec`] sees doubled
//! integers, and the semantic exponent is always `entry / 2`.
//!
//! Terms are kept in a `BTreeMap` ordered by graded lexicographic order on
//! the doubled exponents (grade = sum of entries, ties broken
//! lexicographically). The order is compatible with multiplication, which is
//! what exact division needs: the leading term of a product is the product
//! of the leading terms.
//!
//! Canonical form: no zero coefficient is ever stored, and all keys of one
//! polynomial have the same length.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::symmetry::SignedPermutation;

/// Doubled exponent vector with cached grade.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentVec {
    grade: i64,
    entries: SmallVec<[i32; 8]>,
}

impl ExponentVec {
    pub fn new(entries: impl Into<SmallVec<[i32; 8]>>) -> Self {
        let entries = entries.into();
        let grade = entries.iter().map(|&x| x as i64).sum();
        ExponentVec { grade, entries }
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVec::new(SmallVec::from_elem(0, n))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of doubled entries.
    pub fn grade(&self) -> i64 {
        self.grade
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    pub fn is_zero_vec(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// All doubled entries even, i.e. the semantic vector is integral.
    pub fn is_all_integer(&self) -> bool {
        self.entries.iter().all(|&x| x % 2 == 0)
    }

    /// All doubled entries odd, i.e. every semantic entry is a strict half.
    pub fn is_all_half(&self) -> bool {
        self.entries.iter().all(|&x| x % 2 != 0)
    }

    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        let entries: SmallVec<[i32; 8]> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ExponentVec {
            grade: self.grade + other.grade,
            entries,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        let entries: SmallVec<[i32; 8]> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        ExponentVec {
            grade: self.grade - other.grade,
            entries,
        }
    }

    /// Doubles every entry (the semantic exponent doubles).
    pub fn doubled(&self) -> Self {
        ExponentVec::new(
            self.entries
                .iter()
                .map(|&x| x * 2)
                .collect::<SmallVec<[i32; 8]>>(),
        )
    }

    pub fn scaled(&self, c: i32) -> Self {
        ExponentVec::new(
            self.entries
                .iter()
                .map(|&x| x * c)
                .collect::<SmallVec<[i32; 8]>>(),
        )
    }
}

impl Ord for ExponentVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries
            .len()
            .cmp(&other.entries.len())
            .then_with(|| self.grade.cmp(&other.grade))
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for ExponentVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Small dense matrix of rationals; just enough linear algebra for variable
/// changes and norm-form pullbacks.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            data.iter().map(|&x| crate::rational::rat(x)).collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Rational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = crate::rational::rat(1);
        }
        RatMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument("matrix shape mismatch".into()));
        }
        let mut data = vec![Rational::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.at(k, j);
                    data[i * other.cols + j] += t;
                }
            }
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.at(r, col).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.at(col, col).clone();
            for j in 0..n {
                *a.at_mut(col, j) /= &p;
                *inv.at_mut(col, j) /= &p;
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..n {
                    let t = &f * a.at(col, j);
                    *a.at_mut(r, j) -= t;
                    let t = &f * inv.at(col, j);
                    *inv.at_mut(r, j) -= t;
                }
            }
        }
        Ok(inv)
    }

    /// Applies the matrix to an integer vector, returning exact rationals.
    pub fn apply(&self, v: &[i32]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::VarMismatch(v.len(), self.cols));
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            for (j, &x) in v.iter().enumerate() {
                if x != 0 {
                    *slot += self.at(i, j) * crate::rational::rat(x as i64);
                }
            }
        }
        Ok(out)
    }
}

/// Sparse Laurent polynomial in `nvars` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: std::collections::BTreeMap<ExponentVec, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: Default::default(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = LaurentPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(ExponentVec::zeros(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        LaurentPoly::constant(nvars, crate::rational::rat(1))
    }

    /// Single term `c · ζ^(e/2)`, `e` doubled.
    pub fn monomial(nvars: usize, doubled: &[i32], c: Rational) -> Result<Self> {
        if doubled.len() != nvars {
            return Err(Error::VarMismatch(doubled.len(), nvars));
        }
        let mut p = LaurentPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(ExponentVec::new(SmallVec::from_slice(doubled)), c);
        }
        Ok(p)
    }

    /// Builds from `(doubled exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<i32>, Rational)>,
    ) -> Result<Self> {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VarMismatch(e.len(), nvars));
            }
            p.add_term(ExponentVec::new(SmallVec::from_vec(e)), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExponentVec, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, doubled: &[i32]) -> Rational {
        self.terms
            .get(&ExponentVec::new(SmallVec::from_slice(doubled)))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Leading term under gradlex, if any.
    pub fn leading(&self) -> Option<(&ExponentVec, &Rational)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, e: ExponentVec, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch(self.nvars, other.nvars));
        }
        let (big, small) = if self.nterms() >= other.nterms() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (e, c) in small.iter() {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch(self.nvars, other.nvars));
        }
        let mut out = self.clone();
        for (e, c) in other.iter() {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -std::mem::replace(c, Rational::zero());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch(self.nvars, other.nvars));
        }
        let mut out = LaurentPoly::zero(self.nvars);
        out.add_mul_assign(self, other, false)?;
        Ok(out)
    }

    /// `self ± a·b` accumulated in place; the workhorse of the q-expansion
    /// convolutions.
    pub(crate) fn add_mul_assign(&mut self, a: &Self, b: &Self, negate: bool) -> Result<()> {
        if a.nvars != b.nvars || a.nvars != self.nvars {
            return Err(Error::VarMismatch(a.nvars, b.nvars));
        }
        if a.is_zero() || b.is_zero() {
            return Ok(());
        }
        let (outer, inner) = if a.nterms() <= b.nterms() { (a, b) } else { (b, a) };
        for (ea, ca) in outer.iter() {
            for (eb, cb) in inner.iter() {
                let c = ca * cb;
                self.add_term(ea.add(eb), if negate { -c } else { c });
            }
        }
        Ok(())
    }

    /// Exact quotient `q` with `q * den == self`.
    ///
    /// Repeatedly cancels the gradlex-leading term. Non-termination is caught
    /// by support bounds: when the division is exact, every quotient exponent
    /// must lie, coordinate by coordinate, between `min(num) - min(den)` and
    /// `max(num) - max(den)`; a candidate term outside that box proves the
    /// remainder can never cancel.
    pub fn exact_div(&self, den: &Self) -> Result<Self> {
        if self.nvars != den.nvars {
            return Err(Error::VarMismatch(self.nvars, den.nvars));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.nvars));
        }

        let coord_bounds = |p: &Self| -> (Vec<i32>, Vec<i32>) {
            let mut lo = vec![i32::MAX; p.nvars];
            let mut hi = vec![i32::MIN; p.nvars];
            for (e, _) in p.iter() {
                for (i, &x) in e.entries().iter().enumerate() {
                    lo[i] = lo[i].min(x);
                    hi[i] = hi[i].max(x);
                }
            }
            (lo, hi)
        };
        let (nlo, nhi) = coord_bounds(self);
        let (dlo, dhi) = coord_bounds(den);
        let box_lo: Vec<i64> = nlo.iter().zip(&dlo).map(|(&a, &b)| a as i64 - b as i64).collect();
        let box_hi: Vec<i64> = nhi.iter().zip(&dhi).map(|(&a, &b)| a as i64 - b as i64).collect();

        let (dlead_e, dlead_c) = den.leading().expect("nonzero");
        let dlead_e = dlead_e.clone();
        let dlead_c = dlead_c.clone();

        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.nvars);
        while let Some((rlead_e, rlead_c)) = rem.leading() {
            let te = rlead_e.sub(&dlead_e);
            let in_box = te
                .entries()
                .iter()
                .enumerate()
                .all(|(i, &x)| (x as i64) >= box_lo[i] && (x as i64) <= box_hi[i]);
            if !in_box {
                return Err(Error::InexactDivision(format!(
                    "remainder term with doubled exponent {:?} cannot cancel",
                    rlead_e.entries()
                )));
            }
            let tc = rlead_c / &dlead_c;
            for (e, c) in den.iter() {
                rem.add_term(te.add(e), -(&tc * c));
            }
            quot.add_term(te, tc);
        }
        Ok(quot)
    }

    /// Variable change `z = A · w`: exponents map by the transpose of `A`.
    /// Errors if an image exponent leaves `(1/2)ℤ` (doubled integers).
    pub fn substitute_linear(&self, a: &RatMatrix) -> Result<Self> {
        if a.rows() != self.nvars || a.cols() != self.nvars {
            return Err(Error::VarMismatch(a.rows(), self.nvars));
        }
        let at = a.transpose();
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in self.iter() {
            let image = at.apply(e.entries())?;
            let mut doubled = SmallVec::<[i32; 8]>::with_capacity(self.nvars);
            for r in &image {
                if !num_traits::One::is_one(r.denom()) {
                    return Err(Error::NonHalfIntegralExponent);
                }
                let n: i64 = num_traits::ToPrimitive::to_i64(r.numer())
                    .ok_or(Error::NonHalfIntegralExponent)?;
                doubled.push(i32::try_from(n).map_err(|_| Error::NonHalfIntegralExponent)?);
            }
            out.add_term(ExponentVec::new(doubled), c.clone());
        }
        Ok(out)
    }

    /// Sets `ζ_i -> 1`: sums coefficients over the i-th exponent and drops
    /// the variable. The result has one variable fewer.
    pub fn restrict(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::InvalidArgument(format!(
                "restrict index {} out of range for {} variables",
                i, self.nvars
            )));
        }
        let mut out = LaurentPoly::zero(self.nvars - 1);
        for (e, c) in self.iter() {
            let mut entries = SmallVec::<[i32; 8]>::with_capacity(self.nvars - 1);
            for (j, &x) in e.entries().iter().enumerate() {
                if j != i {
                    entries.push(x);
                }
            }
            out.add_term(ExponentVec::new(entries), c.clone());
        }
        Ok(out)
    }

    /// Applies a signed permutation to the exponent vectors.
    pub fn act(&self, g: &SignedPermutation) -> Result<Self> {
        if g.size() != self.nvars {
            return Err(Error::VarMismatch(g.size(), self.nvars));
        }
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in self.iter() {
            out.add_term(ExponentVec::new(g.apply(e.entries())), c.clone());
        }
        Ok(out)
    }

    /// Doubles every exponent (the `ζ -> ζ²` substitution).
    pub fn exponents_doubled(&self) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in self.iter() {
            out.add_term(e.doubled(), c.clone());
        }
        out
    }

    pub fn exponents_scaled(&self, c: i32) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, co) in self.iter() {
            out.add_term(e.scaled(c), co.clone());
        }
        out
    }

    /// Embeds a polynomial into `nvars` variables, its variable `j` becoming
    /// variable `at + j`.
    pub fn embed(&self, nvars: usize, at: usize) -> Result<Self> {
        if at + self.nvars > nvars {
            return Err(Error::InvalidArgument(format!(
                "cannot embed {} variables at offset {} into {}",
                self.nvars, at, nvars
            )));
        }
        let mut out = LaurentPoly::zero(nvars);
        for (e, c) in self.iter() {
            let mut entries = SmallVec::<[i32; 8]>::from_elem(0, nvars);
            for (j, &x) in e.entries().iter().enumerate() {
                entries[at + j] = x;
            }
            out.add_term(ExponentVec::new(entries), c.clone());
        }
        Ok(out)
    }

    /// Tensor product: variables of `other` are appended after `self`'s.
    pub fn tensor(&self, other: &Self) -> Self {
        let nvars = self.nvars + other.nvars;
        let mut out = LaurentPoly::zero(nvars);
        for (ea, ca) in self.iter() {
            for (eb, cb) in other.iter() {
                let mut entries = SmallVec::<[i32; 8]>::with_capacity(nvars);
                entries.extend_from_slice(ea.entries());
                entries.extend_from_slice(eb.entries());
                out.add_term(ExponentVec::new(entries), ca * cb);
            }
        }
        out
    }

    /// The semantic-exponent-weighted sum `Σ_l (l/…) a(l)` used by the
    /// z-derivative checks: weights each coefficient by the semantic value of
    /// the single exponent entry. One-variable polynomials only.
    pub fn exponent_weighted_sum(&self) -> Result<Rational> {
        if self.nvars != 1 {
            return Err(Error::VarMismatch(self.nvars, 1));
        }
        let mut acc = Rational::zero();
        for (e, c) in self.iter() {
            acc += c * crate::rational::ratio(e.entries()[0] as i64, 2);
        }
        Ok(acc)
    }

    /// Checks the canonical-form invariants; used by tests and debug asserts.
    pub fn is_canonical(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, c)| e.len() == self.nvars && !c.is_zero())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Constants first, then small exponent norms; positives before
        // negatives inside a shell.
        let mut terms: Vec<(&ExponentVec, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let na: i64 = a.entries().iter().map(|&x| (x as i64).abs()).sum();
            let nb: i64 = b.entries().iter().map(|&x| (x as i64).abs()).sum();
            na.cmp(&nb).then_with(|| b.entries().cmp(a.entries()))
        });
        for (idx, (e, c)) in terms.iter().enumerate() {
            let (neg, mag) = crate::rational::signed_parts(c);
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let monomial = monomial_string(e);
            if monomial.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag == "1" {
                write!(f, "{}", monomial)?;
            } else {
                write!(f, "{}*{}", mag, monomial)?;
            }
        }
        Ok(())
    }
}

fn monomial_string(e: &ExponentVec) -> String {
    let mut parts = Vec::new();
    for (i, &x) in e.entries().iter().enumerate() {
        if x == 0 {
            continue;
        }
        let var = format!("ζ{}", i + 1);
        if x == 2 {
            parts.push(var);
        } else if x % 2 == 0 {
            parts.push(format!("{}^{}", var, x / 2));
        } else {
            // Half exponents are rendered as r/2.
            parts.push(format!("{}^({}/2)", var, x));
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p1(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(1, terms.iter().map(|&(e, c)| (vec![e], rat(c)))).unwrap()
    }

    #[test]
    fn add_cancellation() {
        // (ζ - 2) + 2 = ζ
        let a = p1(&[(2, 1), (0, -2)]);
        let b = p1(&[(0, 2)]);
        let s = a.add(&b).unwrap();
        assert_eq!(s, p1(&[(2, 1)]));
        assert!(s.is_canonical());
    }

    #[test]
    fn add_identity_and_half_convention() {
        let p = p1(&[(2, 3), (-1, 5)]);
        assert_eq!(p.add(&LaurentPoly::zero(1)).unwrap(), p);
        // ζ^{1/2} + ζ^{-1/2}: doubled exponents +1 and -1.
        let s = p1(&[(1, 1)]).add(&p1(&[(-1, 1)])).unwrap();
        assert_eq!(s, p1(&[(1, 1), (-1, 1)]));
        assert_eq!(s.coefficient(&[1]), rat(1));
        assert_eq!(s.coefficient(&[-1]), rat(1));
    }

    #[test]
    fn mul_binomial_square() {
        // (ζ^{1/2} - ζ^{-1/2})² = ζ - 2 + ζ^{-1}
        let b = p1(&[(1, 1), (-1, -1)]);
        assert_eq!(b.mul(&b).unwrap(), p1(&[(2, 1), (0, -2), (-2, 1)]));
        let p = p1(&[(4, 7), (-3, 2)]);
        assert_eq!(p.mul(&LaurentPoly::one(1)).unwrap(), p);
    }

    #[test]
    fn mul_two_variables() {
        let a = LaurentPoly::from_terms(2, vec![(vec![1, 0], rat(1)), (vec![-1, 0], rat(-1))]).unwrap();
        let b = LaurentPoly::from_terms(2, vec![(vec![0, 1], rat(1)), (vec![0, -1], rat(-1))]).unwrap();
        let prod = a.mul(&b).unwrap();
        let expect = LaurentPoly::from_terms(
            2,
            vec![
                (vec![1, 1], rat(1)),
                (vec![-1, 1], rat(-1)),
                (vec![1, -1], rat(-1)),
                (vec![-1, -1], rat(1)),
            ],
        )
        .unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn mul_var_mismatch() {
        let a = LaurentPoly::one(1);
        let b = LaurentPoly::one(2);
        assert!(matches!(a.mul(&b), Err(Error::VarMismatch(1, 2))));
    }

    #[test]
    fn exact_div_factorisation() {
        // (ζ - ζ^{-1}) / (ζ^{1/2} - ζ^{-1/2}) = ζ^{1/2} + ζ^{-1/2}
        let num = p1(&[(2, 1), (-2, -1)]);
        let den = p1(&[(1, 1), (-1, -1)]);
        assert_eq!(num.exact_div(&den).unwrap(), p1(&[(1, 1), (-1, 1)]));
        let p = p1(&[(3, 5), (0, -1), (-2, 2)]);
        assert_eq!(p.exact_div(&p).unwrap(), LaurentPoly::one(1));
    }

    #[test]
    fn exact_div_inexact_detected() {
        // (ζ - 2 + ζ^{-1}) / (ζ^{1/2} + ζ^{-1/2}) has no Laurent quotient.
        let num = p1(&[(2, 1), (0, -2), (-2, 1)]);
        let den = p1(&[(1, 1), (-1, 1)]);
        assert!(matches!(num.exact_div(&den), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn substitute_transpose_convention() {
        // l = (1,0), z = A·w with A = [[1,1],[1,-1]] → l_w = Aᵀ l = (1,1).
        let a = RatMatrix::from_i64(2, 2, &[1, 1, 1, -1]).unwrap();
        let p = LaurentPoly::from_terms(2, vec![(vec![2, 0], rat(1))]).unwrap();
        let q = p.substitute_linear(&a).unwrap();
        assert_eq!(q, LaurentPoly::from_terms(2, vec![(vec![2, 2], rat(1))]).unwrap());

        let id = RatMatrix::identity(2);
        let r = LaurentPoly::from_terms(2, vec![(vec![1, -1], rat(3)), (vec![0, 2], rat(-2))]).unwrap();
        assert_eq!(r.substitute_linear(&id).unwrap(), r);
    }

    #[test]
    fn substitute_round_trip() {
        let a = RatMatrix::from_i64(2, 2, &[1, 1, 1, -1]).unwrap();
        let ainv = a.inverse().unwrap();
        let p = LaurentPoly::from_terms(
            2,
            vec![(vec![1, 1], rat(1)), (vec![-1, 1], rat(-1)), (vec![2, -2], rat(5))],
        )
        .unwrap();
        let round = p.substitute_linear(&a).unwrap().substitute_linear(&ainv).unwrap();
        assert_eq!(round, p);
    }

    #[test]
    fn substitute_rejects_non_half_integral() {
        // z = 3w scales exponents by 1/... A = [[3]]: image doubled exponent 3·e fine;
        // use A with a third: e·(1/3) not half integral for e=1.
        let a = RatMatrix::new(1, 1, vec![crate::rational::ratio(1, 3)]).unwrap();
        let p = p1(&[(1, 1)]);
        assert!(matches!(p.substitute_linear(&a), Err(Error::NonHalfIntegralExponent)));
    }

    #[test]
    fn restrict_examples() {
        // ζ₂ - 2 + ζ₂^{-1} restricted in z₂ → 0
        let p = LaurentPoly::from_terms(
            2,
            vec![(vec![0, 2], rat(1)), (vec![0, 0], rat(-2)), (vec![0, -2], rat(1))],
        )
        .unwrap();
        assert!(p.restrict(1).unwrap().is_zero());
        // ζ₂ + 10 + ζ₂^{-1} → 12
        let q = LaurentPoly::from_terms(
            2,
            vec![(vec![0, 2], rat(1)), (vec![0, 0], rat(10)), (vec![0, -2], rat(1))],
        )
        .unwrap();
        assert_eq!(q.restrict(1).unwrap(), LaurentPoly::constant(1, rat(12)));
        // constants keep their value, one variable fewer
        let c = LaurentPoly::constant(3, rat(7));
        let r = c.restrict(2).unwrap();
        assert_eq!(r.nvars(), 2);
        assert_eq!(r, LaurentPoly::constant(2, rat(7)));
    }

    #[test]
    fn act_examples() {
        let flip = SignedPermutation::sign_flip(1, 0);
        let z = p1(&[(2, 1)]);
        assert_eq!(z.act(&flip).unwrap(), p1(&[(-2, 1)]));

        let swap = SignedPermutation::transposition(2, 0, 1);
        let p = LaurentPoly::from_terms(2, vec![(vec![2, -2], rat(1))]).unwrap();
        assert_eq!(
            p.act(&swap).unwrap(),
            LaurentPoly::from_terms(2, vec![(vec![-2, 2], rat(1))]).unwrap()
        );
    }

    #[test]
    fn display_renders_halves() {
        let p = LaurentPoly::from_terms(
            1,
            vec![(vec![0], rat(8)), (vec![2], rat(1)), (vec![-1], rat(-3))],
        )
        .unwrap();
        let s = p.to_string();
        assert!(s.starts_with("8 "), "{}", s);
        assert!(s.contains("ζ1^(-1/2)"), "{}", s);
        assert!(s.contains("+ ζ1"), "{}", s);
    }
}
