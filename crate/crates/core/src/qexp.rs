//! Truncated q-series with Laurent-polynomial coefficients.
//!
//! q-exponents are rational with denominator dividing 24 and are stored as
//! integer numerators over 24 (`q^{1/24}` ↔ exponent 1). Every expansion
//! carries an explicit exclusive truncation bound `trunc24` in the same
//! units; reading at or past the bound is an error, never a silent zero.
//!
//! Arithmetic tracks the exact resulting truncation:
//! * sum: `min(trunc_a, trunc_b)`
//! * product: `min(trunc_a + val_b, trunc_b + val_a)` where `val` is the
//!   least stored exponent,
//! * quotient: `min(trunc_num, trunc_den + val_num - val_den) - val_den`.
//!
//! A scalar series (zero variables) may be combined with an n-variable one;
//! the scalar side broadcasts.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RatMatrix};
use crate::rational::{rat, ratio, Rational};

/// Truncation bound that makes coefficients through `q^n` available.
pub fn trunc_through_order(n: i64) -> i64 {
    24 * n + 1
}

/// Which building block of the lattice the exponents belong to. Descriptive
/// metadata; the functional content lives in `norm_form` and `index`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LatticeLabel {
    Scalar,
    A1,
    A1Power(usize),
    Dn(usize),
    Zn(usize),
    Other,
}

impl fmt::Display for LatticeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeLabel::Scalar => write!(f, "scalar"),
            LatticeLabel::A1 => write!(f, "A1"),
            LatticeLabel::A1Power(n) => write!(f, "{}A1", n),
            LatticeLabel::Dn(n) => write!(f, "D{}", n),
            LatticeLabel::Zn(n) => write!(f, "Z{}", n),
            LatticeLabel::Other => write!(f, "other"),
        }
    }
}

/// Declared symmetry of a constructed form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SymmetryClass {
    /// Invariant under all signed permutations.
    FullOrthogonal,
    /// Invariant under O′(D₄).
    OPrime,
    /// Weyl-invariant only.
    WeylOnly,
    /// Weyl-invariant and negated by a single sign flip.
    WeylAntiFlip,
}

/// Weight, index and the norm form used to evaluate `(l,l)` on exponents.
#[derive(Clone, PartialEq, Debug)]
pub struct JacobiFormMeta {
    /// Doubled weight, so half-integral weights stay integral.
    pub weight2: i64,
    pub index: Rational,
    /// Diagonal norm form: `(l,l) = Σ dᵢ lᵢ²` on semantic exponents.
    pub norm_form: Vec<Rational>,
    pub lattice: LatticeLabel,
    pub symmetry: Option<SymmetryClass>,
}

impl JacobiFormMeta {
    pub fn new(
        weight2: i64,
        index: Rational,
        norm_form: Vec<Rational>,
        lattice: LatticeLabel,
        symmetry: Option<SymmetryClass>,
    ) -> Result<Self> {
        if index.is_negative() {
            return Err(Error::InvalidArgument(
                "no non-zero Jacobi forms of negative index".into(),
            ));
        }
        Ok(JacobiFormMeta {
            weight2,
            index,
            norm_form,
            lattice,
            symmetry,
        })
    }

    /// Scalar modular form of the given weight.
    pub fn modular(weight2: i64) -> Self {
        JacobiFormMeta {
            weight2,
            index: Rational::zero(),
            norm_form: Vec::new(),
            lattice: LatticeLabel::Scalar,
            symmetry: None,
        }
    }

    /// Dₙ convention: Euclidean norm form, integer weight.
    pub fn dn(weight: i64, index: i64, n: usize, symmetry: Option<SymmetryClass>) -> Self {
        JacobiFormMeta {
            weight2: 2 * weight,
            index: rat(index),
            norm_form: vec![rat(1); n],
            lattice: LatticeLabel::Dn(n),
            symmetry,
        }
    }

    /// Eichler–Zagier convention for one variable: `d = [1/2]`.
    pub fn a1(weight: i64, index: i64) -> Self {
        JacobiFormMeta {
            weight2: 2 * weight,
            index: rat(index),
            norm_form: vec![ratio(1, 2)],
            lattice: LatticeLabel::A1,
            symmetry: None,
        }
    }

    pub fn weight_is_integral(&self) -> bool {
        self.weight2 % 2 == 0
    }

    /// `(l,l)` of a doubled exponent vector under this norm form.
    pub fn norm_of(&self, doubled: &[i32]) -> Rational {
        let mut acc = Rational::zero();
        for (d, &e) in self.norm_form.iter().zip(doubled) {
            acc += d * ratio((e as i64) * (e as i64), 4);
        }
        acc
    }

    fn ledger_eq(&self, other: &Self) -> bool {
        self.weight2 == other.weight2
            && self.index == other.index
            && self.norm_form == other.norm_form
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SupportKind {
    Weak,
    Holomorphic,
    Cusp,
}

/// Truncated q-expansion.
#[derive(Clone, PartialEq, Debug)]
pub struct QExpansion {
    nvars: usize,
    trunc24: i64,
    levels: BTreeMap<i64, LaurentPoly>,
    meta: Option<JacobiFormMeta>,
}

impl QExpansion {
    pub fn zero(nvars: usize, trunc24: i64) -> Self {
        QExpansion {
            nvars,
            trunc24,
            levels: BTreeMap::new(),
            meta: None,
        }
    }

    pub fn constant(nvars: usize, trunc24: i64, c: Rational) -> Self {
        let mut s = QExpansion::zero(nvars, trunc24);
        let p = LaurentPoly::constant(nvars, c);
        if !p.is_zero() && trunc24 > 0 {
            s.levels.insert(0, p);
        }
        s
    }

    pub fn one(nvars: usize, trunc24: i64) -> Self {
        QExpansion::constant(nvars, trunc24, rat(1))
    }

    pub fn from_levels(
        nvars: usize,
        trunc24: i64,
        levels: impl IntoIterator<Item = (i64, LaurentPoly)>,
        meta: Option<JacobiFormMeta>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, p) in levels {
            if p.is_zero() {
                continue;
            }
            if p.nvars() != nvars {
                return Err(Error::VarMismatch(p.nvars(), nvars));
            }
            if e >= trunc24 {
                return Err(Error::InvalidArgument(format!(
                    "level {}/24 at or past truncation {}/24",
                    e, trunc24
                )));
            }
            let entry = map.entry(e).or_insert_with(|| LaurentPoly::zero(nvars));
            *entry = entry.add(&p)?;
        }
        map.retain(|_, p: &mut LaurentPoly| !p.is_zero());
        if let Some(m) = &meta {
            if m.norm_form.len() != nvars {
                return Err(Error::NormFormMismatch);
            }
        }
        Ok(QExpansion {
            nvars,
            trunc24,
            levels: map,
            meta,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc24(&self) -> i64 {
        self.trunc24
    }

    pub fn meta(&self) -> Option<&JacobiFormMeta> {
        self.meta.as_ref()
    }

    pub fn set_meta(&mut self, meta: Option<JacobiFormMeta>) -> Result<()> {
        if let Some(m) = &meta {
            if m.norm_form.len() != self.nvars {
                return Err(Error::NormFormMismatch);
            }
        }
        self.meta = meta;
        Ok(())
    }

    pub fn with_meta(mut self, meta: JacobiFormMeta) -> Result<Self> {
        self.set_meta(Some(meta))?;
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    /// Least stored q-exponent.
    pub fn val24(&self) -> Option<i64> {
        self.levels.keys().next().copied()
    }

    /// Valuation with the zero-series convention `val = trunc` (the series
    /// is known to vanish below its truncation).
    fn val_or_trunc(&self) -> i64 {
        self.val24().unwrap_or(self.trunc24)
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, &LaurentPoly)> {
        self.levels.iter().map(|(&e, p)| (e, p))
    }

    pub fn nlevels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, q24: i64) -> Option<&LaurentPoly> {
        self.levels.get(&q24)
    }

    /// Stored coefficient or zero — after checking the truncation bound.
    pub fn coefficient(&self, q24: i64) -> Result<LaurentPoly> {
        if q24 >= self.trunc24 {
            return Err(Error::PrecisionViolation {
                requested: q24,
                trunc: self.trunc24,
            });
        }
        Ok(self
            .levels
            .get(&q24)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.nvars)))
    }

    /// Coefficient of the integer power `q^n`.
    pub fn coefficient_q(&self, n: i64) -> Result<LaurentPoly> {
        self.coefficient(24 * n)
    }

    /// Drops knowledge above a smaller truncation bound.
    pub fn truncated(&self, trunc24: i64) -> Result<Self> {
        if trunc24 > self.trunc24 {
            return Err(Error::InsufficientPrecision(format!(
                "cannot extend truncation {}/24 to {}/24",
                self.trunc24, trunc24
            )));
        }
        let mut out = self.clone();
        out.trunc24 = trunc24;
        out.levels.retain(|&e, _| e < trunc24);
        Ok(out)
    }

    fn compatible_nvars(&self, other: &Self) -> Result<usize> {
        if self.nvars == other.nvars || other.nvars == 0 {
            Ok(self.nvars)
        } else if self.nvars == 0 {
            Ok(other.nvars)
        } else {
            Err(Error::VarMismatch(self.nvars, other.nvars))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let nvars = self.compatible_nvars(other)?;
        let trunc = self.trunc24.min(other.trunc24);
        let meta = meta_add(self.meta.as_ref(), other.meta.as_ref())?;
        let mut levels = BTreeMap::new();
        for (e, p) in self.levels.iter().chain(other.levels.iter()) {
            if *e >= trunc {
                continue;
            }
            let p = promote(p, nvars);
            let entry = levels
                .entry(*e)
                .or_insert_with(|| LaurentPoly::zero(nvars));
            *entry = entry.add(&p)?;
        }
        levels.retain(|_, p: &mut LaurentPoly| !p.is_zero());
        Ok(QExpansion {
            nvars,
            trunc24: trunc,
            levels,
            meta,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for p in out.levels.values_mut() {
            *p = p.neg();
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.levels.clear();
            return out;
        }
        for p in out.levels.values_mut() {
            *p = p.scale(c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let nvars = self.compatible_nvars(other)?;
        let trunc = (self.trunc24 + other.val_or_trunc())
            .min(other.trunc24 + self.val_or_trunc());
        let meta = meta_mul(self.meta.as_ref(), other.meta.as_ref())?;
        let mut levels: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (ea, pa) in self.levels.iter() {
            if *ea >= trunc {
                break;
            }
            for (eb, pb) in other.levels.iter() {
                let e = ea + eb;
                if e >= trunc {
                    break;
                }
                let entry = levels
                    .entry(e)
                    .or_insert_with(|| LaurentPoly::zero(nvars));
                if pa.nvars() == pb.nvars() {
                    entry.add_mul_assign(pa, pb, false)?;
                } else {
                    let prod = mul_mixed(pa, pb, nvars)?;
                    *entry = entry.add(&prod)?;
                }
            }
        }
        levels.retain(|_, p: &mut LaurentPoly| !p.is_zero());
        Ok(QExpansion {
            nvars,
            trunc24: trunc,
            levels,
            meta,
        })
    }

    /// Integer power by repeated squaring. `pow(0)` is 1 at the same
    /// truncation shifted by nothing.
    pub fn pow(&self, mut e: u32) -> Result<Self> {
        if e == 0 {
            return Ok(QExpansion::one(self.nvars, self.trunc24));
        }
        let mut base = self.clone();
        let mut acc: Option<QExpansion> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.unwrap())
    }

    /// Order-by-order exact quotient. Fails with `InexactDivision` when some
    /// coefficient does not divide — the signal that a quotient is not
    /// coefficient-wise polynomial.
    pub fn div(&self, den: &Self) -> Result<Self> {
        let nvars = if den.nvars == 0 || den.nvars == self.nvars {
            self.nvars
        } else {
            return Err(Error::VarMismatch(self.nvars, den.nvars));
        };
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let vd = den.val24().expect("nonzero");
        let den0 = den.levels.get(&vd).expect("valuation level");
        let meta = meta_div(self.meta.as_ref(), den.meta.as_ref())?;

        if self.is_zero() {
            return Ok(QExpansion {
                nvars,
                trunc24: self.trunc24 - vd,
                levels: BTreeMap::new(),
                meta,
            });
        }
        let vn = self.val24().expect("nonzero");
        let t_out = (self.trunc24).min(den.trunc24 + vn - vd) - vd;
        let v_out = vn - vd;
        if t_out <= v_out {
            return Err(Error::InsufficientPrecision(format!(
                "quotient truncation {}/24 leaves no computable coefficients",
                t_out
            )));
        }

        let mut quot: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for e_out in v_out..t_out {
            let dividend_exp = e_out + vd;
            let mut target = self
                .levels
                .get(&dividend_exp)
                .cloned()
                .unwrap_or_else(|| LaurentPoly::zero(nvars));
            for (&eq, qp) in quot.iter() {
                if let Some(dp) = den.levels.get(&(dividend_exp - eq)) {
                    if qp.nvars() == dp.nvars() {
                        target.add_mul_assign(qp, dp, true)?;
                    } else {
                        let prod = mul_mixed(qp, dp, nvars)?;
                        target = target.sub(&prod)?;
                    }
                }
            }
            if target.is_zero() {
                continue;
            }
            let q = div_mixed(&target, den0)?;
            if !q.is_zero() {
                quot.insert(e_out, q);
            }
        }
        Ok(QExpansion {
            nvars,
            trunc24: t_out,
            levels: quot,
            meta,
        })
    }

    /// Sets the last variable to zero. Norm form loses its final entry;
    /// weight and index are unchanged.
    pub fn restrict_last(&self) -> Result<Self> {
        if self.nvars == 0 {
            return Err(Error::InvalidArgument(
                "cannot restrict a scalar series".into(),
            ));
        }
        let nvars = self.nvars - 1;
        let mut levels = BTreeMap::new();
        for (&e, p) in self.levels.iter() {
            let r = p.restrict(self.nvars - 1)?;
            if !r.is_zero() {
                levels.insert(e, r);
            }
        }
        let meta = self.meta.as_ref().map(|m| {
            let mut norm = m.norm_form.clone();
            norm.pop();
            JacobiFormMeta {
                weight2: m.weight2,
                index: m.index.clone(),
                norm_form: norm,
                lattice: match m.lattice {
                    LatticeLabel::Dn(n) if n >= 3 => LatticeLabel::Dn(n - 1),
                    LatticeLabel::A1Power(k) if k >= 2 => LatticeLabel::A1Power(k - 1),
                    LatticeLabel::A1Power(1) | LatticeLabel::A1 => LatticeLabel::Scalar,
                    LatticeLabel::Zn(n) if n >= 2 => LatticeLabel::Zn(n - 1),
                    _ => LatticeLabel::Other,
                },
                symmetry: match m.symmetry {
                    Some(SymmetryClass::FullOrthogonal) if nvars == 4 => Some(SymmetryClass::OPrime),
                    Some(SymmetryClass::OPrime) => Some(SymmetryClass::FullOrthogonal),
                    s => s,
                },
            }
        });
        Ok(QExpansion {
            nvars,
            trunc24: self.trunc24,
            levels,
            meta,
        })
    }

    /// Restriction at an arbitrary variable index.
    pub fn restrict_at(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::InvalidArgument(format!(
                "variable {} out of range",
                i
            )));
        }
        let mut levels = BTreeMap::new();
        for (&e, p) in self.levels.iter() {
            let r = p.restrict(i)?;
            if !r.is_zero() {
                levels.insert(e, r);
            }
        }
        Ok(QExpansion {
            nvars: self.nvars - 1,
            trunc24: self.trunc24,
            levels,
            meta: None,
        })
    }

    /// `τ -> cτ`, `z -> cz`: q-exponents and ζ-exponents multiply by `c`,
    /// the truncation scales with them.
    pub fn rescale_tau(&self, c: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidArgument("rescale factor must be positive".into()));
        }
        let c64 = c as i64;
        let mut levels = BTreeMap::new();
        for (&e, p) in self.levels.iter() {
            levels.insert(e * c64, p.exponents_scaled(c as i32));
        }
        Ok(QExpansion {
            nvars: self.nvars,
            trunc24: self.trunc24 * c64,
            levels,
            meta: None,
        })
    }

    /// Embeds a k-variable expansion into `nvars` variables at offset `at`.
    pub fn embed(&self, nvars: usize, at: usize) -> Result<Self> {
        let mut levels = BTreeMap::new();
        for (&e, p) in self.levels.iter() {
            levels.insert(e, p.embed(nvars, at)?);
        }
        Ok(QExpansion {
            nvars,
            trunc24: self.trunc24,
            levels,
            meta: None,
        })
    }

    /// Product over disjoint variable sets: the variables of `other` are
    /// appended after those of `self`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let nvars = self.nvars + other.nvars;
        let trunc = (self.trunc24 + other.val_or_trunc())
            .min(other.trunc24 + self.val_or_trunc());
        let meta = match (&self.meta, &other.meta) {
            (Some(a), Some(b)) if a.index == b.index => Some(JacobiFormMeta {
                weight2: a.weight2 + b.weight2,
                index: a.index.clone(),
                norm_form: a
                    .norm_form
                    .iter()
                    .chain(b.norm_form.iter())
                    .cloned()
                    .collect(),
                lattice: LatticeLabel::Other,
                symmetry: None,
            }),
            _ => None,
        };
        let mut levels: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (ea, pa) in self.levels.iter() {
            for (eb, pb) in other.levels.iter() {
                let e = ea + eb;
                if e >= trunc {
                    break;
                }
                let prod = pa.tensor(pb);
                let entry = levels
                    .entry(e)
                    .or_insert_with(|| LaurentPoly::zero(nvars));
                *entry = entry.add(&prod)?;
            }
        }
        levels.retain(|_, p: &mut LaurentPoly| !p.is_zero());
        Ok(QExpansion {
            nvars,
            trunc24: trunc,
            levels,
            meta,
        })
    }

    /// Variable change `z = A·w` applied to every coefficient, with the norm
    /// form pulled back by `Q_w(x) = Q_z(A^{-T} x)`. The pullback must stay
    /// diagonal.
    pub fn substitute_linear(&self, a: &RatMatrix) -> Result<Self> {
        let mut levels = BTreeMap::new();
        for (&e, p) in self.levels.iter() {
            let q = p.substitute_linear(a)?;
            if !q.is_zero() {
                levels.insert(e, q);
            }
        }
        let meta = match &self.meta {
            None => None,
            Some(m) => {
                let ainv = a.inverse()?;
                let ainvt = ainv.transpose();
                // N = A⁻¹ · diag(d) · A⁻ᵀ
                let mut data = Vec::with_capacity(self.nvars * self.nvars);
                for i in 0..self.nvars {
                    for j in 0..self.nvars {
                        data.push(if i == j {
                            m.norm_form[i].clone()
                        } else {
                            Rational::zero()
                        });
                    }
                }
                let diag = RatMatrix::new(self.nvars, self.nvars, data)?;
                let n = ainv.mul(&diag)?.mul(&ainvt)?;
                let mut norm = Vec::with_capacity(self.nvars);
                for i in 0..self.nvars {
                    for j in 0..self.nvars {
                        if i != j && !n.at(i, j).is_zero() {
                            return Err(Error::NonDiagonalNorm);
                        }
                    }
                    norm.push(n.at(i, i).clone());
                }
                Some(JacobiFormMeta {
                    weight2: m.weight2,
                    index: m.index.clone(),
                    norm_form: norm,
                    lattice: LatticeLabel::Other,
                    symmetry: None,
                })
            }
        };
        Ok(QExpansion {
            nvars: self.nvars,
            trunc24: self.trunc24,
            levels,
            meta,
        })
    }

    /// Support predicate over the stored, truncated expansion. Necessarily a
    /// partial check: it inspects what is stored, nothing more.
    pub fn support_check(&self, kind: SupportKind) -> Result<bool> {
        match kind {
            SupportKind::Weak => Ok(self.levels.keys().all(|&e| e >= 0)),
            SupportKind::Holomorphic | SupportKind::Cusp => {
                let meta = self.meta.as_ref().ok_or(Error::MissingMeta(
                    "support check needs index and norm form",
                ))?;
                if meta.norm_form.len() != self.nvars {
                    return Err(Error::NormFormMismatch);
                }
                for (&n24, p) in self.levels.iter() {
                    // 2 m n = m · n24 / 12
                    let two_mn = &meta.index * ratio(n24, 12);
                    for (e, _) in p.iter() {
                        let ll = meta.norm_of(e.entries());
                        let ok = match kind {
                            SupportKind::Holomorphic => two_mn >= ll,
                            SupportKind::Cusp => two_mn > ll,
                            SupportKind::Weak => unreachable!(),
                        };
                        if !ok {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    /// Every exponent vector all-integral or all-half — membership in the
    /// dual-lattice classes of Dₙ.
    pub fn exponents_in_dn_dual(&self) -> bool {
        self.levels.values().all(|p| {
            p.iter()
                .all(|(e, _)| e.is_all_integer() || e.is_all_half())
        })
    }

    /// Scalar series value as a map exponent → rational (zero-variable only).
    pub fn scalar_levels(&self) -> Result<BTreeMap<i64, Rational>> {
        if self.nvars != 0 {
            return Err(Error::VarMismatch(self.nvars, 0));
        }
        Ok(self
            .levels
            .iter()
            .map(|(&e, p)| (e, p.constant_term()))
            .collect())
    }
}

fn promote(p: &LaurentPoly, nvars: usize) -> LaurentPoly {
    if p.nvars() == nvars {
        p.clone()
    } else {
        // only 0 → n promotion reaches here
        LaurentPoly::constant(nvars, p.constant_term())
    }
}

fn mul_mixed(a: &LaurentPoly, b: &LaurentPoly, nvars: usize) -> Result<LaurentPoly> {
    if a.nvars() == b.nvars() {
        a.mul(b)
    } else if a.nvars() == 0 {
        Ok(b.scale(&a.constant_term()))
    } else if b.nvars() == 0 {
        Ok(a.scale(&b.constant_term()))
    } else {
        Err(Error::VarMismatch(a.nvars(), b.nvars()))
    }
    .map(|p| {
        debug_assert_eq!(p.nvars(), nvars.max(0));
        p
    })
}

fn div_mixed(num: &LaurentPoly, den: &LaurentPoly) -> Result<LaurentPoly> {
    if den.nvars() == 0 {
        let d = den.constant_term();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(num.scale(&(rat(1) / d)))
    } else {
        num.exact_div(den)
    }
}

fn meta_add(a: Option<&JacobiFormMeta>, b: Option<&JacobiFormMeta>) -> Result<Option<JacobiFormMeta>> {
    match (a, b) {
        (Some(x), Some(y)) => {
            if x.ledger_eq(y) {
                Ok(Some(JacobiFormMeta {
                    weight2: x.weight2,
                    index: x.index.clone(),
                    norm_form: x.norm_form.clone(),
                    lattice: if x.lattice == y.lattice {
                        x.lattice
                    } else {
                        LatticeLabel::Other
                    },
                    symmetry: if x.symmetry == y.symmetry { x.symmetry } else { None },
                }))
            } else {
                Err(Error::MetaMismatch(format!(
                    "cannot add weight2 {} index {} to weight2 {} index {}",
                    x.weight2, x.index, y.weight2, y.index
                )))
            }
        }
        _ => Ok(None),
    }
}

fn meta_mul(a: Option<&JacobiFormMeta>, b: Option<&JacobiFormMeta>) -> Result<Option<JacobiFormMeta>> {
    match (a, b) {
        (Some(x), Some(y)) => {
            // A scalar factor leaves index and norm alone.
            if x.norm_form.is_empty() || y.norm_form.is_empty() {
                let (scalar, form) = if x.norm_form.is_empty() { (x, y) } else { (y, x) };
                return Ok(Some(JacobiFormMeta {
                    weight2: x.weight2 + y.weight2,
                    index: form.index.clone() + scalar.index.clone(),
                    norm_form: form.norm_form.clone(),
                    lattice: form.lattice,
                    symmetry: form.symmetry,
                }));
            }
            if x.norm_form != y.norm_form {
                return Err(Error::NormFormMismatch);
            }
            Ok(Some(JacobiFormMeta {
                weight2: x.weight2 + y.weight2,
                index: &x.index + &y.index,
                norm_form: x.norm_form.clone(),
                lattice: if x.lattice == y.lattice {
                    x.lattice
                } else {
                    LatticeLabel::Other
                },
                symmetry: None,
            }))
        }
        _ => Ok(None),
    }
}

fn meta_div(a: Option<&JacobiFormMeta>, b: Option<&JacobiFormMeta>) -> Result<Option<JacobiFormMeta>> {
    match (a, b) {
        (Some(x), Some(y)) => {
            if y.norm_form.is_empty() {
                return Ok(Some(JacobiFormMeta {
                    weight2: x.weight2 - y.weight2,
                    index: &x.index - &y.index,
                    norm_form: x.norm_form.clone(),
                    lattice: x.lattice,
                    symmetry: x.symmetry,
                }));
            }
            if x.norm_form != y.norm_form {
                return Err(Error::NormFormMismatch);
            }
            let index = &x.index - &y.index;
            if index.is_negative() {
                return Err(Error::MetaMismatch("quotient would have negative index".into()));
            }
            Ok(Some(JacobiFormMeta {
                weight2: x.weight2 - y.weight2,
                index,
                norm_form: x.norm_form.clone(),
                lattice: if x.lattice == y.lattice {
                    x.lattice
                } else {
                    LatticeLabel::Other
                },
                symmetry: None,
            }))
        }
        _ => Ok(None),
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            writeln!(f, "0  (trunc {}/24)", self.trunc24)?;
            return Ok(());
        }
        for (e, p) in self.levels.iter() {
            write!(f, "{}: {}", format_q_power(*e), p)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Renders a q-exponent stored over 24, reducing the fraction.
pub fn format_q_power(e24: i64) -> String {
    if e24 % 24 == 0 {
        format!("q^{}", e24 / 24)
    } else {
        let g = num_integer::gcd(e24.abs(), 24);
        format!("q^({}/{})", e24 / g, 24 / g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn scalar(terms: &[(i64, i64)], trunc: i64) -> QExpansion {
        QExpansion::from_levels(
            0,
            trunc,
            terms
                .iter()
                .map(|&(e, c)| (e, LaurentPoly::constant(0, rat(c)))),
            None,
        )
        .unwrap()
    }

    #[test]
    fn mul_truncation_rule() {
        // (1 + q^2·…) with trunc 3q vs valuation shift
        let a = scalar(&[(0, 1), (24, 240)], trunc_through_order(1));
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.trunc24(), trunc_through_order(1));
        assert_eq!(sq.coefficient_q(1).unwrap().constant_term(), rat(480));
        assert!(sq.coefficient_q(2).is_err());
    }

    #[test]
    fn coefficient_past_truncation_is_error() {
        let a = scalar(&[(0, 1)], 24 * 3);
        assert!(matches!(
            a.coefficient(24 * 5),
            Err(Error::PrecisionViolation { .. })
        ));
    }

    #[test]
    fn div_round_trip() {
        let a = scalar(&[(0, 2), (24, -3), (48, 5)], 72);
        let b = scalar(&[(24, 1), (48, 7)], 72);
        let prod = a.mul(&b).unwrap();
        let back = prod.div(&b).unwrap();
        for e in [0, 24] {
            assert_eq!(
                back.coefficient(e).unwrap(),
                a.truncated(back.trunc24()).unwrap().coefficient(e).unwrap()
            );
        }
    }

    #[test]
    fn rescale_doubles_everything() {
        let p = QExpansion::from_levels(
            1,
            trunc_through_order(3),
            [(24, LaurentPoly::monomial(1, &[2], rat(1)).unwrap())],
            None,
        )
        .unwrap();
        let r = p.rescale_tau(2).unwrap();
        assert_eq!(r.trunc24(), 2 * trunc_through_order(3));
        let c = r.coefficient(48).unwrap();
        assert_eq!(c.coefficient(&[4]), rat(1));
    }

    #[test]
    fn support_check_weak_vs_holomorphic() {
        // q⁰-term ζ - 2 + ζ^{-1}, norm [1/2], index 1: weak yes, holomorphic no.
        let p = QExpansion::from_levels(
            1,
            trunc_through_order(0),
            [(
                0,
                LaurentPoly::from_terms(
                    1,
                    vec![(vec![2], rat(1)), (vec![0], rat(-2)), (vec![-2], rat(1))],
                )
                .unwrap(),
            )],
            Some(JacobiFormMeta::a1(-2, 1)),
        )
        .unwrap();
        assert!(p.support_check(SupportKind::Weak).unwrap());
        assert!(!p.support_check(SupportKind::Holomorphic).unwrap());
    }

    #[test]
    fn meta_ledger_on_products() {
        let m1 = JacobiFormMeta::dn(-8, 1, 8, None);
        let m2 = JacobiFormMeta::modular(16);
        let a = QExpansion::one(8, 48).with_meta(m1).unwrap();
        let b = QExpansion::one(0, 48).with_meta(m2).unwrap();
        let prod = a.mul(&b).unwrap();
        let meta = prod.meta().unwrap();
        assert_eq!(meta.weight2, 0);
        assert_eq!(meta.index, rat(1));
        assert_eq!(meta.norm_form.len(), 8);
    }

    #[test]
    fn add_rejects_mixed_weights() {
        let a = QExpansion::one(0, 48).with_meta(JacobiFormMeta::modular(8)).unwrap();
        let b = QExpansion::one(0, 48).with_meta(JacobiFormMeta::modular(12)).unwrap();
        assert!(matches!(a.add(&b), Err(Error::MetaMismatch(_))));
    }

    #[test]
    fn norm_of_uses_semantic_exponents() {
        let m = JacobiFormMeta::dn(0, 1, 2, None);
        // doubled (1,1) = semantic (1/2,1/2): (l,l) = 1/2.
        assert_eq!(m.norm_of(&[1, 1]), ratio(1, 2));
        let a1 = JacobiFormMeta::a1(0, 1);
        assert_eq!(a1.norm_of(&[2]), ratio(1, 2));
    }
}
