//! Exact rational linear algebra over truncated expansions.
//!
//! Expansions are vectorised by a fixed monomial ordering (q-order major,
//! graded lexicographic on doubled exponents minor) and relations between
//! them are found by Gaussian elimination over the rationals. A
//! [`RelationProblem`] constrains chosen q-orders to vanish; the solver
//! returns a canonical reduced-echelon basis of the coefficient nullspace
//! and can then check that each basis relation actually vanishes through the
//! full stored truncation — the stronger statement the candidate relations
//! are expected to satisfy.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms;
use crate::laurent::ExponentVec;
use crate::qexp::QExpansion;
use crate::rational::{format_rational, rat, Rational};

/// Witness of the first difference between two expansions.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub q24: i64,
    pub doubled_exponent: Vec<i32>,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of an identity check: exact equality up to the comparable
/// truncation, or the first differing monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub compared_through24: i64,
    pub witness: Option<Mismatch>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Exact comparison up to the smaller truncation.
pub fn check_identity(lhs: &QExpansion, rhs: &QExpansion) -> Result<IdentityReport> {
    if lhs.nvars() != rhs.nvars() {
        return Err(Error::VarMismatch(lhs.nvars(), rhs.nvars()));
    }
    let through = lhs.trunc24().min(rhs.trunc24());
    let mut l = lhs.truncated(through)?;
    let mut r = rhs.truncated(through)?;
    l.set_meta(None)?;
    r.set_meta(None)?;
    let diff = l.sub(&r)?;
    let witness = diff.levels().next().map(|(q24, p)| {
        let (e, _) = p.iter().next().expect("nonzero level");
        let doubled = e.entries().to_vec();
        Mismatch {
            q24,
            lhs: lhs.level(q24).map(|p| p.coefficient(&doubled)).unwrap_or_else(Rational::zero),
            rhs: rhs.level(q24).map(|p| p.coefficient(&doubled)).unwrap_or_else(Rational::zero),
            doubled_exponent: doubled,
        }
    });
    Ok(IdentityReport {
        compared_through24: through,
        witness,
    })
}

/// Linear relation problem: expansions plus the q-orders whose coefficients
/// must vanish.
pub struct RelationProblem {
    pub forms: Vec<QExpansion>,
    /// q-orders (over 24) constrained to vanish.
    pub constrained_orders: Vec<i64>,
    /// Also verify each basis relation through the full common truncation.
    pub assert_full_vanishing: bool,
}

/// Canonical solution of a [`RelationProblem`].
#[derive(Clone, Debug)]
pub struct RelationSolution {
    /// Reduced-echelon nullspace basis, one coefficient vector per row.
    pub basis: Vec<Vec<Rational>>,
    /// Pivot columns of the constraint matrix, in elimination order.
    pub pivots: Vec<usize>,
    /// Non-pivot columns; each indexes the basis vector it parametrises.
    pub free: Vec<usize>,
    /// For each pivot column, its expression as a linear form in the free
    /// columns: `x_pivot = Σ coeff · x_free`.
    pub pivot_expressions: Vec<(usize, Vec<(usize, Rational)>)>,
    /// Per basis vector: does the combination vanish through the common
    /// truncation? Populated when requested.
    pub full_vanishing: Option<Vec<bool>>,
}

impl RelationSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn all_vanish(&self) -> bool {
        self.full_vanishing
            .as_ref()
            .map(|v| v.iter().all(|&b| b))
            .unwrap_or(false)
    }

    /// Human-readable pivot expressions like `a6 = 1/27·a1 + …` with 1-based
    /// variable names.
    pub fn describe_pivots(&self, names: &[String]) -> Vec<String> {
        self.pivot_expressions
            .iter()
            .map(|(p, terms)| {
                let rhs = if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms
                        .iter()
                        .enumerate()
                        .map(|(i, (f, c))| {
                            let (neg, mag) = crate::rational::signed_parts(c);
                            let sign = if i == 0 {
                                if neg { "-" } else { "" }
                            } else if neg {
                                " - "
                            } else {
                                " + "
                            };
                            format!("{}{}·{}", sign, mag, names[*f])
                        })
                        .collect::<String>()
                };
                format!("{} = {}", names[*p], rhs)
            })
            .collect()
    }
}

/// Solves with columns considered in their given order.
pub fn solve_relation(problem: &RelationProblem) -> Result<RelationSolution> {
    let order: Vec<usize> = (0..problem.forms.len()).collect();
    solve_relation_ordered(problem, &order)
}

/// Solves with an explicit pivot preference: earlier entries of `order` are
/// chosen as pivots first, so the later ones act as free parameters.
pub fn solve_relation_ordered(
    problem: &RelationProblem,
    order: &[usize],
) -> Result<RelationSolution> {
    let k = problem.forms.len();
    if k == 0 {
        return Err(Error::InvalidArgument("empty form list".into()));
    }
    if order.len() != k {
        return Err(Error::InvalidArgument("pivot order length mismatch".into()));
    }
    let nvars = problem.forms[0].nvars();
    let min_trunc = problem
        .forms
        .iter()
        .map(|f| f.trunc24())
        .min()
        .expect("nonempty");
    for f in &problem.forms {
        if f.nvars() != nvars {
            return Err(Error::VarMismatch(f.nvars(), nvars));
        }
    }
    for &c in &problem.constrained_orders {
        if c >= min_trunc {
            return Err(Error::PrecisionViolation {
                requested: c,
                trunc: min_trunc,
            });
        }
    }

    // Constraint rows: one per monomial present at a constrained order.
    let mut rows: BTreeMap<(i64, ExponentVec), Vec<Rational>> = BTreeMap::new();
    for (j, f) in problem.forms.iter().enumerate() {
        for &q24 in &problem.constrained_orders {
            if let Some(p) = f.level(q24) {
                for (e, c) in p.iter() {
                    rows.entry((q24, e.clone()))
                        .or_insert_with(|| vec![Rational::zero(); k])
                        [j] = c.clone();
                }
            }
        }
    }

    // Incremental reduced echelon form in the permuted column order.
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    let mut pivot_of_row: Vec<usize> = Vec::new(); // positions in `order`
    for (_, row) in rows {
        let mut row: Vec<Rational> = order.iter().map(|&j| row[j].clone()).collect();
        for (r, &pc) in echelon.iter().zip(&pivot_of_row) {
            if !row[pc].is_zero() {
                let f = row[pc].clone();
                for (x, y) in row.iter_mut().zip(r.iter()) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pc) = row.iter().position(|x| !x.is_zero()) {
            let inv = rat(1) / row[pc].clone();
            for x in row.iter_mut() {
                *x *= &inv;
            }
            for r in echelon.iter_mut() {
                if !r[pc].is_zero() {
                    let f = r[pc].clone();
                    for (x, y) in r.iter_mut().zip(row.iter()) {
                        *x -= &f * y;
                    }
                }
            }
            echelon.push(row);
            pivot_of_row.push(pc);
        }
        if echelon.len() == k {
            break;
        }
    }

    // Nullspace basis from the echelon rows, in the permuted order, then
    // mapped back to original column indices.
    let mut sorted: Vec<(usize, Vec<Rational>)> = pivot_of_row
        .iter()
        .cloned()
        .zip(echelon.iter().cloned())
        .collect();
    sorted.sort_by_key(|(pc, _)| *pc);
    let pivot_cols: Vec<usize> = sorted.iter().map(|(pc, _)| *pc).collect();
    let free_cols: Vec<usize> = (0..k).filter(|c| !pivot_cols.contains(c)).collect();

    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![Rational::zero(); k]; // permuted coordinates
        v[fc] = rat(1);
        for (pc, row) in &sorted {
            // x_pc = -Σ_{free} row[free]·x_free
            v[*pc] = -row[fc].clone();
        }
        // map back to original indices
        let mut orig = vec![Rational::zero(); k];
        for (perm_idx, &orig_idx) in order.iter().enumerate() {
            orig[orig_idx] = v[perm_idx].clone();
        }
        basis.push(orig);
    }

    let pivot_expressions = sorted
        .iter()
        .map(|(pc, row)| {
            let terms: Vec<(usize, Rational)> = free_cols
                .iter()
                .filter(|&&fc| !row[fc].is_zero())
                .map(|&fc| (order[fc], -row[fc].clone()))
                .collect();
            (order[*pc], terms)
        })
        .collect();

    let full_vanishing = if problem.assert_full_vanishing {
        let mut flags = Vec::with_capacity(basis.len());
        for v in &basis {
            let mut acc = QExpansion::zero(nvars, min_trunc);
            for (f, c) in problem.forms.iter().zip(v) {
                if !c.is_zero() {
                    let mut term = f.truncated(min_trunc)?.scale(c);
                    term.set_meta(None)?;
                    acc.set_meta(None)?;
                    acc = acc.add(&term)?;
                }
            }
            flags.push(acc.is_zero());
        }
        Some(flags)
    } else {
        None
    };

    Ok(RelationSolution {
        basis,
        pivots: pivot_cols.iter().map(|&pc| order[pc]).collect(),
        free: free_cols.iter().map(|&fc| order[fc]).collect(),
        pivot_expressions,
        full_vanishing,
    })
}

/// Rank of the coefficient matrix of `forms`, all orders below `through24`.
pub fn rank_of(forms: &[QExpansion], through24: i64) -> Result<usize> {
    if forms.is_empty() {
        return Ok(0);
    }
    let k = forms.len();
    let nvars = forms[0].nvars();
    for f in forms {
        if f.nvars() != nvars {
            return Err(Error::VarMismatch(f.nvars(), nvars));
        }
        if f.trunc24() < through24 {
            return Err(Error::InsufficientPrecision(format!(
                "rank check needs truncation {}/24, have {}/24",
                through24,
                f.trunc24()
            )));
        }
    }
    let mut rows: BTreeMap<(i64, ExponentVec), Vec<Rational>> = BTreeMap::new();
    for (j, f) in forms.iter().enumerate() {
        for (q24, p) in f.levels() {
            if q24 >= through24 {
                break;
            }
            for (e, c) in p.iter() {
                rows.entry((q24, e.clone()))
                    .or_insert_with(|| vec![Rational::zero(); k])
                    [j] = c.clone();
            }
        }
    }
    let mut echelon: Vec<(usize, Vec<Rational>)> = Vec::new();
    for (_, mut row) in rows {
        for (pc, r) in &echelon {
            if !row[*pc].is_zero() {
                let f = row[*pc].clone();
                for (x, y) in row.iter_mut().zip(r.iter()) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pc) = row.iter().position(|x| !x.is_zero()) {
            let inv = rat(1) / row[pc].clone();
            for x in row.iter_mut() {
                *x *= &inv;
            }
            echelon.push((pc, row));
            if echelon.len() == k {
                break;
            }
        }
    }
    Ok(echelon.len())
}

/// Independence certificate: a named family of monomials in the generators,
/// its expected count, and the computed rank.
#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub monomials: Vec<String>,
    pub weight: i64,
    pub index: i64,
    pub rank: usize,
    pub expected: usize,
}

impl RankCertificate {
    pub fn full_rank(&self) -> bool {
        self.rank == self.expected
    }
}

/// Evaluates every generator monomial of the given bidegree for `Dₙ` and
/// certifies linear independence at the stored truncation.
///
/// Generators used: `φ₀,₁, φ₋₂,₁, φ₋₄,₁` (all n), the index-2 members
/// `φ₋₆,₂ … φ₋₂ₙ₊₂,₂` (n ≥ 4), `(ω^{Dₙ}₋ₙ,₁)²` (n ≥ 3), with `E₄^a E₆^b`
/// scalar factors.
pub fn independence_rank(n: usize, weight: i64, index: i64, trunc24: i64) -> Result<RankCertificate> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidArgument("rank certificates cover n = 2..8".into()));
    }
    if index < 0 || index > 2 {
        return Err(Error::InvalidArgument(
            "rank certificates cover index 0, 1, 2 (desk scale)".into(),
        ));
    }

    // Generator list: (label, weight, index, form)
    let mut gens: Vec<(String, i64, i64, QExpansion)> = Vec::new();
    if n == 2 {
        let fam = forms::d2_family(trunc24);
        gens.push(("phi01-d2".into(), 0, 1, fam.phi_0_1));
        gens.push(("phi-m21-d2".into(), -2, 1, fam.phi_m2_1));
        gens.push(("phi-m41-d2".into(), -4, 1, fam.phi_m4_1));
    } else {
        gens.push((
            "phi01".into(),
            0,
            1,
            forms::tower_form(forms::TowerName::Phi01, n, trunc24)?,
        ));
        gens.push((
            "phi-m21".into(),
            -2,
            1,
            forms::tower_form(forms::TowerName::PhiM21, n, trunc24)?,
        ));
        gens.push((
            "phi-m41".into(),
            -4,
            1,
            forms::tower_form(forms::TowerName::PhiM41, n, trunc24)?,
        ));
        for k in 3..n {
            gens.push((
                format!("phi-m{}-idx2", 2 * k),
                -2 * k as i64,
                2,
                forms::phi_index2(n, k, trunc24)?,
            ));
        }
        gens.push((
            "omega-sq".into(),
            -2 * n as i64,
            2,
            forms::omega_dn_squared(n, trunc24)?,
        ));
    }

    // Enumerate exponent tuples with matching total index, then lift the
    // weight with E₄^a E₆^b.
    let mut monomials: Vec<(String, QExpansion)> = Vec::new();
    let mut exps = vec![0usize; gens.len()];
    enumerate_monomials(
        &gens,
        &mut exps,
        0,
        weight,
        index,
        trunc24,
        &mut monomials,
    )?;

    let forms_only: Vec<QExpansion> = monomials.iter().map(|(_, f)| f.clone()).collect();
    let rank = rank_of(&forms_only, trunc24)?;
    Ok(RankCertificate {
        monomials: monomials.into_iter().map(|(s, _)| s).collect(),
        weight,
        index,
        rank,
        expected: forms_only.len(),
    })
}

fn enumerate_monomials(
    gens: &[(String, i64, i64, QExpansion)],
    exps: &mut Vec<usize>,
    pos: usize,
    weight: i64,
    index: i64,
    trunc24: i64,
    out: &mut Vec<(String, QExpansion)>,
) -> Result<()> {
    let used_index: i64 = exps
        .iter()
        .zip(gens)
        .map(|(&e, (_, _, m, _))| e as i64 * m)
        .sum();
    if used_index > index {
        return Ok(());
    }
    if pos == gens.len() {
        if used_index != index {
            return Ok(());
        }
        let used_weight: i64 = exps
            .iter()
            .zip(gens)
            .map(|(&e, (_, w, _, _))| e as i64 * w)
            .sum();
        let lift = weight - used_weight;
        if lift < 0 || lift % 2 != 0 {
            return Ok(());
        }
        // E₄^a E₆^b of weight `lift`
        fn push(acc: &mut Option<QExpansion>, f: &QExpansion) -> Result<()> {
            *acc = Some(match acc.take() {
                None => f.clone(),
                Some(x) => {
                    let mut p = x.mul(f)?;
                    p.set_meta(None)?;
                    p
                }
            });
            Ok(())
        }
        for b in 0..=(lift / 6) {
            let rem = lift - 6 * b;
            if rem % 4 != 0 {
                continue;
            }
            let a = rem / 4;
            let mut label_parts = Vec::new();
            let mut acc: Option<QExpansion> = None;
            for (e, (name, _, _, f)) in exps.iter().zip(gens) {
                for _ in 0..*e {
                    push(&mut acc, f)?;
                    label_parts.push(name.clone());
                }
            }
            let e4 = crate::blocks::eisenstein_e4(trunc24);
            let e6 = crate::blocks::eisenstein_e6(trunc24);
            for _ in 0..a {
                push(&mut acc, &e4)?;
                label_parts.push("E4".into());
            }
            for _ in 0..b {
                push(&mut acc, &e6)?;
                label_parts.push("E6".into());
            }
            if let Some(f) = acc {
                out.push((label_parts.join("·"), f.truncated(trunc24)?));
            }
        }
        return Ok(());
    }
    // exponent of generator `pos`: index ≤ 2, so at most 2 of any generator
    for e in 0..=2usize {
        exps[pos] = e;
        enumerate_monomials(gens, exps, pos + 1, weight, index, trunc24, out)?;
    }
    exps[pos] = 0;
    Ok(())
}

/// Divisibility probe: after checking the input vanishes on every `z_i = 0`
/// restriction, divides by `(ω^{Dₙ}₋ₙ,₁)²` and returns the weak quotient.
pub fn divisibility_probe(a: &QExpansion) -> Result<QExpansion> {
    let n = a.nvars();
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidArgument("probe expects 2..8 variables".into()));
    }
    for i in 0..n {
        if !a.restrict_at(i)?.is_zero() {
            return Err(Error::InexactDivision(format!(
                "restriction z_{} = 0 does not vanish",
                i + 1
            )));
        }
    }
    let omega_sq = forms::omega_dn_squared(n, a.trunc24())?;
    a.div(&omega_sq)
}

/// Scalar multiple abbreviation used by the suites.
pub fn scaled(f: &QExpansion, num: i64, den: i64) -> QExpansion {
    f.scale(&crate::rational::ratio(num, den))
}

/// Renders a basis vector for the reports.
pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{phi_0_1, phi_m2_1};
    use crate::qexp::trunc_through_order;
    use crate::rational::ratio;

    #[test]
    fn identity_witness() {
        let t = trunc_through_order(2);
        let a = phi_0_1(t);
        let b = phi_m2_1(t);
        let rep = check_identity(&a, &b).unwrap();
        assert!(!rep.holds());
        let w = rep.witness.unwrap();
        assert_eq!(w.q24, 0);
        assert_eq!(w.doubled_exponent, vec![0]);
        assert_eq!(w.lhs, rat(10));
        assert_eq!(w.rhs, rat(-2));
        let rep = check_identity(&a, &a).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn single_form_has_trivial_nullspace() {
        let t = trunc_through_order(2);
        let e4phi = crate::blocks::eisenstein_e4(t).mul(&phi_m2_1(t)).unwrap();
        let sol = solve_relation(&RelationProblem {
            forms: vec![e4phi],
            constrained_orders: vec![0],
            assert_full_vanishing: false,
        })
        .unwrap();
        assert_eq!(sol.dimension(), 0);
    }

    #[test]
    fn permuted_input_spans_same_space() {
        let t = trunc_through_order(3);
        let a = phi_m2_1(t);
        let b = phi_0_1(t);
        let two_a = a.scale(&rat(2));
        // dependent triple {a, b, 2a}
        let forms = vec![a.clone(), b.clone(), two_a.clone()];
        let forms_perm = vec![two_a, b, a];
        let sol1 = solve_relation(&RelationProblem {
            forms,
            constrained_orders: vec![0, 24, 48, 72],
            assert_full_vanishing: true,
        })
        .unwrap();
        let sol2 = solve_relation(&RelationProblem {
            forms: forms_perm,
            constrained_orders: vec![0, 24, 48, 72],
            assert_full_vanishing: true,
        })
        .unwrap();
        assert_eq!(sol1.dimension(), 1);
        assert_eq!(sol2.dimension(), 1);
        assert!(sol1.all_vanish());
        assert!(sol2.all_vanish());
        // (2, 0, -1)-type relation up to scale in both orders
        let v1 = &sol1.basis[0];
        assert_eq!(&v1[0] / &v1[2], rat(-2));
        let v2 = &sol2.basis[0];
        assert_eq!(&v2[0] / &v2[2], ratio(-1, 2));
    }

    #[test]
    fn duplicate_monomial_rank_deficit() {
        let t = trunc_through_order(3);
        let a = phi_m2_1(t);
        let forms = vec![a.clone(), a.clone()];
        assert_eq!(rank_of(&forms, t).unwrap(), 1);
    }

    #[test]
    fn probe_detects_nonvanishing_restriction() {
        let t = trunc_through_order(2);
        let fam = forms::d2_family(t);
        assert!(matches!(
            divisibility_probe(&fam.phi_0_1),
            Err(Error::InexactDivision(_))
        ));
    }

    #[test]
    fn probe_round_trip() {
        let t = trunc_through_order(2);
        let sq = forms::omega_dn_squared(2, t).unwrap();
        let e4 = crate::blocks::eisenstein_e4(t);
        let prod = sq.mul(&e4).unwrap();
        let back = divisibility_probe(&prod).unwrap();
        for n in 0..=1 {
            assert_eq!(
                back.coefficient_q(n).unwrap(),
                e4.coefficient_q(n)
                    .unwrap()
                    .embed(2, 0)
                    .unwrap(),
                "q^{}",
                n
            );
        }
    }
}
