//! The Hecke operator `T₋(2)` and the modular differential operator `H_k`
//! on Fourier expansions.
//!
//! `T₋(m)` for index-one forms averages
//! `m⁻¹ Σ_{ad=m, b mod d} a^k φ((aτ+b)/d, a𝔷)`. For `m = 2` the three terms
//! `(a,d,b) ∈ {(2,1,0), (1,2,0), (1,2,1)}` collapse to the coefficient rule
//!
//! ```text
//! c'(n, l) = c(2n, l) + 2^{k-1} · c(n/2, l/2)
//! ```
//!
//! where the second summand is present only when `n` is even and `l/2` still
//! lies in the exponent lattice — the b-average kills the odd q-powers. The
//! rule is checked against direct three-term evaluation on rescaled
//! expansions by the verification suites. The index doubles, the weight is
//! unchanged, and the input must reach twice the target truncation.
//!
//! `H_k` acts by
//!
//! ```text
//! H(φ) = Σ (n - (l,l)/2m) a(n,l) qⁿ ζ^l + (2k - n₀) G₂(τ) φ
//! ```
//!
//! raising the weight by two and preserving the index, truncation, and weak
//! (holomorphic, cusp) support.

use crate::blocks;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::qexp::{JacobiFormMeta, QExpansion};
use crate::rational::{pow2, rat, ratio, Rational};
use num_traits::Zero;

/// `T₋(m)`; only `m = 2` is implemented, the signature carries `m` so the
/// contract is explicit.
pub fn hecke_t_minus(a: &QExpansion, m: u32) -> Result<QExpansion> {
    if m != 2 {
        return Err(Error::Unsupported(format!("T_-({}) is not implemented, only m = 2", m)));
    }
    hecke_t2(a)
}

pub fn hecke_t2(a: &QExpansion) -> Result<QExpansion> {
    let meta = a
        .meta()
        .ok_or(Error::MissingMeta("Hecke operator needs weight and index"))?;
    if meta.index != rat(1) {
        return Err(Error::Unsupported(
            "T_-(2) is implemented for index-one forms".into(),
        ));
    }
    if !meta.weight_is_integral() {
        return Err(Error::Unsupported(
            "T_-(2) needs an integral weight".into(),
        ));
    }
    if a.levels().any(|(e, _)| e % 24 != 0) {
        return Err(Error::Unsupported(
            "T_-(2) needs integer q-exponents".into(),
        ));
    }
    let k = meta.weight2 / 2;
    let half_scale = pow2(k - 1);
    let trunc_out = (a.trunc24() + 1) / 2;
    if trunc_out <= 0 {
        return Err(Error::InsufficientPrecision(
            "input truncation too small for the Hecke operator".into(),
        ));
    }

    let mut levels: Vec<(i64, LaurentPoly)> = Vec::new();
    let mut n24 = 0;
    while n24 < trunc_out {
        let mut level = a
            .level(2 * n24)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(a.nvars()));
        if n24 % 48 == 0 {
            if let Some(src) = a.level(n24 / 2) {
                // c(n/2, l/2) contributes at doubled exponent vectors.
                let doubled = src.exponents_doubled().scale(&half_scale);
                level = level.add(&doubled)?;
            }
        }
        if !level.is_zero() {
            levels.push((n24, level));
        }
        n24 += 24;
    }
    let out_meta = JacobiFormMeta {
        weight2: meta.weight2,
        index: &meta.index * rat(2),
        norm_form: meta.norm_form.clone(),
        lattice: meta.lattice,
        symmetry: None,
    };
    QExpansion::from_levels(a.nvars(), trunc_out, levels, Some(out_meta))
}

/// Modular differential operator; the weight used is read from metadata.
pub fn modular_diff_h(a: &QExpansion) -> Result<QExpansion> {
    let meta = a
        .meta()
        .ok_or(Error::MissingMeta("H needs weight, index and norm form"))?
        .clone();
    if meta.index <= Rational::from_integer(0.into()) {
        return Err(Error::InvalidArgument(
            "H is defined for positive index".into(),
        ));
    }
    if meta.norm_form.len() != a.nvars() {
        return Err(Error::NormFormMismatch);
    }
    let two_m = rat(2) * &meta.index;
    let n0 = a.nvars() as i64;

    // Σ (n - (l,l)/2m) a(n,l) qⁿ ζ^l
    let mut first = Vec::new();
    for (n24, p) in a.levels() {
        let n = ratio(n24, 24);
        let mut level = LaurentPoly::zero(a.nvars());
        for (e, c) in p.iter() {
            let ll = meta.norm_of(e.entries());
            let factor = &n - ll / &two_m;
            if factor.is_zero() {
                continue;
            }
            level = level.add(&LaurentPoly::monomial(a.nvars(), e.entries(), c * factor)?)?;
        }
        if !level.is_zero() {
            first.push((n24, level));
        }
    }
    let first = QExpansion::from_levels(a.nvars(), a.trunc24(), first, None)?;

    // (2k - n₀) G₂ φ
    let g2 = blocks::eisenstein_g2(a.trunc24());
    let tail = g2.mul(a)?.scale(&rat(meta.weight2 - n0));

    let mut out = first.add(&tail)?;
    out.set_meta(Some(JacobiFormMeta {
        weight2: meta.weight2 + 4,
        index: meta.index.clone(),
        norm_form: meta.norm_form.clone(),
        lattice: meta.lattice,
        symmetry: meta.symmetry,
    }))?;
    Ok(out)
}

/// Division by `Δ^power`; the input must have q-valuation at least `power`.
pub fn divide_by_delta(a: &QExpansion, power: u32) -> Result<QExpansion> {
    if power == 0 {
        return Err(Error::InvalidArgument("power must be positive".into()));
    }
    let val = a.val24().unwrap_or(a.trunc24());
    if val < 24 * power as i64 {
        return Err(Error::InvalidArgument(format!(
            "q-valuation {}/24 is below Δ^{}",
            val, power
        )));
    }
    let den = blocks::eta_pow(24 * power, a.trunc24());
    a.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{phi_0_1, phi_m2_1};
    use crate::qexp::trunc_through_order;
    use crate::rational::{rat, ratio};

    #[test]
    fn h_on_phi_m21_gives_phi_01() {
        // H₋₂(φ₋₂,₁) = -(1/24) φ₀,₁, the defining normalisation check.
        let t = trunc_through_order(4);
        let lhs = modular_diff_h(&phi_m2_1(t)).unwrap();
        let rhs = phi_0_1(t).scale(&ratio(-1, 24));
        assert_eq!(lhs.trunc24(), rhs.trunc24());
        for n in 0..=4 {
            assert_eq!(
                lhs.coefficient_q(n).unwrap(),
                rhs.coefficient_q(n).unwrap(),
                "level q^{}",
                n
            );
        }
    }

    #[test]
    fn h_on_phi_01_display() {
        // H₀(φ₀,₁) = -5/24 ζ + 10/24 - 5/24 ζ^{-1} + q·(...)
        let h = modular_diff_h(&phi_0_1(trunc_through_order(2))).unwrap();
        let q0 = h.coefficient_q(0).unwrap();
        assert_eq!(q0.coefficient(&[2]), ratio(-5, 24));
        assert_eq!(q0.coefficient(&[0]), ratio(10, 24));
        assert_eq!(q0.coefficient(&[-2]), ratio(-5, 24));
        assert_eq!(h.meta().unwrap().weight2, 4);
    }

    #[test]
    fn hecke_requires_meta_and_index_one() {
        let t = trunc_through_order(4);
        let mut naked = phi_m2_1(t);
        naked.set_meta(None).unwrap();
        assert!(matches!(hecke_t2(&naked), Err(Error::MissingMeta(_))));

        let index2 = hecke_t2(&phi_m2_1(t)).unwrap();
        assert_eq!(index2.meta().unwrap().index, rat(2));
        assert!(matches!(hecke_t2(&index2), Err(Error::Unsupported(_))));
        assert!(matches!(hecke_t_minus(&phi_m2_1(t), 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn hecke_halves_truncation() {
        let t = trunc_through_order(8);
        let out = hecke_t2(&phi_m2_1(t)).unwrap();
        assert_eq!(out.trunc24(), (t + 1) / 2);
    }

    #[test]
    fn hecke_quotient_reproduces_phi01() {
        // The derived normalisation: 8·(φ₋₂,₁|T₋(2))/φ₋₂,₁ = φ₀,₁.
        let t = trunc_through_order(4);
        let num = hecke_t2(&phi_m2_1(trunc_through_order(9))).unwrap();
        let quot = num.div(&phi_m2_1(trunc_through_order(9))).unwrap();
        let lhs = quot.scale(&rat(8)).truncated(t).unwrap();
        let rhs = phi_0_1(t);
        for n in 0..=4 {
            assert_eq!(
                lhs.coefficient_q(n).unwrap(),
                rhs.coefficient_q(n).unwrap(),
                "level q^{}",
                n
            );
        }
    }

    #[test]
    fn divide_by_delta_contract() {
        let t = trunc_through_order(5);
        let d = crate::blocks::delta(t);
        let sq = d.mul(&d).unwrap();
        let back = divide_by_delta(&sq, 1).unwrap();
        for n in 1..=3 {
            assert_eq!(
                back.coefficient_q(n).unwrap(),
                d.coefficient_q(n).unwrap()
            );
        }
        let one = QExpansion::one(0, t);
        assert!(divide_by_delta(&one, 1).is_err());
    }
}
