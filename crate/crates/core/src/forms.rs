//! Constructors for the named weak Jacobi forms of the Dₙ towers.
//!
//! Index-one D₈ generators:
//!
//! * `ω^{D₈}₋₈,₁ = ϑ(z₁)···ϑ(z₈)/η²⁴` and its nⁿ-variable siblings,
//! * `Θ_{D₈} = ϑ(z₁)···ϑ(z₈) = Δ·ω^{D₈}₋₈,₁` (the singular-weight product),
//! * `Θ_{E₈}` and `Θ_{D₁₆⁺}|_{D₈}` by characteristic-theta coset formulas,
//! * `φ̃₋₄,₁ = Δ⁻¹(E₄Θ_{E₈} - Θ_{D₁₆⁺}|_{D₈})` and
//!   `φ^{D₈}₋₄,₁ = 2φ̃₋₄,₁ - E₄ω^{D₈}₋₈,₁`,
//! * `φ^{D₈}₋₂,₁ = 3·H₋₄(φ^{D₈}₋₄,₁)`,
//! * the two weight-zero forms as Hecke quotients, normalised so that their
//!   q⁰-terms are `8 + Σζⱼ^{±1}` and `512 + Σζ₁^{±1/2}···ζ₈^{±1/2}`:
//!   `φ^{D₈}₀,₁ = -(Θ_{D₈}|T₋(2))/Θ_{D₈}` and
//!   `ψ^{D₈}₀,₁ = 512·(ω^{D₈}₋₈,₁|T₋(2))/ω^{D₈}₋₈,₁`.
//!
//! The index-two family comes from the `nA₁` sublattice,
//! `φ₋₂ₖ,₂^{Dₙ} = Σ_{|S|=k} ∏_{i∈S} φ₋₂,₁(zᵢ) ∏_{j∉S} φ₀,₁(zⱼ)`,
//! computed by the elementary-symmetric recurrence rather than a raw n!
//! sum. Index-one tower members for n < 8 are defined by restriction.

use std::sync::Arc;

use crate::blocks::{self, CharKind};
use crate::cache::{cached_at_least, cached_family_at_least};
use crate::error::{Error, Result};
use crate::operators;
use crate::qexp::{JacobiFormMeta, LatticeLabel, QExpansion, SymmetryClass};
use crate::laurent::RatMatrix;
use crate::rational::{rat, ratio};

fn check_n(n: usize) -> Result<()> {
    if (2..=8).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "lattice rank {} outside the supported range 2..=8",
            n
        )))
    }
}

/// Balanced product `ϑ(z₁)···ϑ(z_k)` over disjoint variables.
fn theta_product(k: usize, theta_trunc24: i64) -> Result<QExpansion> {
    let th = blocks::theta_odd(theta_trunc24);
    fn rec(th: &QExpansion, k: usize) -> Result<QExpansion> {
        if k == 1 {
            return Ok(th.clone());
        }
        let left = rec(th, k / 2)?;
        let right = rec(th, k - k / 2)?;
        left.tensor(&right)
    }
    rec(&th, k)
}

/// `ω^{Dₙ}₋ₙ,₁ = ϑ(z₁)···ϑ(zₙ)/η^{3n}`: weight -n, index 1, W-invariant and
/// anti-invariant under a single sign flip.
pub fn omega_dn(n: usize, trunc24: i64) -> Result<QExpansion> {
    check_n(n)?;
    Ok(cached_at_least("omega", n, trunc24, || {
        let t_in = trunc24 + 3 * n as i64;
        let num = theta_product(n, t_in).expect("theta product");
        let den = blocks::eta_pow(3 * n as u32, t_in);
        let mut out = num
            .div(&den)
            .and_then(|s| s.truncated(trunc24))
            .expect("omega quotient");
        out.set_meta(Some(JacobiFormMeta::dn(
            -(n as i64),
            1,
            n,
            Some(SymmetryClass::WeylAntiFlip),
        )))
        .expect("omega meta");
        out
    }))
}

/// `(ω^{Dₙ}₋ₙ,₁)²`, an O-invariant index-2 generator.
pub fn omega_dn_squared(n: usize, trunc24: i64) -> Result<QExpansion> {
    check_n(n)?;
    let w = omega_dn(n, trunc24)?;
    let mut sq = w.mul(&w)?;
    sq.set_meta(Some(JacobiFormMeta::dn(
        -2 * n as i64,
        2,
        n,
        Some(if n == 4 {
            SymmetryClass::OPrime
        } else {
            SymmetryClass::FullOrthogonal
        }),
    )))?;
    Ok(sq)
}

/// `Θ_{D₈} = ϑ(z₁)···ϑ(z₈)`, the singular-weight product form; equals
/// `Δ·ω^{D₈}₋₈,₁` and has q-valuation one.
pub fn theta_d8_product(trunc24: i64) -> QExpansion {
    cached_at_least("theta_d8", 8, trunc24, || {
        let mut out = theta_product(8, trunc24)
            .and_then(|s| s.truncated(trunc24))
            .expect("theta product");
        out.set_meta(Some(JacobiFormMeta::dn(
            4,
            1,
            8,
            Some(SymmetryClass::WeylAntiFlip),
        )))
        .expect("theta meta");
        out
    })
}

fn char_product(kind: CharKind, trunc24: i64) -> Result<QExpansion> {
    let c = blocks::theta_char(kind, trunc24);
    let mut acc = c.clone();
    for _ in 1..8 {
        acc = acc.tensor(&c)?;
    }
    acc.truncated(trunc24)
}

/// `Θ_{E₈}` by the coset decomposition `E₈ = D₈ ∪ (D₈ + (1/2,…,1/2))`:
/// `(∏t3 + ∏t4 + ∏t2 + ∏t1s)/2`. Weyl-invariant; the glue-vector term
/// obstructs invariance under a single sign flip.
pub fn theta_e8(trunc24: i64) -> QExpansion {
    cached_at_least("theta_e8", 8, trunc24, || {
        let mut acc = char_product(CharKind::T3, trunc24).expect("t3 product");
        for kind in [CharKind::T4, CharKind::T2, CharKind::T1s] {
            acc = acc
                .add(&char_product(kind, trunc24).expect("char product"))
                .expect("coset sum");
        }
        let mut out = acc.scale(&ratio(1, 2));
        out.set_meta(Some(JacobiFormMeta::dn(4, 1, 8, Some(SymmetryClass::WeylOnly))))
            .expect("e8 meta");
        out
    })
}

/// `Θ_{D₁₆⁺}` restricted to the first eight coordinates. The sixteen-fold
/// coset products collapse to eight z-dependent characteristic thetas times
/// the scalar eighth powers; the odd term drops since `t1s(0) = 0`.
pub fn theta_d16plus_restricted(trunc24: i64) -> QExpansion {
    cached_at_least("theta_d16_d8", 8, trunc24, || {
        let mut acc: Option<QExpansion> = None;
        for kind in [CharKind::T3, CharKind::T4, CharKind::T2] {
            let z_part = char_product(kind, trunc24).expect("char product");
            let scalar = blocks::restricted_to_scalar(&blocks::theta_char(kind, trunc24))
                .expect("char at z=0")
                .pow(8)
                .and_then(|s| s.truncated(trunc24))
                .expect("scalar eighth power");
            let term = z_part.mul(&scalar).expect("coset term");
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term).expect("coset sum"),
            });
        }
        let mut out = acc.expect("terms").scale(&ratio(1, 2));
        out.set_meta(Some(JacobiFormMeta::dn(
            8,
            1,
            8,
            Some(SymmetryClass::FullOrthogonal),
        )))
        .expect("d16 meta");
        out
    })
}

/// `φ̃₋₄,₁ = Δ⁻¹(E₄·Θ_{E₈} - Θ_{D₁₆⁺}|_{D₈})`: Weyl-invariant but not
/// O-invariant.
pub fn phi_tilde_m4_1(trunc24: i64) -> QExpansion {
    cached_at_least("phi_tilde_m41", 8, trunc24, || {
        let t_in = trunc24 + 24;
        let e4 = blocks::eisenstein_e4(t_in);
        let num = e4
            .mul(&theta_e8(t_in))
            .and_then(|a| a.sub(&theta_d16plus_restricted(t_in)))
            .expect("weight-8 combination");
        let mut out = operators::divide_by_delta(&num, 1)
            .and_then(|s| s.truncated(trunc24))
            .expect("delta division");
        out.set_meta(Some(JacobiFormMeta::dn(
            -4,
            1,
            8,
            Some(SymmetryClass::WeylOnly),
        )))
        .expect("meta");
        out
    })
}

/// `φ^{D₈}₋₄,₁ = 2φ̃₋₄,₁ - E₄·ω^{D₈}₋₈,₁`, the O-invariant correction.
pub fn phi_m4_1_d8(trunc24: i64) -> QExpansion {
    cached_at_least("phi_m41_d8", 8, trunc24, || {
        let e4 = blocks::eisenstein_e4(trunc24);
        let omega = omega_dn(8, trunc24).expect("omega");
        let mut out = phi_tilde_m4_1(trunc24)
            .scale(&rat(2))
            .sub(&e4.mul(&omega).expect("E4·omega"))
            .expect("correction");
        out.set_meta(Some(JacobiFormMeta::dn(
            -4,
            1,
            8,
            Some(SymmetryClass::FullOrthogonal),
        )))
        .expect("meta");
        out
    })
}

/// `φ^{D₈}₋₂,₁ = 3·H₋₄(φ^{D₈}₋₄,₁)`.
pub fn phi_m2_1_d8(trunc24: i64) -> QExpansion {
    cached_at_least("phi_m21_d8", 8, trunc24, || {
        let mut out = operators::modular_diff_h(&phi_m4_1_d8(trunc24))
            .expect("H_{-4}")
            .scale(&rat(3));
        out.set_meta(Some(JacobiFormMeta::dn(
            -2,
            1,
            8,
            Some(SymmetryClass::FullOrthogonal),
        )))
        .expect("meta");
        out
    })
}

/// `φ^{D₈}₀,₁ = -(Θ_{D₈}|T₋(2))/Θ_{D₈}`, normalised so the q⁰-term is
/// `8 + Σ ζⱼ^{±1}`.
pub fn phi_0_1_d8(trunc24: i64) -> QExpansion {
    cached_at_least("phi01_d8", 8, trunc24, || {
        let den = theta_d8_product(trunc24 + 24);
        let num = operators::hecke_t2(&theta_d8_product(2 * (trunc24 + 24))).expect("Hecke image");
        let mut out = num
            .div(&den)
            .and_then(|s| s.truncated(trunc24))
            .expect("Hecke quotient")
            .neg();
        out.set_meta(Some(JacobiFormMeta::dn(
            0,
            1,
            8,
            Some(SymmetryClass::FullOrthogonal),
        )))
        .expect("meta");
        out
    })
}

/// `ψ^{D₈}₀,₁ = 512·(ω^{D₈}₋₈,₁|T₋(2))/ω^{D₈}₋₈,₁`, normalised so the
/// q⁰-term is `512 + Σ ζ₁^{±1/2}···ζ₈^{±1/2}`.
pub fn psi_0_1_d8(trunc24: i64) -> QExpansion {
    cached_at_least("psi01_d8", 8, trunc24, || {
        let den = omega_dn(8, trunc24).expect("omega");
        let num = operators::hecke_t2(&omega_dn(8, 2 * trunc24).expect("omega at 2T"))
            .expect("Hecke image");
        let mut out = num
            .div(&den)
            .and_then(|s| s.truncated(trunc24))
            .expect("Hecke quotient")
            .scale(&rat(512));
        out.set_meta(Some(JacobiFormMeta::dn(
            0,
            1,
            8,
            Some(SymmetryClass::FullOrthogonal),
        )))
        .expect("meta");
        out
    })
}

/// The whole index-two family `φ₋₂ₖ,₂^{Dₙ}` for `k = 0..=n`, by the
/// subset-sum recurrence over one variable at a time.
pub fn phi_index2_family(n: usize, trunc24: i64) -> Result<Arc<Vec<QExpansion>>> {
    check_n(n)?;
    Ok(cached_family_at_least("index2", n, trunc24, || {
        let a1 = blocks::phi_m2_1(trunc24);
        let b1 = blocks::phi_0_1(trunc24);
        let mut acc: Vec<QExpansion> = vec![QExpansion::one(n, trunc24)];
        for i in 0..n {
            let a = a1.embed(n, i).expect("embed phi_m21");
            let b = b1.embed(n, i).expect("embed phi_01");
            let mut next: Vec<QExpansion> = Vec::with_capacity(acc.len() + 1);
            for j in 0..=acc.len() {
                let mut term: Option<QExpansion> = None;
                if j < acc.len() {
                    term = Some(acc[j].mul(&b).expect("b step"));
                }
                if j > 0 {
                    let with_a = acc[j - 1].mul(&a).expect("a step");
                    term = Some(match term {
                        None => with_a,
                        Some(t) => t.add(&with_a).expect("combine"),
                    });
                }
                next.push(term.expect("nonempty"));
            }
            acc = next;
        }
        let symmetry = Some(if n == 4 {
            SymmetryClass::OPrime
        } else {
            SymmetryClass::FullOrthogonal
        });
        acc.into_iter()
            .enumerate()
            .map(|(k, mut f)| {
                f.set_meta(Some(JacobiFormMeta {
                    weight2: -4 * k as i64,
                    index: rat(2),
                    norm_form: vec![rat(1); n],
                    lattice: LatticeLabel::Dn(n),
                    symmetry,
                }))
                .expect("index2 meta");
                f
            })
            .collect()
    }))
}

/// `φ₋₂ₖ,₂^{Dₙ}`.
pub fn phi_index2(n: usize, k: usize, trunc24: i64) -> Result<QExpansion> {
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "index-2 member k = {} exceeds n = {}",
            k, n
        )));
    }
    Ok(phi_index2_family(n, trunc24)?[k].clone())
}

/// Index-one tower members.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TowerName {
    Phi01,
    PhiM21,
    PhiM41,
}

impl TowerName {
    pub fn label(self) -> &'static str {
        match self {
            TowerName::Phi01 => "phi01",
            TowerName::PhiM21 => "phi-m21",
            TowerName::PhiM41 => "phi-m41",
        }
    }
}

/// Tower member for `2 ≤ n ≤ 8`: the D₈ generator restricted `8-n` times.
pub fn tower_form(name: TowerName, n: usize, trunc24: i64) -> Result<QExpansion> {
    check_n(n)?;
    let key = match name {
        TowerName::Phi01 => "tower_phi01",
        TowerName::PhiM21 => "tower_phi_m21",
        TowerName::PhiM41 => "tower_phi_m41",
    };
    Ok(cached_at_least(key, n, trunc24, || {
        let mut f = match name {
            TowerName::Phi01 => phi_0_1_d8(trunc24),
            TowerName::PhiM21 => phi_m2_1_d8(trunc24),
            TowerName::PhiM41 => phi_m4_1_d8(trunc24),
        };
        for _ in n..8 {
            f = f.restrict_last().expect("tower restriction");
        }
        f
    }))
}

/// The five D₂ forms built from the `2A₁` products in the half-sum
/// coordinates `(w₁, w₂) = ((z₁+z₂)/2, (z₁-z₂)/2)`.
pub struct D2Family {
    /// `φ^{D₂}₋₄,₁`, q⁰-term `4 + Σ(ζⱼ+ζⱼ⁻¹) - 2Σζ₁^{±1/2}ζ₂^{±1/2}`.
    pub phi_m4_1: QExpansion,
    /// `φ^{D₂}₋₂,₁`, q⁰-term `-40 + 2Σ(ζⱼ+ζⱼ⁻¹) + 8Σζ₁^{±1/2}ζ₂^{±1/2}`.
    pub phi_m2_1: QExpansion,
    /// `φ̂^{D₂}₀,₁`, q⁰-term `100 + Σ(ζⱼ+ζⱼ⁻¹) + 10Σζ₁^{±1/2}ζ₂^{±1/2}`.
    pub phi_0_1_hat: QExpansion,
    /// `φ^{D₂}₀,₁ = φ̂^{D₂}₀,₁ + 5E₄φ^{D₂}₋₄,₁`.
    pub phi_0_1: QExpansion,
    /// `ω^{D₂}₋₂,₁`, one twelfth of the antisymmetric product combination.
    pub omega_m2_1: QExpansion,
}

/// Matrix of the substitution from w-expansions to z-coordinates.
fn d2_change() -> RatMatrix {
    RatMatrix::new(
        2,
        2,
        vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(-1, 2)],
    )
    .expect("2x2 matrix")
}

pub fn d2_family(trunc24: i64) -> D2Family {
    let fam = cached_family_at_least("d2", 2, trunc24, || {
        let a = blocks::phi_m2_1(trunc24);
        let b = blocks::phi_0_1(trunc24);
        let m = d2_change();
        let sub = |w: QExpansion| -> QExpansion {
            w.substitute_linear(&m).expect("coordinate change")
        };
        let aa = a.tensor(&a).expect("phi_m21 ⊗ phi_m21");
        let ab = a.tensor(&b).expect("phi_m21 ⊗ phi_01");
        let ba = b.tensor(&a).expect("phi_01 ⊗ phi_m21");
        let bb = b.tensor(&b).expect("phi_01 ⊗ phi_01");

        let mut phi_m41 = sub(aa);
        let mut phi_m21 = sub(ab.add(&ba).expect("symmetric sum"));
        let mut phi01_hat = sub(bb);
        let mut omega = sub(ab.sub(&ba).expect("antisymmetric sum")).scale(&ratio(1, 12));

        let e4 = blocks::eisenstein_e4(trunc24);
        let mut phi01 = phi01_hat
            .add(&e4.mul(&phi_m41).expect("E4 phi_m41").scale(&rat(5)))
            .expect("index-one correction");

        let tag = |f: &mut QExpansion, weight: i64, sym: SymmetryClass| {
            f.set_meta(Some(JacobiFormMeta::dn(weight, 1, 2, Some(sym))))
                .expect("d2 meta");
        };
        tag(&mut phi_m41, -4, SymmetryClass::FullOrthogonal);
        tag(&mut phi_m21, -2, SymmetryClass::FullOrthogonal);
        tag(&mut phi01_hat, 0, SymmetryClass::FullOrthogonal);
        tag(&mut phi01, 0, SymmetryClass::FullOrthogonal);
        tag(&mut omega, -2, SymmetryClass::WeylAntiFlip);
        vec![phi_m41, phi_m21, phi01_hat, phi01, omega]
    });
    D2Family {
        phi_m4_1: fam[0].clone(),
        phi_m2_1: fam[1].clone(),
        phi_0_1_hat: fam[2].clone(),
        phi_0_1: fam[3].clone(),
        omega_m2_1: fam[4].clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::trunc_through_order;
    use crate::rational::rat;
    use crate::symmetry::{is_anti_invariant, is_invariant, GroupTag};

    #[test]
    fn omega_d2_leading_term() {
        let w = omega_dn(2, trunc_through_order(1)).unwrap();
        let q0 = w.coefficient_q(0).unwrap();
        // (ζ₁^{1/2} - ζ₁^{-1/2})(ζ₂^{1/2} - ζ₂^{-1/2})
        assert_eq!(q0.coefficient(&[1, 1]), rat(1));
        assert_eq!(q0.coefficient(&[-1, 1]), rat(-1));
        assert_eq!(q0.coefficient(&[1, -1]), rat(-1));
        assert_eq!(q0.coefficient(&[-1, -1]), rat(1));
        assert_eq!(q0.nterms(), 4);
    }

    #[test]
    fn omega_invariance_pattern() {
        let w = omega_dn(3, trunc_through_order(1)).unwrap();
        assert!(is_invariant(&w, GroupTag::Weyl(3)).unwrap());
        assert!(!is_invariant(&w, GroupTag::Orthogonal(3)).unwrap());
        assert!(is_anti_invariant(&w, GroupTag::Orthogonal(3)).unwrap());
    }

    #[test]
    fn theta_d8_is_delta_times_omega() {
        let t = trunc_through_order(2);
        let theta = theta_d8_product(t);
        assert_eq!(theta.val24(), Some(24));
        let product = crate::blocks::delta(t)
            .mul(&omega_dn(8, t).unwrap())
            .unwrap()
            .truncated(t)
            .unwrap();
        assert_eq!(theta.levels().count(), product.levels().count());
        for (e, p) in theta.levels() {
            assert_eq!(Some(p), product.level(e));
        }
    }

    #[test]
    fn theta_e8_restricts_to_e4() {
        let t = trunc_through_order(3);
        let th = theta_e8(t);
        let restricted = crate::blocks::restricted_to_scalar(&th).unwrap();
        let e4 = crate::blocks::eisenstein_e4(t);
        for n in 0..=3 {
            assert_eq!(
                restricted.coefficient_q(n).unwrap().constant_term(),
                e4.coefficient_q(n).unwrap().constant_term(),
                "q^{}",
                n
            );
        }
    }

    #[test]
    fn index2_family_small() {
        // n = 2, k = 1: φ₋₂,₁(z₁)φ₀,₁(z₂) + φ₀,₁(z₁)φ₋₂,₁(z₂).
        let fam = phi_index2_family(2, trunc_through_order(1)).unwrap();
        let f = &fam[1];
        let q0 = f.coefficient_q(0).unwrap();
        // coefficient of ζ₁ζ₂: 1·1 + 1·1 = 2; of ζ₁: 1·10 + ... = 8
        assert_eq!(q0.coefficient(&[2, 2]), rat(2));
        assert_eq!(q0.coefficient(&[2, 0]), rat(8));
        assert_eq!(q0.coefficient(&[0, 0]), rat(-40));
        assert_eq!(f.meta().unwrap().weight2, -4);
        assert_eq!(f.meta().unwrap().index, rat(2));
    }

    #[test]
    fn d2_family_q0_terms() {
        let fam = d2_family(trunc_through_order(1));
        let c = fam.phi_m4_1.coefficient_q(0).unwrap();
        assert_eq!(c.coefficient(&[0, 0]), rat(4));
        assert_eq!(c.coefficient(&[2, 0]), rat(1));
        assert_eq!(c.coefficient(&[0, -2]), rat(1));
        assert_eq!(c.coefficient(&[1, 1]), rat(-2));
        assert_eq!(c.coefficient(&[1, -1]), rat(-2));

        let c = fam.phi_m2_1.coefficient_q(0).unwrap();
        assert_eq!(c.coefficient(&[0, 0]), rat(-40));
        assert_eq!(c.coefficient(&[2, 0]), rat(2));
        assert_eq!(c.coefficient(&[1, 1]), rat(8));

        let c = fam.phi_0_1_hat.coefficient_q(0).unwrap();
        assert_eq!(c.coefficient(&[0, 0]), rat(100));
        assert_eq!(c.coefficient(&[2, 0]), rat(1));
        assert_eq!(c.coefficient(&[1, -1]), rat(10));

        // The half-integer monomials cancel out of φ^{D₂}₀,₁.
        let c = fam.phi_0_1.coefficient_q(0).unwrap();
        assert_eq!(c.coefficient(&[0, 0]), rat(120));
        assert_eq!(c.coefficient(&[2, 0]), rat(6));
        assert_eq!(c.coefficient(&[1, 1]), rat(0));

        let c = fam.omega_m2_1.coefficient_q(0).unwrap();
        assert_eq!(c.coefficient(&[1, 1]), rat(1));
        assert_eq!(c.coefficient(&[-1, 1]), rat(-1));
    }

    #[test]
    fn d2_omega_equals_theta_quotient() {
        // The antisymmetric combination over twelve coincides with
        // ϑ(z₁)ϑ(z₂)/η⁶.
        let t = trunc_through_order(3);
        let fam = d2_family(t);
        let direct = omega_dn(2, t).unwrap();
        for n in 0..=3 {
            assert_eq!(
                fam.omega_m2_1.coefficient_q(n).unwrap(),
                direct.coefficient_q(n).unwrap(),
                "q^{}",
                n
            );
        }
    }
}
