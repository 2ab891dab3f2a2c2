//! One-variable building blocks.
//!
//! * `η(τ) = q^{1/24} ∏ (1-qⁿ)`, expanded by the pentagonal-number series,
//! * the Eisenstein series `E₄ = 1 + 240 Σ σ₃(n) qⁿ`,
//!   `E₆ = 1 - 504 Σ σ₅(n) qⁿ` and the quasi-modular
//!   `G₂ = -1/24 + Σ σ₁(n) qⁿ`,
//! * the odd theta function
//!   `ϑ(τ,z) = q^{1/8} Σ_n (-1)ⁿ q^{n(n+1)/2} ζ^{n+1/2}`,
//! * the four characteristic theta series used by the coset formulas,
//! * the index-one pair `φ₋₂,₁ = ϑ²/η⁶` and `φ₀,₁ = -24·H₋₂(φ₋₂,₁)`.
//!
//! Everything here is memoized by `(kind, truncation)`: η and ϑ appear in
//! every constructor of the crate.

use crate::cache::{cached, CacheKey};
use crate::error::Result;
use crate::laurent::LaurentPoly;
use crate::operators;
use crate::qexp::{JacobiFormMeta, LatticeLabel, QExpansion};
use crate::rational::{rat, ratio, Rational};

/// Dedekind eta. Truncation in 1/24 units.
pub fn eta(trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("eta", trunc24), || {
        let mut levels = Vec::new();
        // q^{1/24} Σ_k (-1)^k q^{k(3k-1)/2}: exponent over 24 is 12k(3k-1)+1.
        let mut k: i64 = 0;
        loop {
            let mut hit = false;
            let candidates = if k == 0 { vec![0] } else { vec![k, -k] };
            for kk in candidates {
                let e = 12 * kk * (3 * kk - 1) + 1;
                if e < trunc24 {
                    hit = true;
                    let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                    levels.push((e, LaurentPoly::constant(0, rat(sign))));
                }
            }
            if !hit {
                break;
            }
            k += 1;
        }
        QExpansion::from_levels(0, trunc24, levels, Some(JacobiFormMeta {
            weight2: 1,
            index: Rational::from_integer(0.into()),
            norm_form: vec![],
            lattice: LatticeLabel::Scalar,
            symmetry: None,
        }))
        .expect("eta construction")
    })
}

/// `η^p`.
pub fn eta_pow(p: u32, trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("eta_pow", trunc24 * 64 + p as i64), || {
        // η has valuation 1/24, so the power-by-squaring truncation only
        // grows; truncate back down to the requested bound.
        eta(trunc24)
            .pow(p)
            .and_then(|s| s.truncated(trunc24))
            .expect("eta power")
    })
}

/// `Δ = η²⁴`, weight 12, q-valuation exactly 1.
pub fn delta(trunc24: i64) -> QExpansion {
    eta_pow(24, trunc24)
}

fn divisor_sum_series(power: u32, constant: Rational, scale: i64, trunc24: i64) -> QExpansion {
    let n_max = (trunc24 - 1).div_euclid(24);
    let mut sums = vec![0i128; (n_max + 1).max(1) as usize];
    for d in 1..=n_max.max(0) {
        let mut m = d;
        while m <= n_max {
            sums[m as usize] += (d as i128).pow(power);
            m += d;
        }
    }
    let mut levels = vec![(0, LaurentPoly::constant(0, constant))];
    for n in 1..=n_max.max(0) {
        let c = rat(scale) * Rational::from_integer(sums[n as usize].into());
        levels.push((24 * n, LaurentPoly::constant(0, c)));
    }
    QExpansion::from_levels(0, trunc24, levels, None).expect("divisor sums")
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ`.
pub fn eisenstein_e4(trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("e4", trunc24), || {
        let mut s = divisor_sum_series(3, rat(1), 240, trunc24);
        s.set_meta(Some(JacobiFormMeta::modular(8))).expect("meta");
        s
    })
}

/// `E₆ = 1 - 504 Σ σ₅(n) qⁿ`.
pub fn eisenstein_e6(trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("e6", trunc24), || {
        let mut s = divisor_sum_series(5, rat(1), -504, trunc24);
        s.set_meta(Some(JacobiFormMeta::modular(12))).expect("meta");
        s
    })
}

/// Quasi-modular `G₂ = -1/24 + Σ σ₁(n) qⁿ`. Carries no weight metadata.
pub fn eisenstein_g2(trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("g2", trunc24), || {
        divisor_sum_series(1, ratio(-1, 24), 1, trunc24)
    })
}

/// Odd Jacobi theta function, one variable, by the sum formula. Monomials
/// are `(-1)ⁿ q^{(2n+1)²/8} ζ^{(2n+1)/2}`.
pub fn theta_odd(trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("theta_odd", trunc24), || {
        let mut levels = Vec::new();
        let mut n: i64 = 0;
        loop {
            let mut any = false;
            for nn in [n, -n - 1] {
                let odd = 2 * nn + 1;
                let e = 3 * odd * odd; // 24 · (2n+1)²/8
                if e < trunc24 {
                    any = true;
                    let sign = if nn.rem_euclid(2) == 0 { 1 } else { -1 };
                    levels.push((
                        e,
                        LaurentPoly::monomial(1, &[odd as i32], rat(sign)).expect("theta term"),
                    ));
                }
            }
            if !any {
                break;
            }
            n += 1;
        }
        QExpansion::from_levels(
            1,
            trunc24,
            levels,
            Some(JacobiFormMeta {
                weight2: 1,
                index: ratio(1, 2),
                norm_form: vec![ratio(1, 2)],
                lattice: LatticeLabel::Zn(1),
                symmetry: None,
            }),
        )
        .expect("theta construction")
    })
}

/// Odd theta by the triple product
/// `-q^{1/8} ζ^{-1/2} ∏ (1-q^{n-1}ζ)(1-qⁿζ^{-1})(1-qⁿ)`; the sum and product
/// forms must agree, which the block suite asserts.
pub fn theta_odd_product(trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("theta_odd_product", trunc24), || {
        let head = QExpansion::from_levels(
            1,
            trunc24,
            [(3, LaurentPoly::monomial(1, &[-1], rat(-1)).expect("head"))],
            None,
        )
        .expect("head level");
        // Extra working precision: dividing nothing here, products only.
        let mut acc = head;
        let mut n: i64 = 1;
        loop {
            let e_min = 24 * (n - 1); // the (1 - q^{n-1} ζ) factor
            if e_min >= trunc24 && 24 * n >= trunc24 {
                break;
            }
            for (e, zexp) in [(24 * (n - 1), 2i32), (24 * n, -2), (24 * n, 0)] {
                let mut levels = vec![(0, LaurentPoly::one(1))];
                if e < trunc24 {
                    levels.push((e, LaurentPoly::monomial(1, &[zexp], rat(-1)).expect("factor")));
                } else {
                    continue;
                }
                let factor = QExpansion::from_levels(1, trunc24, levels, None).expect("factor");
                acc = acc.mul(&factor).and_then(|p| p.truncated(trunc24)).expect("product");
            }
            n += 1;
        }
        acc
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CharKind {
    /// `Σ q^{(m+1/2)²/2} ζ^{m+1/2}`
    T2,
    /// `Σ q^{m²/2} ζ^m`
    T3,
    /// `Σ (-1)^m q^{m²/2} ζ^m`
    T4,
    /// `Σ (-1)^m q^{(m+1/2)²/2} ζ^{m+1/2}`
    T1s,
}

impl CharKind {
    pub fn name(self) -> &'static str {
        match self {
            CharKind::T2 => "t2",
            CharKind::T3 => "t3",
            CharKind::T4 => "t4",
            CharKind::T1s => "t1s",
        }
    }
}

/// Characteristic theta series, one variable.
pub fn theta_char(kind: CharKind, trunc24: i64) -> QExpansion {
    cached(CacheKey::Block(kind.name(), trunc24), || {
        let mut levels = Vec::new();
        let half = matches!(kind, CharKind::T2 | CharKind::T1s);
        let signed = matches!(kind, CharKind::T4 | CharKind::T1s);
        let mut m: i64 = 0;
        loop {
            let mut any = false;
            let candidates = if half { vec![m, -m - 1] } else if m == 0 { vec![0] } else { vec![m, -m] };
            for mm in candidates {
                // doubled ζ-exponent
                let doubled = if half { 2 * mm + 1 } else { 2 * mm };
                // q-exponent over 24: 24·(doubled/2)²/2 = 3·doubled²
                let e = 3 * doubled * doubled;
                if e < trunc24 {
                    any = true;
                    let sign = if signed && mm.rem_euclid(2) == 1 { -1 } else { 1 };
                    levels.push((
                        e,
                        LaurentPoly::monomial(1, &[doubled as i32], rat(sign)).expect("char term"),
                    ));
                }
            }
            if !any {
                break;
            }
            m += 1;
        }
        QExpansion::from_levels(
            1,
            trunc24,
            levels,
            Some(JacobiFormMeta {
                weight2: 1,
                index: ratio(1, 2),
                norm_form: vec![ratio(1, 2)],
                lattice: LatticeLabel::Zn(1),
                symmetry: None,
            }),
        )
        .expect("char construction")
    })
}

/// `φ₋₂,₁ = ϑ²/η⁶`, the Eichler–Zagier generator of weight -2.
pub fn phi_m2_1(trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("phi_m2_1", trunc24), || {
        // ϑ² and η⁶ both have valuation 6/24; inputs need trunc+6.
        let t_in = trunc24 + 6;
        let th = theta_odd(t_in);
        let num = th.mul(&th).expect("theta squared");
        let den = eta_pow(6, t_in);
        let mut out = num
            .div(&den)
            .and_then(|s| s.truncated(trunc24))
            .expect("phi_m2_1");
        out.set_meta(Some(JacobiFormMeta {
            symmetry: None,
            ..JacobiFormMeta::a1(-2, 1)
        }))
        .expect("meta");
        out
    })
}

/// `φ₀,₁ = -24·H₋₂(φ₋₂,₁)`, cross-checked against the Hecke construction by
/// the verification suites.
pub fn phi_0_1(trunc24: i64) -> QExpansion {
    cached(CacheKey::Block("phi_0_1", trunc24), || {
        let phi = phi_m2_1(trunc24);
        let mut out = operators::modular_diff_h(&phi)
            .expect("H_{-2}")
            .scale(&rat(-24));
        out.set_meta(Some(JacobiFormMeta::a1(0, 1))).expect("meta");
        out
    })
}

/// Scalar value series `f(τ) = block(τ, 0)`.
pub fn restricted_to_scalar(a: &QExpansion) -> Result<QExpansion> {
    let mut out = a.clone();
    while out.nvars() > 0 {
        out = out.restrict_last()?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::trunc_through_order;
    use crate::rational::rat;
    use num_traits::Zero;

    #[test]
    fn eta_pentagonal_head() {
        // q^{1/24}(1 - q - q² + q⁵ + q⁷ - ...)
        let e = eta(24 * 9);
        let s = e.scalar_levels().unwrap();
        assert_eq!(s.get(&1), Some(&rat(1)));
        assert_eq!(s.get(&25), Some(&rat(-1)));
        assert_eq!(s.get(&49), Some(&rat(-1)));
        assert_eq!(s.get(&121), Some(&rat(1)));
        assert_eq!(s.get(&169), Some(&rat(1)));
        assert_eq!(s.get(&73), None);
    }

    #[test]
    fn eta_truncation_monotone() {
        let big = eta(24 * 12);
        let small = eta(24 * 5);
        assert_eq!(big.truncated(24 * 5).unwrap(), small);
    }

    #[test]
    fn delta_is_classical() {
        // Δ = q - 24q² + 252q³ - 1472q⁴ + ...
        let d = delta(trunc_through_order(4));
        assert_eq!(d.val24(), Some(24));
        let s = d.scalar_levels().unwrap();
        assert_eq!(s.get(&24), Some(&rat(1)));
        assert_eq!(s.get(&48), Some(&rat(-24)));
        assert_eq!(s.get(&72), Some(&rat(252)));
        assert_eq!(s.get(&96), Some(&rat(-1472)));
    }

    #[test]
    fn delta_against_product_oracle() {
        // Direct expansion of q·∏(1-qⁿ)²⁴ as an independent route.
        let trunc = trunc_through_order(6);
        let mut acc = QExpansion::from_levels(
            0,
            trunc,
            [(24, LaurentPoly::one(0))],
            None,
        )
        .unwrap();
        for n in 1..=6i64 {
            let f = QExpansion::from_levels(
                0,
                trunc,
                [
                    (0, LaurentPoly::one(0)),
                    (24 * n, LaurentPoly::constant(0, rat(-1))),
                ],
                None,
            )
            .unwrap();
            for _ in 0..24 {
                acc = acc.mul(&f).unwrap().truncated(trunc).unwrap();
            }
        }
        let d = delta(trunc);
        for n in 0..=6 {
            assert_eq!(
                acc.coefficient_q(n).unwrap(),
                d.coefficient_q(n).unwrap(),
                "Δ mismatch at q^{}",
                n
            );
        }
    }

    #[test]
    fn eisenstein_values() {
        let e4 = eisenstein_e4(trunc_through_order(3));
        let e6 = eisenstein_e6(trunc_through_order(3));
        let g2 = eisenstein_g2(trunc_through_order(3));
        assert_eq!(e4.coefficient_q(1).unwrap().constant_term(), rat(240));
        assert_eq!(e4.coefficient_q(2).unwrap().constant_term(), rat(2160));
        assert_eq!(e6.coefficient_q(1).unwrap().constant_term(), rat(-504));
        assert_eq!(g2.coefficient_q(0).unwrap().constant_term(), ratio(-1, 24));
        assert_eq!(g2.coefficient_q(2).unwrap().constant_term(), rat(3)); // σ₁(2) = 3
    }

    #[test]
    fn theta_first_levels() {
        let th = theta_odd(trunc_through_order(2));
        // q^{1/8}: ζ^{1/2} - ζ^{-1/2}
        let l = th.coefficient(3).unwrap();
        assert_eq!(l.coefficient(&[1]), rat(1));
        assert_eq!(l.coefficient(&[-1]), rat(-1));
        // q^{9/8}: -ζ^{3/2} + ζ^{-3/2}
        let l9 = th.coefficient(27).unwrap();
        assert_eq!(l9.coefficient(&[3]), rat(-1));
        assert_eq!(l9.coefficient(&[-3]), rat(1));
    }

    #[test]
    fn theta_sum_equals_product() {
        let t = 24 * 6;
        let sum = theta_odd(t);
        let prod = theta_odd_product(t).truncated(t).unwrap();
        assert_eq!(sum.trunc24(), prod.trunc24());
        assert_eq!(
            sum.levels().collect::<Vec<_>>(),
            prod.levels().collect::<Vec<_>>()
        );
    }

    #[test]
    fn theta_char_values() {
        let t3 = theta_char(CharKind::T3, trunc_through_order(2));
        assert_eq!(t3.coefficient(0).unwrap().constant_term(), rat(1));
        let half = t3.coefficient(12).unwrap(); // q^{1/2}
        assert_eq!(half.coefficient(&[2]), rat(1));
        assert_eq!(half.coefficient(&[-2]), rat(1));

        let t2 = theta_char(CharKind::T2, trunc_through_order(2));
        let l = t2.coefficient(3).unwrap(); // q^{1/8}
        assert_eq!(l.coefficient(&[1]), rat(1));
        assert_eq!(l.coefficient(&[-1]), rat(1));

        let t1s = theta_char(CharKind::T1s, trunc_through_order(2));
        let r = restricted_to_scalar(&t1s).unwrap();
        assert!(r.is_zero(), "t1s vanishes identically at z = 0");
    }

    #[test]
    fn phi_m2_1_leading_term() {
        let p = phi_m2_1(trunc_through_order(2));
        let q0 = p.coefficient_q(0).unwrap();
        assert_eq!(q0.coefficient(&[2]), rat(1));
        assert_eq!(q0.coefficient(&[0]), rat(-2));
        assert_eq!(q0.coefficient(&[-2]), rat(1));
        // classical q¹ coefficient: -2ζ² + 8ζ - 12 + 8ζ^{-1} - 2ζ^{-2}
        let q1 = p.coefficient_q(1).unwrap();
        assert_eq!(q1.coefficient(&[4]), rat(-2));
        assert_eq!(q1.coefficient(&[2]), rat(8));
        assert_eq!(q1.coefficient(&[0]), rat(-12));
    }

    #[test]
    fn phi_0_1_leading_term_and_value_at_zero() {
        let p = phi_0_1(trunc_through_order(3));
        let q0 = p.coefficient_q(0).unwrap();
        assert_eq!(q0.coefficient(&[2]), rat(1));
        assert_eq!(q0.coefficient(&[0]), rat(10));
        assert_eq!(q0.coefficient(&[-2]), rat(1));
        // φ₀,₁(τ, 0) = 12: a weight-zero form is constant.
        let r = restricted_to_scalar(&p).unwrap();
        assert_eq!(r.coefficient_q(0).unwrap().constant_term(), rat(12));
        for n in 1..=3 {
            assert!(r.coefficient_q(n).unwrap().is_zero());
        }
    }

    #[test]
    fn theta_derivative_matches_eta_cubed() {
        // Σ_l (l/1)·a(n,l) over each q-level of ϑ reproduces η³.
        let t = 24 * 8;
        let th = theta_odd(t);
        let e3 = eta_pow(3, t);
        let e3_levels = e3.scalar_levels().unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for (e, p) in th.levels() {
            let w = p.exponent_weighted_sum().unwrap();
            assert_eq!(Some(&w), e3_levels.get(&e), "level {}", e);
            seen.insert(e);
        }
        for (e, c) in e3_levels {
            assert!(seen.contains(&e) || c.is_zero());
        }
    }
}
