//! Frobenius-type transforms in positive characteristic.
//!
//! Over 𝔽_p the p-th power map is additive, so raising generators to p-th
//! powers is exponent scaling: f(x)ᵖ = f(xᵖ). The module provides
//!
//! * [`bracket_power`] — I^[pⁿ] = (f^{pⁿ} : f a generator),
//! * [`frobenius_transform`] — I_X + I_Y^[pⁿ] for Y ⊆ X closed (the n-th
//!   Frobenius neighborhood of Y inside X),
//! * [`relative_frobenius_map`] — the scheme V(fᵢ(xᵖ)) together with the
//!   coordinate images of the p-th power map down to V(fᵢ),
//! * [`frobenius_adjunction_counts`] — the two sides of the point-count
//!   identity for fat-point valued points with p-th-power coordinates.
//!
//! The Frobenius transform of a fat point is *not* a fat point in general;
//! it is presented as an ideal (or as counts) only.

use std::collections::BTreeSet;

use crate::classes::Rq;
use crate::fatpoints::FatPoint;
use crate::ideals::Ideal;
use crate::polycore::Polynomial;
use crate::{Budget, Error, Result};

/// Largest usable power so that scaled exponents stay within `u32`.
fn power_of_char(ideal: &Ideal, n: u32) -> Result<u32> {
    let p = ideal.ring().field().characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero);
    }
    let pn = p
        .checked_pow(n)
        .filter(|&v| v <= u16::MAX as u64)
        .ok_or_else(|| Error::ResourceLimit(format!("p^{} exponent overflow", n)))?;
    let max_exp = ideal
        .gens()
        .iter()
        .flat_map(|g| g.terms().flat_map(|(m, _)| m.iter().map(|(_, e)| e)))
        .max()
        .unwrap_or(0);
    if (max_exp as u64) * pn > u32::MAX as u64 {
        return Err(Error::ResourceLimit("bracket power exponent overflow".into()));
    }
    Ok(pn as u32)
}

/// Raise a polynomial to the q-th power, q a power of the characteristic:
/// coefficients are fixed by Frobenius on the prime field, monomial exponents
/// scale.
fn frobenius_power(f: &Polynomial, q: u32) -> Polynomial {
    let terms = f
        .terms()
        .map(|(m, c)| (m.pow(q), c.clone()))
        .collect();
    Polynomial::from_terms(f.ring().clone(), terms)
}

/// The bracket power I^[pⁿ] = (f^{pⁿ} : f ∈ gens I). Requires positive
/// characteristic.
pub fn bracket_power(ideal: &Ideal, n: u32) -> Result<Ideal> {
    let pn = power_of_char(ideal, n)?;
    let gens = ideal.gens().iter().map(|g| frobenius_power(g, pn)).collect();
    Ideal::new(ideal.ring().clone(), gens)
}

/// The n-th Frobenius transform of the closed subscheme `Y = V(sub)` inside
/// `X = V(ambient)`: the ideal `ambient + sub^[pⁿ]`. Checks the containment
/// `ambient ⊆ sub` (i.e. Y ⊆ X as schemes); `n = 0` returns `Y` itself.
pub fn frobenius_transform(
    sub: &Ideal,
    ambient: &Ideal,
    n: u32,
    budget: &Budget,
) -> Result<Ideal> {
    if sub.ring() != ambient.ring() {
        return Err(Error::RingMismatch("frobenius transform".into()));
    }
    let gb = sub.groebner_basis(&crate::polycore::MonomialOrder::GrevLex, budget)?;
    for g in ambient.gens() {
        if !gb.normal_form(g).is_zero() {
            return Err(Error::ContainmentViolated(format!(
                "`{}` does not vanish on the subscheme",
                g.display()
            )));
        }
    }
    if n == 0 {
        return Ok(sub.clone());
    }
    let bracket = bracket_power(sub, n)?;
    let mut gens: Vec<Polynomial> = ambient.gens().to_vec();
    gens.extend(bracket.gens().iter().cloned());
    Ideal::new(sub.ring().clone(), gens)
}

/// The relative Frobenius presentation of `Y = V(fᵢ)`: the source scheme
/// `V(fᵢ(xᵖ))` and the coordinate images `xᵢ ↦ xᵢᵖ` of the map down to `Y`.
pub struct RelativeFrobenius {
    pub source: Ideal,
    pub images: Vec<Polynomial>,
}

pub fn relative_frobenius_map(y: &Ideal) -> Result<RelativeFrobenius> {
    let p = power_of_char(y, 1)?;
    let ring = y.ring().clone();
    let gens = y.gens().iter().map(|g| frobenius_power(g, p)).collect();
    let source = Ideal::new(ring.clone(), gens)?;
    let images = (0..ring.num_vars()).map(|i| ring.var(i).pow(p)).collect();
    Ok(RelativeFrobenius { source, images })
}

/// Both sides of the adjunction between the relative Frobenius and
/// p-th-power coordinates, as R_q-point counts for `R = Γ(fp) ⊗ 𝔽_q`:
///
/// * left — the number of distinct images in Y(R) of points of the relative
///   Frobenius source under coordinatewise p-th powers;
/// * right — the number of R-points of `Y` with all coordinates in the
///   subring Rᵖ = {aᵖ : a ∈ R}.
///
/// The two agree; returning both makes the identity checkable.
pub fn frobenius_adjunction_counts(
    y: &Ideal,
    fp: &FatPoint,
    q: u64,
    budget: &Budget,
) -> Result<(u128, u128)> {
    let p = y.ring().field().characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero);
    }
    let rel = relative_frobenius_map(y)?;
    let rq = Rq::new(fp, q, budget)?;
    if rq.fq().p != p {
        return Err(Error::CharacteristicMismatch(format!(
            "scheme has characteristic {}, counting field has {}",
            p,
            rq.fq().p
        )));
    }
    let m = y.ring().num_vars() as usize;
    let total = rq
        .size()
        .checked_pow(m as u32)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: budget.max_enumeration })?;
    if total > budget.max_enumeration {
        return Err(Error::BudgetExceeded { needed: total, budget: budget.max_enumeration });
    }

    let elements = rq.elements();
    // Left side: push points of V(fᵢ(xᵖ)) forward along a ↦ aᵖ.
    let mut images: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    // Right side: R-points of Y inside the p-th power subring.
    let subring: BTreeSet<Vec<u32>> =
        elements.iter().map(|a| rq.pow(a, p)).collect();
    let mut right = 0u128;

    let mut visit = |point: &[Vec<u32>]| -> Result<()> {
        let mut on_source = true;
        for g in rel.source.gens() {
            if !rq.is_zero(&rq.eval(g, point)?) {
                on_source = false;
                break;
            }
        }
        if on_source {
            images.insert(point.iter().map(|a| rq.pow(a, p)).collect());
        }
        if point.iter().all(|a| subring.contains(a)) {
            let mut on_y = true;
            for g in y.gens() {
                if !rq.is_zero(&rq.eval(g, point)?) {
                    on_y = false;
                    break;
                }
            }
            if on_y {
                right += 1;
            }
        }
        Ok(())
    };

    let mut index = vec![0usize; m];
    'outer: loop {
        let point: Vec<Vec<u32>> = index.iter().map(|&i| elements[i].clone()).collect();
        visit(&point)?;
        let mut i = 0;
        loop {
            if i == m {
                break 'outer;
            }
            index[i] += 1;
            if index[i] < elements.len() {
                break;
            }
            index[i] = 0;
            i += 1;
        }
    }
    Ok((images.len() as u128, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{Field, MonomialOrder, Ring};

    fn b() -> Budget {
        Budget::default()
    }

    fn ring_p(p: u64, vars: &[&str]) -> Ring {
        Ring::with_vars(Field::prime(p).unwrap(), vars).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        let gens = gens.iter().map(|s| Polynomial::parse(r, s).unwrap()).collect();
        Ideal::new(r.clone(), gens).unwrap()
    }

    fn colength(i: &Ideal) -> usize {
        FatPoint::new(i.clone(), &b()).unwrap().length()
    }

    #[test]
    fn bracket_powers_scale_colength() {
        // colength (x,y)^[pⁿ] = p^{2n}.
        for p in [2u64, 3] {
            let r = ring_p(p, &["x", "y"]);
            let origin = ideal(&r, &["x", "y"]);
            for n in 0..=2u32 {
                let bracket = bracket_power(&origin, n).unwrap();
                assert_eq!(colength(&bracket) as u64, p.pow(2 * n));
            }
        }
    }

    #[test]
    fn bracket_power_needs_positive_characteristic() {
        let r = Ring::with_vars(Field::rationals(), &["x"]).unwrap();
        assert!(matches!(
            bracket_power(&ideal(&r, &["x"]), 1),
            Err(Error::CharacteristicZero)
        ));
    }

    #[test]
    fn transform_of_the_origin_in_the_axes() {
        let r = ring_p(2, &["x", "y"]);
        let axes = ideal(&r, &["x*y"]);
        let origin = ideal(&r, &["x", "y"]);
        let t1 = frobenius_transform(&origin, &axes, 1, &b()).unwrap();
        // (xy, x², y²) has basis {1, x, y}.
        assert_eq!(colength(&t1), 3);
        // n = 0 returns the subscheme itself.
        let t0 = frobenius_transform(&origin, &axes, 0, &b()).unwrap();
        let lex = MonomialOrder::Lex;
        assert_eq!(
            t0.groebner_basis(&lex, &b()).unwrap().elems(),
            origin.groebner_basis(&lex, &b()).unwrap().elems()
        );
        // The containment direction matters.
        assert!(matches!(
            frobenius_transform(&axes, &origin, 1, &b()),
            Err(Error::ContainmentViolated(_))
        ));
    }

    #[test]
    fn relative_frobenius_of_a_parabola() {
        let r = ring_p(2, &["x", "y"]);
        let parabola = ideal(&r, &["y - x^2"]);
        let rel = relative_frobenius_map(&parabola).unwrap();
        assert_eq!(rel.source.gens(), ideal(&r, &["y^2 - x^4"]).gens());
        assert_eq!(rel.images[0], Polynomial::parse(&r, "x^2").unwrap());
        assert_eq!(rel.images[1], Polynomial::parse(&r, "y^2").unwrap());
    }

    #[test]
    fn adjunction_count_examples() {
        let fpr2 = ring_p(2, &["xi"]);
        let l2 = FatPoint::new(ideal(&fpr2, &["xi^2"]), &b()).unwrap();
        // A¹ along 𝔩₂ at q = 4: four p-th-power points either way.
        let a1 = Ideal::zero(ring_p(2, &["x"]));
        assert_eq!(frobenius_adjunction_counts(&a1, &l2, 4, &b()).unwrap(), (4, 4));
        // A reduced point: only the zero coordinate.
        let r1 = ring_p(2, &["x"]);
        let point = ideal(&r1, &["x"]);
        assert_eq!(frobenius_adjunction_counts(&point, &l2, 2, &b()).unwrap(), (1, 1));
        // The coordinate cross at q = 2: images {0,1}² minus the unit pair.
        let r2 = ring_p(2, &["x", "y"]);
        let axes = ideal(&r2, &["x*y"]);
        assert_eq!(frobenius_adjunction_counts(&axes, &l2, 2, &b()).unwrap(), (3, 3));
    }

    #[test]
    fn adjunction_holds_across_fat_points_and_fields() {
        let r1 = ring_p(2, &["x"]);
        let r2 = ring_p(2, &["x", "y"]);
        let schemes = [Ideal::zero(r1), ideal(&r2, &["x*y"])];
        let fpr = ring_p(2, &["xi"]);
        let fat_points =
            [ideal(&fpr, &["xi^2"]), ideal(&fpr, &["xi^3"])].map(|i| FatPoint::new(i, &b()).unwrap());
        for y in &schemes {
            for fp in &fat_points {
                for q in [2u64, 4] {
                    let (lhs, rhs) =
                        frobenius_adjunction_counts(y, fp, q, &b()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // A fat point presented over ℚ reduces modulo p at count time.
        let fprq = Ring::with_vars(Field::rationals(), &["xi"]).unwrap();
        let l2q = FatPoint::new(ideal(&fprq, &["xi^2"]), &b()).unwrap();
        let a1 = Ideal::zero(ring_p(2, &["x"]));
        assert_eq!(frobenius_adjunction_counts(&a1, &l2q, 4, &b()).unwrap(), (4, 4));
    }

    #[test]
    fn characteristic_checks() {
        let fpr = ring_p(2, &["xi"]);
        let l2 = FatPoint::new(ideal(&fpr, &["xi^2"]), &b()).unwrap();
        // char-0 scheme: no Frobenius.
        let rq = Ring::with_vars(Field::rationals(), &["x"]).unwrap();
        assert!(matches!(
            frobenius_adjunction_counts(&Ideal::zero(rq), &l2, 2, &b()),
            Err(Error::CharacteristicZero)
        ));
        // q of the wrong characteristic.
        let a1 = Ideal::zero(ring_p(2, &["x"]));
        assert!(matches!(
            frobenius_adjunction_counts(&a1, &l2, 3, &b()),
            Err(Error::CharacteristicMismatch(_))
        ));
    }
}
