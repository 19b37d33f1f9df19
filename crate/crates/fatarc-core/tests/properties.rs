//! Randomized property checks for the algebraic invariants the library
//! promises: exact arithmetic laws, normal-form contracts, counting
//! identities, and series self-consistency.

use num_rational::BigRational;
use proptest::prelude::*;

use fatarc_core::arcs::Motif;
use fatarc_core::classes::{count_motif, fp_fingerprint, Fq, LValue};
use fatarc_core::fatpoints::{FatPoint, Germ};
use fatarc_core::ideals::Ideal;
use fatarc_core::motint::{char_function, integrate, step_combine, Realization, StepOp};
use fatarc_core::polycore::{Field, Polynomial, Ring};
use fatarc_core::series::ClosedForm;
use fatarc_core::Budget;

fn b() -> Budget {
    Budget::default()
}

fn ring2(field: Field) -> Ring {
    Ring::with_vars(field, &["x", "y"]).unwrap()
}

// ---------------------------------------------------------------------------
// 𝕃-value arithmetic
// ---------------------------------------------------------------------------

/// Random 𝕃-values built through the public constructors, denominators
/// included.
fn lvalue() -> impl Strategy<Value = LValue> {
    let poly = prop::collection::vec((-4i64..=4, 0i64..=3), 1..4).prop_map(|terms| {
        let mut acc = LValue::zero();
        for (c, e) in terms {
            acc = acc.add(&LValue::from_int(c).mul(&LValue::l_power(e)));
        }
        acc
    });
    (poly.clone(), poly).prop_filter_map("nonzero denominator", |(n, d)| {
        if d.is_zero() {
            None
        } else {
            Some(n.div(&d).unwrap())
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lvalue_field_laws(a in lvalue(), c in lvalue(), d in lvalue()) {
        prop_assert_eq!(a.add(&c), c.add(&a));
        prop_assert_eq!(a.mul(&c), c.mul(&a));
        prop_assert_eq!(a.add(&c).add(&d), a.add(&c.add(&d)));
        prop_assert_eq!(a.mul(&c).mul(&d), a.mul(&c.mul(&d)));
        prop_assert_eq!(a.mul(&c.add(&d)), a.mul(&c).add(&a.mul(&d)));
        prop_assert_eq!(a.sub(&a), LValue::zero());
        if !c.is_zero() {
            prop_assert_eq!(a.div(&c).unwrap().mul(&c), a);
        }
    }

    #[test]
    fn lvalue_evaluation_is_a_homomorphism(a in lvalue(), c in lvalue()) {
        // 𝕃 ↦ 3 commutes with the ring operations whenever both sides are
        // defined (a denominator may vanish at the sample point).
        let q = 3i64;
        if let (Ok(av), Ok(cv)) = (a.eval_at(q), c.eval_at(q)) {
            if let Ok(sum) = a.add(&c).eval_at(q) {
                prop_assert_eq!(sum, av.clone() + cv.clone());
            }
            if let Ok(prod) = a.mul(&c).eval_at(q) {
                prop_assert_eq!(prod, av * cv);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomials: printing round-trips, exact arithmetic
// ---------------------------------------------------------------------------

/// Random polynomial in two variables with small exponents.
fn poly(field: Field) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-6i64..=6, 0u32..=3, 0u32..=3), 0..5).prop_map(move |terms| {
        let r = ring2(field);
        let mut acc = r.zero();
        for (c, i, j) in terms {
            let term = r.var(0).pow(i).mul_ref(&r.var(1).pow(j));
            let c = Polynomial::parse(&r, &c.to_string()).unwrap();
            acc = acc.add_ref(&c.mul_ref(&term));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_polynomials_reparse(f in poly(Field::rationals())) {
        let r = f.ring().clone();
        prop_assert_eq!(Polynomial::parse(&r, &f.display()).unwrap(), f);
    }

    #[test]
    fn printed_polynomials_reparse_mod_p(f in poly(Field::prime(5).unwrap())) {
        let r = f.ring().clone();
        prop_assert_eq!(Polynomial::parse(&r, &f.display()).unwrap(), f);
    }

    #[test]
    fn polynomial_ring_laws(
        f in poly(Field::rationals()),
        g in poly(Field::rationals()),
        h in poly(Field::rationals()),
    ) {
        prop_assert_eq!(f.mul_ref(&g), g.mul_ref(&f));
        prop_assert_eq!(
            f.mul_ref(&g.add_ref(&h)),
            f.mul_ref(&g).add_ref(&f.mul_ref(&h))
        );
    }
}

// ---------------------------------------------------------------------------
// Normal forms and staircases
// ---------------------------------------------------------------------------

/// A random Artinian monomial ideal in two variables (contains pure powers
/// of both variables).
fn artinian_ideal() -> impl Strategy<Value = Ideal> {
    (1u32..=4, 1u32..=4, prop::collection::vec((0u32..=3, 0u32..=3), 0..3)).prop_map(
        |(a, bb, extra)| {
            let r = ring2(Field::rationals());
            let mut gens = vec![r.var(0).pow(a), r.var(1).pow(bb)];
            for (i, j) in extra {
                if i + j > 0 {
                    gens.push(r.var(0).pow(i).mul_ref(&r.var(1).pow(j)));
                }
            }
            Ideal::new(r, gens).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn normal_form_is_idempotent_and_a_remainder(
        i in artinian_ideal(),
        f in poly(Field::rationals()),
    ) {
        let gb = i.gb_default(&b()).unwrap();
        let nf = gb.normal_form(&f);
        prop_assert_eq!(gb.normal_form(&nf.clone()), nf.clone());
        // f − NF(f) lies in the ideal.
        let diff = f.sub_ref(&nf);
        prop_assert!(i.contains(&diff, &b()).unwrap());
    }

    #[test]
    fn degree_census_sums_to_the_length(i in artinian_ideal()) {
        let fp = FatPoint::new(i, &b()).unwrap();
        let print = fp_fingerprint(&fp, &b()).unwrap();
        prop_assert_eq!(print.hilbert.iter().sum::<usize>(), fp.length());
        prop_assert_eq!(print.length, fp.length());
    }

    #[test]
    fn jet_lengths_grow_with_the_order(
        exps in prop::collection::vec((0u32..=2, 0u32..=2), 1..3),
    ) {
        // Germ at the origin of a monomial subscheme of the plane.
        let r = ring2(Field::rationals());
        let gens: Vec<Polynomial> = exps
            .iter()
            .filter(|(i, j)| i + j > 0)
            .map(|(i, j)| r.var(0).pow(*i).mul_ref(&r.var(1).pow(*j)))
            .collect();
        let germ = Germ::at_origin(Ideal::new(r, gens).unwrap()).unwrap();
        let mut prev = 0usize;
        for n in 1..=4u32 {
            let l = germ.jet(n, &b()).unwrap().length();
            prop_assert!(l >= prev, "length dropped at n={}", n);
            prop_assert!(l <= (n as usize) * (n as usize + 1) / 2);
            prev = l;
        }
    }
}

// ---------------------------------------------------------------------------
// Counting: the scissor relation and finite-field laws
// ---------------------------------------------------------------------------

/// A random motif over the fixed atom corpus on A².
fn motif() -> impl Strategy<Value = Motif> {
    let cell = prop::collection::vec((0usize..4, prop::bool::ANY), 1..3);
    prop::collection::vec(cell, 1..3).prop_map(|cells| {
        let r = ring2(Field::rationals());
        let atom = |k: usize| -> Motif {
            let gens: Vec<Polynomial> = match k {
                0 => vec![Polynomial::parse(&r, "x").unwrap()],
                1 => vec![Polynomial::parse(&r, "y").unwrap()],
                2 => vec![
                    Polynomial::parse(&r, "x").unwrap(),
                    Polynomial::parse(&r, "y").unwrap(),
                ],
                _ => vec![Polynomial::parse(&r, "x - y").unwrap()],
            };
            Motif::closed(Ideal::new(r.clone(), gens).unwrap())
        };
        let mut out: Option<Motif> = None;
        for cell in cells {
            let mut m = Motif::whole(r.clone());
            for (k, neg) in cell {
                let a = if neg { atom(k).not().unwrap() } else { atom(k) };
                m = m.intersect(&a).unwrap();
            }
            out = Some(match out {
                None => m,
                Some(prev) => prev.union(&m).unwrap(),
            });
        }
        out.unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn counting_satisfies_the_scissor_relation(a in motif(), c in motif()) {
        for q in [2u64, 3] {
            let union = count_motif(&a.union(&c).unwrap(), q, &b()).unwrap();
            let meet = count_motif(&a.intersect(&c).unwrap(), q, &b()).unwrap();
            let ca = count_motif(&a, q, &b()).unwrap();
            let cc = count_motif(&c, q, &b()).unwrap();
            prop_assert_eq!(union + meet, ca + cc, "q={}", q);
        }
    }

    #[test]
    fn finite_field_tables_satisfy_field_laws(
        q in prop::sample::select(vec![2u64, 3, 4, 5, 8, 9]),
        seeds in prop::collection::vec(0u32..1000, 3),
    ) {
        let f = Fq::new(q).unwrap();
        let a = seeds[0] % q as u32;
        let c = seeds[1] % q as u32;
        let d = seeds[2] % q as u32;
        prop_assert_eq!(f.add(a, c), f.add(c, a));
        prop_assert_eq!(f.mul(a, c), f.mul(c, a));
        prop_assert_eq!(f.mul(a, f.add(c, d)), f.add(f.mul(a, c), f.mul(a, d)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, q - 1), 1, "Fermat in F_{}", q);
        }
    }
}

// ---------------------------------------------------------------------------
// Step functions and integration
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn step_operations_commute_under_integration(a in motif(), c in motif()) {
        let s = char_function(&a, &b()).unwrap();
        let t = char_function(&c, &b()).unwrap();
        let re = Ring::with_vars(Field::rationals(), &["e"]).unwrap();
        let fp = FatPoint::new(
            Ideal::new(re.clone(), vec![Polynomial::parse(&re, "e^2").unwrap()]).unwrap(),
            &b(),
        )
        .unwrap();
        let q = Realization::Count(2);
        let st = step_combine(&StepOp::Add, &s, &t).unwrap();
        let ts = step_combine(&StepOp::Add, &t, &s).unwrap();
        prop_assert_eq!(
            integrate(&st, &fp, &q, &b()).unwrap().integral,
            integrate(&ts, &fp, &q, &b()).unwrap().integral
        );
        let st = step_combine(&StepOp::Mul, &s, &t).unwrap();
        let ts = step_combine(&StepOp::Mul, &t, &s).unwrap();
        prop_assert_eq!(
            integrate(&st, &fp, &q, &b()).unwrap().integral,
            integrate(&ts, &fp, &q, &b()).unwrap().integral
        );
    }
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_expansion_satisfies_the_defining_recurrence(
        num in prop::collection::vec(-3i64..=3, 1..4),
        den in prop::collection::vec(-3i64..=3, 1..4),
        d0 in 1i64..=3,
    ) {
        // den(0) ≠ 0 by construction.
        let num: Vec<LValue> = num.iter().map(|&c| LValue::from_int(c)).collect();
        let mut den: Vec<LValue> = den.iter().map(|&c| LValue::from_int(c)).collect();
        den[0] = LValue::from_int(d0);
        let cf = ClosedForm::new(num.clone(), den.clone());
        let n = 8usize;
        let cs = cf.expand(n).unwrap();
        // Σ_j den[j]·c[k−j] must reproduce num[k] (zero beyond its degree).
        for k in 0..=n {
            let mut acc = LValue::zero();
            for (j, dj) in den.iter().enumerate().take(k + 1) {
                acc = acc.add(&dj.mul(&cs[k - j]));
            }
            let want = num.get(k).cloned().unwrap_or_else(LValue::zero);
            prop_assert_eq!(acc, want, "k={}", k);
        }
        // A series with 𝕃-free numerator and denominator has 𝕃-free
        // coefficients: evaluation at distinct points agrees.
        for c in &cs {
            let at1: BigRational = c.eval_at(1).unwrap();
            let at7: BigRational = c.eval_at(7).unwrap();
            prop_assert_eq!(at1, at7);
        }
    }
}
