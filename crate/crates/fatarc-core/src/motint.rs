//! Split motivic integration over fat points.
//!
//! A [`StepFunction`] is a finitely-valued function on the points of an
//! affine scheme whose fibers are constructible motifs. Disjointness of the
//! fibers is structural: every step function carries a list of atoms, and its
//! fibers are unions of sign-vector cells (each atom asserted or denied), so
//! distinct cells can never meet. Combination refines to a common atom list.
//!
//! [`integrate`] evaluates 𝕃^{−dl} Σ_g g·[∇_𝔳(s⁻¹(g))] either under a
//! q-realization (point counts over 𝔽_q, exact rational output) or
//! symbolically (𝕃-value output, only when every cell's arc class carries a
//! coordinate-affine certificate). [`integrate_local`] evaluates the same
//! integral chart-by-chart with inclusion–exclusion signs and reports
//! whether the local sum agrees with the global value.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arcs::{arc_motif, coordinate_affine_certificate, Atom, Literal, Motif};
use crate::classes::{count_fat_motif, ChartTerm, LValue};
use crate::fatpoints::FatPoint;
use crate::ideals::Ideal;
use crate::{Budget, Error, Result};

/// Hard cap on the atom count: cells are sign vectors, so 2^atoms cells.
const MAX_ATOMS: usize = 20;

// ---------------------------------------------------------------------------
// Step functions
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct StepFunction {
    ambient: Ideal,
    /// Krull dimension of the ambient scheme, recorded at construction.
    dim: i64,
    atoms: Vec<Atom>,
    /// Nonzero values by cell; bit i of the key asserts `atoms[i]`.
    fibers: BTreeMap<u64, LValue>,
}

impl StepFunction {
    /// The characteristic function 𝟙_m of a motif on the scheme `V(ambient)`.
    pub fn char_on(ambient: Ideal, m: &Motif, budget: &Budget) -> Result<StepFunction> {
        if m.ring() != ambient.ring() {
            return Err(Error::RingMismatch("motif and ambient scheme".into()));
        }
        let dim = ambient.krull_dim(budget)?;
        let atoms = m.atoms();
        if atoms.len() > MAX_ATOMS {
            return Err(Error::ResourceLimit("too many atoms in a step function".into()));
        }
        let mut fibers = BTreeMap::new();
        for mask in 0u64..(1u64 << atoms.len()) {
            let inside = m.cells().iter().any(|cell| {
                cell.iter().all(|lit| {
                    let i = atoms.iter().position(|a| a == &lit.atom).expect("own atom");
                    ((mask >> i) & 1 == 1) != lit.negated
                })
            });
            if inside {
                fibers.insert(mask, LValue::one());
            }
        }
        Ok(StepFunction { ambient, dim, atoms, fibers })
    }

    /// Constant function with the given value on the whole scheme.
    pub fn constant(ambient: Ideal, value: LValue, budget: &Budget) -> Result<StepFunction> {
        let whole = Motif::whole(ambient.ring().clone());
        Ok(StepFunction::char_on(ambient, &whole, budget)?.scale(&value))
    }

    pub fn ambient(&self) -> &Ideal {
        &self.ambient
    }

    /// Recorded dimension of the ambient scheme.
    pub fn dim(&self) -> i64 {
        self.dim
    }

    /// Pointwise scaling by a fixed 𝕃-value.
    pub fn scale(&self, g: &LValue) -> StepFunction {
        let mut fibers = BTreeMap::new();
        if !g.is_zero() {
            for (mask, v) in &self.fibers {
                fibers.insert(*mask, v.mul(g));
            }
        }
        StepFunction {
            ambient: self.ambient.clone(),
            dim: self.dim,
            atoms: self.atoms.clone(),
            fibers,
        }
    }

    /// The motif of one sign-vector cell (conjunction over all atoms).
    fn cell_motif(&self, mask: u64) -> Result<Motif> {
        let ring = self.ambient.ring().clone();
        let mut out = Motif::whole(ring);
        for (i, atom) in self.atoms.iter().enumerate() {
            let m = match atom {
                Atom::Closed(j) => Motif::closed(j.clone()),
                Atom::Cone(j) => Motif::cone(j.clone()),
            };
            let m = if (mask >> i) & 1 == 1 { m } else { m.not()? };
            out = out.intersect(&m)?;
        }
        Ok(out)
    }

    /// The distinct nonzero values with their fiber motifs, in cell order.
    pub fn fibers(&self) -> Result<Vec<(LValue, Motif)>> {
        let mut out: Vec<(LValue, Motif)> = Vec::new();
        for (mask, v) in &self.fibers {
            let cell = self.cell_motif(*mask)?;
            match out.iter_mut().find(|(g, _)| g == v) {
                Some((_, m)) => *m = m.union(&cell)?,
                None => out.push((v.clone(), cell)),
            }
        }
        Ok(out)
    }

    /// Value at a named cell — test/debug accessor.
    pub fn cell_values(&self) -> &BTreeMap<u64, LValue> {
        &self.fibers
    }
}

pub enum StepOp {
    Add,
    Mul,
    /// Scale the first operand by the carried value (the second operand is
    /// only checked for compatibility).
    Scale(LValue),
}

/// Combine two step functions over the common refinement of their atoms.
pub fn step_combine(op: &StepOp, s: &StepFunction, t: &StepFunction) -> Result<StepFunction> {
    if s.ambient != t.ambient {
        return Err(Error::RingMismatch("step functions on different ambient schemes".into()));
    }
    if let StepOp::Scale(g) = op {
        return Ok(s.scale(g));
    }
    let mut atoms = s.atoms.clone();
    for a in &t.atoms {
        if !atoms.contains(a) {
            atoms.push(a.clone());
        }
    }
    if atoms.len() > MAX_ATOMS {
        return Err(Error::ResourceLimit("too many atoms in a step function".into()));
    }
    // Positions of each operand's atoms inside the merged list.
    let pos = |own: &[Atom]| -> Vec<usize> {
        own.iter().map(|a| atoms.iter().position(|b| b == a).expect("merged")).collect()
    };
    let spos = pos(&s.atoms);
    let tpos = pos(&t.atoms);
    let project = |mask: u64, positions: &[usize]| -> u64 {
        let mut out = 0u64;
        for (i, &p) in positions.iter().enumerate() {
            if (mask >> p) & 1 == 1 {
                out |= 1 << i;
            }
        }
        out
    };
    let zero = LValue::zero();
    let mut fibers = BTreeMap::new();
    for mask in 0u64..(1u64 << atoms.len()) {
        let sv = s.fibers.get(&project(mask, &spos)).unwrap_or(&zero);
        let tv = t.fibers.get(&project(mask, &tpos)).unwrap_or(&zero);
        let v = match op {
            StepOp::Add => sv.add(tv),
            StepOp::Mul => sv.mul(tv),
            StepOp::Scale(_) => unreachable!(),
        };
        if !v.is_zero() {
            fibers.insert(mask, v);
        }
    }
    Ok(StepFunction { ambient: s.ambient.clone(), dim: s.dim, atoms, fibers })
}

/// The characteristic function of a motif on the full affine space of its
/// ring.
pub fn char_function(m: &Motif, budget: &Budget) -> Result<StepFunction> {
    StepFunction::char_on(Ideal::zero(m.ring().clone()), m, budget)
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realization {
    /// Count points over 𝔽_q and specialize 𝕃 ↦ q; output is rational.
    Count(u64),
    /// Keep 𝕃 formal; requires a certificate for every fiber class.
    Symbolic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntegralValue {
    Rational(BigRational),
    Symbolic(LValue),
}

impl IntegralValue {
    pub fn display(&self) -> String {
        match self {
            IntegralValue::Rational(r) => r.to_string(),
            IntegralValue::Symbolic(v) => v.display(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiberReport {
    pub value: LValue,
    pub motif: Motif,
    /// Dimension of the Zariski closure of the fiber's arc motif (the
    /// positive closed conditions; −1 when empty).
    pub arc_dim: i64,
    /// Point count of the arc motif under a q-realization.
    pub count: Option<u128>,
}

#[derive(Clone, Debug)]
pub struct IntegralReport {
    pub realization: Realization,
    pub integral: IntegralValue,
    pub fibers: Vec<FiberReport>,
}

impl IntegralReport {
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let integral = match &self.integral {
            IntegralValue::Rational(r) => serde_json::Value::String(r.to_string()),
            IntegralValue::Symbolic(v) => v.to_json()?,
        };
        let realization = match self.realization {
            Realization::Count(q) => format!("q={}", q),
            Realization::Symbolic => "symbolic".to_string(),
        };
        let mut fibers = Vec::new();
        for f in &self.fibers {
            let mut entry = serde_json::json!({
                "value": f.value.to_json()?,
                "motif": f.motif.display(),
                "arc_dim": f.arc_dim,
            });
            if let Some(c) = f.count {
                entry["count"] = serde_json::json!(c as u64);
            }
            fibers.push(entry);
        }
        Ok(serde_json::json!({
            "integral": integral,
            "realization": realization,
            "fibers": fibers,
        }))
    }
}

/// Intersect a fiber motif with the ambient scheme's equations (a no-op on
/// affine space).
fn on_ambient(ambient: &Ideal, m: &Motif) -> Result<Motif> {
    if ambient.is_zero_ideal() {
        Ok(m.clone())
    } else {
        Motif::closed(ambient.clone()).intersect(m)
    }
}

/// Dimension of the union of the positive closed parts of an arc motif's
/// cells (its Zariski closure when the negated parts cut properly).
fn positive_closure_dim(am: &Motif, budget: &Budget) -> Result<i64> {
    let ring = am.ring();
    let mut dim = -1i64;
    for cell in am.cells() {
        let mut ideal = Ideal::zero(ring.clone());
        for lit in cell {
            if lit.negated {
                continue;
            }
            match &lit.atom {
                Atom::Closed(j) | Atom::Cone(j) => ideal = ideal.sum(j)?,
            }
        }
        dim = dim.max(ideal.krull_dim(budget)?);
    }
    Ok(dim)
}

/// Certified class of one arc-motif cell via inclusion–exclusion over its
/// negated literals; every positive conjunction must be a coordinate
/// subspace.
fn certified_cell_class(ring_dim: i64, cell: &[Literal], budget: &Budget) -> Result<LValue> {
    let ring = match cell.first() {
        Some(lit) => match &lit.atom {
            Atom::Closed(j) | Atom::Cone(j) => j.ring().clone(),
        },
        // An empty conjunction is the whole arc space.
        None => return Ok(LValue::l_power(ring_dim)),
    };
    let mut positive = Ideal::zero(ring.clone());
    let mut negated: Vec<&Ideal> = Vec::new();
    for lit in cell {
        let ideal = match &lit.atom {
            Atom::Closed(j) | Atom::Cone(j) => j,
        };
        if lit.negated {
            negated.push(ideal);
        } else {
            positive = positive.sum(ideal)?;
        }
    }
    let mut total = LValue::zero();
    for subset in 0u64..(1u64 << negated.len()) {
        let mut ideal = positive.clone();
        let mut sign = 1i64;
        for (i, n) in negated.iter().enumerate() {
            if (subset >> i) & 1 == 1 {
                ideal = ideal.sum(n)?;
                sign = -sign;
            }
        }
        let dim = ideal.krull_dim(budget)?;
        let class = if dim < 0 {
            LValue::zero()
        } else {
            match coordinate_affine_certificate(&ideal, dim, budget)? {
                (Some(free), _) => LValue::l_power(free as i64),
                (None, _) => {
                    return Err(Error::NotCertified(
                        "arc class is not a certified coordinate subspace".into(),
                    ))
                }
            }
        };
        let term = LValue::from_int(sign).mul(&class);
        total = total.add(&term);
    }
    Ok(total)
}

/// The split motivic integral 𝕃^{−dl} Σ_g g·[∇_fp(s⁻¹(g))].
pub fn integrate(
    s: &StepFunction,
    fp: &FatPoint,
    realization: &Realization,
    budget: &Budget,
) -> Result<IntegralReport> {
    let l = fp.length() as i64;
    let d = s.dim;
    if d < 0 {
        return Err(Error::InvalidArgument("integration over an empty scheme".into()));
    }
    let dl = d
        .checked_mul(l)
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::ResourceLimit("normalizing exponent overflows".into()))?;
    let mut fibers = Vec::new();
    match realization {
        Realization::Count(q) => {
            let mut total = BigRational::zero();
            for (g, m) in s.fibers()? {
                let motif = on_ambient(&s.ambient, &m)?;
                let count = count_fat_motif(&motif, fp, *q, budget)?;
                let am = arc_motif(&motif, fp, budget)?;
                let arc_dim = positive_closure_dim(&am, budget)?;
                let gq = g.eval_at(*q as i64)?;
                total += gq * BigRational::from(BigInt::from(count));
                fibers.push(FiberReport { value: g, motif: m, arc_dim, count: Some(count) });
            }
            let norm = num_traits::pow(BigInt::from(*q), dl as usize);
            total /= BigRational::from(norm);
            Ok(IntegralReport {
                realization: *realization,
                integral: IntegralValue::Rational(total),
                fibers,
            })
        }
        Realization::Symbolic => {
            let mut total = LValue::zero();
            for (g, m) in s.fibers()? {
                let motif = on_ambient(&s.ambient, &m)?;
                let am = arc_motif(&motif, fp, budget)?;
                let arc_dim = positive_closure_dim(&am, budget)?;
                // Cells of one fiber are disjoint by construction, so the
                // fiber class is the plain sum of the cell classes.
                let mut class = LValue::zero();
                for cell in am.cells() {
                    class = class.add(&certified_cell_class(
                        am.ring().num_vars() as i64,
                        cell,
                        budget,
                    )?);
                }
                total = total.add(&g.mul(&class));
                fibers.push(FiberReport { value: g, motif: m, arc_dim, count: None });
            }
            total = total.mul(&LValue::l_power(-(dl as i64)));
            Ok(IntegralReport {
                realization: *realization,
                integral: IntegralValue::Symbolic(total),
                fibers,
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct LocalIntegral {
    pub local: IntegralValue,
    pub global: IntegralValue,
    pub agree: bool,
}

/// Evaluate the integral chart-by-chart: Σ_{∅≠I} (−1)^{|I|+1} ∫ s·𝟙_{U_I}
/// over the supplied chart intersections, and compare with the global
/// integral.
pub fn integrate_local(
    s: &StepFunction,
    fp: &FatPoint,
    cover: &[ChartTerm],
    realization: &Realization,
    budget: &Budget,
) -> Result<LocalIntegral> {
    let mut local: Option<IntegralValue> = None;
    for chart in cover {
        let indicator = StepFunction::char_on(s.ambient.clone(), &chart.motif, budget)?;
        let restricted = step_combine(&StepOp::Mul, s, &indicator)?;
        let part = integrate(&restricted, fp, realization, budget)?;
        let negate = chart.arity % 2 == 0;
        local = Some(match (local, part.integral) {
            (None, IntegralValue::Rational(r)) => {
                IntegralValue::Rational(if negate { -r } else { r })
            }
            (None, IntegralValue::Symbolic(v)) => {
                IntegralValue::Symbolic(if negate { v.neg() } else { v })
            }
            (Some(IntegralValue::Rational(acc)), IntegralValue::Rational(r)) => {
                IntegralValue::Rational(if negate { acc - r } else { acc + r })
            }
            (Some(IntegralValue::Symbolic(acc)), IntegralValue::Symbolic(v)) => {
                IntegralValue::Symbolic(if negate { acc.sub(&v) } else { acc.add(&v) })
            }
            _ => unreachable!("one realization per run"),
        });
    }
    let local = local.ok_or_else(|| Error::InvalidArgument("empty cover".into()))?;
    let global = integrate(s, fp, realization, budget)?.integral;
    let agree = local == global;
    Ok(LocalIntegral { local, global, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{Field, Polynomial, Ring};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b() -> Budget {
        Budget::default()
    }

    fn ring(vars: &[&str]) -> Ring {
        Ring::with_vars(Field::rationals(), vars).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        let gens = gens.iter().map(|s| Polynomial::parse(r, s).unwrap()).collect();
        Ideal::new(r.clone(), gens).unwrap()
    }

    fn fat(r: &Ring, gens: &[&str]) -> FatPoint {
        FatPoint::new(ideal(r, gens), &b()).unwrap()
    }

    fn rational(n: i64, d: i64) -> IntegralValue {
        IntegralValue::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn characteristic_functions_and_refinement() {
        let r2 = ring(&["x", "y"]);
        let ix = ideal(&r2, &["x"]);
        let iy = ideal(&r2, &["y"]);
        let sx = char_function(&Motif::closed(ix.clone()), &b()).unwrap();
        let sy = char_function(&Motif::closed(iy.clone()), &b()).unwrap();
        // 𝟙_{V(x)} + 𝟙_{V(y)}: value 2 on the intersection, 1 on the two
        // differences.
        let sum = step_combine(&StepOp::Add, &sx, &sy).unwrap();
        let fibers = sum.fibers().unwrap();
        assert_eq!(fibers.len(), 2);
        let two = fibers.iter().find(|(g, _)| g == &LValue::from_int(2)).unwrap();
        assert_eq!(two.1.cells().len(), 1);
        let one = fibers.iter().find(|(g, _)| g == &LValue::one()).unwrap();
        assert_eq!(one.1.cells().len(), 2);
        // Idempotence of indicators under multiplication.
        let sq = step_combine(&StepOp::Mul, &sx, &sx).unwrap();
        assert_eq!(sq.cell_values(), sx.cell_values());
        // Scaling multiplies values.
        let scaled = sx.scale(&LValue::l_power(1));
        assert!(scaled.cell_values().values().all(|v| v == &LValue::l_power(1)));
        // Mismatched ambients are rejected.
        let r1 = ring(&["t"]);
        let st = char_function(&Motif::closed(ideal(&r1, &["t"])), &b()).unwrap();
        assert!(matches!(
            step_combine(&StepOp::Add, &sx, &st),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn contract_integrals_on_the_line() {
        let r1 = ring(&["x"]);
        let l2 = fat(&r1, &["x^2"]);
        // ∫ 1 = 1 on A¹ for any fat point, in both realizations.
        let one = StepFunction::constant(Ideal::zero(r1.clone()), LValue::one(), &b()).unwrap();
        for fp in [&l2, &fat(&r1, &["x^3"])] {
            for q in [2u64, 3] {
                let rep = integrate(&one, fp, &Realization::Count(q), &b()).unwrap();
                assert_eq!(rep.integral, rational(1, 1));
            }
            let rep = integrate(&one, fp, &Realization::Symbolic, &b()).unwrap();
            assert_eq!(rep.integral, IntegralValue::Symbolic(LValue::one()));
        }
        // ∫ 𝟙_{V(x)} along 𝔩₂: the only arc over the origin is the origin.
        let sx = char_function(&Motif::closed(ideal(&r1, &["x"])), &b()).unwrap();
        let rep = integrate(&sx, &l2, &Realization::Symbolic, &b()).unwrap();
        assert_eq!(rep.integral, IntegralValue::Symbolic(LValue::l_power(-2)));
        let rep = integrate(&sx, &l2, &Realization::Count(2), &b()).unwrap();
        assert_eq!(rep.integral, rational(1, 4));
        assert_eq!(rep.fibers.len(), 1);
        assert_eq!(rep.fibers[0].count, Some(1));
        // ∫ 𝟙_{Cone(x)} along 𝔩₂: arcs centered at the origin.
        let cone = char_function(&Motif::cone(ideal(&r1, &["x"])), &b()).unwrap();
        let rep = integrate(&cone, &l2, &Realization::Symbolic, &b()).unwrap();
        assert_eq!(rep.integral, IntegralValue::Symbolic(LValue::l_power(-1)));
        let rep = integrate(&cone, &l2, &Realization::Count(2), &b()).unwrap();
        assert_eq!(rep.integral, rational(1, 2));
        assert_eq!(rep.fibers[0].count, Some(2));
    }

    #[test]
    fn normalization_on_smooth_ambient_spaces() {
        // ∫ 1 = 1 on A² for every corpus fat point.
        let r2 = ring(&["x", "y"]);
        let one = StepFunction::constant(Ideal::zero(r2.clone()), LValue::one(), &b()).unwrap();
        let rp = ring(&["s", "t"]);
        let fps = [
            fat(&ring(&["e"]), &["e^2"]),
            fat(&ring(&["e"]), &["e^3"]),
            fat(&rp, &["s^2", "t^2"]),
            fat(&rp, &["s^2", "s*t", "t^2"]),
        ];
        for fp in &fps {
            let rep = integrate(&one, fp, &Realization::Symbolic, &b()).unwrap();
            assert_eq!(rep.integral, IntegralValue::Symbolic(LValue::one()));
            let rep = integrate(&one, fp, &Realization::Count(2), &b()).unwrap();
            assert_eq!(rep.integral, rational(1, 1));
        }
    }

    #[test]
    fn symbolic_integrals_require_certificates() {
        // The parabola's arcs are not a coordinate subspace: symbolic mode
        // refuses, counting still works.
        let r2 = ring(&["x", "y"]);
        let s = char_function(&Motif::closed(ideal(&r2, &["y - x^2"])), &b()).unwrap();
        let l2 = fat(&ring(&["e"]), &["e^2"]);
        assert!(matches!(
            integrate(&s, &l2, &Realization::Symbolic, &b()),
            Err(Error::NotCertified(_))
        ));
        let rep = integrate(&s, &l2, &Realization::Count(2), &b()).unwrap();
        // V(y−x²)(R) has q·q^{l−1} = 4 points; normalizer q^{2·2}.
        assert_eq!(rep.integral, rational(1, 4));
    }

    #[test]
    fn local_integration_matches_global() {
        let r2 = ring(&["x", "y"]);
        let ix = ideal(&r2, &["x"]);
        let iy = ideal(&r2, &["y"]);
        let not_cx = Motif::cone(ix.clone()).not().unwrap();
        let not_cy = Motif::cone(iy.clone()).not().unwrap();
        let both = Motif::cone(ix.clone()).intersect(&Motif::cone(iy.clone())).unwrap();
        // Charts: centers off V(x), centers off V(y), and the missing
        // center (the origin), with the one nonempty pairwise intersection.
        let cover = [
            ChartTerm { arity: 1, motif: not_cx.clone() },
            ChartTerm { arity: 1, motif: not_cy.clone() },
            ChartTerm { arity: 1, motif: both.clone() },
            ChartTerm { arity: 2, motif: not_cx.intersect(&not_cy).unwrap() },
        ];
        let s = char_function(&Motif::closed(ix.clone()), &b()).unwrap();
        let one = StepFunction::constant(Ideal::zero(r2.clone()), LValue::one(), &b()).unwrap();
        let rp = ring(&["e"]);
        for fp in [fat(&rp, &["e^2"]), fat(&rp, &["e^3"])] {
            for q in [2u64, 3] {
                let out =
                    integrate_local(&s, &fp, &cover, &Realization::Count(q), &b()).unwrap();
                assert!(out.agree, "local {} vs global {}", out.local.display(),
                    out.global.display());
                let out =
                    integrate_local(&one, &fp, &cover, &Realization::Count(q), &b()).unwrap();
                assert!(out.agree);
                assert_eq!(out.global, rational(1, 1));
            }
        }
        // The trivial cover changes nothing.
        let trivial = [ChartTerm { arity: 1, motif: Motif::whole(r2.clone()) }];
        let fp = fat(&rp, &["e^2"]);
        let out = integrate_local(&s, &fp, &trivial, &Realization::Count(2), &b()).unwrap();
        assert!(out.agree);
        assert_eq!(out.local, rational(1, 4));
    }

    /// Random step functions over the fixed atom corpus on A².
    fn random_step(rng: &mut ChaCha8Rng, r2: &Ring) -> StepFunction {
        let atoms = [
            Motif::closed(Ideal::new(r2.clone(), vec![Polynomial::parse(r2, "x").unwrap()]).unwrap()),
            Motif::closed(Ideal::new(r2.clone(), vec![Polynomial::parse(r2, "y").unwrap()]).unwrap()),
            Motif::closed(
                Ideal::new(
                    r2.clone(),
                    vec![Polynomial::parse(r2, "x").unwrap(), Polynomial::parse(r2, "y").unwrap()],
                )
                .unwrap(),
            ),
            Motif::cone(Ideal::new(r2.clone(), vec![Polynomial::parse(r2, "x").unwrap()]).unwrap()),
        ];
        let mut s = StepFunction::constant(
            Ideal::zero(r2.clone()),
            LValue::from_int(rng.gen_range(-2i64..=2)),
            &b(),
        )
        .unwrap();
        for _ in 0..rng.gen_range(1..=3) {
            let m = &atoms[rng.gen_range(0..atoms.len())];
            let m = if rng.gen_bool(0.3) { m.clone().not().unwrap() } else { m.clone() };
            let coeff = if rng.gen_bool(0.3) {
                LValue::l_power(rng.gen_range(-1i64..=1))
            } else {
                LValue::from_int(rng.gen_range(-2i64..=2))
            };
            let part = char_function(&m, &b()).unwrap().scale(&coeff);
            let op = if rng.gen_bool(0.5) { StepOp::Add } else { StepOp::Mul };
            s = step_combine(&op, &s, &part).unwrap();
        }
        s
    }

    #[test]
    fn integration_is_linear_under_counting() {
        let r2 = ring(&["x", "y"]);
        let rp = ring(&["e"]);
        let fps = [fat(&rp, &["e^2"]), fat(&rp, &["e^3"])];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..10 {
            let s = random_step(&mut rng, &r2);
            let t = random_step(&mut rng, &r2);
            let a = LValue::from_int(rng.gen_range(-2i64..=2));
            let bb = LValue::l_power(rng.gen_range(0i64..=1));
            let combo = step_combine(
                &StepOp::Add,
                &s.scale(&a),
                &t.scale(&bb),
            )
            .unwrap();
            let fp = &fps[round % 2];
            let q = [2u64, 3][round % 2];
            let lhs = integrate(&combo, fp, &Realization::Count(q), &b()).unwrap().integral;
            let is = integrate(&s, fp, &Realization::Count(q), &b()).unwrap().integral;
            let it = integrate(&t, fp, &Realization::Count(q), &b()).unwrap().integral;
            let (IntegralValue::Rational(lhs), IntegralValue::Rational(is), IntegralValue::Rational(it)) =
                (lhs, is, it)
            else {
                panic!("counting realization returns rationals");
            };
            let aq = a.eval_at(q as i64).unwrap();
            let bq = bb.eval_at(q as i64).unwrap();
            assert_eq!(lhs, aq * is + bq * it, "round {}", round);
        }
    }

    #[test]
    fn integral_report_json_shape() {
        let r1 = ring(&["x"]);
        let l2 = fat(&r1, &["x^2"]);
        let s = char_function(&Motif::closed(ideal(&r1, &["x"])), &b()).unwrap();
        let json = integrate(&s, &l2, &Realization::Count(2), &b())
            .unwrap()
            .to_json()
            .unwrap();
        assert_eq!(json["realization"], "q=2");
        assert_eq!(json["integral"], "1/4");
        let fibers = json["fibers"].as_array().unwrap();
        assert_eq!(fibers.len(), 1);
        assert_eq!(fibers[0]["value"]["num"], serde_json::json!([1]));
        assert_eq!(fibers[0]["motif"], "V(x)");
        assert_eq!(fibers[0]["count"], 1);
        let json = integrate(&s, &l2, &Realization::Symbolic, &b())
            .unwrap()
            .to_json()
            .unwrap();
        assert_eq!(json["realization"], "symbolic");
        assert_eq!(json["integral"]["den"], serde_json::json!([0, 0, 1]));
        assert!(json["fibers"][0].get("count").is_none());
    }
}
