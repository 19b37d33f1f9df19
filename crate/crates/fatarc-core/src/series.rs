//! Truncated motivic generating series.
//!
//! Five series over a common report shape:
//!
//! * [`igusa_series`] — classes of arc schemes of `X` along the jet family of
//!   a germ, normalized by 𝕃^{−dim X · ℓ(jⁿ)};
//! * [`auto_igusa`] — jets of a germ arc'd along themselves;
//! * [`hilbert_series`] — the jets themselves as dimension-zero classes
//!   (lengths), with a Hilbert–Samuel polynomial tail fit;
//! * [`hilbert_kunz_series`] — colengths of Frobenius transforms in char p;
//! * [`milnor_series`] — deformed arc schemes of a hypersurface.
//!
//! A coefficient carries a *classical image* 𝕃-value only when the
//! coordinate-affine certificate fires; a closed form is attached only when a
//! rational function in t reproduces every computed coefficient exactly and
//! with at least one spare coefficient beyond its degrees of freedom.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arcs::{arc_dim, deformed_arc_scheme, ArcScheme};
use crate::classes::{fp_fingerprint, LValue};
use crate::fatpoints::{FatPoint, Germ};
use crate::frobchar::frobenius_transform;
use crate::ideals::Ideal;
use crate::linalg::{self, FieldOps, RationalOps};
use crate::polycore::{Monomial, Polynomial, Ring};
use crate::{Budget, Error, Result};

// ---------------------------------------------------------------------------
// Report shape
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SeriesCoefficient {
    pub n: usize,
    /// Length of the jet (or transform) governing this coefficient.
    pub jet_length: usize,
    /// Dimension of the arc/transform scheme (0 for dimension-zero series).
    pub dim: i64,
    /// Normalized exponent `dim − d·jet_length` for the series' own `d`.
    pub defect: i64,
    /// The classical image 𝕃^defect, present only when certified.
    pub l_coeff: Option<LValue>,
    /// Human-readable provenance (generator/variable counts, fingerprints).
    pub summary: String,
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub kind: &'static str,
    pub truncation: usize,
    pub coefficients: Vec<SeriesCoefficient>,
    /// Rational function in t reproducing all coefficients, when one exists.
    pub closed_form: Option<ClosedForm>,
    /// Hilbert–Samuel tail fit (polynomial in n, ascending), hilbert only.
    pub tail_fit: Option<Vec<BigRational>>,
}

impl SeriesReport {
    /// JSON shape `{kind, N, coefficients:[{n, jet_length, dim, defect,
    /// L_coeff?}], closed_form?}` (plus `tail_fit?` for the Hilbert series).
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut coeffs = Vec::new();
        for c in &self.coefficients {
            let mut entry = serde_json::json!({
                "n": c.n,
                "jet_length": c.jet_length,
                "dim": c.dim,
                "defect": c.defect,
            });
            if let Some(lv) = &c.l_coeff {
                entry["L_coeff"] = lv.to_json()?;
            }
            coeffs.push(entry);
        }
        let mut out = serde_json::json!({
            "kind": self.kind,
            "N": self.truncation,
            "coefficients": coeffs,
        });
        if let Some(cf) = &self.closed_form {
            out["closed_form"] = cf.to_json()?;
        }
        if let Some(fit) = &self.tail_fit {
            out["tail_fit"] = serde_json::Value::Array(
                fit.iter().map(|c| serde_json::Value::String(c.to_string())).collect(),
            );
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Rational functions in t over ℚ(𝕃)
// ---------------------------------------------------------------------------

/// Field operations for 𝕃-values, for use with the generic linear algebra.
pub struct LOps;

impl FieldOps<LValue> for LOps {
    fn zero(&self) -> LValue {
        LValue::zero()
    }
    fn one(&self) -> LValue {
        LValue::one()
    }
    fn add(&self, a: &LValue, b: &LValue) -> LValue {
        a.add(b)
    }
    fn neg(&self, a: &LValue) -> LValue {
        a.neg()
    }
    fn mul(&self, a: &LValue, b: &LValue) -> LValue {
        a.mul(b)
    }
    fn inv(&self, a: &LValue) -> Option<LValue> {
        LValue::one().div(a).ok()
    }
    fn is_zero(&self, a: &LValue) -> bool {
        a.is_zero()
    }
}

/// A rational function in t with 𝕃-value coefficients (ascending t-degree),
/// denominators cleared so every coefficient is an integer polynomial in 𝕃.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub num: Vec<LValue>,
    pub den: Vec<LValue>,
}

impl ClosedForm {
    pub fn new(mut num: Vec<LValue>, mut den: Vec<LValue>) -> ClosedForm {
        // Clear 𝕃-denominators: multiply through by an integral 𝕃-value that
        // absorbs every denominator (product is enough; fractions re-reduce).
        let mut clear = LValue::one();
        for c in num.iter().chain(den.iter()) {
            let probe = clear.mul(c);
            if probe.denominator() != [BigInt::from(1)] {
                let d = LValue::reduced(c.denominator().to_vec(), vec![BigInt::from(1)]);
                clear = clear.mul(&d);
            }
        }
        if !clear.is_one() {
            num = num.iter().map(|c| c.mul(&clear)).collect();
            den = den.iter().map(|c| c.mul(&clear)).collect();
        }
        while num.last().map_or(false, LValue::is_zero) {
            num.pop();
        }
        while den.last().map_or(false, LValue::is_zero) {
            den.pop();
        }
        ClosedForm { num, den }
    }

    /// Power-series expansion c₀..c_N (requires den(0) ≠ 0).
    pub fn expand(&self, n_max: usize) -> Result<Vec<LValue>> {
        let d0 = self.den.first().cloned().unwrap_or_else(LValue::zero);
        if d0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out: Vec<LValue> = Vec::with_capacity(n_max + 1);
        for k in 0..=n_max {
            let mut acc = self.num.get(k).cloned().unwrap_or_else(LValue::zero);
            for j in 1..=k.min(self.den.len().saturating_sub(1)) {
                acc = acc.sub(&self.den[j].mul(&out[k - j]));
            }
            out.push(acc.div(&d0)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let side = |v: &[LValue]| -> Result<Vec<serde_json::Value>> {
            v.iter().map(LValue::to_json).collect()
        };
        Ok(serde_json::json!({ "num": side(&self.num)?, "den": side(&self.den)? }))
    }

    /// Render like `(t + L^2*t^2)/(1 - L^2*t^2)`.
    pub fn display(&self) -> String {
        fn poly(v: &[LValue]) -> String {
            let mut out = String::new();
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let negative = c.numerator().last().map_or(false, |x| x.is_negative());
                let mag = if negative { c.neg() } else { c.clone() };
                let tpow = match k {
                    0 => String::new(),
                    1 => "t".to_string(),
                    _ => format!("t^{}", k),
                };
                let coeff = if mag.is_one() && k > 0 {
                    String::new()
                } else {
                    let s = mag.display();
                    // Parenthesize sums so the rendering re-parses.
                    let simple = mag.numerator().iter().filter(|x| !x.is_zero()).count() <= 1
                        && mag.denominator().len() == 1;
                    if simple { s } else { format!("({})", s) }
                };
                let part = match (coeff.is_empty(), tpow.is_empty()) {
                    (true, _) => tpow.clone(),
                    (false, true) => coeff,
                    (false, false) => format!("{}*{}", coeff, tpow),
                };
                if out.is_empty() {
                    if negative {
                        out.push('-');
                    }
                } else {
                    out.push_str(if negative { " - " } else { " + " });
                }
                out.push_str(&part);
            }
            if out.is_empty() {
                out.push('0');
            }
            out
        }
        let n = poly(&self.num);
        let nonzero = self.num.iter().filter(|c| !c.is_zero()).count();
        let wrapped = if nonzero > 1 { format!("({})", n) } else { n };
        format!("{}/({})", wrapped, poly(&self.den))
    }
}

/// Solve `rows · x = rhs` exactly; particular solution with free variables
/// zero, or `None` when inconsistent.
fn solve_particular<T: Clone, F: FieldOps<T>>(
    ops: &F,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    unknowns: usize,
) -> Option<Vec<T>> {
    let mut aug: Vec<Vec<T>> = rows
        .into_iter()
        .zip(rhs)
        .map(|(mut r, b)| {
            r.push(b);
            r
        })
        .collect();
    let pivots = linalg::rref(ops, &mut aug);
    if pivots.contains(&unknowns) {
        return None; // pivot in the constant column
    }
    let mut x = vec![ops.zero(); unknowns];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug[row][unknowns].clone();
    }
    Some(x)
}

/// Fit a rational function in t to `c₀..c_N` with minimal total degree and at
/// least one spare coefficient beyond the degrees of freedom; verified by
/// full re-expansion before returning.
fn pade_fit<T: Clone + PartialEq, F: FieldOps<T>>(ops: &F, cs: &[T]) -> Option<(Vec<T>, Vec<T>)> {
    let n_max = cs.len().checked_sub(1)?;
    let at = |k: isize| -> T {
        if k < 0 {
            ops.zero()
        } else {
            cs[k as usize].clone()
        }
    };
    for total in 0..n_max {
        for dd in 0..=total {
            let dn = total - dd;
            // Solve for the denominator from the homogeneous window.
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for k in (dn + 1)..=n_max {
                rows.push((1..=dd).map(|j| at(k as isize - j as isize)).collect());
                rhs.push(ops.neg(&cs[k]));
            }
            let Some(b) = solve_particular(ops, rows, rhs, dd) else {
                continue;
            };
            let mut den = vec![ops.one()];
            den.extend(b);
            let num: Vec<T> = (0..=dn)
                .map(|k| {
                    let mut acc = ops.zero();
                    for (j, bj) in den.iter().enumerate().take(k + 1) {
                        acc = ops.add(&acc, &ops.mul(bj, &at(k as isize - j as isize)));
                    }
                    acc
                })
                .collect();
            // Verify by re-expansion (den[0] = 1).
            let mut ok = true;
            let mut expanded: Vec<T> = Vec::with_capacity(n_max + 1);
            for k in 0..=n_max {
                let mut acc = if k <= dn { num[k].clone() } else { ops.zero() };
                for j in 1..=k.min(dd) {
                    acc = ops.sub(&acc, &ops.mul(&den[j], &expanded[k - j]));
                }
                if acc != cs[k] {
                    ok = false;
                    break;
                }
                expanded.push(acc);
            }
            if ok {
                return Some((num, den));
            }
        }
    }
    None
}

fn fit_closed_form(values: &[Option<LValue>]) -> Option<ClosedForm> {
    let mut cs = vec![LValue::zero()];
    for v in values {
        cs.push(v.clone()?);
    }
    let (num, den) = pade_fit(&LOps, &cs)?;
    Some(ClosedForm::new(num, den))
}

/// Exact polynomial fit of `values[n-1] = ℓ(n)` of the given degree over the
/// tail window `n = N−degree−2 .. N` (inclusive), per Hilbert–Samuel; `None`
/// when the window does not fit or the system is inconsistent.
pub fn polynomial_tail_fit(values: &[usize], degree: usize) -> Option<Vec<BigRational>> {
    let n_max = values.len();
    let lo = n_max.checked_sub(degree + 2)?;
    if lo < 1 {
        return None;
    }
    let ops = RationalOps;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for n in lo..=n_max {
        let mut row = Vec::with_capacity(degree + 1);
        let mut pow = BigRational::from(BigInt::from(1));
        for _ in 0..=degree {
            row.push(pow.clone());
            pow *= BigRational::from(BigInt::from(n as i64));
        }
        rows.push(row);
        rhs.push(BigRational::from(BigInt::from(values[n - 1] as i64)));
    }
    let fit = solve_particular(&ops, rows.clone(), rhs.clone(), degree + 1)?;
    // solve_particular ignores surplus rows only if consistent; re-check.
    for (row, want) in rows.iter().zip(&rhs) {
        let mut acc = BigRational::zero();
        for (a, x) in row.iter().zip(&fit) {
            acc += a * x;
        }
        if &acc != want {
            return None;
        }
    }
    Some(fit)
}

/// Independent colength oracle: dim of `k[x]/I` computed as (monomials of
/// degree < bound) minus the rank of the span of truncated generator
/// multiples. Exact provided `𝔪^bound ⊆ I` (caller's guarantee).
pub fn colength_by_rank(ideal: &Ideal, bound: u32) -> Result<usize> {
    let ring = ideal.ring();
    let field = *ring.field();
    // All monomials of total degree < bound, in a fixed order.
    let mut monos: Vec<Monomial> = Vec::new();
    for d in 0..bound {
        for m in crate::fatpoints::degree_monomials(ring, d) {
            let (mono, _) = m.terms().next().expect("monomial generator");
            monos.push(mono.clone());
        }
    }
    let index: std::collections::HashMap<Monomial, usize> =
        monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in ideal.gens() {
        for m in &monos {
            let prod = g.mul_ref(&ring.monomial(m.clone()));
            let mut row = vec![field.zero(); monos.len()];
            let mut nonzero = false;
            for (pm, pc) in prod.terms() {
                if let Some(&i) = index.get(pm) {
                    row[i] = pc.clone();
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let rank = linalg::rank(&field, &rows);
    Ok(monos.len() - rank)
}

// ---------------------------------------------------------------------------
// The five series
// ---------------------------------------------------------------------------

fn arc_summary(arc: &ArcScheme) -> String {
    format!(
        "{} generators in {} variables",
        arc.ideal().gens().len(),
        arc.ring().num_vars()
    )
}

/// Igusa-type series of `X` along the jet family of a germ: the n-th
/// coefficient reports `∇_{jⁿ}X` normalized by 𝕃^{−dim X·ℓ(jⁿ)}.
pub fn igusa_series(
    x: &Ideal,
    germ: &Germ,
    n_max: usize,
    budget: &Budget,
) -> Result<SeriesReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let d = x.krull_dim(budget)?;
    let mut coefficients = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let jet = germ.jet(n as u32, budget)?;
        let (arc, rep) = arc_dim(x, &jet, budget)?;
        let ell = jet.length();
        let defect = rep.dim - d * ell as i64;
        coefficients.push(SeriesCoefficient {
            n,
            jet_length: ell,
            dim: rep.dim,
            defect,
            l_coeff: rep.coordinate_affine.map(|_| LValue::l_power(defect)),
            summary: arc_summary(&arc),
        });
    }
    let closed_form =
        fit_closed_form(&coefficients.iter().map(|c| c.l_coeff.clone()).collect::<Vec<_>>());
    Ok(SeriesReport { kind: "igusa", truncation: n_max, coefficients, closed_form, tail_fit: None })
}

/// Auto-Igusa series of a germ: jets arc'd along themselves, normalized by
/// 𝕃^{−dim(germ)·ℓ(jⁿ)}.
pub fn auto_igusa(germ: &Germ, n_max: usize, budget: &Budget) -> Result<SeriesReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let d = germ.dim(budget)?;
    let mut coefficients = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let jet = germ.jet(n as u32, budget)?;
        let (arc, rep) = arc_dim(jet.ideal(), &jet, budget)?;
        let ell = jet.length();
        let defect = rep.dim - d * ell as i64;
        coefficients.push(SeriesCoefficient {
            n,
            jet_length: ell,
            dim: rep.dim,
            defect,
            l_coeff: rep.coordinate_affine.map(|_| LValue::l_power(defect)),
            summary: arc_summary(&arc),
        });
    }
    let closed_form =
        fit_closed_form(&coefficients.iter().map(|c| c.l_coeff.clone()).collect::<Vec<_>>());
    Ok(SeriesReport {
        kind: "auto-igusa",
        truncation: n_max,
        coefficients,
        closed_form,
        tail_fit: None,
    })
}

/// Hilbert series of a germ: the jets as dimension-zero classes. Lengths are
/// the additive realization; the tail is fit by a polynomial of degree equal
/// to the germ dimension.
pub fn hilbert_series(germ: &Germ, n_max: usize, budget: &Budget) -> Result<SeriesReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let mut coefficients = Vec::with_capacity(n_max);
    let mut lengths = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let jet = germ.jet(n as u32, budget)?;
        let print = fp_fingerprint(&jet, budget)?;
        lengths.push(jet.length());
        coefficients.push(SeriesCoefficient {
            n,
            jet_length: jet.length(),
            dim: 0,
            defect: 0,
            l_coeff: None,
            summary: format!("length {}, degree census {:?}", print.length, print.hilbert),
        });
    }
    let values: Vec<Option<LValue>> =
        lengths.iter().map(|&l| Some(LValue::from_int(l as i64))).collect();
    let closed_form = fit_closed_form(&values);
    let d = germ.dim(budget)?.max(0) as usize;
    let tail_fit = polynomial_tail_fit(&lengths, d);
    Ok(SeriesReport {
        kind: "hilbert",
        truncation: n_max,
        coefficients,
        closed_form,
        tail_fit,
    })
}

/// Hilbert–Kunz series of `Y ⊆ X`: colengths of the Frobenius transforms
/// `I_X + I_Y^[pⁿ]`, n = 1..N. Requires positive characteristic and a
/// zero-dimensional transform (validated by the staircase).
pub fn hilbert_kunz_series(
    sub: &Ideal,
    ambient: &Ideal,
    n_max: usize,
    budget: &Budget,
) -> Result<SeriesReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let mut coefficients = Vec::with_capacity(n_max);
    let mut lengths = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let transform = frobenius_transform(sub, ambient, n as u32, budget)?;
        let fp = FatPoint::new(transform, budget)?;
        let print = fp_fingerprint(&fp, budget)?;
        lengths.push(fp.length());
        coefficients.push(SeriesCoefficient {
            n,
            jet_length: fp.length(),
            dim: 0,
            defect: 0,
            l_coeff: None,
            summary: format!("length {}, degree census {:?}", print.length, print.hilbert),
        });
    }
    let values: Vec<Option<LValue>> =
        lengths.iter().map(|&l| Some(LValue::from_int(l as i64))).collect();
    let closed_form = fit_closed_form(&values);
    Ok(SeriesReport {
        kind: "hilbert-kunz",
        truncation: n_max,
        coefficients,
        closed_form,
        tail_fit: None,
    })
}

/// The n-th deformed arc scheme of the hypersurface `V(f)` along the
/// parameter fat point `𝔶ₙ = V(I_germ + (ξ₁ⁿ,…,ξ_eⁿ))`: the equation is
/// deformed by `−(ξ₁⋯ξ_e)^{n−1}` before expansion.
pub fn milnor_deformed_scheme(
    f: &Polynomial,
    germ: &Germ,
    n: u32,
    budget: &Budget,
) -> Result<ArcScheme> {
    if n == 0 {
        return Err(Error::InvalidArgument("deformation index must be at least 1".into()));
    }
    let source = f.ring();
    let germ_ring = germ.ring();
    if source.field() != germ_ring.field() {
        return Err(Error::CharacteristicMismatch("deformed arcs".into()));
    }
    // Parameter fat point 𝔶ₙ (finite by construction: all parameters are
    // raised to the n-th power).
    let mut yp_gens: Vec<Polynomial> = germ.ideal().gens().to_vec();
    for v in 0..germ_ring.num_vars() {
        yp_gens.push(germ_ring.var(v).pow(n));
    }
    let yn = FatPoint::new(Ideal::new(germ_ring.clone(), yp_gens)?, budget)?;
    // Mixed ring: source variables first, then the deformation parameters.
    let mut names: Vec<String> = source.var_names().to_vec();
    names.extend(germ_ring.var_names().iter().cloned());
    let mixed = Ring::new(*source.field(), names)?;
    let f_mixed = f.substitute(
        &mixed,
        &(0..source.num_vars()).map(|i| mixed.var(i)).collect::<Vec<_>>(),
    )?;
    let mut deformation = mixed.one();
    for v in 0..germ_ring.num_vars() {
        deformation = deformation.mul_ref(&mixed.var(source.num_vars() + v));
    }
    let gen = f_mixed.checked_sub(&deformation.pow(n - 1))?;
    deformed_arc_scheme(source, &yn, &[gen], budget)
}

/// Milnor-type series of a hypersurface `f` over the parameter family of a
/// germ, normalized by 𝕃^{−(#vars(f)−1)·ℓ(𝔶ₙ)}.
pub fn milnor_series(
    f: &Polynomial,
    germ: &Germ,
    n_max: usize,
    budget: &Budget,
) -> Result<SeriesReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let d = f.ring().num_vars() as i64 - 1;
    let mut coefficients = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let arc = milnor_deformed_scheme(f, germ, n as u32, budget)?;
        let source_zero = Ideal::zero(f.ring().clone());
        let rep = crate::arcs::arc_dim_of(&arc, &source_zero, budget)?;
        let ell = arc.context().fat_point().length();
        let defect = rep.dim - d * ell as i64;
        coefficients.push(SeriesCoefficient {
            n,
            jet_length: ell,
            dim: rep.dim,
            defect,
            l_coeff: rep.coordinate_affine.map(|_| LValue::l_power(defect)),
            summary: arc_summary(&arc),
        });
    }
    let closed_form =
        fit_closed_form(&coefficients.iter().map(|c| c.l_coeff.clone()).collect::<Vec<_>>());
    Ok(SeriesReport {
        kind: "milnor",
        truncation: n_max,
        coefficients,
        closed_form,
        tail_fit: None,
    })
}
