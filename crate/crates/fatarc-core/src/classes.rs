//! Grothendieck-class surrogates and the finite-field counting oracle.
//!
//! * [`Fingerprint`] — exact invariants of a fat point (length, embedding
//!   dimension, Hilbert function, socle dimension, monomial normal form)
//!   standing in for its isomorphism class: equal fingerprints distinguish,
//!   they never certify isomorphism.
//! * [`LValue`] — exact rational functions in the Lefschetz symbol 𝕃;
//!   substituting 𝕃 ↦ q realizes them as rational numbers.
//! * [`Fq`]/[`Rq`] — enumeration domains: a finite field 𝔽_q (q = pᵉ, tables
//!   built over a deterministically chosen irreducible polynomial) and the
//!   Artinian algebra R_q = (fat point ring) ⊗ 𝔽_q on the staircase basis.
//! * [`count_scheme`]/[`count_motif`]/[`count_fat_motif`] — brute-force point
//!   counts realizing classes; the adjunction `X(R_q) = (∇_𝔳X)(𝔽_q)` is the
//!   workhorse verification identity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arcs::{Atom, Motif};
use crate::fatpoints::FatPoint;
use crate::ideals::{degree_census, Ideal};
use crate::linalg;
use crate::polycore::{Field, Polynomial, Scalar};
use crate::{Budget, Error, Result};

// ---------------------------------------------------------------------------
// Fingerprints
// ---------------------------------------------------------------------------

/// Exact invariants of a fat point used as a dimension-zero class surrogate.
/// Equal fingerprints do **not** certify isomorphism; distinct ones separate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub length: usize,
    pub embedding_dim: usize,
    /// Staircase census by total degree; sums to `length`.
    pub hilbert: Vec<usize>,
    pub socle_dim: usize,
    /// Minimal monomial generators when the defining ideal is monomial.
    pub monomial_normal_form: Option<Vec<String>>,
}

/// Compute the fingerprint of a fat point.
pub fn fp_fingerprint(fp: &FatPoint, budget: &Budget) -> Result<Fingerprint> {
    let hilbert = degree_census(fp.staircase());
    let length = fp.length();
    let embedding_dim = hilbert.get(1).copied().unwrap_or(0);
    // Socle = annihilator of the maximal ideal: common kernel of the
    // multiplication maps by the ambient variables.
    let n = fp.ring().num_vars();
    let mut stacked: Vec<Vec<Scalar>> = Vec::new();
    for v in 0..n {
        stacked.extend(fp.multiplication_matrix(v)?);
    }
    let field = *fp.ring().field();
    let socle_dim = linalg::kernel_dim(&field, &stacked, length);
    // Canonical monomial presentation when the lex basis is monomial.
    let gb = fp
        .ideal()
        .groebner_basis(&crate::polycore::MonomialOrder::Lex, budget)?;
    let monomial_normal_form = if gb.elems().iter().all(Polynomial::is_term) {
        Some(gb.elems().iter().map(Polynomial::display).collect())
    } else {
        None
    };
    Ok(Fingerprint { length, embedding_dim, hilbert, socle_dim, monomial_normal_form })
}

// ---------------------------------------------------------------------------
// Laurent values in 𝕃
// ---------------------------------------------------------------------------

/// An exact rational function in the Lefschetz symbol 𝕃, stored as a reduced
/// fraction of integer polynomials (coefficients ascending in degree, jointly
/// primitive, denominator's leading coefficient positive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LValue {
    num: Vec<BigInt>,
    den: Vec<BigInt>,
}

fn poly_trim(v: &mut Vec<BigInt>) {
    while v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
}

fn poly_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    poly_trim(&mut out);
    out
}

fn poly_neg(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|c| -c).collect()
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(&mut out);
    out
}

/// Polynomial gcd over ℚ, returned as a primitive integer polynomial.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let to_q = |v: &[BigInt]| -> Vec<BigRational> {
        v.iter().map(|c| BigRational::from(c.clone())).collect()
    };
    let mut f = to_q(a);
    let mut g = to_q(b);
    let trim = |v: &mut Vec<BigRational>| {
        while v.last().map_or(false, Zero::is_zero) {
            v.pop();
        }
    };
    trim(&mut f);
    trim(&mut g);
    while !g.is_empty() {
        // f mod g
        while f.len() >= g.len() && !f.is_empty() {
            let factor = f.last().unwrap() / g.last().unwrap();
            let shift = f.len() - g.len();
            for (i, c) in g.iter().enumerate() {
                let t = &factor * c;
                f[shift + i] -= t;
            }
            trim(&mut f);
        }
        std::mem::swap(&mut f, &mut g);
    }
    if f.is_empty() {
        return Vec::new();
    }
    // Clear denominators, strip content.
    use num_integer::Integer;
    let mut den_lcm = BigInt::one();
    for c in &f {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f
        .iter()
        .map(|c| (c * BigRational::from(den_lcm.clone())).to_integer())
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    content *= sign;
    ints.iter().map(|c| c / &content).collect()
}

fn poly_div_exact(a: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    // Exact division over ℚ (caller guarantees divisibility).
    let mut f: Vec<BigRational> = a.iter().map(|c| BigRational::from(c.clone())).collect();
    let g: Vec<BigRational> = d.iter().map(|c| BigRational::from(c.clone())).collect();
    let mut q = vec![BigRational::zero(); if f.len() >= g.len() { f.len() - g.len() + 1 } else { 0 }];
    let trim = |v: &mut Vec<BigRational>| {
        while v.last().map_or(false, Zero::is_zero) {
            v.pop();
        }
    };
    trim(&mut f);
    while f.len() >= g.len() && !f.is_empty() {
        let factor = f.last().unwrap() / g.last().unwrap();
        let shift = f.len() - g.len();
        q[shift] = factor.clone();
        for (i, c) in g.iter().enumerate() {
            let t = &factor * c;
            f[shift + i] -= t;
        }
        trim(&mut f);
    }
    debug_assert!(f.is_empty(), "inexact polynomial division");
    let mut out: Vec<BigInt> = q.iter().map(|c| c.to_integer()).collect();
    poly_trim(&mut out);
    out
}

impl LValue {
    pub(crate) fn reduced(mut num: Vec<BigInt>, mut den: Vec<BigInt>) -> LValue {
        poly_trim(&mut num);
        poly_trim(&mut den);
        assert!(!den.is_empty(), "zero denominator in 𝕃-value");
        if num.is_empty() {
            return LValue { num, den: vec![BigInt::one()] };
        }
        let g = poly_gcd(&num, &den);
        if g.len() > 1 || g.first().map_or(false, |c| !c.is_one()) {
            num = poly_div_exact(&num, &g);
            den = poly_div_exact(&den, &g);
        }
        // Joint content: make den primitive with positive leading coefficient
        // and absorb the ratio into num (kept integral by scaling both).
        use num_integer::Integer;
        let mut cn = BigInt::zero();
        for c in &num {
            cn = cn.gcd(c);
        }
        let mut cd = BigInt::zero();
        for c in &den {
            cd = cd.gcd(c);
        }
        let g = cn.gcd(&cd);
        let mut num: Vec<BigInt> = num.iter().map(|c| c / &g).collect();
        let mut den: Vec<BigInt> = den.iter().map(|c| c / &g).collect();
        if den.last().unwrap().is_negative() {
            num = poly_neg(&num);
            den = poly_neg(&den);
        }
        LValue { num, den }
    }

    pub fn zero() -> LValue {
        LValue { num: Vec::new(), den: vec![BigInt::one()] }
    }

    pub fn one() -> LValue {
        LValue::from_int(1)
    }

    pub fn from_int(n: i64) -> LValue {
        LValue::reduced(vec![BigInt::from(n)], vec![BigInt::one()])
    }

    /// 𝕃^k for any integer k (negative exponents go to the denominator).
    pub fn l_power(k: i64) -> LValue {
        let mono = |e: usize| {
            let mut v = vec![BigInt::zero(); e + 1];
            v[e] = BigInt::one();
            v
        };
        if k >= 0 {
            LValue { num: mono(k as usize), den: vec![BigInt::one()] }
        } else {
            LValue { num: vec![BigInt::one()], den: mono((-k) as usize) }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0].is_one() && self.den.len() == 1 && self.den[0].is_one()
    }

    pub fn add(&self, other: &LValue) -> LValue {
        LValue::reduced(
            poly_add(&poly_mul(&self.num, &other.den), &poly_mul(&other.num, &self.den)),
            poly_mul(&self.den, &other.den),
        )
    }

    pub fn sub(&self, other: &LValue) -> LValue {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LValue {
        LValue { num: poly_neg(&self.num), den: self.den.clone() }
    }

    pub fn mul(&self, other: &LValue) -> LValue {
        LValue::reduced(poly_mul(&self.num, &other.num), poly_mul(&self.den, &other.den))
    }

    pub fn div(&self, other: &LValue) -> Result<LValue> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(LValue::reduced(
            poly_mul(&self.num, &other.den),
            poly_mul(&self.den, &other.num),
        ))
    }

    /// Substitute 𝕃 ↦ q.
    pub fn eval_at(&self, q: i64) -> Result<BigRational> {
        let at = |v: &[BigInt]| -> BigInt {
            let mut acc = BigInt::zero();
            for c in v.iter().rev() {
                acc = acc * BigInt::from(q) + c;
            }
            acc
        };
        let d = at(&self.den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(at(&self.num), d))
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.den
    }

    /// JSON form `{"num": [...], "den": [...]}`, coefficient arrays ascending
    /// in 𝕃-degree. Errors when a coefficient exceeds the JSON integer range.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let ints = |v: &[BigInt]| -> Result<Vec<i64>> {
            v.iter()
                .map(|c| {
                    i64::try_from(c).map_err(|_| {
                        Error::ResourceLimit("coefficient exceeds the JSON integer range".into())
                    })
                })
                .collect()
        };
        Ok(serde_json::json!({ "num": ints(&self.num)?, "den": ints(&self.den)? }))
    }

    /// Render like `(1 + L^2)/(1 - L)` with `L` for the Lefschetz symbol.
    pub fn display(&self) -> String {
        let poly = |v: &[BigInt]| -> String {
            if v.is_empty() {
                return "0".into();
            }
            let mut out = String::new();
            for (e, c) in v.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mag = c.abs();
                let part = if e == 0 {
                    format!("{}", mag)
                } else {
                    let pow = if e == 1 { "L".to_string() } else { format!("L^{}", e) };
                    if mag.is_one() {
                        pow
                    } else {
                        format!("{}*{}", mag, pow)
                    }
                };
                if out.is_empty() {
                    if c.is_negative() {
                        out.push('-');
                    }
                } else if c.is_negative() {
                    out.push_str(" - ");
                } else {
                    out.push_str(" + ");
                }
                out.push_str(&part);
            }
            out
        };
        let is_const_one = self.den.len() == 1 && self.den[0].is_one();
        if is_const_one {
            poly(&self.num)
        } else {
            let n = poly(&self.num);
            let wrapped = if self.num.iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({})", n)
            } else {
                n
            };
            format!("{}/({})", wrapped, poly(&self.den))
        }
    }
}

// ---------------------------------------------------------------------------
// Finite fields 𝔽_q
// ---------------------------------------------------------------------------

/// Hard cap on table-backed field sizes.
const MAX_Q: u64 = 512;

/// A finite field 𝔽_q, q = pᵉ, with full addition/multiplication tables.
/// Elements are indices `0..q`; index n encodes the polynomial with base-p
/// digits of n as coefficients over the deterministically chosen irreducible.
#[derive(Debug)]
pub struct Fq {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return if rest == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn digits(mut n: u64, p: u64, e: u32) -> Vec<u64> {
    let mut d = vec![0u64; e as usize];
    for slot in d.iter_mut() {
        *slot = n % p;
        n /= p;
    }
    d
}

fn undigits(d: &[u64], p: u64) -> u64 {
    let mut n = 0;
    for &c in d.iter().rev() {
        n = n * p + c;
    }
    n
}

/// Remainder of polynomial division over 𝔽_p (little-endian coefficients).
fn poly_rem_fp(mut f: Vec<u64>, g: &[u64], p: u64) -> Vec<u64> {
    let deg = |v: &[u64]| v.iter().rposition(|&c| c != 0);
    let gd = deg(g).expect("nonzero divisor");
    let ginv = invm(g[gd], p);
    while let Some(fd) = deg(&f) {
        if fd < gd {
            break;
        }
        let factor = f[fd] * ginv % p;
        let shift = fd - gd;
        for (i, &c) in g.iter().enumerate().take(gd + 1) {
            f[shift + i] = (f[shift + i] + p - factor * c % p) % p;
        }
    }
    f.truncate(gd);
    f.resize(gd, 0);
    f
}

fn invm(a: u64, p: u64) -> u64 {
    // Extended Euclid; p prime, a ≠ 0 mod p.
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    ((t % p as i128 + p as i128) % p as i128) as u64
}

/// The lexicographically first monic irreducible of degree e over 𝔽_p
/// (coefficients of the non-leading part read as a base-p number).
fn find_irreducible(p: u64, e: u32) -> Vec<u64> {
    let ed = e as usize;
    'cand: for tail in 0..p.pow(e) {
        let mut f = digits(tail, p, e);
        f.push(1); // monic of degree e
        // Irreducible iff no monic divisor of degree 1..=e/2.
        for d in 1..=(e / 2).max(1) {
            for dt in 0..p.pow(d) {
                let mut g = digits(dt, p, d);
                g.push(1);
                let r = poly_rem_fp(f.clone(), &g, p);
                if r.iter().all(|&c| c == 0) {
                    continue 'cand;
                }
            }
        }
        let _ = ed;
        return f;
    }
    unreachable!("irreducible polynomials exist in every degree");
}

impl Fq {
    pub fn new(q: u64) -> Result<Fq> {
        let (p, e) = prime_power(q).ok_or(Error::UnsupportedFieldSize(q))?;
        if q > MAX_Q {
            return Err(Error::UnsupportedFieldSize(q));
        }
        let modulus = if e > 1 { find_irreducible(p, e) } else { vec![0, 1] };
        let n = q as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for a in 0..q {
            let da = digits(a, p, e);
            let nd: Vec<u64> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a as usize] = undigits(&nd, p) as u32;
            for b in 0..q {
                let db = digits(b, p, e);
                let ds: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&ds, p) as u32;
                // Polynomial product reduced mod the irreducible.
                let mut prod = vec![0u64; 2 * e as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = if e > 1 { poly_rem_fp(prod, &modulus, p) } else { vec![prod[0]] };
                mul[(a * q + b) as usize] = undigits(&r, p) as u32;
            }
        }
        let mut inv = vec![0u32; n];
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u32;
                    break;
                }
            }
        }
        Ok(Fq { p, e, q, add, mul, neg, inv })
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a as u64 * self.q + b as u64) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a as u64 * self.q + b as u64) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    pub fn pow(&self, mut a: u32, mut k: u64) -> u32 {
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            k >>= 1;
        }
        acc
    }

    /// Reduce a scalar of the given coefficient field into 𝔽_q (through the
    /// prime subfield). Rational coefficients whose denominator vanishes
    /// modulo p are a [`Error::BadReduction`].
    pub fn embed_scalar(&self, c: &Scalar, field: &Field) -> Result<u32> {
        match field.characteristic() {
            0 => {
                let r = c.as_rational().expect("rational scalar");
                let p = BigInt::from(self.p);
                let rem = |x: &BigInt| -> u64 {
                    let m = x % &p;
                    let m = if m.is_negative() { m + &p } else { m };
                    let (_, digits) = m.to_u64_digits();
                    digits.first().copied().unwrap_or(0)
                };
                let den = rem(r.denom());
                if den == 0 {
                    return Err(Error::BadReduction(self.p));
                }
                Ok((rem(r.numer()) * invm(den, self.p) % self.p) as u32)
            }
            ch if ch == self.p => match c {
                Scalar::Mod(v) => Ok((*v % self.p) as u32),
                Scalar::Rat(_) => Err(Error::CharacteristicMismatch("scalar encoding".into())),
            },
            ch => Err(Error::CharacteristicMismatch(format!(
                "coefficients live in characteristic {}, counting field has {}",
                ch, self.p
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Point counting over 𝔽_q
// ---------------------------------------------------------------------------

/// A polynomial compiled against an 𝔽_q table for fast repeated evaluation.
struct Compiled {
    terms: Vec<(u32, Vec<(usize, u32)>)>,
}

fn compile(f: &Polynomial, fq: &Fq) -> Result<Compiled> {
    let field = f.ring().field();
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        let cc = fq.embed_scalar(c, field)?;
        if cc == 0 {
            continue;
        }
        let vars: Vec<(usize, u32)> = m.iter().map(|(v, e)| (v as usize, e)).collect();
        terms.push((cc, vars));
    }
    Ok(Compiled { terms })
}

impl Compiled {
    fn eval(&self, fq: &Fq, point: &[u32]) -> u32 {
        let mut acc = 0u32;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(v, e) in vars {
                t = fq.mul(t, fq.pow(point[v], e as u64));
            }
            acc = fq.add(acc, t);
        }
        acc
    }
}

fn check_budget(total: u128, budget: &Budget) -> Result<()> {
    if total > budget.max_enumeration {
        Err(Error::BudgetExceeded { needed: total, budget: budget.max_enumeration })
    } else {
        Ok(())
    }
}

/// Iterate all points of 𝔽_q^n (odometer order), calling `visit` on each.
fn enumerate_points(q: u64, n: usize, mut visit: impl FnMut(&[u32])) {
    let mut point = vec![0u32; n];
    loop {
        visit(&point);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            point[i] += 1;
            if (point[i] as u64) < q {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// Number of 𝔽_q-points of `V(ideal)`.
pub fn count_scheme(ideal: &Ideal, q: u64, budget: &Budget) -> Result<u128> {
    count_motif(&Motif::closed(ideal.clone()), q, budget)
}

/// Number of 𝔽_q-points of a constructible motif (over a field the `Cone`
/// and `Closed` atoms coincide).
pub fn count_motif(motif: &Motif, q: u64, budget: &Budget) -> Result<u128> {
    let fq = Fq::new(q)?;
    let n = motif.ring().num_vars() as usize;
    check_budget((q as u128).pow(n as u32), budget)?;
    // Compile every literal's generators once.
    let mut cells: Vec<Vec<(Vec<Compiled>, bool)>> = Vec::new();
    for cell in motif.cells() {
        let mut lits = Vec::new();
        for lit in cell {
            let gens = match &lit.atom {
                Atom::Closed(j) | Atom::Cone(j) => j.gens(),
            };
            let compiled: Vec<Compiled> =
                gens.iter().map(|g| compile(g, &fq)).collect::<Result<_>>()?;
            lits.push((compiled, lit.negated));
        }
        cells.push(lits);
    }
    let mut count = 0u128;
    enumerate_points(q, n, |point| {
        let hit = cells.iter().any(|cell| {
            cell.iter().all(|(gens, negated)| {
                let vanishes = gens.iter().all(|g| g.eval(&fq, point) == 0);
                vanishes != *negated
            })
        });
        if hit {
            count += 1;
        }
    });
    Ok(count)
}

// ---------------------------------------------------------------------------
// The Artinian test algebra R_q and fat-point counting
// ---------------------------------------------------------------------------

/// R_q = (coordinate ring of the fat point) ⊗ 𝔽_q, as coordinate vectors on
/// the staircase basis with a precomputed multiplication table.
pub struct Rq {
    fq: Fq,
    l: usize,
    /// `table[i][j]` = staircase coordinates of (basis i)·(basis j).
    table: Vec<Vec<Vec<u32>>>,
}

impl Rq {
    pub fn new(fp: &FatPoint, q: u64, budget: &Budget) -> Result<Rq> {
        let fq = Fq::new(q)?;
        let l = fp.length();
        let field = fp.ring().field();
        let mut table = vec![vec![Vec::new(); l]; l];
        let gb = fp
            .ideal()
            .groebner_basis(&crate::polycore::MonomialOrder::Lex, budget)?;
        for i in 0..l {
            for j in 0..l {
                let prod = fp.staircase()[i].mul(&fp.staircase()[j]);
                let nf = gb.normal_form(&fp.ring().monomial(prod));
                let coords = fp.staircase_coords(&nf)?;
                table[i][j] = coords
                    .iter()
                    .map(|c| fq.embed_scalar(c, field))
                    .collect::<Result<_>>()?;
            }
        }
        Ok(Rq { fq, l, table })
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn length(&self) -> usize {
        self.l
    }

    /// Number of elements, q^l.
    pub fn size(&self) -> u128 {
        (self.fq.q as u128).pow(self.l as u32)
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.l]
    }

    pub fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.l];
        v[0] = 1; // the staircase starts with the monomial 1
        v
    }

    /// Embed an 𝔽_q element as a constant.
    pub fn constant(&self, c: u32) -> Vec<u32> {
        let mut v = vec![0; self.l];
        v[0] = c;
        v
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.fq.add(x, y)).collect()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.l];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = self.fq.mul(x, y);
                for (k, slot) in out.iter_mut().enumerate() {
                    let t = self.fq.mul(c, self.table[i][j][k]);
                    *slot = self.fq.add(*slot, t);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u32], mut k: u64) -> Vec<u32> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// The residue of an element at the unique point (its center): the
    /// coordinate on the basis monomial 1. Zero residue = element of the
    /// maximal ideal.
    pub fn residue(&self, a: &[u32]) -> u32 {
        a[0]
    }

    /// All q^l elements in odometer order.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.size() as usize);
        enumerate_points(self.fq.q, self.l, |pt| out.push(pt.to_vec()));
        out
    }

    /// Evaluate a polynomial of the source ring at a tuple of R_q elements.
    pub fn eval(&self, f: &Polynomial, point: &[Vec<u32>]) -> Result<Vec<u32>> {
        let field = f.ring().field();
        let mut acc = self.zero();
        for (m, c) in f.terms() {
            let cc = self.fq.embed_scalar(c, field)?;
            if cc == 0 {
                continue;
            }
            let mut t = self.constant(cc);
            for (v, e) in m.iter() {
                t = self.mul(&t, &self.pow(&point[v as usize], e as u64));
            }
            acc = self.add(&acc, &t);
        }
        Ok(acc)
    }
}

/// Number of R_q-points of `V(ideal)` — the fat-point side of the arc
/// adjunction.
pub fn count_fat(ideal: &Ideal, fp: &FatPoint, q: u64, budget: &Budget) -> Result<u128> {
    count_fat_motif(&Motif::closed(ideal.clone()), fp, q, budget)
}

/// Number of R_q-points of a motif. `Closed(J)` requires the generators to
/// vanish in R_q; `Cone(J)` requires them to vanish at the center (residue
/// zero, i.e. lie in the maximal ideal).
pub fn count_fat_motif(motif: &Motif, fp: &FatPoint, q: u64, budget: &Budget) -> Result<u128> {
    let rq = Rq::new(fp, q, budget)?;
    let n = motif.ring().num_vars() as usize;
    let total = (rq.size()).checked_pow(n as u32).ok_or(Error::BudgetExceeded {
        needed: u128::MAX,
        budget: budget.max_enumeration,
    })?;
    check_budget(total, budget)?;
    let elements = rq.elements();
    let mut count = 0u128;
    let mut index = vec![0usize; n];
    loop {
        let point: Vec<Vec<u32>> = index.iter().map(|&i| elements[i].clone()).collect();
        let mut hit = false;
        for cell in motif.cells() {
            let mut all = true;
            for lit in cell {
                let sat = match &lit.atom {
                    Atom::Closed(j) => {
                        let mut v = true;
                        for g in j.gens() {
                            if !rq.is_zero(&rq.eval(g, &point)?) {
                                v = false;
                                break;
                            }
                        }
                        v
                    }
                    Atom::Cone(j) => {
                        let mut v = true;
                        for g in j.gens() {
                            if rq.residue(&rq.eval(g, &point)?) != 0 {
                                v = false;
                                break;
                            }
                        }
                        v
                    }
                };
                if sat == lit.negated {
                    all = false;
                    break;
                }
            }
            if all {
                hit = true;
                break;
            }
        }
        if hit {
            count += 1;
        }
        // Odometer.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(count);
            }
            index[i] += 1;
            if index[i] < elements.len() {
                break;
            }
            index[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Class expressions and inclusion–exclusion
// ---------------------------------------------------------------------------

/// A term of a dimension-zero class: multiplicity × fat point (fingerprint
/// cached for collection).
#[derive(Clone, Debug)]
pub struct FatTerm {
    pub coeff: i64,
    pub point: FatPoint,
    pub fingerprint: Fingerprint,
}

/// A formal class: either a ℤ-linear combination of fat points (dimension
/// zero) or a Laurent value in 𝕃.
#[derive(Clone, Debug)]
pub enum ClassExpr {
    Dim0(Vec<FatTerm>),
    L(LValue),
}

impl ClassExpr {
    pub fn from_fat_point(fp: &FatPoint, budget: &Budget) -> Result<ClassExpr> {
        Ok(ClassExpr::Dim0(vec![FatTerm {
            coeff: 1,
            point: fp.clone(),
            fingerprint: fp_fingerprint(fp, budget)?,
        }]))
    }

    fn collect(terms: Vec<FatTerm>) -> Vec<FatTerm> {
        let mut out: Vec<FatTerm> = Vec::new();
        for t in terms {
            if let Some(existing) =
                out.iter_mut().find(|e| e.fingerprint == t.fingerprint)
            {
                existing.coeff += t.coeff;
            } else {
                out.push(t);
            }
        }
        out.retain(|t| t.coeff != 0);
        out
    }

    pub fn add(&self, other: &ClassExpr) -> Result<ClassExpr> {
        match (self, other) {
            (ClassExpr::Dim0(a), ClassExpr::Dim0(b)) => {
                let mut terms = a.clone();
                terms.extend(b.iter().cloned());
                Ok(ClassExpr::Dim0(Self::collect(terms)))
            }
            (ClassExpr::L(a), ClassExpr::L(b)) => Ok(ClassExpr::L(a.add(b))),
            _ => Err(Error::RealizationMismatch(
                "cannot mix dimension-zero classes with 𝕃-values".into(),
            )),
        }
    }

    pub fn sub(&self, other: &ClassExpr) -> Result<ClassExpr> {
        match other {
            ClassExpr::Dim0(b) => {
                let negated: Vec<FatTerm> = b
                    .iter()
                    .map(|t| FatTerm { coeff: -t.coeff, ..t.clone() })
                    .collect();
                self.add(&ClassExpr::Dim0(negated))
            }
            ClassExpr::L(b) => self.add(&ClassExpr::L(b.neg())),
        }
    }

    /// Product; dimension-zero classes multiply via fat-point products.
    pub fn mul(&self, other: &ClassExpr, budget: &Budget) -> Result<ClassExpr> {
        match (self, other) {
            (ClassExpr::Dim0(a), ClassExpr::Dim0(b)) => {
                let mut terms = Vec::new();
                for x in a {
                    for y in b {
                        let prod = x.point.product(&y.point, budget)?;
                        let fingerprint = fp_fingerprint(&prod, budget)?;
                        terms.push(FatTerm {
                            coeff: x.coeff * y.coeff,
                            point: prod,
                            fingerprint,
                        });
                    }
                }
                Ok(ClassExpr::Dim0(Self::collect(terms)))
            }
            (ClassExpr::L(a), ClassExpr::L(b)) => Ok(ClassExpr::L(a.mul(b))),
            _ => Err(Error::RealizationMismatch(
                "cannot mix dimension-zero classes with 𝕃-values".into(),
            )),
        }
    }
}

/// One chart term of an open-cover computation: the motif of the |I|-fold
/// intersection X_I presented on its own affine ambient ring.
pub struct ChartTerm {
    /// |I| — how many cover sets intersect here.
    pub arity: usize,
    pub motif: Motif,
}

/// Inclusion–exclusion under counting: Σ_{∅≠I} (−1)^{|I|+1} #X_I(𝔽_q).
/// The caller supplies every nonempty intersection as its own chart term.
pub fn inclusion_exclusion_count(
    terms: &[ChartTerm],
    q: u64,
    budget: &Budget,
) -> Result<i128> {
    let mut total = 0i128;
    for term in terms {
        let c = count_motif(&term.motif, q, budget)? as i128;
        if term.arity % 2 == 1 {
            total += c;
        } else {
            total -= c;
        }
    }
    Ok(total)
}

/// Inclusion–exclusion over symbolic 𝕃-values.
pub fn inclusion_exclusion_l(terms: &[(usize, LValue)]) -> LValue {
    let mut total = LValue::zero();
    for (arity, v) in terms {
        if arity % 2 == 1 {
            total = total.add(v);
        } else {
            total = total.sub(v);
        }
    }
    total
}
