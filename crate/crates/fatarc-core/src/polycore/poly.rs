//! Polynomial rings and sparse polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::{Field, Monomial, MonomialOrder, Scalar};
use crate::{Error, Result};

#[derive(Debug)]
struct RingInner {
    field: Field,
    vars: Vec<String>,
    index: HashMap<String, u32>,
}

/// A named polynomial ring `k[x_1, …, x_n]`. Cheap to clone; equality is by
/// content with a pointer fast path, so rings built independently with the
/// same field and variable names are interchangeable.
#[derive(Clone, Debug)]
pub struct Ring {
    inner: Arc<RingInner>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field && self.inner.vars == other.inner.vars)
    }
}
impl Eq for Ring {}

impl Ring {
    /// Build a ring; names must be distinct and non-empty.
    pub fn new(field: Field, vars: Vec<String>) -> Result<Ring> {
        let mut index = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidVariable(v.clone()));
            }
            if index.insert(v.clone(), i as u32).is_some() {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        Ok(Ring { inner: Arc::new(RingInner { field, vars, index }) })
    }

    /// Convenience constructor from `&str` names.
    pub fn with_vars(field: Field, vars: &[&str]) -> Result<Ring> {
        Ring::new(field, vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    pub fn num_vars(&self) -> u32 {
        self.inner.vars.len() as u32
    }

    pub fn var_name(&self, i: u32) -> &str {
        &self.inner.vars[i as usize]
    }

    pub fn var_names(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn var_index(&self, name: &str) -> Option<u32> {
        self.inner.index.get(name).copied()
    }

    /// The zero polynomial.
    pub fn zero(&self) -> Polynomial {
        Polynomial { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(self.inner.field.one())
    }

    pub fn constant(&self, c: Scalar) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { ring: self.clone(), terms }
    }

    pub fn constant_i64(&self, c: i64) -> Polynomial {
        self.constant(self.inner.field.from_i64(c))
    }

    /// The variable `i` as a polynomial.
    pub fn var(&self, i: u32) -> Polynomial {
        assert!(i < self.num_vars(), "variable index out of range");
        self.monomial(Monomial::var(i))
    }

    pub fn monomial(&self, m: Monomial) -> Polynomial {
        let mut terms = BTreeMap::new();
        terms.insert(m, self.inner.field.one());
        Polynomial { ring: self.clone(), terms }
    }

    /// Extend this ring by fresh variables appended at the end; names that
    /// clash with existing ones get `_2`, `_3`, … suffixes.
    pub fn extend(&self, fresh: &[String]) -> Result<(Ring, Vec<String>)> {
        let mut vars = self.inner.vars.clone();
        let mut chosen = Vec::new();
        for name in fresh {
            let mut candidate = name.clone();
            let mut k = 1u32;
            while vars.contains(&candidate) || chosen.contains(&candidate) {
                k += 1;
                candidate = format!("{name}_{k}");
            }
            chosen.push(candidate.clone());
            vars.push(candidate);
        }
        Ok((Ring::new(self.inner.field, vars)?, chosen))
    }
}

/// A sparse multivariate polynomial over its [`Ring`].
///
/// Terms are kept in a `BTreeMap` keyed by the structural monomial order, so
/// iteration (hence hashing, printing, and equality) is deterministic. No
/// zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub(crate) fn from_terms(ring: Ring, terms: BTreeMap<Monomial, Scalar>) -> Polynomial {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Polynomial { ring, terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(m, c)| m.is_one() && c.is_one()) == Some(true)
    }

    /// True when the polynomial is a nonzero constant.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one()
    }

    /// True when the polynomial is a single term.
    pub fn is_term(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Iterate terms in the structural key order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.field().zero())
    }

    /// The constant coefficient.
    pub fn constant_coeff(&self) -> Scalar {
        self.coeff(&Monomial::one())
    }

    /// Leading (monomial, coefficient) under `order`; `None` for zero.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp_mono(a, b))
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self
            .terms
            .keys()
            .flat_map(|m| m.support().collect::<Vec<_>>())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "[{}] vs [{}]",
                self.ring.var_names().join(", "),
                other.ring.var_names().join(", ")
            )))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_ref(other))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.sub_ref(other))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_ref(other))
    }

    /// Unchecked addition: panics on ring mismatch (internal use).
    pub fn add_ref(&self, other: &Polynomial) -> Polynomial {
        assert!(self.ring == other.ring, "ring mismatch");
        let field = *self.ring.field();
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(acc) => {
                    *acc = field.add(acc, c);
                    if acc.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn sub_ref(&self, other: &Polynomial) -> Polynomial {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Polynomial {
        let field = *self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Polynomial) -> Polynomial {
        assert!(self.ring == other.ring, "ring mismatch");
        let field = *self.ring.field();
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = field.mul(c1, c2);
                match terms.get_mut(&m) {
                    Some(acc) => {
                        *acc = field.add(acc, &c);
                        if acc.is_zero() {
                            terms.remove(&m);
                        }
                    }
                    None => {
                        if !c.is_zero() {
                            terms.insert(m, c);
                        }
                    }
                }
            }
        }
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Multiply by `coeff · mono` in place semantics (returns a new value).
    pub fn mul_term(&self, mono: &Monomial, coeff: &Scalar) -> Polynomial {
        let field = *self.ring.field();
        if coeff.is_zero() {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), field.mul(c, coeff)))
                .collect(),
        }
    }

    pub fn scale(&self, coeff: &Scalar) -> Polynomial {
        self.mul_term(&Monomial::one(), coeff)
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Substitute `images[i]` (a polynomial of `target`) for variable `i`.
    /// Coefficients are transported; going from ℚ to 𝔽ₚ reduces when possible.
    pub fn substitute(&self, target: &Ring, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.num_vars() as usize {
            return Err(Error::InvalidArgument(format!(
                "substitute: expected {} images, got {}",
                self.ring.num_vars(),
                images.len()
            )));
        }
        for img in images {
            if img.ring() != target {
                return Err(Error::RingMismatch("substitution image ring".into()));
            }
        }
        let tf = *target.field();
        // Cache variable powers on demand.
        let mut pow_cache: HashMap<(u32, u32), Polynomial> = HashMap::new();
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.constant(self.transport_scalar(c, &tf)?);
            for (i, e) in m.iter() {
                let key = (i, e);
                let p = match pow_cache.get(&key) {
                    Some(p) => p.clone(),
                    None => {
                        let p = images[i as usize].pow(e);
                        pow_cache.insert(key, p.clone());
                        p
                    }
                };
                term = term.mul_ref(&p);
            }
            acc = acc.add_ref(&term);
        }
        Ok(acc)
    }

    fn transport_scalar(&self, c: &Scalar, target: &Field) -> Result<Scalar> {
        if self.ring.field() == target {
            return Ok(c.clone());
        }
        match (c, target.characteristic()) {
            (Scalar::Rat(r), p) if p > 0 => target.from_rational(r),
            _ => Err(Error::CharacteristicMismatch(
                "cannot transport coefficients between these fields".into(),
            )),
        }
    }

    /// Transport into a ring containing (by name) every variable this
    /// polynomial actually uses; lifts polynomials into joint rings and
    /// restricts them back after elimination.
    pub fn embed(&self, target: &Ring) -> Result<Polynomial> {
        if self.ring == *target {
            return Ok(self.clone());
        }
        let mut map: HashMap<u32, u32> = HashMap::new();
        for v in self.support_vars() {
            let name = self.ring.var_name(v);
            let tv = target
                .var_index(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            map.insert(v, tv);
        }
        let tf = *target.field();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let m2 = m.map_vars(|i| map[&i]);
            terms.insert(m2, self.transport_scalar(c, &tf)?);
        }
        Ok(Polynomial { ring: target.clone(), terms })
    }

    /// Evaluate at constants (images given as scalars of this ring's field).
    pub fn eval_scalars(&self, values: &[Scalar]) -> Scalar {
        let field = *self.ring.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.iter() {
                t = field.mul(&t, &field.pow(&values[i as usize], e as u64));
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Divide every coefficient so the polynomial is normalized: over 𝔽ₚ the
    /// leading coefficient under `order` becomes 1; over ℚ the coefficients
    /// become coprime integers with positive leading coefficient.
    pub fn normalize(&self, order: &MonomialOrder) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let field = *self.ring.field();
        match field.characteristic() {
            0 => {
                use num_bigint::BigInt;
                use num_integer::Integer;
                use num_traits::{One, Signed, Zero};
                let mut den_lcm = BigInt::one();
                let mut num_gcd = BigInt::zero();
                for c in self.terms.values() {
                    let r = c.as_rational().expect("rational field");
                    den_lcm = den_lcm.lcm(r.denom());
                    num_gcd = num_gcd.gcd(r.numer());
                }
                let (_, lc) = self.leading_term(order).expect("nonzero");
                let lr = lc.as_rational().expect("rational field");
                let sign = if lr.is_negative() { -BigInt::one() } else { BigInt::one() };
                let factor = num_rational::BigRational::new(den_lcm * sign, num_gcd.abs());
                self.scale(&Scalar::Rat(factor))
            }
            _ => {
                let (_, lc) = self.leading_term(order).expect("nonzero");
                let inv = field.inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Render with variable names of the ring; terms sorted descending lex.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        let lex = MonomialOrder::Lex;
        terms.sort_by(|(a, _), (b, _)| lex.cmp_mono(b, a));
        let field = *self.ring.field();
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { field.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for (i, e) in m.iter() {
                let name = self.ring.var_name(i);
                if e == 1 {
                    factors.push(name.to_string());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}
