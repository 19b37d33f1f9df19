//! Gröbner kernel: Buchberger's algorithm with pair pruning, normal forms,
//! elimination, intersection, radical membership, Krull dimension, and
//! staircases.
//!
//! Key operations
//! --------------
//! * [`Ideal::groebner_basis`] — reduced Gröbner basis under any
//!   [`MonomialOrder`], cached per ideal and order; membership of every input
//!   generator is re-verified by a zero normal form before the basis is
//!   returned.
//! * [`GroebnerBasis::normal_form`] — fully reduced normal form.
//! * [`Ideal::eliminate`] — elimination via a dominant-block order.
//! * [`Ideal::intersect`] — the `t·I + (1−t)·J` construction.
//! * [`Ideal::radical_membership`] — Rabinowitsch trick.
//! * [`Ideal::krull_dim`] — maximal independent variable set modulo the
//!   leading-term ideal.
//! * [`GroebnerBasis::standard_monomials`] — the (finite) staircase and hence
//!   colengths.
//!
//! All entry points take a [`Budget`]; a run that would exceed
//! `max_gb_pairs` S-pairs aborts with [`Error::ResourceLimit`].

use std::collections::HashSet;
use std::sync::{Arc, Mutex};

use crate::polycore::{Field, Monomial, MonomialOrder, Polynomial, Ring, Scalar};
use crate::{Budget, Error, Result};

/// A finitely generated ideal of a polynomial ring.
///
/// Generators are stored as given (zero generators dropped); reduced Gröbner
/// bases are cached per term order behind a mutex, write-once, and shared by
/// clones of the ideal.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    cache: Arc<Mutex<Vec<(MonomialOrder, Arc<GroebnerBasis>)>>>,
}

impl PartialEq for Ideal {
    /// Structural equality of the generator lists (not ideal equality; use
    /// [`Ideal::equals`] for that).
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens
    }
}

impl Ideal {
    pub fn new(ring: Ring, gens: Vec<Polynomial>) -> Result<Ideal> {
        for g in &gens {
            if g.ring() != &ring {
                return Err(Error::RingMismatch("ideal generator ring".into()));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring, gens, cache: Arc::new(Mutex::new(Vec::new())) })
    }

    pub fn zero(ring: Ring) -> Ideal {
        Ideal { ring, gens: Vec::new(), cache: Arc::new(Mutex::new(Vec::new())) }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Sum `I + J` (concatenated generators).
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("ideal sum".into()));
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    /// Product `I · J` (pairwise products, deduplicated).
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("ideal product".into()));
        }
        let mut gens = Vec::new();
        let mut seen = HashSet::new();
        for a in &self.gens {
            for b in &other.gens {
                let p = a.mul_ref(b);
                if p.is_zero() {
                    continue;
                }
                let key = canonical_key(&p);
                if seen.insert(key) {
                    gens.push(p);
                }
            }
        }
        Ideal::new(self.ring.clone(), gens)
    }

    /// Power `Iⁿ`; `I⁰` is the unit ideal.
    pub fn power(&self, n: u32) -> Result<Ideal> {
        let mut acc = Ideal::new(self.ring.clone(), vec![self.ring.one()])?;
        for _ in 0..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// Reduced Gröbner basis under `order`, cached.
    pub fn groebner_basis(
        &self,
        order: &MonomialOrder,
        budget: &Budget,
    ) -> Result<Arc<GroebnerBasis>> {
        {
            let cache = self.cache.lock().unwrap();
            if let Some((_, gb)) = cache.iter().find(|(o, _)| o == order) {
                return Ok(gb.clone());
            }
        }
        let gb = Arc::new(buchberger(&self.ring, &self.gens, order, budget)?);
        // Re-verify membership of every input generator.
        for g in &self.gens {
            if !gb.normal_form(g).is_zero() {
                return Err(Error::NotCertified(
                    "input generator does not reduce to zero against its own basis".into(),
                ));
            }
        }
        let mut cache = self.cache.lock().unwrap();
        if let Some((_, existing)) = cache.iter().find(|(o, _)| o == order) {
            return Ok(existing.clone());
        }
        cache.push((order.clone(), gb.clone()));
        Ok(gb)
    }

    /// Default-order (grevlex) basis.
    pub fn gb_default(&self, budget: &Budget) -> Result<Arc<GroebnerBasis>> {
        self.groebner_basis(&MonomialOrder::GrevLex, budget)
    }

    /// Ideal membership via a zero normal form (default order).
    pub fn contains(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        Ok(self.gb_default(budget)?.normal_form(f).is_zero())
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self, budget: &Budget) -> Result<bool> {
        if self.gens.iter().any(|g| g.is_unit_constant()) {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        let gb = self.gb_default(budget)?;
        Ok(gb.elems().iter().any(|g| g.is_unit_constant()))
    }

    /// Radical membership `f ∈ √I` by the Rabinowitsch trick: adjoin a fresh
    /// variable `t` and test whether `I + (1 − t·f)` is the unit ideal.
    pub fn radical_membership(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch("radical membership".into()));
        }
        // Fast sufficient test: some small power already lies in the ideal.
        let gb = self.gb_default(budget)?;
        if gb.is_unit() {
            return Ok(true);
        }
        let mut p = gb.normal_form(f);
        for _ in 0..8 {
            if p.is_zero() {
                return Ok(true);
            }
            p = gb.normal_form(&p.mul_ref(f));
        }
        // Exact fallback: 1 ∈ I + (1 − t·f). Seeding with the reduced basis
        // instead of the raw generators keeps the computation small.
        let (ext, fresh) = self.ring.extend(&["t".to_string()])?;
        let t = ext.var(ext.var_index(&fresh[0]).unwrap());
        let mut gens: Vec<Polynomial> =
            gb.elems().iter().map(|g| g.embed(&ext)).collect::<Result<_>>()?;
        gens.push(ext.one().sub_ref(&t.mul_ref(&f.embed(&ext)?)));
        Ideal::new(ext, gens)?.is_unit(budget)
    }

    /// Eliminate the given variables: generators of `I ∩ k[remaining vars]`,
    /// still expressed in the ambient ring.
    pub fn eliminate(&self, drop: &[u32], budget: &Budget) -> Result<Ideal> {
        if drop.is_empty() {
            return Ok(self.clone());
        }
        let order = MonomialOrder::elimination_grevlex(drop.to_vec());
        let gb = self.groebner_basis(&order, budget)?;
        let dropped: HashSet<u32> = drop.iter().copied().collect();
        let kept: Vec<Polynomial> = gb
            .elems()
            .iter()
            .filter(|g| g.support_vars().iter().all(|v| !dropped.contains(v)))
            .cloned()
            .collect();
        Ideal::new(self.ring.clone(), kept)
    }

    /// Intersection `I ∩ J` via `t·I + (1−t)·J` and elimination of `t`.
    pub fn intersect(&self, other: &Ideal, budget: &Budget) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("ideal intersection".into()));
        }
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ok(Ideal::zero(self.ring.clone()));
        }
        let (ext, fresh) = self.ring.extend(&["t".to_string()])?;
        let tv = ext.var_index(&fresh[0]).unwrap();
        let t = ext.var(tv);
        let one_minus_t = ext.one().sub_ref(&t);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(t.mul_ref(&g.embed(&ext)?));
        }
        for g in &other.gens {
            gens.push(one_minus_t.mul_ref(&g.embed(&ext)?));
        }
        let joint = Ideal::new(ext.clone(), gens)?;
        let elim = joint.eliminate(&[tv], budget)?;
        // Map the generators back into the original ring.
        let gens = elim
            .gens()
            .iter()
            .map(|g| g.embed(&self.ring))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(self.ring.clone(), gens)
    }

    /// Ideal equality via mutual reduced-basis membership.
    pub fn equals(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("ideal comparison".into()));
        }
        for g in &other.gens {
            if !self.contains(g, budget)? {
                return Ok(false);
            }
        }
        for g in &self.gens {
            if !other.contains(g, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Krull dimension of the quotient ring: the size of a maximal variable
    /// set independent modulo the leading-term ideal. The unit ideal gives −1;
    /// the zero ideal gives the number of variables.
    pub fn krull_dim(&self, budget: &Budget) -> Result<i64> {
        let n = self.ring.num_vars() as usize;
        if self.is_zero_ideal() {
            return Ok(n as i64);
        }
        let gb = self.gb_default(budget)?;
        if gb.is_unit() {
            return Ok(-1);
        }
        let mut supports: Vec<Vec<u32>> = gb
            .leading_monomials()
            .iter()
            .map(|m| m.support().collect())
            .collect();
        // Only minimal supports constrain independence.
        supports.sort_by_key(|s| s.len());
        let mut minimal: Vec<Vec<u32>> = Vec::new();
        'outer: for s in supports {
            for t in &minimal {
                if t.iter().all(|v| s.contains(v)) {
                    continue 'outer;
                }
            }
            minimal.push(s);
        }
        let best = max_independent_set(n as u32, &minimal);
        Ok(best as i64)
    }
}

/// Canonical hashable key for a polynomial up to unit scalar.
fn canonical_key(p: &Polynomial) -> Vec<(Monomial, Scalar)> {
    let n = p.normalize(&MonomialOrder::GrevLex);
    n.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Largest subset `S` of variables such that no support set is contained in
/// `S` (so the corresponding coordinate subring injects into the quotient).
fn max_independent_set(n: u32, supports: &[Vec<u32>]) -> usize {
    // A support that is empty means the unit ideal; callers exclude that.
    fn recurse(
        v: u32,
        n: u32,
        chosen: &mut Vec<u32>,
        supports: &[Vec<u32>],
        best: &mut usize,
    ) {
        if chosen.len() + (n - v) as usize <= *best {
            return; // cannot beat the current best
        }
        if v == n {
            *best = (*best).max(chosen.len());
            return;
        }
        // Try including v.
        chosen.push(v);
        let ok = supports
            .iter()
            .all(|s| !s.iter().all(|w| chosen.contains(w)));
        if ok {
            recurse(v + 1, n, chosen, supports, best);
        }
        chosen.pop();
        // And excluding it.
        recurse(v + 1, n, chosen, supports, best);
    }
    let mut best = 0;
    recurse(0, n, &mut Vec::new(), supports, &mut best);
    best
}

/// A reduced Gröbner basis: monic/primitive, pairwise tail-reduced elements
/// sorted ascending by leading monomial.
#[derive(Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    elems: Vec<Polynomial>,
    /// Term vectors of `elems`, ascending in `order` (leading term last) —
    /// the representation the reducer consumes.
    vecs: Vec<TermVec>,
    lts: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elems(&self) -> &[Polynomial] {
        &self.elems
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.lts
    }

    pub fn is_unit(&self) -> bool {
        self.elems.len() == 1 && self.elems[0].is_one()
    }

    fn find_divisor(&self, m: &Monomial) -> Option<usize> {
        self.lts.iter().position(|lt| lt.divides(m))
    }

    /// Fully reduced normal form: no term of the result is divisible by any
    /// leading monomial of the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let work = if f.ring() == &self.ring {
            f.clone()
        } else {
            f.embed(&self.ring).expect("normal form ring mismatch")
        };
        let v = poly_to_vec(&work, &self.order);
        let rem = reduce_vec(v, &self.vecs, &self.lts, &self.order, self.ring.field());
        vec_to_poly(&self.ring, rem)
    }

    /// For each variable, the least exponent of a pure power among the
    /// leading monomials (`None` when no pure power occurs). A variable can
    /// only lie in the radical when its entry is `Some`.
    pub fn pure_power_bounds(&self) -> Vec<Option<u32>> {
        let n = self.ring.num_vars();
        let mut bound = vec![None::<u32>; n as usize];
        for lt in &self.lts {
            let mut support = lt.support();
            if let (Some(v), None) = (support.next(), support.next()) {
                let e = lt.exp(v);
                let b = &mut bound[v as usize];
                *b = Some(b.map_or(e, |old| old.min(e)));
            }
        }
        bound
    }

    /// The staircase: monomials outside the leading-term ideal, sorted
    /// ascending lex. Errors with [`Error::NotFiniteLength`] when infinite.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>> {
        if self.is_unit() {
            return Ok(Vec::new());
        }
        // Finite iff every variable has a pure power among the leading terms.
        let n = self.ring.num_vars();
        let bounds: Vec<u32> = self
            .pure_power_bounds()
            .into_iter()
            .collect::<Option<Vec<u32>>>()
            .ok_or(Error::NotFiniteLength)?;
        let mut out = Vec::new();
        let mut exps = vec![0u32; n as usize];
        enumerate_box(&bounds, 0, &mut exps, &mut |e| {
            let m = Monomial::from_pairs(
                e.iter().enumerate().map(|(i, &x)| (i as u32, x)),
            );
            if self.find_divisor(&m).is_none() {
                out.push(m);
            }
        });
        out.sort_by(|a, b| MonomialOrder::Lex.cmp_mono(a, b));
        Ok(out)
    }

    /// Colength (vector-space dimension of the quotient).
    pub fn colength(&self) -> Result<usize> {
        Ok(self.standard_monomials()?.len())
    }
}

fn enumerate_box(bounds: &[u32], i: usize, exps: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if i == bounds.len() {
        f(exps);
        return;
    }
    for e in 0..bounds[i] {
        exps[i] = e;
        enumerate_box(bounds, i + 1, exps, f);
    }
    exps[i] = 0;
}

// ---------------------------------------------------------------------------
// Reduction engine
//
// During basis computation polynomials are kept as term vectors sorted
// ascending in the active order (leading term last, popped in O(1)), and the
// work polynomial of a reduction lives in a geobucket so that each step costs
// O(size of the reducer + log of the work size) instead of a full rescan.
// ---------------------------------------------------------------------------

type TermVec = Vec<(Monomial, Scalar)>;

fn poly_to_vec(p: &Polynomial, order: &MonomialOrder) -> TermVec {
    let mut v: TermVec = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    v.sort_unstable_by(|(a, _), (b, _)| order.cmp_mono(a, b));
    v
}

fn vec_to_poly(ring: &Ring, v: TermVec) -> Polynomial {
    let mut terms = std::collections::BTreeMap::new();
    for (m, c) in v {
        terms.insert(m, c);
    }
    Polynomial::from_terms(ring.clone(), terms)
}

/// `c · m · f`, preserving sortedness (monomial orders respect multiplication).
fn shift_scale(f: &[(Monomial, Scalar)], m: &Monomial, c: &Scalar, field: &Field) -> TermVec {
    f.iter()
        .map(|(fm, fc)| (fm.mul(m), field.mul(fc, c)))
        .collect()
}

/// Merge two ascending vectors, combining equal monomials, dropping zeros.
fn merge_add(a: TermVec, b: TermVec, order: &MonomialOrder, field: &Field) -> TermVec {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ai = a.into_iter().peekable();
    let mut bi = b.into_iter().peekable();
    loop {
        match (ai.peek(), bi.peek()) {
            (Some((am, _)), Some((bm, _))) => match order.cmp_mono(am, bm) {
                std::cmp::Ordering::Less => out.push(ai.next().unwrap()),
                std::cmp::Ordering::Greater => out.push(bi.next().unwrap()),
                std::cmp::Ordering::Equal => {
                    let (m, ac) = ai.next().unwrap();
                    let (_, bc) = bi.next().unwrap();
                    let c = field.add(&ac, &bc);
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            },
            (Some(_), None) => {
                out.extend(ai);
                break;
            }
            (None, Some(_)) => {
                out.extend(bi);
                break;
            }
            (None, None) => break,
        }
    }
    out
}

/// A geobucket: bucket `i` holds an ascending vector of at most `4^{i+1}`
/// terms. Additions merge into the matching level and carry upward; the
/// leading term is the maximum over bucket tails.
struct GeoBucket<'a> {
    order: &'a MonomialOrder,
    field: Field,
    buckets: Vec<TermVec>,
}

impl<'a> GeoBucket<'a> {
    fn new(order: &'a MonomialOrder, field: Field) -> GeoBucket<'a> {
        GeoBucket { order, field, buckets: Vec::new() }
    }

    fn from_vec(v: TermVec, order: &'a MonomialOrder, field: Field) -> GeoBucket<'a> {
        let mut g = GeoBucket::new(order, field);
        g.add(v);
        g
    }

    fn add(&mut self, v: TermVec) {
        if v.is_empty() {
            return;
        }
        let mut level = 0;
        let mut cap = 4usize;
        while cap < v.len() {
            level += 1;
            cap *= 4;
        }
        let mut cur = v;
        loop {
            if self.buckets.len() <= level {
                self.buckets.resize(level + 1, Vec::new());
            }
            let existing = std::mem::take(&mut self.buckets[level]);
            cur = merge_add(existing, cur, self.order, &self.field);
            if cur.len() <= cap {
                self.buckets[level] = cur;
                return;
            }
            level += 1;
            cap *= 4;
        }
    }

    /// Pop the leading (monomial, coefficient); combines heads across buckets
    /// and skips cancellations.
    fn extract_leading(&mut self) -> Option<(Monomial, Scalar)> {
        loop {
            let mut best: Option<usize> = None;
            for (i, b) in self.buckets.iter().enumerate() {
                if let Some((m, _)) = b.last() {
                    match best {
                        None => best = Some(i),
                        Some(j) => {
                            let (bm, _) = self.buckets[j].last().unwrap();
                            if self.order.cmp_mono(m, bm) == std::cmp::Ordering::Greater {
                                best = Some(i);
                            }
                        }
                    }
                }
            }
            let first = best?;
            let (m, mut c) = self.buckets[first].pop().unwrap();
            for b in self.buckets.iter_mut() {
                while let Some((bm, _)) = b.last() {
                    if *bm == m {
                        let (_, bc) = b.pop().unwrap();
                        c = self.field.add(&c, &bc);
                    } else {
                        break;
                    }
                }
            }
            if !c.is_zero() {
                return Some((m, c));
            }
        }
    }
}

/// Fully reduce `f` by `reducers` (ascending vectors, leading monomials in
/// `lts`): the remainder has no term divisible by any leading monomial.
fn reduce_vec(
    f: TermVec,
    reducers: &[TermVec],
    lts: &[Monomial],
    order: &MonomialOrder,
    field: &Field,
) -> TermVec {
    let mut bucket = GeoBucket::from_vec(f, order, *field);
    let mut rem: TermVec = Vec::new();
    while let Some((lm, lc)) = bucket.extract_leading() {
        match lts.iter().position(|lt| lt.divides(&lm)) {
            Some(i) => {
                let g = &reducers[i];
                let (gm, gc) = g.last().expect("nonzero reducer");
                let q = gm.try_div(&lm).expect("divisor");
                let factor = field.neg(&field.div(&lc, gc).expect("leading coefficient"));
                // The popped head cancels the reducer's head: add the scaled
                // tail only.
                bucket.add(shift_scale(&g[..g.len() - 1], &q, &factor, field));
            }
            None => rem.push((lm, lc)),
        }
    }
    rem.reverse();
    rem
}

/// S-polynomial as an ascending vector; the cancelling heads are omitted.
fn s_poly_vec(
    f: &TermVec,
    g: &TermVec,
    lcm: &Monomial,
    order: &MonomialOrder,
    field: &Field,
) -> TermVec {
    let (fm, fc) = f.last().expect("nonzero");
    let (gm, gc) = g.last().expect("nonzero");
    let fq = fm.try_div(lcm).expect("lcm");
    let gq = gm.try_div(lcm).expect("lcm");
    let a = shift_scale(&f[..f.len() - 1], &fq, &field.inv(fc).expect("lead"), field);
    let binv = field.neg(&field.inv(gc).expect("lead"));
    let b = shift_scale(&g[..g.len() - 1], &gq, &binv, field);
    merge_add(a, b, order, field)
}

/// Scale to the canonical representative: monic over a finite field,
/// integer-primitive with positive leading coefficient over the rationals.
fn normalize_vec(v: &mut TermVec, field: &Field) {
    if v.is_empty() {
        return;
    }
    match field.characteristic() {
        0 => {
            use num_bigint::BigInt;
            use num_integer::Integer;
            use num_traits::{One, Signed, Zero};
            let mut den_lcm = BigInt::one();
            let mut num_gcd = BigInt::zero();
            for (_, c) in v.iter() {
                let r = c.as_rational().expect("rational field");
                den_lcm = den_lcm.lcm(r.denom());
                num_gcd = num_gcd.gcd(r.numer());
            }
            let lr = v.last().unwrap().1.as_rational().expect("rational field");
            let sign = if lr.is_negative() { -BigInt::one() } else { BigInt::one() };
            let factor =
                Scalar::Rat(num_rational::BigRational::new(den_lcm * sign, num_gcd.abs()));
            for (_, c) in v.iter_mut() {
                *c = field.mul(c, &factor);
            }
        }
        _ => {
            let inv = field.inv(&v.last().unwrap().1).expect("nonzero lead");
            for (_, c) in v.iter_mut() {
                *c = field.mul(c, &inv);
            }
        }
    }
}

fn vec_total_degree(v: &TermVec) -> u32 {
    v.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Buchberger's algorithm with the standard pair-pruning criteria
/// (coprime leading terms; divisor pruning among new pairs; back pruning of
/// old pairs through the new leading term) and sugar-based selection.
fn buchberger(
    ring: &Ring,
    gens: &[Polynomial],
    order: &MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let field = *ring.field();
    let mut basis: Vec<TermVec> = Vec::new();
    let mut lts: Vec<Monomial> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let add_element = |h: TermVec,
                           sugar: u32,
                           basis: &mut Vec<TermVec>,
                           lts: &mut Vec<Monomial>,
                           sugars: &mut Vec<u32>,
                           pairs: &mut Vec<Pair>| {
        let t = basis.len();
        let ht = h.last().expect("nonzero").0.clone();

        // Candidate new pairs, pruned by the divisor criterion: drop (i,t)
        // when another new pair's lcm properly divides its lcm, or equals it
        // with a smaller index; then drop coprime pairs.
        let mut cand: Vec<Pair> = (0..t)
            .map(|i| {
                let lcm = lts[i].lcm(&ht);
                let sugar = (sugars[i] + lcm.total_degree() - lts[i].total_degree())
                    .max(sugar + lcm.total_degree() - ht.total_degree());
                Pair { i, j: t, lcm, sugar }
            })
            .collect();
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cand[b].lcm.divides(&cand[a].lcm)
                    && (cand[b].lcm != cand[a].lcm || b < a)
                {
                    keep[a] = false;
                    break;
                }
            }
        }
        // Back-prune old pairs through the new leading term.
        pairs.retain(|p| {
            !(ht.divides(&p.lcm)
                && lts[p.i].lcm(&ht) != p.lcm
                && lts[p.j].lcm(&ht) != p.lcm)
        });
        for (k, p) in cand.drain(..).enumerate() {
            if keep[k] && !lts[p.i].coprime(&ht) {
                pairs.push(p);
            }
        }
        basis.push(h);
        lts.push(ht);
        sugars.push(sugar);
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let mut v = poly_to_vec(g, order);
        normalize_vec(&mut v, &field);
        let sugar = vec_total_degree(&v);
        add_element(v, sugar, &mut basis, &mut lts, &mut sugars, &mut pairs);
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        processed += 1;
        if processed > budget.max_gb_pairs {
            return Err(Error::ResourceLimit(format!(
                "Gröbner pair budget of {} exceeded",
                budget.max_gb_pairs
            )));
        }
        // Select the pair with minimal (sugar, lcm, i, j).
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            let ord = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| order.cmp_mono(&a.lcm, &b.lcm))
                .then(a.i.cmp(&b.i))
                .then(a.j.cmp(&b.j));
            if ord == std::cmp::Ordering::Less {
                best = k;
            }
        }
        let pair = pairs.swap_remove(best);
        let s = s_poly_vec(&basis[pair.i], &basis[pair.j], &pair.lcm, order, &field);
        let mut reduced = reduce_vec(s, &basis, &lts, order, &field);
        if reduced.is_empty() {
            continue;
        }
        normalize_vec(&mut reduced, &field);
        let sugar = pair.sugar.max(vec_total_degree(&reduced));
        add_element(reduced, sugar, &mut basis, &mut lts, &mut sugars, &mut pairs);
    }

    // Minimalize: drop elements whose leading term is divisible by another's.
    let mut order_idx: Vec<usize> = (0..basis.len()).collect();
    order_idx.sort_by(|&a, &b| order.cmp_mono(&lts[a], &lts[b]));
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order_idx {
        if !kept.iter().any(|&k| lts[k].divides(&lts[i])) {
            kept.push(i);
        }
    }
    // Tail-reduce each kept element against the others.
    let mut reduced_basis: Vec<TermVec> = Vec::new();
    for (pos, &i) in kept.iter().enumerate() {
        let others: Vec<TermVec> = kept
            .iter()
            .enumerate()
            .filter(|&(q, _)| q != pos)
            .map(|(_, &k)| basis[k].clone())
            .collect();
        let other_lts: Vec<Monomial> = others
            .iter()
            .map(|p| p.last().unwrap().0.clone())
            .collect();
        let mut r = reduce_vec(basis[i].clone(), &others, &other_lts, order, &field);
        debug_assert!(!r.is_empty(), "minimal element reduced to zero");
        normalize_vec(&mut r, &field);
        reduced_basis.push(r);
    }
    reduced_basis.sort_by(|a, b| order.cmp_mono(&a.last().unwrap().0, &b.last().unwrap().0));
    let lts: Vec<Monomial> =
        reduced_basis.iter().map(|p| p.last().unwrap().0.clone()).collect();
    let elems: Vec<Polynomial> =
        reduced_basis.iter().map(|v| vec_to_poly(ring, v.clone())).collect();
    Ok(GroebnerBasis {
        ring: ring.clone(),
        order: order.clone(),
        elems,
        vecs: reduced_basis,
        lts,
    })
}

/// Hilbert-style degree census of a finite staircase: entry `d` counts the
/// standard monomials of total degree `d`.
pub fn degree_census(staircase: &[Monomial]) -> Vec<usize> {
    let max = staircase.iter().map(Monomial::total_degree).max().unwrap_or(0);
    let mut out = vec![0usize; max as usize + 1];
    for m in staircase {
        out[m.total_degree() as usize] += 1;
    }
    if staircase.is_empty() {
        out.clear();
    }
    out
}
