//! Sparse monomials and term orders.

use std::cmp::Ordering;

/// A monomial as a sparse exponent vector: sorted `(variable, exponent)`
/// pairs with strictly positive exponents.
///
/// The derived `Ord` is the structural order on the pair vector. It is a
/// deterministic total order suitable for map keys but NOT a monomial order;
/// term orders live in [`MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    pairs: Vec<(u32, u32)>,
}

impl Monomial {
    /// The empty product 1.
    pub fn one() -> Self {
        Monomial { pairs: Vec::new() }
    }

    /// The single variable `v`.
    pub fn var(v: u32) -> Self {
        Monomial { pairs: vec![(v, 1)] }
    }

    /// Build from (variable, exponent) pairs; zero exponents are dropped,
    /// repeated variables are combined.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_by_key(|&(i, _)| i);
        v.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 += later.1;
                true
            } else {
                false
            }
        });
        Monomial { pairs: v }
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.pairs.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent of variable `v` (0 when absent).
    pub fn exp(&self, v: u32) -> u32 {
        match self.pairs.binary_search_by_key(&v, |&(i, _)| i) {
            Ok(k) => self.pairs[k].1,
            Err(_) => 0,
        }
    }

    /// Iterate `(variable, exponent)` pairs, ascending in variable index.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u32, u32)> + '_ {
        self.pairs.iter().copied()
    }

    /// The set of variables occurring (ascending).
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().map(|&(i, _)| i)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.iter().chain(other.iter()))
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial { pairs: self.pairs.iter().map(|&(i, e)| (i, e * n)).collect() }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.pairs.iter().all(|&(i, e)| other.exp(i) >= e)
    }

    /// `other / self` when `self` divides `other`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial::from_pairs(
            other.iter().map(|(i, e)| (i, e - self.exp(i))),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let vars: std::collections::BTreeSet<u32> =
            self.support().chain(other.support()).collect();
        Monomial::from_pairs(vars.into_iter().map(|i| (i, self.exp(i).max(other.exp(i)))))
    }

    /// True when the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        let mut a = self.pairs.iter().peekable();
        let mut b = other.pairs.iter().peekable();
        while let (Some(&&(i, _)), Some(&&(j, _))) = (a.peek(), b.peek()) {
            match i.cmp(&j) {
                Ordering::Less => {
                    a.next();
                }
                Ordering::Greater => {
                    b.next();
                }
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Restrict to the variables accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(u32) -> bool) -> Monomial {
        Monomial { pairs: self.pairs.iter().copied().filter(|&(i, _)| keep(i)).collect() }
    }

    /// Re-index variables through `map`; `map` must be injective on the support.
    pub fn map_vars(&self, map: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(self.iter().map(|(i, e)| (map(i), e)))
    }
}

/// A term order on monomials of a fixed ring.
///
/// * `Lex`: variable 0 is the largest; compare exponent vectors
///   lexicographically.
/// * `GrevLex`: total degree first, ties broken by the reverse lexicographic
///   rule (smaller exponent on the last differing variable wins).
/// * `Block`: monomials are compared on a dominant variable block first, then
///   on the rest — the standard elimination order when the dominant block is
///   the set of variables to eliminate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block {
        /// Sorted dominant variable set.
        first: Vec<u32>,
        top: Box<MonomialOrder>,
        rest: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Elimination order with dominant block `first` (lex inside both blocks).
    pub fn elimination(mut first: Vec<u32>) -> MonomialOrder {
        first.sort_unstable();
        first.dedup();
        MonomialOrder::Block {
            first,
            top: Box::new(MonomialOrder::Lex),
            rest: Box::new(MonomialOrder::Lex),
        }
    }

    /// Elimination order with grevlex on the non-dominant block.
    pub fn elimination_grevlex(mut first: Vec<u32>) -> MonomialOrder {
        first.sort_unstable();
        first.dedup();
        MonomialOrder::Block {
            first,
            top: Box::new(MonomialOrder::Lex),
            rest: Box::new(MonomialOrder::GrevLex),
        }
    }

    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => cmp_lex(a, b),
            MonomialOrder::GrevLex => cmp_grevlex(a, b),
            MonomialOrder::Block { first, top, rest } => {
                let in_first = |i: u32| first.binary_search(&i).is_ok();
                let (a1, b1) = (a.restrict(in_first), b.restrict(in_first));
                match top.cmp_mono(&a1, &b1) {
                    Ordering::Equal => {
                        let (a2, b2) = (a.restrict(|i| !in_first(i)), b.restrict(|i| !in_first(i)));
                        rest.cmp_mono(&a2, &b2)
                    }
                    ord => ord,
                }
            }
        }
    }
}

fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
    // First variable (lowest index) where the exponents differ decides;
    // the larger exponent gives the larger monomial.
    let mut x = a.iter().peekable();
    let mut y = b.iter().peekable();
    loop {
        match (x.peek().copied(), y.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((i, e)), Some((j, f))) => match i.cmp(&j) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if e != f {
                        return e.cmp(&f);
                    }
                    x.next();
                    y.next();
                }
            },
        }
    }
}

fn cmp_grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.total_degree().cmp(&b.total_degree()) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Reverse scan: last variable where exponents differ; the monomial with
    // the SMALLER exponent there is the larger one.
    let mut x = a.iter().rev().peekable();
    let mut y = b.iter().rev().peekable();
    loop {
        match (x.peek().copied(), y.peek().copied()) {
            (None, None) => return Ordering::Equal,
            // Extra trailing variable means a positive exponent high up: smaller.
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some((i, e)), Some((j, f))) => match i.cmp(&j) {
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
                Ordering::Equal => {
                    if e != f {
                        return f.cmp(&e);
                    }
                    x.next();
                    y.next();
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn construction_and_degree() {
        let xy2 = m(&[(0, 1), (1, 2)]);
        assert_eq!(xy2.total_degree(), 3);
        assert_eq!(xy2.exp(1), 2);
        assert_eq!(xy2.exp(5), 0);
        assert!(m(&[(0, 0)]).is_one());
        assert_eq!(m(&[(1, 1), (0, 2), (1, 1)]), m(&[(0, 2), (1, 2)]));
    }

    #[test]
    fn divisibility() {
        let x2y = m(&[(0, 2), (1, 1)]);
        let xy = m(&[(0, 1), (1, 1)]);
        assert!(xy.divides(&x2y));
        assert!(!x2y.divides(&xy));
        assert_eq!(xy.try_div(&x2y), Some(m(&[(0, 1)])));
        assert_eq!(x2y.try_div(&xy), None);
        assert_eq!(xy.lcm(&m(&[(1, 3)])), m(&[(0, 1), (1, 3)]));
        assert!(m(&[(0, 2)]).coprime(&m(&[(1, 5)])));
        assert!(!m(&[(0, 2)]).coprime(&m(&[(0, 1), (1, 5)])));
    }

    /* Order oracles, hand-checked in k[x, y, z] with x > y > z:
       lex:      x > y^2,   x*z > y^5,   x^2 > x*y
       grevlex:  y^2 > x (degree), x^2*y > x*y^2, x*z < y^2 (same degree 2:
                 last differing variable is z, x*z has the larger exponent
                 there, so x*z is smaller). */
    #[test]
    fn lex_oracle() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp_mono(&m(&[(0, 1)]), &m(&[(1, 2)])), Ordering::Greater);
        assert_eq!(
            o.cmp_mono(&m(&[(0, 1), (2, 1)]), &m(&[(1, 5)])),
            Ordering::Greater
        );
        assert_eq!(
            o.cmp_mono(&m(&[(0, 2)]), &m(&[(0, 1), (1, 1)])),
            Ordering::Greater
        );
        assert_eq!(o.cmp_mono(&Monomial::one(), &m(&[(2, 1)])), Ordering::Less);
    }

    #[test]
    fn grevlex_oracle() {
        let o = MonomialOrder::GrevLex;
        assert_eq!(o.cmp_mono(&m(&[(1, 2)]), &m(&[(0, 1)])), Ordering::Greater);
        assert_eq!(
            o.cmp_mono(&m(&[(0, 2), (1, 1)]), &m(&[(0, 1), (1, 2)])),
            Ordering::Greater
        );
        assert_eq!(
            o.cmp_mono(&m(&[(0, 1), (2, 1)]), &m(&[(1, 2)])),
            Ordering::Less
        );
        assert_eq!(o.cmp_mono(&Monomial::one(), &m(&[(0, 1)])), Ordering::Less);
    }

    #[test]
    fn block_elimination_order() {
        // Eliminate variable 0: any monomial containing it dominates any that
        // does not.
        let o = MonomialOrder::elimination(vec![0]);
        assert_eq!(
            o.cmp_mono(&m(&[(0, 1)]), &m(&[(1, 9), (2, 9)])),
            Ordering::Greater
        );
        assert_eq!(
            o.cmp_mono(&m(&[(1, 1)]), &m(&[(2, 2)])),
            MonomialOrder::Lex.cmp_mono(&m(&[(1, 1)]), &m(&[(2, 2)]))
        );
    }

    #[test]
    fn orders_are_total_and_respect_multiplication() {
        let ms = [
            Monomial::one(),
            m(&[(0, 1)]),
            m(&[(1, 1)]),
            m(&[(0, 1), (1, 1)]),
            m(&[(0, 2)]),
            m(&[(1, 3)]),
            m(&[(2, 1)]),
        ];
        for o in [MonomialOrder::Lex, MonomialOrder::GrevLex] {
            for a in &ms {
                for b in &ms {
                    let c = o.cmp_mono(a, b);
                    assert_eq!(c.reverse(), o.cmp_mono(b, a));
                    if !a.is_one() || !b.is_one() {
                        // 1 is minimal; multiplication is monotone.
                        for t in &ms {
                            assert_eq!(c, o.cmp_mono(&a.mul(t), &b.mul(t)));
                        }
                    }
                }
                if !a.is_one() {
                    assert_eq!(o.cmp_mono(a, &Monomial::one()), Ordering::Greater);
                }
            }
        }
    }
}
