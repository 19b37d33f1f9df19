//! Fat points: Artinian local quotients supported at the origin, with a
//! certified good ordered basis.
//!
//! A fat point is presented as `k[ξ₁,…,ξ_k]/I` where the quotient is finite
//! dimensional (finite staircase) and every variable is nilpotent (so the
//! scheme is supported at the origin). Its *good ordered basis* Δ is built
//! from the presentation: a monomial `α` belongs to Δ exactly when `α` does
//! not lie in `id(α) = I + (all monomials lexicographically larger than α)`,
//! and Δ is listed in increasing lex order, starting with `α₀ = 1`.
//!
//! The construction is certified before a [`FatPoint`] is returned:
//! * `|Δ|` equals the length and the change of basis from the staircase to Δ
//!   is invertible;
//! * `α₀ = 1` and every other element lies in the maximal ideal;
//! * the tails generate a Jordan–Hölder filtration: the colength of
//!   `I + (αᵢ, …, α_{l−1})` is exactly `i` for every `i` — one-dimensional
//!   steps, which is what coefficient extraction along Δ relies on.
//!
//! Any failure is reported as [`Error::FiltrationViolated`].

use std::sync::Arc;

use crate::ideals::{GroebnerBasis, Ideal};
use crate::linalg;
use crate::polycore::{Monomial, MonomialOrder, Polynomial, Ring, Scalar};
use crate::{Budget, Error, Result};

/// A fat point with its certified good ordered basis.
#[derive(Clone, Debug)]
pub struct FatPoint {
    ring: Ring,
    ideal: Ideal,
    lex_gb: Arc<GroebnerBasis>,
    length: usize,
    staircase: Vec<Monomial>,
    basis: Vec<Monomial>,
    /// Matrix sending staircase coordinates to Δ coordinates.
    to_delta: Vec<Vec<Scalar>>,
    /// Per-variable nilpotency exponents: `ξᵥ^{n_v} ∈ I`.
    nilpotency: Vec<u32>,
}

impl FatPoint {
    /// Validate a presentation and construct the fat point with its
    /// certified basis.
    pub fn new(ideal: Ideal, budget: &Budget) -> Result<FatPoint> {
        let ring = ideal.ring().clone();
        let lex = MonomialOrder::Lex;
        let gb = ideal.groebner_basis(&lex, budget)?;
        if gb.is_unit() {
            return Err(Error::EmptyFatPoint);
        }
        let staircase = gb.standard_monomials()?; // errors when not finite
        let length = staircase.len();

        // Nilpotency of every variable: the index is at most the length.
        let mut nilpotency = Vec::new();
        for v in 0..ring.num_vars() {
            let mut found = None;
            for k in 1..=length as u32 {
                if gb.normal_form(&ring.monomial(Monomial::var(v).pow(k))).is_zero() {
                    found = Some(k);
                    break;
                }
            }
            match found {
                Some(k) => nilpotency.push(k),
                None => {
                    return Err(Error::NotSupportedAtOrigin(ring.var_name(v).to_string()))
                }
            }
        }

        // Good ordered basis: enumerate candidates inside the nilpotency box
        // and keep those outside their lex-larger ideal.
        let mut basis = Vec::new();
        let mut exps = vec![0u32; ring.num_vars() as usize];
        let mut candidates = Vec::new();
        collect_box(&nilpotency, 0, &mut exps, &mut candidates);
        for m in candidates {
            if !member_of_lex_larger(&ideal, &m, budget)? {
                basis.push(m);
            }
        }
        basis.sort_by(|a, b| MonomialOrder::Lex.cmp_mono(a, b));

        if basis.len() != length {
            return Err(Error::FiltrationViolated(format!(
                "basis has {} elements for length {}",
                basis.len(),
                length
            )));
        }
        if basis.first().map(Monomial::is_one) != Some(true) {
            return Err(Error::FiltrationViolated("first element is not 1".into()));
        }
        if basis.iter().skip(1).any(Monomial::is_one) {
            return Err(Error::FiltrationViolated(
                "a later element is not in the maximal ideal".into(),
            ));
        }

        // Change of basis: column j holds the staircase coordinates of Δⱼ.
        let field = *ring.field();
        let mut from_delta = vec![vec![field.zero(); length]; length];
        for (j, alpha) in basis.iter().enumerate() {
            let nf = gb.normal_form(&ring.monomial(alpha.clone()));
            for (m, c) in nf.terms() {
                let i = staircase
                    .binary_search_by(|s| MonomialOrder::Lex.cmp_mono(s, m))
                    .map_err(|_| {
                        Error::FiltrationViolated("normal form leaves the staircase".into())
                    })?;
                from_delta[i][j] = c.clone();
            }
        }
        let to_delta = linalg::invert(&field, &from_delta).ok_or_else(|| {
            Error::FiltrationViolated("candidate basis is linearly dependent".into())
        })?;

        // Jordan–Hölder certificate: colength of I + (αᵢ, …) equals i.
        for i in 0..=length {
            let tail: Vec<Polynomial> =
                basis[i..].iter().map(|m| ring.monomial(m.clone())).collect();
            let with_tail = ideal.sum(&Ideal::new(ring.clone(), tail)?)?;
            let colen = if i == 0 {
                0 // contains α₀ = 1
            } else {
                with_tail
                    .groebner_basis(&lex, budget)?
                    .colength()
                    .map_err(|_| Error::FiltrationViolated("tail quotient not finite".into()))?
            };
            if colen != i {
                return Err(Error::FiltrationViolated(format!(
                    "tail ideal at position {i} has colength {colen}"
                )));
            }
        }

        Ok(FatPoint {
            ring,
            ideal,
            lex_gb: gb,
            length,
            staircase,
            basis,
            to_delta,
            nilpotency,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// The lex staircase (ascending).
    pub fn staircase(&self) -> &[Monomial] {
        &self.staircase
    }

    /// The good ordered basis Δ (lex ascending, Δ₀ = 1).
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn lex_gb(&self) -> &Arc<GroebnerBasis> {
        &self.lex_gb
    }

    pub fn nilpotency(&self) -> &[u32] {
        &self.nilpotency
    }

    /// Staircase coordinates of the residue of `f`.
    pub fn staircase_coords(&self, f: &Polynomial) -> Result<Vec<Scalar>> {
        let field = *self.ring.field();
        let nf = self.lex_gb.normal_form(f);
        let mut coords = vec![field.zero(); self.length];
        for (m, c) in nf.terms() {
            let i = self
                .staircase
                .binary_search_by(|s| MonomialOrder::Lex.cmp_mono(s, m))
                .map_err(|_| Error::InvalidArgument("normal form not in staircase".into()))?;
            coords[i] = c.clone();
        }
        Ok(coords)
    }

    /// Δ coordinates of the residue of `f`.
    pub fn delta_coords(&self, f: &Polynomial) -> Result<Vec<Scalar>> {
        let field = *self.ring.field();
        Ok(linalg::mat_vec(&field, &self.to_delta, &self.staircase_coords(f)?))
    }

    /// The matrix taking staircase coordinates to Δ coordinates.
    pub fn to_delta_matrix(&self) -> &Vec<Vec<Scalar>> {
        &self.to_delta
    }

    /// Matrix of multiplication by variable `v` on the staircase basis.
    pub fn multiplication_matrix(&self, v: u32) -> Result<Vec<Vec<Scalar>>> {
        let field = *self.ring.field();
        let mut cols = Vec::with_capacity(self.length);
        for s in &self.staircase {
            let prod = self.ring.monomial(Monomial::var(v).mul(s));
            cols.push(self.staircase_coords(&prod)?);
        }
        // Transpose columns into rows.
        let mut mat = vec![vec![field.zero(); self.length]; self.length];
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                mat[i][j] = c.clone();
            }
        }
        Ok(mat)
    }

    /// Product fat point `𝔳 × 𝔴`: tensor of the coordinate rings, variables
    /// renamed on clash; the result is re-validated and re-certified.
    pub fn product(&self, other: &FatPoint, budget: &Budget) -> Result<FatPoint> {
        if self.ring.field() != other.ring.field() {
            return Err(Error::CharacteristicMismatch("fat point product".into()));
        }
        let (joint, names) = {
            let fresh: Vec<String> =
                other.ring.var_names().iter().cloned().collect();
            self.ring.extend(&fresh)?
        };
        let mut gens: Vec<Polynomial> = self
            .ideal
            .gens()
            .iter()
            .map(|g| g.embed(&joint))
            .collect::<Result<_>>()?;
        // The second factor's variables may have been renamed; substitute.
        let images: Vec<Polynomial> = names
            .iter()
            .map(|n| joint.var(joint.var_index(n).unwrap()))
            .collect();
        for g in other.ideal.gens() {
            gens.push(g.substitute(&joint, &images)?);
        }
        FatPoint::new(Ideal::new(joint, gens)?, budget)
    }
}

/// Is `m ∈ I + (monomials lexicographically larger than m)`?
///
/// The lex-larger ideal has the finite generating set
/// `x₁^{a₁}···x_{j−1}^{a_{j−1}}·x_j^{a_j+1}` for `j = 1..k`, where
/// `m = x₁^{a₁}···x_k^{a_k}`: a monomial is lex-larger than `m` exactly when
/// it is divisible by one of these.
fn member_of_lex_larger(ideal: &Ideal, m: &Monomial, budget: &Budget) -> Result<bool> {
    let ring = ideal.ring().clone();
    let mut gens = ideal.gens().to_vec();
    for j in 0..ring.num_vars() {
        let mut pairs: Vec<(u32, u32)> = (0..j).map(|i| (i, m.exp(i))).collect();
        pairs.push((j, m.exp(j) + 1));
        gens.push(ring.monomial(Monomial::from_pairs(pairs)));
    }
    let with = Ideal::new(ring.clone(), gens)?;
    let gb = with.groebner_basis(&MonomialOrder::Lex, budget)?;
    Ok(gb.normal_form(&ring.monomial(m.clone())).is_zero())
}

fn collect_box(bounds: &[u32], i: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if i == bounds.len() {
        out.push(Monomial::from_pairs(
            exps.iter().enumerate().map(|(v, &e)| (v as u32, e)),
        ));
        return;
    }
    for e in 0..bounds[i] {
        exps[i] = e;
        collect_box(bounds, i + 1, exps, out);
    }
    exps[i] = 0;
}

/// The `n`-th jet of the germ of `V(ideal)` at `point`: translate the point
/// to the origin and quotient by the `n`-th power of the maximal ideal.
/// Errors when the point does not lie on the scheme.
pub fn jet(ideal: &Ideal, point: &[Scalar], n: u32, budget: &Budget) -> Result<FatPoint> {
    let ring = ideal.ring().clone();
    if point.len() != ring.num_vars() as usize {
        return Err(Error::InvalidArgument(
            "point coordinate count does not match the ring".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("jet order must be at least 1".into()));
    }
    for g in ideal.gens() {
        if !g.eval_scalars(point).is_zero() {
            return Err(Error::PointNotOnScheme(g.display()));
        }
    }
    // Shift: x ↦ x + P.
    let images: Vec<Polynomial> = (0..ring.num_vars())
        .map(|i| ring.var(i).add_ref(&ring.constant(point[i as usize].clone())))
        .collect();
    let mut gens: Vec<Polynomial> = ideal
        .gens()
        .iter()
        .map(|g| g.substitute(&ring, &images))
        .collect::<Result<_>>()?;
    gens.extend(degree_monomials(&ring, n));
    FatPoint::new(Ideal::new(ring, gens)?, budget)
}

/// A germ `(X, P)`: a scheme together with a chosen rational point on it,
/// the base of the jet family `jⁿ_P(X)`.
#[derive(Clone, Debug)]
pub struct Germ {
    ideal: Ideal,
    point: Vec<Scalar>,
}

impl Germ {
    pub fn new(ideal: Ideal, point: Vec<Scalar>) -> Result<Germ> {
        if point.len() != ideal.ring().num_vars() as usize {
            return Err(Error::InvalidArgument(
                "point coordinate count does not match the ring".into(),
            ));
        }
        for g in ideal.gens() {
            if !g.eval_scalars(&point).is_zero() {
                return Err(Error::PointNotOnScheme(g.display()));
            }
        }
        Ok(Germ { ideal, point })
    }

    /// The germ at the origin.
    pub fn at_origin(ideal: Ideal) -> Result<Germ> {
        let zero = ideal.ring().field().zero();
        let point = vec![zero; ideal.ring().num_vars() as usize];
        Germ::new(ideal, point)
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn point(&self) -> &[Scalar] {
        &self.point
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    /// The `n`-th jet fat point `𝒪_{X,P}/𝔪ⁿ`.
    pub fn jet(&self, n: u32, budget: &Budget) -> Result<FatPoint> {
        jet(&self.ideal, &self.point, n, budget)
    }

    pub fn dim(&self, budget: &Budget) -> Result<i64> {
        self.ideal.krull_dim(budget)
    }
}

/// All monomials of total degree exactly `n` (generators of `𝔪ⁿ`).
pub fn degree_monomials(ring: &Ring, n: u32) -> Vec<Polynomial> {
    let k = ring.num_vars();
    let mut out = Vec::new();
    let mut exps = vec![0u32; k as usize];
    fn rec(
        ring: &Ring,
        k: u32,
        i: u32,
        left: u32,
        exps: &mut Vec<u32>,
        out: &mut Vec<Polynomial>,
    ) {
        if i + 1 == k {
            exps[i as usize] = left;
            out.push(ring.monomial(Monomial::from_pairs(
                exps.iter().enumerate().map(|(v, &e)| (v as u32, e)),
            )));
            return;
        }
        for e in 0..=left {
            exps[i as usize] = e;
            rec(ring, k, i + 1, left - e, exps, out);
        }
    }
    if k == 0 {
        return out;
    }
    rec(ring, k, 0, n, &mut exps, &mut out);
    out
}

/// A family of closed subschemes is strongly connected when the sum of their
/// ideals is proper, i.e. they share a common point.
pub fn strongly_connected(primes: &[Ideal], budget: &Budget) -> Result<bool> {
    let first = primes
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty family".into()))?;
    let mut total = first.clone();
    for p in &primes[1..] {
        total = total.sum(p)?;
    }
    Ok(!total.is_unit(budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::Field;

    fn ring(vars: &[&str]) -> Ring {
        Ring::with_vars(Field::rationals(), vars).unwrap()
    }

    fn fp(r: &Ring, gens: &[&str]) -> Result<FatPoint> {
        let gens = gens.iter().map(|s| Polynomial::parse(r, s).unwrap()).collect();
        FatPoint::new(Ideal::new(r.clone(), gens).unwrap(), &Budget::default())
    }

    fn names(r: &Ring, ms: &[Monomial]) -> Vec<String> {
        ms.iter().map(|m| r.monomial(m.clone()).display()).collect()
    }

    #[test]
    fn one_variable_lines() {
        let r = ring(&["xi"]);
        let l2 = fp(&r, &["xi^2"]).unwrap();
        assert_eq!(l2.length(), 2);
        assert_eq!(names(&r, l2.basis()), vec!["1", "xi"]);
        assert_eq!(l2.nilpotency(), &[2]);
        let l1 = fp(&r, &["xi"]).unwrap();
        assert_eq!(l1.length(), 1);
        assert_eq!(names(&r, l1.basis()), vec!["1"]);
    }

    #[test]
    fn planar_square_point() {
        // (ξ,ζ)²: length 3, basis 1 < ζ < ξ in increasing lex order.
        let r = ring(&["xi", "zeta"]);
        let o2 = fp(&r, &["xi^2", "xi*zeta", "zeta^2"]).unwrap();
        assert_eq!(o2.length(), 3);
        assert_eq!(names(&r, o2.basis()), vec!["1", "zeta", "xi"]);
    }

    #[test]
    fn validation_errors() {
        let r = ring(&["xi", "zeta"]);
        // ζ is a free direction: infinite length.
        assert_eq!(fp(&r, &["xi^2"]).unwrap_err(), Error::NotFiniteLength);
        // Finite but supported away from the origin in the ζ direction.
        assert_eq!(
            fp(&r, &["xi^2", "zeta^2 - 1"]).unwrap_err(),
            Error::NotSupportedAtOrigin("zeta".into())
        );
        // Unit ideal.
        assert_eq!(fp(&r, &["xi", "zeta", "1 - xi"]).unwrap_err(), Error::EmptyFatPoint);
    }

    #[test]
    fn quartic_truncated_cusp_basis() {
        // k[ξ,ζ]/((ξ² − ζ³) + (ξ,ζ)⁴): length 7. The staircase contains ζ³,
        // but the good basis replaces it with ξ² (which equals ζ³ in the
        // quotient and is lex-larger than every other basis element's
        // competitor), ordered 1 < ζ < ζ² < ξ < ξζ < ξζ² < ξ².
        let r = ring(&["xi", "zeta"]);
        let j4 = fp(
            &r,
            &["xi^2 - zeta^3", "xi^4", "xi^3*zeta", "xi^2*zeta^2", "xi*zeta^3", "zeta^4"],
        )
        .unwrap();
        assert_eq!(j4.length(), 7);
        assert_eq!(
            names(&r, j4.basis()),
            vec!["1", "zeta", "zeta^2", "xi", "xi*zeta", "xi*zeta^2", "xi^2"]
        );
        assert_eq!(
            names(&r, j4.staircase()),
            vec!["1", "zeta", "zeta^2", "zeta^3", "xi", "xi*zeta", "xi*zeta^2"]
        );
        // Δ coordinates: the residue of ζ³ is the basis element ξ².
        let z3 = Polynomial::parse(&r, "zeta^3").unwrap();
        let coords = j4.delta_coords(&z3).unwrap();
        let field = Field::rationals();
        let mut expected = vec![field.zero(); 7];
        expected[6] = field.one();
        assert_eq!(coords, expected);
    }

    #[test]
    fn mixed_monomial_point() {
        // (ξ², ξζ², ζ³): length 5.
        let r = ring(&["xi", "zeta"]);
        let p = fp(&r, &["xi^2", "xi*zeta^2", "zeta^3"]).unwrap();
        assert_eq!(p.length(), 5);
        assert_eq!(
            names(&r, p.basis()),
            vec!["1", "zeta", "zeta^2", "xi", "xi*zeta"]
        );
    }

    #[test]
    fn non_monomial_basis_change_is_certified() {
        // k[ξ,ζ]/(ξ − ζ, ζ²) has length 2. ζ lies in id(ζ) because ζ ≡ ξ and
        // ξ is lex-larger, so the good basis keeps ξ instead: Δ = {1, ξ} —
        // the same replacement mechanism that swaps ζ³ for ξ² on the
        // truncated cusp. The residue of ζ then has Δ coordinates (0, 1).
        let r = ring(&["xi", "zeta"]);
        let p = fp(&r, &["xi - zeta", "zeta^2"]).unwrap();
        assert_eq!(p.length(), 2);
        assert_eq!(names(&r, p.basis()), vec!["1", "xi"]);
        let zeta = Polynomial::parse(&r, "zeta").unwrap();
        let field = Field::rationals();
        assert_eq!(p.delta_coords(&zeta).unwrap(), vec![field.zero(), field.one()]);
    }

    #[test]
    fn products_multiply_length_and_bases() {
        let r = ring(&["xi"]);
        let l2 = fp(&r, &["xi^2"]).unwrap();
        let l3 = fp(&r, &["xi^3"]).unwrap();
        let prod = l2.product(&l3, &Budget::default()).unwrap();
        assert_eq!(prod.length(), 6);
        assert_eq!(prod.ring().var_names(), &["xi".to_string(), "xi_2".to_string()]);
        // Basis = pairwise products of the factor bases.
        let pr = prod.ring().clone();
        assert_eq!(
            names(&pr, prod.basis()),
            vec!["1", "xi_2", "xi_2^2", "xi", "xi*xi_2", "xi*xi_2^2"]
        );
    }

    #[test]
    fn jets_of_germs() {
        let r = ring(&["x", "y"]);
        let cusp = Ideal::new(
            r.clone(),
            vec![Polynomial::parse(&r, "x^2 - y^3").unwrap()],
        )
        .unwrap();
        let q = Field::rationals();
        let origin = [q.zero(), q.zero()];
        let b = Budget::default();
        assert_eq!(jet(&cusp, &origin, 1, &b).unwrap().length(), 1);
        assert_eq!(jet(&cusp, &origin, 2, &b).unwrap().length(), 3);
        assert_eq!(jet(&cusp, &origin, 3, &b).unwrap().length(), 5);
        assert_eq!(jet(&cusp, &origin, 4, &b).unwrap().length(), 7);
        // Smooth point (1, 1) lies on the cusp; its jets are those of a
        // smooth curve germ: lengths n.
        let p11 = [q.one(), q.one()];
        assert_eq!(jet(&cusp, &p11, 3, &b).unwrap().length(), 3);
        // (1, 0) is not on the curve.
        assert!(matches!(
            jet(&cusp, &[q.one(), q.zero()], 2, &b),
            Err(Error::PointNotOnScheme(_))
        ));
    }

    #[test]
    fn strong_connectivity() {
        let r = ring(&["x", "y"]);
        let b = Budget::default();
        let axis_x = Ideal::new(r.clone(), vec![Polynomial::parse(&r, "y").unwrap()]).unwrap();
        let axis_y = Ideal::new(r.clone(), vec![Polynomial::parse(&r, "x").unwrap()]).unwrap();
        let shifted =
            Ideal::new(r.clone(), vec![Polynomial::parse(&r, "x - 1").unwrap()]).unwrap();
        // The coordinate axes meet at the origin.
        assert!(strongly_connected(&[axis_x.clone(), axis_y.clone()], &b).unwrap());
        // y = 0, x = 0, x = 1 have no common point.
        assert!(!strongly_connected(&[axis_x, axis_y, shifted], &b).unwrap());
    }

    #[test]
    fn jordan_holder_tails_have_unit_colength_steps() {
        // Spot-check the certificate data on the truncated cusp: removing
        // basis tails one at a time steps the colength by one. (The
        // constructor re-checks this; here we recompute two interior values.)
        let r = ring(&["xi", "zeta"]);
        let j4 = fp(
            &r,
            &["xi^2 - zeta^3", "xi^4", "xi^3*zeta", "xi^2*zeta^2", "xi*zeta^3", "zeta^4"],
        )
        .unwrap();
        let b = Budget::default();
        // I + (ξ²) leaves 1, ζ, ζ², ξ, ξζ, ξζ²: colength 6.
        let tail6 = j4
            .ideal()
            .sum(&Ideal::new(r.clone(), vec![Polynomial::parse(&r, "xi^2").unwrap()]).unwrap())
            .unwrap();
        assert_eq!(
            tail6
                .groebner_basis(&MonomialOrder::Lex, &b)
                .unwrap()
                .colength()
                .unwrap(),
            6
        );
        // I + (ξζ, ξζ², ξ²) leaves 1, ζ, ζ², ξ: colength 4.
        let tail4 = j4
            .ideal()
            .sum(
                &Ideal::new(
                    r.clone(),
                    vec![
                        Polynomial::parse(&r, "xi*zeta").unwrap(),
                        Polynomial::parse(&r, "xi*zeta^2").unwrap(),
                        Polynomial::parse(&r, "xi^2").unwrap(),
                    ],
                )
                .unwrap(),
            )
            .unwrap();
        assert_eq!(
            tail4
                .groebner_basis(&MonomialOrder::Lex, &b)
                .unwrap()
                .colength()
                .unwrap(),
            4
        );
    }
}
