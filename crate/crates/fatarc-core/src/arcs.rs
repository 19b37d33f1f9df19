//! Generic arc expansion along a fat point, arc schemes, deformed arc
//! schemes, constructible motifs, dimension reports, and image closures.
//!
//! For a fat point 𝔳 with good ordered basis Δ = (α₀, …, α_{l−1}) and a
//! source ring `k[x₁,…,x_m]`, the *generic arc* substitutes
//! `xᵢ ↦ Σⱼ x̃_{i,j} αⱼ` with fresh arc variables `x̃_{i,j}`, reduces modulo
//! the fat-point ideal, and reads off the Δ-coordinates of the result. The
//! coefficients of all generators cut out the arc scheme ∇_𝔳 X inside the
//! affine space of arc variables, and satisfy the adjunction
//! `X(𝔳 ⊗ R) = (∇_𝔳 X)(R)` for every test ring — which is what the
//! point-counting oracle checks over finite fields.
//!
//! Arc variables are named `{x}~{i}_{j}` (source index `i`, layer `j`) and
//! ordered source-major, layer-minor.

use crate::fatpoints::FatPoint;
use crate::ideals::Ideal;
use crate::polycore::{MonomialOrder, Polynomial, Ring};
use crate::{Budget, Error, Result};

/// Shared data for expanding polynomials along a fixed fat point.
#[derive(Clone, Debug)]
pub struct ArcContext {
    source: Ring,
    fp: FatPoint,
    /// Fat variables first (dominant block), then arc variables.
    joint: Ring,
    /// Only the arc variables, in the same relative order.
    arc: Ring,
    nsrc: u32,
    nfat: u32,
}

impl ArcContext {
    pub fn new(source: &Ring, fp: &FatPoint) -> Result<ArcContext> {
        if source.field() != fp.ring().field() {
            return Err(Error::CharacteristicMismatch("arc context".into()));
        }
        let l = fp.length();
        let nsrc = source.num_vars();
        let nfat = fp.ring().num_vars();
        let mut joint_vars: Vec<String> =
            fp.ring().var_names().to_vec();
        let mut arc_vars = Vec::new();
        for i in 0..nsrc {
            for j in 0..l {
                let name = format!("{}~{}_{}", source.var_name(i), i, j);
                arc_vars.push(name.clone());
                joint_vars.push(name);
            }
        }
        let joint = Ring::new(*source.field(), joint_vars)?;
        let arc = Ring::new(*source.field(), arc_vars)?;
        Ok(ArcContext { source: source.clone(), fp: fp.clone(), joint, arc, nsrc, nfat })
    }

    /// Number of source-ring variables (the `d` in the 𝕃^{dℓ} normalizer).
    pub fn num_source_vars(&self) -> u32 {
        self.nsrc
    }

    pub fn fat_point(&self) -> &FatPoint {
        &self.fp
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    /// The pure arc-variable ring carrying arc scheme ideals.
    pub fn arc_ring(&self) -> &Ring {
        &self.arc
    }

    /// Arc variable `x̃_{i,j}` as a polynomial of the arc ring.
    pub fn arc_var(&self, i: u32, j: usize) -> Polynomial {
        self.arc.var(i * self.fp.length() as u32 + j as u32)
    }

    fn joint_arc_index(&self, i: u32, j: usize) -> u32 {
        self.nfat + i * self.fp.length() as u32 + j as u32
    }

    /// The block order used for reduction: fat variables dominate (lex, to
    /// match the staircase), arc variables follow (grevlex).
    fn block_order(&self) -> MonomialOrder {
        MonomialOrder::elimination_grevlex((0..self.nfat).collect())
    }

    /// Expand `f` along the generic arc: returns the `l` Δ-coordinate
    /// coefficients, polynomials of the arc ring. `f` may live in the source
    /// ring (ordinary arcs) or mention fat-point variables as deformation
    /// parameters (deformed arcs).
    pub fn expand(&self, f: &Polynomial, budget: &Budget) -> Result<Vec<Polynomial>> {
        let l = self.fp.length();
        // Images for substitution into the joint ring.
        // Source variables expand into generic arcs; names only found in the
        // fat-point ring act as deformation parameters. Source wins on a
        // clash so that auto-arcs (a scheme along its own jets) expand.
        let fring = f.ring().clone();
        let mut images = Vec::new();
        for v in 0..fring.num_vars() {
            let name = fring.var_name(v);
            if let Some(sv) = self.source.var_index(name) {
                let mut acc = self.joint.zero();
                for (j, alpha) in self.fp.basis().iter().enumerate() {
                    let term = self
                        .joint
                        .monomial(alpha.clone())
                        .mul_ref(&self.joint.var(self.joint_arc_index(sv, j)));
                    acc = acc.add_ref(&term);
                }
                images.push(acc);
            } else if let Some(fv) = self.fp.ring().var_index(name) {
                images.push(self.joint.var(fv));
            } else {
                return Err(Error::UnknownVariable(name.to_string()));
            }
        }
        let substituted = f.substitute(&self.joint, &images)?;

        // Reduce modulo the fat-point ideal under the block order, then read
        // staircase coordinates (each one an arc-ring polynomial).
        let lifted: Vec<Polynomial> = self
            .fp
            .ideal()
            .gens()
            .iter()
            .map(|g| g.embed(&self.joint))
            .collect::<Result<_>>()?;
        let lifted_ideal = Ideal::new(self.joint.clone(), lifted)?;
        let gb = lifted_ideal.groebner_basis(&self.block_order(), budget)?;
        let nf = gb.normal_form(&substituted);

        let mut buckets = vec![self.arc.zero(); l];
        for (m, c) in nf.terms() {
            let fat = m.restrict(|v| v < self.nfat);
            let arc = m
                .restrict(|v| v >= self.nfat)
                .map_vars(|v| v - self.nfat);
            let idx = self
                .fp
                .staircase()
                .binary_search_by(|s| MonomialOrder::Lex.cmp_mono(s, &fat))
                .map_err(|_| {
                    Error::InvalidArgument("reduction left the staircase".into())
                })?;
            let term = self.arc.monomial(arc).scale(c);
            buckets[idx] = buckets[idx].add_ref(&term);
        }
        // Staircase coordinates → Δ coordinates.
        let to_delta = self.fp.to_delta_matrix();
        let mut out = Vec::with_capacity(l);
        for row in to_delta {
            let mut acc = self.arc.zero();
            for (i, entry) in row.iter().enumerate() {
                if !entry.is_zero() {
                    acc = acc.add_ref(&buckets[i].scale(entry));
                }
            }
            out.push(acc);
        }
        // The 0-layer coefficient is always f at the 0-layer variables
        // (α₀ = 1 and higher layers vanish at the closed point).
        debug_assert!(
            {
                let zero_layer: Vec<Polynomial> = (0..fring.num_vars())
                    .map(|v| {
                        let name = fring.var_name(v);
                        if let Some(sv) = self.source.var_index(name) {
                            self.arc_var(sv, 0)
                        } else {
                            self.arc.zero()
                        }
                    })
                    .collect();
                f.substitute(&self.arc, &zero_layer).map(|expected| expected == out[0]).unwrap_or(true)
            },
            "0-layer coefficient mismatch"
        );
        Ok(out)
    }
}

/// An arc scheme `∇_𝔳 X` (or a deformed one), presented by the expansion
/// coefficients of the source generators inside the arc-variable affine
/// space.
#[derive(Clone, Debug)]
pub struct ArcScheme {
    context: ArcContext,
    ideal: Ideal,
}

impl ArcScheme {
    pub fn context(&self) -> &ArcContext {
        &self.context
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.context.arc_ring()
    }

    /// Ambient dimension: (number of source variables) × (length).
    pub fn ambient_dim(&self) -> u32 {
        self.context.arc_ring().num_vars()
    }
}

/// The arc scheme of `V(source_ideal)` along `fp`.
pub fn arc_scheme(source_ideal: &Ideal, fp: &FatPoint, budget: &Budget) -> Result<ArcScheme> {
    let context = ArcContext::new(source_ideal.ring(), fp)?;
    expand_all(context, source_ideal.gens(), budget)
}

/// A deformed arc scheme: generators may mention the fat-point variables as
/// deformation parameters (they are substituted, not expanded).
pub fn deformed_arc_scheme(
    source: &Ring,
    fp: &FatPoint,
    gens: &[Polynomial],
    budget: &Budget,
) -> Result<ArcScheme> {
    let context = ArcContext::new(source, fp)?;
    expand_all(context, gens, budget)
}

fn expand_all(context: ArcContext, gens: &[Polynomial], budget: &Budget) -> Result<ArcScheme> {
    let mut arc_gens = Vec::new();
    for g in gens {
        for coeff in context.expand(g, budget)? {
            if !coeff.is_zero() {
                arc_gens.push(coeff);
            }
        }
    }
    let ideal = Ideal::new(context.arc_ring().clone(), arc_gens)?;
    Ok(ArcScheme { context, ideal })
}

/// Dimension report of an arc scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcDimReport {
    /// Krull dimension of the arc scheme (−1 when empty).
    pub dim: i64,
    /// `dim − dim(X) · length` — the arc defect.
    pub defect: i64,
    /// When the arc scheme is a coordinate affine subspace `V(S)`, the
    /// codimension-complement: number of free coordinates. Certifies the
    /// class 𝕃^e.
    pub coordinate_affine: Option<u32>,
    /// The coordinate subspace generators (indices into the arc ring) when
    /// `coordinate_affine` is set.
    pub vanishing_vars: Vec<u32>,
}

/// Compute dimension, defect, and (optionally) a coordinate-affine
/// certificate for the arc scheme of `source_ideal` along `fp`.
pub fn arc_dim(
    source_ideal: &Ideal,
    fp: &FatPoint,
    budget: &Budget,
) -> Result<(ArcScheme, ArcDimReport)> {
    let arc = arc_scheme(source_ideal, fp, budget)?;
    let report = arc_dim_of(&arc, source_ideal, budget)?;
    Ok((arc, report))
}

/// Dimension report for an existing arc scheme; `source_ideal` supplies the
/// base dimension for the defect.
pub fn arc_dim_of(arc: &ArcScheme, source_ideal: &Ideal, budget: &Budget) -> Result<ArcDimReport> {
    let dim = arc.ideal().krull_dim(budget)?;
    let d = source_ideal.krull_dim(budget)?;
    let l = arc.context().fat_point().length() as i64;
    let defect = dim - d * l;
    let (coordinate_affine, vanishing_vars) =
        coordinate_affine_certificate(arc.ideal(), dim, budget)?;
    Ok(ArcDimReport { dim, defect, coordinate_affine, vanishing_vars })
}

/// Try to certify a scheme as a coordinate subspace of its ambient affine
/// space: collect the variables lying in the radical, then confirm every
/// generator vanishes after setting them to zero. On success the reduced
/// scheme is exactly `V(vanishing variables)`, an affine space, and the
/// class is a power of 𝕃.
pub(crate) fn coordinate_affine_certificate(
    ideal: &Ideal,
    dim: i64,
    budget: &Budget,
) -> Result<(Option<u32>, Vec<u32>)> {
    let ring = ideal.ring();
    if ideal.is_zero_ideal() {
        return Ok((Some(ring.num_vars()), Vec::new()));
    }
    if dim < 0 {
        return Ok((None, Vec::new()));
    }
    // A variable can only lie in the radical when a pure power of it appears
    // among the leading monomials; `radical_membership` settles the
    // survivors (its small-power fast path handles the typical case).
    let gb = ideal.gb_default(budget)?;
    let bounds = gb.pure_power_bounds();
    let mut vanishing = Vec::new();
    for (v, bound) in bounds.iter().enumerate() {
        if bound.is_none() {
            continue;
        }
        let v = v as u32;
        if ideal.radical_membership(&ring.var(v), budget)? {
            vanishing.push(v);
        }
    }
    // Confirm: all generators vanish modulo (vanishing vars).
    let images: Vec<Polynomial> = (0..ring.num_vars())
        .map(|v| {
            if vanishing.contains(&v) {
                ring.zero()
            } else {
                ring.var(v)
            }
        })
        .collect();
    for g in ideal.gens() {
        if !g.substitute(ring, &images)?.is_zero() {
            return Ok((None, Vec::new()));
        }
    }
    let free = ring.num_vars() - vanishing.len() as u32;
    debug_assert_eq!(free as i64, dim, "coordinate certificate disagrees with dimension");
    Ok((Some(free), vanishing))
}

/// Closure of the image of the morphism `V(source_ideal) → 𝔸^m` given by
/// `images` (polynomials of the source ring): eliminate the source variables
/// from `source_ideal + (tᵢ − imageᵢ)` and express the result in `target`.
pub fn image_closure(
    source_ideal: &Ideal,
    images: &[Polynomial],
    target: &Ring,
    budget: &Budget,
) -> Result<Ideal> {
    let source = source_ideal.ring().clone();
    if images.len() != target.num_vars() as usize {
        return Err(Error::InvalidArgument(
            "image count does not match the target ring".into(),
        ));
    }
    for img in images {
        if img.ring() != &source {
            return Err(Error::RingMismatch("image polynomial ring".into()));
        }
    }
    let (joint, fresh) = source.extend(target.var_names())?;
    let mut gens: Vec<Polynomial> = source_ideal
        .gens()
        .iter()
        .map(|g| g.embed(&joint))
        .collect::<Result<_>>()?;
    for (name, img) in fresh.iter().zip(images) {
        let tv = joint.var(joint.var_index(name).unwrap());
        gens.push(tv.sub_ref(&img.embed(&joint)?));
    }
    let joint_ideal = Ideal::new(joint.clone(), gens)?;
    let eliminated = joint_ideal.eliminate(&(0..source.num_vars()).collect::<Vec<_>>(), budget)?;
    // Transport into the target ring: renamed fresh variable ↦ target var.
    let images_back: Vec<Polynomial> = {
        let mut map = vec![target.zero(); joint.num_vars() as usize];
        for (k, name) in fresh.iter().enumerate() {
            map[joint.var_index(name).unwrap() as usize] = target.var(k as u32);
        }
        map
    };
    let transported: Vec<Polynomial> = eliminated
        .gens()
        .iter()
        .map(|g| g.substitute(target, &images_back))
        .collect::<Result<_>>()?;
    Ideal::new(target.clone(), transported)
}

// ---------------------------------------------------------------------------
// Constructible motifs
// ---------------------------------------------------------------------------

/// An atomic condition on points of an affine scheme over a fat-point-algebra
/// (or field) valued test ring:
/// * `Closed(J)`: every generator of `J` evaluates to zero;
/// * `Cone(J)`: the *center* of the point (its residue modulo nilpotents)
///   lies in `V(J)`.
///
/// Over a field the two coincide.
#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Closed(Ideal),
    Cone(Ideal),
}

/// An atom or its negation.
#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

/// A constructible motif: a finite union of conjunctions of literals.
/// The empty union is the empty motif; an empty conjunction is everything.
#[derive(Clone, Debug, PartialEq)]
pub struct Motif {
    ring: Ring,
    cells: Vec<Vec<Literal>>,
}

impl Motif {
    pub fn whole(ring: Ring) -> Motif {
        Motif { ring, cells: vec![Vec::new()] }
    }

    pub fn empty(ring: Ring) -> Motif {
        Motif { ring, cells: Vec::new() }
    }

    pub fn closed(ideal: Ideal) -> Motif {
        let ring = ideal.ring().clone();
        Motif { ring, cells: vec![vec![Literal { atom: Atom::Closed(ideal), negated: false }]] }
    }

    pub fn cone(ideal: Ideal) -> Motif {
        let ring = ideal.ring().clone();
        Motif { ring, cells: vec![vec![Literal { atom: Atom::Cone(ideal), negated: false }]] }
    }

    /// The complement of a single atom.
    pub fn not(mut self) -> Result<Motif> {
        if self.cells.len() == 1 && self.cells[0].len() == 1 {
            self.cells[0][0].negated = !self.cells[0][0].negated;
            Ok(self)
        } else {
            Err(Error::InvalidArgument(
                "negation is only supported on single atoms".into(),
            ))
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn cells(&self) -> &[Vec<Literal>] {
        &self.cells
    }

    pub fn union(&self, other: &Motif) -> Result<Motif> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("motif union".into()));
        }
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(Motif { ring: self.ring.clone(), cells })
    }

    /// Conjunction, distributed over the unions.
    pub fn intersect(&self, other: &Motif) -> Result<Motif> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("motif intersection".into()));
        }
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let mut cell = a.clone();
                cell.extend(b.iter().cloned());
                cells.push(cell);
            }
        }
        Ok(Motif { ring: self.ring.clone(), cells })
    }

    /// All distinct atoms appearing in the motif.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out: Vec<Atom> = Vec::new();
        for cell in &self.cells {
            for lit in cell {
                if !out.contains(&lit.atom) {
                    out.push(lit.atom.clone());
                }
            }
        }
        out
    }

    /// Render like `V(x) & !Cone(y) | V(x, y)`.
    pub fn display(&self) -> String {
        fn atom_str(atom: &Atom) -> String {
            let (name, ideal) = match atom {
                Atom::Closed(i) => ("V", i),
                Atom::Cone(i) => ("Cone", i),
            };
            let gens: Vec<String> = ideal.gens().iter().map(Polynomial::display).collect();
            if gens.is_empty() {
                format!("{}(0)", name)
            } else {
                format!("{}({})", name, gens.join(", "))
            }
        }
        if self.cells.is_empty() {
            return "EMPTY".to_string();
        }
        let cells: Vec<String> = self
            .cells
            .iter()
            .map(|cell| {
                if cell.is_empty() {
                    return "ALL".to_string();
                }
                cell.iter()
                    .map(|lit| {
                        let a = atom_str(&lit.atom);
                        if lit.negated { format!("!{}", a) } else { a }
                    })
                    .collect::<Vec<_>>()
                    .join(" & ")
            })
            .collect();
        cells.join(" | ")
    }
}

/// Transform a motif on the source scheme into one on the arc scheme:
/// `Closed(J)` becomes the vanishing of all expansion coefficients of `J`'s
/// generators; `Cone(J)` becomes the vanishing of `J` at the 0-layer
/// variables (the center of an arc is its 0-layer point).
pub fn arc_motif(motif: &Motif, fp: &FatPoint, budget: &Budget) -> Result<Motif> {
    let context = ArcContext::new(motif.ring(), fp)?;
    let arc_ring = context.arc_ring().clone();
    let zero_layer: Vec<Polynomial> = (0..motif.ring().num_vars())
        .map(|v| context.arc_var(v, 0))
        .collect();
    let mut cells = Vec::new();
    for cell in motif.cells() {
        let mut out_cell = Vec::new();
        for lit in cell {
            let atom = match &lit.atom {
                Atom::Closed(j) => {
                    let mut gens = Vec::new();
                    for g in j.gens() {
                        for c in context.expand(g, budget)? {
                            if !c.is_zero() {
                                gens.push(c);
                            }
                        }
                    }
                    Atom::Closed(Ideal::new(arc_ring.clone(), gens)?)
                }
                Atom::Cone(j) => {
                    let gens: Vec<Polynomial> = j
                        .gens()
                        .iter()
                        .map(|g| g.substitute(&arc_ring, &zero_layer))
                        .collect::<Result<_>>()?;
                    Atom::Closed(Ideal::new(arc_ring.clone(), gens)?)
                }
            };
            out_cell.push(Literal { atom, negated: lit.negated });
        }
        cells.push(out_cell);
    }
    Ok(Motif { ring: arc_ring, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatpoints;
    use crate::polycore::Field;

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

    fn displays(arc: &ArcScheme) -> Vec<String> {
        arc.ideal().gens().iter().map(|g| g.display()).collect()
    }

    #[test]
    fn cusp_along_double_point_line() {
        // x² − y³ along k[ξ]/(ξ²): two layers.
        let src = ring(&["x", "y"]);
        let fpr = ring(&["xi"]);
        let l2 = fat(&fpr, &["xi^2"]);
        let arc = arc_scheme(&ideal(&src, &["x^2 - y^3"]), &l2, &b()).unwrap();
        assert_eq!(
            displays(&arc),
            vec![
                "x~0_0^2 - y~1_0^3",
                "2*x~0_0*x~0_1 - 3*y~1_0^2*y~1_1",
            ]
        );
        assert_eq!(arc.ambient_dim(), 4);
    }

    #[test]
    fn cusp_along_planar_square_point() {
        // Along k[ξ,ζ]/(ξ²,ζ²) with Δ = (1, ζ, ξ, ξζ): four equations; the
        // mixed layer picks up the cross terms.
        let src = ring(&["x", "y"]);
        let fpr = ring(&["xi", "zeta"]);
        let o22 = fat(&fpr, &["xi^2", "zeta^2"]);
        let arc = arc_scheme(&ideal(&src, &["x^2 - y^3"]), &o22, &b()).unwrap();
        assert_eq!(
            displays(&arc),
            vec![
                "x~0_0^2 - y~1_0^3",
                "2*x~0_0*x~0_1 - 3*y~1_0^2*y~1_1",
                "2*x~0_0*x~0_2 - 3*y~1_0^2*y~1_2",
                "2*x~0_0*x~0_3 + 2*x~0_1*x~0_2 - 3*y~1_0^2*y~1_3 - 6*y~1_0*y~1_1*y~1_2",
            ]
        );
    }

    #[test]
    fn fat_lines_on_fat_lines() {
        // ∇_{𝔩₃}𝔩₂: generators Σ_{i+j=s} x̃ᵢx̃ⱼ for s = 0, 1, 2.
        let src = ring(&["x"]);
        let fpr = ring(&["xi"]);
        let l3 = fat(&fpr, &["xi^3"]);
        let arc = arc_scheme(&ideal(&src, &["x^2"]), &l3, &b()).unwrap();
        assert_eq!(
            displays(&arc),
            vec!["x~0_0^2", "2*x~0_0*x~0_1", "2*x~0_0*x~0_2 + x~0_1^2"]
        );
        // Dimension n − ⌈n/m⌉ = 3 − 2 = 1, defect 1 − 0·3 = 1. The radical
        // is (x̃₀, x̃₁) — x̃₁⁴ ∈ I — so the reduced scheme is the x̃₂-axis and
        // the class certificate is 𝕃¹.
        let (_, report) = arc_dim(&ideal(&src, &["x^2"]), &l3, &b()).unwrap();
        assert_eq!(report.dim, 1);
        assert_eq!(report.defect, 1);
        assert_eq!(report.coordinate_affine, Some(1));
        assert_eq!(report.vanishing_vars, vec![0, 1]);
    }

    #[test]
    fn coordinate_affine_certificates() {
        // ∇_{𝔩₂}𝔩₂: (x̃₀², 2x̃₀x̃₁) has radical (x̃₀); reduced scheme is the
        // x̃₁-axis: certified affine of dimension 1.
        let src = ring(&["x"]);
        let fpr = ring(&["xi"]);
        let l2 = fat(&fpr, &["xi^2"]);
        let (_, report) = arc_dim(&ideal(&src, &["x^2"]), &l2, &b()).unwrap();
        assert_eq!(report.dim, 1);
        assert_eq!(report.defect, 1);
        assert_eq!(report.coordinate_affine, Some(1));
        assert_eq!(report.vanishing_vars, vec![0]);
        // Affine space: the zero ideal expands to the zero ideal.
        let (_, report) = arc_dim(&Ideal::zero(src.clone()), &l2, &b()).unwrap();
        assert_eq!(report.dim, 2);
        assert_eq!(report.defect, 0);
        assert_eq!(report.coordinate_affine, Some(2));
    }

    #[test]
    fn smooth_hypersurface_fibration() {
        // V(y − x²) along 𝔩₂: ∇ is a rank-2 affine bundle over the parabola,
        // dimension 2 = dim X · length.
        let src = ring(&["x", "y"]);
        let fpr = ring(&["xi"]);
        let l2 = fat(&fpr, &["xi^2"]);
        let parabola = ideal(&src, &["y - x^2"]);
        let (_, report) = arc_dim(&parabola, &l2, &b()).unwrap();
        assert_eq!(report.dim, 2);
        assert_eq!(report.defect, 0);
    }

    #[test]
    fn deformed_arcs_of_the_cusp() {
        // x² − y³ − z·ξ² over k[ξ]/(ξ³), z a family variable: the ξ-layer
        // keeps the family coefficient out, the ξ²-layer subtracts z̃₀.
        let src = ring(&["x", "y", "z"]);
        let fpr = ring(&["xi"]);
        let l3 = fat(&fpr, &["xi^3"]);
        let joint = Ring::with_vars(Field::rationals(), &["xi", "x", "y", "z"]).unwrap();
        let f = Polynomial::parse(&joint, "x^2 - y^3 - z*xi^2").unwrap();
        let arc = deformed_arc_scheme(&src, &l3, &[f], &b()).unwrap();
        assert_eq!(
            displays(&arc),
            vec![
                "x~0_0^2 - y~1_0^3",
                "2*x~0_0*x~0_1 - 3*y~1_0^2*y~1_1",
                "2*x~0_0*x~0_2 + x~0_1^2 - 3*y~1_0^2*y~1_2 - 3*y~1_0*y~1_1^2 - z~2_0",
            ]
        );
    }

    #[test]
    fn image_closure_of_a_fat_point_map() {
        // ξ ↦ ξ² maps k[ξ]/(ξ⁴) onto V(t²): the image closure of the length-4
        // line under squaring is the length-2 line.
        let src = ring(&["xi"]);
        let tgt = ring(&["t"]);
        let i = ideal(&src, &["xi^4"]);
        let img = image_closure(
            &i,
            &[Polynomial::parse(&src, "xi^2").unwrap()],
            &tgt,
            &b(),
        )
        .unwrap();
        assert_eq!(img.gens().len(), 1);
        assert_eq!(img.gens()[0].display(), "t^2");
        // Twisted cubic: x = t², y = t³ from the affine line.
        let line = Ideal::zero(ring(&["t"]));
        let plane = ring(&["x", "y"]);
        let tring = line.ring().clone();
        let img = image_closure(
            &line,
            &[
                Polynomial::parse(&tring, "t^2").unwrap(),
                Polynomial::parse(&tring, "t^3").unwrap(),
            ],
            &plane,
            &b(),
        )
        .unwrap();
        assert_eq!(img.gens().len(), 1);
        assert_eq!(img.gens()[0].display(), "x^3 - y^2");
    }

    #[test]
    fn auto_arc_of_the_cusp_jet() {
        // The length-7 fourth jet of the cusp at the origin, along itself.
        // Its arc scheme has dimension 9 but is NOT an affine space: the
        // reduction is the tangent bundle of the cusp times 𝔸⁷, cut out by
        // x̃₃² − ỹ₁³ and 2x̃₃x̃₂ − 3ỹ₃ỹ₁² (Δ-layer indices: 3 ↔ x, 1 ↔ y,
        // 2 ↔ y²).
        let src = ring(&["x", "y"]);
        let cusp = ideal(&src, &["x^2 - y^3"]);
        let origin = vec![src.field().zero(), src.field().zero()];
        let j4 = fatpoints::jet(&cusp, &origin, 4, &b()).unwrap();
        assert_eq!(j4.length(), 7);
        let arc = arc_scheme(j4.ideal(), &j4, &b()).unwrap();
        let report = arc_dim_of(&arc, j4.ideal(), &b()).unwrap();
        assert_eq!(report.dim, 9);
        assert_eq!(report.defect, 9);
        assert_eq!(report.coordinate_affine, None);
        for rel in ["x~0_3^2 - y~1_1^3", "2*x~0_3*x~0_2 - 3*y~1_3*y~1_1^2"] {
            let r = Polynomial::parse(arc.ring(), rel).unwrap();
            assert!(arc.ideal().radical_membership(&r, &b()).unwrap());
        }
    }

    #[test]
    fn auto_arc_dimensions_of_planar_neighborhoods() {
        // The n-th infinitesimal neighborhood of the origin in the plane,
        // along itself: dimension n² + n − 2.
        let r = ring(&["x", "y"]);
        for (gens, expected) in [
            (vec!["x^2", "x*y", "y^2"], 4i64),
            (vec!["x^3", "x^2*y", "x*y^2", "y^3"], 10),
        ] {
            let i = ideal(&r, &gens.iter().map(|s| *s).collect::<Vec<_>>());
            let fp = FatPoint::new(i.clone(), &b()).unwrap();
            let (_, report) = arc_dim(&i, &fp, &b()).unwrap();
            assert_eq!(report.dim, expected);
            assert_eq!(report.defect, expected);
        }
        // Mixed-monomial fat point of length 5: auto-arc dimension 7.
        let i = ideal(&r, &["x^2", "x*y^2", "y^3"]);
        let fp = FatPoint::new(i.clone(), &b()).unwrap();
        let (_, report) = arc_dim(&i, &fp, &b()).unwrap();
        assert_eq!(report.dim, 7);
    }

    #[test]
    fn arc_motif_transforms() {
        let src = ring(&["x"]);
        let fpr = ring(&["xi"]);
        let l2 = fat(&fpr, &["xi^2"]);
        // Closed(x) pulls back to both layers vanishing.
        let closed = Motif::closed(ideal(&src, &["x"]));
        let t = arc_motif(&closed, &l2, &b()).unwrap();
        let cell = &t.cells()[0];
        assert_eq!(cell.len(), 1);
        match &cell[0].atom {
            Atom::Closed(j) => {
                let names: Vec<String> = j.gens().iter().map(|g| g.display()).collect();
                assert_eq!(names, vec!["x~0_0", "x~0_1"]);
            }
            _ => panic!("expected closed atom"),
        }
        // Cone(x) pulls back to the 0-layer only.
        let cone = Motif::cone(ideal(&src, &["x"]));
        let t = arc_motif(&cone, &l2, &b()).unwrap();
        match &t.cells()[0][0].atom {
            Atom::Closed(j) => {
                let names: Vec<String> = j.gens().iter().map(|g| g.display()).collect();
                assert_eq!(names, vec!["x~0_0"]);
            }
            _ => panic!("expected closed atom"),
        }
    }

    #[test]
    fn motif_algebra() {
        let r = ring(&["x", "y"]);
        let vx = Motif::closed(ideal(&r, &["x"]));
        let vy = Motif::closed(ideal(&r, &["y"]));
        let u = vx.union(&vy).unwrap();
        assert_eq!(u.cells().len(), 2);
        let i = vx.intersect(&vy).unwrap();
        assert_eq!(i.cells().len(), 1);
        assert_eq!(i.cells()[0].len(), 2);
        let c = vx.clone().not().unwrap();
        assert!(c.cells()[0][0].negated);
        assert_eq!(u.atoms().len(), 2);
        assert_eq!(i.atoms().len(), 2);
    }
}
