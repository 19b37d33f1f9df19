//! Dense exact linear algebra over an abstract field.
//!
//! Matrices are `Vec<Vec<T>>` in row-major order; the element arithmetic is
//! supplied through [`FieldOps`], so the same elimination code serves ℚ and
//! 𝔽ₚ scalars, table-based finite fields, and rational-function coefficients.

/// Field arithmetic for element type `T`, carried by a context value.
pub trait FieldOps<T> {
    fn zero(&self) -> T;
    fn one(&self) -> T;
    fn add(&self, a: &T, b: &T) -> T;
    fn neg(&self, a: &T) -> T;
    fn mul(&self, a: &T, b: &T) -> T;
    /// `None` exactly on zero.
    fn inv(&self, a: &T) -> Option<T>;
    fn is_zero(&self, a: &T) -> bool;

    fn sub(&self, a: &T, b: &T) -> T {
        self.add(a, &self.neg(b))
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: Clone, F: FieldOps<T>>(ops: &F, mat: &mut Vec<Vec<T>>) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !ops.is_zero(&mat[i][c])) else {
            continue;
        };
        mat.swap(r, p);
        let inv = ops.inv(&mat[r][c]).expect("pivot nonzero");
        for j in c..cols {
            mat[r][j] = ops.mul(&mat[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !ops.is_zero(&mat[i][c]) {
                let f = mat[i][c].clone();
                for j in c..cols {
                    let t = ops.mul(&f, &mat[r][j]);
                    mat[i][j] = ops.sub(&mat[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Clone, F: FieldOps<T>>(ops: &F, mat: &[Vec<T>]) -> usize {
    let mut m = mat.to_vec();
    rref(ops, &mut m).len()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert<T: Clone, F: FieldOps<T>>(ops: &F, mat: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<T>> = Vec::with_capacity(n);
    for (i, row) in mat.iter().enumerate() {
        assert_eq!(row.len(), n, "square matrix required");
        let mut r = row.clone();
        for j in 0..n {
            r.push(if i == j { ops.one() } else { ops.zero() });
        }
        aug.push(r);
    }
    let pivots = rref(ops, &mut aug);
    // Invertible iff the left block carries all n pivots.
    if pivots.iter().take_while(|&&c| c < n).count() != n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// One solution of `A x = b`, or `None` when inconsistent.
pub fn solve<T: Clone, F: FieldOps<T>>(ops: &F, a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { return Some(Vec::new()) } else { a[0].len() };
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(ops, &mut aug);
    // Inconsistent iff a pivot lands in the rhs column.
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![ops.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Matrix-vector product.
pub fn mat_vec<T: Clone, F: FieldOps<T>>(ops: &F, a: &[Vec<T>], x: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            let mut acc = ops.zero();
            for (aij, xj) in row.iter().zip(x) {
                acc = ops.add(&acc, &ops.mul(aij, xj));
            }
            acc
        })
        .collect()
}

/// Intersection of kernels of the given matrices (all with `n` columns):
/// a basis of `{x : Aᵢ x = 0 ∀i}` obtained from the stacked system.
pub fn kernel_dim<T: Clone, F: FieldOps<T>>(ops: &F, stacked: &[Vec<T>], n: usize) -> usize {
    if stacked.is_empty() {
        return n;
    }
    n - rank(ops, stacked)
}

impl FieldOps<crate::polycore::Scalar> for crate::polycore::Field {
    fn zero(&self) -> crate::polycore::Scalar {
        crate::polycore::Field::zero(self)
    }
    fn one(&self) -> crate::polycore::Scalar {
        crate::polycore::Field::one(self)
    }
    fn add(&self, a: &crate::polycore::Scalar, b: &crate::polycore::Scalar) -> crate::polycore::Scalar {
        crate::polycore::Field::add(self, a, b)
    }
    fn neg(&self, a: &crate::polycore::Scalar) -> crate::polycore::Scalar {
        crate::polycore::Field::neg(self, a)
    }
    fn mul(&self, a: &crate::polycore::Scalar, b: &crate::polycore::Scalar) -> crate::polycore::Scalar {
        crate::polycore::Field::mul(self, a, b)
    }
    fn inv(&self, a: &crate::polycore::Scalar) -> Option<crate::polycore::Scalar> {
        crate::polycore::Field::inv(self, a).ok()
    }
    fn is_zero(&self, a: &crate::polycore::Scalar) -> bool {
        a.is_zero()
    }
}

/// ℚ as a [`FieldOps`] context over `BigRational`.
pub struct RationalOps;

impl FieldOps<num_rational::BigRational> for RationalOps {
    fn zero(&self) -> num_rational::BigRational {
        num_traits::Zero::zero()
    }
    fn one(&self) -> num_rational::BigRational {
        num_traits::One::one()
    }
    fn add(&self, a: &num_rational::BigRational, b: &num_rational::BigRational) -> num_rational::BigRational {
        a + b
    }
    fn neg(&self, a: &num_rational::BigRational) -> num_rational::BigRational {
        -a
    }
    fn mul(&self, a: &num_rational::BigRational, b: &num_rational::BigRational) -> num_rational::BigRational {
        a * b
    }
    fn inv(&self, a: &num_rational::BigRational) -> Option<num_rational::BigRational> {
        if num_traits::Zero::is_zero(a) {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &num_rational::BigRational) -> bool {
        num_traits::Zero::is_zero(a)
    }
}
