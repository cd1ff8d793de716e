//! Scalar abstraction shared by every numerical module.
//!
//! All of the simulation, optimization and diagnostics code is written against
//! [`Real`], implemented for `f32` and `f64`. Dense eigendecompositions are the
//! one place where the crate hands work to `nalgebra`; that dispatch lives on
//! the trait so generic code never has to name nalgebra's own scalar traits.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<T>>,
}

/// Floating-point scalar used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Full eigendecomposition of a real symmetric `dim x dim` matrix given row-major.
    fn symmetric_eigen(dim: usize, row_major: &[Self]) -> SymmetricEigen<Self>;

    /// Ascending eigenvalues of a Hermitian `dim x dim` matrix given row-major.
    fn hermitian_eigenvalues(dim: usize, row_major: &[Complex<Self>]) -> Vec<Self>;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn symmetric_eigen(dim: usize, row_major: &[Self]) -> SymmetricEigen<Self> {
                assert_eq!(row_major.len(), dim * dim);
                let m = DMatrix::<$t>::from_row_slice(dim, dim, row_major);
                let eig = m.symmetric_eigen();
                let mut order: Vec<usize> = (0..dim).collect();
                order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
                SymmetricEigen {
                    values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
                    vectors: order
                        .iter()
                        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
                        .collect(),
                }
            }

            fn hermitian_eigenvalues(dim: usize, row_major: &[Complex<Self>]) -> Vec<Self> {
                assert_eq!(row_major.len(), dim * dim);
                let mut values: Vec<$t> = if row_major.iter().all(|z| z.im == 0.0) {
                    let re: Vec<$t> = row_major.iter().map(|z| z.re).collect();
                    DMatrix::<$t>::from_row_slice(dim, dim, &re)
                        .symmetric_eigenvalues()
                        .iter()
                        .copied()
                        .collect()
                } else {
                    DMatrix::<Complex<$t>>::from_row_slice(dim, dim, row_major)
                        .symmetric_eigenvalues()
                        .iter()
                        .copied()
                        .collect()
                };
                values.sort_by(|a, b| a.total_cmp(b));
                values
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// `exp(-i * angle)`.
#[inline]
pub(crate) fn cis_neg<T: Real>(angle: T) -> Complex<T> {
    let (s, c) = angle.sin_cos();
    Complex::new(c, -s)
}

/// Numerical floor used when a contract tolerance is tighter than the scalar
/// type can honor: `max(tol, eps * 1e3 * scale)`.
pub(crate) fn floor_tolerance<T: Real>(tol: f64, scale: T) -> T {
    let floor = T::epsilon() * cast::<T>(1e3) * scale.max(T::one());
    cast::<T>(tol).max(floor)
}
