//! Spatial discretization of (0,1) and the discrete sine transform pair.
//!
//! The interval is sampled at n interior nodes x_i = i·h, h = 1/(n+1), under
//! homogeneous Dirichlet conditions; the boundary values are implicit zeros,
//! so the composite trapezoid rule collapses to the weighted dot product
//! h·Σ u_i v_i. Under that quadrature the sine modes
//!
//!   φ_j(x) = √2 sin(jπx),  1 ≤ j ≤ n,
//!
//! are exactly orthonormal (a discrete identity, not an approximation), which
//! is what makes the forward/inverse transforms below exact round trips up to
//! rounding.

use crate::error::{Error, Result};
use crate::scalar::{cst, Scalar};

/// Uniform interior grid on (0,1) with quadrature weight `h = 1/(n+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid<T> {
    n: usize,
    h: T,
    x: Vec<T>,
}

impl<T: Scalar> SpatialGrid<T> {
    /// At least three interior nodes so second differences and a nontrivial
    /// mode set exist.
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!(
                "grid needs at least 3 interior nodes, got {n}"
            )));
        }
        let h = T::one() / cst::<T>((n + 1) as f64);
        let x = (1..=n).map(|i| h * cst::<T>(i as f64)).collect();
        Ok(SpatialGrid { n, h, x })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight and node spacing.
    pub fn spacing(&self) -> T {
        self.h
    }

    pub fn nodes(&self) -> &[T] {
        &self.x
    }

    pub fn node(&self, i: usize) -> T {
        self.x[i]
    }
}

/// Nodal values of a state y(x_i); boundary zeros are implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField<T> {
    values: Vec<T>,
}

impl<T: Scalar> StateField<T> {
    pub fn new(values: Vec<T>) -> Self {
        StateField { values }
    }

    pub fn zeros(n: usize) -> Self {
        StateField {
            values: vec![T::zero(); n],
        }
    }

    pub fn from_fn(grid: &SpatialGrid<T>, f: impl Fn(T) -> T) -> Self {
        StateField {
            values: grid.nodes().iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn scaled(&self, s: T) -> Self {
        StateField {
            values: self.values.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Coefficients c_j against φ_j, j = 1..=modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs<T> {
    values: Vec<T>,
}

impl<T: Scalar> SpectralCoeffs<T> {
    pub fn new(values: Vec<T>) -> Self {
        SpectralCoeffs { values }
    }

    pub fn modes(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }
}

fn check_len(len: usize, expected: usize) -> Result<()> {
    if len != expected {
        return Err(Error::DimensionMismatch { expected, got: len });
    }
    Ok(())
}

/// Trapezoid inner product ⟨u,v⟩ = h·Σ u_i v_i (implicit zero endpoints).
pub fn inner_product<T: Scalar>(
    u: &StateField<T>,
    v: &StateField<T>,
    grid: &SpatialGrid<T>,
) -> Result<T> {
    check_len(u.len(), grid.len())?;
    check_len(v.len(), grid.len())?;
    Ok(dot_weighted(u.values(), v.values(), grid.spacing()))
}

/// Induced norm ∥u∥ = √⟨u,u⟩.
pub fn l2_norm<T: Scalar>(u: &StateField<T>, grid: &SpatialGrid<T>) -> Result<T> {
    check_len(u.len(), grid.len())?;
    Ok(norm_weighted(u.values(), grid.spacing()))
}

#[inline]
pub(crate) fn dot_weighted<T: Scalar>(u: &[T], v: &[T], weight: T) -> T {
    debug_assert_eq!(u.len(), v.len());
    let s: T = u.iter().zip(v).map(|(&a, &b)| a * b).sum();
    weight * s
}

#[inline]
pub(crate) fn norm_weighted<T: Scalar>(u: &[T], weight: T) -> T {
    dot_weighted(u, u, weight).sqrt()
}

/// Precomputed sine mode table φ_j(x_i), row-major over modes.
///
/// `analyze`/`synthesize` and the free `to_spectral`/`from_spectral` share
/// this table, so both paths produce bit-identical results.
#[derive(Debug, Clone)]
pub struct SineBasis<T> {
    n: usize,
    modes: usize,
    phi: Vec<T>,
}

impl<T: Scalar> SineBasis<T> {
    /// Mode count is capped at n: beyond that the discrete modes alias.
    pub fn new(grid: &SpatialGrid<T>, modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::invalid("sine basis needs at least one mode"));
        }
        if modes > grid.len() {
            return Err(Error::config(format!(
                "requested {modes} sine modes on a grid with {} interior nodes; \
                 at most n modes are independent",
                grid.len()
            )));
        }
        let sqrt2 = cst::<T>(2.0).sqrt();
        let n = grid.len();
        let mut phi = Vec::with_capacity(modes * n);
        for j in 1..=modes {
            let jpi = cst::<T>(j as f64) * T::PI();
            for i in 0..n {
                phi.push(sqrt2 * (jpi * grid.node(i)).sin());
            }
        }
        Ok(SineBasis { n, modes, phi })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    fn row(&self, j: usize) -> &[T] {
        &self.phi[j * self.n..(j + 1) * self.n]
    }

    /// Forward transform: c_j = ⟨u, φ_j⟩.
    pub fn analyze(&self, u: &StateField<T>, grid: &SpatialGrid<T>) -> Result<SpectralCoeffs<T>> {
        check_len(u.len(), self.n)?;
        check_len(grid.len(), self.n)?;
        let c = (0..self.modes)
            .map(|j| dot_weighted(u.values(), self.row(j), grid.spacing()))
            .collect();
        Ok(SpectralCoeffs::new(c))
    }

    /// Inverse transform: u_i = Σ_j c_j φ_j(x_i).
    pub fn synthesize(&self, coeffs: &SpectralCoeffs<T>) -> Result<StateField<T>> {
        check_len(coeffs.modes(), self.modes)?;
        let mut out = vec![T::zero(); self.n];
        for (j, &cj) in coeffs.values().iter().enumerate() {
            for (o, &p) in out.iter_mut().zip(self.row(j)) {
                *o = *o + cj * p;
            }
        }
        Ok(StateField::new(out))
    }
}

/// Projection of `u` onto the first `modes` sine modes.
pub fn to_spectral<T: Scalar>(
    u: &StateField<T>,
    grid: &SpatialGrid<T>,
    modes: usize,
) -> Result<SpectralCoeffs<T>> {
    SineBasis::new(grid, modes)?.analyze(u, grid)
}

/// Reconstruction from sine coefficients; mode count must fit the grid.
pub fn from_spectral<T: Scalar>(
    coeffs: &SpectralCoeffs<T>,
    grid: &SpatialGrid<T>,
) -> Result<StateField<T>> {
    SineBasis::new(grid, coeffs.modes())?.synthesize(coeffs)
}
