//! Tensor-product Hilbert spaces of few-level atoms, state vectors, Hermitian
//! operators and exact propagation under piecewise-constant Hamiltonians.
//!
//! Every operator entry is an angular frequency in rad/μs and every time is in
//! μs, so `exp(-i H t)` needs no further unit handling.
//!
//! Flat indices are atom-major: the first atom of the basis is the most
//! significant digit and each atom's levels are enumerated in the order given
//! by its [`LevelScheme`].

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default cap on the product dimension accepted by [`ProductBasis::new`].
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Relative tolerance used when checking hermiticity at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Ordered level labels of one atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelScheme {
    atom_id: usize,
    levels: Vec<String>,
}

impl LevelScheme {
    pub fn new<I, S>(atom_id: usize, levels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let levels: Vec<String> = levels.into_iter().map(Into::into).collect();
        if levels.len() < 2 {
            return Err(Error::TooFewLevels(atom_id));
        }
        let mut seen = HashSet::new();
        for label in &levels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLevel {
                    atom: atom_id,
                    label: label.clone(),
                });
            }
        }
        Ok(Self { atom_id, levels })
    }

    pub fn atom_id(&self) -> usize {
        self.atom_id
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == label)
    }
}

/// Tensor product of per-atom level schemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductBasis {
    schemes: Vec<LevelScheme>,
    strides: Vec<usize>,
    dim: usize,
}

impl ProductBasis {
    pub fn new(schemes: Vec<LevelScheme>) -> Result<Self> {
        Self::with_cap(schemes, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(schemes: Vec<LevelScheme>, cap: usize) -> Result<Self> {
        if schemes.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let mut ids = HashSet::new();
        for s in &schemes {
            if !ids.insert(s.atom_id) {
                return Err(Error::DuplicateAtom(s.atom_id));
            }
        }
        let mut dim: usize = 1;
        for s in &schemes {
            dim = dim.saturating_mul(s.len());
            if dim > cap {
                return Err(Error::DimensionCap { dim, cap });
            }
        }
        let mut strides = vec![1; schemes.len()];
        for k in (0..schemes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * schemes[k + 1].len();
        }
        Ok(Self {
            schemes,
            strides,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_atoms(&self) -> usize {
        self.schemes.len()
    }

    pub fn schemes(&self) -> &[LevelScheme] {
        &self.schemes
    }

    pub fn stride(&self, position: usize) -> usize {
        self.strides[position]
    }

    /// Position of an atom within the tensor product.
    pub fn position(&self, atom_id: usize) -> Result<usize> {
        self.schemes
            .iter()
            .position(|s| s.atom_id == atom_id)
            .ok_or(Error::UnknownAtom(atom_id))
    }

    pub fn scheme(&self, atom_id: usize) -> Result<&LevelScheme> {
        Ok(&self.schemes[self.position(atom_id)?])
    }

    /// Level index of `label` on the atom with id `atom_id`.
    pub fn level_index(&self, atom_id: usize, label: &str) -> Result<usize> {
        self.scheme(atom_id)?
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel {
                atom: atom_id,
                label: label.to_string(),
            })
    }

    /// Level index of the atom at `position` in basis state `index`.
    #[inline]
    pub fn level_at(&self, index: usize, position: usize) -> usize {
        (index / self.strides[position]) % self.schemes[position].len()
    }

    /// Flat index of a configuration given as one label per atom, in basis order.
    pub fn index_of<S: AsRef<str>>(&self, config: &[S]) -> Result<usize> {
        if config.len() != self.schemes.len() {
            return Err(Error::ConfigurationLength {
                expected: self.schemes.len(),
                got: config.len(),
            });
        }
        let mut index = 0;
        for ((scheme, stride), label) in self.schemes.iter().zip(&self.strides).zip(config) {
            let level = scheme
                .index_of(label.as_ref())
                .ok_or_else(|| Error::UnknownLabel {
                    atom: scheme.atom_id,
                    label: label.as_ref().to_string(),
                })?;
            index += level * stride;
        }
        Ok(index)
    }

    /// Flat index of a configuration given as level indices.
    pub fn index_of_levels(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.schemes.len() {
            return Err(Error::ConfigurationLength {
                expected: self.schemes.len(),
                got: levels.len(),
            });
        }
        let mut index = 0;
        for (k, &level) in levels.iter().enumerate() {
            if level >= self.schemes[k].len() {
                return Err(Error::DimensionMismatch {
                    expected: self.schemes[k].len(),
                    got: level,
                });
            }
            index += level * self.strides[k];
        }
        Ok(index)
    }

    pub fn levels_of(&self, index: usize) -> Vec<usize> {
        (0..self.schemes.len())
            .map(|k| self.level_at(index, k))
            .collect()
    }

    pub fn labels_of(&self, index: usize) -> Vec<&str> {
        self.schemes
            .iter()
            .enumerate()
            .map(|(k, s)| s.levels[self.level_at(index, k)].as_str())
            .collect()
    }
}

impl fmt::Display for ProductBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .schemes
            .iter()
            .map(|s| format!("{}:{{{}}}", s.atom_id, s.levels.join(",")))
            .collect();
        write!(f, "{} (dim {})", parts.join(" x "), self.dim)
    }
}

/// Builds a shared product basis with the default dimension cap.
pub fn build_product_basis(schemes: Vec<LevelScheme>) -> Result<Arc<ProductBasis>> {
    ProductBasis::new(schemes).map(Arc::new)
}

fn same_basis(a: &Arc<ProductBasis>, b: &Arc<ProductBasis>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Complex amplitudes over a product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Arc<ProductBasis>,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn basis_state<S: AsRef<str>>(basis: &Arc<ProductBasis>, config: &[S]) -> Result<Self> {
        let index = basis.index_of(config)?;
        let mut amplitudes = DVector::zeros(basis.dim());
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            basis: Arc::clone(basis),
            amplitudes,
        })
    }

    /// Wraps raw amplitudes, normalizing them.
    pub fn from_amplitudes(basis: &Arc<ProductBasis>, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            basis: Arc::clone(basis),
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// Product state from one local amplitude vector per atom (basis order).
    pub fn product(basis: &Arc<ProductBasis>, locals: &[DVector<C64>]) -> Result<Self> {
        if locals.len() != basis.n_atoms() {
            return Err(Error::ConfigurationLength {
                expected: basis.n_atoms(),
                got: locals.len(),
            });
        }
        for (scheme, local) in basis.schemes().iter().zip(locals) {
            if local.len() != scheme.len() {
                return Err(Error::DimensionMismatch {
                    expected: scheme.len(),
                    got: local.len(),
                });
            }
        }
        let amplitudes = DVector::from_fn(basis.dim(), |i, _| {
            locals
                .iter()
                .enumerate()
                .fold(C64::new(1.0, 0.0), |acc, (k, v)| acc * v[basis.level_at(i, k)])
        });
        Self::from_amplitudes(basis, amplitudes)
    }

    /// Used by propagation, which preserves the norm by construction.
    pub(crate) fn from_raw(basis: Arc<ProductBasis>, amplitudes: DVector<C64>) -> Self {
        Self { basis, amplitudes }
    }

    pub fn basis(&self) -> &Arc<ProductBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            amplitudes: self.amplitudes.map(|a| a * factor),
        }
    }

    pub fn amplitude<S: AsRef<str>>(&self, config: &[S]) -> Result<C64> {
        Ok(self.amplitudes[self.basis.index_of(config)?])
    }

    /// `|<config|psi>|^2`.
    pub fn population<S: AsRef<str>>(&self, config: &[S]) -> Result<f64> {
        Ok(self.amplitude(config)?.norm_sqr())
    }

    /// `<psi|P|psi>` for an arbitrary (projector) matrix on the full space.
    pub fn expectation(&self, operator: &DMatrix<C64>) -> Result<C64> {
        if operator.nrows() != self.basis.dim() || operator.ncols() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                got: operator.nrows(),
            });
        }
        Ok(self.amplitudes.dotc(&(operator * &self.amplitudes)))
    }

    /// Probability that atom `atom_id` occupies level `label`.
    pub fn level_population(&self, atom_id: usize, label: &str) -> Result<f64> {
        let position = self.basis.position(atom_id)?;
        let level = self.basis.level_index(atom_id, label)?;
        Ok(level_population_raw(
            &self.basis,
            &self.amplitudes,
            position,
            level,
        ))
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(Error::BasisMismatch);
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }
}

pub(crate) fn level_population_raw(
    basis: &ProductBasis,
    amplitudes: &DVector<C64>,
    position: usize,
    level: usize,
) -> f64 {
    amplitudes
        .iter()
        .enumerate()
        .filter(|(i, _)| basis.level_at(*i, position) == level)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Population of a configuration.
pub fn population<S: AsRef<str>>(state: &StateVector, config: &[S]) -> Result<f64> {
    state.population(config)
}

/// `|<a|b>|^2`.
pub fn overlap_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Dense Hermitian matrix over a product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    basis: Arc<ProductBasis>,
    matrix: DMatrix<C64>,
}

/// Largest `|H_ij - conj(H_ji)|`.
pub fn hermitian_deviation(matrix: &DMatrix<C64>) -> f64 {
    let n = matrix.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
        }
    }
    worst
}

impl HermitianOperator {
    /// Checks `max |H - H^dagger| <= 1e-12 * max(1, max |H_ij|)`.
    pub fn new(basis: &Arc<ProductBasis>, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = basis.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        let scale = matrix.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
        let deviation = hermitian_deviation(&matrix);
        if !(deviation <= HERMITIAN_TOL * scale) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            basis: Arc::clone(basis),
            matrix,
        })
    }

    pub fn zeros(basis: &Arc<ProductBasis>) -> Self {
        Self {
            basis: Arc::clone(basis),
            matrix: DMatrix::zeros(basis.dim(), basis.dim()),
        }
    }

    pub fn basis(&self) -> &Arc<ProductBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            matrix: self.matrix.scale(factor),
        }
    }

    pub fn try_add(&self, other: &HermitianOperator) -> Result<Self> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(Error::BasisMismatch);
        }
        Ok(Self {
            basis: Arc::clone(&self.basis),
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// Adds a real value to one diagonal entry.
    pub fn add_diagonal(&mut self, index: usize, value: f64) {
        self.matrix[(index, index)] += C64::new(value, 0.0);
    }

    /// `P H P^T` for the permutation matrix sending basis state `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let dim = self.basis.dim();
        if perm.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: perm.len(),
            });
        }
        let mut out = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(perm[i], perm[j])] = self.matrix[(i, j)];
            }
        }
        Ok(Self {
            basis: Arc::clone(&self.basis),
            matrix: out,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| *z == C64::new(0.0, 0.0))
    }
}

impl Add for HermitianOperator {
    type Output = HermitianOperator;

    /// Panics if the operands live in different bases; see [`HermitianOperator::try_add`].
    fn add(self, rhs: HermitianOperator) -> HermitianOperator {
        self.try_add(&rhs).expect("operator bases differ")
    }
}

impl AddAssign<&HermitianOperator> for HermitianOperator {
    fn add_assign(&mut self, rhs: &HermitianOperator) {
        assert!(same_basis(&self.basis, &rhs.basis), "operator bases differ");
        self.matrix += &rhs.matrix;
    }
}

/// How [`embed_operator`] treats the local matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hermiticity {
    /// The local matrix must already be Hermitian.
    Require,
    /// Embed `local + local^dagger`.
    AddAdjoint,
}

/// Places `local` on the listed atoms and the identity on every other atom.
///
/// The local matrix is indexed atom-major in the order `atoms` is given, which
/// need not match the basis order.
pub fn embed_matrix(
    basis: &ProductBasis,
    atoms: &[usize],
    local: &DMatrix<C64>,
) -> Result<DMatrix<C64>> {
    let mut positions = Vec::with_capacity(atoms.len());
    for &a in atoms {
        let p = basis.position(a)?;
        if positions.contains(&p) {
            return Err(Error::DuplicateAtom(a));
        }
        positions.push(p);
    }
    let sizes: Vec<usize> = positions
        .iter()
        .map(|&p| basis.schemes()[p].len())
        .collect();
    let local_dim: usize = sizes.iter().product();
    if local.nrows() != local_dim || local.ncols() != local_dim {
        return Err(Error::DimensionMismatch {
            expected: local_dim,
            got: local.nrows().max(local.ncols()),
        });
    }

    // offset[l] is the flat-index contribution of local configuration l.
    let offsets: Vec<usize> = (0..local_dim)
        .map(|mut l| {
            let mut off = 0;
            for k in (0..positions.len()).rev() {
                off += (l % sizes[k]) * basis.stride(positions[k]);
                l /= sizes[k];
            }
            off
        })
        .collect();

    let dim = basis.dim();
    let mut out = DMatrix::zeros(dim, dim);
    for base in 0..dim {
        if positions.iter().any(|&p| basis.level_at(base, p) != 0) {
            continue;
        }
        for (r, &ro) in offsets.iter().enumerate() {
            for (c, &co) in offsets.iter().enumerate() {
                let v = local[(r, c)];
                if v != C64::new(0.0, 0.0) {
                    out[(base + ro, base + co)] += v;
                }
            }
        }
    }
    Ok(out)
}

pub fn embed_operator(
    basis: &Arc<ProductBasis>,
    atoms: &[usize],
    local: &DMatrix<C64>,
    mode: Hermiticity,
) -> Result<HermitianOperator> {
    let local = match mode {
        Hermiticity::Require => local.clone(),
        Hermiticity::AddAdjoint => local + local.adjoint(),
    };
    HermitianOperator::new(basis, embed_matrix(basis, atoms, &local)?)
}

/// Real symmetric form `[[A, −B], [B, A]]` of `H = A + iB`.
fn real_embedding(m: &DMatrix<C64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Symmetric eigendecomposition `m = Q diag(λ) Qᵀ`.
///
/// nalgebra's implicit-QR solver loses accuracy on block-structured
/// matrices with exact zeros and degenerate eigenvalues (exactly what pulse
/// Hamiltonians look like), so its output only seeds cyclic Jacobi sweeps,
/// which converge to working precision from any orthogonal start.
pub(crate) fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let seed = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 1000 * n.max(1))
        .map(|e| e.eigenvectors)
        .filter(|q| {
            let defect = q.tr_mul(q) - DMatrix::identity(n, n);
            q.iter().all(|x| x.is_finite()) && defect.amax() <= 1e-12
        })
        .unwrap_or_else(|| DMatrix::identity(n, n));
    let mut q = seed;
    let mut a = q.tr_mul(&(m * &q));
    jacobi_sweeps(&mut a, &mut q)?;
    Ok((a.diagonal(), q))
}

fn jacobi_sweeps(a: &mut DMatrix<f64>, q: &mut DMatrix<f64>) -> Result<()> {
    let n = a.nrows();
    let scale = a.norm().max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        let mut off = 0.0;
        for j in 0..n {
            for i in 0..j {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            return Ok(());
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = a[(p, r)];
                if apr.abs() <= 1e-18 * scale {
                    continue;
                }
                let theta = (a[(r, r)] - a[(p, p)]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akr) = (a[(k, p)], a[(k, r)]);
                    a[(k, p)] = c * akp - s * akr;
                    a[(k, r)] = s * akp + c * akr;
                }
                for k in 0..n {
                    let (apk, ark) = (a[(p, k)], a[(r, k)]);
                    a[(p, k)] = c * apk - s * ark;
                    a[(r, k)] = s * apk + c * ark;
                }
                a[(p, r)] = 0.0;
                a[(r, p)] = 0.0;
                for k in 0..n {
                    let (qkp, qkr) = (q[(k, p)], q[(k, r)]);
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
    }
    Err(Error::EigenFailure)
}

/// Spectral form of a Hermitian operator, reusable for many evolution times.
///
/// The decomposition runs on the real symmetric embedding of `H`, whose
/// spectrum is that of `H` with every eigenvalue doubled. Since the embedding
/// commutes with the embedded `i`, `exp(−iHt)` is read off from `cos` and
/// `sin` of it; no complex eigenvectors are needed, which keeps degenerate
/// spectra exact.
#[derive(Debug, Clone)]
pub struct Propagator {
    basis: Arc<ProductBasis>,
    /// Eigenvalues of the embedding (length 2·dim).
    lambda: DVector<f64>,
    /// Orthonormal eigenvectors of the embedding, as columns.
    q: DMatrix<f64>,
    eigenvalues: DVector<f64>,
}

impl Propagator {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        let dim = h.basis.dim();
        let (lambda, q) = symmetric_eigen(&real_embedding(&h.matrix))?;
        if lambda.iter().any(|e| !e.is_finite()) {
            return Err(Error::EigenFailure);
        }
        let mut sorted: Vec<f64> = lambda.iter().copied().collect();
        sorted.sort_by(f64::total_cmp);
        let eigenvalues = DVector::from_iterator(dim, sorted.iter().step_by(2).copied());
        Ok(Self {
            basis: Arc::clone(&h.basis),
            lambda,
            q,
            eigenvalues,
        })
    }

    /// Eigenvalues of `H`, ascending.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `exp(-i H t) |state>`.
    pub fn apply(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        if !same_basis(&self.basis, &state.basis) {
            return Err(Error::BasisMismatch);
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidTime(t));
        }
        if t == 0.0 {
            return Ok(state.clone());
        }
        let n = self.basis.dim();
        let psi = &state.amplitudes;
        let v = DVector::from_fn(2 * n, |i, _| if i < n { psi[i].re } else { psi[i - n].im });
        let w = self.q.tr_mul(&v);
        let cw = DVector::from_fn(2 * n, |k, _| (self.lambda[k] * t).cos() * w[k]);
        let sw = DVector::from_fn(2 * n, |k, _| (self.lambda[k] * t).sin() * w[k]);
        let c = &self.q * cw;
        let s = &self.q * sw;
        let out = DVector::from_fn(n, |i, _| C64::new(c[i] + s[n + i], c[n + i] - s[i]));
        Ok(StateVector::from_raw(Arc::clone(&self.basis), out))
    }

    /// Dense `exp(-i H t)`.
    pub fn unitary(&self, t: f64) -> DMatrix<C64> {
        let n = self.basis.dim();
        let weighted = |f: fn(f64) -> f64| {
            let mut scaled = self.q.clone();
            for (k, mut col) in scaled.column_iter_mut().enumerate() {
                col *= f(self.lambda[k] * t);
            }
            scaled * self.q.transpose()
        };
        let c = weighted(f64::cos);
        let s = weighted(f64::sin);
        DMatrix::from_fn(n, n, |i, j| {
            C64::new(c[(i, j)] + s[(n + i, j)], c[(n + i, j)] - s[(i, j)])
        })
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<DVector<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let n = m.nrows();
    let (lambda, _) = symmetric_eigen(&real_embedding(m))?;
    let mut sorted: Vec<f64> = lambda.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    Ok(DVector::from_iterator(n, sorted.iter().step_by(2).copied()))
}

/// `exp(-i H t) |state>` by Hermitian eigendecomposition.
pub fn evolve(state: &StateVector, h: &HermitianOperator, t: f64) -> Result<StateVector> {
    if !same_basis(&h.basis, &state.basis) {
        return Err(Error::BasisMismatch);
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidTime(t));
    }
    if t == 0.0 || h.is_zero() {
        return Ok(state.clone());
    }
    Propagator::new(h)?.apply(state, t)
}
