//! Block-encodings: a unitary on `ancilla ⊗ system` whose top-left block,
//! divided into the ancilla `|0⟩` sector, reproduces `A / scale`.
//!
//! Register layout is fixed so that the encoded block is always the top-left
//! `D×D` slice: the ancilla index is the most-significant part of the row
//! index, the system index the least-significant.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, STRUCTURE_TOL};
use crate::pauli::PauliSum;
use crate::scalar::{cr, Real, C};

/// Tolerance used when a block-encoding is assembled from caller-supplied parts.
pub const COMPOSITE_UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BlockEncoding<T> {
    unitary: ComplexMatrix<T>,
    ancilla_dim: usize,
    system_dim: usize,
    scale: T,
    accuracy: T,
    cost: u64,
}

impl<T: Real> BlockEncoding<T> {
    /// Validates shapes and unitarity.
    pub fn from_parts(
        unitary: ComplexMatrix<T>,
        ancilla_dim: usize,
        system_dim: usize,
        scale: T,
        accuracy: T,
        cost: u64,
    ) -> Result<Self> {
        if ancilla_dim == 0 || system_dim == 0 || unitary.rows() != ancilla_dim * system_dim {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {}x{}, expected {}",
                unitary.rows(),
                unitary.cols(),
                ancilla_dim * system_dim
            )));
        }
        let dev = unitary.unitary_deviation();
        if dev > T::lit(COMPOSITE_UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
        }
        if !(scale > T::zero()) || !scale.is_finite() {
            return Err(Error::OutOfRange(format!("scale must be positive, got {scale}")));
        }
        if accuracy < T::zero() {
            return Err(Error::OutOfRange(format!("accuracy must be nonnegative, got {accuracy}")));
        }
        Ok(Self::assemble(unitary, ancilla_dim, system_dim, scale, accuracy, cost))
    }

    pub(crate) fn assemble(
        unitary: ComplexMatrix<T>,
        ancilla_dim: usize,
        system_dim: usize,
        scale: T,
        accuracy: T,
        cost: u64,
    ) -> Self {
        debug_assert_eq!(unitary.rows(), ancilla_dim * system_dim);
        Self { unitary, ancilla_dim, system_dim, scale, accuracy, cost }
    }

    /// A trivial encoding of a unitary: no ancilla, scale 1.
    pub fn encode_unitary(u: &ComplexMatrix<T>, cost: u64) -> Result<Self> {
        let dev = u.unitary_deviation();
        if dev > T::lit(STRUCTURE_TOL) {
            return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
        }
        Ok(Self::assemble(u.clone(), 1, u.rows(), T::one(), T::zero(), cost))
    }

    pub fn identity(system_dim: usize) -> Self {
        Self::assemble(ComplexMatrix::identity(system_dim), 1, system_dim, T::one(), T::zero(), 0)
    }

    /// Encodes `block` (a contraction) with one extra ancilla qubit through the
    /// unitary dilation. `scale`, `accuracy` and `cost` are recorded as given.
    pub fn from_contraction(block: &ComplexMatrix<T>, scale: T, accuracy: T, cost: u64) -> Result<Self> {
        let u = block.unitary_dilation()?;
        let d = block.rows();
        Self::from_parts(u, 2, d, scale, accuracy, cost)
    }

    /// Prepare/select/unprepare encoding of Σ βᵢPᵢ.
    pub fn encode_pauli_sum(sum: &PauliSum<T>) -> Result<Self> {
        if sum.is_empty() {
            return Err(Error::EmptySum);
        }
        let alpha = sum.scale();
        let d = sum.dim();
        let m = sum.len();
        let p = m.next_power_of_two();
        let amps: Vec<C<T>> = (0..p)
            .map(|i| match sum.terms().get(i) {
                Some(t) => cr((t.coefficient.abs() / alpha).sqrt()),
                None => C::zero(),
            })
            .collect();
        let prep = ComplexMatrix::unitary_with_first_column(&amps)?;
        let branches: Vec<ComplexMatrix<T>> = (0..p)
            .map(|i| match sum.terms().get(i) {
                Some(t) => t.word.matrix::<T>().scale_real(t.coefficient.signum()),
                None => ComplexMatrix::identity(d),
            })
            .collect();
        let u = prepare_select_unprepare(&prep, &branches);
        Ok(Self::assemble(u, p, d, alpha, T::zero(), m as u64))
    }

    pub fn unitary(&self) -> &ComplexMatrix<T> {
        &self.unitary
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn total_dim(&self) -> usize {
        self.ancilla_dim * self.system_dim
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn accuracy(&self) -> T {
        self.accuracy
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn with_accuracy(mut self, accuracy: T) -> Self {
        self.accuracy = accuracy;
        self
    }

    /// Same unitary read at a different scale: the encoded operator becomes
    /// `scale × block`.
    pub fn with_scale(mut self, scale: T) -> Self {
        assert!(scale > T::zero(), "scale must be positive");
        self.scale = scale;
        self
    }

    pub fn with_cost(mut self, cost: u64) -> Self {
        self.cost = cost;
        self
    }

    /// (⟨0|_k ⊗ I) U (|0⟩_k ⊗ I).
    pub fn encoded_block(&self) -> ComplexMatrix<T> {
        self.unitary.submatrix(0, 0, self.system_dim, self.system_dim)
    }

    /// scale × encoded block: the operator this encoding represents.
    pub fn encoded_operator(&self) -> ComplexMatrix<T> {
        self.encoded_block().scale_real(self.scale)
    }

    pub fn adjoint(&self) -> Self {
        Self { unitary: self.unitary.adjoint(), ..self.clone() }
    }

    /// Encoding of A₁A₂⋯Aₘ: each factor acts on its own ancilla register
    /// (registers concatenated in list order) and the shared system.
    pub fn product(encodings: &[Self]) -> Result<Self> {
        let first = encodings.first().ok_or(Error::EmptyList)?;
        if encodings.len() == 1 {
            return Ok(first.clone());
        }
        let d = first.system_dim;
        if let Some(bad) = encodings.iter().find(|b| b.system_dim != d) {
            return Err(Error::DimensionMismatch(format!(
                "system dimensions {} and {} differ",
                d, bad.system_dim
            )));
        }
        let dims: Vec<usize> = encodings.iter().map(|b| b.ancilla_dim).collect();
        let total_anc: usize = dims.iter().product();
        let mut acc: Option<ComplexMatrix<T>> = None;
        let mut left = 1usize;
        for (i, b) in encodings.iter().enumerate() {
            let right = total_anc / (left * dims[i]);
            let embedded = embed_register(&b.unitary, dims[i], left, right, d);
            acc = Some(match acc {
                None => embedded,
                Some(a) => a.matmul(&embedded),
            });
            left *= dims[i];
        }
        let scale = encodings.iter().fold(T::one(), |a, b| a * b.scale);
        let cost = checked_sum(encodings.iter().map(|b| b.cost))?;
        let errs: Vec<T> = encodings.iter().map(|b| b.accuracy).collect();
        Ok(Self::assemble(acc.expect("nonempty"), total_anc, d, scale, product_error_bound(&errs), cost))
    }

    /// Encoding of Σ βᵢAᵢ with scale Σ αᵢ|βᵢ|. A fresh prepare register sits in
    /// front of a single ancilla register shared by all inputs (padded to the
    /// largest input ancilla).
    pub fn linear_combine(coeffs: &[C<T>], encodings: &[Self]) -> Result<Self> {
        if coeffs.len() != encodings.len() {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: encodings.len() });
        }
        let first = encodings.first().ok_or(Error::EmptyList)?;
        let d = first.system_dim;
        if let Some(bad) = encodings.iter().find(|b| b.system_dim != d) {
            return Err(Error::DimensionMismatch(format!(
                "system dimensions {} and {} differ",
                d, bad.system_dim
            )));
        }
        let weights: Vec<T> = coeffs.iter().zip(encodings).map(|(c, b)| c.norm() * b.scale).collect();
        let total = weights.iter().fold(T::zero(), |a, &w| a + w);
        if !(total > T::zero()) {
            return Err(Error::OutOfRange("all linear-combination weights vanish".into()));
        }
        let m = encodings.len();
        let p = m.next_power_of_two();
        let k = encodings.iter().map(|b| b.ancilla_dim).max().unwrap_or(1);
        let amps: Vec<C<T>> = (0..p)
            .map(|i| weights.get(i).map_or(C::zero(), |&w| cr((w / total).sqrt())))
            .collect();
        let prep = ComplexMatrix::unitary_with_first_column(&amps)?;
        let branches: Vec<ComplexMatrix<T>> = (0..p)
            .map(|i| match encodings.get(i) {
                Some(b) => {
                    let phase = if coeffs[i].norm() > T::zero() { coeffs[i] / cr(coeffs[i].norm()) } else { C::one() };
                    pad_ancilla(&b.unitary, b.ancilla_dim, k, d).scale(phase)
                }
                None => ComplexMatrix::identity(k * d),
            })
            .collect();
        let u = prepare_select_unprepare(&prep, &branches);
        let accuracy = weights
            .iter()
            .zip(encodings)
            .fold(T::zero(), |a, (&w, b)| a + w / total * b.accuracy);
        let cost = checked_sum(encodings.iter().map(|b| b.cost))?;
        Ok(Self::assemble(u, p * k, d, total, accuracy, cost))
    }
}

/// Iterated two-factor bound ε₀ + ε₁ + 2√(ε₀ε₁), folded left.
pub fn product_error_bound<T: Real>(errors: &[T]) -> T {
    let two = T::lit(2.0);
    let mut it = errors.iter();
    let first = match it.next() {
        Some(&e) => e,
        None => return T::zero(),
    };
    it.fold(first, |acc, &e| acc + e + two * (acc * e).sqrt())
}

fn checked_sum(mut costs: impl Iterator<Item = u64>) -> Result<u64> {
    costs.try_fold(0u64, |a, c| a.checked_add(c)).ok_or(Error::CostOverflow)
}

/// (V†⊗I)·(Σᵢ |i⟩⟨i| ⊗ Sᵢ)·(V⊗I) without forming the Kronecker products.
fn prepare_select_unprepare<T: Real>(prep: &ComplexMatrix<T>, branches: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let p = prep.rows();
    let n = branches[0].rows();
    let mut out = ComplexMatrix::zeros(p * n, p * n);
    for i in 0..p {
        for j in 0..p {
            let mut blk = ComplexMatrix::zeros(n, n);
            for (mi, s) in branches.iter().enumerate() {
                let w = prep[(mi, i)].conj() * prep[(mi, j)];
                if w.norm() == T::zero() {
                    continue;
                }
                blk = &blk + &s.scale(w);
            }
            out.set_submatrix(i * n, j * n, &blk);
        }
    }
    out
}

/// Extends a unitary on (k_in ⊗ D) to (k_out ⊗ D) by acting as the identity
/// on the padded ancilla values.
fn pad_ancilla<T: Real>(u: &ComplexMatrix<T>, k_in: usize, k_out: usize, d: usize) -> ComplexMatrix<T> {
    if k_in == k_out {
        return u.clone();
    }
    let mut out = ComplexMatrix::identity(k_out * d);
    out.set_submatrix(0, 0, u);
    out
}

/// Places `u` (acting on `k ⊗ D`) into `L ⊗ k ⊗ R ⊗ D`, identity on L and R.
fn embed_register<T: Real>(
    u: &ComplexMatrix<T>,
    k: usize,
    left: usize,
    right: usize,
    d: usize,
) -> ComplexMatrix<T> {
    if left == 1 && right == 1 {
        return u.clone();
    }
    let n = left * k * right * d;
    let mut out = ComplexMatrix::zeros(n, n);
    let index = |l: usize, a: usize, r: usize, s: usize| ((l * k + a) * right + r) * d + s;
    for row in 0..k * d {
        let (a, s) = (row / d, row % d);
        for col in 0..k * d {
            let v = u[(row, col)];
            if v.is_zero() {
                continue;
            }
            let (a2, s2) = (col / d, col % d);
            for l in 0..left {
                for r in 0..right {
                    out[(index(l, a, r, s), index(l, a2, r, s2))] = v;
                }
            }
        }
    }
    out
}

/// The imaginary unit, handy for the anti-Hermitian part coefficients.
pub fn imag_unit<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}
