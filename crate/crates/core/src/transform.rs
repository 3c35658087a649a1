//! Block-encodings of functions of a Hermitian block: time evolution,
//! Chebyshev polynomials by alternating reflections, and bounded polynomials.

use crate::block::BlockEncoding;
use crate::cheb::{uniform_grid, values_at_extrema, ChebyshevPoly, CERT_GRID};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::pauli::PauliSum;
use crate::scalar::{cr, Real};

const HERMITIAN_BLOCK_TOL: f64 = 1e-8;
const POLY_BOUND_TOL: f64 = 1e-9;

/// Unit-constant cost formulas for a Hamiltonian with a scale-α, cost-Q encoding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostModel {
    pub q: f64,
    pub alpha: f64,
}

impl CostModel {
    pub fn new(q: f64, alpha: f64) -> Self {
        Self { q, alpha }
    }

    pub fn evolution(&self, t: f64, eps: f64) -> Result<f64> {
        evolution_cost(self.q, self.alpha, t, eps)
    }

    /// Evolution cost with 1/ln(e + ·) ≤ 1: Qα|t| + Q ln(1/ε).
    pub fn evolution_loose(&self, t: f64, eps: f64) -> f64 {
        self.q * self.alpha * t.abs() + self.q * (1.0 / eps).ln()
    }

    /// Q·n for T_n.
    pub fn chebyshev(&self, n: usize) -> f64 {
        self.q * n as f64
    }

    /// Q·d for a degree-d polynomial.
    pub fn polynomial(&self, d: usize) -> f64 {
        self.q * d as f64
    }
}

/// Qα|t| + Q ln(1/ε) / ln(e + ln(1/ε)/(α|t|)); zero at t = 0.
pub fn evolution_cost(q: f64, alpha: f64, t: f64, eps: f64) -> Result<f64> {
    if !(q >= 1.0) || !(alpha > 0.0) || !(eps > 0.0 && eps <= 1.0) || !t.is_finite() {
        return Err(Error::OutOfRange(format!(
            "evolution cost needs Q >= 1, alpha > 0, eps in (0,1], finite t; got Q={q}, alpha={alpha}, eps={eps}, t={t}"
        )));
    }
    let at = alpha * t.abs();
    if at == 0.0 {
        return Ok(0.0);
    }
    let l = (1.0 / eps).ln();
    Ok(q * at + q * l / (std::f64::consts::E + l / at).ln())
}

/// e^{iHt} as a scale-1 encoding without ancilla. The exponential is exact;
/// `eps` is recorded as the accuracy.
pub fn evolution_encoding<T: Real>(h: &PauliSum<T>, t: T, eps: T) -> Result<BlockEncoding<T>> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::OutOfRange(format!("eps must lie in (0,1), got {eps}")));
    }
    let cost = evolution_cost(h.len() as f64, h.scale().to_f64_lossy(), t.to_f64_lossy(), eps.to_f64_lossy())?;
    let u = h.matrix().expm_i_hermitian(t)?;
    Ok(BlockEncoding::encode_unitary(&u, cost.ceil() as u64)?.with_accuracy(eps))
}

fn hermitian_block<T: Real>(b: &BlockEncoding<T>) -> Result<ComplexMatrix<T>> {
    let block = b.encoded_block();
    let dev = block.hermitian_deviation();
    if dev > T::lit(HERMITIAN_BLOCK_TOL) {
        return Err(Error::NotHermitian { deviation: dev.to_f64_lossy() });
    }
    Ok(block.hermitian_part())
}

fn scaled_cost(units: usize, cost: u64) -> Result<u64> {
    let c = (units as u64).checked_mul(cost).ok_or(Error::CostOverflow)?;
    if c > i64::MAX as u64 {
        return Err(Error::CostOverflow);
    }
    Ok(c)
}

/// Exact encoding of T_n(A) from alternating U, U† and the ancilla reflection
/// R = 2|0⟩⟨0| ⊗ I − I: U(RU†RU)^{(n−1)/2} for odd n, (RU†RU)^{n/2} for even n.
/// The alternations are inherently sequential.
pub fn chebyshev_encoding<T: Real>(b: &BlockEncoding<T>, n: usize) -> Result<BlockEncoding<T>> {
    hermitian_block(b)?;
    if b.accuracy() != T::zero() {
        return Err(Error::InexactInput);
    }
    let cost = scaled_cost(n, b.cost())?;
    let dim = b.total_dim();
    let d = b.system_dim();
    let u = b.unitary();
    let ud = u.adjoint();
    // R·m: rows outside the |0⟩ ancilla block change sign.
    let reflect = |mut m: ComplexMatrix<T>| -> ComplexMatrix<T> {
        for r in d..dim {
            for c in 0..dim {
                m[(r, c)] = -m[(r, c)];
            }
        }
        m
    };
    let mut acc = ComplexMatrix::identity(dim);
    let pairs = n / 2;
    for _ in 0..pairs {
        acc = reflect(ud.matmul(&reflect(u.matmul(&acc))));
    }
    if n % 2 == 1 {
        acc = u.matmul(&acc);
    }
    BlockEncoding::from_parts(acc, b.ancilla_dim(), d, T::one(), T::zero(), cost)
}

/// True when |p| ≤ 1 (within 1e-9) at the 2d + 1 Chebyshev extrema and, for
/// moderate degree, on the uniform certification grid.
pub fn poly_bounded<T: Real>(p: &ChebyshevPoly<T>) -> (bool, T) {
    let m = (2 * p.degree()).max(1024);
    let mut worst = values_at_extrema(p.coeffs(), m)
        .into_iter()
        .fold(T::zero(), |a, v| a.max(v.abs()));
    if p.degree().saturating_mul(CERT_GRID) <= 500_000_000 {
        use rayon::prelude::*;
        let g = uniform_grid::<T>(CERT_GRID)
            .par_iter()
            .map(|&x| p.eval(x).abs())
            .reduce(T::zero, |a, b| a.max(b));
        worst = worst.max(g);
    }
    (worst <= T::one() + T::lit(POLY_BOUND_TOL), worst)
}

/// Encoding of p(A) with block p(A)/2, i.e. scale field 2. The polynomial is
/// applied on the spectrum of the block and the result is dilated over a
/// doubled copy of b's ancilla register.
pub fn apply_polynomial<T: Real>(b: &BlockEncoding<T>, p: &ChebyshevPoly<T>, delta: T) -> Result<BlockEncoding<T>> {
    let (ok, worst) = poly_bounded(p);
    if !ok {
        return Err(Error::PolyNotBounded { max: worst.to_f64_lossy() });
    }
    let a = hermitian_block(b)?;
    let cost = scaled_cost(p.degree(), b.cost())?;
    let half = T::lit(0.5);
    let pa_half = a.map_hermitian(|x| cr(p.eval(x.max(-T::one()).min(T::one())) * half))?;
    let k = b.ancilla_dim();
    let d = b.system_dim();
    let mut padded = ComplexMatrix::zeros(k * d, k * d);
    padded.set_submatrix(0, 0, &pa_half);
    let u = padded.unitary_dilation()?;
    BlockEncoding::from_parts(u, 2 * k, d, T::lit(2.0), delta, cost)
}
